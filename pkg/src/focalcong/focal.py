"""First- and second-order focal computations on a jet frame.

The characteristic forms of a frame are four linear forms on the moving
plane, in plane coordinates (a:b:c) of Q = a*x + b*y + c*z:

    L1u(Q) = N1 . Q_u,   L1v(Q) = N1 . Q_v,
    L2u(Q) = N2 . Q_u,   L2v(Q) = N2 . Q_v.

Q is focal for the direction (lam:mu) iff lam*L1u + mu*L1v and
lam*L2u + mu*L2v both vanish at Q.  The forms carry jet coefficients, so
everything solved from them (universal focal point, focal lines, foci of the
focal-line family) comes out with its own u, v derivatives.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd as igcd
from typing import Iterator, Sequence

from .chart import JetFrame, PlaneChart, Sampling, eval_frame
from .errors import (
    DegenerateChart,
    DegenerateSpanAtBase,
    NonGenericChart,
    NotALine,
    NotAPoint,
    PivotNotUnit,
    WholeLineFocal,
    ZeroPencil,
)
from .exact import (
    ONE,
    ZERO,
    AllOfP1,
    BinaryForm,
    Jet2,
    Q,
    as_jet,
    binform_disc,
    binform_gcd,
    constant_part,
    dot,
    double_root,
    jet_nullspace,
    mat_nullspace,
    mat_rank,
    normalize_direction,
)
from .projective import ProjLine, ProjPoint, coords_of, image_dim, span_rank

JetVec = tuple[Jet2, ...]


@dataclass(frozen=True)
class CharForms:
    l1u: JetVec
    l1v: JetVec
    l2u: JetVec
    l2v: JetVec

    @classmethod
    def from_constants(cls, l1u, l1v, l2u, l2v) -> "CharForms":
        return cls(*(tuple(Jet2.const(x) for x in f) for f in (l1u, l1v, l2u, l2v)))

    def constants(self):
        return tuple(
            tuple(constant_part(x) for x in f) for f in (self.l1u, self.l1v, self.l2u, self.l2v)
        )

    def rows(self, lam, mu):
        """The two forms lam*L1u + mu*L1v and lam*L2u + mu*L2v."""
        return (
            tuple(lam * a + mu * b for a, b in zip(self.l1u, self.l1v)),
            tuple(lam * a + mu * b for a, b in zip(self.l2u, self.l2v)),
        )


def characteristic_forms(frame: JetFrame) -> CharForms:
    xu, yu, zu = frame.du
    xv, yv, zv = frame.dv
    return CharForms(
        tuple(dot(frame.n1, d) for d in (xu, yu, zu)),
        tuple(dot(frame.n1, d) for d in (xv, yv, zv)),
        tuple(dot(frame.n2, d) for d in (xu, yu, zu)),
        tuple(dot(frame.n2, d) for d in (xv, yv, zv)),
    )


# -- focal conic ----------------------------------------------------------------


@dataclass(frozen=True)
class FocalConic:
    matrix: tuple[tuple[Fraction, ...], ...]
    rank: int

    def __call__(self, coords) -> Fraction:
        q = [Q(c) for c in coords]
        return sum(
            (self.matrix[i][j] * q[i] * q[j] for i in range(3) for j in range(3)), ZERO
        )

    def apply(self, coords) -> tuple[Fraction, ...]:
        q = [constant_part(c) for c in coords]
        return tuple(sum(m * x for m, x in zip(row, q)) for row in self.matrix)


def focal_conic(forms: CharForms) -> FocalConic:
    """Symmetric matrix of L1u*L2v - L1v*L2u."""
    a, b, c, d = forms.constants()  # l1u, l1v, l2u, l2v
    m = tuple(
        tuple((a[i] * d[j] + a[j] * d[i] - b[i] * c[j] - b[j] * c[i]) / 2 for j in range(3))
        for i in range(3)
    )
    return FocalConic(m, mat_rank(m))


# -- developable directions -----------------------------------------------------


def _form_minors(r1, s1, r2, s2):
    """2x2 minors of [lam*r1 + mu*s1; lam*r2 + mu*s2] as (lam^2, lam*mu, mu^2) triples."""
    out = []
    for j, k in combinations(range(3), 2):
        out.append(
            (
                r1[j] * r2[k] - r1[k] * r2[j],
                r1[j] * s2[k] + s1[j] * r2[k] - r1[k] * s2[j] - s1[k] * r2[j],
                s1[j] * s2[k] - s1[k] * s2[j],
            )
        )
    return out


def direction_minors(forms: CharForms) -> list[BinaryForm]:
    a, b, c, d = forms.constants()
    return [BinaryForm(m) for m in _form_minors(a, b, c, d)]


@dataclass(frozen=True)
class DirectionSet:
    kind: str  # "empty" | "finite" | "all"
    gcd: BinaryForm | None = None
    distinct_roots: int | None = None
    double: bool = False
    rational_root: tuple[Fraction, Fraction] | None = None
    rational_roots: tuple[tuple[Fraction, Fraction], ...] = ()

    @property
    def gcd_degree(self) -> int | None:
        if self.kind == "all":
            return None
        return 0 if self.gcd is None else self.gcd.degree

    def contains(self, lam, mu) -> bool:
        if self.kind == "all":
            return True
        if self.kind == "empty":
            return False
        return self.gcd(lam, mu) == 0


def direction_set_from_gcd(g) -> DirectionSet:
    if g is AllOfP1:
        return DirectionSet("all")
    if g.degree == 0:
        return DirectionSet("empty", gcd=g)
    if g.degree == 1:
        root = g.rational_roots()[0]
        return DirectionSet("finite", g, 1, False, root, (root,))
    if binform_disc(g) == 0:
        root = normalize_direction(*double_root(g))
        return DirectionSet("finite", g, 1, True, root, (root,))
    return DirectionSet("finite", g, 2, False, None, tuple(g.rational_roots()))


def developable_directions(forms: CharForms) -> DirectionSet:
    return direction_set_from_gcd(binform_gcd(direction_minors(forms)))


# -- focal loci -----------------------------------------------------------------


@dataclass(frozen=True)
class EmptyLocus:
    pass


@dataclass(frozen=True)
class PointLocus:
    coords: tuple[Fraction, Fraction, Fraction]


@dataclass(frozen=True)
class LineLocus:
    form: tuple[Fraction, Fraction, Fraction]  # the line is form . (a, b, c) = 0


@dataclass(frozen=True)
class WholePlane:
    pass


def focal_locus_for_direction(forms: CharForms, direction):
    lam, mu = Q(direction[0]), Q(direction[1])
    if lam == 0 and mu == 0:
        raise ValueError("direction must be nonzero")
    r1, r2 = forms.rows(lam, mu)
    rows = [tuple(constant_part(x) for x in r) for r in (r1, r2)]
    rank = mat_rank(rows)
    if rank == 2:
        (k,) = mat_nullspace(rows)
        return PointLocus(k)
    if rank == 1:
        form = rows[0] if any(rows[0]) else rows[1]
        return LineLocus(_normalized(form))
    return WholePlane()


def _normalized(v):
    lead = next(x for x in v if x)
    return tuple(x / lead for x in v)


def generic_directions(limit: int = 40) -> Iterator[tuple[Fraction, Fraction]]:
    """(1:1), (1:2), (2:1), (1:3), (3:1), (1:4), (2:3), ... by increasing p + q."""
    n, count = 2, 0
    while count < limit:
        for p in range(1, n):
            q = n - p
            if igcd(p, q) == 1:
                yield (Fraction(p), Fraction(q))
                count += 1
        n += 1


def universal_focal_point(forms: CharForms, dirs: DirectionSet | None = None) -> tuple[Jet2, ...]:
    """Plane coordinates (as jets) of the point focal for every direction."""
    dirs = dirs or developable_directions(forms)
    if dirs.kind != "finite":
        raise NotAPoint(f"direction set is {dirs.kind}")
    found = []
    for d in generic_directions():
        if dirs.contains(*d):
            continue
        locus = focal_locus_for_direction(forms, d)
        if isinstance(locus, PointLocus):
            found.append((d, locus))
            if len(found) == 2:
                break
    if len(found) < 2:
        raise NotAPoint("generic directions do not give point loci")
    (d1, p1), (_, p2) = found
    if mat_rank([p1.coords, p2.coords]) != 1:
        raise NotAPoint("the focal point moves with the direction")
    kernel = jet_nullspace(forms.rows(*d1))
    if len(kernel) != 1:
        raise PivotNotUnit("generic-direction locus is not a point in the jet ring")
    return kernel[0]


# -- pencils --------------------------------------------------------------------


@dataclass(frozen=True)
class PencilConfig:
    kind: str  # OneDegenerate | BothDegenerateDistinct | BothDegenerateCoincident
    #            | DistinctBasePoints | SameBasePoint
    A: tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]] | None = None
    disc: Fraction | None = None
    eigen: str | None = None  # TwoDistinct | Double | All
    swapped: bool = False  # True when A expresses the first pencil in the second


def _cross(a, b):
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def _express(h, g1, g2):
    """Coefficients (s, t) with h = s*g1 + t*g2 (h assumed in the span)."""
    for i, j in combinations(range(3), 2):
        det = g1[i] * g2[j] - g1[j] * g2[i]
        if det:
            s = (h[i] * g2[j] - h[j] * g2[i]) / det
            t = (g1[i] * h[j] - g1[j] * h[i]) / det
            return s, t
    raise ValueError("forms g1, g2 are proportional")


def pencil_configuration(forms: CharForms) -> PencilConfig:
    f11, f21, f12, f22 = forms.constants()
    h1, h2 = (f11, f21), (f12, f22)
    for pencil in (h1, h2):
        if not any(pencil[0]) and not any(pencil[1]):
            raise ZeroPencil("a pencil has both forms zero")
    deg1 = mat_rank(h1) == 1
    deg2 = mat_rank(h2) == 1
    if deg1 and deg2:
        line1 = f11 if any(f11) else f21
        line2 = f12 if any(f12) else f22
        if mat_rank([line1, line2]) == 1:
            return PencilConfig("BothDegenerateCoincident")
        return PencilConfig("BothDegenerateDistinct")
    if deg1 or deg2:
        line = (f11 if any(f11) else f21) if deg1 else (f12 if any(f12) else f22)
        other = h2 if deg1 else h1
        base = _cross(*other)
        if sum(a * b for a, b in zip(line, base)) != 0:
            return PencilConfig("OneDegenerate")
        return _same_base(h2 if deg1 else h1, h1 if deg1 else h2, swapped=deg1)
    if mat_rank([_cross(*h1), _cross(*h2)]) == 2:
        return PencilConfig("DistinctBasePoints")
    return _same_base(h1, h2, swapped=False)


def _same_base(g, h, swapped):
    lam1, mu1 = _express(h[0], *g)
    lam2, mu2 = _express(h[1], *g)
    A = ((lam1, lam2), (mu1, mu2))
    disc = (mu2 - lam1) ** 2 + 4 * mu1 * lam2
    if mu1 == 0 and lam2 == 0 and lam1 == mu2:
        eigen = "All"
    elif disc == 0:
        eigen = "Double"
    else:
        eigen = "TwoDistinct"
    return PencilConfig("SameBasePoint", A, disc, eigen, swapped)


# -- jet-valued roots and focal lines ---------------------------------------------


def _eval_quadratic(coeffs, t):
    a, b, c = coeffs
    return (a * t + b) * t + c


def _newton_root(coeffs, t0, iterations=3):
    """Refine the simple root t0 of a*t^2 + b*t + c (jet coefficients) to a jet."""
    a, b, _ = coeffs
    t = as_jet(t0)
    for _ in range(iterations):
        g = _eval_quadratic(coeffs, t)
        dg = 2 * a * t + b
        t = t - g / dg
    return t


_COMBINATIONS = ((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1), (1, 2, 3), (3, -1, 2), (2, 5, -3))


def _common_root_jet(minors, root):
    """Jet-valued common root of quadratic binary forms with jet coefficients.

    ``root`` is the constant root (lam0:mu0).  Works in the affine chart
    where the root is finite and Newton-refines a combination of the minors
    that has it as a simple root.
    """
    lam0, mu0 = Q(root[0]), Q(root[1])
    if mu0 != 0:
        t0 = lam0 / mu0
        # form(t, 1): coefficients of t^2, t, 1
        polys = [(m[0], m[1], m[2]) for m in minors]
        pack = lambda t: (t, Jet2.const(1, t.order))  # noqa: E731
    else:
        t0 = mu0 / lam0
        polys = [(m[2], m[1], m[0]) for m in minors]
        pack = lambda t: (Jet2.const(1, t.order), t)  # noqa: E731
    for w in _COMBINATIONS:
        comb = tuple(sum((wi * p[k] for wi, p in zip(w, polys)), as_jet(0)) for k in range(3))
        c0 = [constant_part(x) for x in comb]
        if any(c0) and _eval_quadratic(c0, t0) == 0 and 2 * c0[0] * t0 + c0[1] != 0:
            break
    else:
        raise PivotNotUnit("root is not simple for any combination of the minors")
    t = _newton_root(comb, t0)
    for p in polys:
        if not _eval_quadratic(p, t).is_zero():
            raise PivotNotUnit("common root does not persist near the base point")
    return pack(t)


def developable_direction_jet(forms: CharForms, root) -> tuple[Jet2, Jet2]:
    """The developable direction through ``root`` as a jet in (u, v)."""
    return _common_root_jet(_form_minors(forms.l1u, forms.l1v, forms.l2u, forms.l2v), root)


def focal_line_jets(forms: CharForms, direction) -> tuple[JetVec, JetVec]:
    """Plane coordinates of two points spanning the focal line for ``direction``.

    ``direction`` may be constant or jet-valued (see developable_direction_jet).
    """
    lam, mu = direction
    kernel = jet_nullspace(forms.rows(lam, mu))
    if len(kernel) != 2:
        raise NotALine(f"focal locus has kernel dimension {len(kernel)}")
    return kernel[0], kernel[1]


# -- foci of a two-parameter family of lines ------------------------------------


@dataclass(frozen=True)
class Focus:
    coords: tuple[Fraction, Fraction] | None  # (a:b) on the line aA + bB; None if irrational
    multiplicity: int


@dataclass(frozen=True)
class LineFoci:
    gcd: BinaryForm
    count: int
    foci: tuple[Focus, ...]


def _line_focus_minors(A: JetVec, B: JetVec):
    duals = jet_nullspace([A, B])
    if len(duals) != 3:
        raise DegenerateSpanAtBase("line points are dependent")
    Au, Av = tuple(x.d_du() for x in A), tuple(x.d_dv() for x in A)
    Bu, Bv = tuple(x.d_du() for x in B), tuple(x.d_dv() for x in B)
    pu = [(dot(n, Au), dot(n, Bu)) for n in duals]
    pv = [(dot(n, Av), dot(n, Bv)) for n in duals]
    out = []
    for i, j in combinations(range(3), 2):
        out.append(
            (
                pu[i][0] * pv[j][0] - pu[j][0] * pv[i][0],
                pu[i][0] * pv[j][1] + pu[i][1] * pv[j][0] - pu[j][0] * pv[i][1] - pu[j][1] * pv[i][0],
                pu[i][1] * pv[j][1] - pu[j][1] * pv[i][1],
            )
        )
    return out


def line_family_foci(A: Sequence, B: Sequence) -> LineFoci:
    """Foci on the line <A, B> of the two-parameter line family A(u,v), B(u,v).

    q = aA + bB is focal iff the 3x2 matrix [N_i . q_u, N_i . q_v] has rank
    <= 1; the common roots (a:b) of its 2x2 minors are the foci.
    """
    A, B = tuple(map(as_jet, A)), tuple(map(as_jet, B))
    minors = [BinaryForm([constant_part(x) for x in m]) for m in _line_focus_minors(A, B)]
    g = binform_gcd(minors)
    if g is AllOfP1:
        raise WholeLineFocal("every point of the line is focal")
    if g.degree == 0:
        return LineFoci(g, 0, ())
    if g.degree == 1:
        return LineFoci(g, 1, (Focus(g.rational_roots()[0], 1),))
    if binform_disc(g) == 0:
        return LineFoci(g, 1, (Focus(normalize_direction(*double_root(g)), 2),))
    roots = g.rational_roots()
    foci = tuple(Focus(r, 1) for r in roots) or (Focus(None, 1), Focus(None, 1))
    return LineFoci(g, 2, foci)


def focus_point_jets(A: Sequence, B: Sequence) -> tuple[Jet2, ...]:
    """Jets of the unique simple focus aA + bB of a line family."""
    A, B = tuple(map(as_jet, A)), tuple(map(as_jet, B))
    minors = _line_focus_minors(A, B)
    g = binform_gcd([BinaryForm([constant_part(x) for x in m]) for m in minors])
    if g is AllOfP1:
        raise WholeLineFocal("every point of the line is focal")
    if g.degree != 1:
        raise NotAPoint(f"line family has focal gcd of degree {g.degree}")
    a, b = _common_root_jet(minors, g.rational_roots()[0])
    return tuple(a * x + b * y for x, y in zip(A, B))


# -- oracle ---------------------------------------------------------------------


def oracle_is_focal(chart: PlaneChart, base, coords, direction) -> bool:
    """rank[x; y; z; lam*Q_u + mu*Q_v] <= 3, from polynomial derivatives directly."""
    u0, v0 = Q(base[0]), Q(base[1])
    lam, mu = Q(direction[0]), Q(direction[1])
    w = [Q(c) for c in coords]
    span = chart.evaluate(u0, v0)
    move = []
    for k in range(5):
        qu = sum((wi * p[k].diff("u")(u0, v0) for wi, p in zip(w, chart.points)), ZERO)
        qv = sum((wi * p[k].diff("v")(u0, v0) for wi, p in zip(w, chart.points)), ZERO)
        move.append(lam * qu + mu * qv)
    return mat_rank(span + [tuple(move)]) <= 3


# -- surfaces -------------------------------------------------------------------


@dataclass(frozen=True)
class SurfaceForms:
    """Second fundamental forms of a surface jet, in directions (du:dv)."""

    tangent_rank: int
    forms: tuple[BinaryForm, ...]

    @property
    def asymptotic(self):
        return binform_gcd(self.forms)

    @property
    def asymptotic_count(self) -> int:
        g = self.asymptotic
        return 2 if g is AllOfP1 else g.degree

    @property
    def pencil_rank(self) -> int:
        return mat_rank([f.coeffs for f in self.forms])


def surface_second_forms(x: Sequence[Jet2]) -> SurfaceForms:
    pt = [j.value for j in x]
    xu = [j.du for j in x]
    xv = [j.dv for j in x]
    rank = mat_rank([pt, xu, xv])
    duals = mat_nullspace([pt, xu, xv])
    xuu = [j.duu for j in x]
    xuv = [j.duv for j in x]
    xvv = [j.dvv for j in x]
    forms = tuple(BinaryForm([dot(n, xuu), 2 * dot(n, xuv), dot(n, xvv)]) for n in duals)
    return SurfaceForms(rank, forms)


# -- one-parameter families -----------------------------------------------------


@dataclass(frozen=True)
class DevelopableKind:
    kind: str  # NotDevelopable | ThroughLine | ConeTangent | CurveOsculating
    line: ProjLine | None = None
    vertex: ProjPoint | None = None


def _curve_sample(frame: JetFrame):
    forms = characteristic_forms(frame)
    rows = (forms.l1u, forms.l2u)
    return rows, mat_rank([[constant_part(x) for x in r] for r in rows])


def classify_1dim_developable(curve, sampling: Sampling = Sampling()) -> DevelopableKind:
    """Prop. on 1-dim developable plane families: line / cone / osculating.

    ``curve`` is a PlaneChart (or three point maps) in the single parameter u.
    """
    chart = curve if isinstance(curve, PlaneChart) else PlaneChart.from_maps(*curve)
    if any(not c.diff("v").is_zero() for p in chart.points for c in p):
        raise ValueError("a curve chart depends on u only")
    rng = sampling.rng()
    samples, rejected = [], 0
    while len(samples) < sampling.samples:
        t0 = Fraction(rng.randint(-sampling.num_bound, sampling.num_bound), rng.randint(1, sampling.den_bound))
        try:
            frame = eval_frame(chart, (t0, 0))
            rows, rank = _curve_sample(frame)
            if rank == 1:
                A, B = (frame.point(k) for k in jet_nullspace(rows))
            samples.append((frame, rows, rank, (A, B) if rank == 1 else None))
        except (DegenerateSpanAtBase, PivotNotUnit):
            rejected += 1
            if rejected > sampling.budget:
                raise NonGenericChart("resample budget exhausted")
    ranks = [s[2] for s in samples]
    if max(ranks) == 2:
        return DevelopableKind("NotDevelopable")
    if max(ranks) == 0:
        raise DegenerateChart("the plane does not move")
    s = Fraction(3, 5)
    line_dim = 0
    for _, _, _, (A, B) in samples:
        value = [a + s * b for a, b in zip(A, B)]
        deriv = [a.d_du() + s * b.d_du() for a, b in zip(A, B)]
        line_dim = max(line_dim, image_dim(value, [deriv, B]))
    A, B = samples[0][3]
    if line_dim == 1:
        return DevelopableKind("ThroughLine", line=ProjLine.through(A, B))
    focus_dim = 0
    first_focus = None
    for _, _, _, (A, B) in samples:
        duals = jet_nullspace([A, B])
        cols = [(dot(n, tuple(a.d_du() for a in A)), dot(n, tuple(b.d_du() for b in B))) for n in duals]
        kernel = jet_nullspace(cols)
        if len(kernel) != 1:
            raise NonGenericChart("focal line family has no second-order focus")
        a, b = kernel[0]
        F = tuple(a * x + b * y for x, y in zip(A, B))
        first_focus = first_focus or F
        focus_dim = max(focus_dim, image_dim(F, [[x.d_du() for x in F]]))
    if focus_dim == 0:
        return DevelopableKind("ConeTangent", vertex=ProjPoint(coords_of(first_focus)))
    return DevelopableKind("CurveOsculating")
