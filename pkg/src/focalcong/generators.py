"""Seeded constructions of plane congruences of every class.

Each recipe builds a chart in simple coordinates from the geometric
characterization of its class, checks the recipe's genericity side
conditions with engine operations, and finally moves the result by a random
projective transformation so corpora are not all in special position.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .chart import PlaneChart, Sampling, eval_frame, format_chart, sample_point, validate_chart
from .classifier import TEN_CLASSES, ClassLabel
from .errors import DegenerateChart, DegenerateCongruence, FocalError, GenerationFailed, SingularTransform
from .exact import Q, mat_det, mat_rank
from .focal import CharForms, characteristic_forms, focal_conic, line_family_foci
from .poly import U, V, Poly
from .projective import ProjLine, ProjPoint

GENERATED_CLASSES = TEN_CLASSES + (ClassLabel.IrreducibleConic,)

Vec = tuple  # five polynomials or scalars


@dataclass(frozen=True)
class GenSpec:
    target: ClassLabel
    seed: int = 0
    degree: int = 4
    height: int = 3
    attempts: int = 20

    def __post_init__(self):
        target = self.target
        if isinstance(target, str):
            target = ClassLabel.parse(target)
        if target not in GENERATED_CLASSES:
            raise ValueError(f"no generator for {target}")
        object.__setattr__(self, "target", target)
        if self.degree < 2:
            raise ValueError("degree bound must be at least 2")


@dataclass
class Generated:
    chart: PlaneChart
    expected: ClassLabel
    witness: dict


# -- random building blocks -----------------------------------------------------


def _int(rng: random.Random, h: int) -> int:
    return rng.randint(-h, h)


def rand_vector(rng, h, n=5) -> tuple[int, ...]:
    while True:
        v = tuple(_int(rng, h) for _ in range(n))
        if any(v):
            return v


def rand_invertible(rng, n, h=3) -> list[list[int]]:
    while True:
        m = [[_int(rng, h) for _ in range(n)] for _ in range(n)]
        if mat_det(m) != 0:
            return m


def rand_curve(rng, h, degree, var: Poly = U, n=5) -> Vec:
    """sum_k a_k t^k with random vectors a_k."""
    coeffs = [rand_vector(rng, h, n) for _ in range(degree + 1)]
    return tuple(sum((c[i] * var**k for k, c in enumerate(coeffs)), Poly()) for i in range(n))


def rand_map(rng, h, degree=2) -> Vec:
    """Random point map of total degree <= degree in (u, v)."""
    monos = [(i, d - i) for d in range(degree + 1) for i in range(d + 1)]
    return tuple(
        Poly({m: _int(rng, h) for m in monos}) for _ in range(5)
    )


def _diff(p: Vec, var: str) -> Vec:
    return tuple(c.diff(var) for c in p)


def _add(*vs: Vec) -> Vec:
    return tuple(sum(cs, Poly()) for cs in zip(*vs))


def _scale(p, v: Vec) -> Vec:
    return tuple(p * c for c in v)


def _const(v) -> Vec:
    return tuple(Poly.const(c) for c in v)


def _apply(m, vec: Sequence) -> tuple:
    return tuple(sum(m[i][j] * vec[j] for j in range(len(vec))) for i in range(len(m)))


def _rank_at(rng, maps: Sequence[Vec], target: int, tries: int = 3) -> bool:
    """Whether the point maps reach the given rank at a random base point."""
    sampling = Sampling()
    for _ in range(tries):
        base = sample_point(rng, sampling)
        if mat_rank([[c(*base) for c in m] for m in maps]) >= target:
            return True
    return False


# -- transformations ------------------------------------------------------------


@dataclass(frozen=True)
class Projective:
    matrix: tuple


@dataclass(frozen=True)
class Reparametrize:
    """u -> a*u + b*v + e, v -> c*u + d*v + f."""

    linear: tuple
    shift: tuple = (0, 0)


@dataclass(frozen=True)
class Respan:
    matrix: tuple


def transform_chart(chart: PlaneChart, action) -> PlaneChart:
    if isinstance(action, Projective):
        m = [[Q(x) for x in row] for row in action.matrix]
        if len(m) != 5 or mat_det(m) == 0:
            raise SingularTransform("projective transformation must be an invertible 5x5 matrix")
        return chart.with_points([_apply(m, p) for p in chart.points])
    if isinstance(action, Respan):
        m = [[Q(x) for x in row] for row in action.matrix]
        if len(m) != 3 or mat_det(m) == 0:
            raise SingularTransform("re-spanning matrix must be an invertible 3x3 matrix")
        pts = chart.points
        return chart.with_points(
            [tuple(sum((m[k][j] * pts[j][i] for j in range(3)), Poly()) for i in range(5)) for k in range(3)]
        )
    if isinstance(action, Reparametrize):
        (a, b), (c, d) = action.linear
        if Q(a) * Q(d) - Q(b) * Q(c) == 0:
            raise SingularTransform("affine reparametrization must be invertible")
        e, f = action.shift
        pu = U * Q(a) + V * Q(b) + Q(e)
        pv = U * Q(c) + V * Q(d) + Q(f)
        return chart.with_points([tuple(x.compose(pu, pv) for x in p) for p in chart.points])
    raise TypeError(f"unknown transformation {action!r}")


def random_projective(rng, h=3) -> Projective:
    return Projective(tuple(tuple(r) for r in rand_invertible(rng, 5, h)))


def random_respan(rng, h=3) -> Respan:
    return Respan(tuple(tuple(r) for r in rand_invertible(rng, 3, h)))


def random_reparametrization(rng, h=3) -> Reparametrize:
    lin = rand_invertible(rng, 2, h)
    return Reparametrize(tuple(tuple(r) for r in lin), (_int(rng, h), _int(rng, h)))


# -- recipes --------------------------------------------------------------------
#
# Each returns (maps, witness points, ok) in pre-transformation coordinates;
# witness points are constant vectors moved along with the chart.


def _cap(spec: GenSpec, k: int) -> int:
    return min(spec.degree, k)


def _delta(rng, spec):
    p1, p2 = rand_vector(rng, spec.height), rand_vector(rng, spec.height)
    m = rand_map(rng, spec.height, _cap(spec, 2))
    return (_const(p1), _const(p2), m), {"line": (p1, p2)}, mat_rank([p1, p2]) == 2


def _beta1(rng, spec):
    # translation surface: x_uv = 0, so the parameter lines are conjugate
    f = rand_curve(rng, spec.height, _cap(spec, 3), U)
    g = rand_curve(rng, spec.height, _cap(spec, 3), V)
    x = _add(f, g)
    xu, xv = _diff(x, "u"), _diff(x, "v")
    ok = _rank_at(rng, (x, xu, xv, _diff(xu, "u"), _diff(xv, "v")), 5)
    return (x, xu, xv), {}, ok


def _gamma1(rng, spec):
    # ruled surface: x_vv = 0, the rulings are asymptotic
    c = rand_curve(rng, spec.height, _cap(spec, 3), U)
    d = rand_curve(rng, spec.height, _cap(spec, 2), U)
    x = _add(c, _scale(V, d))
    xu, xv = _diff(x, "u"), _diff(x, "v")
    ok = _rank_at(rng, (x, xu, xv, _diff(xu, "u"), _diff(xu, "v")), 5)
    return (x, xu, xv), {}, ok


def _curve_jets(rng, spec):
    c = rand_curve(rng, spec.height, spec.degree, U)
    c1 = _diff(c, "u")
    return c, c1, _diff(c1, "u")


def _beta2(rng, spec):
    c, c1, c2 = _curve_jets(rng, spec)
    m = rand_map(rng, spec.height, _cap(spec, 2))
    # the pencil of planes through the tangent line must avoid the osculating plane
    ok = _rank_at(rng, (c, c1, m, _diff(m, "v"), c2), 5)
    return (c, c1, m), {}, ok


def _gamma2(rng, spec):
    c, c1, c2 = _curve_jets(rng, spec)
    w = rand_vector(rng, spec.height)
    ok = _rank_at(rng, (c, c1, c2, _const(w)), 4)
    return (c, c1, _add(c2, _scale(V, _const(w)))), {}, ok


def _embed(vec4: Vec) -> Vec:
    return tuple(vec4) + (Poly(),)


def _vertex(rng, spec):
    while True:
        p = rand_vector(rng, spec.height)
        if p[4]:
            return p


def _beta3(rng, spec):
    # lines joining points of two skew curves in X4 = 0: two foci per line
    f = _embed(rand_curve(rng, spec.height, _cap(spec, 2), U, n=4))
    g = _embed(rand_curve(rng, spec.height, _cap(spec, 2), V, n=4))
    p0 = _vertex(rng, spec)
    ok = _line_foci_count(rng, f, g) == 2
    return (_const(p0), f, g), {"vertex": p0}, ok


def _gamma3(rng, spec):
    # parabolic family: lines <a(u), v a'(u) + b(u)> with the single focus a(u)
    a = rand_curve(rng, spec.height, _cap(spec, 2), U, n=4)
    b = rand_curve(rng, spec.height, 1, U, n=4)
    second = _add(_scale(V, _diff(a, "u")), b)
    p0 = _vertex(rng, spec)
    a, second = _embed(a), _embed(second)
    ok = _line_foci_count(rng, a, second) == 1
    return (_const(p0), a, second), {"vertex": p0}, ok


def _line_foci_count(rng, a: Vec, b: Vec) -> int:
    chart = PlaneChart.from_maps(a, b, _const((0, 0, 0, 0, 1)))
    base = sample_point(rng, Sampling())
    try:
        frame = eval_frame(chart, base)
        return line_family_foci(frame.x, frame.y).count
    except FocalError:
        return -1


def _alpha1(rng, spec):
    x = rand_map(rng, spec.height, _cap(spec, 3))
    xu, xv = _diff(x, "u"), _diff(x, "v")
    xuu = _diff(xu, "u")
    ok = _rank_at(rng, (x, xu, xv, xuu, _diff(xu, "v")), 5)
    return (x, xu, xuu), {}, ok


def _alpha2(rng, spec):
    c = rand_curve(rng, spec.height, _cap(spec, 3), U)
    h = rand_map(rng, spec.height, _cap(spec, 2))
    hv = _diff(h, "v")
    ok = _rank_at(rng, (c, h, hv, _diff(hv, "v")), 4) and _rank_at(rng, (c, _diff(c, "u"), h, hv), 4)
    return (c, h, hv), {}, ok


def _alpha3(rng, spec):
    a = rand_curve(rng, spec.height, _cap(spec, 2), U)
    b = rand_curve(rng, spec.height, _cap(spec, 2), U)
    m = rand_map(rng, spec.height, _cap(spec, 2))
    # non-developable ruled surface, and m off its tangent planes
    ok = _rank_at(rng, (a, b, _diff(a, "u"), _diff(b, "u")), 4) and _rank_at(
        rng, (a, b, _diff(a, "u"), _diff(b, "u"), m), 5
    )
    return (a, b, m), {}, ok


def _irreducible(rng, spec):
    maps = tuple(rand_map(rng, spec.height, _cap(spec, 2)) for _ in range(3))
    chart = PlaneChart.from_maps(*maps)
    try:
        frame = eval_frame(chart, sample_point(rng, Sampling()))
    except FocalError:
        return maps, {}, False
    return maps, {}, focal_conic(characteristic_forms(frame)).rank == 3


_RECIPES: dict[ClassLabel, Callable] = {
    ClassLabel.Delta: _delta,
    ClassLabel.Beta1: _beta1,
    ClassLabel.Gamma1: _gamma1,
    ClassLabel.Beta2: _beta2,
    ClassLabel.Gamma2: _gamma2,
    ClassLabel.Beta3: _beta3,
    ClassLabel.Gamma3: _gamma3,
    ClassLabel.Alpha1: _alpha1,
    ClassLabel.Alpha2: _alpha2,
    ClassLabel.Alpha3: _alpha3,
    ClassLabel.IrreducibleConic: _irreducible,
}


def generate(spec: GenSpec) -> Generated:
    """Build a chart of class ``spec.target``, deterministic in its fields."""
    rng = random.Random(f"{spec.target.value}:{spec.seed}:{spec.degree}:{spec.height}")
    recipe = _RECIPES[spec.target]
    for _ in range(spec.attempts):
        maps, planted, ok = recipe(rng, spec)
        if not ok:
            continue
        T = rand_invertible(rng, 5)
        chart = transform_chart(PlaneChart.from_maps(*maps), Projective(T))
        try:
            if not validate_chart(chart, Sampling(seed=spec.seed), strict=False).ok:
                continue
        except (DegenerateChart, DegenerateCongruence):
            continue
        name = f"{spec.target.value.lower()}-{spec.seed}"
        chart = PlaneChart(chart.points, name=name, expected=spec.target.value)
        return Generated(chart, spec.target, _witness(planted, T))
    raise GenerationFailed(f"no {spec.target.value} chart within {spec.attempts} attempts")


def _witness(planted: dict, T) -> dict:
    out = {}
    if "line" in planted:
        p1, p2 = (_apply(T, p) for p in planted["line"])
        out["fixed_line"] = ProjLine.through(p1, p2).to_json()
    if "vertex" in planted:
        out["vertex"] = ProjPoint(_apply(T, planted["vertex"])).to_json()
    return out


def chart_file_text(g: Generated, seed: int) -> str:
    return format_chart(g.chart, comments=[f"generated {g.expected.value} seed {seed}"])


# -- engineered pencils ---------------------------------------------------------


def jordan_pencil_chart(seed: int, defective: bool) -> tuple[PlaneChart, tuple]:
    """Chart whose forms at (0, 0) satisfy f12 = l1 f11 + m1 f21, f22 = l2 f11 + m2 f21.

    The matrix A = ((l1, l2), (m1, m2)) is P J P^-1 with J a Jordan block when
    ``defective`` and a diagonal matrix with distinct entries otherwise.
    Returns the chart and A.
    """
    rng = random.Random(f"pencil:{seed}:{defective}")
    e = Fraction(_int(rng, 4))
    if defective:
        J = [[e, Fraction(1)], [Fraction(0), e]]
    else:
        e2 = e
        while e2 == e:
            e2 = Fraction(_int(rng, 4))
        J = [[e, Fraction(0)], [Fraction(0), e2]]
    P = [[Fraction(x) for x in row] for row in rand_invertible(rng, 2)]
    det = mat_det(P)
    P_inv = [[P[1][1] / det, -P[0][1] / det], [-P[1][0] / det, P[0][0] / det]]
    A = _matmul(_matmul(P, J), P_inv)
    (l1, l2), (m1, m2) = A
    while True:
        f11, f21 = rand_vector(rng, 3, 3), rand_vector(rng, 3, 3)
        if mat_rank([f11, f21]) == 2:
            break
    f12 = tuple(l1 * a + m1 * b for a, b in zip(f11, f21))
    f22 = tuple(l2 * a + m2 * b for a, b in zip(f11, f21))
    # x_k = e_k + u (f11_k e3 + f12_k e4) + v (f21_k e3 + f22_k e4); duals at the origin are e3, e4
    maps = []
    for k in range(3):
        coords = [Poly.const(1 if i == k else 0) for i in range(3)]
        coords.append(U * Q(f11[k]) + V * Q(f21[k]))
        coords.append(U * Q(f12[k]) + V * Q(f22[k]))
        maps.append(tuple(coords))
    return PlaneChart.from_maps(*maps), ((l1, l2), (m1, m2))


def jordan_pencil_forms(seed: int, defective: bool) -> CharForms:
    chart, _ = jordan_pencil_chart(seed, defective)
    return characteristic_forms(eval_frame(chart, (0, 0)))


def _matmul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(2)) for j in range(2)] for i in range(2)]


# -- one-parameter developable families -----------------------------------------

DEVELOPABLE_KINDS = ("ThroughLine", "ConeTangent", "CurveOsculating")


def developable_family(kind: str, seed: int, height: int = 3) -> tuple[PlaneChart, dict]:
    """A one-parameter plane family (chart in u only) of the given developable kind."""
    rng = random.Random(f"family:{kind}:{seed}")
    for _ in range(20):
        if kind == "ThroughLine":
            p1, p2 = rand_vector(rng, height), rand_vector(rng, height)
            m = rand_curve(rng, height, 3, U)
            maps, witness = (_const(p1), _const(p2), m), {"line": ProjLine.through(p1, p2)}
        elif kind == "ConeTangent":
            p0 = rand_vector(rng, height)
            h = rand_curve(rng, height, 3, U)
            maps, witness = (_const(p0), h, _diff(h, "u")), {"vertex": ProjPoint(p0)}
        elif kind == "CurveOsculating":
            c = rand_curve(rng, height, 4, U)
            c1 = _diff(c, "u")
            maps, witness = (c, c1, _diff(c1, "u")), {}
        else:
            raise ValueError(f"unknown developable kind {kind!r}")
        if _rank_at(rng, maps + (_diff(maps[2], "u"),), 4):
            return PlaneChart.from_maps(*maps), witness
    raise GenerationFailed(f"no {kind} family within 20 attempts")
