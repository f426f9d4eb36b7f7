"""Classification of plane congruences with degenerate focal conic.

Decision tree: generic conic rank and developable-direction pattern pick the
family (alpha / beta / gamma / delta); dimension estimates at generic samples
pick the subtype.  Every report carries a certificate that
:func:`certificate_check` re-derives from the chart alone.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Callable

from .chart import JetFrame, PlaneChart, Sampling, eval_frame, sample_point, validate_chart
from .errors import (
    CertificateFailed,
    DegenerateSpanAtBase,
    FocalError,
    InconsistentSample,
    NonGenericChart,
    NotALine,
    NotAPoint,
    PivotNotUnit,
    UnexpectedFocusDim,
    WholeLineFocal,
)
from .exact import Q, constant_part, format_q, jet_nullspace, mat_nullspace
from .focal import (
    CharForms,
    DirectionSet,
    FocalConic,
    characteristic_forms,
    developable_direction_jet,
    developable_directions,
    focal_conic,
    focal_line_jets,
    focus_point_jets,
    line_family_foci,
    oracle_is_focal,
    surface_second_forms,
    universal_focal_point,
)
from .projective import ProjLine, ProjPoint, coords_of, image_dim, span_rank


class ClassLabel(str, Enum):
    Alpha1 = "Alpha1"
    Alpha2 = "Alpha2"
    Alpha3 = "Alpha3"
    Beta1 = "Beta1"
    Beta2 = "Beta2"
    Beta3 = "Beta3"
    Gamma1 = "Gamma1"
    Gamma2 = "Gamma2"
    Gamma3 = "Gamma3"
    Delta = "Delta"
    IrreducibleConic = "IrreducibleConic"
    OutOfScopeFocalPlane = "OutOfScopeFocalPlane"
    DegenerateCongruence = "DegenerateCongruence"

    def __str__(self):
        return self.value

    @property
    def in_scope(self) -> bool:
        return self in TEN_CLASSES

    @classmethod
    def parse(cls, text: str) -> "ClassLabel":
        for label in cls:
            if label.value.lower() == text.strip().lower():
                return label
        raise ValueError(f"unknown class label {text!r}")


TEN_CLASSES = (
    ClassLabel.Alpha1,
    ClassLabel.Alpha2,
    ClassLabel.Alpha3,
    ClassLabel.Beta1,
    ClassLabel.Beta2,
    ClassLabel.Beta3,
    ClassLabel.Gamma1,
    ClassLabel.Gamma2,
    ClassLabel.Gamma3,
    ClassLabel.Delta,
)

# errors that mark a base point as non-generic for the branch being analysed
_SAMPLE_FAILURES = (DegenerateSpanAtBase, PivotNotUnit, NotAPoint, NotALine, WholeLineFocal)


@dataclass
class ClassReport:
    label: ClassLabel
    conic_rank: int | None
    directions: dict | None
    dims: dict
    certificate: dict
    samples: list[tuple[Fraction, Fraction]]
    seed: int
    resamples: int

    def to_json(self) -> dict:
        return {
            "label": self.label.value,
            "conic_rank": self.conic_rank,
            "directions": self.directions,
            "dims": self.dims,
            "certificate": self.certificate,
            "samples": [[format_q(u), format_q(v)] for u, v in self.samples],
            "seed": self.seed,
            "resamples": self.resamples,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    @classmethod
    def from_json(cls, data: dict) -> "ClassReport":
        return cls(
            ClassLabel(data["label"]),
            data["conic_rank"],
            data["directions"],
            data["dims"],
            data["certificate"],
            [(Q(u), Q(v)) for u, v in data["samples"]],
            data["seed"],
            data["resamples"],
        )


@dataclass
class SampleAnalysis:
    base: tuple[Fraction, Fraction]
    frame: JetFrame
    forms: CharForms
    conic: FocalConic
    dirs: DirectionSet
    branch: Any = None

    @property
    def pattern(self):
        return (self.conic.rank, self.dirs.kind, self.dirs.gcd_degree or 0, self.dirs.double)


def analyze_sample(chart: PlaneChart, base) -> SampleAnalysis:
    frame = eval_frame(chart, base)
    forms = characteristic_forms(frame)
    return SampleAnalysis(frame.base, frame, forms, focal_conic(forms), developable_directions(forms))


_KIND_ORDER = {"empty": 0, "finite": 1, "all": 2}


def _genericity(pattern):
    rank, kind, degree, double = pattern
    return (-rank, _KIND_ORDER[kind], degree, double)


def family_of(pattern) -> str:
    """Map a (rank, kind, gcd degree, double) pattern to a family name."""
    rank, kind, degree, double = pattern
    if rank == 0:
        return "focal_plane"
    if rank == 3 and kind == "empty":
        return "irreducible"
    if rank == 1 and kind == "all":
        return "delta"
    if rank == 2 and kind == "finite" and degree == 1:
        return "alpha"
    if rank == 2 and kind == "finite" and degree == 2 and not double:
        return "beta"
    if rank == 1 and kind == "finite" and degree == 2 and double:
        return "gamma"
    raise InconsistentSample(f"conic rank {rank} with direction pattern {kind}/{degree}/{double}")


# -- per-sample branch analyses -------------------------------------------------


@dataclass
class DeltaData:
    line: ProjLine
    stationary: bool


def delta_sample(a: SampleAnalysis) -> DeltaData:
    k1, k2 = focal_line_jets(a.forms, (1, 1))
    A, B = a.frame.point(k1), a.frame.point(k2)
    derivs = [[x.d_du() for x in A], [x.d_dv() for x in A], [x.d_du() for x in B], [x.d_dv() for x in B]]
    return DeltaData(ProjLine.through(A, B), span_rank([A, B] + derivs) == 2)


@dataclass
class UniversalData:
    coords: tuple
    P: tuple
    dim: int


def universal_sample(a: SampleAnalysis) -> UniversalData:
    coords = universal_focal_point(a.forms, a.dirs)
    P = a.frame.point(coords)
    dim = image_dim(P, [[x.d_du() for x in P], [x.d_dv() for x in P]])
    return UniversalData(coords, P, dim)


@dataclass
class AlphaData:
    A: tuple
    B: tuple
    p_R: int
    focus: tuple | None = None
    p_F1R: int | None = None


_LINE_PARAMS = (Fraction(2), Fraction(-1, 3))


def alpha_sample(a: SampleAnalysis) -> AlphaData:
    direction = developable_direction_jet(a.forms, a.dirs.rational_root)
    k1, k2 = focal_line_jets(a.forms, direction)
    A, B = a.frame.point(k1), a.frame.point(k2)
    p_R = 0
    for t in _LINE_PARAMS:
        value = [x + t * y for x, y in zip(A, B)]
        du = [x.d_du() + t * y.d_du() for x, y in zip(A, B)]
        dv = [x.d_dv() + t * y.d_dv() for x, y in zip(A, B)]
        p_R = max(p_R, image_dim(value, [du, dv, B]))
    data = AlphaData(A, B, p_R)
    if p_R == 3:
        F = focus_point_jets(A, B)
        data.focus = F
        data.p_F1R = image_dim(F, [[x.d_du() for x in F], [x.d_dv() for x in F]])
    return data


def _sigma_surface(a: SampleAnalysis, u: UniversalData):
    sf = surface_second_forms(u.P)
    tangent_ok = span_rank(list(a.frame.spanning) + [u.P, [x.d_du() for x in u.P], [x.d_dv() for x in u.P]]) == 3
    return tangent_ok, sf


def _sigma_curve(a: SampleAnalysis, u: UniversalData):
    P = coords_of(u.P)
    Pu, Pv = [x.du for x in u.P], [x.dv for x in u.P]
    if span_rank([P, Pu]) == 2:
        d1, d2 = Pu, [x.duu for x in u.P]
    else:
        d1, d2 = Pv, [x.dvv for x in u.P]
    plane = [coords_of(p) for p in a.frame.spanning]
    tangent = span_rank(plane + [P, d1]) == 3
    # planes through the same tangent line: move the plane along the fiber of P
    kernel = mat_nullspace([list(col) for col in zip(P, Pu, Pv)])
    _, k1, k2 = kernel[0]
    moved = [[k1 * x + k2 * y for x, y in zip(du, dv)] for du, dv in zip(a.frame.du, a.frame.dv)]
    fiber_space = plane + [coords_of(m) for m in moved]
    osculating = span_rank(fiber_space + [d2]) == span_rank(fiber_space)
    return ProjLine.through(P, d1), tangent, osculating


def _sigma_vertex(a: SampleAnalysis, u: UniversalData):
    vertex = coords_of(u.P)
    k = next(i for i, x in enumerate(vertex) if x)
    row = [[p[k] for p in a.frame.spanning]]
    k1, k2 = jet_nullspace(row)
    A, B = a.frame.point(k1), a.frame.point(k2)
    return k, line_family_foci(A, B)


# -- sampling -------------------------------------------------------------------


class _Sampler:
    def __init__(self, chart: PlaneChart, sampling: Sampling, rng: random.Random):
        self.chart = chart
        self.sampling = sampling
        self.rng = rng
        self.rejected = 0

    def reject(self):
        self.rejected += 1
        if self.rejected > self.sampling.budget:
            raise NonGenericChart(f"resample budget of {self.sampling.budget} exhausted")

    def draw(self, pattern=None, branch: Callable | None = None) -> SampleAnalysis:
        while True:
            base = sample_point(self.rng, self.sampling)
            try:
                a = analyze_sample(self.chart, base)
                if pattern is not None and a.pattern != pattern:
                    self.reject()
                    continue
                if branch is not None:
                    a.branch = branch(a)
                return a
            except _SAMPLE_FAILURES:
                self.reject()


def _directions_json(d: DirectionSet) -> dict:
    out: dict = {"kind": d.kind, "gcd_degree": d.gcd_degree, "double": d.double}
    if d.rational_root is not None:
        out["root"] = [format_q(x) for x in d.rational_root]
    return out


_BRANCH_FN = {
    "delta": delta_sample,
    "alpha": alpha_sample,
    "beta": universal_sample,
    "gamma": universal_sample,
}


def classify(chart: PlaneChart, sampling: Sampling = Sampling(), check: bool = True) -> ClassReport:
    rng = sampling.rng()
    validation = validate_chart(chart, sampling, rng, strict=False)
    if not validation.ok:
        return ClassReport(
            ClassLabel.DegenerateCongruence,
            None,
            None,
            _dims(),
            {"realization_dim": validation.realization_dim},
            [],
            sampling.seed,
            validation.resamples,
        )
    sampler = _Sampler(chart, sampling, rng)
    first = [sampler.draw() for _ in range(sampling.samples)]
    pattern = min((a.pattern for a in first), key=_genericity)
    family = family_of(pattern)
    branch = _BRANCH_FN.get(family)
    analyses = []
    for a in first:
        if a.pattern != pattern:
            sampler.reject()
            continue
        if branch is not None:
            try:
                a.branch = branch(a)
            except _SAMPLE_FAILURES:
                sampler.reject()
                continue
        analyses.append(a)
    while len(analyses) < sampling.samples:
        analyses.append(sampler.draw(pattern, branch))

    label, dims, certificate = _decide(family, analyses)
    report = ClassReport(
        label,
        max(a.conic.rank for a in analyses),
        _directions_json(analyses[0].dirs),
        dims,
        certificate,
        [a.base for a in analyses],
        sampling.seed,
        validation.resamples + sampler.rejected,
    )
    if check and label.in_scope:
        for name, ok in certificate_check(chart, report, analyses):
            if not ok:
                raise CertificateFailed(name)
    return report


def _dims(sigma_prime=None, p_R=None, p_F1R=None) -> dict:
    return {"sigma_prime": sigma_prime, "p_R": p_R, "p_F1R": p_F1R}


def _point_json(v) -> list[str]:
    return ProjPoint(coords_of(v)).to_json()


def _decide(family: str, analyses: list[SampleAnalysis]):
    if family == "irreducible":
        return ClassLabel.IrreducibleConic, _dims(), {}
    if family == "focal_plane":
        return ClassLabel.OutOfScopeFocalPlane, _dims(), {}
    if family == "delta":
        return ClassLabel.Delta, _dims(), {"fixed_line": analyses[0].branch.line.to_json()}
    if family == "alpha":
        return _decide_alpha(analyses)
    return _decide_universal(family, analyses)


def _decide_alpha(analyses):
    p_R = max(a.branch.p_R for a in analyses)
    if p_R == 2:
        first = analyses[0].branch
        return (
            ClassLabel.Alpha3,
            _dims(p_R=2),
            {"ruled_surface_witness": {"p_R": 2, "generator": ProjLine.through(first.A, first.B).to_json()}},
        )
    if p_R != 3:
        raise UnexpectedFocusDim(f"focal lines sweep a variety of dimension {p_R}")
    with_focus = [a.branch for a in analyses if a.branch.p_F1R is not None]
    p_F1R = max(b.p_F1R for b in with_focus)
    point = _point_json(with_focus[0].focus)
    if p_F1R == 2:
        return (
            ClassLabel.Alpha1,
            _dims(p_R=3, p_F1R=2),
            {"surface_dim2_witness": {"p_R": 3, "p_F1R": 2, "focus_point": point}},
        )
    if p_F1R == 1:
        return (
            ClassLabel.Alpha2,
            _dims(p_R=3, p_F1R=1),
            {"vertex_curve_witness": {"p_R": 3, "p_F1R": 1, "vertex": point}},
        )
    raise UnexpectedFocusDim(f"foci of the focal-line family have dimension {p_F1R}")


_SUBTYPES = {
    ("beta", 2): ClassLabel.Beta1,
    ("beta", 1): ClassLabel.Beta2,
    ("beta", 0): ClassLabel.Beta3,
    ("gamma", 2): ClassLabel.Gamma1,
    ("gamma", 1): ClassLabel.Gamma2,
    ("gamma", 0): ClassLabel.Gamma3,
}


def _decide_universal(family, analyses):
    sigma_prime = max(a.branch.dim for a in analyses)
    label = _SUBTYPES[family, sigma_prime]
    first = analyses[0]
    point = _point_json(first.branch.P)
    if sigma_prime == 2:
        tangent_ok, sf = _sigma_surface(first, first.branch)
        counts = [_sigma_surface(a, a.branch)[1].asymptotic_count for a in analyses]
        cert = {
            "surface_point": point,
            "tangent_ok": tangent_ok,
            "asymptotic_count": min(counts),
        }
    elif sigma_prime == 1:
        line, tangent, osc = _sigma_curve(first, first.branch)
        cert = {
            "curve_point": point,
            "tangent_line": line.to_json(),
            "tangent_contained": tangent,
            "osculating_contained": all(_sigma_curve(a, a.branch)[2] for a in analyses),
        }
    else:
        k, foci = _sigma_vertex(first, first.branch)
        all_foci = [_sigma_vertex(a, a.branch)[1] for a in analyses]
        cert = {
            "vertex": point,
            "hyperplane": k,
            "per_line_focus_count": max(f.count for f in all_foci),
            "focus_multiplicity": max(max((x.multiplicity for x in f.foci), default=0) for f in all_foci),
        }
    return label, _dims(sigma_prime=sigma_prime), cert


# -- certificate checking -------------------------------------------------------


def _reanalyze(chart, report, branch):
    out = []
    for base in report.samples:
        a = analyze_sample(chart, base)
        if branch is not None:
            a.branch = branch(a)
        out.append(a)
    return out


def certificate_check(chart: PlaneChart, report: ClassReport, analyses=None) -> list[tuple[str, bool]]:
    """Re-derive the certificate of ``report`` from the chart at its samples.

    Returns named Boolean checks; a False entry means classification and
    certificate disagree.  ``analyses`` may pass precomputed sample data.
    """
    label = report.label
    family = {"A": "alpha", "B": "beta", "G": "gamma", "D": "delta"}.get(label.value[0])
    if family is None or not label.in_scope:
        return []
    if analyses is None:
        try:
            analyses = _reanalyze(chart, report, _BRANCH_FN[family])
        except FocalError as exc:
            return [(f"resample:{type(exc).__name__}", False)]
    cert = report.certificate
    checks: list[tuple[str, bool]] = []
    patterns_ok = all(family_of(a.pattern) == family for a in analyses)
    checks.append(("direction_pattern", patterns_ok))

    if family == "delta":
        lines = [a.branch.line for a in analyses]
        checks.append(("conic_rank_1_every_sample", all(a.conic.rank == 1 for a in analyses)))
        checks.append(("focal_line_constant", all(l == lines[0] for l in lines)))
        checks.append(("focal_line_stationary", all(a.branch.stationary for a in analyses)))
        checks.append(("fixed_line_matches", lines[0].to_json() == cert.get("fixed_line")))
        return checks

    if family == "alpha":
        p_R = max(a.branch.p_R for a in analyses)
        checks.append(("p_R", p_R == report.dims["p_R"]))
        if p_R == 3:
            p_F1R = max(a.branch.p_F1R for a in analyses if a.branch.p_F1R is not None)
            checks.append(("p_F1R", p_F1R == report.dims["p_F1R"]))
            # the focus lies on the focal line of every sample
            checks.append(
                (
                    "focus_on_focal_line",
                    all(
                        span_rank([a.branch.A, a.branch.B, a.branch.focus]) == 2
                        for a in analyses
                        if a.branch.focus is not None
                    ),
                )
            )
        return checks

    # beta / gamma
    singular = all(not any(a.conic.apply(a.branch.coords)) for a in analyses)
    checks.append(("universal_point_singular", singular))
    checks.append(("universal_point_focal", all(_focal_for_all(chart, a) for a in analyses)))
    sigma_prime = max(a.branch.dim for a in analyses)
    checks.append(("sigma_prime", sigma_prime == report.dims["sigma_prime"]))
    first = analyses[0]
    if sigma_prime == 2:
        surf = [_sigma_surface(a, a.branch) for a in analyses]
        count = min(sf.asymptotic_count for _, sf in surf)
        checks.append(("tangent_plane", all(ok for ok, _ in surf) and cert.get("tangent_ok") is True))
        checks.append(("asymptotic_count", count == cert.get("asymptotic_count")))
        checks.append(("asymptotic_structure", count == (0 if family == "beta" else 1)))
    elif sigma_prime == 1:
        curve = [_sigma_curve(a, a.branch) for a in analyses]
        checks.append(("tangent_line_contained", all(t for _, t, _ in curve)))
        if family == "gamma":
            checks.append(("osculating_plane_contained", all(o for _, _, o in curve)))
    else:
        vertices = [ProjPoint(coords_of(a.branch.P)) for a in analyses]
        checks.append(("vertex_fixed", all(v == vertices[0] for v in vertices)))
        checks.append(("vertex_matches", vertices[0].to_json() == cert.get("vertex")))
        foci = [_sigma_vertex(a, a.branch)[1] for a in analyses]
        count = max(f.count for f in foci)
        checks.append(("per_line_focus_count", count == cert.get("per_line_focus_count")))
        checks.append(("focus_count_matches_family", count == (2 if family == "beta" else 1)))
    return checks


def _focal_for_all(chart, a: SampleAnalysis) -> bool:
    coords = [constant_part(x) for x in a.branch.coords]
    return all(oracle_is_focal(chart, a.base, coords, d) for d in ((1, 0), (0, 1), (2, -3)))
