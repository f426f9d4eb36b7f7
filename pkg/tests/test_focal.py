import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import XBETA, XDELTA
from focalcong.chart import PlaneChart, eval_frame, parse_chart
from focalcong.errors import NotAPoint, WholeLineFocal
from focalcong.exact import BinaryForm, Jet2, mat_rank
from focalcong.focal import (
    LineLocus,
    PointLocus,
    WholePlane,
    characteristic_forms,
    classify_1dim_developable,
    developable_directions,
    focal_conic,
    focal_line_jets,
    focal_locus_for_direction,
    line_family_foci,
    oracle_is_focal,
    pencil_configuration,
    universal_focal_point,
)
from focalcong.generators import ClassLabel, GenSpec, Respan, generate, transform_chart
from focalcong.poly import poly_to_jet
from focalcong.projective import ProjLine, ProjPoint, coords_of, span_rank


def forms_at(text_or_chart, base=(1, 1)):
    chart = parse_chart(text_or_chart) if isinstance(text_or_chart, str) else text_or_chart
    return characteristic_forms(eval_frame(chart, base))


def proportional(a, b):
    return mat_rank([a, b]) == 1


# -- forms and conic --------------------------------------------------------------


def test_beta_forms():
    f = forms_at(XBETA)
    l1u, l1v, l2u, l2v = f.constants()
    # up to the scale of each dual: L1u ~ b, L2v ~ c, the others vanish
    assert proportional(l1u, (0, 1, 0)) and proportional(l2v, (0, 0, 1))
    assert not any(l1v) and not any(l2u)
    # with duals (1,-2,1,0,0), (1,0,0,-2,1) the forms are exactly 2b and 2c
    assert l1u[1] * l2v[2] == 4


def test_delta_forms():
    l1u, l1v, l2u, l2v = forms_at(XDELTA).constants()
    for form in (l1u, l1v, l2u, l2v):
        assert form[0] == form[1] == 0
    # each dual sees c through exactly one of u, v
    assert sorted([bool(l1u[2]), bool(l1v[2])]) == [False, True]


def test_constant_chart_has_zero_forms():
    chart = parse_chart("vars: u v\npoint: [1,0,0,0,0]\npoint: [0,1,0,0,0]\npoint: [0,0,1,0,0]\n")
    assert not any(any(f) for f in forms_at(chart).constants())


def test_conic_examples():
    delta = focal_conic(forms_at(XDELTA))
    assert delta.rank == 1
    assert delta.matrix[2][2] != 0 and sum(abs(x) for row in delta.matrix for x in row) == abs(delta.matrix[2][2])
    beta = focal_conic(forms_at(XBETA))
    assert beta.rank == 2
    assert beta.matrix == ((0, 0, 0), (0, 0, 2), (0, 2, 0))


def test_irreducible_generator_has_rank_three():
    g = generate(GenSpec(ClassLabel.IrreducibleConic, 1))
    f = forms_at(g.chart, (Fraction(1, 3), Fraction(2, 5)))
    assert focal_conic(f).rank == 3
    assert developable_directions(f).kind == "empty"


# -- directions and loci ----------------------------------------------------------


def test_direction_examples():
    assert developable_directions(forms_at(XDELTA)).kind == "all"
    d = developable_directions(forms_at(XBETA))
    assert d.kind == "finite" and d.gcd == BinaryForm([0, 1, 0])
    assert d.distinct_roots == 2 and not d.double
    assert set(d.rational_roots) == {(1, 0), (0, 1)}


def test_locus_examples():
    beta = forms_at(XBETA)
    point = focal_locus_for_direction(beta, (1, 1))
    assert isinstance(point, PointLocus) and proportional(point.coords, (1, 0, 0))
    assert focal_locus_for_direction(beta, (1, 0)) == LineLocus((0, 1, 0))
    delta = forms_at(XDELTA)
    for d in [(1, 0), (0, 1), (3, -7)]:
        assert focal_locus_for_direction(delta, d) == LineLocus((0, 0, 1))


def test_universal_point_of_translation_surface():
    frame = eval_frame(parse_chart(XBETA), (1, 1))
    P = frame.point(universal_focal_point(characteristic_forms(frame)))
    scale = P[0].value
    x = [poly_to_jet(c, (1, 1)) for c in parse_chart(XBETA).points[0]]
    # P is a jet multiple of x: every 2x2 minor of [P; x] vanishes as a jet
    for i in range(5):
        for j in range(5):
            assert (P[i] * x[j] - P[j] * x[i]).is_zero()
    assert scale != 0


def test_universal_point_of_cone(cone):
    frame = eval_frame(cone, (2, 3))
    P = frame.point(universal_focal_point(characteristic_forms(frame)))
    assert ProjPoint(coords_of(P)) == ProjPoint((0, 0, 0, 0, 1))
    # P is constant: its derivatives are multiples of P itself
    assert span_rank([coords_of(P), [x.du for x in P], [x.dv for x in P]]) == 1


def test_delta_has_no_universal_point():
    with pytest.raises(NotAPoint):
        universal_focal_point(forms_at(XDELTA))


# -- pencils ----------------------------------------------------------------------


def test_pencil_examples():
    assert pencil_configuration(forms_at(XBETA)).kind == "BothDegenerateDistinct"
    assert pencil_configuration(forms_at(XDELTA)).kind == "BothDegenerateCoincident"


@pytest.mark.parametrize("seed", range(4))
def test_jordan_pencils(seed):
    from focalcong.generators import jordan_pencil_chart

    chart, A = jordan_pencil_chart(seed, defective=True)
    f = forms_at(chart, (0, 0))
    pc = pencil_configuration(f)
    assert pc.kind == "SameBasePoint" and pc.eigen == "Double" and pc.disc == 0
    assert pc.A == A
    assert focal_conic(f).rank == 1
    d = developable_directions(f)
    assert d.gcd_degree == 2 and d.double


# -- focal lines ------------------------------------------------------------------


def test_delta_focal_line_is_fixed():
    for base in [(1, 1), (-2, 5)]:
        frame = eval_frame(parse_chart(XDELTA), base)
        k1, k2 = focal_line_jets(characteristic_forms(frame), (1, 2))
        A, B = frame.point(k1), frame.point(k2)
        assert ProjLine.through(A, B) == ProjLine.through((1, 0, 0, 0, 0), (0, 1, 0, 0, 0))


def test_beta_focal_line_along_u():
    frame = eval_frame(parse_chart(XBETA), (1, 1))
    k1, k2 = focal_line_jets(characteristic_forms(frame), (1, 0))
    A, B = frame.point(k1), frame.point(k2)
    # the line <x, x_v> at (1, 1)
    assert ProjLine.through(A, B) == ProjLine.through((1, 1, 1, 1, 1), (0, 0, 0, 1, 2))


# -- line families ----------------------------------------------------------------


def _line_jets(a, b, base):
    chart = PlaneChart.from_maps(a, b, (0, 0, 0, 0, 1))
    frame = eval_frame(chart, base)
    return frame.x, frame.y


def test_hyperbolic_line_family_has_two_foci():
    A, B = _line_jets(("1", "u", "0", "0", "0"), ("0", "0", "1", "v", "0"), (2, 3))
    foci = line_family_foci(A, B)
    assert foci.count == 2
    assert {f.coords for f in foci.foci} == {(0, 1), (1, 0)}


def test_parabolic_line_family_has_double_focus():
    A, B = _line_jets(("1", "u", "0", "0", "0"), ("0", "v", "1", "u", "0"), (2, 3))
    foci = line_family_foci(A, B)
    assert foci.count == 1 and foci.foci[0].multiplicity == 2
    assert foci.foci[0].coords == (1, 0)


def test_tangent_lines_focus_at_tangency():
    # tangent lines of (1, t, t^2, t^3, t^4) with a second parameter that does not move them:
    # the whole line is focal for the still direction, and c(t) is the focus along t
    A, B = _line_jets(("1", "u", "u^2", "u^3", "u^4"), ("0", "1", "2*u", "3*u^2", "4*u^3"), (2, 0))
    with pytest.raises(WholeLineFocal):
        line_family_foci(A, B)
    plane = [coords_of(A), coords_of(B)]
    assert span_rank(plane + [[x.du for x in A]]) == 2
    assert span_rank(plane + [[x.du for x in B]]) == 3


def test_constant_line_family():
    A, B = _line_jets(("1", "0", "0", "0", "0"), ("0", "1", "0", "0", "0"), (1, 1))
    with pytest.raises(WholeLineFocal):
        line_family_foci(A, B)


# -- oracle -----------------------------------------------------------------------


def test_oracle_examples():
    delta, beta = parse_chart(XDELTA), parse_chart(XBETA)
    assert oracle_is_focal(delta, (1, 1), (0, 1, 0), (2, 3))
    assert not oracle_is_focal(beta, (1, 1), (1, 1, 0), (1, 0))
    assert oracle_is_focal(beta, (1, 1), (1, 0, 5), (1, 0))


def _focal_by_forms(forms, coords, direction):
    r1, r2 = forms.rows(*direction)
    return all(sum(x.value * c for x, c in zip(r, coords)) == 0 for r in (r1, r2))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_forms_agree_with_oracle(seed):
    rng = random.Random(seed)
    label = rng.choice(list(ClassLabel)[:11])
    chart = generate(GenSpec(label, rng.randint(0, 50))).chart
    base = (Fraction(rng.randint(-9, 9), rng.randint(1, 4)), Fraction(rng.randint(-9, 9), rng.randint(1, 4)))
    forms = forms_at(chart, base)
    conic = focal_conic(forms)
    direction = (rng.randint(-3, 3), rng.randint(1, 3))
    # a point on the locus for this direction, when there is one, and a random point
    locus = focal_locus_for_direction(forms, direction)
    candidates = [tuple(rng.randint(-5, 5) for _ in range(3))]
    if isinstance(locus, PointLocus):
        candidates.append(locus.coords)
    for q in candidates:
        if not any(q):
            continue
        assert _focal_by_forms(forms, q, direction) == oracle_is_focal(chart, base, q, direction)
        if _focal_by_forms(forms, q, direction):
            assert conic(q) == 0


def test_respanning_transforms_conic_by_congruence(xbeta):
    R = ((1, 2, 0), (0, 1, -1), (3, 0, 1))
    moved = transform_chart(xbeta, Respan(R))
    base = (Fraction(1, 2), Fraction(3, 2))
    m0 = focal_conic(forms_at(xbeta, base))
    m1 = focal_conic(forms_at(moved, base))
    assert m0.rank == m1.rank == 2
    # Q = sum_k c_k * (R row k), so M1 = R M0 R^T up to the scale of the duals
    RT = [[R[j][i] for j in range(3)] for i in range(3)]
    cong = [[sum(R[i][k] * m0.matrix[k][l] * RT[l][j] for k in range(3) for l in range(3)) for j in range(3)] for i in range(3)]
    flat0 = [x for row in cong for x in row]
    flat1 = [x for row in m1.matrix for x in row]
    assert mat_rank([flat0, flat1]) == 1
    assert developable_directions(forms_at(moved, base)).gcd_degree == 2


# -- one-parameter families -------------------------------------------------------


def test_planes_through_a_line():
    curve = PlaneChart.from_maps((1, 0, 0, 0, 0), (0, 1, 0, 0, 0), ("0", "0", "1", "u", "u^2"))
    kind = classify_1dim_developable(curve)
    assert kind.kind == "ThroughLine"
    assert kind.line == ProjLine.through((1, 0, 0, 0, 0), (0, 1, 0, 0, 0))


def test_osculating_planes_of_normal_curve():
    c = ("1", "u", "u^2", "u^3", "u^4")
    c1 = ("0", "1", "2*u", "3*u^2", "4*u^3")
    c2 = ("0", "0", "2", "6*u", "12*u^2")
    assert classify_1dim_developable(PlaneChart.from_maps(c, c1, c2)).kind == "CurveOsculating"


def test_tangent_planes_to_cone():
    d = ("1", "u", "u^2", "u^3", "0")
    d1 = ("0", "1", "2*u", "3*u^2", "0")
    kind = classify_1dim_developable(PlaneChart.from_maps((0, 0, 0, 0, 1), d, d1))
    assert kind.kind == "ConeTangent" and kind.vertex == ProjPoint((0, 0, 0, 0, 1))


def test_non_developable_family():
    curve = PlaneChart.from_maps(("1", "u", "0", "0", "0"), ("0", "0", "1", "u^2", "0"), ("0", "0", "0", "u", "1"))
    assert classify_1dim_developable(curve).kind == "NotDevelopable"
