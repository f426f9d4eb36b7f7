import random
from fractions import Fraction

import pytest

from focalcong.chart import Sampling, eval_frame, format_chart, parse_chart, validate_chart
from focalcong.classifier import ClassLabel, classify
from focalcong.errors import GenerationFailed, SingularTransform
from focalcong.focal import classify_1dim_developable, line_family_foci
from focalcong.generators import (
    DEVELOPABLE_KINDS,
    GENERATED_CLASSES,
    GenSpec,
    Projective,
    Reparametrize,
    Respan,
    chart_file_text,
    developable_family,
    generate,
    jordan_pencil_chart,
    transform_chart,
)
from focalcong.projective import ProjLine

IDENTITY5 = tuple(tuple(int(i == j) for j in range(5)) for i in range(5))
IDENTITY3 = tuple(tuple(int(i == j) for j in range(3)) for i in range(3))


@pytest.mark.parametrize("label", GENERATED_CLASSES)
def test_round_trip_small(label):
    for seed in range(3):
        g = generate(GenSpec(label, seed))
        assert g.expected == label
        assert classify(g.chart).label == label


@pytest.mark.parametrize("label", GENERATED_CLASSES)
def test_generated_charts_validate(label):
    g = generate(GenSpec(label, 4))
    result = validate_chart(g.chart, Sampling(seed=11))
    assert result.ok and result.realization_dim == 4


def test_generate_is_deterministic():
    for label in GENERATED_CLASSES:
        a = generate(GenSpec(label, 12)).chart
        b = generate(GenSpec(label, 12)).chart
        assert format_chart(a) == format_chart(b)
    assert generate(GenSpec("Beta1", 1)).chart != generate(GenSpec("Beta1", 2)).chart


def test_delta_seed_7():
    g = generate(GenSpec(ClassLabel.Delta, 7))
    assert classify(g.chart).label == ClassLabel.Delta
    assert g.witness["fixed_line"] == classify(g.chart).certificate["fixed_line"]


def test_gamma3_seed_11_has_double_focus():
    g = generate(GenSpec(ClassLabel.Gamma3, 11))
    report = classify(g.chart)
    assert report.certificate["per_line_focus_count"] == 1
    assert report.certificate["focus_multiplicity"] == 2
    assert report.certificate["vertex"] == g.witness["vertex"]


def _underlying_foci(label, seed):
    # the vertex is the first point map; the other two span the line in the hyperplane
    g = generate(GenSpec(label, seed))
    report = classify(g.chart)
    return report.certificate["per_line_focus_count"]


def test_line_congruence_types():
    assert all(_underlying_foci(ClassLabel.Beta3, s) == 2 for s in range(3))
    assert all(_underlying_foci(ClassLabel.Gamma3, s) == 1 for s in range(3))


def test_expect_line_in_file_text():
    g = generate(GenSpec(ClassLabel.Alpha2, 0))
    text = chart_file_text(g, 0)
    parsed = parse_chart(text)
    assert parsed.expected == "Alpha2" and parsed == g.chart


def test_degree_too_small_for_class():
    with pytest.raises(ValueError):
        GenSpec(ClassLabel.Beta2, 0, degree=1)


def test_generation_failure_surfaces():
    # two attempts of coefficient height 0 give only zero maps
    with pytest.raises(GenerationFailed):
        generate(GenSpec(ClassLabel.Alpha1, 0, height=0, attempts=2))


# -- transformations --------------------------------------------------------------


def test_identity_transforms(xbeta):
    assert transform_chart(xbeta, Projective(IDENTITY5)) == xbeta
    assert transform_chart(xbeta, Respan(IDENTITY3)) == xbeta
    assert transform_chart(xbeta, Reparametrize(((1, 0), (0, 1)))) == xbeta


def test_singular_transforms(xbeta):
    with pytest.raises(SingularTransform):
        transform_chart(xbeta, Projective(((0,) * 5,) * 5))
    with pytest.raises(SingularTransform):
        transform_chart(xbeta, Respan(((1, 2, 3), (2, 4, 6), (0, 0, 1))))
    with pytest.raises(SingularTransform):
        transform_chart(xbeta, Reparametrize(((1, 2), (2, 4))))


def test_coordinate_swap_keeps_delta(xdelta):
    swap = [list(r) for r in IDENTITY5]
    swap[0], swap[4] = swap[4], swap[0]
    moved = transform_chart(xdelta, Projective(tuple(map(tuple, swap))))
    assert classify(moved).label == ClassLabel.Delta


def test_reparametrization_composes(xbeta):
    moved = transform_chart(xbeta, Reparametrize(((2, 1), (0, 1)), (1, -1)))
    # new chart at (s, t) equals the old one at (2s + t + 1, t - 1)
    s, t = Fraction(1, 3), Fraction(2)
    assert moved.evaluate(s, t) == xbeta.evaluate(2 * s + t + 1, t - 1)


# -- auxiliary constructions ------------------------------------------------------


@pytest.mark.parametrize("kind", DEVELOPABLE_KINDS)
def test_developable_families(kind):
    for seed in range(3):
        chart, witness = developable_family(kind, seed)
        result = classify_1dim_developable(chart)
        assert result.kind == kind
        if kind == "ThroughLine":
            assert result.line == witness["line"]
        if kind == "ConeTangent":
            assert result.vertex == witness["vertex"]


def test_nondefective_pencil():
    from focalcong.chart import eval_frame
    from focalcong.focal import characteristic_forms, focal_conic, pencil_configuration

    chart, A = jordan_pencil_chart(3, defective=False)
    forms = characteristic_forms(eval_frame(chart, (0, 0)))
    pc = pencil_configuration(forms)
    assert pc.eigen == "TwoDistinct" and pc.disc > 0 and pc.A == A
    assert focal_conic(forms).rank == 2
