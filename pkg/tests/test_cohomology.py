import logging

import pytest
from hypothesis import given, reject, settings, strategies as st

from skewprod.algebras import NCTorusContext, ZInfContext, alg_mul
from skewprod.angles import DEFAULT_BASIS, Angle, PhaseScalar
from skewprod.automorphisms import GeneratorImage, TorusAutomorphism, ZInfAutomorphism, alg_apply
from skewprod.cohomology import (
    CONTINUOUS_ONLY,
    MEASURABLE_DETECTED,
    MEASURABLE_NON_CONTINUOUS,
    MEASURABLE_NONE,
    METHOD_CLOSED_FORM,
    METHOD_ORACLE,
    METHOD_SCAN,
    SHAPE_CIRCLE,
    SHAPE_TRIVIAL,
    FixedPointDescription,
    LevelReport,
    detect_group,
    level_operator,
    on_same_line,
    oracle_nullspace,
    solve_continuous,
    solve_level,
    solve_measurable,
)
from skewprod.crossed import cp_adjoint, cp_mul
from skewprod.errors import DomainError, UnsupportedCocycleError
from skewprod.presets import build_preset
from skewprod.skew import SkewSystem
from tests.strategies import valid_systems

NC = NCTorusContext(Angle.of(s3=1))
CIRCLE = NCTorusContext.circle()
ZINF = ZInfContext()
S1, S2 = Angle.of(s1=1), Angle.of(s2=1)


def circle_systems():
    return valid_systems().filter(lambda sys: isinstance(sys.context, NCTorusContext) and sys.context.rank == 1)


def torus_and_zinf_systems():
    return valid_systems().filter(lambda sys: isinstance(sys.context, ZInfContext) or sys.context.rank == 2)


@pytest.mark.parametrize("level", [2, 3, 5])
def test_double_rotation(level):
    sys = build_preset("double-rotation", {"l": level})
    fp = detect_group(sys)
    assert fp.group_generator == level
    assert fp.algebra_shape == SHAPE_CIRCLE
    assert fp.method == METHOD_CLOSED_FORM
    assert not fp.has_measurable_non_continuous
    assert fp.generator_at(level) == CIRCLE.one()
    assert fp.levels() == [level * l for l in range(-3, 4)]
    assert solve_continuous(sys, 1) is None
    assert solve_measurable(sys, 1) == (MEASURABLE_NONE, None)


@pytest.mark.parametrize("variant", ["classical", "nc"])
def test_anzai_inverse(variant):
    sys = build_preset("anzai-inverse", {"variant": variant})
    assert detect_group(sys).group_generator == 1
    assert solve_continuous(sys, 1) == CIRCLE.monomial(1)
    assert solve_continuous(sys, -2) == CIRCLE.monomial(-2)
    state, witness = solve_measurable(sys, 1)
    assert state == CONTINUOUS_ONLY
    assert witness == {"kind": "character", "exponent": [1, 0]}


def test_zinf_irrational_beta_has_only_measurable_solutions():
    sys = build_preset("zinf")
    fp = detect_group(sys)
    assert fp.group_generator is None
    assert fp.algebra_shape == SHAPE_TRIVIAL
    assert fp.measurable_generator == 1
    assert fp.has_measurable_non_continuous
    for n in (1, -1, 4):
        assert solve_continuous(sys, n) is None
        assert solve_measurable(sys, n)[0] == MEASURABLE_NON_CONTINUOUS
    assert solve_continuous(sys, 0) == ZINF.one()


def test_zinf_rational_beta():
    sys = build_preset("zinf", {"beta": "1/2"})
    fp = detect_group(sys)
    assert fp.group_generator == 2
    assert fp.measurable_generator == 1
    assert solve_continuous(sys, 2) == ZINF.one()
    assert solve_continuous(sys, 1) is None


def test_zinf_telescoping_chain():
    beta = PhaseScalar.from_phase(S2)
    u = ZINF.sequence(1.0, {0: beta, 1: beta.conjugate()})
    sys = SkewSystem(ZINF, ZInfAutomorphism(ZINF, -1), ZInfAutomorphism.identity(ZINF), u, True, "chain")
    w = solve_continuous(sys, 1)
    assert w is not None
    assert w.value_at(1) == beta.conjugate()
    assert w.value_at(0) == PhaseScalar.one()
    assert alg_mul(sys.twist(1), alg_apply(sys.theta, w)) == w
    assert detect_group(sys).group_generator == 1


def test_zinf_needs_exact_unit_values():
    u = ZINF.sequence(1.0, {0: 0.6 + 0.8j})
    sys = SkewSystem(ZINF, ZInfAutomorphism(ZINF, 1), ZInfAutomorphism.identity(ZINF), u)
    with pytest.raises(UnsupportedCocycleError, match="solve --oracle"):
        solve_continuous(sys, 1)


def test_nctorus_independent_oracle():
    sys = build_preset("nctorus-independent")
    assert detect_group(sys).group_generator is None
    assert oracle_nullspace(sys, 0, 12, 1e-8).dimension == 1
    for n in (1, 2, 3):
        result = oracle_nullspace(sys, n, 12, 1e-8)
        assert result.dimension == 0
        assert result.singular_values[0] > 1e-3
    report = solve_level(sys, 2, oracle=True)
    assert report.measurable == MEASURABLE_NONE
    assert report.oracle_dimension == 0
    assert len(report.singular_values) == 16


def test_nctorus_dependent():
    sys = build_preset("nctorus-dependent")
    fp = detect_group(sys)
    assert fp.group_generator == 1
    for n in (-2, 1, 3):
        assert solve_continuous(sys, n) == NC.monomial(-n)
    assert fp.group_law_verified


def test_plain_rotation_of_the_two_torus_needs_the_oracle():
    theta = TorusAutomorphism.rotation(NC, S1, S2)
    sys = SkewSystem(NC, theta, TorusAutomorphism.identity(NC), NC.one())
    with pytest.raises(UnsupportedCocycleError):
        solve_level(sys, 1)
    report = solve_level(sys, 1, oracle=True, truncation=4)
    assert report.method == METHOD_ORACLE
    assert report.measurable == MEASURABLE_DETECTED
    assert report.oracle_dimension == 1
    assert report.continuous is None


def test_reflection_is_unsupported():
    reflection = TorusAutomorphism(CIRCLE, GeneratorImage(Angle.zero(), (-1, 0)), GeneratorImage(Angle.zero(), (0, 1)))
    sys = SkewSystem(CIRCLE, reflection, TorusAutomorphism.identity(CIRCLE), CIRCLE.one())
    with pytest.raises(UnsupportedCocycleError):
        solve_continuous(sys, 1)


def test_scan_when_no_closed_form(caplog):
    sys = SkewSystem(NC, TorusAutomorphism.anzai(NC, S1), TorusAutomorphism.identity(NC), NC.monomial(1))
    with caplog.at_level(logging.WARNING, logger="skewprod.cohomology"):
        fp = detect_group(sys, n_max=6)
    assert fp.method == METHOD_SCAN
    assert fp.scan_bound == 6
    assert fp.group_generator is None
    assert fp.generators == {0: NC.one()}
    assert "evidence-bounded" in caplog.text


@settings(max_examples=40, deadline=None)
@given(circle_systems(), st.integers(-6, 6))
def test_closed_form_agrees_with_the_oracle(sys, n):
    report = solve_level(sys, n, oracle=True, truncation=16)
    expected = 0 if report.measurable == MEASURABLE_NONE else 1
    assert report.oracle_dimension == expected


@settings(max_examples=40, deadline=None)
@given(torus_and_zinf_systems(), st.integers(-6, 6))
def test_closed_form_agrees_with_the_oracle_beyond_the_circle(sys, n):
    report = solve_level(sys, n, oracle=True, truncation=16)
    assert report.method == METHOD_CLOSED_FORM
    expected = 0 if report.measurable == MEASURABLE_NONE else 1
    assert report.oracle_dimension == expected


def test_level_operator_bounds():
    sys = build_preset("classical-anzai")
    with pytest.raises(DomainError):
        level_operator(sys, 1, 0)
    operator = level_operator(sys, 1, 3)
    assert operator.matrix.shape == (7, 7)
    assert operator.leakage == pytest.approx(1.0)


def test_on_same_line():
    assert on_same_line(CIRCLE.monomial(1, 0, PhaseScalar.from_phase(S1)), CIRCLE.monomial(1))
    assert not on_same_line(CIRCLE.monomial(1), CIRCLE.monomial(2))
    assert not on_same_line(CIRCLE.monomial(1, 0, 2.0), CIRCLE.monomial(1))


def test_report_json():
    sys = build_preset("anzai-inverse")
    report = solve_level(sys, 1, oracle=True, truncation=6)
    assert LevelReport.from_json(report.to_json(), DEFAULT_BASIS) == report
    fp = detect_group(build_preset("double-rotation"))
    assert FixedPointDescription.from_json(fp.to_json(), DEFAULT_BASIS) == fp


def test_descriptions_check_their_shape():
    with pytest.raises(AssertionError):
        FixedPointDescription(2, SHAPE_TRIVIAL)
    with pytest.raises(AssertionError):
        LevelReport(1, CIRCLE.one(), MEASURABLE_NONE)


def fixed_point_lines(sys, fp):
    return {level: sys.v_power(level, fp.generator_at(level)) for level in fp.levels()}


@settings(max_examples=60, deadline=None)
@given(valid_systems())
def test_fixed_point_lines_form_a_group(sys):
    try:
        fp = detect_group(sys, n_max=8)
    except UnsupportedCocycleError:
        reject()
    lines = fixed_point_lines(sys, fp)
    for a, x in lines.items():
        if -a in lines:
            assert on_same_line(cp_adjoint(x).mode(-a), lines[-a].mode(-a))
        for b, y in lines.items():
            if a + b in lines:
                product = cp_mul(x, y)
                assert product.support() == [a + b]
                assert on_same_line(product.mode(a + b), lines[a + b].mode(a + b))
