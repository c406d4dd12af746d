from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from skewprod.algebras import NCTorusContext, ZInfContext, alg_isclose, alg_mul
from skewprod.angles import Angle, PhaseScalar
from skewprod.automorphisms import (
    GeneratorImage,
    TorusAutomorphism,
    ZInfAutomorphism,
    alg_apply,
    automorphism_from_json,
    compose,
    inverse,
    power,
)
from skewprod.errors import ContextMismatchError, DomainError
from tests.strategies import elements, torus_automorphisms, torus_contexts

NC = NCTorusContext(Angle.of(s3=1))
CIRCLE = NCTorusContext.circle()
ZINF = ZInfContext()


def automorphisms_with_elements(count=2):
    return torus_contexts().flatmap(
        lambda context: st.tuples(torus_automorphisms(context), *([elements(context)] * count)))


def test_anzai_images():
    theta = TorusAutomorphism.anzai(NC, Angle.of(s1=1))
    assert theta.matrix == ((1, 1), (0, 1))
    assert alg_apply(theta, NC.monomial(0, 1)) == NC.monomial(1, 1)
    assert alg_apply(theta, NC.monomial(1)) == NC.monomial(1, 0, PhaseScalar.from_phase(Angle.of(s1=1)))


def test_invalid_matrices():
    with pytest.raises(DomainError):
        TorusAutomorphism(NC, GeneratorImage(Angle.zero(), (2, 0)), GeneratorImage(Angle.zero(), (0, 1)))
    with pytest.raises(DomainError):
        TorusAutomorphism(NC, GeneratorImage(Angle.zero(), (0, 1)), GeneratorImage(Angle.zero(), (1, 0)))
    with pytest.raises(DomainError):
        TorusAutomorphism(CIRCLE, GeneratorImage(Angle.zero(), (1, 1)), GeneratorImage(Angle.zero(), (0, 1)))


def test_circle_reflection():
    reflection = TorusAutomorphism(CIRCLE, GeneratorImage(Angle.of("1/3"), (-1, 0)),
                                   GeneratorImage(Angle.zero(), (0, 1)))
    assert reflection.determinant == -1
    assert compose(reflection, reflection).is_identity()


@settings(max_examples=100)
@given(automorphisms_with_elements())
def test_apply_is_a_homomorphism(data):
    sigma, a, b = data
    assert alg_isclose(alg_apply(sigma, alg_mul(a, b)), alg_mul(alg_apply(sigma, a), alg_apply(sigma, b)), 1e-9)


@settings(max_examples=100)
@given(automorphisms_with_elements(1))
def test_inverse_undoes(data):
    sigma, a = data
    assert alg_apply(inverse(sigma), alg_apply(sigma, a)) == a
    assert alg_apply(sigma, alg_apply(inverse(sigma), a)) == a


@given(torus_contexts().flatmap(lambda c: st.tuples(torus_automorphisms(c), torus_automorphisms(c))),
       st.integers(-4, 4))
def test_compose_and_power(pair, j):
    sigma, tau = pair
    for name, g in sigma.context.generators().items():
        assert alg_apply(compose(sigma, tau), g) == alg_apply(sigma, alg_apply(tau, g)), name
    step = sigma if j >= 0 else inverse(sigma)
    expected = TorusAutomorphism.identity(sigma.context)
    for _ in range(abs(j)):
        expected = compose(step, expected)
    assert power(sigma, j) == expected


def test_zinf_shift():
    shift = ZInfAutomorphism(ZINF, 2)
    f = ZINF.sequence(1.0, {0: 5.0})
    assert alg_apply(shift, f).value_at(2) == PhaseScalar.constant(5.0)
    assert power(shift, -3) == ZInfAutomorphism(ZINF, -6)
    assert inverse(shift) == ZInfAutomorphism(ZINF, -2)
    assert compose(shift, inverse(shift)).is_identity()


def test_context_checked():
    with pytest.raises(ContextMismatchError):
        alg_apply(TorusAutomorphism.identity(NC), CIRCLE.one())


def test_json_round_trip():
    theta = TorusAutomorphism.anzai(NC, Angle.of("1/3", s1=1), Angle.of("1/4"))
    assert automorphism_from_json(theta.to_json(), NC) == theta
    assert automorphism_from_json({"U": {"phase": "s1"}}, CIRCLE) == TorusAutomorphism.rotation(CIRCLE, Angle.of(s1=1))
    assert automorphism_from_json({"kind": "shift", "p": -1}, ZINF) == ZInfAutomorphism(ZINF, -1)
    with pytest.raises(DomainError):
        automorphism_from_json({"kind": "torus"}, ZINF)


@pytest.mark.parametrize("k", range(-3, 4))
def test_anzai_powers_of_v(k):
    # (UV)^k = e^{−πiγk(k−1)}U^kV^k
    theta = TorusAutomorphism.anzai(NC, Angle.of(s1=1))
    phase = Angle.of(0, s3=Fraction(-k * (k - 1), 2))
    assert alg_apply(theta, NC.monomial(0, k)) == NC.monomial(k, k, PhaseScalar.from_phase(phase))
