import pytest
from hypothesis import given, settings, strategies as st

from skewprod.algebras import NCTorusContext, alg_mul, alg_one_norm
from skewprod.angles import Angle, PhaseScalar
from skewprod.automorphisms import TorusAutomorphism
from skewprod.crossed import (
    CrossedElement,
    cp_abel,
    cp_add,
    cp_adjoint,
    cp_expectation,
    cp_fejer,
    cp_gauge,
    cp_inner,
    cp_isclose,
    cp_mul,
    cp_one_norm,
    cp_partial_sum,
    cp_scale,
    cp_state,
)
from skewprod.errors import ContextMismatchError, DomainError
from tests.strategies import angles, crossed_elements, elements, torus_automorphisms, torus_contexts

CIRCLE = NCTorusContext.circle()
ROTATION = TorusAutomorphism.rotation(CIRCLE, Angle.of(s1=1))


def actions():
    return torus_contexts().flatmap(lambda context: st.tuples(st.just(context), torus_automorphisms(context)))


@st.composite
def crossed_triples(draw):
    context, alpha = draw(actions())
    return tuple(draw(crossed_elements(context, alpha)) for _ in range(3))


def test_covariance_relation():
    # V a V* = α(a)
    v = CrossedElement.v_power(ROTATION, 1)
    u = CrossedElement.from_algebra(ROTATION, CIRCLE.monomial(1))
    rotated = cp_mul(cp_mul(v, u), cp_adjoint(v))
    rotated_u = CIRCLE.monomial(1, 0, PhaseScalar.from_phase(Angle.of(s1=1)))
    assert rotated == CrossedElement.from_algebra(ROTATION, rotated_u)


@settings(max_examples=200)
@given(crossed_triples())
def test_crossed_product_laws(triple):
    x, y, z = triple
    assert cp_isclose(cp_mul(cp_mul(x, y), z), cp_mul(x, cp_mul(y, z)), 1e-9)
    assert cp_isclose(cp_adjoint(cp_adjoint(x)), x, 1e-12)
    assert cp_isclose(cp_adjoint(cp_mul(x, y)), cp_mul(cp_adjoint(y), cp_adjoint(x)), 1e-9)
    assert cp_isclose(cp_mul(x, cp_add(y, z)), cp_add(cp_mul(x, y), cp_mul(x, z)), 1e-9)


@settings(max_examples=200)
@given(actions().flatmap(lambda pair: st.tuples(
    crossed_elements(*pair), elements(pair[0]), elements(pair[0]))))
def test_expectation_is_a_bimodule_projection(data):
    x, a, b = data
    alpha = x.alpha
    left, right = CrossedElement.from_algebra(alpha, a), CrossedElement.from_algebra(alpha, b)
    expected = alg_mul(a, alg_mul(cp_expectation(x), b))
    sandwiched = cp_expectation(cp_mul(left, cp_mul(x, right)))
    assert cp_isclose(CrossedElement.from_algebra(alpha, sandwiched), CrossedElement.from_algebra(alpha, expected),
                      1e-9)
    once = CrossedElement.from_algebra(alpha, cp_expectation(x))
    assert cp_expectation(once) == cp_expectation(x)


@given(actions().flatmap(lambda pair: crossed_elements(*pair)), angles())
def test_gauge_invariance_of_the_state(x, z):
    assert cp_state(cp_gauge(z, x)) == pytest.approx(cp_state(x), abs=1e-12)
    assert cp_inner(x, x).real >= -1e-12


def test_gauge_rotates_modes():
    x = CrossedElement.v_power(ROTATION, 2, CIRCLE.monomial(1))
    gauged = cp_gauge(Angle.of("1/8"), x)
    assert cp_isclose(gauged, cp_scale(x, 1j), 1e-12)


@pytest.mark.parametrize("order", [1, 2, 5, 17, 32])
def test_fejer_matches_averaged_partial_sums(order):
    x = CrossedElement(CIRCLE, ROTATION, {k: CIRCLE.monomial(k % 3, 0, 1.0 + abs(k)) for k in range(-40, 41)})
    brute = CrossedElement(CIRCLE, ROTATION)
    for radius in range(order):
        brute = cp_add(brute, cp_partial_sum(x, radius))
    assert cp_isclose(cp_fejer(x, order), cp_scale(brute, 1.0 / order), 1e-12)


@given(actions().flatmap(lambda pair: crossed_elements(*pair, max_modes=4, radius=5)),
       st.floats(min_value=0.01, max_value=0.99))
def test_abel_residual_bound(x, r):
    residual = cp_one_norm(cp_add(cp_abel(x, r), cp_scale(x, -1)))
    assert residual <= (1 - r) * max(x.radius(), 1) * cp_one_norm(x) + 1e-12


def test_summation_domains():
    x = CrossedElement.v_power(ROTATION, 1)
    with pytest.raises(DomainError):
        cp_fejer(x, 0)
    for r in (0.0, 1.0, -0.5):
        with pytest.raises(DomainError):
            cp_abel(x, r)


def test_actions_must_agree():
    other = TorusAutomorphism.rotation(CIRCLE, Angle.of(s2=1))
    with pytest.raises(ContextMismatchError):
        cp_mul(CrossedElement.v_power(ROTATION, 1), CrossedElement.v_power(other, 1))
    with pytest.raises(ContextMismatchError):
        CrossedElement(CIRCLE, ROTATION, {0: NCTorusContext(Angle.of(s3=1)).one()})


@given(actions().flatmap(lambda pair: crossed_elements(*pair)))
def test_json_round_trip(x):
    restored = CrossedElement.from_json(x.to_json(), x.context.basis)
    assert restored == x
    assert cp_one_norm(restored) == pytest.approx(sum(alg_one_norm(a) for _, a in x.modes()))


@st.composite
def distinct_modes(draw):
    context, alpha = draw(actions())
    m, n = draw(st.lists(st.integers(-4, 4), min_size=2, max_size=2, unique=True))
    x = CrossedElement.v_power(alpha, m, draw(elements(context)))
    y = CrossedElement.v_power(alpha, n, draw(elements(context)))
    return x, y


@settings(max_examples=100)
@given(distinct_modes())
def test_distinct_modes_are_orthogonal(pair):
    x, y = pair
    assert cp_state(cp_mul(cp_adjoint(x), y)) == 0
    assert cp_state(cp_mul(cp_adjoint(y), x)) == 0
