from fractions import Fraction

from hypothesis import strategies as st

from skewprod.algebras import NCTorusContext, ZInfContext, ZInfElement
from skewprod.angles import DEFAULT_BASIS, Angle, PhaseScalar
from skewprod.automorphisms import GeneratorImage, TorusAutomorphism, ZInfAutomorphism
from skewprod.crossed import CrossedElement
from skewprod.skew import SkewSystem

SL2 = (
    ((1, 0), (0, 1)),
    ((1, 1), (0, 1)),
    ((1, 0), (1, 1)),
    ((0, -1), (1, 0)),
    ((2, 1), (1, 1)),
    ((1, -1), (0, 1)),
)

GAMMAS = (
    Angle.of(s3=1),
    Angle.of("1/3"),
    Angle.of("1/5", s3=-1),
    Angle.of("1/2"),
)


def rationals(max_denominator=12):
    return st.fractions(min_value=-2, max_value=2, max_denominator=max_denominator)


@st.composite
def angles(draw, symbolic=True, max_coefficient=2):
    q0 = draw(rationals())
    if not symbolic:
        return Angle.of(q0)
    coeffs = draw(st.lists(st.integers(-max_coefficient, max_coefficient), min_size=len(DEFAULT_BASIS),
                           max_size=len(DEFAULT_BASIS)))
    return Angle(DEFAULT_BASIS, (q0,) + tuple(Fraction(q) for q in coeffs))


def irrational_angles():
    return angles().filter(lambda a: not a.is_rational)


def unit_phases(symbolic=True):
    return angles(symbolic=symbolic).map(PhaseScalar.from_phase)


def amplitudes():
    return st.integers(-2, 2).filter(bool).map(float)


@st.composite
def phase_scalars(draw, max_terms=3):
    items = draw(st.lists(st.tuples(angles(), amplitudes()), max_size=max_terms))
    scalar = PhaseScalar.zero(DEFAULT_BASIS)
    for phase, amp in items:
        scalar = scalar + PhaseScalar.from_phase(phase, amp)
    return scalar


def torus_contexts():
    return st.one_of(
        st.just(NCTorusContext.circle(DEFAULT_BASIS)),
        st.sampled_from(GAMMAS).map(NCTorusContext),
    )


@st.composite
def torus_elements(draw, context, max_terms=3, radius=2):
    n_range = st.just(0) if context.rank == 1 else st.integers(-radius, radius)
    element = context.zero()
    for _ in range(draw(st.integers(0, max_terms))):
        m, n = draw(st.integers(-radius, radius)), draw(n_range)
        element = element + context.monomial(m, n, PhaseScalar.from_phase(draw(angles()), draw(amplitudes())))
    return element


@st.composite
def unit_monomials(draw, context, radius=2):
    n = 0 if context.rank == 1 else draw(st.integers(-radius, radius))
    return context.monomial(draw(st.integers(-radius, radius)), n, draw(unit_phases()))


@st.composite
def zinf_elements(draw, context, unit=False, max_points=3):
    values = unit_phases() if unit else phase_scalars(max_terms=2)
    at_infinity = draw(unit_phases(symbolic=False)) if unit else draw(values)
    points = draw(st.dictionaries(st.integers(-4, 4), values, max_size=max_points))
    return ZInfElement(context, at_infinity, points)


def elements(context):
    if isinstance(context, ZInfContext):
        return zinf_elements(context)
    return torus_elements(context)


@st.composite
def torus_automorphisms(draw, context):
    if context.rank == 1:
        return TorusAutomorphism.rotation(context, draw(angles()))
    (a, b), (c, d) = draw(st.sampled_from(SL2))
    return TorusAutomorphism(context, GeneratorImage(draw(angles()), (a, c)), GeneratorImage(draw(angles()), (b, d)))


@st.composite
def crossed_elements(draw, context, alpha, max_modes=3, radius=3):
    modes = {}
    for _ in range(draw(st.integers(0, max_modes))):
        k = draw(st.integers(-radius, radius))
        modes[k] = draw(elements(context))
    return CrossedElement(context, alpha, modes)


@st.composite
def cocycle_systems(draw):
    """Arbitrary (θ, α, u) with unitary u; intertwining is not required."""
    context = draw(torus_contexts())
    theta = draw(torus_automorphisms(context))
    alpha = draw(torus_automorphisms(context))
    return SkewSystem(context, theta, alpha, draw(unit_monomials(context)), name="random")


@st.composite
def valid_systems(draw):
    """Skew products satisfying unitarity, intertwining and state invariance."""
    kind = draw(st.sampled_from(["circle", "anzai", "nctorus", "zinf"]))
    if kind == "zinf":
        context = ZInfContext(DEFAULT_BASIS)
        u = draw(zinf_elements(context, unit=True))
        theta = ZInfAutomorphism(context, draw(st.sampled_from([-2, -1, 1, 2])))
        return SkewSystem(context, theta, ZInfAutomorphism.identity(context), u, True, "zinf-random")
    if kind == "nctorus":
        context = NCTorusContext(draw(st.sampled_from(GAMMAS)))
        theta = TorusAutomorphism.anzai(context, draw(irrational_angles()), draw(angles()))
        alpha = TorusAutomorphism.rotation(context, Angle.zero(DEFAULT_BASIS), draw(angles()))
        return SkewSystem(context, theta, alpha, context.scalar(draw(unit_phases())), True, "nctorus-random")
    context = NCTorusContext.circle(DEFAULT_BASIS)
    theta = TorusAutomorphism.rotation(context, draw(irrational_angles()))
    if kind == "anzai":
        u = context.monomial(draw(st.integers(-2, 2)), 0, draw(unit_phases()))
        return SkewSystem(context, theta, TorusAutomorphism.identity(context), u, True, "anzai-random")
    alpha = TorusAutomorphism.rotation(context, draw(angles()))
    return SkewSystem(context, theta, alpha, context.scalar(draw(unit_phases())), True, "circle-random")


@st.composite
def systems_with_elements(draw, count=2):
    system = draw(valid_systems())
    return (system,) + tuple(draw(crossed_elements(system.context, system.alpha)) for _ in range(count))
