"""Cohomological equations α^{−n}(u_n)·θ(a) = a at every level n.

Closed forms cover the families the library ships:

* torus and noncommutative torus with a single-monomial cocycle and θ of
  skew-rotation type U ↦ e^{iθ_U}U, V ↦ e^{iθ_V}U^bV: the equation decouples
  along the exponent map (m, k) ↦ (m + bk + p, k + r) and only the fixed
  monomials carry square-summable solutions, which are therefore continuous;
* Z∞ with the shift by p ≠ 0 and a cocycle of exact unit phases: residue
  classes mod |p| telescope, and L²(δ∞) is one-dimensional.

Everything else goes through the truncated-operator oracle.
"""
import logging
from dataclasses import dataclass, field
from math import gcd
from typing import Dict, List, Mapping, Optional, Tuple

import numpy as np
import scipy.linalg

from .algebras import (
    AlgebraElement,
    Monomial,
    ZInfContext,
    ZInfElement,
    alg_adjoint,
    alg_isclose,
    alg_mul,
    element_from_json,
    is_scalar_unitary,
)
from .angles import Angle, PhaseScalar, SymbolBasis, is_trivial_phase, minimal_level, phase_order, solve_character
from .automorphisms import alg_apply, monomial_image, power
from .errors import DomainError, UnsupportedCocycleError
from .skew import SkewSystem

_LOGGER = logging.getLogger(__name__)

MEASURABLE_NONE = "none"
CONTINUOUS_ONLY = "continuous_only"
MEASURABLE_NON_CONTINUOUS = "measurable_non_continuous"
MEASURABLE_DETECTED = "detected"

METHOD_CLOSED_FORM = "closed_form"
METHOD_SCAN = "scan"
METHOD_ORACLE = "oracle"

SHAPE_TRIVIAL = "trivial_scalars"
SHAPE_CIRCLE = "circle_algebra"

WITNESS_L2_POINT = "L2(delta_inf) scalar"

GENERATOR_RADIUS = 3
UNIT_TOL = 1e-12
REPORTED_SINGULAR_VALUES = 16


@dataclass
class LevelReport:
    """Solvability of the cohomological equation at one level."""

    level: int
    continuous: Optional[AlgebraElement]
    measurable: str
    method: str = METHOD_CLOSED_FORM
    witness: Optional[dict] = None
    oracle_dimension: Optional[int] = None
    singular_values: Optional[List[float]] = None

    def __post_init__(self):
        if self.continuous is not None and self.measurable == MEASURABLE_NONE:
            raise AssertionError(f"level {self.level}: a continuous solution is also measurable")

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "continuous": self.continuous.to_json() if self.continuous is not None else None,
            "measurable": self.measurable,
            "method": self.method,
            "witness": self.witness,
            "oracle_dimension": self.oracle_dimension,
            "singular_values": self.singular_values,
        }

    @classmethod
    def from_json(cls, data: Mapping, basis: SymbolBasis) -> "LevelReport":
        continuous = data.get("continuous")
        return cls(
            level=int(data["level"]),
            continuous=element_from_json(continuous, basis) if continuous is not None else None,
            measurable=data["measurable"],
            method=data.get("method", METHOD_CLOSED_FORM),
            witness=data.get("witness"),
            oracle_dimension=data.get("oracle_dimension"),
            singular_values=data.get("singular_values"),
        )


@dataclass
class FixedPointDescription:
    """G_{θ,u} = n₀Z with normalized generators w_{n₀l}; no n₀ means G = {0}.

    `measurable_generator` is the generator of the (larger) group of levels
    with square-summable solutions; it differs from `group_generator` exactly
    when some level has measurable non-continuous solutions.
    """

    group_generator: Optional[int]
    algebra_shape: str
    generators: Dict[int, AlgebraElement] = field(default_factory=dict)
    measurable_generator: Optional[int] = None
    method: str = METHOD_CLOSED_FORM
    scan_bound: Optional[int] = None
    group_law_verified: bool = True

    def __post_init__(self):
        shape = SHAPE_CIRCLE if self.group_generator is not None else SHAPE_TRIVIAL
        if self.algebra_shape != shape:
            raise AssertionError(f"fixed-point algebra shape {self.algebra_shape} does not match n0")

    @property
    def has_measurable_non_continuous(self) -> bool:
        if self.measurable_generator is None:
            return False
        return self.group_generator != self.measurable_generator

    def in_group(self, level: int) -> bool:
        if level == 0:
            return True
        return self.group_generator is not None and level % self.group_generator == 0

    def levels(self) -> List[int]:
        """Levels n₀l whose generator is populated."""
        if self.group_generator is None:
            return [0]
        return sorted(self.group_generator * l for l in self.generators)

    def generator_at(self, level: int) -> Optional[AlgebraElement]:
        if not self.in_group(level):
            return None
        l = 0 if level == 0 else level // self.group_generator
        return self.generators.get(l)

    def to_json(self) -> dict:
        return {
            "group_generator": self.group_generator,
            "algebra_shape": self.algebra_shape,
            "generators": [{"l": l, "w": w.to_json()} for l, w in sorted(self.generators.items())],
            "measurable_generator": self.measurable_generator,
            "method": self.method,
            "scan_bound": self.scan_bound,
            "group_law_verified": self.group_law_verified,
        }

    @classmethod
    def from_json(cls, data: Mapping, basis: SymbolBasis) -> "FixedPointDescription":
        return cls(
            group_generator=data.get("group_generator"),
            algebra_shape=data["algebra_shape"],
            generators={int(item["l"]): element_from_json(item["w"], basis) for item in data.get("generators", [])},
            measurable_generator=data.get("measurable_generator"),
            method=data.get("method", METHOD_CLOSED_FORM),
            scan_bound=data.get("scan_bound"),
            group_law_verified=data.get("group_law_verified", True),
        )


def _unit_phase(scalar: PhaseScalar) -> Optional[Angle]:
    decomposition = scalar.single_phase()
    if decomposition is None or abs(decomposition[0] - 1.0) > UNIT_TOL:
        return None
    return decomposition[1]


def _is_one(scalar: PhaseScalar) -> bool:
    phase = _unit_phase(scalar)
    return phase is not None and is_trivial_phase(phase)


def _verify(sys: SkewSystem, n: int, w: AlgebraElement) -> AlgebraElement:
    image = alg_mul(sys.twist(n), alg_apply(sys.theta, w))
    if image != w and not alg_isclose(image, w, UNIT_TOL):
        raise AssertionError(f"level {n}: {w!r} does not solve the cohomological equation")
    return w


def _skew_shift(sys: SkewSystem) -> Tuple[Angle, int]:
    """(θ_U, b) for θ(U) = e^{iθ_U}U, θ(V) = e^{iθ_V}U^bV."""
    theta = sys.theta
    (a, b), (c, d) = theta.matrix
    if (a, c, d) != (1, 0, 1):
        raise UnsupportedCocycleError(f"θ with exponent matrix {theta.matrix} is not of skew-rotation type")
    return theta.image_u.phase, b


def _torus_fixed_monomial(sys: SkewSystem, n: int) -> Tuple[Optional[Monomial], Optional[Angle]]:
    """The V-degree k0 of the unshifted class and its phase offset ψ'.

    Returns (None, None) when every class is shifted.
    """
    c = sys.twist(n)
    decomposition = is_scalar_unitary(c)
    if decomposition is None:
        raise UnsupportedCocycleError(f"the cocycle at level {n} is not a single monomial")
    p, r = decomposition.exponent
    _, b = _skew_shift(sys)
    if sys.context.rank == 1:
        return ((0, 0), decomposition.phase) if p == 0 else (None, None)
    if r != 0:
        return None, None
    if b == 0:
        if p != 0:
            return None, None
        raise UnsupportedCocycleError("θ is a plain rotation of the two-torus; every monomial class is unshifted")
    if p % b:
        return None, None
    k0 = -p // b
    landed = is_scalar_unitary(alg_mul(c, monomial_image(sys.theta, 0, k0)))
    if landed is None or landed.exponent != (0, k0):
        raise AssertionError(f"level {n}: c·θ(V^{k0}) is not a multiple of V^{k0}")
    return (0, k0), landed.phase


def _solve_torus(sys: SkewSystem, n: int) -> Optional[AlgebraElement]:
    anchor, offset = _torus_fixed_monomial(sys, n)
    if anchor is None:
        return None
    theta_u, _ = _skew_shift(sys)
    m = solve_character(theta_u, offset, 1)
    if m is None:
        return None
    return sys.context.monomial(m, anchor[1])


def _zinf_unit_values(c: ZInfElement) -> None:
    for scalar in [c.at_infinity] + [value for _, value in c.points()]:
        if _unit_phase(scalar) is None:
            raise UnsupportedCocycleError("cocycle values on Z∞ must be exact unit phases")


def _solve_zinf(sys: SkewSystem, n: int) -> Optional[ZInfElement]:
    p = sys.theta.shift_power
    if p == 0:
        raise UnsupportedCocycleError("the identity shift leaves every point fixed")
    c = sys.twist(n)
    _zinf_unit_values(c)
    if not _is_one(c.at_infinity):
        return None
    one = PhaseScalar.one(sys.basis)
    step = abs(p)
    chains: Dict[int, List[int]] = {}
    for l in c.exceptional_points():
        chains.setdefault(l % step, []).append(l)
    values = {}
    for points in chains.values():
        lo, hi = min(points), max(points)
        # p > 0: g(l) = c(l)g(l − p) with g = 1 below the chain; p < 0: g = 1 above it
        walk = range(lo, hi + 1, step) if p > 0 else range(hi, lo - 1, -step)
        running = one
        for l in walk:
            running = running * c.value_at(l)
            values[l] = running
        if not _is_one(running):
            return None
    return ZInfElement(sys.context, one, values)


def solve_continuous(sys: SkewSystem, n: int) -> Optional[AlgebraElement]:
    """Normalized continuous solution w_n of α^{−n}(u_n)θ(a) = a, or None.

    Torus solutions are monomials with coefficient 1; Z∞ solutions are
    normalized by g(∞) = 1.
    """
    if isinstance(sys.context, ZInfContext):
        w = _solve_zinf(sys, n)
    else:
        w = _solve_torus(sys, n)
    _LOGGER.debug("level %d of %s: continuous solution %r", n, sys.name, w)
    return _verify(sys, n, w) if w is not None else None


def solve_measurable(sys: SkewSystem, n: int) -> Tuple[str, Optional[dict]]:
    """Classify square-summable solutions at level n: (state, witness descriptor)."""
    continuous = solve_continuous(sys, n)
    if isinstance(sys.context, ZInfContext):
        if not _is_one(sys.twist(n).at_infinity):
            return MEASURABLE_NONE, None
        witness = {"kind": WITNESS_L2_POINT, "value": 1.0}
        return (CONTINUOUS_ONLY if continuous is not None else MEASURABLE_NON_CONTINUOUS), witness
    if continuous is None:
        return MEASURABLE_NONE, None
    ((exponent, _),) = continuous.terms()
    return CONTINUOUS_ONLY, {"kind": "character", "exponent": list(exponent)}


@dataclass
class LevelOperator:
    """Dense matrix of π(α^{−n}(u_n))V_{ω₀,θ} on a truncated GNS basis."""

    matrix: np.ndarray
    index: List[object]
    leakage: float


def _box(context, M: int) -> List[object]:
    if isinstance(context, ZInfContext):
        return ["inf"]
    if context.rank == 1:
        return [(m, 0) for m in range(-M, M + 1)]
    return [(m, k) for m in range(-M, M + 1) for k in range(-M, M + 1)]


def level_operator(sys: SkewSystem, n: int, M: int) -> LevelOperator:
    """Truncate the GNS operator a ↦ α^{−n}(u_n)θ(a) to monomials with |m|(, |k|) ≤ M."""
    if M < 1:
        raise DomainError(f"truncation radius must be positive, got {M}")
    c = sys.twist(n)
    index = _box(sys.context, M)
    if isinstance(sys.context, ZInfContext):
        # L²(δ∞) is spanned by the class of 1; the operator acts by c(∞)
        return LevelOperator(np.array([[c.at_infinity.value()]], dtype=complex), index, 0.0)
    position = {key: i for i, key in enumerate(index)}
    matrix = np.zeros((len(index), len(index)), dtype=complex)
    leakage = 0.0
    for column, (m, k) in enumerate(index):
        image = alg_mul(c, monomial_image(sys.theta, m, k))
        for key, coeff in image.terms():
            row = position.get(key)
            if row is None:
                leakage += abs(coeff.value()) ** 2
            else:
                matrix[row, column] += coeff.value()
    if leakage:
        _LOGGER.warning("level %d: truncation at M=%d leaks %.3g of squared mass through the boundary",
                        n, M, leakage)
    return LevelOperator(matrix, index, leakage)


@dataclass
class OracleResult:
    dimension: int
    singular_values: List[float]


def oracle_nullspace(sys: SkewSystem, n: int, M: int, tol: float) -> OracleResult:
    """Count singular values of (T − I) below `tol` on the truncated GNS space."""
    operator = level_operator(sys, n, M)
    shifted = operator.matrix - np.eye(len(operator.index))
    values = np.sort(scipy.linalg.svdvals(shifted))
    dimension = int(np.count_nonzero(values < tol))
    _LOGGER.debug("oracle level %d, M=%d: nullspace dimension %d, smallest singular value %.3g",
                  n, M, dimension, values[0])
    return OracleResult(dimension, [float(v) for v in values])


def solve_level(sys: SkewSystem, n: int, oracle: bool = False, truncation: int = 12,
                tol: float = 1e-8) -> LevelReport:
    """Assemble a LevelReport, falling back to the oracle for unsupported shapes when allowed."""
    oracle_result = oracle_nullspace(sys, n, truncation, tol) if oracle else None
    try:
        continuous = solve_continuous(sys, n)
        measurable, witness = solve_measurable(sys, n)
        report = LevelReport(n, continuous, measurable, METHOD_CLOSED_FORM, witness)
    except UnsupportedCocycleError:
        if oracle_result is None:
            raise
        measurable = MEASURABLE_DETECTED if oracle_result.dimension else MEASURABLE_NONE
        report = LevelReport(n, None, measurable, METHOD_ORACLE)
    if oracle_result is not None:
        report.oracle_dimension = oracle_result.dimension
        report.singular_values = oracle_result.singular_values[:REPORTED_SINGULAR_VALUES]
    return report


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def _character_type_group(sys: SkewSystem) -> Optional[Tuple[Optional[int], Optional[int]]]:
    """Closed-form (n₀, measurable generator) when the cocycle shape allows it, else None."""
    context = sys.context
    if isinstance(context, ZInfContext):
        if not sys.alpha.is_identity() or sys.theta.shift_power == 0:
            return None
        _zinf_unit_values(sys.u)
        order_inf = phase_order(_unit_phase(sys.u.at_infinity))
        if order_inf is None:
            return None, None
        # chain products Π c_n(l) over each residue class mod |p|
        step = abs(sys.theta.shift_power)
        sums: Dict[int, Angle] = {}
        for l, value in sys.u.points():
            sums[l % step] = sums.get(l % step, Angle.zero(sys.basis)) + _unit_phase(value)
        n0 = order_inf
        for total in sums.values():
            order = phase_order(total)
            if order is None:
                return None, order_inf
            n0 = _lcm(n0, order)
        return n0, order_inf
    decomposition = is_scalar_unitary(sys.u)
    if decomposition is None or abs(decomposition.modulus - 1.0) > UNIT_TOL:
        return None
    try:
        theta_u, b = _skew_shift(sys)
    except UnsupportedCocycleError:
        return None
    if context.rank == 2 and b == 0:
        return None
    if decomposition.exponent == (0, 0):
        found = minimal_level(theta_u, decomposition.phase)
        n0 = found[0] if found is not None else None
        return n0, n0
    p1, r1 = decomposition.exponent
    if sys.alpha.matrix == ((1, 0), (0, 1)) and (context.rank == 1 or r1 != 0):
        # every level n ≠ 0 shifts the exponent by n·(p1, r1)
        return None, None
    return None


def detect_group(sys: SkewSystem, n_max: int = 24) -> FixedPointDescription:
    """G_{θ,u} with generators w_{n₀l}, |l| ≤ 3, in closed form when possible."""
    closed = _character_type_group(sys)
    if closed is not None:
        n0, measurable_n0 = closed
        method, bound = METHOD_CLOSED_FORM, None
    else:
        n0, measurable_n0 = None, None
        for n in range(1, n_max + 1):
            state, _ = solve_measurable(sys, n)
            if state != MEASURABLE_NONE and measurable_n0 is None:
                measurable_n0 = n
            if solve_continuous(sys, n) is not None:
                n0 = n
                break
        method, bound = METHOD_SCAN, n_max
        if n0 is None:
            _LOGGER.warning("no continuous solution for 1 <= n <= %d; G = {0} is evidence-bounded", n_max)

    if n0 is None:
        generators = {0: _verify(sys, 0, sys.context.one())}
        return FixedPointDescription(None, SHAPE_TRIVIAL, generators, measurable_n0, method, bound)

    generators = {}
    for l in range(-GENERATOR_RADIUS, GENERATOR_RADIUS + 1):
        w = solve_continuous(sys, n0 * l)
        if w is None:
            raise AssertionError(f"level {n0 * l} lies in G = {n0}Z but has no solution")
        generators[l] = w
    verified = _group_law_holds(sys, n0, generators)
    if not verified:
        _LOGGER.warning("generators of %s violate w_a·w_b ∈ T·w_(a+b)", sys.name)
    return FixedPointDescription(n0, SHAPE_CIRCLE, generators, measurable_n0, method, bound, verified)


def on_same_line(a: AlgebraElement, b: AlgebraElement) -> bool:
    """True iff a = λb for a unimodular scalar λ (b unitary)."""
    ratio = is_scalar_unitary(alg_mul(a, alg_adjoint(b)))
    if ratio is None or abs(ratio.modulus - 1.0) > UNIT_TOL:
        return False
    return ratio.exponent in (None, (0, 0))


def _group_law_holds(sys: SkewSystem, n0: int, generators: Dict[int, AlgebraElement]) -> bool:
    """V^a w_a · V^b w_b = V^{a+b} α^{−b}(w_a) w_b must lie on the line of V^{a+b} w_{a+b}."""
    for l, w_l in generators.items():
        for j, w_j in generators.items():
            if l + j not in generators:
                continue
            product = alg_mul(alg_apply(power(sys.alpha, -n0 * j), w_l), w_j)
            if not on_same_line(product, generators[l + j]):
                return False
    return True
