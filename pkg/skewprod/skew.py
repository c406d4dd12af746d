"""Skew-product automorphisms Φ_{θ,u} of A⋊_α Z.

Φ extends θ on the coefficient algebra by Φ(V) = uV. It is well defined when
u is unitary and intertwines the two compositions of θ and α:

    u·(α∘θ)(a) = (θ∘α)(a)·u
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional

from .algebras import (
    AlgebraContext,
    AlgebraElement,
    ZInfContext,
    alg_add,
    alg_adjoint,
    alg_isclose,
    alg_mul,
    alg_one_norm,
    alg_scale,
    alg_state,
    context_from_json,
    element_from_json,
)
from .angles import SymbolBasis, minimal_level, phase_order
from .automorphisms import (
    Automorphism,
    alg_apply,
    automorphism_from_json,
    compose,
    inverse,
    power,
)
from .crossed import CrossedElement, cp_state
from .errors import ContextMismatchError, HypothesisViolation, InvalidSystemError

_LOGGER = logging.getLogger(__name__)

VALIDATION_TOL = 1e-12

CHECK_UNITARITY = "unitarity"
CHECK_INTERTWINING = "intertwining"
CHECK_STATE_INVARIANCE = "state_invariance"


def base_degeneracy(context: AlgebraContext, theta: Automorphism) -> Optional[str]:
    """Why (context, θ, ω₀) is evidently not uniquely ergodic, or None."""
    if isinstance(context, ZInfContext):
        return "the identity shift fixes every point" if theta.shift_power == 0 else None
    phase_u, phase_v = theta.image_u.phase, theta.image_v.phase
    matrix = theta.matrix
    if context.rank == 1:
        if matrix[0][0] == -1:
            return "a reflection of the circle has many invariant measures"
        if phase_order(phase_u) is not None:
            return f"rotation by {phase_u} is rational"
        return None
    if matrix == ((1, 0), (0, 1)):
        if phase_order(phase_u) is not None or minimal_level(phase_u, phase_v) is not None:
            return f"rotation by ({phase_u}, {phase_v}) has rationally dependent angles"
        return None
    if matrix[1] == (0, 1) and matrix[0][0] == 1:
        return f"skew rotation by {phase_u} is rational" if phase_order(phase_u) is not None else None
    if matrix[0] == (1, 0) and matrix[1][1] == 1:
        return f"skew rotation by {phase_v} is rational" if phase_order(phase_v) is not None else None
    return f"exponent matrix {matrix} is not of skew-rotation type"


@dataclass
class SkewSystem:
    """The data (A, θ, α, u) of a skew product, plus the asserted base hypothesis.

    `base_uniquely_ergodic` is metadata: unique ergodicity of (A, θ) is an
    input to the classification theorems and cannot be decided here beyond
    the degenerate cases refused by :func:`base_degeneracy`.
    """

    context: AlgebraContext
    theta: Automorphism
    alpha: Automorphism
    u: AlgebraElement
    base_uniquely_ergodic: bool = False
    name: Optional[str] = None
    _cocycles: Dict[int, AlgebraElement] = field(default_factory=dict, init=False, repr=False, compare=False)
    _twists: Dict[int, AlgebraElement] = field(default_factory=dict, init=False, repr=False, compare=False)
    _inverse: Optional["SkewSystem"] = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        for part, value in (("theta", self.theta), ("alpha", self.alpha), ("u", self.u)):
            if value.context != self.context:
                raise ContextMismatchError(f"{part} does not act on {self.context}")
        if self.base_uniquely_ergodic:
            reason = base_degeneracy(self.context, self.theta)
            if reason is not None:
                raise HypothesisViolation(f"base is not uniquely ergodic: {reason}")

    @property
    def basis(self) -> SymbolBasis:
        return self.context.basis

    @property
    def omega0_faithful(self) -> bool:
        return self.context.omega0_faithful

    @property
    def support_central(self) -> bool:
        return self.context.support_central

    @property
    def is_classical(self) -> bool:
        """Commutative coefficients and trivial action: Φ is a classical Anzai skew product."""
        return self.context.is_commutative and self.alpha.is_identity()

    def cocycle(self, n: int) -> AlgebraElement:
        return skew_cocycle(self, n)

    def twist(self, k: int) -> AlgebraElement:
        """α^{−k}(u_k), the coefficient Φ(V^k) = V^k·α^{−k}(u_k)."""
        if k not in self._twists:
            self._twists[k] = alg_apply(power(self.alpha, -k), skew_cocycle(self, k))
        return self._twists[k]

    def inverse(self) -> "SkewSystem":
        """The system (θ^{−1}, α, θ^{−1}(u*)) implementing Φ^{−1}."""
        if self._inverse is None:
            theta_inv = inverse(self.theta)
            self._inverse = SkewSystem(self.context, theta_inv, self.alpha, alg_apply(theta_inv, alg_adjoint(self.u)),
                                       self.base_uniquely_ergodic, self.name and f"{self.name}^-1")
            self._inverse._inverse = self
        return self._inverse

    def element(self, modes: Mapping[int, AlgebraElement]) -> CrossedElement:
        return CrossedElement(self.context, self.alpha, modes)

    def v_power(self, k: int, coeff: Optional[AlgebraElement] = None) -> CrossedElement:
        return CrossedElement.v_power(self.alpha, k, coeff)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "algebra": self.context.to_json(),
            "theta": self.theta.to_json(),
            "alpha": self.alpha.to_json(),
            "u": self.u.to_json(),
            "flags": {
                "base_uniquely_ergodic": self.base_uniquely_ergodic,
                "omega0_faithful": self.omega0_faithful,
                "support_central": self.support_central,
            },
        }

    @classmethod
    def from_json(cls, data: Mapping, basis: SymbolBasis) -> "SkewSystem":
        context = context_from_json(data.get("algebra", {}), basis)
        theta = automorphism_from_json(data.get("theta", {}), context)
        alpha = automorphism_from_json(data.get("alpha", {}), context)
        u = element_from_json(data["u"], basis, context) if "u" in data else context.one()
        flags = data.get("flags", {})
        return cls(context, theta, alpha, u, bool(flags.get("base_uniquely_ergodic", False)), data.get("name"))


@dataclass
class ValidationFailure:
    check: str
    generator: str
    residual: float
    element: Optional[dict] = None

    def to_json(self) -> dict:
        return {"check": self.check, "generator": self.generator, "residual": self.residual, "element": self.element}


@dataclass
class ValidationReport:
    failures: List[ValidationFailure] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {"valid": self.valid, "failures": [failure.to_json() for failure in self.failures]}


def skew_validate(sys: SkewSystem) -> ValidationReport:
    """Check unitarity of u, the intertwining relation and ω₀∘θ = ω₀ on the algebra generators."""
    report = ValidationReport()
    one = sys.context.one()
    u_star = alg_adjoint(sys.u)
    for label, product in (("u u*", alg_mul(sys.u, u_star)), ("u* u", alg_mul(u_star, sys.u))):
        if not alg_isclose(product, one, VALIDATION_TOL):
            residual = alg_add(product, alg_scale(one, -1))
            report.failures.append(ValidationFailure(CHECK_UNITARITY, label, alg_one_norm(residual),
                                                     residual.to_json()))

    alpha_theta = compose(sys.alpha, sys.theta)
    theta_alpha = compose(sys.theta, sys.alpha)
    for name, g in sys.context.generators().items():
        lhs = alg_mul(sys.u, alg_apply(alpha_theta, g))
        rhs = alg_mul(alg_apply(theta_alpha, g), sys.u)
        if not alg_isclose(lhs, rhs, VALIDATION_TOL):
            residual = alg_add(lhs, alg_scale(rhs, -1))
            report.failures.append(ValidationFailure(CHECK_INTERTWINING, name, alg_one_norm(residual),
                                                     residual.to_json()))
        drift = abs(alg_state(alg_apply(sys.theta, g)) - alg_state(g))
        if drift > VALIDATION_TOL:
            report.failures.append(ValidationFailure(CHECK_STATE_INVARIANCE, name, drift))

    for failure in report.failures:
        _LOGGER.debug("validation of %s failed: %s on %s (residual %g)", sys.name, failure.check,
                      failure.generator, failure.residual)
    return report


def require_valid(sys: SkewSystem) -> SkewSystem:
    report = skew_validate(sys)
    if not report.valid:
        checks = ", ".join(f"{failure.check}[{failure.generator}]" for failure in report.failures)
        label = f" {sys.name}" if sys.name else ""
        raise InvalidSystemError(f"invalid skew system{label}: {checks}", report)
    return sys


def skew_cocycle(sys: SkewSystem, n: int) -> AlgebraElement:
    """u_n with (uV)^n = u_n V^n.

    u_0 = I, u_n = u·α(u)···α^{n−1}(u) for n ≥ 1 and
    u_n = α^{−1}(u*)·α^{−2}(u*)···α^{n}(u*) for n < 0.
    """
    cache = sys._cocycles
    if 0 not in cache:
        cache[0] = sys.context.one()
    step = 1 if n >= 0 else -1
    j = 0
    while j != n:
        j += step
        if j in cache:
            continue
        if step > 0:
            factor = alg_apply(power(sys.alpha, j - 1), sys.u)
        else:
            factor = alg_apply(power(sys.alpha, j), alg_adjoint(sys.u))
        cache[j] = alg_mul(cache[j - step], factor)
    return cache[n]


def _check_action(sys: SkewSystem, x: CrossedElement) -> None:
    if x.alpha != sys.alpha:
        raise ContextMismatchError("element lives in a crossed product over another action")


def skew_apply(sys: SkewSystem, x: CrossedElement) -> CrossedElement:
    """Φ(Σ V^k a_k) = Σ V^k α^{−k}(u_k)θ(a_k)."""
    _check_action(sys, x)
    return sys.element({k: alg_mul(sys.twist(k), alg_apply(sys.theta, a)) for k, a in x.modes()})


def skew_inverse_apply(sys: SkewSystem, x: CrossedElement) -> CrossedElement:
    return skew_apply(sys.inverse(), x)


def skew_power(sys: SkewSystem, x: CrossedElement, j: int) -> CrossedElement:
    """Φ^j(x); negative j iterates the inverse."""
    step = skew_apply if j >= 0 else skew_inverse_apply
    for _ in range(abs(j)):
        x = step(sys, x)
    return x


def skew_check_state_invariance(sys: SkewSystem, x: CrossedElement) -> float:
    return abs(cp_state(skew_apply(sys, x)) - cp_state(x))

