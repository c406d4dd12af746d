"""The crossed product A⋊_α Z as finitely supported Fourier series x = Σ_k V^k a_k."""
import logging
from typing import Dict, List, Mapping, Optional, Tuple

from .algebras import (
    AlgebraContext,
    AlgebraElement,
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
from .angles import Angle, PhaseScalar, SymbolBasis
from .automorphisms import Automorphism, alg_apply, automorphism_from_json, power
from .errors import ContextMismatchError, DomainError

_LOGGER = logging.getLogger(__name__)


class CrossedElement:
    """Σ_k V^k a_k with the coefficient of each power of V on the right."""

    __slots__ = ("context", "alpha", "_modes")

    def __init__(self, context: AlgebraContext, alpha: Automorphism,
                 modes: Optional[Mapping[int, AlgebraElement]] = None):
        if alpha.context != context:
            raise ContextMismatchError("the crossed-product action lives on another algebra")
        self.context = context
        self.alpha = alpha
        self._modes: Dict[int, AlgebraElement] = {}
        for k, coeff in (modes or {}).items():
            self._accumulate(int(k), coeff)

    def _accumulate(self, k: int, coeff: AlgebraElement) -> None:
        if coeff.context != self.context:
            raise ContextMismatchError("mode coefficient from another algebra")
        current = self._modes.pop(k, None)
        total = coeff if current is None else alg_add(current, coeff)
        if not total.is_zero():
            self._modes[k] = total

    @classmethod
    def v_power(cls, alpha: Automorphism, k: int, coeff: Optional[AlgebraElement] = None) -> "CrossedElement":
        """The element V^k·a (a defaults to 1)."""
        context = alpha.context
        return cls(context, alpha, {k: coeff if coeff is not None else context.one()})

    @classmethod
    def from_algebra(cls, alpha: Automorphism, a: AlgebraElement) -> "CrossedElement":
        return cls.v_power(alpha, 0, a)

    def mode(self, k: int) -> AlgebraElement:
        return self._modes.get(k, self.context.zero())

    def modes(self) -> List[Tuple[int, AlgebraElement]]:
        return sorted(self._modes.items())

    def support(self) -> List[int]:
        return sorted(self._modes)

    def radius(self) -> int:
        return max((abs(k) for k in self._modes), default=0)

    def is_zero(self) -> bool:
        return not self._modes

    def __add__(self, other: "CrossedElement") -> "CrossedElement":
        return cp_add(self, other)

    def __sub__(self, other: "CrossedElement") -> "CrossedElement":
        return cp_add(self, cp_scale(other, -1))

    def __neg__(self) -> "CrossedElement":
        return cp_scale(self, -1)

    def __mul__(self, other):
        if isinstance(other, CrossedElement):
            return cp_mul(self, other)
        return cp_scale(self, other)

    def __rmul__(self, other):
        return cp_scale(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CrossedElement):
            return NotImplemented
        return self.alpha == other.alpha and self._modes == other._modes

    __hash__ = None

    def __repr__(self) -> str:
        if not self._modes:
            return "CrossedElement(0)"
        return " + ".join(f"V^{k}({coeff!r})" for k, coeff in self.modes())

    def to_json(self) -> dict:
        return {
            "algebra": self.context.to_json(),
            "alpha": self.alpha.to_json(),
            "modes": [{"k": k, "coeff": coeff.to_json()} for k, coeff in self.modes()],
        }

    @classmethod
    def from_json(cls, data: Mapping, basis: SymbolBasis, alpha: Optional[Automorphism] = None) -> "CrossedElement":
        if alpha is None:
            context = context_from_json(data["algebra"], basis)
            alpha = automorphism_from_json(data.get("alpha", {}), context)
        context = alpha.context
        modes = {int(item["k"]): element_from_json(item["coeff"], basis, context) for item in data.get("modes", [])}
        return cls(context, alpha, modes)


def _check_pair(x: CrossedElement, y: CrossedElement) -> None:
    if x.alpha != y.alpha:
        raise ContextMismatchError("crossed-product elements over different actions")


def _rebuild(x: CrossedElement, modes: Dict[int, AlgebraElement]) -> CrossedElement:
    return CrossedElement(x.context, x.alpha, modes)


def cp_add(x: CrossedElement, y: CrossedElement) -> CrossedElement:
    _check_pair(x, y)
    result = _rebuild(x, dict(x._modes))
    for k, coeff in y._modes.items():
        result._accumulate(k, coeff)
    return result


def cp_scale(x: CrossedElement, factor) -> CrossedElement:
    return _rebuild(x, {k: alg_scale(coeff, factor) for k, coeff in x._modes.items()})


def cp_mul(x: CrossedElement, y: CrossedElement) -> CrossedElement:
    """Bilinear extension of (V^m a)(V^n b) = V^{m+n} α^{−n}(a) b."""
    _check_pair(x, y)
    result = _rebuild(x, {})
    for n, b in y._modes.items():
        twist = power(x.alpha, -n)
        for m, a in x._modes.items():
            result._accumulate(m + n, alg_mul(alg_apply(twist, a), b))
    return result


def cp_adjoint(x: CrossedElement) -> CrossedElement:
    """(V^m a)* = V^{−m} α^m(a*)."""
    return _rebuild(x, {-m: alg_apply(power(x.alpha, m), alg_adjoint(a)) for m, a in x._modes.items()})


def cp_gauge(z_angle: Angle, x: CrossedElement) -> CrossedElement:
    """ρ_z with z = e^{i·z_angle}: mode k picks up z^k."""
    return _rebuild(x, {k: alg_scale(a, PhaseScalar.from_phase(z_angle * k)) for k, a in x._modes.items()})


def cp_expectation(x: CrossedElement) -> AlgebraElement:
    """E(x) = a_0, the average of the gauge action."""
    return x.mode(0)


def cp_state(x: CrossedElement) -> complex:
    """ω = ω₀∘E."""
    return alg_state(cp_expectation(x))


def cp_inner(x: CrossedElement, y: CrossedElement) -> complex:
    """GNS inner product ⟨x, y⟩ = ω(x*y)."""
    return cp_state(cp_mul(cp_adjoint(x), y))


def cp_one_norm(x: CrossedElement) -> float:
    return sum(alg_one_norm(a) for a in x._modes.values())


def cp_isclose(x: CrossedElement, y: CrossedElement, tol: float = 1e-12) -> bool:
    _check_pair(x, y)
    zero = x.context.zero()
    return all(alg_isclose(x._modes.get(k, zero), y._modes.get(k, zero), tol)
               for k in set(x._modes) | set(y._modes))


def fejer_weight(k: int, N: int) -> float:
    return max(0.0, 1.0 - abs(k) / N)


def cp_fejer(x: CrossedElement, N: int) -> CrossedElement:
    """Fejér mean: the average of the first N symmetric partial sums of the Fourier expansion."""
    if N < 1:
        raise DomainError(f"Fejér order must be positive, got {N}")
    return _rebuild(x, {k: alg_scale(a, fejer_weight(k, N)) for k, a in x._modes.items() if abs(k) < N})


def cp_partial_sum(x: CrossedElement, radius: int) -> CrossedElement:
    """Symmetric partial sum Σ_{|k| ≤ radius} V^k a_k."""
    return _rebuild(x, {k: a for k, a in x._modes.items() if abs(k) <= radius})


def cp_abel(x: CrossedElement, r: float) -> CrossedElement:
    """Abel mean Σ r^{|k|} V^k a_k."""
    if not 0.0 < r < 1.0:
        raise DomainError(f"Abel parameter must lie in (0, 1), got {r}")
    return _rebuild(x, {k: alg_scale(a, r ** abs(k)) for k, a in x._modes.items()})
