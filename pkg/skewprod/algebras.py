"""Concrete coefficient algebras and their reference states.

Two families are supported:

* the noncommutative torus A_γ generated by unitaries U, V with UV = e^{2πiγ}VU
  (rank 2), which at rank 1 is the circle algebra C(T) generated by U alone;
* continuous sequences on the one-point compactification Z∞, with the state
  μ₀(f) = f(∞).

Every coefficient is a :class:`~skewprod.angles.PhaseScalar`, so reordering
phases accumulate exactly.
"""
import logging
from dataclasses import dataclass
from typing import ClassVar, Dict, Iterable, List, Mapping, Optional, Tuple, Union

from .angles import DEFAULT_BASIS, Angle, PhaseScalar, SymbolBasis, is_trivial_phase
from .errors import ContextMismatchError, DomainError

_LOGGER = logging.getLogger(__name__)

KIND_TORUS = "torus"
KIND_NCTORUS = "nctorus"
KIND_ZINF = "zinf"

Monomial = Tuple[int, int]


@dataclass(frozen=True)
class NCTorusContext:
    """The algebra A_γ; rank 1 is the commutative circle algebra C(T)."""

    gamma: Angle
    rank: int = 2

    omega0_faithful: ClassVar[bool] = True
    support_central: ClassVar[bool] = True

    def __post_init__(self):
        if self.rank not in (1, 2):
            raise DomainError(f"torus rank must be 1 or 2, got {self.rank}")
        if self.rank == 1 and not is_trivial_phase(self.gamma):
            raise DomainError("the circle algebra has no deformation parameter")

    @classmethod
    def circle(cls, basis: SymbolBasis = DEFAULT_BASIS) -> "NCTorusContext":
        return cls(Angle.zero(basis), rank=1)

    @property
    def basis(self) -> SymbolBasis:
        return self.gamma.basis

    @property
    def kind(self) -> str:
        return KIND_TORUS if self.rank == 1 else KIND_NCTORUS

    @property
    def is_commutative(self) -> bool:
        return is_trivial_phase(self.gamma)

    def monomial(self, m: int, n: int = 0, scalar=1.0) -> "NCTorusElement":
        return NCTorusElement(self, {(m, n): scalar})

    def one(self) -> "NCTorusElement":
        return self.monomial(0, 0)

    def zero(self) -> "NCTorusElement":
        return NCTorusElement(self)

    def scalar(self, value) -> "NCTorusElement":
        return self.monomial(0, 0, value)

    def generators(self) -> Dict[str, "NCTorusElement"]:
        if self.rank == 1:
            return {"U": self.monomial(1, 0)}
        return {"U": self.monomial(1, 0), "V": self.monomial(0, 1)}

    def to_json(self) -> dict:
        return {"kind": self.kind, "gamma": self.gamma.to_json(), "rank": self.rank}


@dataclass(frozen=True)
class ZInfContext:
    """Continuous functions on Z∞ with the point-mass state at ∞."""

    basis: SymbolBasis = DEFAULT_BASIS

    kind: ClassVar[str] = KIND_ZINF
    rank: ClassVar[int] = 0
    omega0_faithful: ClassVar[bool] = False
    support_central: ClassVar[bool] = True
    is_commutative: ClassVar[bool] = True

    def sequence(self, at_infinity=1.0, points: Optional[Mapping[int, object]] = None) -> "ZInfElement":
        return ZInfElement(self, at_infinity, points)

    def point(self, l: int) -> "ZInfElement":
        """Indicator function of the point l."""
        return ZInfElement(self, 0.0, {l: 1.0})

    def one(self) -> "ZInfElement":
        return ZInfElement(self, 1.0)

    def zero(self) -> "ZInfElement":
        return ZInfElement(self, 0.0)

    def scalar(self, value) -> "ZInfElement":
        return ZInfElement(self, value)

    def generators(self) -> Dict[str, "ZInfElement"]:
        # shifts are determined by where they send one point
        return {"delta0": self.point(0), "one": self.one()}

    def to_json(self) -> dict:
        return {"kind": self.kind}


AlgebraContext = Union[NCTorusContext, ZInfContext]


def _as_scalar(basis: SymbolBasis, value) -> PhaseScalar:
    if isinstance(value, PhaseScalar):
        return value
    return PhaseScalar.constant(value, basis)


class AlgebraElement:
    """Operator sugar shared by the element classes."""

    __slots__ = ("context",)

    def __add__(self, other):
        return alg_add(self, other)

    def __sub__(self, other):
        return alg_add(self, alg_scale(other, -1))

    def __neg__(self):
        return alg_scale(self, -1)

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return alg_mul(self, other)
        return alg_scale(self, other)

    def __rmul__(self, other):
        return alg_scale(self, other)

    def adjoint(self):
        return alg_adjoint(self)


class NCTorusElement(AlgebraElement):
    """Finite sum Σ c_{m,n} U^m V^n in normal order."""

    __slots__ = ("_coeffs",)

    def __init__(self, context: NCTorusContext, coeffs: Optional[Mapping[Monomial, object]] = None):
        self.context = context
        self._coeffs: Dict[Monomial, PhaseScalar] = {}
        for key, value in (coeffs or {}).items():
            self._accumulate(key, _as_scalar(context.basis, value))

    @classmethod
    def _raw(cls, context: NCTorusContext, coeffs: Dict[Monomial, PhaseScalar]) -> "NCTorusElement":
        element = cls.__new__(cls)
        element.context = context
        element._coeffs = coeffs
        return element

    def _accumulate(self, key: Monomial, scalar: PhaseScalar) -> None:
        m, n = int(key[0]), int(key[1])
        if self.context.rank == 1 and n != 0:
            raise DomainError("elements of the circle algebra have V-degree 0")
        current = self._coeffs.pop((m, n), None)
        total = scalar if current is None else current + scalar
        if total:
            self._coeffs[(m, n)] = total

    def coefficient(self, key: Monomial) -> PhaseScalar:
        return self._coeffs.get(tuple(key), PhaseScalar.zero(self.context.basis))

    def terms(self) -> List[Tuple[Monomial, PhaseScalar]]:
        return sorted(self._coeffs.items())

    def support(self) -> List[Monomial]:
        return sorted(self._coeffs)

    def __len__(self) -> int:
        return len(self._coeffs)

    def is_zero(self) -> bool:
        return not self._coeffs

    def __eq__(self, other) -> bool:
        if not isinstance(other, NCTorusElement):
            return NotImplemented
        return self.context == other.context and self._coeffs == other._coeffs

    __hash__ = None

    def __repr__(self) -> str:
        if not self._coeffs:
            return "0"
        return " + ".join(f"{coeff!r}*U^{m}V^{n}" for (m, n), coeff in self.terms())

    def to_json(self) -> dict:
        terms = []
        for (m, n), coeff in self.terms():
            for phase, amp in coeff.items():
                terms.append({"m": m, "n": n, "re": amp.real, "im": amp.imag, "phase": phase.to_json()})
        return {"kind": self.context.kind, "gamma": self.context.gamma.to_json(), "rank": self.context.rank,
                "terms": terms}


class ZInfElement(AlgebraElement):
    """Sequence on Z∞ that equals its value at ∞ outside finitely many points."""

    __slots__ = ("at_infinity", "_points")

    def __init__(self, context: ZInfContext, at_infinity=1.0, points: Optional[Mapping[int, object]] = None):
        self.context = context
        self.at_infinity = _as_scalar(context.basis, at_infinity)
        self._points: Dict[int, PhaseScalar] = {}
        for l, value in (points or {}).items():
            value = _as_scalar(context.basis, value)
            if value != self.at_infinity:
                self._points[int(l)] = value

    def value_at(self, l: int) -> PhaseScalar:
        return self._points.get(l, self.at_infinity)

    def exceptional_points(self) -> List[int]:
        return sorted(self._points)

    def points(self) -> List[Tuple[int, PhaseScalar]]:
        return sorted(self._points.items())

    def deviations(self) -> Dict[int, complex]:
        """Numeric view f(l) − f(∞) on the exceptional points."""
        base = self.at_infinity.value()
        return {l: value.value() - base for l, value in self.points()}

    def is_zero(self) -> bool:
        return not self.at_infinity and not self._points

    def __len__(self) -> int:
        return len(self._points) + 1

    def __eq__(self, other) -> bool:
        if not isinstance(other, ZInfElement):
            return NotImplemented
        return (self.context == other.context and self.at_infinity == other.at_infinity
                and self._points == other._points)

    __hash__ = None

    def __repr__(self) -> str:
        points = ", ".join(f"{l}: {value!r}" for l, value in self.points())
        return f"ZInfElement(inf={self.at_infinity!r}, {{{points}}})"

    def to_json(self) -> dict:
        return {
            "kind": KIND_ZINF,
            "at_infinity": self.at_infinity.to_json(),
            "points": [{"l": l, "value": value.to_json()} for l, value in self.points()],
        }


def check_context(a, b) -> None:
    if a.context != b.context:
        raise ContextMismatchError(f"cannot combine elements of {a.context} and {b.context}")


def alg_add(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    check_context(a, b)
    if isinstance(a, ZInfElement):
        points = {l: a.value_at(l) + b.value_at(l) for l in set(a.exceptional_points()) | set(b.exceptional_points())}
        return ZInfElement(a.context, a.at_infinity + b.at_infinity, points)
    result = NCTorusElement._raw(a.context, dict(a._coeffs))
    for key, coeff in b._coeffs.items():
        result._accumulate(key, coeff)
    return result


def alg_scale(a: AlgebraElement, factor) -> AlgebraElement:
    factor = _as_scalar(a.context.basis, factor)
    if isinstance(a, ZInfElement):
        return ZInfElement(a.context, a.at_infinity * factor, {l: value * factor for l, value in a.points()})
    coeffs = {}
    for key, coeff in a._coeffs.items():
        product = coeff * factor
        if product:
            coeffs[key] = product
    return NCTorusElement._raw(a.context, coeffs)


def alg_sum(items: Iterable[AlgebraElement], context: AlgebraContext) -> AlgebraElement:
    total = context.zero()
    for item in items:
        total = alg_add(total, item)
    return total


def reorder_phase(context: NCTorusContext, n: int, p: int) -> Angle:
    """Phase picked up by moving V^n past U^p: V^n U^p = e^{−2πiγnp} U^p V^n."""
    return context.gamma * (-n * p)


def alg_mul(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """Product in the common algebra: normal-order reordering on A_γ, pointwise on Z∞."""
    check_context(a, b)
    if isinstance(a, ZInfElement):
        points = {l: a.value_at(l) * b.value_at(l) for l in set(a.exceptional_points()) | set(b.exceptional_points())}
        return ZInfElement(a.context, a.at_infinity * b.at_infinity, points)
    context = a.context
    result = NCTorusElement._raw(context, {})
    commutative = context.is_commutative
    for (m, n), c in a._coeffs.items():
        for (p, q), d in b._coeffs.items():
            coeff = c * d
            if not commutative and n * p:
                coeff = coeff * PhaseScalar.from_phase(reorder_phase(context, n, p))
            result._accumulate((m + p, n + q), coeff)
    return result


def alg_adjoint(a: AlgebraElement) -> AlgebraElement:
    if isinstance(a, ZInfElement):
        return ZInfElement(a.context, a.at_infinity.conjugate(), {l: value.conjugate() for l, value in a.points()})
    context = a.context
    coeffs = {}
    for (m, n), c in a._coeffs.items():
        coeff = c.conjugate()
        if not context.is_commutative and m * n:
            # (U^m V^n)* = V^{-n} U^{-m}
            coeff = coeff * PhaseScalar.from_phase(reorder_phase(context, -n, -m))
        coeffs[(-m, -n)] = coeff
    return NCTorusElement._raw(context, coeffs)


def alg_state_scalar(a: AlgebraElement) -> PhaseScalar:
    """Exact value of the reference state: the trace τ on A_γ, evaluation at ∞ on Z∞."""
    if isinstance(a, ZInfElement):
        return a.at_infinity
    return a.coefficient((0, 0))


def alg_state(a: AlgebraElement) -> complex:
    return alg_state_scalar(a).value()


def alg_one_norm(a: AlgebraElement) -> float:
    """Coefficient ℓ¹ norm, an upper bound for the C*-norm (on Z∞ a crude bound)."""
    if isinstance(a, ZInfElement):
        return abs(a.at_infinity.value()) + sum(abs(d) for d in a.deviations().values())
    return sum(abs(coeff.value()) for coeff in a._coeffs.values())


@dataclass(frozen=True)
class ScalarUnitary:
    """a = modulus·e^{i·phase}·U^m V^n; exponent is None for constant sequences on Z∞."""

    modulus: float
    phase: Angle
    exponent: Optional[Monomial]


def is_scalar_unitary(a: AlgebraElement) -> Optional[ScalarUnitary]:
    """Decompose a single monomial with an exact phase (a constant on Z∞)."""
    if isinstance(a, ZInfElement):
        if a.exceptional_points():
            return None
        decomposition = a.at_infinity.single_phase()
        if decomposition is None:
            return None
        return ScalarUnitary(decomposition[0], decomposition[1], None)
    if len(a) != 1:
        return None
    ((key, coeff),) = a.terms()
    decomposition = coeff.single_phase()
    if decomposition is None:
        return None
    return ScalarUnitary(decomposition[0], decomposition[1], key)


def alg_isclose(a: AlgebraElement, b: AlgebraElement, tol: float = 1e-12) -> bool:
    """Numeric coefficientwise comparison within `tol`."""
    check_context(a, b)
    if isinstance(a, ZInfElement):
        if abs(a.at_infinity.value() - b.at_infinity.value()) > tol:
            return False
        points = set(a.exceptional_points()) | set(b.exceptional_points())
        return all(abs(a.value_at(l).value() - b.value_at(l).value()) <= tol for l in points)
    keys = set(a.support()) | set(b.support())
    return all(abs(a.coefficient(key).value() - b.coefficient(key).value()) <= tol for key in keys)


def is_unitary(a: AlgebraElement, tol: float = 1e-12) -> bool:
    one = a.context.one()
    return alg_isclose(alg_mul(a, alg_adjoint(a)), one, tol) and alg_isclose(alg_mul(alg_adjoint(a), a), one, tol)


def context_from_json(data: Mapping, basis: SymbolBasis = DEFAULT_BASIS) -> AlgebraContext:
    kind = data.get("kind", KIND_NCTORUS)
    if kind == KIND_ZINF:
        return ZInfContext(basis)
    if kind == KIND_TORUS:
        return NCTorusContext.circle(basis)
    if kind == KIND_NCTORUS:
        return NCTorusContext(Angle.from_json(data.get("gamma", {}), basis), int(data.get("rank", 2)))
    raise DomainError(f"unknown algebra kind {kind!r}")


def element_from_json(data: Mapping, basis: SymbolBasis = DEFAULT_BASIS,
                      context: Optional[AlgebraContext] = None) -> AlgebraElement:
    context = context or context_from_json(data, basis)
    if isinstance(context, ZInfContext):
        points = {int(item["l"]): PhaseScalar.from_json(item["value"], basis) for item in data.get("points", [])}
        return ZInfElement(context, PhaseScalar.from_json(data.get("at_infinity", []), basis), points)
    element = NCTorusElement(context)
    for term in data.get("terms", []):
        phase = Angle.from_json(term["phase"], basis) if "phase" in term else Angle.zero(basis)
        scalar = PhaseScalar.from_phase(phase, complex(term.get("re", 0.0), term.get("im", 0.0)))
        element._accumulate((int(term["m"]), int(term.get("n", 0))), scalar)
    return element
