"""Exact phases e^{iθ} with θ = 2π(q0 + Σ q_i s_i).

The s_i are declared rationally independent symbols, so every character
equation between such phases reduces to rational linear algebra plus one
congruence on the constant coordinate. Floats only appear through the numeric
witnesses used by oracles, never in a decision.
"""
import cmath
import logging
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Mapping, Optional, Tuple, Union

from .errors import ConfigError, DomainError, IncompatibleBasisError

_LOGGER = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
HALF_TURN = Fraction(1, 2)
QUARTER_TURN = Fraction(1, 4)
THREE_QUARTER_TURN = Fraction(3, 4)
CANCELLATION_TOL = 1e-12

DEFAULT_WITNESSES = (
    ("s1", math.sqrt(2.0) - 1.0),
    ("s2", math.sqrt(3.0) - 1.0),
    ("s3", math.sqrt(5.0) - 2.0),
)

RationalLike = Union[int, Fraction, str]


def as_fraction(value: RationalLike) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exp:
            raise ConfigError(f"not a rational number: {value!r}") from exp
    raise TypeError(f"exact rational expected, got {type(value).__name__}")


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


@dataclass(frozen=True)
class SymbolBasis:
    """Ordered symbols with numeric witnesses; the constant 1 is coordinate 0.

    The basis is declared rationally independent. Nothing here checks that
    numerically.
    """

    symbols: Tuple[Tuple[str, float], ...] = DEFAULT_WITNESSES

    def __post_init__(self):
        symbols = tuple((str(name), float(witness)) for name, witness in self.symbols)
        names = [name for name, _ in symbols]
        if len(set(names)) != len(names):
            raise DomainError("symbol names must be unique")
        witnesses = [witness for _, witness in symbols]
        if len(set(witnesses)) != len(witnesses):
            raise DomainError("symbol witnesses must be pairwise distinct")
        for name, witness in symbols:
            if not 0.0 < witness < 1.0:
                raise DomainError(f"witness of {name} must lie in (0, 1), got {witness}")
        object.__setattr__(self, "symbols", symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(name for name, _ in self.symbols)

    @property
    def witnesses(self) -> Tuple[float, ...]:
        return tuple(witness for _, witness in self.symbols)

    def index(self, name: str) -> int:
        """Coordinate of `name` in an Angle's coefficient vector (1-based)."""
        try:
            return self.names.index(name) + 1
        except ValueError as exp:
            raise ConfigError(f"unknown symbol {name!r}, basis has {list(self.names)}") from exp

    def to_json(self) -> List[dict]:
        return [{"name": name, "witness": witness} for name, witness in self.symbols]

    @classmethod
    def from_json(cls, data) -> "SymbolBasis":
        return cls(tuple((item["name"], item["witness"]) for item in data))


DEFAULT_BASIS = SymbolBasis()


@dataclass(frozen=True)
class Angle:
    """The angle 2π(q0 + Σ_{i≥1} q_i·s_i) over a SymbolBasis.

    Structural equality compares the raw coefficients; use `phase_equal` or
    `reduced` to compare modulo full turns.
    """

    basis: SymbolBasis
    coeffs: Tuple[Fraction, ...]

    def __post_init__(self):
        coeffs = tuple(as_fraction(q) for q in self.coeffs)
        if len(coeffs) != len(self.basis) + 1:
            raise DomainError(f"angle needs {len(self.basis) + 1} coefficients, got {len(coeffs)}")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def zero(cls, basis: SymbolBasis = DEFAULT_BASIS) -> "Angle":
        return cls(basis, (Fraction(0),) * (len(basis) + 1))

    @classmethod
    def of(cls, q0: RationalLike = 0, basis: SymbolBasis = DEFAULT_BASIS, **symbols: RationalLike) -> "Angle":
        """Build 2π(q0 + Σ q·s) from keyword symbol coefficients, e.g. ``Angle.of("1/2", s1=1)``."""
        coeffs = [as_fraction(q0)] + [Fraction(0)] * len(basis)
        for name, q in symbols.items():
            coeffs[basis.index(name)] = as_fraction(q)
        return cls(basis, tuple(coeffs))

    @property
    def q0(self) -> Fraction:
        return self.coeffs[0]

    @property
    def symbolic(self) -> Tuple[Fraction, ...]:
        return self.coeffs[1:]

    @property
    def is_rational(self) -> bool:
        return not any(self.symbolic)

    def reduced(self) -> "Angle":
        q0 = self.q0 % 1
        if q0 == self.q0:
            return self
        return Angle(self.basis, (q0,) + self.symbolic)

    def shifted(self, turns: RationalLike) -> "Angle":
        return Angle(self.basis, (self.q0 + as_fraction(turns),) + self.symbolic)

    def phase_equal(self, other: "Angle") -> bool:
        _check_basis(self, other)
        return self.reduced() == other.reduced()

    def __add__(self, other: "Angle") -> "Angle":
        return angle_combine(self, other, 1, 1)

    def __sub__(self, other: "Angle") -> "Angle":
        return angle_combine(self, other, 1, -1)

    def __neg__(self) -> "Angle":
        return Angle(self.basis, tuple(-q for q in self.coeffs))

    def __mul__(self, factor: int) -> "Angle":
        if not isinstance(factor, int):
            return NotImplemented
        return Angle(self.basis, tuple(factor * q for q in self.coeffs))

    __rmul__ = __mul__

    def turns(self) -> float:
        """Numeric value of the angle divided by 2π, reduced into [0, 1)."""
        value = float(self.q0 % 1) + sum(float(q) * w for q, w in zip(self.symbolic, self.basis.witnesses))
        return value - math.floor(value)

    def to_complex(self) -> complex:
        turns = self.turns()
        if turns == 0.0:
            return complex(1.0, 0.0)
        return cmath.exp(1j * TWO_PI * turns)

    def to_json(self) -> dict:
        return {
            "q0": str(self.q0),
            "sym": {name: str(q) for name, q in zip(self.basis.names, self.symbolic) if q != 0},
        }

    @classmethod
    def from_json(cls, data: Mapping, basis: SymbolBasis = DEFAULT_BASIS) -> "Angle":
        return cls.of(data.get("q0", 0), basis, **data.get("sym", {}))

    def __str__(self) -> str:
        parts = []
        if self.q0 != 0 or self.is_rational:
            parts.append(str(self.q0))
        for name, q in zip(self.basis.names, self.symbolic):
            if q == 0:
                continue
            parts.append(name if q == 1 else f"-{name}" if q == -1 else f"{q}*{name}")
        return "2pi(" + " + ".join(parts).replace("+ -", "- ") + ")"


def _check_basis(a: Angle, b: Angle) -> None:
    if a.basis is not b.basis and a.basis != b.basis:
        raise IncompatibleBasisError()


def angle_combine(a: Angle, b: Angle, m: int, n: int) -> Angle:
    """Return m·a + n·b computed componentwise over the rationals."""
    _check_basis(a, b)
    return Angle(a.basis, tuple(m * p + n * q for p, q in zip(a.coeffs, b.coeffs)))


def is_trivial_phase(a: Angle) -> bool:
    """True iff e^{ia} = 1."""
    return a.is_rational and a.q0.denominator == 1


def to_radians(a: Angle) -> float:
    return TWO_PI * (float(a.q0) + sum(float(q) * w for q, w in zip(a.symbolic, a.basis.witnesses)))


def phase_order(a: Angle) -> Optional[int]:
    """Least n ≥ 1 with n·a a full turn, or None if e^{ia} has infinite order."""
    if not a.is_rational:
        return None
    return a.q0.denominator


def _solve_congruence(t: Fraction, c: Fraction) -> Optional[int]:
    """Integer m with m·t + c ∈ Z of least |m|, nonnegative on ties."""
    modulus = _lcm(t.denominator, c.denominator)
    a = t.numerator * (modulus // t.denominator)
    b = -c.numerator * (modulus // c.denominator)
    g = math.gcd(a, modulus)
    if b % g:
        return None
    step = modulus // g
    if step == 1:
        return 0
    base = (b // g) * pow(a // g, -1, step) % step
    alt = base - step
    return base if base <= -alt else alt


def _symbol_ratio(theta: Angle, phi: Angle, n: int) -> Tuple[bool, Optional[Fraction]]:
    """Solve n·φ_i + m·θ_i = 0 on every symbol coordinate.

    Returns (consistent, m) where m is None when the symbol coordinates leave
    m unconstrained.
    """
    ratio = None
    for t_i, p_i in zip(theta.symbolic, phi.symbolic):
        target = -n * p_i
        if t_i == 0:
            if target != 0:
                return False, None
            continue
        candidate = target / t_i
        if ratio is None:
            ratio = candidate
        elif candidate != ratio:
            return False, None
    return True, ratio


def solve_character(theta: Angle, phi: Angle, n: int) -> Optional[int]:
    """Return an integer m with n·φ + m·θ a full turn, or None.

    When several m work (θ rational) the one of least absolute value is
    returned, nonnegative on ties.
    """
    _check_basis(theta, phi)
    consistent, ratio = _symbol_ratio(theta, phi, n)
    if not consistent:
        return None
    const = n * phi.q0
    if ratio is not None:
        if ratio.denominator != 1:
            return None
        m = ratio.numerator
        return m if (const + m * theta.q0).denominator == 1 else None
    return _solve_congruence(theta.q0, const)


def minimal_level(theta: Angle, phi: Angle) -> Optional[Tuple[int, int]]:
    """Generator n0 of {n | solve_character(θ, φ, n) succeeds} with its witness m.

    Closed form: the symbol coordinates pin m/n to a rational line (or leave it
    free), then the constant coordinate cuts out an arithmetic progression.
    """
    _check_basis(theta, phi)
    consistent, ratio = _symbol_ratio(theta, phi, 1)
    if not consistent:
        return None
    if ratio is not None:
        residue = ratio.denominator * phi.q0 + ratio.numerator * theta.q0
        n0 = ratio.denominator * residue.denominator
    else:
        # n·φ0 has to land in Z + θ0·Z = (1/d)Z with d the denominator of θ0
        n0 = (phi.q0 * theta.q0.denominator).denominator
    m = solve_character(theta, phi, n0)
    if m is None:
        raise AssertionError(f"minimal level {n0} has no witness for theta={theta}, phi={phi}")
    return n0, m


_TERM_RE = re.compile(r"([+-]?)([^+-]+)")
_SYMBOL_RE = re.compile(r"^[A-Za-z_]\w*$")


def parse_angle(value: Union[str, int, Mapping], basis: SymbolBasis = DEFAULT_BASIS) -> Angle:
    """Parse an angle given in turns: ``"1/3"``, ``"-s1"``, ``"1/2 + s1 - 2/3*s2"`` or the JSON object form."""
    if isinstance(value, Mapping):
        return Angle.from_json(value, basis)
    if isinstance(value, int) and not isinstance(value, bool):
        return Angle.of(value, basis)
    if not isinstance(value, str) or not value.strip():
        raise ConfigError(f"cannot parse angle from {value!r}")
    text = value.replace(" ", "")
    coeffs = [Fraction(0)] * (len(basis) + 1)
    consumed = 0
    for match in _TERM_RE.finditer(text):
        if match.start() != consumed:
            raise ConfigError(f"cannot parse angle {value!r}")
        consumed = match.end()
        sign, body = match.groups()
        factor = -1 if sign == "-" else 1
        if "*" in body:
            coef, name = body.split("*", 1)
            coeffs[basis.index(name)] += factor * as_fraction(coef)
        elif _SYMBOL_RE.match(body):
            coeffs[basis.index(body)] += factor
        else:
            coeffs[0] += factor * as_fraction(body)
    if consumed != len(text):
        raise ConfigError(f"cannot parse angle {value!r}")
    return Angle(basis, tuple(coeffs))


_QUARTER_POWERS = (complex(1.0, 0.0), complex(0.0, 1.0), complex(-1.0, 0.0), complex(0.0, -1.0))


def _canonical(phase: Angle, amp: complex) -> Tuple[Angle, complex]:
    """Move whole quarter turns of the phase into the amplitude, leaving q0 in [0, 1/4)."""
    phase = phase.reduced()
    quarters = int(phase.q0 // QUARTER_TURN)
    if quarters:
        phase = phase.shifted(-quarters * QUARTER_TURN)
        amp = amp * _QUARTER_POWERS[quarters]
    return phase, amp


class PhaseScalar:
    """Finite sum Σ c_j e^{iψ_j} with exact phases ψ_j and float amplitudes c_j.

    Phases are reduced modulo quarter turns with the quarter turns carried by
    the amplitude, so every scalar has one normal form and products of unit
    phases stay exact.
    """

    __slots__ = ("basis", "_terms")

    def __init__(self, basis: SymbolBasis = DEFAULT_BASIS, terms: Optional[Mapping[Angle, complex]] = None):
        self.basis = basis
        self._terms: Dict[Angle, complex] = {}
        for phase, amp in (terms or {}).items():
            self._accumulate(phase, amp)

    def _accumulate(self, phase: Angle, amp) -> None:
        if phase.basis != self.basis:
            raise IncompatibleBasisError()
        phase, amp = _canonical(phase, complex(amp))
        total = self._terms.pop(phase, 0j) + amp
        if total != 0:
            self._terms[phase] = total

    def _drop_cancelled(self) -> "PhaseScalar":
        """Remove groups of terms with one symbolic part whose roots of unity sum to zero."""
        groups: Dict[Tuple[Fraction, ...], List[Angle]] = {}
        for phase in self._terms:
            groups.setdefault(phase.symbolic, []).append(phase)
        for phases in groups.values():
            if len(phases) < 2:
                continue
            scale = sum(abs(self._terms[phase]) for phase in phases)
            total = sum(self._terms[phase] * cmath.exp(1j * TWO_PI * float(phase.q0)) for phase in phases)
            if abs(total) <= CANCELLATION_TOL * scale:
                for phase in phases:
                    del self._terms[phase]
        return self

    @classmethod
    def zero(cls, basis: SymbolBasis = DEFAULT_BASIS) -> "PhaseScalar":
        return cls(basis)

    @classmethod
    def one(cls, basis: SymbolBasis = DEFAULT_BASIS) -> "PhaseScalar":
        return cls(basis, {Angle.zero(basis): 1.0})

    @classmethod
    def from_phase(cls, phase: Angle, amp: complex = 1.0) -> "PhaseScalar":
        return cls(phase.basis, {phase: amp})

    @classmethod
    def constant(cls, value: complex, basis: SymbolBasis = DEFAULT_BASIS) -> "PhaseScalar":
        return cls(basis, {Angle.zero(basis): value})

    def coerce(self, other) -> "PhaseScalar":
        if isinstance(other, PhaseScalar):
            if other.basis != self.basis:
                raise IncompatibleBasisError()
            return other
        if isinstance(other, (int, float, complex)) and not isinstance(other, bool):
            return PhaseScalar.constant(other, self.basis)
        raise TypeError(f"cannot combine PhaseScalar with {type(other).__name__}")

    def items(self) -> Iterator[Tuple[Angle, complex]]:
        return iter(sorted(self._terms.items(), key=lambda item: item[0].coeffs))

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __add__(self, other) -> "PhaseScalar":
        other = self.coerce(other)
        result = PhaseScalar(self.basis, self._terms)
        for phase, amp in other._terms.items():
            result._accumulate(phase, amp)
        return result._drop_cancelled()

    __radd__ = __add__

    def __neg__(self) -> "PhaseScalar":
        return PhaseScalar(self.basis, {phase: -amp for phase, amp in self._terms.items()})

    def __sub__(self, other) -> "PhaseScalar":
        return self + (-self.coerce(other))

    def __rsub__(self, other) -> "PhaseScalar":
        return self.coerce(other) - self

    def __mul__(self, other) -> "PhaseScalar":
        if isinstance(other, (int, float, complex)) and not isinstance(other, bool):
            result = PhaseScalar(self.basis)
            for phase, amp in self._terms.items():
                result._accumulate(phase, amp * other)
            return result
        other = self.coerce(other)
        result = PhaseScalar(self.basis)
        for phase_a, amp_a in self._terms.items():
            for phase_b, amp_b in other._terms.items():
                result._accumulate(phase_a + phase_b, amp_a * amp_b)
        return result._drop_cancelled()

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "PhaseScalar":
        if exponent < 0:
            decomposition = self.single_phase()
            if decomposition is None:
                raise DomainError("only single-phase scalars have exact inverses")
            modulus, phase = decomposition
            return PhaseScalar.from_phase(phase * exponent, modulus ** exponent)
        result = PhaseScalar.one(self.basis)
        for _ in range(exponent):
            result = result * self
        return result

    def conjugate(self) -> "PhaseScalar":
        return PhaseScalar(self.basis, {-phase: amp.conjugate() for phase, amp in self._terms.items()})

    def value(self) -> complex:
        return sum((amp * phase.to_complex() for phase, amp in self._terms.items()), complex(0.0, 0.0))

    def single_phase(self) -> Optional[Tuple[float, Angle]]:
        """(modulus, phase) when the scalar is a positive number times one exact phase."""
        if len(self._terms) != 1:
            return None
        ((phase, amp),) = self._terms.items()
        if amp.imag == 0.0 and amp.real > 0.0:
            return amp.real, phase
        if amp.imag == 0.0:
            return -amp.real, phase.shifted(HALF_TURN).reduced()
        if amp.real == 0.0:
            turn = QUARTER_TURN if amp.imag > 0.0 else THREE_QUARTER_TURN
            return abs(amp.imag), phase.shifted(turn).reduced()
        return None

    def isclose(self, other, tol: float = 1e-12) -> bool:
        return abs(self.value() - self.coerce(other).value()) <= tol

    def __eq__(self, other) -> bool:
        if not isinstance(other, PhaseScalar):
            return NotImplemented
        return self.basis == other.basis and self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __repr__(self) -> str:
        if not self._terms:
            return "PhaseScalar(0)"
        return "PhaseScalar(" + " + ".join(f"{amp:g}*e^(i{phase})" for phase, amp in self.items()) + ")"

    def to_json(self) -> List[dict]:
        return [{"phase": phase.to_json(), "re": amp.real, "im": amp.imag} for phase, amp in self.items()]

    @classmethod
    def from_json(cls, data, basis: SymbolBasis = DEFAULT_BASIS) -> "PhaseScalar":
        result = cls(basis)
        for item in data:
            phase = Angle.from_json(item["phase"], basis) if "phase" in item else Angle.zero(basis)
            result._accumulate(phase, complex(item.get("re", 0.0), item.get("im", 0.0)))
        return result
