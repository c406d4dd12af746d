"""Automorphisms of the coefficient algebras.

Torus automorphisms are given by generator images U ↦ e^{iφ_U}U^aV^c,
V ↦ e^{iφ_V}U^bV^d; on Z∞ the only maps are the shifts (σf)(l) = f(l − p).
"""
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Tuple, Union

from .algebras import (
    Monomial,
    NCTorusContext,
    NCTorusElement,
    ZInfContext,
    ZInfElement,
    alg_add,
    alg_adjoint,
    alg_mul,
    alg_scale,
    is_scalar_unitary,
)
from .angles import Angle, PhaseScalar, is_trivial_phase, parse_angle
from .errors import ContextMismatchError, DomainError

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class GeneratorImage:
    phase: Angle
    exponent: Monomial

    def __post_init__(self):
        object.__setattr__(self, "phase", self.phase.reduced())
        object.__setattr__(self, "exponent", (int(self.exponent[0]), int(self.exponent[1])))

    def to_json(self) -> dict:
        return {"phase": self.phase.to_json(), "exp": list(self.exponent)}


@dataclass(frozen=True)
class TorusAutomorphism:
    context: NCTorusContext
    image_u: GeneratorImage
    image_v: GeneratorImage

    def __post_init__(self):
        det = self.determinant
        if det not in (1, -1):
            raise DomainError(f"exponent matrix {self.matrix} is not invertible over Z")
        if det == -1 and not self.context.is_commutative:
            raise DomainError("orientation-reversing maps do not preserve the commutation relation")
        if self.context.rank == 1 and (self.image_u.exponent[1] != 0 or self.image_v != _fixed_v(self.context)):
            raise DomainError("automorphisms of the circle algebra send U to a multiple of U^{±1}")

    @classmethod
    def identity(cls, context: NCTorusContext) -> "TorusAutomorphism":
        return cls.rotation(context, Angle.zero(context.basis))

    @classmethod
    def rotation(cls, context: NCTorusContext, phase_u: Angle, phase_v: Angle = None) -> "TorusAutomorphism":
        """U ↦ e^{iφ_U}U, V ↦ e^{iφ_V}V."""
        phase_v = phase_v if phase_v is not None else Angle.zero(context.basis)
        return cls(context, GeneratorImage(phase_u, (1, 0)), GeneratorImage(phase_v, (0, 1)))

    @classmethod
    def anzai(cls, context: NCTorusContext, theta: Angle, phase_v: Angle = None) -> "TorusAutomorphism":
        """U ↦ e^{iθ}U, V ↦ e^{iφ_V}UV."""
        phase_v = phase_v if phase_v is not None else Angle.zero(context.basis)
        return cls(context, GeneratorImage(theta, (1, 0)), GeneratorImage(phase_v, (1, 1)))

    @property
    def matrix(self) -> Tuple[Tuple[int, int], Tuple[int, int]]:
        (a, c), (b, d) = self.image_u.exponent, self.image_v.exponent
        return (a, b), (c, d)

    @property
    def determinant(self) -> int:
        (a, b), (c, d) = self.matrix
        return a * d - b * c

    def image(self, name: str) -> NCTorusElement:
        image = self.image_u if name == "U" else self.image_v
        return self.context.monomial(*image.exponent, scalar=PhaseScalar.from_phase(image.phase))

    def is_identity(self) -> bool:
        return self.matrix == ((1, 0), (0, 1)) and is_trivial_phase(self.image_u.phase) \
            and is_trivial_phase(self.image_v.phase)

    def exponent_map(self, key: Monomial) -> Monomial:
        (a, b), (c, d) = self.matrix
        m, n = key
        return a * m + b * n, c * m + d * n

    def to_json(self) -> dict:
        return {"kind": "torus", "U": self.image_u.to_json(), "V": self.image_v.to_json()}


@dataclass(frozen=True)
class ZInfAutomorphism:
    """The shift (σf)(l) = f(l − p) fixing ∞."""

    context: ZInfContext
    shift_power: int

    @classmethod
    def identity(cls, context: ZInfContext) -> "ZInfAutomorphism":
        return cls(context, 0)

    def is_identity(self) -> bool:
        return self.shift_power == 0

    def to_json(self) -> dict:
        return {"kind": "shift", "p": self.shift_power}


Automorphism = Union[TorusAutomorphism, ZInfAutomorphism]


def _fixed_v(context: NCTorusContext) -> GeneratorImage:
    return GeneratorImage(Angle.zero(context.basis), (0, 1))


def generator_names(context) -> Tuple[str, ...]:
    return tuple(context.generators())


def _check(sigma: Automorphism, context) -> None:
    if sigma.context != context:
        raise ContextMismatchError(f"automorphism of {sigma.context} applied in {context}")


@lru_cache(maxsize=4096)
def _generator_power(sigma: TorusAutomorphism, name: str, k: int) -> NCTorusElement:
    base = sigma.image(name)
    if k < 0:
        base, k = alg_adjoint(base), -k
    result = sigma.context.one()
    while k:
        if k & 1:
            result = alg_mul(result, base)
        k >>= 1
        if k:
            base = alg_mul(base, base)
    return result


@lru_cache(maxsize=16384)
def monomial_image(sigma: TorusAutomorphism, m: int, n: int) -> NCTorusElement:
    """σ(U^m V^n) = σ(U)^m σ(V)^n, always a single monomial."""
    image = _generator_power(sigma, "U", m)
    if n:
        image = alg_mul(image, _generator_power(sigma, "V", n))
    return image


def alg_apply(sigma: Automorphism, x):
    """Apply σ to an element, extending the generator images multiplicatively."""
    _check(sigma, x.context)
    if isinstance(sigma, ZInfAutomorphism):
        if sigma.shift_power == 0:
            return x
        return ZInfElement(x.context, x.at_infinity, {l + sigma.shift_power: value for l, value in x.points()})
    if sigma.is_identity():
        return x
    result = x.context.zero()
    for (m, n), coeff in x.terms():
        result = alg_add(result, alg_scale(monomial_image(sigma, m, n), coeff))
    return result


def _as_image(element: NCTorusElement) -> GeneratorImage:
    decomposition = is_scalar_unitary(element)
    if decomposition is None or abs(decomposition.modulus - 1.0) > 1e-12:
        raise DomainError(f"{element!r} is not a unit monomial")
    return GeneratorImage(decomposition.phase, decomposition.exponent)


def compose(sigma: Automorphism, tau: Automorphism) -> Automorphism:
    """σ∘τ."""
    _check(sigma, tau.context)
    if isinstance(sigma, ZInfAutomorphism):
        return ZInfAutomorphism(sigma.context, sigma.shift_power + tau.shift_power)
    image_u = _as_image(alg_apply(sigma, tau.image("U")))
    if sigma.context.rank == 1:
        return TorusAutomorphism(sigma.context, image_u, _fixed_v(sigma.context))
    return TorusAutomorphism(sigma.context, image_u, _as_image(alg_apply(sigma, tau.image("V"))))


@lru_cache(maxsize=1024)
def inverse(sigma: Automorphism) -> Automorphism:
    """σ^{-1}: invert the exponent matrix over Z, then solve for the phases through σ itself."""
    if isinstance(sigma, ZInfAutomorphism):
        return ZInfAutomorphism(sigma.context, -sigma.shift_power)
    context = sigma.context
    (a, b), (c, d) = sigma.matrix
    det = sigma.determinant
    zero = Angle.zero(context.basis)
    candidate = TorusAutomorphism(
        context, GeneratorImage(zero, (det * d, -det * c)), GeneratorImage(zero, (-det * b, det * a))
    )
    images = {}
    for name in generator_names(context):
        # σ(τ0(g)) = e^{iψ}g, so τ(g) = e^{−iψ}τ0(g)
        landed = _as_image(alg_apply(sigma, candidate.image(name)))
        origin = candidate.image_u if name == "U" else candidate.image_v
        images[name] = GeneratorImage(-landed.phase, origin.exponent)
    return TorusAutomorphism(context, images["U"], images.get("V", _fixed_v(context)))


@lru_cache(maxsize=4096)
def power(sigma: Automorphism, j: int) -> Automorphism:
    """σ^j for any integer j, by repeated squaring."""
    if j < 0:
        return power(inverse(sigma), -j)
    if isinstance(sigma, ZInfAutomorphism):
        return ZInfAutomorphism(sigma.context, j * sigma.shift_power)
    result = TorusAutomorphism.identity(sigma.context)
    base = sigma
    while j:
        if j & 1:
            result = compose(result, base)
        j >>= 1
        if j:
            base = compose(base, base)
    return result


def automorphism_from_json(data: Mapping, context) -> Automorphism:
    basis = context.basis
    if isinstance(context, ZInfContext):
        if data.get("kind", "shift") != "shift":
            raise DomainError(f"Z∞ only carries shifts, got {data.get('kind')!r}")
        return ZInfAutomorphism(context, int(data.get("p", 0)))

    def image(name: str, default: Monomial) -> GeneratorImage:
        entry = data.get(name, {})
        return GeneratorImage(parse_angle(entry.get("phase", 0), basis), tuple(entry.get("exp", default)))

    return TorusAutomorphism(context, image("U", (1, 0)), image("V", (0, 1)))
