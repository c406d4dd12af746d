"""Built-in named systems.

Every preset takes string parameters (angles in turns, see
:func:`skewprod.angles.parse_angle`) so that config files and ``--param``
overrides share one parser.
"""
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, Mapping, Optional

from .algebras import NCTorusContext, ZInfContext
from .angles import DEFAULT_BASIS, Angle, PhaseScalar, SymbolBasis, as_fraction, parse_angle
from .automorphisms import TorusAutomorphism, ZInfAutomorphism
from .errors import ConfigError
from .skew import SkewSystem

_LOGGER = logging.getLogger(__name__)

PRESET_DOUBLE_ROTATION = "double-rotation"
PRESET_ANZAI_INVERSE = "anzai-inverse"
PRESET_ZINF = "zinf"
PRESET_NCTORUS_INDEPENDENT = "nctorus-independent"
PRESET_NCTORUS_DEPENDENT = "nctorus-dependent"
PRESET_CLASSICAL_ANZAI = "classical-anzai"

VARIANT_CLASSICAL = "classical"
VARIANT_NC = "nc"


@dataclass(frozen=True)
class Preset:
    name: str
    builder: Callable[[Dict[str, str], SymbolBasis], SkewSystem]
    defaults: Mapping[str, str] = field(default_factory=dict)
    description: str = ""

    def build(self, params: Optional[Mapping[str, object]] = None, basis: SymbolBasis = DEFAULT_BASIS) -> SkewSystem:
        merged = dict(self.defaults)
        for key, value in (params or {}).items():
            if key not in self.defaults:
                raise ConfigError(f"preset {self.name!r} has no parameter {key!r}, expected {sorted(self.defaults)}")
            merged[key] = str(value)
        _LOGGER.debug("building preset %s with %s", self.name, merged)
        return self.builder(merged, basis)


def _angle(params: Mapping[str, str], key: str, basis: SymbolBasis) -> Angle:
    return parse_angle(params[key], basis)


def _positive_int(params: Mapping[str, str], key: str) -> int:
    value = as_fraction(params[key])
    if value.denominator != 1 or value < 1:
        raise ConfigError(f"parameter {key} must be a positive integer, got {params[key]!r}")
    return int(value)


def _double_rotation(params: Dict[str, str], basis: SymbolBasis) -> SkewSystem:
    """R_{θ,2π/l} on T² as C(T)⋊Z: u is the constant e^{2πi/l}."""
    level = _positive_int(params, "l")
    context = NCTorusContext.circle(basis)
    theta = TorusAutomorphism.rotation(context, _angle(params, "theta", basis))
    u = context.scalar(PhaseScalar.from_phase(Angle.of(f"1/{level}", basis)))
    return SkewSystem(context, theta, TorusAutomorphism.identity(context), u, True, PRESET_DOUBLE_ROTATION)


def _anzai_inverse(params: Dict[str, str], basis: SymbolBasis) -> SkewSystem:
    """Φ_{R_θ, e^{−iθ}}; the nc variant twists the circle by a rotation through γ, giving A_γ."""
    theta_angle = _angle(params, "theta", basis)
    context = NCTorusContext.circle(basis)
    theta = TorusAutomorphism.rotation(context, theta_angle)
    variant = params["variant"]
    if variant == VARIANT_CLASSICAL:
        alpha = TorusAutomorphism.identity(context)
    elif variant == VARIANT_NC:
        alpha = TorusAutomorphism.rotation(context, _angle(params, "gamma", basis))
    else:
        raise ConfigError(f"variant must be {VARIANT_CLASSICAL!r} or {VARIANT_NC!r}, got {variant!r}")
    u = context.scalar(PhaseScalar.from_phase(-theta_angle))
    return SkewSystem(context, theta, alpha, u, True, f"{PRESET_ANZAI_INVERSE}/{variant}")


def _zinf(params: Dict[str, str], basis: SymbolBasis) -> SkewSystem:
    """θ(l) = l + 1 on Z∞ with f(0) = β = e^{2πiβ_turns} and f = 1 elsewhere."""
    context = ZInfContext(basis)
    u = context.sequence(1.0, {0: PhaseScalar.from_phase(_angle(params, "beta", basis))})
    # (σg)(l) = g(l − p), so g∘θ is the shift with p = −1
    return SkewSystem(context, ZInfAutomorphism(context, -1), ZInfAutomorphism.identity(context), u, True,
                      PRESET_ZINF)


def _nctorus(name: str, params: Dict[str, str], basis: SymbolBasis, phi: Angle) -> SkewSystem:
    """A_γ with θ(U) = e^{iθ}U, θ(V) = UV, α(V) = e^{iα}V and u = e^{iφ}I."""
    context = NCTorusContext(_angle(params, "gamma", basis))
    theta = TorusAutomorphism.anzai(context, _angle(params, "theta", basis))
    alpha = TorusAutomorphism.rotation(context, Angle.zero(basis), _angle(params, "alpha", basis))
    u = context.scalar(PhaseScalar.from_phase(phi))
    return SkewSystem(context, theta, alpha, u, True, name)


def _nctorus_independent(params: Dict[str, str], basis: SymbolBasis) -> SkewSystem:
    return _nctorus(PRESET_NCTORUS_INDEPENDENT, params, basis, _angle(params, "phi", basis))


def _nctorus_dependent(params: Dict[str, str], basis: SymbolBasis) -> SkewSystem:
    return _nctorus(PRESET_NCTORUS_DEPENDENT, params, basis, _angle(params, "theta", basis))


def _classical_anzai(params: Dict[str, str], basis: SymbolBasis) -> SkewSystem:
    """The process f(z) = z over an irrational rotation."""
    context = NCTorusContext.circle(basis)
    theta = TorusAutomorphism.rotation(context, _angle(params, "theta", basis))
    return SkewSystem(context, theta, TorusAutomorphism.identity(context), context.monomial(1), True,
                      PRESET_CLASSICAL_ANZAI)


PRESETS: Dict[str, Preset] = {
    preset.name: preset
    for preset in (
        Preset(PRESET_DOUBLE_ROTATION, _double_rotation, {"theta": "s1", "l": "3"},
               "double rotation with a rational second angle 2π/l"),
        Preset(PRESET_ANZAI_INVERSE, _anzai_inverse, {"theta": "s1", "variant": VARIANT_CLASSICAL, "gamma": "s3"},
               "rotation twisted by the inverse of its own angle"),
        Preset(PRESET_ZINF, _zinf, {"beta": "s2"}, "translation on the one-point compactification of Z"),
        Preset(PRESET_NCTORUS_INDEPENDENT, _nctorus_independent,
               {"theta": "s1", "phi": "s2", "gamma": "s3", "alpha": "1/4"},
               "Anzai map on A_γ with a scalar cocycle independent of θ"),
        Preset(PRESET_NCTORUS_DEPENDENT, _nctorus_dependent, {"theta": "s1", "gamma": "s3", "alpha": "1/4"},
               "Anzai map on A_γ with the scalar cocycle e^{iθ}"),
        Preset(PRESET_CLASSICAL_ANZAI, _classical_anzai, {"theta": "s1"}, "classical Anzai skew product with u = U"),
    )
}


def preset_names():
    return sorted(PRESETS)


def build_preset(name: str, params: Optional[Mapping[str, object]] = None,
                 basis: SymbolBasis = DEFAULT_BASIS) -> SkewSystem:
    try:
        preset = PRESETS[name]
    except KeyError as exp:
        raise ConfigError(f"unknown preset {name!r}, choose from {preset_names()}") from exp
    return preset.build(params, basis)
