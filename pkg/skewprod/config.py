"""Scenario files: which system to build and how hard to look at it.

A scenario is a JSON object, for example::

    {
        "preset": "double-rotation",
        "params": {"l": "5"},
        "n_max": 24,
        "element": {"k": 5, "m": 1},
        "iterations": 10000
    }

``system`` may replace ``preset`` with an inline SkewSystem object.
"""
import json
import logging
import os
from dataclasses import dataclass, field, fields, replace
from typing import Any, Dict, Mapping, Optional, Tuple

from .algebras import ZInfContext, element_from_json
from .angles import DEFAULT_BASIS, SymbolBasis
from .classifier import DEFAULT_CONVERGENCE_TOL
from .crossed import CrossedElement
from .errors import ConfigError
from .presets import build_preset
from .skew import SkewSystem

_LOGGER = logging.getLogger(__name__)

DEFAULT_N_MAX = 24
DEFAULT_TRUNCATION = 12
DEFAULT_TOL = 1e-8
DEFAULT_ITERATIONS = 10_000
DEFAULT_LEVEL = 1
DEFAULT_LOG_LEVEL = "WARNING"

LOG_LEVEL_ENV = "SKEWPROD_LOG_LEVEL"


@dataclass
class ScenarioConfig:
    preset: Optional[str] = None
    params: Dict[str, str] = field(default_factory=dict)
    system: Optional[Dict[str, Any]] = None
    n_max: int = DEFAULT_N_MAX
    truncation: int = DEFAULT_TRUNCATION
    tol: float = DEFAULT_TOL
    iterations: int = DEFAULT_ITERATIONS
    convergence_tol: float = DEFAULT_CONVERGENCE_TOL
    level: int = DEFAULT_LEVEL
    oracle: bool = False
    element: Optional[Dict[str, Any]] = None
    observable: Optional[Dict[str, Any]] = None
    out: Optional[str] = None
    csv: Optional[str] = None

    def __post_init__(self):
        if self.preset is not None and self.system is not None:
            raise ConfigError("give either a preset or an inline system, not both")
        for name in ("n_max", "truncation", "iterations"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise ConfigError(f"{name} must be a positive integer, got {value!r}")
        if isinstance(self.level, bool) or not isinstance(self.level, int):
            raise ConfigError(f"level must be an integer, got {self.level!r}")
        for name in ("tol", "convergence_tol"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float)) or value <= 0:
                raise ConfigError(f"{name} must be a positive number, got {value!r}")
        if not isinstance(self.params, Mapping):
            raise ConfigError("params must be an object of preset parameters")
        self.params = {str(key): str(value) for key, value in self.params.items()}

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "ScenarioConfig":
        if not isinstance(data, Mapping):
            raise ConfigError("a scenario must be a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        return cls(**data)

    def with_overrides(self, **overrides) -> "ScenarioConfig":
        """Copy with every non-None override applied; ``params`` entries are merged."""
        values = {key: value for key, value in overrides.items() if value is not None}
        if "params" in values:
            values["params"] = {**self.params, **values["params"]}
        if values.get("preset") is not None:
            values["system"] = None
        return replace(self, **values)

    def build_system(self, basis: SymbolBasis = DEFAULT_BASIS) -> SkewSystem:
        if self.preset is not None:
            return build_preset(self.preset, self.params, basis)
        if self.system is not None:
            if self.params:
                raise ConfigError("params only apply to presets")
            try:
                return SkewSystem.from_json(self.system, basis)
            except (KeyError, TypeError) as exp:
                raise ConfigError(f"malformed system: {exp}") from exp
        raise ConfigError("the scenario names neither a preset nor a system")

    def build_element(self, sys: SkewSystem) -> CrossedElement:
        return parse_element(self.element, sys)

    def build_observable(self) -> Tuple[int, int]:
        """(q, l0) of the observable h(l, z) = z^q started at l0."""
        observable = self.observable or {}
        unknown = sorted(set(observable) - {"q", "l0"})
        if unknown:
            raise ConfigError(f"unknown observable keys: {', '.join(unknown)}")
        try:
            return int(observable.get("q", 1)), int(observable.get("l0", 0))
        except (TypeError, ValueError) as exp:
            raise ConfigError(f"malformed observable {observable!r}") from exp


def parse_element(shorthand: Optional[Mapping[str, Any]], sys: SkewSystem) -> CrossedElement:
    """Crossed-product element from its JSON form or the shorthand ``{"k", "m", "n"}`` / ``{"k", "point"}``.

    The shorthand is V^k·U^mV^n on the torus families and V^k·δ_point on Z∞
    (V^k·1 without ``point``); a ``coeff`` entry takes a full algebra element.
    """
    shorthand = dict(shorthand or {"k": 1})
    basis = sys.basis
    try:
        if "modes" in shorthand:
            return CrossedElement.from_json(shorthand, basis, sys.alpha)
        k = int(shorthand.pop("k", 0))
        if "coeff" in shorthand:
            coeff = element_from_json(shorthand.pop("coeff"), basis, sys.context)
        elif isinstance(sys.context, ZInfContext):
            point = shorthand.pop("point", None)
            coeff = sys.context.one() if point is None else sys.context.point(int(point))
        else:
            coeff = sys.context.monomial(int(shorthand.pop("m", 0)), int(shorthand.pop("n", 0)))
    except (KeyError, TypeError, ValueError) as exp:
        raise ConfigError(f"malformed element {shorthand!r}: {exp}") from exp
    if shorthand:
        raise ConfigError(f"unknown element keys: {', '.join(sorted(shorthand))}")
    return sys.v_power(k, coeff)


def load_config(path: str) -> ScenarioConfig:
    try:
        with open(path, encoding="utf-8") as file:
            data = json.load(file)
    except OSError as exp:
        raise ConfigError(f"cannot read {path}: {exp.strerror}") from exp
    except json.JSONDecodeError as exp:
        raise ConfigError(f"{path} is not valid JSON: {exp}") from exp
    _LOGGER.debug("loaded scenario %s: %s", path, data)
    return ScenarioConfig.from_dict(data)


def log_level_from_env(default: str = DEFAULT_LOG_LEVEL) -> str:
    level = os.environ.get(LOG_LEVEL_ENV, default).upper()
    if level not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
        _LOGGER.warning("ignoring %s=%s", LOG_LEVEL_ENV, level)
        return default
    return level
