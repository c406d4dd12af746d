import json

import pytest

from skewprod.algebras import NCTorusContext
from skewprod.angles import DEFAULT_BASIS, Angle
from skewprod.automorphisms import TorusAutomorphism
from skewprod.config import (
    DEFAULT_LOG_LEVEL,
    DEFAULT_N_MAX,
    LOG_LEVEL_ENV,
    ScenarioConfig,
    load_config,
    log_level_from_env,
    parse_element,
)
from skewprod.errors import ConfigError
from skewprod.presets import build_preset
from skewprod.skew import SkewSystem

CIRCLE = NCTorusContext.circle()


def anzai_system():
    return SkewSystem(CIRCLE, TorusAutomorphism.rotation(CIRCLE, Angle.of(s1=1)), TorusAutomorphism.identity(CIRCLE),
                      CIRCLE.monomial(1), True, "inline")


def test_defaults():
    config = ScenarioConfig.from_dict({"preset": "zinf"})
    assert config.n_max == DEFAULT_N_MAX
    assert config.params == {}
    assert not config.oracle


@pytest.mark.parametrize("data", [
    {"preset": "zinf", "system": {}},
    {"n_max": 0},
    {"truncation": "12"},
    {"iterations": True},
    {"level": 1.5},
    {"tol": 0},
    {"convergence_tol": -1e-3},
    {"params": ["l", "3"]},
    {"colour": "blue"},
])
def test_rejected_scenarios(data):
    with pytest.raises(ConfigError):
        ScenarioConfig.from_dict(data)


def test_params_are_strings():
    config = ScenarioConfig(preset="double-rotation", params={"l": 5})
    assert config.params == {"l": "5"}
    assert config.build_system().u == build_preset("double-rotation", {"l": "5"}).u


def test_overrides():
    config = ScenarioConfig(system=anzai_system().to_json(), n_max=8)
    same = config.with_overrides(n_max=None, level=3)
    assert same.n_max == 8
    assert same.level == 3
    switched = config.with_overrides(preset="double-rotation", params={"l": "2"})
    assert switched.system is None
    assert switched.build_system().name == "double-rotation"
    merged = ScenarioConfig(preset="nctorus-independent", params={"phi": "s1"}).with_overrides(params={"theta": "s2"})
    assert merged.params == {"phi": "s1", "theta": "s2"}


def test_build_system():
    assert ScenarioConfig(system=anzai_system().to_json()).build_system() == anzai_system()
    with pytest.raises(ConfigError, match="neither"):
        ScenarioConfig().build_system()
    with pytest.raises(ConfigError, match="params"):
        ScenarioConfig(system=anzai_system().to_json(), params={"l": "2"}).build_system()
    with pytest.raises(ConfigError, match="malformed"):
        ScenarioConfig(system={"algebra": {"kind": "torus"}, "u": {"terms": [{"n": 0}]}}).build_system()


def test_element_shorthand():
    torus = build_preset("double-rotation")
    assert parse_element(None, torus) == torus.v_power(1)
    assert parse_element({"k": 3, "m": 1}, torus) == torus.v_power(3, CIRCLE.monomial(1))
    assert parse_element({"k": -2, "coeff": {"terms": [{"m": 2, "re": 0.5}]}}, torus) == torus.v_power(
        -2, CIRCLE.monomial(2, 0, 0.5))
    x = torus.v_power(2, CIRCLE.monomial(-1))
    assert parse_element(x.to_json(), torus) == x
    zinf = build_preset("zinf")
    assert parse_element({"k": 1, "point": 4}, zinf) == zinf.v_power(1, zinf.context.point(4))
    assert parse_element({"k": 0}, zinf) == zinf.v_power(0)


@pytest.mark.parametrize("shorthand", [{"k": 1, "colour": 2}, {"k": "one"}, {"k": 1, "m": []}])
def test_element_errors(shorthand):
    with pytest.raises(ConfigError):
        parse_element(shorthand, build_preset("double-rotation"))


def test_observable():
    assert ScenarioConfig(preset="zinf").build_observable() == (1, 0)
    assert ScenarioConfig(preset="zinf", observable={"q": 2, "l0": -3}).build_observable() == (2, -3)
    with pytest.raises(ConfigError):
        ScenarioConfig(preset="zinf", observable={"x": 1}).build_observable()
    with pytest.raises(ConfigError):
        ScenarioConfig(preset="zinf", observable={"q": "z"}).build_observable()


def test_load_config(tmp_path):
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps({"preset": "double-rotation", "params": {"l": "5"}, "element": {"k": 5}}))
    config = load_config(str(path))
    assert config.build_system().name == "double-rotation"
    assert config.build_element(config.build_system()) == config.build_system().v_power(5)
    with pytest.raises(ConfigError, match="cannot read"):
        load_config(str(tmp_path / "missing.json"))
    path.write_text("{not json")
    with pytest.raises(ConfigError, match="not valid JSON"):
        load_config(str(path))
    path.write_text("[1, 2]")
    with pytest.raises(ConfigError):
        load_config(str(path))


def test_log_level_from_env(monkeypatch):
    monkeypatch.delenv(LOG_LEVEL_ENV, raising=False)
    assert log_level_from_env() == DEFAULT_LOG_LEVEL
    monkeypatch.setenv(LOG_LEVEL_ENV, "debug")
    assert log_level_from_env() == "DEBUG"
    monkeypatch.setenv(LOG_LEVEL_ENV, "loud")
    assert log_level_from_env("INFO") == "INFO"


def test_system_json_uses_the_default_basis():
    assert SkewSystem.from_json(anzai_system().to_json(), DEFAULT_BASIS) == anzai_system()
