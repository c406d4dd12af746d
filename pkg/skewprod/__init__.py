# flake8: noqa
from .errors import (
    ConfigError,
    ContextMismatchError,
    DomainError,
    HypothesisViolation,
    IncompatibleBasisError,
    InvalidSystemError,
    SkewProductError,
    UnsupportedCocycleError,
)
from .angles import DEFAULT_BASIS, Angle, PhaseScalar, SymbolBasis, angle_combine, minimal_level, parse_angle
from .angles import solve_character
from .algebras import NCTorusContext, NCTorusElement, ZInfContext, ZInfElement, alg_adjoint, alg_mul, alg_state
from .automorphisms import TorusAutomorphism, ZInfAutomorphism, alg_apply, compose, inverse, power
from .crossed import CrossedElement, cp_abel, cp_adjoint, cp_expectation, cp_fejer, cp_gauge, cp_mul, cp_state
from .skew import SkewSystem, ValidationReport, skew_apply, skew_cocycle, skew_inverse_apply, skew_validate
from .cohomology import (
    CONTINUOUS_ONLY,
    MEASURABLE_NON_CONTINUOUS,
    MEASURABLE_NONE,
    FixedPointDescription,
    LevelReport,
    detect_group,
    oracle_nullspace,
    solve_continuous,
    solve_level,
    solve_measurable,
)
from .classifier import (
    UE_NO,
    UE_UNKNOWN,
    UE_YES,
    AverageDiagnostics,
    Classification,
    birkhoff_pointwise,
    cesaro_orbit_average,
    classify,
    conditional_expectation_phi,
    gns_cesaro_check,
    invariant_measure_functional,
)
from .presets import PRESETS, build_preset
from .config import ScenarioConfig, load_config
