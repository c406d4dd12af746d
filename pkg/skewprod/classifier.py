"""Ergodic classification of skew products and the averages that witness it."""
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

import numpy as np

from .algebras import (
    AlgebraElement,
    NCTorusContext,
    ZInfContext,
    alg_adjoint,
    alg_mul,
    alg_scale,
    alg_state_scalar,
)
from .angles import PhaseScalar, SymbolBasis
from .cohomology import (
    FixedPointDescription,
    LevelReport,
    detect_group,
    level_operator,
    solve_continuous,
    solve_level,
)
from .crossed import CrossedElement
from .errors import DomainError, HypothesisViolation
from .skew import SkewSystem, require_valid, skew_apply

_LOGGER = logging.getLogger(__name__)

UE_YES = "yes"
UE_NO = "no"
UE_UNKNOWN = "unknown"

MINIMAL_IMPLIED = "implied"
MINIMAL_NOT_IMPLIED = "not_implied"

VERDICT_CONVERGING = "converging"
VERDICT_DIVERGING = "diverging"

DEFAULT_CONVERGENCE_TOL = 5e-2
EVIDENCE_LEVELS = 6
CHECKPOINTS = 40
HERMITIAN_TOL = 1e-12


@dataclass
class Classification:
    topologically_ergodic: bool
    uniquely_ergodic: bool
    weakly_clustering: bool
    strictly_ergodic: bool
    sharply_ergodic: bool
    minimal: str
    ue_wrt_fixed_point: str
    fixed_point: FixedPointDescription
    evidence: List[LevelReport] = field(default_factory=list)
    system: Optional[str] = None

    @property
    def ergodic_and_uniquely_ergodic(self) -> bool:
        return self.uniquely_ergodic

    @property
    def methods(self) -> List[str]:
        return sorted({self.fixed_point.method} | {report.method for report in self.evidence})

    def to_json(self) -> dict:
        return {
            "system": self.system,
            "topologically_ergodic": self.topologically_ergodic,
            "uniquely_ergodic": self.uniquely_ergodic,
            "weakly_clustering": self.weakly_clustering,
            "strictly_ergodic": self.strictly_ergodic,
            "sharply_ergodic": self.sharply_ergodic,
            "minimal": self.minimal,
            "ue_wrt_fixed_point": self.ue_wrt_fixed_point,
            "fixed_point": self.fixed_point.to_json(),
            "evidence": [report.to_json() for report in self.evidence],
            "methods": self.methods,
        }

    @classmethod
    def from_json(cls, data: Mapping, basis: SymbolBasis) -> "Classification":
        return cls(
            topologically_ergodic=data["topologically_ergodic"],
            uniquely_ergodic=data["uniquely_ergodic"],
            weakly_clustering=data["weakly_clustering"],
            strictly_ergodic=data["strictly_ergodic"],
            sharply_ergodic=data["sharply_ergodic"],
            minimal=data["minimal"],
            ue_wrt_fixed_point=data["ue_wrt_fixed_point"],
            fixed_point=FixedPointDescription.from_json(data["fixed_point"], basis),
            evidence=[LevelReport.from_json(item, basis) for item in data.get("evidence", [])],
            system=data.get("system"),
        )


def _ue_wrt_fixed_point(sys: SkewSystem, fp: FixedPointDescription, uniquely_ergodic: bool) -> str:
    if fp.group_generator == 1:
        return UE_YES
    if fp.has_measurable_non_continuous:
        return UE_NO
    if sys.is_classical:
        # for classical processes the converse holds: only continuous solutions
        return UE_YES
    if fp.group_generator is None and uniquely_ergodic:
        return UE_YES
    return UE_UNKNOWN


def classify(sys: SkewSystem, n_max: int = 24) -> Classification:
    """Run the level solvers and assemble the ergodic verdicts."""
    if not sys.base_uniquely_ergodic:
        raise HypothesisViolation(f"{sys.name or 'system'}: unique ergodicity of the base is not asserted")
    require_valid(sys)
    fp = detect_group(sys, n_max)
    topologically_ergodic = fp.group_generator is None
    uniquely_ergodic = fp.measurable_generator is None
    strictly = uniquely_ergodic and sys.omega0_faithful
    levels = list(range(0, min(n_max, EVIDENCE_LEVELS) + 1))
    if fp.group_generator is not None and fp.group_generator not in levels:
        levels.append(fp.group_generator)
    evidence = [solve_level(sys, n) for n in levels]
    classification = Classification(
        topologically_ergodic=topologically_ergodic,
        uniquely_ergodic=uniquely_ergodic,
        weakly_clustering=uniquely_ergodic,
        strictly_ergodic=strictly,
        sharply_ergodic=strictly and sys.support_central,
        minimal=MINIMAL_IMPLIED if strictly else MINIMAL_NOT_IMPLIED,
        ue_wrt_fixed_point=_ue_wrt_fixed_point(sys, fp, uniquely_ergodic),
        fixed_point=fp,
        evidence=evidence,
        system=sys.name,
    )
    _LOGGER.info("classified %s: n0=%s, topologically ergodic=%s, uniquely ergodic=%s, ue wrt fixed points=%s",
                 sys.name, fp.group_generator, topologically_ergodic, uniquely_ergodic,
                 classification.ue_wrt_fixed_point)
    return classification


def fixed_point_generator(sys: SkewSystem, fp: FixedPointDescription, level: int) -> Optional[AlgebraElement]:
    """w_level, from the description when populated, solved on demand otherwise."""
    if not fp.in_group(level):
        return None
    w = fp.generator_at(level)
    return w if w is not None else solve_continuous(sys, level)


def fixed_point_element(sys: SkewSystem, fp: FixedPointDescription, level: int) -> CrossedElement:
    """The Φ-invariant element V^level·w_level."""
    w = fixed_point_generator(sys, fp, level)
    if w is None:
        raise DomainError(f"level {level} is not in G = {fp.group_generator}Z")
    return sys.v_power(level, w)


def conditional_expectation_phi(sys: SkewSystem, fp: FixedPointDescription, x: CrossedElement) -> CrossedElement:
    """E_Φ(x) = Σ_{l ∈ G} ω₀(w_l* E(V^{−l}x)) V^l w_l, where E(V^{−l}x) is the mode-l coefficient."""
    modes = {}
    for level, a in x.modes():
        w = fixed_point_generator(sys, fp, level)
        if w is None:
            continue
        coeff = alg_state_scalar(alg_mul(alg_adjoint(w), a))
        if coeff:
            modes[level] = alg_scale(w, coeff)
    return sys.element(modes)


def _numeric(x: CrossedElement) -> Dict[Tuple, complex]:
    """Linear numeric coordinates of x whose ℓ¹ norm is the coefficient norm."""
    values = {}
    for k, a in x.modes():
        if isinstance(a.context, ZInfContext):
            values[(k, "inf")] = a.at_infinity.value()
            for l, d in a.deviations().items():
                values[(k, l)] = d
        else:
            for key, coeff in a.terms():
                values[(k, key)] = coeff.value()
    return values


def _accumulate(total: Dict[Tuple, complex], values: Dict[Tuple, complex]) -> None:
    for key, value in values.items():
        total[key] = total.get(key, 0j) + value


def _distance(total: Dict[Tuple, complex], count: int, target: Dict[Tuple, complex]) -> float:
    keys = set(total) | set(target)
    return float(sum(abs(total.get(key, 0j) / count - target.get(key, 0j)) for key in keys))


def checkpoints(n: int, count: int = CHECKPOINTS) -> List[int]:
    """Roughly geometric sample of 1..n, always ending at n."""
    points = np.unique(np.geomspace(1, n, num=min(n, count)).round().astype(int))
    return sorted(set(int(j) for j in points) | {n})


@dataclass
class AverageDiagnostics:
    iterations: int
    checkpoints: List[int]
    distances: List[float]
    verdict: str
    final_residual: float
    tolerance: float = DEFAULT_CONVERGENCE_TOL
    limit: Optional[dict] = None

    def __post_init__(self):
        if any(d < 0 for d in self.distances):
            raise AssertionError("distances must be nonnegative")

    def rows(self) -> List[Tuple[int, float]]:
        return list(zip(self.checkpoints, self.distances))

    def distance_at(self, j: int) -> float:
        return self.distances[self.checkpoints.index(j)]

    def to_json(self) -> dict:
        return {
            "iterations": self.iterations,
            "checkpoints": self.checkpoints,
            "distances": self.distances,
            "verdict": self.verdict,
            "final_residual": self.final_residual,
            "tolerance": self.tolerance,
            "limit": self.limit,
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "AverageDiagnostics":
        return cls(data["iterations"], list(data["checkpoints"]), list(data["distances"]), data["verdict"],
                   data["final_residual"], data.get("tolerance", DEFAULT_CONVERGENCE_TOL), data.get("limit"))


def _diagnostics(n: int, points: List[int], distances: List[float], tol: float, limit) -> AverageDiagnostics:
    final = distances[-1] if distances else 0.0
    verdict = VERDICT_CONVERGING if final < tol else VERDICT_DIVERGING
    return AverageDiagnostics(n, points, distances, verdict, final, tol, limit)


def cesaro_orbit_average(sys: SkewSystem, x: CrossedElement, n: int, fp: FixedPointDescription,
                         tol: float = DEFAULT_CONVERGENCE_TOL, sample: Optional[Iterable[int]] = None
                         ) -> AverageDiagnostics:
    """ℓ¹ distance of the Cesàro means (1/j)Σ_{k<j}Φ^k(x) to E_Φ(x) at sampled j ≤ n.

    Iterates are exact; only the running sum is accumulated in floating point.
    """
    if n < 1:
        raise DomainError(f"number of iterations must be positive, got {n}")
    limit = conditional_expectation_phi(sys, fp, x)
    target = _numeric(limit)
    points = sorted(j for j in set(sample) if 1 <= j <= n) if sample is not None else checkpoints(n)
    wanted = set(points)
    total: Dict[Tuple, complex] = {}
    distances = []
    current = x
    for j in range(1, n + 1):
        _accumulate(total, _numeric(current))
        if j in wanted:
            distances.append(_distance(total, j, target))
        if j < n:
            current = skew_apply(sys, current)
    diagnostics = _diagnostics(n, points, distances, tol, limit.to_json())
    _LOGGER.info("Cesàro average of %s over %d iterates: residual %.3g (%s)", sys.name, n,
                 diagnostics.final_residual, diagnostics.verdict)
    return diagnostics


def _box_vector(a: AlgebraElement, index: List[object]) -> np.ndarray:
    position = {key: i for i, key in enumerate(index)}
    vector = np.zeros(len(index), dtype=complex)
    for key, coeff in a.terms():
        if key not in position:
            raise DomainError(f"monomial {key} lies outside the truncation box")
        vector[position[key]] = coeff.value()
    return vector


def gns_cesaro_check(sys: SkewSystem, m: int, vector: AlgebraElement, n: int, M: int,
                     fp: FixedPointDescription) -> float:
    """Distance between (1/n)Σ_{k<n} V_{ω,Φ}^k ξ and its projection onto the fixed vectors.

    ξ = π(V^m a)ξ_ω; the GNS unitary preserves the mode, where it acts as
    a ↦ α^{−m}(u_m)θ(a), the level-m operator.
    """
    if not isinstance(sys.context, NCTorusContext):
        raise DomainError("the GNS simulation runs on torus families")
    operator = level_operator(sys, m, M)
    v = _box_vector(vector, operator.index)
    w = fixed_point_generator(sys, fp, m)
    if w is None:
        projection = np.zeros_like(v)
    else:
        e = _box_vector(w, operator.index)
        projection = np.vdot(e, v) * e
    average = np.zeros_like(v)
    current = v
    for _ in range(n):
        average += current
        current = operator.matrix @ current
    residual = float(np.linalg.norm(average / n - projection))
    _LOGGER.debug("GNS Cesàro check at mode %d after %d steps: residual %.3g", m, n, residual)
    return residual


def _require_zinf_process(sys: SkewSystem) -> None:
    if not isinstance(sys.context, ZInfContext) or not sys.alpha.is_identity():
        raise DomainError("pointwise Birkhoff averages need a classical process over Z∞")
    if sys.theta.shift_power == 0:
        raise DomainError("the identity shift never moves the base point")


def birkhoff_step_coefficient(sys: SkewSystem, q: int, l0: int, n: int) -> PhaseScalar:
    """Exact coefficient of z^q in h∘Φ^n at (l0, z) for h(l, z) = z^q: Π_{j<n} u(l0 − jp)^q."""
    _require_zinf_process(sys)
    p = sys.theta.shift_power
    result = PhaseScalar.one(sys.basis)
    for j in range(n):
        result = result * sys.u.value_at(l0 - j * p) ** q
    return result


def birkhoff_pointwise(sys: SkewSystem, q: int, l0: int, n: int) -> complex:
    """(1/n)Σ_{k<n} h(Φ^k(l0, z)) as the coefficient of z^q."""
    _require_zinf_process(sys)
    return sum(value for _, value in _birkhoff_running(sys, q, l0, n)) / n if n else 0j


def _birkhoff_running(sys: SkewSystem, q: int, l0: int, n: int):
    p = sys.theta.shift_power
    coefficient = PhaseScalar.one(sys.basis)
    for k in range(n):
        yield k, coefficient.value()
        coefficient = coefficient * sys.u.value_at(l0 - k * p) ** q


def birkhoff_limit(sys: SkewSystem, q: int, l0: int) -> PhaseScalar:
    """Limit of the Birkhoff averages: 0 when u(∞)^q ≠ 1, else the product over the orbit's exceptional points."""
    _require_zinf_process(sys)
    at_infinity = sys.u.at_infinity ** q
    if not at_infinity.isclose(1.0):
        return PhaseScalar.zero(sys.basis)
    p = sys.theta.shift_power
    result = PhaseScalar.one(sys.basis)
    for l, value in sys.u.points():
        offset = l0 - l
        if offset % p == 0 and offset // p >= 0:
            result = result * value ** q
    return result


def birkhoff_trace(sys: SkewSystem, q: int, l0: int, n: int, tol: float = DEFAULT_CONVERGENCE_TOL,
                   sample: Optional[Iterable[int]] = None) -> AverageDiagnostics:
    """|average_j − limit| at sampled j ≤ n."""
    _require_zinf_process(sys)
    limit = birkhoff_limit(sys, q, l0)
    target = limit.value()
    points = sorted(j for j in set(sample) if 1 <= j <= n) if sample is not None else checkpoints(n)
    wanted = set(points)
    total = 0j
    distances = []
    for k, value in _birkhoff_running(sys, q, l0, n):
        total += value
        if k + 1 in wanted:
            distances.append(abs(total / (k + 1) - target))
    return _diagnostics(n, points, distances, tol, {"coefficient": limit.to_json()})


def invariant_measure_functional(sys: SkewSystem, fp: FixedPointDescription, mu_check: Mapping[int, complex],
                                 F: CrossedElement) -> complex:
    """T(μ)(F) = Σ_l μ̌(l) ω₀(w_{n₀l}* a_{n₀l}) for a classical process.

    μ̌ is the characteristic function of a measure on the circle dual to the
    fixed-point algebra; missing entries count as 0.
    """
    if not sys.is_classical:
        raise DomainError("T(μ) parametrizes invariant states of classical processes only")
    if abs(complex(mu_check.get(0, 0.0)) - 1.0) > HERMITIAN_TOL:
        raise DomainError("a probability measure has characteristic function 1 at 0")
    for l, value in mu_check.items():
        if abs(complex(mu_check.get(-l, 0.0)) - complex(value).conjugate()) > HERMITIAN_TOL:
            raise DomainError(f"characteristic function violates μ̌(−l) = conj(μ̌(l)) at l={l}")
    n0 = fp.group_generator
    total = 0j
    for l, value in mu_check.items():
        level = 0 if n0 is None else n0 * l
        if n0 is None and l != 0:
            continue
        a = F.mode(level)
        if a.is_zero():
            continue
        w = fixed_point_generator(sys, fp, level)
        total += complex(value) * alg_state_scalar(alg_mul(alg_adjoint(w), a)).value()
    return total
