"""
Rule training and in-sample forecasting.

A rule's forecast is the weighted sum of the actual values at its lags,
Y(t) = sum_i a_{t-i} * w_i, with w in [0, 1]^order. The weights of each rule
are tuned with the particle swarm against the squared error at the rule's
anchor time(s).
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import config
from .errors import AmbiguousMatchError, ConfigError, DimensionMismatchError, NoMatchError, UntrainableRuleError
from .fuzzifier import Partitioning, fuzzify, partition_series
from .pso import PsoConfig, SwarmResult, optimize
from .rule_engine import ForecastRule, RuleBase, match_rule
from .series import TimeSeries

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrainingConfig:
    pso: PsoConfig = PsoConfig()
    runs: int = config.RESTARTS
    ladder_start: float = config.LADDER_START
    ladder_step: float = config.LADDER_STEP
    ladder_floor: float = config.LADDER_FLOOR

    def __post_init__(self):
        if int(self.runs) != self.runs or self.runs < 1:
            raise ConfigError(f"runs must be a positive integer, got {self.runs}")
        if not self.pso.pos_min <= self.ladder_floor <= self.ladder_start <= self.pso.pos_max:
            raise ConfigError(
                f"weight ladder [{self.ladder_floor}, {self.ladder_start}] must lie within "
                f"[{self.pso.pos_min}, {self.pso.pos_max}]"
            )

    @property
    def seed(self) -> int:
        return self.pso.seed

    def initial_weights(self, order) -> np.ndarray:
        """Higher starting weights for the more recent lags: (0.75, 0.5, 0.25, 0.05, ...)."""
        steps = np.arange(order)
        return np.maximum(self.ladder_start - self.ladder_step * steps, self.ladder_floor)


@dataclass(frozen=True)
class RuleTrainingResult:
    label: int
    weights: Optional[Tuple[float, ...]]
    fitness: Optional[float]
    iterations: int = 0
    converged: bool = False
    restart: Optional[int] = None

    @property
    def trainable(self) -> bool:
        return self.weights is not None


@dataclass(frozen=True)
class TrainedModel:
    partitioning: Partitioning
    rulebase: RuleBase
    config: TrainingConfig
    series_fingerprint: str
    seed: int
    results: Tuple[RuleTrainingResult, ...] = ()

    @property
    def trained_rules(self) -> List[ForecastRule]:
        return [r for r in self.rulebase if r.trained]

    @property
    def non_converged(self) -> List[RuleTrainingResult]:
        return [r for r in self.results if r.trainable and not r.converged]


@dataclass(frozen=True)
class Forecast:
    t: int
    value: float
    rule_label: int


def defuzzify(weights, actuals) -> float:
    """Weighted sum of lagged actuals; `actuals[0]` is a_{t-1}."""
    weights = np.asarray(weights, dtype=float)
    actuals = np.asarray(actuals, dtype=float)
    if weights.shape != actuals.shape:
        raise DimensionMismatchError(f"{weights.size} weights for {actuals.size} actual values")
    return float(np.dot(weights, actuals))


def fitness_se(forecast, actual) -> float:
    return float((forecast - actual) ** 2)


def derive_rule_seed(master_seed, label, restart) -> int:
    """Per-rule, per-restart seed that depends only on its three inputs."""
    sequence = np.random.SeedSequence([int(master_seed), int(label), int(restart)])
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def _training_data(rule: ForecastRule, series: TimeSeries) -> Tuple[np.ndarray, np.ndarray]:
    """Lagged actuals (one row per anchor, most recent lag first) and targets."""
    rows, targets = [], []
    for t in rule.anchor_ts:
        if not series.start + rule.order <= t <= series.end:
            continue
        rows.append([series.value_at(t - lag) for lag, _ in rule.conditions])
        targets.append(series.value_at(t))
    if not rows:
        raise UntrainableRuleError(f"Rule {rule.label} has no anchor with an actual value")
    return np.array(rows, dtype=float), np.array(targets, dtype=float)


def _run_swarm(rule: ForecastRule, series: TimeSeries, cfg: TrainingConfig, rule_seed) -> SwarmResult:
    lagged, targets = _training_data(rule, series)
    pso_cfg = replace(cfg.pso, seed=rule_seed)
    dim = rule.order

    velocity_rng = np.random.default_rng([rule_seed, 1])
    positions = np.tile(cfg.initial_weights(dim), (pso_cfg.n_particles, 1))
    velocities = velocity_rng.uniform(0.0, max(pso_cfg.v_max, 0.0), size=(pso_cfg.n_particles, dim))
    velocities = np.clip(velocities, pso_cfg.v_min, pso_cfg.v_max)

    def fitness(w):
        return float(np.sum((lagged @ w - targets) ** 2))

    return optimize(pso_cfg, dim, positions, velocities, fitness)


def train_rule(rule: ForecastRule, series: TimeSeries, cfg: TrainingConfig, rule_seed) -> np.ndarray:
    """One swarm run for `rule`; returns the global best weight vector."""
    return _run_swarm(rule, series, cfg, rule_seed).best_position


def rule_fitness(rule: ForecastRule, series: TimeSeries, weights) -> float:
    """Sum of squared errors of `weights` over the rule's anchors."""
    lagged, targets = _training_data(rule, series)
    return float(np.sum((lagged @ np.asarray(weights, dtype=float) - targets) ** 2))


def _train_with_restarts(rule: ForecastRule, series: TimeSeries, cfg: TrainingConfig) -> RuleTrainingResult:
    best, best_restart = None, None
    for restart in range(cfg.runs):
        seed = derive_rule_seed(cfg.seed, rule.label, restart)
        try:
            result = _run_swarm(rule, series, cfg, seed)
        except UntrainableRuleError:
            return RuleTrainingResult(rule.label, None, None)
        if best is None or result.best_fitness < best.best_fitness:
            best, best_restart = result, restart
    return RuleTrainingResult(
        label=rule.label,
        weights=tuple(float(w) for w in best.best_position),
        fitness=best.best_fitness,
        iterations=best.iterations_used,
        converged=best.converged,
        restart=best_restart,
    )


def _train_job(job):
    return _train_with_restarts(*job)


def train_all(
    rulebase: RuleBase,
    series: TimeSeries,
    cfg: TrainingConfig,
    partitioning: Optional[Partitioning] = None,
    workers: int = 1,
) -> TrainedModel:
    """Train every rule (best of `cfg.runs` restarts); untrainable rules stay weightless."""
    if partitioning is None:
        partitioning = partition_series(series)[1]

    jobs = [(rule, series, cfg) for rule in rulebase]
    if workers > 1 and len(jobs) > 1:
        logger.info(f"Training {len(jobs)} rules on {workers} worker processes")
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_train_job, jobs))
    else:
        results = [_train_job(job) for job in jobs]

    rules = []
    for rule, result in zip(rulebase, results):
        if not result.trainable:
            logger.info(f"  Rule {rule.label} has no target inside the series; left untrained")
            rules.append(rule)
            continue
        marker = "✓" if result.converged else "✗"
        logger.info(
            f"  {marker} Rule {rule.label}: SE={result.fitness:.4f} after {result.iterations} iterations"
        )
        rules.append(replace(rule, weights=result.weights, fitness=result.fitness))

    model = TrainedModel(
        partitioning=partitioning,
        rulebase=rulebase.with_rules(rules),
        config=cfg,
        series_fingerprint=series.fingerprint(),
        seed=cfg.seed,
        results=tuple(results),
    )
    if model.non_converged:
        logger.warning(
            f"{len(model.non_converged)} rule(s) did not reach SE <= {cfg.pso.target_fitness}: "
            f"{[r.label for r in model.non_converged]}"
        )
    return model


def install_weights(rulebase: RuleBase, weights: Dict[int, Sequence[float]], series: Optional[TimeSeries] = None) -> RuleBase:
    """
    Attach externally supplied weights by rule label. With a series, the
    stored fitness is recomputed at the installed weights.
    """
    rules = []
    for rule in rulebase:
        if rule.label not in weights:
            rules.append(rule)
            continue
        w = tuple(float(x) for x in weights[rule.label])
        fitness = None
        if series is not None:
            try:
                fitness = rule_fitness(rule, series, w)
            except UntrainableRuleError:
                pass
        rules.append(replace(rule, weights=w, fitness=fitness))
    return rulebase.with_rules(rules)


def forecast_in_sample(model: TrainedModel, series: TimeSeries) -> List[Forecast]:
    """
    Forecast every t from start + 2 to the end of the series. Points where no
    single trained rule matches are skipped; the report shows them as gaps.
    """
    fuzzified = fuzzify(series, model.partitioning)
    forecasts = []
    for t in range(series.start + 2, series.end + 1):
        try:
            rule = match_rule(model.rulebase, fuzzified, t)
        except (NoMatchError, AmbiguousMatchError) as e:
            logger.warning(f"No forecast for t={t}: {e}")
            continue
        if not rule.trained:
            logger.warning(f"No forecast for t={t}: rule {rule.label} is untrained")
            continue
        actuals = [series.value_at(t - lag) for lag, _ in rule.conditions]
        forecasts.append(Forecast(t, defuzzify(rule.weights, actuals), rule.label))
    return forecasts
