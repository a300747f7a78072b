import logging
from dataclasses import dataclass, fields
from pathlib import Path
from typing import List, NamedTuple, Optional, Tuple

import yaml

from . import config
from .errors import ConfigError
from .evaluator import EvaluationReport, build_report, compare_models
from .fuzzifier import FuzzificationStats, FuzzifiedObservation, Partitioning, fuzzify, partition_series
from .model_store import ModelStore, verify_fingerprint
from .pso import PsoConfig
from .rule_engine import FuzzySetGroup, RuleBase, disambiguate, establish_groups, format_groups, format_rules, to_rules
from .series import TimeSeries, load_csv
from .trainer import TrainedModel, TrainingConfig, forecast_in_sample, train_all
from .utils import get_env_var

logger = logging.getLogger(__name__)

# RunConfig field -> PsoConfig field
PSO_OVERRIDES = {
    'inertia': 'inertia',
    'c1': 'c1',
    'c2': 'c2',
    'particles': 'n_particles',
    'max_iter': 'max_iterations',
    'target_se': 'target_fitness',
}


@dataclass
class RunConfig:
    """
    Settings of one pipeline run. Build it with `RunConfig.resolve`, which
    layers defaults, environment, a YAML file and explicit flags.
    """
    input_path: Optional[str] = None
    output_dir: str = config.OUTPUT_DIR
    seed: int = config.DEFAULT_SEED
    inertia: float = config.INERTIA
    c1: float = config.C1
    c2: float = config.C2
    vmax: float = config.V_MAX
    particles: int = config.N_PARTICLES
    max_iter: int = config.MAX_ITERATIONS
    target_se: float = config.TARGET_SE
    restarts: int = config.RESTARTS
    emit_intermediate: bool = False
    workers: int = 1

    @classmethod
    def resolve(cls, config_file=None, **overrides) -> "RunConfig":
        """defaults -> FTS_SEED / FTS_OUTPUT_DIR -> YAML config file -> flags (None = unset)."""
        values = {}
        env_seed = get_env_var(config.SEED_ENV_VAR)
        if env_seed is not None:
            values['seed'] = _parse_int(env_seed, config.SEED_ENV_VAR)

        if config_file:
            values.update(_read_config_file(config_file))

        values.update({k: v for k, v in overrides.items() if v is not None})
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(values) - known)
        if unknown:
            raise ConfigError(f"Unknown configuration keys: {unknown}")
        return cls(**values)

    def training_config(self) -> TrainingConfig:
        try:
            pso = PsoConfig(
                v_min=-float(self.vmax),
                v_max=float(self.vmax),
                seed=int(self.seed),
                **{pso_name: getattr(self, name) for name, pso_name in PSO_OVERRIDES.items()},
            )
            return TrainingConfig(pso=pso, runs=self.restarts)
        except (TypeError, ValueError) as e:
            if isinstance(e, ConfigError):
                raise
            raise ConfigError(f"Invalid run configuration: {e}")


def _parse_int(text, name):
    try:
        return int(text)
    except (TypeError, ValueError):
        raise ConfigError(f"{name} must be an integer, got {text!r}")


def _read_config_file(config_file) -> dict:
    path = Path(config_file)
    if not path.exists():
        raise ConfigError(f"Config file does not exist: {config_file}")
    try:
        with open(path, 'r') as f:
            doc = yaml.safe_load(f) or {}
    except yaml.YAMLError as e:
        raise ConfigError(f"Failed to read config file: {e}")
    if not isinstance(doc, dict):
        raise ConfigError(f"Config file {config_file} must hold a mapping")
    # Accept the CLI spelling too (max-iter, target-se, ...)
    values = {str(k).replace('-', '_'): v for k, v in doc.items()}
    if 'input' in values:
        values['input_path'] = values.pop('input')
    if 'out' in values:
        values['output_dir'] = values.pop('out')
    logger.info(f"Loaded run configuration from {config_file}")
    return values


class FuzzificationOutcome(NamedTuple):
    series: TimeSeries
    stats: Optional[FuzzificationStats]
    partitioning: Partitioning
    labels: List[FuzzifiedObservation]


class PipelineManager:
    """
    Chains ingest, fuzzification, rule building, training, forecasting and
    evaluation for one RunConfig. Every step writes its artifacts through
    the ModelStore.
    """

    def __init__(self, run_config: RunConfig, store: Optional[ModelStore] = None):
        if not run_config.input_path:
            raise ConfigError("No input series given (--input)")
        self.run_config = run_config
        self.store = store or ModelStore(run_config.output_dir)

    def load_series(self) -> TimeSeries:
        return load_csv(self.run_config.input_path)

    def fuzzify(self) -> FuzzificationOutcome:
        series = self.load_series()
        stats, partitioning = partition_series(series)
        labels = fuzzify(series, partitioning)
        self.store.write_partitioning(partitioning)
        self.store.write_fuzzified(series, labels)
        logger.info(f"  ✓ Fuzzified {len(series)} observations into {partitioning.n_sets} sets")
        return FuzzificationOutcome(series, stats, partitioning, labels)

    def build_rules(self, outcome: FuzzificationOutcome) -> Tuple[List[FuzzySetGroup], List[FuzzySetGroup], RuleBase]:
        groups = establish_groups(outcome.labels)
        unique = disambiguate(groups, outcome.labels)
        rulebase = to_rules(unique, outcome.partitioning.fingerprint())
        logger.info(f"  ✓ Built {len(rulebase)} rules (max order {max(r.order for r in rulebase)})")
        if self.run_config.emit_intermediate:
            self._write_listings(groups, unique, rulebase)
        return groups, unique, rulebase

    def _write_listings(self, groups, unique, rulebase: RuleBase):
        self.store.write_listing(config.GROUPS_FILE, format_groups(groups))
        self.store.write_listing(config.DISAMBIGUATED_FILE, format_groups(unique))
        self.store.write_listing(config.RULES_FILE, format_rules(rulebase))

    def train(self) -> TrainedModel:
        cfg = self.run_config.training_config()
        outcome = self.fuzzify()
        _, _, rulebase = self.build_rules(outcome)

        logger.info(f"Training {len(rulebase)} rules (seed {cfg.seed}, best of {cfg.runs} restarts)")
        model = train_all(rulebase, outcome.series, cfg, outcome.partitioning, workers=self.run_config.workers)
        self.store.save_model(model)
        if self.run_config.emit_intermediate:
            self.store.write_listing(config.TRAINED_RULES_FILE, format_rules(model.rulebase))
        return model

    def evaluate(self, model_path=None) -> EvaluationReport:
        series = self.load_series()
        model = self.store.load_model(model_path)
        verify_fingerprint(model, series)
        if self.run_config.emit_intermediate:
            # listings are rebuilt from the stored partitioning
            outcome = FuzzificationOutcome(series, None, model.partitioning, fuzzify(series, model.partitioning))
            self.build_rules(outcome)
            self.store.write_listing(config.TRAINED_RULES_FILE, format_rules(model.rulebase))

        forecasts = forecast_in_sample(model, series)
        report = build_report(series, forecasts)
        self.store.write_report(report)
        self.store.write_comparison(compare_models(series, report))
        logger.info(f"  ✓ Reports written to {self.store.output_dir}")
        return report

    def run(self) -> EvaluationReport:
        """Train, persist, then evaluate the model as reloaded from disk."""
        self.train()
        return self.evaluate()
