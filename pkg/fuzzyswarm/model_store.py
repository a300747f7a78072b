import logging
import os
from dataclasses import asdict
from typing import Sequence

import pandas as pd
import yaml

from . import config
from .errors import FingerprintMismatchError, ModelFormatError
from .evaluator import EvaluationReport, render_text, write_csv
from .fuzzifier import FuzzifiedObservation, Partitioning, TrapezoidalSet, Universe
from .pso import PsoConfig
from .rule_engine import ForecastRule, RuleBase
from .series import TimeSeries
from .trainer import RuleTrainingResult, TrainedModel, TrainingConfig

logger = logging.getLogger(__name__)


def _num(x):
    """Plain Python number for YAML (numpy scalars would be tagged)."""
    if x is None:
        return None
    x = float(x)
    return int(x) if x.is_integer() and abs(x) < 2 ** 53 else x


def _model_to_dict(model: TrainedModel) -> dict:
    p = model.partitioning
    return {
        'format': config.MODEL_FORMAT,
        'version': config.MODEL_VERSION,
        'seed': int(model.seed),
        'series_fingerprint': model.series_fingerprint,
        'partitioning_fingerprint': p.fingerprint(),
        'universe': {'lower': _num(p.universe.lower), 'upper': _num(p.universe.upper)},
        'segment_length': _num(p.segment_length),
        'sets': [
            {'index': s.index, 'a': _num(s.a), 'b': _num(s.b), 'c': _num(s.c), 'd': _num(s.d)}
            for s in p.sets
        ],
        'rules': [
            {
                'label': r.label,
                'conditions': [[lag, s] for lag, s in r.conditions],
                'anchors': list(r.anchor_ts),
                'weights': None if r.weights is None else [float(w) for w in r.weights],
                'fitness': None if r.fitness is None else float(r.fitness),
            }
            for r in model.rulebase
        ],
        'training': {
            'runs': model.config.runs,
            'ladder_start': model.config.ladder_start,
            'ladder_step': model.config.ladder_step,
            'ladder_floor': model.config.ladder_floor,
            'pso': {k: (int(v) if k == 'seed' else v) for k, v in asdict(model.config.pso).items()},
        },
        'results': [
            {
                'label': r.label,
                'fitness': None if r.fitness is None else float(r.fitness),
                'iterations': r.iterations,
                'converged': r.converged,
                'restart': r.restart,
            }
            for r in model.results
        ],
    }


def _model_from_dict(doc: dict) -> TrainedModel:
    if not isinstance(doc, dict) or doc.get('format') != config.MODEL_FORMAT:
        raise ModelFormatError(f"Not a {config.MODEL_FORMAT} document")
    if doc.get('version') != config.MODEL_VERSION:
        raise ModelFormatError(f"Unsupported model version {doc.get('version')}")
    try:
        universe = Universe(float(doc['universe']['lower']), float(doc['universe']['upper']))
        sets = tuple(
            TrapezoidalSet(int(s['index']), float(s['a']), float(s['b']), float(s['c']), float(s['d']))
            for s in doc['sets']
        )
        partitioning = Partitioning(universe, sets, float(doc['segment_length']))

        weights_by_label = {}
        rules = []
        for r in doc['rules']:
            weights = r.get('weights')
            rules.append(ForecastRule(
                label=int(r['label']),
                conditions=tuple((int(lag), int(s)) for lag, s in r['conditions']),
                anchor_ts=tuple(int(t) for t in r['anchors']),
                weights=None if weights is None else tuple(float(w) for w in weights),
                fitness=None if r.get('fitness') is None else float(r['fitness']),
            ))
            weights_by_label[int(r['label'])] = rules[-1].weights
        rulebase = RuleBase(tuple(rules), partitioning.fingerprint())

        training = doc['training']
        cfg = TrainingConfig(
            pso=PsoConfig(**training['pso']),
            runs=training['runs'],
            ladder_start=training['ladder_start'],
            ladder_step=training['ladder_step'],
            ladder_floor=training['ladder_floor'],
        )
        results = tuple(
            RuleTrainingResult(
                label=int(r['label']),
                weights=weights_by_label.get(int(r['label'])) if r.get('fitness') is not None else None,
                fitness=r.get('fitness'),
                iterations=int(r.get('iterations', 0)),
                converged=bool(r.get('converged', False)),
                restart=r.get('restart'),
            )
            for r in doc.get('results', [])
        )
    except (KeyError, TypeError, ValueError) as e:
        raise ModelFormatError(f"Malformed model document: {e!r}")

    stored = doc.get('partitioning_fingerprint')
    if stored and stored != partitioning.fingerprint():
        raise ModelFormatError("Partitioning fingerprint does not match the stored sets")

    return TrainedModel(
        partitioning=partitioning,
        rulebase=rulebase,
        config=cfg,
        series_fingerprint=str(doc['series_fingerprint']),
        seed=int(doc['seed']),
        results=results,
    )


def verify_fingerprint(model: TrainedModel, series: TimeSeries) -> None:
    actual = series.fingerprint()
    if model.series_fingerprint != actual:
        raise FingerprintMismatchError(
            f"Model was trained on series {model.series_fingerprint[:12]}, "
            f"input is {actual[:12]}"
        )


class ModelStore:
    """Reads and writes every artifact of a run inside one output directory."""

    def __init__(self, output_dir=None):
        self.output_dir = output_dir or config.OUTPUT_DIR
        self._ensure_dirs()

    def _ensure_dirs(self):
        os.makedirs(self.output_dir, exist_ok=True)

    def path(self, name):
        return os.path.join(self.output_dir, name)

    def save_model(self, model: TrainedModel, path=None) -> str:
        path = path or self.path(config.MODEL_FILE)
        with open(path, 'w', encoding='utf-8', newline='\n') as f:
            yaml.safe_dump(_model_to_dict(model), f, sort_keys=False, default_flow_style=None)
        logger.info(f"Saved model ({len(model.rulebase)} rules) to {path}")
        return path

    def load_model(self, path=None) -> TrainedModel:
        path = path or self.path(config.MODEL_FILE)
        if not os.path.exists(path):
            raise ModelFormatError(f"Model file does not exist: {path}")
        try:
            with open(path, 'r', encoding='utf-8') as f:
                doc = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise ModelFormatError(f"Failed to read model file: {e}")
        model = _model_from_dict(doc)
        logger.info(f"Loaded model ({len(model.rulebase)} rules) from {path}")
        return model

    def write_partitioning(self, partitioning: Partitioning) -> str:
        path = self.path(config.PARTITION_FILE)
        frame = pd.DataFrame(
            [(s.name, s.a, s.b, s.c, s.d) for s in partitioning.sets],
            columns=['set', 'a', 'b', 'c', 'd'],
        )
        frame.to_csv(path, index=False)
        return path

    def write_fuzzified(self, series: TimeSeries, fuzzified: Sequence[FuzzifiedObservation]) -> str:
        path = self.path(config.FUZZIFIED_FILE)
        frame = pd.DataFrame(
            [
                (o.t, o.value, f"A{f.primary_set}", f.membership_primary,
                 f"A{f.secondary_set}" if f.is_tie else "", f.membership_secondary)
                for o, f in zip(series, fuzzified)
            ],
            columns=['t', 'value', 'set', 'membership', 'tie_set', 'tie_membership'],
        )
        frame.to_csv(path, index=False)
        return path

    def write_listing(self, name, text) -> str:
        path = self.path(name)
        with open(path, 'w', encoding='utf-8', newline='\n') as f:
            f.write(text)
        return path

    def write_report(self, report: EvaluationReport) -> None:
        self.write_listing(config.REPORT_TEXT_FILE, render_text(report))
        write_csv(report, self.path(config.REPORT_CSV_FILE))

    def write_comparison(self, comparison: pd.DataFrame) -> str:
        path = self.path(config.COMPARISON_FILE)
        comparison.to_csv(path, index=False)
        self.write_listing(config.COMPARISON_TEXT_FILE, comparison.to_string(index=False, na_rep="-") + "\n")
        return path
