import time
from dataclasses import replace

import numpy as np
import pytest

from fuzzyswarm.errors import ConfigError, DimensionMismatchError
from fuzzyswarm.evaluator import build_report
from fuzzyswarm.fuzzifier import fuzzify, partition_series
from fuzzyswarm.pso import PsoConfig
from fuzzyswarm.rule_engine import disambiguate, establish_groups, to_rules
from fuzzyswarm.trainer import (
    TrainedModel,
    TrainingConfig,
    defuzzify,
    derive_rule_seed,
    fitness_se,
    forecast_in_sample,
    install_weights,
    rule_fitness,
    train_all,
    train_rule,
)

from .conftest import PUBLISHED_FORECASTS, PUBLISHED_WEIGHTS

# Printed weights carry four decimals; these two years land 3 away from the printed forecasts
LOOSE_YEARS = {1979, 1984}


def build_rulebase(series):
    _, partitioning = partition_series(series)
    labels = fuzzify(series, partitioning)
    rulebase = to_rules(disambiguate(establish_groups(labels), labels), partitioning.fingerprint())
    return partitioning, rulebase


@pytest.fixture
def enrollment_rulebase(enrollment):
    return build_rulebase(enrollment)


def model_with(partitioning, rulebase, series, cfg=None):
    cfg = cfg or TrainingConfig()
    return TrainedModel(partitioning, rulebase, cfg, series.fingerprint(), cfg.seed)


class TestDefuzzify:
    def test_first_rule_of_enrollment(self):
        value = defuzzify([0.6488, 0.3882], [13563, 13055])
        assert value == pytest.approx(13867.62, abs=0.01)
        assert np.floor(value + 0.5) == 13868

    @pytest.mark.parametrize('k', [0.0, 0.5, 2.0, 3.7])
    def test_linear_in_weights(self, k):
        w, a = np.array([0.3, 0.2, 0.1]), np.array([100.0, 200.0, 300.0])
        assert defuzzify(k * w, a) == pytest.approx(k * defuzzify(w, a))

    def test_can_leave_the_input_envelope(self):
        assert defuzzify([0.9, 0.9], [10.0, 10.0]) == pytest.approx(18.0)

    def test_can_fall_below_the_input_envelope(self):
        actuals = [16919.0, 16807.0]
        w2 = (16388 - 0.5 * actuals[0]) / actuals[1]
        assert 0.0 <= w2 <= 1.0
        value = defuzzify([0.5, w2], actuals)
        assert value == pytest.approx(16388)
        assert value < min(actuals)

    def test_squared_error(self):
        assert fitness_se(13867.62, 13867) == pytest.approx(0.3844)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            defuzzify([0.5, 0.5], [1.0])


class TestTrainingConfig:
    def test_weight_ladder(self):
        cfg = TrainingConfig()
        assert list(cfg.initial_weights(2)) == [0.75, 0.5]
        assert list(cfg.initial_weights(5)) == pytest.approx([0.75, 0.5, 0.25, 0.05, 0.05])

    @pytest.mark.parametrize('runs', [0, -3, 1.5])
    def test_invalid_runs(self, runs):
        with pytest.raises(ConfigError):
            TrainingConfig(runs=runs)

    def test_ladder_outside_position_bounds(self):
        with pytest.raises(ConfigError):
            TrainingConfig(pso=PsoConfig(pos_min=0.1, pos_max=1.0))


def test_rule_seed_depends_only_on_inputs():
    assert derive_rule_seed(0, 5, 2) == derive_rule_seed(0, 5, 2)
    seeds = {derive_rule_seed(0, label, restart) for label in range(1, 22) for restart in range(10)}
    assert len(seeds) == 210
    assert derive_rule_seed(1, 5, 2) != derive_rule_seed(0, 5, 2)


class TestPublishedWeights:
    def test_forecasts_match_published_column(self, enrollment, enrollment_rulebase):
        partitioning, rulebase = enrollment_rulebase
        weighted = install_weights(rulebase, PUBLISHED_WEIGHTS, enrollment)
        forecasts = forecast_in_sample(model_with(partitioning, weighted, enrollment), enrollment)

        assert [f.t for f in forecasts] == list(range(1973, 1993))
        for f in forecasts:
            tolerance = 3 if f.t in LOOSE_YEARS else 1
            assert abs(np.floor(f.value + 0.5) - PUBLISHED_FORECASTS[f.t]) <= tolerance, f.t

    def test_installed_fitness_is_recomputed(self, enrollment, enrollment_rulebase):
        _, rulebase = enrollment_rulebase
        weighted = install_weights(rulebase, PUBLISHED_WEIGHTS, enrollment)
        assert weighted.by_label(1).fitness == pytest.approx((13867.6254 - 13867) ** 2, abs=1e-3)
        assert not weighted.by_label(21).trained

    def test_published_weights_give_small_error(self, enrollment, enrollment_rulebase):
        partitioning, rulebase = enrollment_rulebase
        weighted = install_weights(rulebase, PUBLISHED_WEIGHTS)
        report = build_report(enrollment, forecast_in_sample(model_with(partitioning, weighted, enrollment), enrollment))
        assert report.mse == pytest.approx(1.25, abs=0.01)
        assert report.mape < 0.006


def test_single_rule_swarm_reaches_target(enrollment, enrollment_rulebase):
    _, rulebase = enrollment_rulebase
    rule = rulebase.by_label(1)
    weights = train_rule(rule, enrollment, TrainingConfig(), derive_rule_seed(0, 1, 0))
    assert weights.shape == (2,)
    assert np.all((weights >= 0) & (weights <= 1))
    forecast = defuzzify(weights, [13563, 13055])
    assert (forecast - 13867) ** 2 <= 3.0


@pytest.fixture(scope='module')
def trained():
    from fuzzyswarm.reference_data import ENROLLMENT
    from fuzzyswarm.series import TimeSeries

    series = TimeSeries.from_pairs(sorted(ENROLLMENT.items()))
    partitioning, rulebase = build_rulebase(series)
    started = time.perf_counter()
    model = train_all(rulebase, series, TrainingConfig(), partitioning)
    elapsed = time.perf_counter() - started
    return series, model, elapsed


class TestEndToEnd:
    def test_structure(self, trained):
        _, model, _ = trained
        assert len(model.rulebase) == 21
        assert len(model.trained_rules) == 20
        untrainable = [r for r in model.results if not r.trainable]
        assert [r.label for r in untrainable] == [21]

    def test_every_rule_converges(self, trained):
        _, model, _ = trained
        assert model.non_converged == []
        assert all(r.fitness <= 3.0 for r in model.trained_rules)

    def test_stored_fitness_matches_weights(self, trained):
        series, model, _ = trained
        for rule in model.trained_rules:
            assert rule.fitness == pytest.approx(rule_fitness(rule, series, rule.weights), abs=1e-9), rule.label

    def test_in_sample_accuracy(self, trained):
        series, model, _ = trained
        report = build_report(series, forecast_in_sample(model, series))
        assert report.n_evaluated == 20
        assert report.gaps == [1971, 1972]
        assert report.mse_raw <= 3.0
        assert report.mse <= 3.0
        assert report.mape <= 0.02

    def test_runtime(self, trained):
        assert trained[2] < 10.0

    def test_deterministic(self, trained):
        series, model, _ = trained
        partitioning, rulebase = build_rulebase(series)
        again = train_all(rulebase, series, TrainingConfig(), partitioning)
        assert again.rulebase == model.rulebase


def test_parallel_matches_serial(enrollment, enrollment_rulebase):
    partitioning, rulebase = enrollment_rulebase
    cfg = TrainingConfig(runs=2)
    serial = train_all(rulebase, enrollment, cfg, partitioning, workers=1)
    parallel = train_all(rulebase, enrollment, cfg, partitioning, workers=2)
    assert serial.rulebase == parallel.rulebase


def test_seed_changes_weights(enrollment, enrollment_rulebase):
    partitioning, rulebase = enrollment_rulebase
    a = train_all(rulebase, enrollment, TrainingConfig(pso=PsoConfig(seed=1), runs=1), partitioning)
    b = train_all(rulebase, enrollment, TrainingConfig(pso=PsoConfig(seed=2), runs=1), partitioning)
    assert a.rulebase != b.rulebase


def test_competing_rules_leave_a_gap(enrollment, enrollment_rulebase):
    partitioning, rulebase = enrollment_rulebase
    weighted = install_weights(rulebase, PUBLISHED_WEIGHTS)
    twin = replace(weighted.by_label(1), label=99)
    doubled = weighted.with_rules(list(weighted) + [twin])

    forecasts = forecast_in_sample(model_with(partitioning, doubled, enrollment), enrollment)
    assert [f.t for f in forecasts] == list(range(1974, 1993))
