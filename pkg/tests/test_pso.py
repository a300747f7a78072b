import numpy as np
import pytest

from fuzzyswarm.errors import ConfigError, DimensionMismatchError
from fuzzyswarm.pso import PsoConfig, optimize, update_position, update_velocity


def sphere(target):
    target = np.asarray(target, dtype=float)
    return lambda w: float(np.sum((w - target) ** 2))


def start(cfg, dim, value=0.5):
    positions = np.full((cfg.n_particles, dim), value)
    velocities = np.random.default_rng(7).uniform(cfg.v_min, cfg.v_max, size=(cfg.n_particles, dim))
    return positions, velocities


class TestConfig:
    def test_defaults(self):
        cfg = PsoConfig()
        assert (cfg.inertia, cfg.c1, cfg.c2) == (1.4, 2.0, 2.0)
        assert (cfg.v_min, cfg.v_max) == (-0.01, 0.01)
        assert (cfg.pos_min, cfg.pos_max) == (0.0, 1.0)
        assert (cfg.n_particles, cfg.max_iterations, cfg.target_fitness) == (5, 500, 3.0)

    @pytest.mark.parametrize('kwargs', [
        {'n_particles': 0},
        {'max_iterations': 0},
        {'v_min': 0.01, 'v_max': 0.01},
        {'pos_min': 1.0, 'pos_max': 0.0},
        {'inertia': float('inf')},
        {'target_fitness': float('nan')},
        {'seed': -1},
        {'seed': 2 ** 64},
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(ConfigError):
            PsoConfig(**kwargs)


def test_velocity_is_clamped():
    cfg = PsoConfig()
    v = update_velocity(cfg, [0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 0.0], 1.0, 1.0)
    assert list(v) == [0.01, -0.01]


@pytest.mark.parametrize('v, expected', [(0.0049, 0.00686), (0.0011, 0.00154)])
def test_only_inertia_acts_when_bests_coincide(v, expected):
    cfg = PsoConfig()
    new_v = update_velocity(cfg, [v], [0.75], [0.75], [0.75], 0.3, 0.9)
    assert new_v[0] == pytest.approx(expected)


def test_infinite_target_stops_at_once():
    cfg = PsoConfig(target_fitness=float('inf'))
    result = optimize(cfg, 2, *start(cfg, 2), sphere([0.1, 0.1]))
    assert result.converged and result.iterations_used == 0


def test_velocity_formula_inside_limits():
    cfg = PsoConfig(v_min=-10, v_max=10, inertia=0.5, c1=1.0, c2=2.0)
    v = update_velocity(cfg, [1.0], [0.0], [2.0], [3.0], 0.5, 0.25)
    assert v[0] == pytest.approx(0.5 * 1.0 + 1.0 * 0.5 * 2.0 + 2.0 * 0.25 * 3.0)


def test_position_is_clamped():
    cfg = PsoConfig()
    assert list(update_position([0.995, 0.005], [0.01, -0.01], cfg)) == [1.0, 0.0]


def test_dimension_mismatch():
    cfg = PsoConfig()
    with pytest.raises(DimensionMismatchError):
        update_velocity(cfg, [0.0], [0.0, 0.0], [0.0], [0.0], 0.5, 0.5)
    with pytest.raises(DimensionMismatchError):
        update_position([0.0, 0.0], [0.0], cfg)


def test_initial_state_is_validated():
    cfg = PsoConfig()
    positions, velocities = start(cfg, 2)
    with pytest.raises(ConfigError):
        optimize(cfg, 2, positions[:3], velocities, sphere([0.5, 0.5]))
    with pytest.raises(ConfigError):
        optimize(cfg, 2, positions + 1.0, velocities, sphere([0.5, 0.5]))
    with pytest.raises(ConfigError):
        optimize(cfg, 2, positions, velocities + 1.0, sphere([0.5, 0.5]))


def test_stops_immediately_when_start_meets_target():
    cfg = PsoConfig(target_fitness=1.0)
    result = optimize(cfg, 2, *start(cfg, 2), sphere([0.5, 0.5]))
    assert result.converged
    assert result.iterations_used == 0
    assert result.history == [0.0]


def test_never_converging_runs_to_the_cap():
    cfg = PsoConfig(target_fitness=-1.0, max_iterations=25)
    result = optimize(cfg, 2, *start(cfg, 2), sphere([0.2, 0.8]))
    assert not result.converged
    assert result.iterations_used == 25
    assert len(result.history) == 26


def test_finds_sphere_minimum():
    cfg = PsoConfig(v_min=-0.1, v_max=0.1, inertia=0.6, c1=1.5, c2=1.5, target_fitness=1e-4, max_iterations=2000)
    _, velocities = start(cfg, 3)
    positions = np.random.default_rng(11).uniform(0, 1, size=(cfg.n_particles, 3))
    result = optimize(cfg, 3, positions, velocities, sphere([0.2, 0.7, 0.9]))
    assert result.converged
    assert np.allclose(result.best_position, [0.2, 0.7, 0.9], atol=2e-2)


def test_same_seed_same_run():
    cfg = PsoConfig(seed=42, target_fitness=-1.0, max_iterations=50)
    a = optimize(cfg, 2, *start(cfg, 2), sphere([0.1, 0.9]))
    b = optimize(cfg, 2, *start(cfg, 2), sphere([0.1, 0.9]))
    assert a.history == b.history
    assert np.array_equal(a.best_position, b.best_position)


def test_personal_bests_never_beat_global_best():
    cfg = PsoConfig(seed=3, target_fitness=-1.0, max_iterations=40)
    result = optimize(cfg, 2, *start(cfg, 2), sphere([0.3, 0.6]))
    assert len(result.particles) == cfg.n_particles
    assert all(p.best_fitness >= result.best_fitness for p in result.particles)


@pytest.mark.parametrize('seed', range(1000))
def test_bounds_and_monotone_global_best(seed):
    rng = np.random.default_rng(seed)
    dim = int(rng.integers(1, 5))
    pos_min = float(rng.uniform(-2, 0))
    pos_max = pos_min + float(rng.uniform(0.1, 3))
    v_max = float(rng.uniform(0.001, 1))
    cfg = PsoConfig(
        inertia=float(rng.uniform(0, 2)),
        c1=float(rng.uniform(0, 3)),
        c2=float(rng.uniform(0, 3)),
        v_min=-v_max,
        v_max=v_max,
        pos_min=pos_min,
        pos_max=pos_max,
        n_particles=int(rng.integers(1, 8)),
        max_iterations=int(rng.integers(1, 15)),
        target_fitness=-1.0,
        seed=seed,
    )
    positions = rng.uniform(pos_min, pos_max, size=(cfg.n_particles, dim))
    velocities = rng.uniform(-v_max, v_max, size=(cfg.n_particles, dim))
    target = rng.uniform(pos_min - 1, pos_max + 1, size=dim)

    seen = []

    def fitness(w):
        seen.append(w.copy())
        return float(np.sum((w - target) ** 2))

    result = optimize(cfg, dim, positions, velocities, fitness)

    for w in seen:
        assert np.all(w >= pos_min) and np.all(w <= pos_max)
    for p in result.particles:
        assert np.all(p.velocity >= -v_max) and np.all(p.velocity <= v_max)
    assert all(later <= earlier for earlier, later in zip(result.history, result.history[1:]))
    assert result.best_fitness == pytest.approx(fitness(result.best_position))
