"""
Particle swarm optimizer over fixed-dimension real vectors.

Velocities are clamped to [v_min, v_max] and positions to [pos_min, pos_max]
after every update. Particles are processed in order within an iteration
and the global best is updated as soon as a particle improves on it, so the
random stream (r1, r2 per particle per iteration from one seeded generator)
fully determines the run.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, List, Sequence

import numpy as np

from . import config
from .errors import ConfigError, DimensionMismatchError

logger = logging.getLogger(__name__)

MAX_SEED = 2 ** 64


@dataclass(frozen=True)
class PsoConfig:
    inertia: float = config.INERTIA
    c1: float = config.C1
    c2: float = config.C2
    v_min: float = -config.V_MAX
    v_max: float = config.V_MAX
    pos_min: float = config.POS_MIN
    pos_max: float = config.POS_MAX
    n_particles: int = config.N_PARTICLES
    max_iterations: int = config.MAX_ITERATIONS
    target_fitness: float = config.TARGET_SE
    seed: int = config.DEFAULT_SEED

    def __post_init__(self):
        self.validate()

    def validate(self):
        if not self.v_min < self.v_max:
            raise ConfigError(f"v_min ({self.v_min}) must be below v_max ({self.v_max})")
        if not self.pos_min < self.pos_max:
            raise ConfigError(f"pos_min ({self.pos_min}) must be below pos_max ({self.pos_max})")
        if int(self.n_particles) != self.n_particles or self.n_particles < 1:
            raise ConfigError(f"n_particles must be a positive integer, got {self.n_particles}")
        if int(self.max_iterations) != self.max_iterations or self.max_iterations < 1:
            raise ConfigError(f"max_iterations must be a positive integer, got {self.max_iterations}")
        if not 0 <= int(self.seed) < MAX_SEED:
            raise ConfigError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        for name in ('inertia', 'c1', 'c2', 'v_min', 'v_max', 'pos_min', 'pos_max'):
            if not math.isfinite(getattr(self, name)):
                raise ConfigError(f"{name} must be finite")
        if math.isnan(self.target_fitness):
            raise ConfigError("target_fitness must not be NaN")


@dataclass
class Particle:
    position: np.ndarray
    velocity: np.ndarray
    best_position: np.ndarray
    best_fitness: float


@dataclass
class SwarmResult:
    best_position: np.ndarray
    best_fitness: float
    iterations_used: int
    converged: bool
    history: List[float] = field(default_factory=list)
    particles: List[Particle] = field(default_factory=list)


def _check_dims(*vectors):
    dims = {np.shape(v) for v in vectors}
    if len(dims) != 1:
        raise DimensionMismatchError(f"Vectors differ in shape: {sorted(dims)}")


def update_velocity(cfg: PsoConfig, v, x, p_best, g_best, r1, r2) -> np.ndarray:
    v, x, p_best, g_best = (np.asarray(a, dtype=float) for a in (v, x, p_best, g_best))
    _check_dims(v, x, p_best, g_best)
    new_v = cfg.inertia * v + cfg.c1 * r1 * (p_best - x) + cfg.c2 * r2 * (g_best - x)
    return np.clip(new_v, cfg.v_min, cfg.v_max)


def update_position(x, v, cfg: PsoConfig) -> np.ndarray:
    x, v = np.asarray(x, dtype=float), np.asarray(v, dtype=float)
    _check_dims(x, v)
    return np.clip(x + v, cfg.pos_min, cfg.pos_max)


def _as_matrix(vectors, cfg, dim, what):
    arr = np.array(vectors, dtype=float)
    if arr.shape != (cfg.n_particles, dim):
        raise ConfigError(f"{what} must have shape ({cfg.n_particles}, {dim}), got {arr.shape}")
    return arr


def optimize(
    cfg: PsoConfig,
    dim: int,
    initial_positions: Sequence[Sequence[float]],
    initial_velocities: Sequence[Sequence[float]],
    fitness: Callable[[np.ndarray], float],
) -> SwarmResult:
    """Minimize `fitness` until it drops to target_fitness or max_iterations pass."""
    if int(dim) != dim or dim < 1:
        raise ConfigError(f"dim must be a positive integer, got {dim}")
    positions = _as_matrix(initial_positions, cfg, dim, "initial_positions")
    velocities = _as_matrix(initial_velocities, cfg, dim, "initial_velocities")
    if np.any(positions < cfg.pos_min) or np.any(positions > cfg.pos_max):
        raise ConfigError(f"initial positions must lie in [{cfg.pos_min}, {cfg.pos_max}]")
    if np.any(velocities < cfg.v_min) or np.any(velocities > cfg.v_max):
        raise ConfigError(f"initial velocities must lie in [{cfg.v_min}, {cfg.v_max}]")

    rng = np.random.default_rng(cfg.seed)

    particles = []
    g_best, g_fit = None, math.inf
    for x, v in zip(positions, velocities):
        f = float(fitness(x))
        particles.append(Particle(x.copy(), v.copy(), x.copy(), f))
        if g_best is None or f < g_fit:
            g_best, g_fit = x.copy(), f

    history = [g_fit]
    iterations = 0
    while g_fit > cfg.target_fitness and iterations < cfg.max_iterations:
        iterations += 1
        for p in particles:
            r1, r2 = rng.random(2)
            p.velocity = update_velocity(cfg, p.velocity, p.position, p.best_position, g_best, r1, r2)
            p.position = update_position(p.position, p.velocity, cfg)
            f = float(fitness(p.position))
            if f < p.best_fitness:
                p.best_fitness = f
                p.best_position = p.position.copy()
            if f < g_fit:
                g_fit = f
                g_best = p.position.copy()
        history.append(g_fit)
        logger.debug(f"iteration {iterations}: global best {g_fit:.6g}")

    converged = g_fit <= cfg.target_fitness
    return SwarmResult(g_best, g_fit, iterations, converged, history, particles)
