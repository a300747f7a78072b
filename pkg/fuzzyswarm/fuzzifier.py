"""
Automatic fuzzification of a univariate series into overlapping trapezoids.

Steps: average distance of sorted values, its standard deviation, the
revised average distance after dropping outlying gaps, the universe of
discourse, the number of sets, trapezoid generation and finally the
membership assignment of every observation.

When the input values are all integers, AD, sigma, AD_R and the breakpoints
are rounded half-up to integers, which reproduces the enrollment tables.
"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .errors import (
    AllOutliersError,
    DegenerateSeriesError,
    InvalidSegmentError,
    OutOfUniverseError,
    TooFewValuesError,
)
from .series import TimeSeries
from .utils import fingerprint, is_integer_valued, round_half_up

logger = logging.getLogger(__name__)

# Two top memberships closer than this are treated as the 0.5 tie.
TIE_TOLERANCE = 1e-9


@dataclass(frozen=True)
class FuzzificationStats:
    avg_distance: float
    std_dev: float
    revised_avg_distance: float
    integer_valued: bool = False


@dataclass(frozen=True)
class Universe:
    lower: float
    upper: float

    def __post_init__(self):
        if not self.lower < self.upper:
            raise DegenerateSeriesError(f"Empty universe [{self.lower}, {self.upper}]")

    @property
    def range(self) -> float:
        return self.upper - self.lower

    def contains(self, x) -> bool:
        return self.lower <= x <= self.upper


@dataclass(frozen=True)
class TrapezoidalSet:
    index: int
    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        if not (self.a <= self.b <= self.c <= self.d):
            raise ValueError(
                f"A_{self.index} breakpoints must satisfy a <= b <= c <= d, "
                f"got ({self.a}, {self.b}, {self.c}, {self.d})"
            )

    @property
    def crisp_interval(self) -> Tuple[float, float]:
        return self.b, self.c

    @property
    def name(self) -> str:
        return f"A{self.index}"

    def membership(self, x) -> float:
        return membership(self, x)

    def __str__(self):
        return f"{self.name} ({_fmt(self.a)},{_fmt(self.b)},{_fmt(self.c)},{_fmt(self.d)})"


@dataclass(frozen=True)
class Partitioning:
    universe: Universe
    sets: Tuple[TrapezoidalSet, ...]
    segment_length: float

    @property
    def n_sets(self) -> int:
        return len(self.sets)

    @property
    def d_min(self) -> float:
        return self.sets[0].b

    @property
    def d_max(self) -> float:
        return self.sets[-1].c

    @property
    def adapted_segment(self) -> float:
        return (self.d_max - self.d_min) / (2 * self.n_sets - 1)

    def set_by_index(self, index) -> TrapezoidalSet:
        return self.sets[index - 1]

    def fingerprint(self) -> str:
        return fingerprint({
            'universe': [self.universe.lower, self.universe.upper],
            'segment_length': self.segment_length,
            'sets': [[s.index, s.a, s.b, s.c, s.d] for s in self.sets],
        })


@dataclass(frozen=True)
class FuzzifiedObservation:
    t: int
    primary_set: int
    membership_primary: float
    secondary_set: Optional[int] = None
    membership_secondary: Optional[float] = None

    @property
    def is_tie(self) -> bool:
        return self.secondary_set is not None


def _fmt(x):
    return f"{x:g}" if float(x).is_integer() else f"{x:.4f}"


def _sorted_gaps(values) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.size < 2:
        raise TooFewValuesError(f"Need at least 2 values, got {arr.size}")
    return np.diff(np.sort(arr))


def average_distance(values) -> float:
    """Mean absolute gap between neighbouring values of the sorted list."""
    return float(np.mean(_sorted_gaps(values)))


def std_dev_of_gaps(values, avg) -> float:
    """Population standard deviation of the sorted gaps around `avg`."""
    gaps = _sorted_gaps(values)
    return float(np.sqrt(np.mean((gaps - avg) ** 2)))


def _revise(gaps, avg, sigma) -> float:
    kept = gaps[(gaps >= avg - sigma) & (gaps <= avg + sigma)]
    if kept.size == 0:
        raise AllOutliersError(f"No gap within [{avg - sigma}, {avg + sigma}]")
    return float(np.mean(kept))


def revised_average_distance(values) -> FuzzificationStats:
    gaps = _sorted_gaps(values)
    integer_valued = is_integer_valued(values)

    avg = average_distance(values)
    sigma = std_dev_of_gaps(values, avg)
    if integer_valued:
        avg, sigma = round_half_up(avg), round_half_up(sigma)

    try:
        revised = _revise(gaps, avg, sigma)
    except AllOutliersError as e:
        logger.warning(f"{e}; using the unrevised average distance")
        revised = avg
    if integer_valued:
        revised = round_half_up(revised)

    if revised <= 0:
        if avg <= 0:
            raise DegenerateSeriesError("All values are identical; no segment length can be derived")
        logger.warning(f"Revised average distance is {revised}; falling back to AD={avg}")
        revised = avg

    logger.debug(f"AD={avg}, sigma={sigma}, AD_R={revised}")
    return FuzzificationStats(avg, sigma, revised, integer_valued)


def universe_of(stats: FuzzificationStats, d_min, d_max) -> Universe:
    if not d_min < d_max:
        raise DegenerateSeriesError(f"Degenerate data range [{d_min}, {d_max}]")
    return Universe(d_min - stats.revised_avg_distance, d_max + stats.revised_avg_distance)


def number_of_sets(range_, segment) -> int:
    if segment <= 0:
        raise InvalidSegmentError(f"Segment length must be positive, got {segment}")
    if range_ <= segment:
        raise InvalidSegmentError(f"Range {range_} must exceed segment length {segment}")
    return max(1, int(round_half_up((range_ - segment) / (2 * segment))))


def build_partitioning(stats: FuzzificationStats, d_min, d_max) -> Partitioning:
    """
    Lay n overlapping trapezoids on the universe.

    Interior breakpoints sit on an adapted segment S' = (d_max - d_min) / (2n - 1)
    so that b of the first set is d_min and c of the last set is d_max. The
    outermost spreads reach the universe bounds instead.
    """
    universe = universe_of(stats, d_min, d_max)
    n = number_of_sets(universe.range, stats.revised_avg_distance)

    grid = np.linspace(d_min, d_max, 2 * n)
    if stats.integer_valued and float(d_min).is_integer() and float(d_max).is_integer():
        grid = round_half_up(grid)

    sets = []
    for i in range(n):
        a = universe.lower if i == 0 else grid[2 * i - 1]
        d = universe.upper if i == n - 1 else grid[2 * i + 2]
        sets.append(TrapezoidalSet(i + 1, float(a), float(grid[2 * i]), float(grid[2 * i + 1]), float(d)))

    logger.info(f"Universe [{_fmt(universe.lower)}, {_fmt(universe.upper)}], {n} sets, S={_fmt(stats.revised_avg_distance)}")
    return Partitioning(universe, tuple(sets), stats.revised_avg_distance)


def partition_values(values) -> Tuple[FuzzificationStats, Partitioning]:
    """Steps 1-5 on a raw value list."""
    stats = revised_average_distance(values)
    arr = np.asarray(values, dtype=float)
    return stats, build_partitioning(stats, float(arr.min()), float(arr.max()))


def partition_series(series: TimeSeries) -> Tuple[FuzzificationStats, Partitioning]:
    return partition_values(series.values)


def membership(fuzzy_set: TrapezoidalSet, x) -> float:
    a, b, c, d = fuzzy_set.a, fuzzy_set.b, fuzzy_set.c, fuzzy_set.d
    if x < a or x > d:
        return 0.0
    if b <= x <= c:
        return 1.0
    if x < b:
        degree = (x - a) / (b - a)
    else:
        degree = (d - x) / (d - c)
    return float(min(1.0, max(0.0, degree)))


def fuzzify_value(partitioning: Partitioning, t, x) -> FuzzifiedObservation:
    if not partitioning.universe.contains(x):
        u = partitioning.universe
        raise OutOfUniverseError(f"Value {x} at t={t} outside universe [{u.lower}, {u.upper}]")

    degrees = np.array([membership(s, x) for s in partitioning.sets])
    order = np.argsort(-degrees, kind='stable')
    best = int(order[0])
    if len(order) > 1:
        runner_up = int(order[1])
        if abs(degrees[best] - degrees[runner_up]) <= TIE_TOLERANCE and abs(degrees[best] - 0.5) <= TIE_TOLERANCE:
            low, high = sorted((best, runner_up))
            return FuzzifiedObservation(t, low + 1, 0.5, high + 1, 0.5)
    return FuzzifiedObservation(t, best + 1, float(degrees[best]))


def fuzzify(series: TimeSeries, partitioning: Partitioning) -> List[FuzzifiedObservation]:
    """Label each observation with its set of maximal membership."""
    labels = [fuzzify_value(partitioning, o.t, o.value) for o in series]
    ties = sum(1 for f in labels if f.is_tie)
    if ties:
        logger.info(f"{ties} observations tie at 0.5; grouping uses the lower set")
    return labels
