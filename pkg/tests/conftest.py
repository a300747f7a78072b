"""
Shared fixtures: the enrollment series and the published partition, labels,
groups and rule weights it produces.
"""
import os

import pytest

from fuzzyswarm.reference_data import ENROLLMENT
from fuzzyswarm.series import TimeSeries

DATA_DIR = os.path.join(os.path.dirname(__file__), '..', 'data')

ENROLLMENT_SETS = [
    (12861, 13055, 13245, 13436),
    (13245, 13436, 13626, 13816),
    (13626, 13816, 14007, 14197),
    (14007, 14197, 14388, 14578),
    (14388, 14578, 14768, 14959),
    (14768, 14959, 15149, 15339),
    (15149, 15339, 15530, 15720),
    (15530, 15720, 15910, 16101),
    (15910, 16101, 16291, 16482),
    (16291, 16482, 16672, 16862),
    (16672, 16862, 17053, 17243),
    (17053, 17243, 17433, 17624),
    (17433, 17624, 17814, 18004),
    (17814, 18004, 18195, 18385),
    (18195, 18385, 18576, 18766),
    (18576, 18766, 18956, 19147),
    (18956, 19147, 19337, 19531),
]

ENROLLMENT_LABELS = {
    1971: 1, 1972: 2, 1973: 3, 1974: 5, 1975: 7, 1976: 7, 1977: 7, 1978: 8,
    1979: 11, 1980: 11, 1981: 10, 1982: 7, 1983: 7, 1984: 6, 1985: 6, 1986: 8,
    1987: 11, 1988: 14, 1989: 16, 1990: 17, 1991: 17, 1992: 16,
}

# label -> pairwise pattern, oldest set first
PAIRWISE_GROUPS = {
    1: (1, 2), 2: (2, 3), 3: (3, 5), 4: (5, 7), 5: (7, 7), 6: (7, 7), 7: (7, 8),
    8: (8, 11), 9: (11, 11), 10: (11, 10), 11: (10, 7), 12: (7, 7), 13: (7, 6),
    14: (6, 6), 15: (6, 8), 16: (8, 11), 17: (11, 14), 18: (14, 16), 19: (16, 17),
    20: (17, 17), 21: (17, 16),
}

EXTENDED_GROUPS = {
    5: (5, 7, 7), 6: (7, 7, 7), 8: (7, 8, 11), 12: (10, 7, 7), 16: (6, 8, 11),
}

# Printed weights of every trained rule, most recent lag first
PUBLISHED_WEIGHTS = {
    1: (0.6488, 0.3882), 2: (0.6586, 0.4102), 3: (0.667, 0.408), 4: (0.6395, 0.369),
    5: (0.4411, 0.3158, 0.2699), 6: (0.4638, 0.4645, 0.0978), 7: (0.6695, 0.3967),
    8: (0.4379, 0.3892, 0.2171), 9: (0.1604, 0.8137), 10: (0.5497, 0.3798),
    11: (0.5997, 0.3809), 12: (0.4151, 0.3966, 0.1582), 13: (0.6194, 0.3731),
    14: (0.7524, 0.302), 15: (0.3869, 0.704), 16: (0.4668, 0.3847, 0.2725),
    17: (0.654, 0.4212), 18: (0.635, 0.4012), 19: (0.6202, 0.3874), 20: (0.5932, 0.3831),
}

PUBLISHED_FORECASTS = {
    1973: 13868, 1974: 14696, 1975: 15460, 1976: 15309, 1977: 15602, 1978: 15861,
    1979: 16806, 1980: 16919, 1981: 16390, 1982: 15434, 1983: 15497, 1984: 15143,
    1985: 15163, 1986: 15982, 1987: 16859, 1988: 18150, 1989: 18971, 1990: 19328,
    1991: 19336, 1992: 18875,
}


def expected_conditions(pattern):
    return tuple((lag, s) for lag, s in enumerate(reversed(pattern), start=1))


@pytest.fixture
def enrollment():
    return TimeSeries.from_pairs(sorted(ENROLLMENT.items()))


@pytest.fixture
def enrollment_csv():
    return os.path.join(DATA_DIR, 'enrollment.csv')


@pytest.fixture
def write_csv(tmp_path):
    def _write(text, name='series.csv'):
        path = tmp_path / name
        path.write_text(text, encoding='utf-8')
        return str(path)
    return _write
