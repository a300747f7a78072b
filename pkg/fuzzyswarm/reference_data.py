"""
Published enrollment forecasts of other fuzzy time series models.

Static data used only to render the comparison table next to a trained
model; none of these models is implemented here.
"""

# University of Alabama enrollments, 1971-1992
ENROLLMENT = {
    1971: 13055, 1972: 13563, 1973: 13867, 1974: 14696, 1975: 15460, 1976: 15311,
    1977: 15603, 1978: 15861, 1979: 16807, 1980: 16919, 1981: 16388, 1982: 15433,
    1983: 15497, 1984: 15145, 1985: 15163, 1986: 15984, 1987: 16859, 1988: 18150,
    1989: 18970, 1990: 19328, 1991: 19337, 1992: 18876,
}


def _column(first_year, values):
    return {first_year + i: v for i, v in enumerate(values)}


REFERENCE_MODELS = {
    "Chen (order 3)": _column(1974, [
        14500, 15500, 15500, 15500, 15500, 16500, 16500, 16500, 15500, 15500,
        15500, 15500, 15500, 16500, 18500, 18500, 19500, 19500, 18500,
    ]),
    "Li and Cheng": _column(1972, [
        13500, 13500, 14500, 15500, 15500, 15500, 15500, 16500, 16500, 16500,
        15500, 15500, 15500, 15500, 15500, 16500, 18500, 18500, 19500, 19500, 18500,
    ]),
    "Singh (order 3)": _column(1974, [
        14750, 15750, 15500, 15500, 15500, 16500, 16500, 16500, 15500, 15500,
        15250, 15500, 15500, 16500, 18500, 18500, 19500, 19500, 18750,
    ]),
    "Stevenson and Porter": _column(1972, [
        13410, 13932, 14664, 15423, 15847, 15580, 15877, 16773, 16897, 16341,
        15671, 15507, 15200, 15218, 16035, 16903, 17953, 18879, 19303, 19432, 18966,
    ]),
    "Chen and Hsu": _column(1972, [
        13750, 13875, 14750, 15375, 15313, 15625, 15813, 16834, 16834, 16416,
        15375, 15375, 15125, 15125, 15938, 16834, 18250, 18875, 19250, 19250, 18875,
    ]),
    "Chen and Chung (order 9)": _column(1979, [
        16846, 16846, 16420, 15462, 15462, 15153, 15153, 15977, 16846, 18133,
        18910, 19334, 19334, 18910,
    ]),
    "Kuo et al (order 9)": _column(1980, [
        16890, 16395, 15434, 15505, 15153, 15153, 15971, 16890, 18124, 18971,
        19337, 19337, 18882,
    ]),
}

# Printed MSE / MAPE of each reference column, for display next to the recomputed values
PUBLISHED_METRICS = {
    "Chen (order 3)": (86694, 1.53),
    "Li and Cheng": (85040, 1.53),
    "Singh (order 3)": (76509, 1.41),
    "Stevenson and Porter": (21575, 0.57),
    "Chen and Hsu": (5611, 0.36),
    "Chen and Chung (order 9)": (1101, 0.15),
    "Kuo et al (order 9)": (234, 0.014),
}
