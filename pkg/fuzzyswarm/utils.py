import hashlib
import json
import logging
import os

import numpy as np


def setup_logging(level=logging.INFO):
    logging.basicConfig(
        level=level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )


def get_env_var(name, default=None):
    return os.environ.get(name, default)


def round_half_up(x):
    """
    Round to the nearest integer, halves away from zero for positives.
    Works on scalars and numpy arrays (numpy's own round is half-to-even).
    """
    rounded = np.floor(np.asarray(x, dtype=float) + 0.5)
    if rounded.ndim == 0:
        return float(rounded)
    return rounded


def is_integer_valued(values):
    arr = np.asarray(values, dtype=float)
    return bool(arr.size) and bool(np.all(arr == np.floor(arr)))


def fingerprint(payload):
    """
    Stable sha256 of a JSON-serializable payload.
    Keys are sorted and floats use repr, so equal data always hashes equal.
    """
    text = json.dumps(payload, sort_keys=True, separators=(',', ':'))
    return hashlib.sha256(text.encode('utf-8')).hexdigest()
