"""
Forecast evaluation: MSE, MAPE and the aligned comparison report.
"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from .errors import AlignmentError, EmptyInputError, ZeroActualError
from .reference_data import PUBLISHED_METRICS, REFERENCE_MODELS
from .series import TimeSeries
from .trainer import Forecast
from .utils import round_half_up

logger = logging.getLogger(__name__)

PROPOSED = "Proposed model"


def _pairs_array(pairs) -> Tuple[np.ndarray, np.ndarray]:
    arr = np.asarray(list(pairs), dtype=float)
    if arr.size == 0:
        raise EmptyInputError("No (forecast, actual) pairs to evaluate")
    return arr[:, 0], arr[:, 1]


def mse(pairs: Sequence[Tuple[float, float]]) -> float:
    forecasts, actuals = _pairs_array(pairs)
    return float(np.mean((forecasts - actuals) ** 2))


def mape(pairs: Sequence[Tuple[float, float]]) -> float:
    """Mean absolute percentage error, in percent."""
    forecasts, actuals = _pairs_array(pairs)
    if np.any(actuals == 0):
        raise ZeroActualError("MAPE is undefined when an actual value is zero")
    return float(np.mean(np.abs(forecasts - actuals) / np.abs(actuals)) * 100.0)


def fixed_order_coverage(n_observations, order) -> int:
    """How many points an order-`order` scheme can forecast in-sample."""
    return max(0, n_observations - order)


@dataclass(frozen=True)
class ReportRow:
    t: int
    actual: float
    forecast: Optional[float] = None
    forecast_raw: Optional[float] = None

    @property
    def is_gap(self) -> bool:
        return self.forecast is None

    @property
    def abs_error(self) -> Optional[float]:
        return None if self.is_gap else abs(self.forecast - self.actual)

    @property
    def pct_error(self) -> Optional[float]:
        if self.is_gap or self.actual == 0:
            return None
        return self.abs_error / abs(self.actual) * 100.0


@dataclass(frozen=True)
class EvaluationReport:
    rows: Tuple[ReportRow, ...]
    mse: Optional[float]
    mape: Optional[float]
    mse_raw: Optional[float] = None
    mape_raw: Optional[float] = None

    @property
    def n_evaluated(self) -> int:
        return sum(1 for r in self.rows if not r.is_gap)

    @property
    def gaps(self) -> List[int]:
        return [r.t for r in self.rows if r.is_gap]


def _safe_metric(metric, pairs):
    try:
        return metric(pairs)
    except (EmptyInputError, ZeroActualError) as e:
        logger.warning(f"{metric.__name__.upper()} not available: {e}")
        return None


def build_report(series: TimeSeries, forecasts: Sequence[Forecast]) -> EvaluationReport:
    """
    Align forecasts with the series. On an integer-valued series the headline
    metrics use forecasts rounded to integers; the raw metrics use full precision.
    """
    by_t = {}
    for f in forecasts:
        if not series.start <= f.t <= series.end:
            raise AlignmentError(f"Forecast at t={f.t} outside series [{series.start}, {series.end}]")
        if f.t in by_t:
            raise AlignmentError(f"Two forecasts for t={f.t}")
        by_t[f.t] = f.value

    rounding = series.integer_valued
    rows = []
    for o in series:
        raw = by_t.get(o.t)
        if raw is None:
            rows.append(ReportRow(o.t, o.value))
            continue
        shown = round_half_up(raw) if rounding else raw
        rows.append(ReportRow(o.t, o.value, shown, raw))

    evaluated = [r for r in rows if not r.is_gap]
    report = EvaluationReport(
        rows=tuple(rows),
        mse=_safe_metric(mse, [(r.forecast, r.actual) for r in evaluated]),
        mape=_safe_metric(mape, [(r.forecast, r.actual) for r in evaluated]),
        mse_raw=_safe_metric(mse, [(r.forecast_raw, r.actual) for r in evaluated]),
        mape_raw=_safe_metric(mape, [(r.forecast_raw, r.actual) for r in evaluated]),
    )
    logger.info(f"Evaluated {report.n_evaluated} of {len(rows)} points, MSE={report.mse}, MAPE={report.mape}")
    return report


def report_frame(report: EvaluationReport) -> pd.DataFrame:
    return pd.DataFrame(
        [(r.t, r.actual, r.forecast, r.abs_error, r.pct_error) for r in report.rows],
        columns=['t', 'actual', 'forecast', 'abs_error', 'pct_error'],
    )


def _fmt_metric(value, digits):
    return "-" if value is None else f"{value:.{digits}f}"


def render_text(report: EvaluationReport) -> str:
    frame = report_frame(report)
    table = frame.to_string(
        index=False,
        na_rep='-',
        formatters={
            'actual': lambda v: f"{v:g}",
            'forecast': lambda v: '-' if pd.isna(v) else f"{v:g}",
            'abs_error': lambda v: '-' if pd.isna(v) else f"{v:g}",
            'pct_error': lambda v: '-' if pd.isna(v) else f"{v:.4f}",
        },
    )
    lines = [
        table,
        "",
        f"evaluated: {report.n_evaluated} of {len(report.rows)} (gaps: {report.gaps})",
        f"MSE:  {_fmt_metric(report.mse, 4)}   (unrounded {_fmt_metric(report.mse_raw, 4)})",
        f"MAPE: {_fmt_metric(report.mape, 4)}%  (unrounded {_fmt_metric(report.mape_raw, 4)}%)",
    ]
    return "\n".join(lines) + "\n"


def write_csv(report: EvaluationReport, path) -> None:
    frame = report_frame(report)
    footer = pd.DataFrame(
        [('MSE', report.mse, None, None, None), ('MAPE', report.mape, None, None, None)],
        columns=frame.columns,
    )
    pd.concat([frame.astype(object), footer], ignore_index=True).to_csv(path, index=False)


def compare_models(series: TimeSeries, report: EvaluationReport) -> pd.DataFrame:
    """
    MSE/MAPE of every published reference column, recomputed against `series`,
    plus the model behind `report`. Reference columns only apply to years they cover.
    """
    actual = {o.t: o.value for o in series}
    records = []
    for name, column in REFERENCE_MODELS.items():
        pairs = [(v, actual[t]) for t, v in column.items() if t in actual]
        published_mse, published_mape = PUBLISHED_METRICS[name]
        records.append({
            'model': name,
            'n': len(pairs),
            'mse': _safe_metric(mse, pairs),
            'mape': _safe_metric(mape, pairs),
            'published_mse': published_mse,
            'published_mape': published_mape,
        })
    records.append({
        'model': PROPOSED,
        'n': report.n_evaluated,
        'mse': report.mse,
        'mape': report.mape,
        'published_mse': None,
        'published_mape': None,
    })
    return pd.DataFrame.from_records(records)
