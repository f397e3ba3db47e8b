"""File formats: input tables, fit configuration, JSON reports and plot data.

Input CSV::

    # comment lines start with '#'
    benefit,count,states
    5000,1200,40
    ...

``states`` is optional. Reports are JSON with a ``format_version`` gate;
plot data is CSV with one row per bin.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from pathlib import Path

import numpy as np

from .distribution import BinnedSeries, PeakInfo, SmoothingConfig
from .entropy import InequalityReport
from .errors import InvalidInputError
from .fitting import FitConfig, FitReport, Goodness, Segment
from .laws import FitParameters
from .lorenz import SymmetryVerdict

FORMAT_VERSION = "1"
PLOT_COLUMNS = ("omega", "benefit", "nu_observed", "nu_smoothed", "nu_fitted", "segment_id")


# -- input table ------------------------------------------------------------


def _number(text: str, column: str, lineno: int) -> float:
    try:
        value = float(text)
    except ValueError:
        raise InvalidInputError(f"line {lineno}: {column} {text!r} is not a number") from None
    if not math.isfinite(value):
        raise InvalidInputError(f"line {lineno}: {column} must be finite")
    if value < 0:
        raise InvalidInputError(f"line {lineno}: negative {column} {text}")
    return value


def parse_table(text: str, period: str = "1 year", unit_states: bool = False) -> BinnedSeries:
    """Parse CSV text into a validated :class:`BinnedSeries`.

    With ``unit_states`` a missing states column means one state per bin
    (``nu_k = count_k``) instead of ``G_k = count_k``.
    """
    lines = [(i, ln) for i, ln in enumerate(text.splitlines(), start=1)]
    body = [(i, ln) for i, ln in lines if ln.strip() and not ln.lstrip().startswith("#")]
    if not body:
        raise InvalidInputError("empty file")
    header_no, header_line = body[0]
    header = [h.strip().lower() for h in next(csv.reader([header_line]))]
    for col in ("benefit", "count"):
        if col not in header:
            raise InvalidInputError(f"line {header_no}: missing column {col!r}")
    has_states = "states" in header
    rows = []
    for lineno, line in body[1:]:
        fields = [f.strip() for f in next(csv.reader([line]))]
        if len(fields) != len(header):
            raise InvalidInputError(
                f"line {lineno}: expected {len(header)} fields, got {len(fields)}"
            )
        rec = dict(zip(header, fields))
        b = _number(rec["benefit"], "benefit", lineno)
        c = _number(rec["count"], "count", lineno)
        s = None
        if has_states:
            s = _number(rec["states"], "states", lineno)
            if s <= 0 or s != int(s):
                raise InvalidInputError(f"line {lineno}: states must be a positive integer")
        rows.append((b, c, s, lineno))
    if not rows:
        raise InvalidInputError("no data rows")
    rows.sort(key=lambda r: r[0])
    for prev, cur in zip(rows, rows[1:]):
        if prev[0] == cur[0]:
            raise InvalidInputError(f"line {cur[3]}: duplicate benefit {cur[0]:g} (also on line {prev[3]})")
    benefit = np.array([r[0] for r in rows])
    count = np.array([r[1] for r in rows])
    if has_states:
        states = np.array([r[2] for r in rows])
    elif unit_states:
        states = np.ones_like(count)
    else:
        states = None
    series = BinnedSeries(benefit, count, states, period)
    series.check()
    return series


def load_distribution(path, period: str = "1 year", unit_states: bool = False) -> BinnedSeries:
    p = Path(path)
    try:
        text = p.read_text()
    except FileNotFoundError:
        raise InvalidInputError(f"{p}: no such file") from None
    except OSError as exc:
        raise InvalidInputError(f"{p}: {exc.strerror}") from None
    return parse_table(text, period, unit_states)


# -- configuration -----------------------------------------------------------

_CONFIG_KEYS = {
    "smoothing_window",
    "smoothing_passes",
    "pin_peak_to_min",
    "theta_range",
    "theta_tolerance",
    "max_segments",
    "segment_criterion",
    "min_segment_bins",
    "exclude_zero_occupation",
    "weighted",
}


def config_from_dict(d: dict) -> FitConfig:
    unknown = set(d) - _CONFIG_KEYS
    if unknown:
        raise InvalidInputError(f"unknown config key(s): {', '.join(sorted(unknown))}")
    kw = {k: v for k, v in d.items() if not k.startswith("smoothing_")}
    if "theta_range" in kw:
        kw["theta_range"] = tuple(float(v) for v in kw["theta_range"])
    try:
        sm = SmoothingConfig(
            window=int(d.get("smoothing_window", 5)),
            passes=int(d.get("smoothing_passes", 1)),
        )
        return FitConfig(smoothing=sm, **kw)
    except (TypeError, ValueError) as exc:
        raise InvalidInputError(f"bad config: {exc}") from None


def config_to_dict(cfg: FitConfig) -> dict:
    return {
        "smoothing_window": cfg.smoothing.window,
        "smoothing_passes": cfg.smoothing.passes,
        "pin_peak_to_min": cfg.pin_peak_to_min,
        "theta_range": list(cfg.theta_range),
        "theta_tolerance": cfg.theta_tolerance,
        "max_segments": cfg.max_segments,
        "segment_criterion": cfg.segment_criterion,
        "min_segment_bins": cfg.min_segment_bins,
        "exclude_zero_occupation": cfg.exclude_zero_occupation,
        "weighted": cfg.weighted,
    }


def load_config(path) -> dict:
    """Read a flat JSON object of :class:`FitConfig` settings."""
    try:
        d = json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise InvalidInputError(f"{path}: no such file") from None
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"{path}: invalid JSON ({exc})") from None
    if not isinstance(d, dict):
        raise InvalidInputError(f"{path}: config must be a JSON object")
    return d


# -- report document ----------------------------------------------------------


def _num(x):
    # JSON has no NaN/inf; absent values are null
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else None


def _unnum(x):
    return math.nan if x is None else float(x)


def _params_to_dict(p: FitParameters) -> dict:
    return {
        "alpha": _num(p.alpha),
        "beta": _num(p.beta),
        "lambda": _num(p.lam),
        "theta": _num(p.theta),
        "mu": _num(p.mu),
        "temperature": _num(p.temperature),
    }


def _params_from_dict(d: dict) -> FitParameters:
    return FitParameters(_unnum(d["alpha"]), _unnum(d["beta"]), _unnum(d["lambda"]), _unnum(d["theta"]))


def report_to_dict(report: FitReport, cfg: FitConfig, w_bar: float) -> dict:
    ineq = report.inequality
    return {
        "format_version": FORMAT_VERSION,
        "parameters": _params_to_dict(report.global_params),
        "peak": {
            "omega_p": _num(report.peak.omega_p),
            "benefit": _num(report.peak.omega_p * w_bar),
            "index": report.peak.index,
            "mode": report.peak.mode,
        },
        "poverty_fraction": _num(report.poverty_fraction_Fp),
        "gini": _num(report.gini),
        "symmetry": {
            "kind": report.symmetry.kind,
            "equivalent_ratio": _num(report.symmetry.equivalent_ratio),
        },
        "inequality_index": _num(ineq.index_I),
        "welfare": _num(ineq.welfare_U),
        "diversity_entropy": _num(ineq.H),
        "max_diversity_entropy": _num(ineq.H_max),
        "mean_benefit": _num(w_bar),
        "mean_phi": _num(report.mean_phi),
        "segments": [
            {
                "label": s.label,
                "bin_range": list(s.bin_range),
                "omega_range": [_num(v) for v in s.omega_range],
                "benefit_range": [_num(v) for v in s.benefit_range],
                "parameters": _params_to_dict(s.params),
                "pearson_r": _num(s.pearson_r),
            }
            for s in report.segments
        ],
        "goodness": {
            "pearson_r": _num(report.goodness.pearson_r),
            "rmse_nu": _num(report.goodness.rmse_nu),
            "r_squared": _num(report.goodness.r_squared),
        },
        "warnings": list(report.warnings),
        "config": config_to_dict(cfg),
    }


def report_from_dict(d: dict) -> tuple[FitReport, FitConfig, float]:
    """Rebuild ``(report, config, w_bar)`` from a parsed report document."""
    version = d.get("format_version")
    if version != FORMAT_VERSION:
        raise InvalidInputError(f"unsupported report format_version {version!r}")
    gi = _unnum(d["gini"])
    sym = d["symmetry"]
    ratio = sym["equivalent_ratio"]
    w_bar = _unnum(d["mean_benefit"])
    report = FitReport(
        global_params=_params_from_dict(d["parameters"]),
        peak=PeakInfo(_unnum(d["peak"]["omega_p"]), int(d["peak"]["index"]), d["peak"]["mode"]),
        poverty_fraction_Fp=_unnum(d["poverty_fraction"]),
        gini=gi,
        symmetry=SymmetryVerdict(sym["kind"], gi, None if ratio is None else float(ratio)),
        inequality=InequalityReport(
            H=_unnum(d["diversity_entropy"]),
            H_max=_unnum(d["max_diversity_entropy"]),
            index_I=_unnum(d["inequality_index"]),
            welfare_U=_unnum(d["welfare"]),
        ),
        segments=[
            Segment(
                label=int(s["label"]),
                bin_range=tuple(int(v) for v in s["bin_range"]),
                omega_range=tuple(_unnum(v) for v in s["omega_range"]),
                benefit_range=tuple(_unnum(v) for v in s["benefit_range"]),
                params=_params_from_dict(s["parameters"]),
                pearson_r=_unnum(s["pearson_r"]),
            )
            for s in d["segments"]
        ],
        goodness=Goodness(**{k: _unnum(v) for k, v in d["goodness"].items()}),
        mean_phi=_unnum(d["mean_phi"]),
        warnings=list(d["warnings"]),
    )
    return report, config_from_dict(d["config"]), w_bar


def dumps_report(doc: dict) -> str:
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def loads_report(text: str) -> dict:
    doc = json.loads(text)
    if not isinstance(doc, dict) or doc.get("format_version") != FORMAT_VERSION:
        raise InvalidInputError("not a version-1 report document")
    return doc


# -- plot data ----------------------------------------------------------------


def _cell(x) -> str:
    return "" if x is None or not math.isfinite(x) else repr(float(x))


def plot_data_csv(observed, report: FitReport) -> str:
    """Per-bin table of observed, smoothed and fitted occupations.

    ``observed`` is the unsmoothed :class:`BenefitDistribution`. Bins
    outside every segment get an empty ``segment_id``; absent fitted
    values are empty fields.
    """
    sm = report.smoothed if report.smoothed is not None else observed
    fitted = report.nu_fitted if report.nu_fitted is not None else np.full(len(observed), np.nan)
    seg_id = [None] * len(observed)
    for s in report.segments:
        for k in range(s.bin_range[0], s.bin_range[1] + 1):
            seg_id[k] = s.label
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(PLOT_COLUMNS)
    for k in range(len(observed)):
        w.writerow(
            [
                _cell(observed.omega[k]),
                _cell(observed.benefit[k]),
                _cell(observed.nu[k]),
                _cell(sm.nu[k]),
                _cell(fitted[k]),
                "" if seg_id[k] is None else seg_id[k],
            ]
        )
    return buf.getvalue()


def write_atomic(path, text: str) -> None:
    """Write via a temporary file in the target directory and rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent or ".")
    try:
        with os.fdopen(fd, "w", newline="") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
