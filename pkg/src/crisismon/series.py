"""Time-series smoothing, gradients, and prominence-based peak detection.

A day with no signal is NaN, never 0: missing propagates through gradients,
excludes itself from window means, and never hosts a peak.

Peaks are detected on the *smoothed gradient* of a prevalence series
(trailing moving average, then central-difference gradient, then the same
moving average again). The trailing window makes the series respond slowly
to recent changes, so a detected change lags its cause by up to a window.
Candidate peaks are strict local maxima (plateaus count once, at their
leftmost index), scored by topographic prominence: height above the higher
of the two minima separating the peak from higher terrain on either side.
Only candidates with prominence above the candidate mean plus ``sigma_mult``
population standard deviations survive filtering; with a single candidate
(or all-equal prominences) the strict inequality keeps nothing.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, replace
from datetime import date, timedelta
from pathlib import Path
from typing import Sequence

import numpy as np

RISE = "rise"
FALL = "fall"


@dataclass
class AnalysisConfig:
    window: int = 7  # one week of trailing smoothing
    sigma_mult: float = 1.0

    def __post_init__(self) -> None:
        if self.window < 1:
            raise ValueError("window must be >= 1")


@dataclass(frozen=True)
class Series:
    """Contiguous daily values; NaN marks a missing day."""

    start: date
    values: np.ndarray  # float64
    kind: str = "raw"  # raw | smoothed | gradient

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "values", np.asarray(self.values, dtype=np.float64)
        )

    def __len__(self) -> int:
        return len(self.values)

    def dates(self) -> list[date]:
        return [self.start + timedelta(days=i) for i in range(len(self.values))]

    def date_of(self, index: int) -> date:
        return self.start + timedelta(days=int(index))

    def index_of(self, d: date) -> int:
        i = (d - self.start).days
        if i < 0 or i >= len(self.values):
            raise ValueError(f"{d} outside series range")
        return i

    def crop(self, start: date, end: date) -> "Series":
        """The sub-series covering [start, end]; both must lie inside."""
        i0 = self.index_of(start)
        i1 = self.index_of(end)
        if i1 < i0:
            raise ValueError(f"start {start} after end {end}")
        return replace(self, start=start, values=self.values[i0 : i1 + 1])


@dataclass(frozen=True)
class Peak:
    date: date
    index: int
    height: float
    prominence: float
    direction: str = RISE


def smooth(s: Series, window: int) -> Series:
    """Trailing moving average over the present values of the last ``window`` days.

    The leading edge averages the available prefix; a window with no present
    values yields a missing day. The mean is computed relative to the first
    present value in the window, so constant stretches come out exactly
    constant.
    """
    if s.kind not in ("raw", "gradient"):
        raise ValueError(f"cannot smooth a series of kind {s.kind!r}")
    if window < 1:
        raise ValueError("window must be >= 1")
    v = s.values
    out = np.full(len(v), np.nan)
    for i in range(len(v)):
        win = v[max(0, i - window + 1) : i + 1]
        present = win[~np.isnan(win)]
        if present.size:
            base = present[0]
            out[i] = base + (present - base).sum() / present.size
    return Series(start=s.start, values=out, kind="smoothed")


def gradient(s: Series) -> Series:
    """Central differences inside, one-sided at the two ends.

    g[i] = (v[i+1] - v[i-1]) / 2 for interior days; any day whose stencil
    touches a missing value is itself missing.
    """
    v = s.values
    if len(v) < 2:
        raise ValueError("gradient needs at least 2 points")
    g = np.empty(len(v))
    g[1:-1] = (v[2:] - v[:-2]) / 2.0
    g[0] = v[1] - v[0]
    g[-1] = v[-1] - v[-2]
    return Series(start=s.start, values=g, kind="gradient")


def smoothed_gradient(raw: Series, window: int) -> Series:
    """The signal peaks are detected on: smooth, differentiate, smooth again."""
    return smooth(gradient(smooth(raw, window)), window)


def _candidate_indices(v: np.ndarray) -> list[int]:
    """Strict local maxima; a plateau reports its leftmost index.

    Boundary days never qualify, and NaN neighbors disqualify a run (an
    unknown neighbor cannot be known to be lower).
    """
    n = len(v)
    peaks: list[int] = []
    i = 0
    while i < n:
        if np.isnan(v[i]):
            i += 1
            continue
        j = i
        while j + 1 < n and v[j + 1] == v[i]:
            j += 1
        if i > 0 and j < n - 1 and v[i - 1] < v[i] and v[j + 1] < v[i]:
            peaks.append(i)
        i = j + 1
    return peaks


def _prominence(v: np.ndarray, i: int) -> float:
    """Height above the higher of the two side minima.

    Each side walk runs to the nearest strictly higher present value or the
    series boundary; missing values are skipped (unknown terrain neither
    stops the walk nor lowers the minimum).
    """
    h = v[i]
    side_mins = []
    for step in (-1, 1):
        m = np.inf
        j = i + step
        while 0 <= j < len(v):
            x = v[j]
            if not np.isnan(x):
                if x > h:
                    break
                if x < m:
                    m = x
            j += step
        side_mins.append(m)
    return float(h - max(side_mins))


def find_peaks(s: Series) -> list[Peak]:
    """All candidate peaks with their prominences, in index order."""
    v = s.values
    return [
        Peak(
            date=s.date_of(i),
            index=i,
            height=float(v[i]),
            prominence=_prominence(v, i),
        )
        for i in _candidate_indices(v)
    ]


def filter_peaks(peaks: Sequence[Peak], sigma_mult: float = 1.0) -> list[Peak]:
    """Keep candidates with prominence strictly above mean + sigma_mult*std.

    The statistics are computed over the candidate prominences themselves
    (population standard deviation). An empty candidate list stays empty.
    """
    if not peaks:
        return []
    proms = np.array([p.prominence for p in peaks])
    threshold = proms.mean() + sigma_mult * proms.std()
    return [p for p in peaks if p.prominence > threshold]


def marker_peaks(raw: Series, cfg: AnalysisConfig) -> list[Peak]:
    """Signed change peaks of one marker's prevalence series.

    Rises and falls are detected separately: once on the smoothed gradient
    and once on its negation (fall peaks score the magnitude of decrease),
    each followed by its own prominence filter. Results are merged in date
    order.
    """
    sg = smoothed_gradient(raw, cfg.window)
    rises = filter_peaks(find_peaks(sg), cfg.sigma_mult)
    neg = replace(sg, values=-sg.values)
    falls = [
        replace(p, direction=FALL)
        for p in filter_peaks(find_peaks(neg), cfg.sigma_mult)
    ]
    return sorted(rises + falls, key=lambda p: (p.index, p.direction))


def _zscore(v: np.ndarray) -> np.ndarray:
    """Center and scale by the population std of present values; flat -> zeros."""
    mean = np.nanmean(v)
    std = np.nanstd(v)
    if std == 0.0:
        return np.zeros_like(v)
    return (v - mean) / std


def joint_peaks(markers: Sequence[Series], cfg: AnalysisConfig) -> list[Peak]:
    """Moments when several markers vary together.

    Each marker's smoothed gradient is z-normalized and folded to absolute
    magnitude; the pointwise mean across markers is the joint variation
    signal, peak-detected and prominence-filtered like any other. A joint
    peak's direction reports whether the markers' signed changes were, on
    average, rising or falling at that moment.
    """
    if not markers:
        raise ValueError("need at least one marker series")
    first = markers[0]
    for m in markers[1:]:
        if m.start != first.start or len(m) != len(first):
            raise ValueError("marker series must share one date axis")
    zs = np.vstack(
        [_zscore(smoothed_gradient(m, cfg.window).values) for m in markers]
    )
    combined = Series(start=first.start, values=np.abs(zs).mean(axis=0), kind="gradient")
    signed_mean = zs.mean(axis=0)
    peaks = filter_peaks(find_peaks(combined), cfg.sigma_mult)
    return [
        replace(p, direction=RISE if signed_mean[p.index] >= 0 else FALL)
        for p in peaks
    ]


def write_peaks_csv(path: str | Path, peaks_by_marker: dict[str, list[Peak]]) -> None:
    """CSV of peaks: date, marker (or JOINT), direction, height, prominence."""
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["date", "marker", "direction", "height", "prominence"])
        for marker in sorted(peaks_by_marker):
            for p in peaks_by_marker[marker]:
                writer.writerow(
                    [p.date.isoformat(), marker, p.direction, repr(p.height),
                     repr(p.prominence)]
                )


def write_series_csv(path: str | Path, series_by_name: dict[str, dict[str, Series]]) -> None:
    """Long CSV of derived series: date, category, kind, percent (blank = missing).

    ``series_by_name`` maps category -> kind -> Series, e.g. the smoothed and
    gradient variants of each marker.
    """
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["date", "category", "kind", "percent"])
        for name in sorted(series_by_name):
            for kind in sorted(series_by_name[name]):
                s = series_by_name[name][kind]
                for i, d in enumerate(s.dates()):
                    x = s.values[i]
                    writer.writerow(
                        [d.isoformat(), name, kind, "" if np.isnan(x) else repr(float(x))]
                    )
