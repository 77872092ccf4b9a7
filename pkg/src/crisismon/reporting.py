"""Reporting: SVG heatmaps, peak-to-event annotation, stage prevalence tables.

Heatmaps draw one row per marker and one cell per day; darker means higher.
Values are min-max normalized per heatmap so rows are comparable within one
figure, and the gray ramp is strictly monotone: two different values never
share a fill. Missing days render as a hatched cell. Output is plain SVG 1.1
built by string assembly, so identical inputs produce identical bytes.

Event annotation looks back a configurable number of days before each peak
(default 6: the smoothing window minus the peak day), because trailing
smoothing delays a series' response to its cause.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from datetime import date, timedelta
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import FormatError
from .lexicon import CategorySet
from .matching import DailyAggregate, aggregate_daily, build_matcher
from .series import Peak, Series

DEFAULT_EVENT_LEAD_DAYS = 6


@dataclass(frozen=True)
class StageWindow:
    """A labeled, inclusive date range; stages may overlap."""

    stage: str
    start: date
    end: date

    def __post_init__(self) -> None:
        if self.start > self.end:
            raise ValueError(f"stage {self.stage!r}: start after end")


@dataclass(frozen=True)
class EventRecord:
    date: date
    description: str

    def __post_init__(self) -> None:
        if not self.description:
            raise ValueError("event description must be non-empty")


@dataclass
class HeatmapSpec:
    """Row order, date range, gray ramp endpoints, and cell geometry."""

    markers: Sequence[str]
    start: date
    end: date
    cell_w: float = 8.0
    cell_h: float = 16.0
    light: float = 96.0  # luminance percent at the minimum value
    dark: float = 12.0  # luminance percent at the maximum value


def _luminance(norm: float, spec: HeatmapSpec) -> float:
    return spec.light - norm * (spec.light - spec.dark)


def _fill(norm: float, spec: HeatmapSpec) -> str:
    lum = _luminance(norm, spec)
    return f"rgb({lum:.6f}%,{lum:.6f}%,{lum:.6f}%)"


def render_heatmap(series_by_marker: dict[str, Series], spec: HeatmapSpec) -> bytes:
    """Render marker-by-day series as a deterministic SVG heatmap."""
    if not spec.markers:
        raise ValueError("heatmap needs at least one marker row")
    if spec.start > spec.end:
        raise ValueError(f"start {spec.start} after end {spec.end}")
    unknown = [m for m in spec.markers if m not in series_by_marker]
    if unknown:
        raise ValueError(f"unknown markers: {', '.join(unknown)}")

    cropped = {m: series_by_marker[m].crop(spec.start, spec.end) for m in spec.markers}
    stacked = np.vstack([cropped[m].values for m in spec.markers])
    present = stacked[~np.isnan(stacked)]
    if present.size:
        vmin, vmax = float(present.min()), float(present.max())
    else:
        vmin = vmax = 0.0
    flat = vmax == vmin  # degenerate normalization: everything mid-ramp

    n_days = (spec.end - spec.start).days + 1
    left = 10.0 + 7.2 * max(len(m) for m in spec.markers)
    top = 30.0
    width = left + n_days * spec.cell_w + 10.0
    height = top + len(spec.markers) * spec.cell_h + 10.0

    parts: list[str] = []
    parts.append('<?xml version="1.0" encoding="UTF-8"?>')
    parts.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width:.1f}" height="{height:.1f}" '
        f'viewBox="0 0 {width:.1f} {height:.1f}">'
    )
    parts.append(
        '<defs><pattern id="missing" width="6" height="6" '
        'patternUnits="userSpaceOnUse">'
        '<rect width="6" height="6" fill="#ffffff"/>'
        '<path d="M0,6 L6,0" stroke="#bbbbbb" stroke-width="1"/>'
        "</pattern></defs>"
    )
    parts.append(f'<rect width="{width:.1f}" height="{height:.1f}" fill="#ffffff"/>')

    # Month labels along the top edge.
    for di in range(n_days):
        d = spec.start + timedelta(days=di)
        if d.day == 1 or di == 0:
            x = left + di * spec.cell_w
            parts.append(
                f'<line x1="{x:.2f}" y1="{top - 6:.2f}" x2="{x:.2f}" '
                f'y2="{top:.2f}" stroke="#444444" stroke-width="1"/>'
            )
            parts.append(
                f'<text x="{x:.2f}" y="{top - 10:.2f}" font-family="monospace" '
                f'font-size="11" fill="#222222">{d.strftime("%Y-%m")}</text>'
            )

    for ri, marker in enumerate(spec.markers):
        y = top + ri * spec.cell_h
        parts.append(
            f'<text x="{left - 6:.2f}" y="{y + spec.cell_h * 0.72:.2f}" '
            f'font-family="monospace" font-size="12" text-anchor="end" '
            f'fill="#111111">{_xml_escape(marker)}</text>'
        )
        values = cropped[marker].values
        for di in range(n_days):
            x = left + di * spec.cell_w
            v = values[di]
            if np.isnan(v):
                fill = "url(#missing)"
            else:
                norm = 0.5 if flat else (float(v) - vmin) / (vmax - vmin)
                fill = _fill(norm, spec)
            parts.append(
                f'<rect x="{x:.2f}" y="{y:.2f}" width="{spec.cell_w:.2f}" '
                f'height="{spec.cell_h:.2f}" fill="{fill}"/>'
            )

    parts.append("</svg>")
    return ("\n".join(parts) + "\n").encode("utf-8")


def _xml_escape(text: str) -> str:
    return (
        text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
    )


def annotate_peaks(
    peaks: Sequence[Peak],
    events: Sequence[EventRecord],
    lead: int = DEFAULT_EVENT_LEAD_DAYS,
) -> list[tuple[Peak, list[EventRecord]]]:
    """Attach to each peak the events within [peak - lead, peak], date-sorted."""
    if lead < 0:
        raise ValueError("lead must be >= 0")
    ordered = sorted(events, key=lambda e: (e.date, e.description))
    out = []
    for p in peaks:
        lo = p.date - timedelta(days=lead)
        out.append((p, [e for e in ordered if lo <= e.date <= p.date]))
    return out


def stage_prevalence_table(
    series_by_marker: dict[str, Series], stages: Sequence[StageWindow]
) -> list[tuple[str, str, float | None]]:
    """Maximum percentage difference from each marker's overall median, per stage.

    The median is taken over the marker's present values across its full
    span; each stage cell is the maximum of 100*(v - median)/median over the
    present days inside the stage window. A zero median, or a stage window
    with no present days in range, yields an undefined (None) cell.
    """
    rows: list[tuple[str, str, float | None]] = []
    for marker, s in series_by_marker.items():
        present = s.values[~np.isnan(s.values)]
        median = float(np.median(present)) if present.size else None
        for w in stages:
            rows.append((marker, w.stage, _stage_cell(s, w, median)))
    return rows


def _stage_cell(s: Series, w: StageWindow, median: float | None) -> float | None:
    if median is None or median == 0.0:
        return None
    last = s.date_of(len(s) - 1)
    lo = max(w.start, s.start)
    hi = min(w.end, last)
    if lo > hi:
        return None
    seg = s.values[s.index_of(lo) : s.index_of(hi) + 1]
    seg = seg[~np.isnan(seg)]
    if not seg.size:
        return None
    return float(np.max(100.0 * (seg - median) / median))


def crime_view(
    cats: CategorySet,
    docs,
    start: date,
    end: date,
    categories: Sequence[str],
    workers: int = 1,
    cell_w: float = 8.0,
    cell_h: float = 16.0,
) -> tuple[DailyAggregate, bytes]:
    """Prevalence plus heatmap for a configured category subset.

    Pure composition of aggregation and rendering; the subset is typically
    crime- or emotion-related categories, but any selection works.
    """
    if not categories:
        raise ValueError("category subset must be non-empty")
    unknown = [c for c in categories if c not in cats.categories]
    if unknown:
        raise ValueError(f"unknown categories: {', '.join(unknown)}")
    sub = CategorySet(
        name=f"{cats.name}:subset",
        categories={c: cats.categories[c] for c in categories},
    )
    agg = aggregate_daily(docs, build_matcher(sub), start, end, workers=workers)
    spec = HeatmapSpec(
        markers=list(categories), start=start, end=end, cell_w=cell_w, cell_h=cell_h
    )
    svg = render_heatmap(
        {name: prev.to_series() for name, prev in agg.prevalence.items()}, spec
    )
    return agg, svg


def load_events_csv(path: str | Path) -> list[EventRecord]:
    """Events CSV: header ``date,description``, ISO dates, UTF-8 text."""
    out: list[EventRecord] = []
    with Path(path).open("r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"date", "description"} <= set(reader.fieldnames):
            raise FormatError(f"{path}: expected columns date,description")
        for lineno, row in enumerate(reader, start=2):
            try:
                out.append(
                    EventRecord(date=date.fromisoformat(row["date"]),
                                description=(row["description"] or "").strip())
                )
            except (ValueError, TypeError) as exc:
                raise FormatError(f"{path}: line {lineno}: {exc}") from exc
    return out


def load_stages_csv(path: str | Path) -> list[StageWindow]:
    """Stage windows CSV: header ``stage,start,end``, ISO dates, windows may overlap."""
    out: list[StageWindow] = []
    with Path(path).open("r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"stage", "start", "end"} <= set(reader.fieldnames):
            raise FormatError(f"{path}: expected columns stage,start,end")
        for lineno, row in enumerate(reader, start=2):
            try:
                out.append(
                    StageWindow(
                        stage=row["stage"],
                        start=date.fromisoformat(row["start"]),
                        end=date.fromisoformat(row["end"]),
                    )
                )
            except (ValueError, TypeError) as exc:
                raise FormatError(f"{path}: line {lineno}: {exc}") from exc
    return out


def write_stage_table_csv(
    path: str | Path, rows: Sequence[tuple[str, str, float | None]]
) -> None:
    """Stage table CSV: marker,stage,max_pct_diff (blank = undefined)."""
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["marker", "stage", "max_pct_diff"])
        for marker, stage, value in rows:
            writer.writerow([marker, stage, "" if value is None else repr(value)])


def write_annotations_csv(
    path: str | Path,
    annotated: Sequence[tuple[Peak, list[EventRecord]]],
    marker: str = "JOINT",
) -> None:
    """One row per (peak, event); peaks without events keep one blank-event row."""
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["date", "marker", "direction", "height", "prominence",
             "event_date", "event_description"]
        )
        for peak, events in annotated:
            base = [peak.date.isoformat(), marker, peak.direction,
                    repr(peak.height), repr(peak.prominence)]
            if events:
                for e in events:
                    writer.writerow(base + [e.date.isoformat(), e.description])
            else:
                writer.writerow(base + ["", ""])
