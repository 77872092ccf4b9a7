"""
Full pipeline: corpus to heatmap, annotated peaks and stage table
=================================================================

A 92-day synthetic Spanish corpus goes through the whole chain: parse,
filter, tokenize, match against the bundled demo categories, aggregate,
detect joint peaks, annotate them with the bundled March-2020 event
timeline, render the prevalence heatmap, and compute the stage prevalence
table against illustrative crisis-stage windows.

Outputs land in demos/out/.
"""

import json
import random
from datetime import date, datetime, timedelta, timezone
from pathlib import Path

from crisismon import (AnalysisConfig, aggregate_daily, annotate_peaks,
                       build_matcher, filter_analyzable, joint_peaks,
                       load_category_set, load_events_csv, load_stages_csv,
                       parse_corpus, render_heatmap, smooth,
                       stage_prevalence_table, tokenize_tweet)
from crisismon.reporting import HeatmapSpec

HERE = Path(__file__).resolve().parent
DATA = HERE.parent / "data"
OUT = HERE / "out"
OUT.mkdir(exist_ok=True)

START, END = date(2020, 3, 1), date(2020, 5, 31)

# --- synthesize a corpus with a mid-March surge of fear/health chatter -----------
rng = random.Random(2020)
themes = {
    "fear": ["miedo", "pánico", "temor"],
    "health": ["salud", "contagio", "hospital", "barbijo"],
    "government": ["gobierno", "presidente", "medidas"],
    "sadness": ["triste", "tristeza", "pena"],
}
filler = "hoy mañana gente ciudad casa trabajo calle tiempo cosas día".split()

lines = []
n_days = (END - START).days + 1
for d in range(n_days):
    day = START + timedelta(days=d)
    surge = 1.0 + (2.5 if 12 <= d < 19 else 0.0)  # the March 13-19 surge
    for i in range(150):
        words = [rng.choice(filler) for _ in range(7)]
        for theme, toks in themes.items():
            base = {"fear": 0.06, "health": 0.10, "government": 0.12, "sadness": 0.05}[theme]
            boost = surge if theme in ("fear", "health") else 1.0
            if rng.random() < base * boost:
                words.append(rng.choice(toks))
        created = datetime(day.year, day.month, day.day, 15, tzinfo=timezone.utc)
        lines.append(json.dumps({
            "id": f"{d}-{i}", "created_at": created.isoformat(),
            "text": " ".join(words),
            "kind": rng.choice(["original", "original", "reply", "retweet"]),
            "user_id": f"u{rng.randrange(800)}",
        }))

# --- parse, filter, tokenize, match ----------------------------------------------
docs = [tokenize_tweet(t) for t in parse_corpus(lines) if filter_analyzable(t)]
cats = load_category_set(DATA / "categories" / "demo_categories_es.json")
agg = aggregate_daily(docs, build_matcher(cats), START, END)
print(f"{len(docs)} analyzable docs across {n_days} days, "
      f"{len(agg.prevalence)} categories")

# --- joint peaks over the surged markers, annotated with real events --------------
cfg = AnalysisConfig()
markers = ["fear", "health", "nervousness", "sadness"]
raw = {m: agg.prevalence[m].to_series() for m in markers}
peaks = joint_peaks([raw[m] for m in markers], cfg)

events = load_events_csv(DATA / "events" / "mental_health.csv")
print("\njoint peaks and the events of the preceding week:")
for peak, matched in annotate_peaks(peaks, events, lead=6):
    print(f"  {peak.date}  {peak.direction}")
    for e in matched[:3]:
        print(f"      {e.date}  {e.description[:70]}")

# --- heatmap of the smoothed prevalence --------------------------------------------
smoothed = {m: smooth(s, cfg.window) for m, s in raw.items()}
spec = HeatmapSpec(markers=markers, start=START, end=END)
svg = render_heatmap(smoothed, spec)
(OUT / "heatmap.svg").write_bytes(svg)
print(f"\nwrote {OUT / 'heatmap.svg'} ({len(svg)} bytes; darker = more prevalent)")

# --- stage prevalence table ---------------------------------------------------------
stages = load_stages_csv(DATA / "stages" / "argentina_2020.csv")
print("\nmax % difference vs the marker's median, per stage window:")
header = "".join(f"{w.stage:>14}" for w in stages)
print(f"{'marker':12}{header}")
for marker in markers:
    cells = stage_prevalence_table({marker: smoothed[marker]}, stages)
    row = "".join(
        f"{(f'{cell:+.1f}' if cell is not None else 'n/a'):>14}"
        for _, _, cell in cells
    )
    print(f"{marker:12}{row}")
