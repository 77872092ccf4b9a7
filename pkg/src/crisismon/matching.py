"""Multi-pattern marker matching and daily prevalence aggregation.

The matcher is a token-level Aho-Corasick automaton compiled from a category
set: every term of every category is a pattern over normalized tokens, so a
document is matched against tens of thousands of terms in a single pass over
its tokens. A document matches a category when at least one of its terms
occurs; multiword terms require consecutive tokens; multiplicity is ignored
(three occurrences count the same as one, since tweet length makes repeat
counts a poor intensity signal).

Daily aggregation shares one denominator across categories: the number of
documents seen that day. Days with no documents yield a missing percentage
rather than 0, so downstream smoothing can tell absence from zero signal.
"""

from __future__ import annotations

import csv
import logging
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from datetime import date, timedelta
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

from .corpus import TokenizedDoc
from .lexicon import CategorySet
from .series import Series

log = logging.getLogger(__name__)


class Matcher:
    """Aho-Corasick automaton over token sequences.

    States are integers; ``children[s]`` maps a token to the next state,
    ``fail[s]`` is the longest-proper-suffix fallback, and ``out[s]`` is the
    set of category indices whose term ends at (or suffix-ends at) ``s``.
    Built deterministically: identical category sets compile to identical
    automata.
    """

    def __init__(self, cats: CategorySet):
        self.category_names: tuple[str, ...] = tuple(sorted(cats.categories))
        self._build(cats)

    def _build(self, cats: CategorySet) -> None:
        children: list[dict[str, int]] = [{}]
        out: list[set[int]] = [set()]
        for ci, name in enumerate(self.category_names):
            for term in sorted(cats.categories[name].terms):
                node = 0
                for tok in term:
                    nxt = children[node].get(tok)
                    if nxt is None:
                        children.append({})
                        out.append(set())
                        nxt = len(children) - 1
                        children[node][tok] = nxt
                    node = nxt
                out[node].add(ci)

        fail = [0] * len(children)
        queue: deque[int] = deque(children[0].values())
        while queue:
            u = queue.popleft()
            for tok, v in children[u].items():
                f = fail[u]
                while f and tok not in children[f]:
                    f = fail[f]
                fail[v] = children[f].get(tok, 0)
                out[v] |= out[fail[v]]
                queue.append(v)

        self._children = children
        self._fail = fail
        self._out: list[frozenset[int]] = [frozenset(s) for s in out]

    def __len__(self) -> int:
        return len(self.category_names)

    def match_indices(self, tokens: Iterable[str]) -> set[int]:
        children = self._children
        fail = self._fail
        out = self._out
        n_cats = len(self.category_names)
        state = 0
        found: set[int] = set()
        for tok in tokens:
            while state and tok not in children[state]:
                state = fail[state]
            state = children[state].get(tok, 0)
            hits = out[state]
            if hits:
                found |= hits
                if len(found) == n_cats:
                    break
        return found

    def match(self, tokens: Iterable[str]) -> set[str]:
        return {self.category_names[i] for i in self.match_indices(tokens)}


def build_matcher(cats: CategorySet) -> Matcher:
    return Matcher(cats)


def match_doc(matcher: Matcher, doc: TokenizedDoc) -> set[str]:
    """Category names with at least one term occurring in the document."""
    return matcher.match(doc.tokens)


@dataclass(frozen=True)
class DailyPrevalence:
    """Per-day matched/total counts for one category over a date range."""

    category: str
    start: date
    matched: np.ndarray  # int64, one cell per day
    total: np.ndarray  # int64, shared across categories

    def percent(self) -> np.ndarray:
        """100*matched/total per day; NaN where the day had no documents."""
        with np.errstate(invalid="ignore", divide="ignore"):
            pct = np.where(self.total > 0, 100.0 * self.matched / self.total, np.nan)
        return pct

    def dates(self) -> list[date]:
        return [self.start + timedelta(days=i) for i in range(len(self.matched))]

    def rows(self) -> Iterator[tuple[date, int, int, float | None]]:
        pct = self.percent()
        for i, d in enumerate(self.dates()):
            p = None if np.isnan(pct[i]) else float(pct[i])
            yield d, int(self.matched[i]), int(self.total[i]), p

    def to_series(self) -> Series:
        return Series(start=self.start, values=self.percent(), kind="raw")


@dataclass
class DailyAggregate:
    """Result of one aggregation run: per-category prevalence plus bookkeeping."""

    start: date
    end: date
    prevalence: dict[str, DailyPrevalence]
    dropped: int  # documents outside the configured date range


def _count_chunk(
    matcher: Matcher, docs: list[TokenizedDoc], start: date, n_days: int
) -> tuple[np.ndarray, np.ndarray, int]:
    matched = np.zeros((len(matcher), n_days), dtype=np.int64)
    totals = np.zeros(n_days, dtype=np.int64)
    dropped = 0
    for doc in docs:
        di = (doc.date - start).days
        if di < 0 or di >= n_days:
            dropped += 1
            continue
        totals[di] += 1
        for ci in matcher.match_indices(doc.tokens):
            matched[ci, di] += 1
    return matched, totals, dropped


def aggregate_daily(
    docs: Iterable[TokenizedDoc],
    matcher: Matcher,
    start: date,
    end: date,
    workers: int = 1,
) -> DailyAggregate:
    """Count matches per category per day over [start, end] inclusive.

    With ``workers > 1`` the documents are split into contiguous chunks and
    counted in parallel; counts merge by summation, so the result is
    identical for any worker count.
    """
    if start > end:
        raise ValueError(f"start {start} after end {end}")
    n_days = (end - start).days + 1

    if workers > 1:
        doc_list = list(docs)
        chunk = max(1, -(-len(doc_list) // workers))
        parts = [doc_list[i : i + chunk] for i in range(0, len(doc_list), chunk)]
        matched = np.zeros((len(matcher), n_days), dtype=np.int64)
        totals = np.zeros(n_days, dtype=np.int64)
        dropped = 0
        if parts:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                for m, t, d in pool.map(
                    _count_chunk,
                    [matcher] * len(parts),
                    parts,
                    [start] * len(parts),
                    [n_days] * len(parts),
                ):
                    matched += m
                    totals += t
                    dropped += d
    else:
        matched, totals, dropped = _count_chunk(matcher, list(docs), start, n_days)

    if dropped:
        log.info("aggregate_daily: dropped %d documents outside %s..%s",
                 dropped, start, end)
    prevalence = {
        name: DailyPrevalence(
            category=name, start=start, matched=matched[ci].copy(), total=totals.copy()
        )
        for ci, name in enumerate(matcher.category_names)
    }
    return DailyAggregate(start=start, end=end, prevalence=prevalence, dropped=dropped)


def write_prevalence_csv(path: str | Path, aggregate: DailyAggregate) -> None:
    """Long-format CSV: date, category, matched, total, percent (blank = missing)."""
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["date", "category", "matched", "total", "percent"])
        for name in sorted(aggregate.prevalence):
            for d, m, t, p in aggregate.prevalence[name].rows():
                writer.writerow([d.isoformat(), name, m, t, "" if p is None else repr(p)])


def read_prevalence_csv(path: str | Path) -> dict[str, Series]:
    """Rebuild raw percentage Series per category from a long-format CSV."""
    by_cat: dict[str, dict[date, float]] = {}
    with Path(path).open("r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        for row in reader:
            d = date.fromisoformat(row["date"])
            cell = row["percent"]
            by_cat.setdefault(row["category"], {})[d] = (
                float(cell) if cell not in ("", None) else np.nan
            )
    out: dict[str, Series] = {}
    for cat, cells in by_cat.items():
        days = sorted(cells)
        start, last = days[0], days[-1]
        n = (last - start).days + 1
        values = np.full(n, np.nan)
        for d, v in cells.items():
            values[(d - start).days] = v
        out[cat] = Series(start=start, values=values, kind="raw")
    return out
