"""Independent reference implementations used as test oracles.

Deliberately naive, loop-heavy code with its own arithmetic paths (stdlib
statistics, explicit index walks) so that agreement with the library is
evidence rather than tautology.
"""

from __future__ import annotations

import math
import statistics
from datetime import date, datetime, timedelta, timezone

import numpy as np


def naive_match(categories: dict[str, list[tuple[str, ...]]], tokens) -> set[str]:
    """Per-term scan: category matches if any term occurs as a consecutive run."""
    toks = list(tokens)
    names = set()
    for name, terms in categories.items():
        for term in terms:
            term = tuple(term)
            span = len(term)
            hit = False
            for i in range(len(toks) - span + 1):
                if tuple(toks[i : i + span]) == term:
                    hit = True
                    break
            if hit:
                names.add(name)
                break
    return names


def brute_knn(tokens, matrix, query_index, k):
    """Exhaustive top-k by cosine, ties by token, via a separate formula."""
    m = np.asarray(matrix, dtype=float)
    q = m[query_index]
    qn = math.sqrt(float(np.dot(q, q)))
    scored = []
    for i, tok in enumerate(tokens):
        if i == query_index:
            continue
        nn = math.sqrt(float(np.dot(m[i], m[i])))
        if nn == 0.0 or qn == 0.0:
            continue
        scored.append((tok, float(np.dot(m[i], q)) / (nn * qn)))
    scored.sort(key=lambda ts: (-ts[1], ts[0]))
    return scored[:k]


def _is_missing(x) -> bool:
    return x is None or (isinstance(x, float) and math.isnan(x))


def brute_peaks(values) -> list[tuple[int, float]]:
    """O(n^2) scan for strict local maxima (leftmost of plateaus) with
    by-definition prominence walks. Returns (index, prominence) pairs."""
    v = [None if _is_missing(x) else float(x) for x in values]
    n = len(v)
    out = []
    for i in range(1, n - 1):
        if v[i] is None:
            continue
        if v[i - 1] is None or not v[i - 1] < v[i]:
            continue
        j = i
        while j + 1 < n and v[j + 1] == v[i]:
            j += 1
        if j == n - 1:
            continue
        if v[j + 1] is None or not v[j + 1] < v[i]:
            continue
        sides = []
        for step in (-1, 1):
            lowest = None
            kk = i + step
            while 0 <= kk < n:
                x = v[kk]
                if x is not None:
                    if x > v[i]:
                        break
                    if lowest is None or x < lowest:
                        lowest = x
                kk += step
            sides.append(lowest)
        out.append((i, v[i] - max(sides)))
    return out


def brute_filter(prominences, sigma_mult=1.0) -> list[int]:
    """Indices of prominences strictly above mean + sigma_mult * population std."""
    if not prominences:
        return []
    mu = statistics.fmean(prominences)
    sd = statistics.pstdev(prominences)
    return [i for i, p in enumerate(prominences) if p > mu + sigma_mult * sd]


def ref_smooth(values, window) -> list:
    """Trailing mean of present values, independent arithmetic (fmean)."""
    out = []
    for i in range(len(values)):
        win = [x for x in values[max(0, i - window + 1) : i + 1] if not _is_missing(x)]
        out.append(statistics.fmean(win) if win else None)
    return out


def ref_gradient(values) -> list:
    """Central differences with one-sided ends; None poisons its stencil."""
    v = [None if _is_missing(x) else float(x) for x in values]
    n = len(v)
    g: list = [None] * n
    for i in range(1, n - 1):
        if v[i - 1] is not None and v[i + 1] is not None:
            g[i] = (v[i + 1] - v[i - 1]) / 2.0
    if v[0] is not None and v[1] is not None:
        g[0] = v[1] - v[0]
    if v[-1] is not None and v[-2] is not None:
        g[-1] = v[-1] - v[-2]
    return g


def ref_marker_peaks(values, window, sigma_mult=1.0):
    """The whole per-marker pipeline, independently coded.

    Returns a list of (index, direction, height, prominence).
    """
    sg = ref_smooth(ref_gradient(ref_smooth(values, window)), window)
    out = []
    for signal, direction in ((sg, "rise"), ([None if x is None else -x for x in sg], "fall")):
        cands = brute_peaks(signal)
        kept = brute_filter([p for _, p in cands], sigma_mult)
        for pos in kept:
            i, prom = cands[pos]
            out.append((i, direction, signal[i], prom))
    out.sort(key=lambda r: (r[0], r[1]))
    return out


def naive_aggregate(docs, categories, start: date, end: date):
    """Two-pass dict counting; docs are (date, tokens) pairs.

    Returns (matched[name][day], totals[day], dropped).
    """
    totals: dict[date, int] = {}
    matched: dict[str, dict[date, int]] = {name: {} for name in categories}
    d = start
    while d <= end:
        totals[d] = 0
        for name in categories:
            matched[name][d] = 0
        d += timedelta(days=1)
    dropped = 0
    for day, tokens in docs:
        if day < start or day > end:
            dropped += 1
            continue
        totals[day] += 1
        for name in naive_match(categories, tokens):
            matched[name][day] += 1
    return matched, totals, dropped


def naive_stats(records, tz_hours=-3):
    """Counting script over well-formed tweet dicts; no library code reused."""
    total = orig = rt = rep = with_hash = 0
    per_user: dict[str, int] = {}
    per_day: dict[date, int] = {}
    for r in records:
        total += 1
        kind = r["kind"]
        if kind == "original":
            orig += 1
        elif kind == "retweet":
            rt += 1
        else:
            rep += 1
        text = r["text"]
        if any(
            text[i] == "#" and (text[i + 1].isalnum() or text[i + 1] == "_")
            for i in range(len(text) - 1)
        ):
            with_hash += 1
        per_user[r["user_id"]] = per_user.get(r["user_id"], 0) + 1
        raw = r["created_at"]
        if raw.endswith("Z"):
            raw = raw[:-1] + "+00:00"
        dt = datetime.fromisoformat(raw)
        if dt.tzinfo is None:
            dt = dt.replace(tzinfo=timezone.utc)
        local = dt.astimezone(timezone.utc) + timedelta(hours=tz_hours)
        day = local.date()
        per_day[day] = per_day.get(day, 0) + 1
    counts = sorted(per_user.values())
    if counts:
        n = len(counts)
        user_summary = {
            "min": counts[0],
            "avg": sum(counts) / n,
            "max": counts[-1],
            "median": counts[(n - 1) // 2],
        }
    else:
        user_summary = None
    return {
        "total": total,
        "original": orig,
        "retweet": rt,
        "reply": rep,
        "with_hashtag": with_hash,
        "users": len(per_user),
        "per_user": user_summary,
        "per_day": {d.isoformat(): c for d, c in sorted(per_day.items())},
    }


def naive_stage_table(values_by_marker, start: date, stages):
    """Double loop over (marker, stage) with a stdlib median.

    ``values_by_marker``: name -> list of float/None. ``stages``: list of
    (stage_name, start_date, end_date). Returns {(marker, stage): value}.
    """
    out = {}
    for marker, values in values_by_marker.items():
        present = [x for x in values if not _is_missing(x)]
        med = statistics.median(present) if present else None
        for stage_name, s0, s1 in stages:
            if med is None or med == 0:
                out[(marker, stage_name)] = None
                continue
            best = None
            d = s0
            while d <= s1:
                idx = (d - start).days
                if 0 <= idx < len(values) and not _is_missing(values[idx]):
                    cand = 100.0 * (values[idx] - med) / med
                    if best is None or cand > best:
                        best = cand
                d += timedelta(days=1)
            out[(marker, stage_name)] = best
    return out
