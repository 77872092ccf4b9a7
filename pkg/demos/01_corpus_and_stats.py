"""
Corpus ingestion and statistics
===============================

Parse a line-delimited tweet export, look at how the text normalizer
treats URLs, mentions and hashtags, and compute exact corpus statistics.
"""

import json

from crisismon import (ParseReport, compute_corpus_stats, filter_analyzable,
                       parse_corpus, preprocess, split_hashtag)

# --- the normalizer ---------------------------------------------------------
# URLs and @mentions disappear; hashtags are split into their words;
# punctuation separates; accents survive; nothing is stemmed.

for text in [
    "Vamos!! #QuedateEnCasa http://t.co/x @juan",
    "covid-19 es grave… pero saldremos",
    "La CUARENTENA sigue #Covid19Argentina",
]:
    print(f"{text!r:55} -> {preprocess(text)}")

print()
print("hashtag splitting:", split_hashtag("QuedateEnCasa"), split_hashtag("covid19"))
print()

# --- a small corpus ---------------------------------------------------------
# One JSON object per line with id, created_at, text, kind, user_id.
# The second line is deliberately corrupt: lenient parsing skips and counts it.

lines = [
    json.dumps({"id": "1", "created_at": "2020-03-05T14:00:00Z",
                "text": "Primer caso confirmado #Coronavirus", "kind": "original",
                "user_id": "ana"}),
    '{"id": "2", "created_at": ...broken...',
    json.dumps({"id": "3", "created_at": "2020-03-05T23:30:00Z",
                "text": "RT alguien dijo algo", "kind": "retweet",
                "user_id": "beto"}),
    json.dumps({"id": "4", "created_at": "2020-03-06T02:30:00-03:00",
                "text": "respuesta tranquila", "kind": "reply",
                "user_id": "ana"}),
]

report = ParseReport()
tweets = list(parse_corpus(lines, report=report))
print(f"parsed {report.parsed} tweets, skipped {report.skipped} malformed line(s)")

# Day bucketing uses a fixed offset, UTC-3 by default: 23:30 UTC on March 5
# is still March 5 in Buenos Aires only until 02:59 UTC.
for t in tweets:
    print(f"  {t.id}: kind={t.kind:8} created={t.created_at:%Y-%m-%d %H:%M%z} "
          f"-> day {t.date}  analyzable={filter_analyzable(t)}")

# --- statistics -------------------------------------------------------------
stats = compute_corpus_stats(tweets)
print()
print(json.dumps(stats.to_json_dict(), indent=2, sort_keys=True))
