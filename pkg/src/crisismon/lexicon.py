"""Lexicon and category-set storage.

A lexicon is a named set of terms; a term is a tuple of one or more
normalized tokens, so multiword phrases like "panic attack" are first-class.
Term strings are pushed through the same normalizer as tweet text
(:func:`crisismon.corpus.preprocess`), which keeps matcher and lexicon
semantics from drifting apart.

Category sets bundle many lexicons under one name ("empath", "sentisense")
and are the unit the matcher is compiled from. All objects are immutable
after load and freely shareable across workers.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import preprocess
from .errors import EmptyLexiconError, LexiconFormatError

log = logging.getLogger(__name__)

Term = tuple[str, ...]


@dataclass(frozen=True)
class Lexicon:
    name: str
    terms: frozenset[Term]

    def single_tokens(self) -> frozenset[str]:
        """The single-token terms, as bare tokens."""
        return frozenset(t[0] for t in self.terms if len(t) == 1)

    def to_json_dict(self) -> dict:
        return {"name": self.name, "terms": sorted(" ".join(t) for t in self.terms)}


@dataclass(frozen=True)
class CategorySet:
    name: str
    categories: dict[str, Lexicon] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.categories)

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "categories": {
                cat: lex.to_json_dict()["terms"]
                for cat, lex in sorted(self.categories.items())
            },
        }


@dataclass(frozen=True)
class MarkerMapping:
    """Categories ranked by shared-word count for one construct.

    ``ranked`` is sorted by count descending, ties broken by category name,
    and never holds zero-count categories, so its length is at most the
    configured cutoff.
    """

    construct: str
    ranked: tuple[tuple[str, int], ...]

    def to_json_dict(self) -> dict:
        return {
            "construct": self.construct,
            "ranked": [{"category": c, "count": n} for c, n in self.ranked],
        }


def make_lexicon(name: str, term_strings) -> Lexicon:
    """Build a Lexicon from raw term strings through the shared normalizer.

    Strings that normalize to nothing (pure punctuation) are dropped;
    duplicates after normalization collapse. An empty result raises
    :class:`EmptyLexiconError`.
    """
    terms = set()
    for raw in term_strings:
        if not isinstance(raw, str):
            raise LexiconFormatError(f"lexicon {name!r}: term {raw!r} is not a string")
        toks = tuple(preprocess(raw))
        if toks:
            terms.add(toks)
    if not terms:
        raise EmptyLexiconError(f"lexicon {name!r} has no usable terms")
    return Lexicon(name=name, terms=frozenset(terms))


def _load_json(path: str | Path) -> object:
    path = Path(path)
    raw = path.read_text(encoding="utf-8")
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise LexiconFormatError(f"{path}: invalid JSON: {exc}") from exc


def load_lexicon(path: str | Path) -> Lexicon:
    """Load ``{"name": ..., "terms": [...]}`` from a JSON file."""
    obj = _load_json(path)
    if not isinstance(obj, dict) or "name" not in obj or "terms" not in obj:
        raise LexiconFormatError(f"{path}: expected an object with 'name' and 'terms'")
    if not isinstance(obj["terms"], list):
        raise LexiconFormatError(f"{path}: 'terms' must be a list")
    return make_lexicon(str(obj["name"]), obj["terms"])


def save_lexicon(lexicon: Lexicon, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(lexicon.to_json_dict(), ensure_ascii=False, indent=2, sort_keys=True)
        + "\n",
        encoding="utf-8",
    )


def load_category_set(path: str | Path) -> CategorySet:
    """Load ``{"name": ..., "categories": {cat: [terms]}}`` from JSON.

    Duplicate category keys in the file are an error rather than a silent
    last-wins, since they would change matching behavior.
    """
    path = Path(path)
    raw = path.read_text(encoding="utf-8")

    def no_dupes(pairs):
        keys = [k for k, _ in pairs]
        if len(keys) != len(set(keys)):
            dupe = next(k for k in keys if keys.count(k) > 1)
            raise LexiconFormatError(f"{path}: duplicate key {dupe!r}")
        return dict(pairs)

    try:
        obj = json.loads(raw, object_pairs_hook=no_dupes)
    except json.JSONDecodeError as exc:
        raise LexiconFormatError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(obj, dict) or "name" not in obj or "categories" not in obj:
        raise LexiconFormatError(
            f"{path}: expected an object with 'name' and 'categories'"
        )
    cats = obj["categories"]
    if not isinstance(cats, dict):
        raise LexiconFormatError(f"{path}: 'categories' must be an object")
    categories = {
        cat: make_lexicon(cat, terms) for cat, terms in cats.items()
    }
    return CategorySet(name=str(obj["name"]), categories=categories)


def save_category_set(cats: CategorySet, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(cats.to_json_dict(), ensure_ascii=False, indent=2, sort_keys=True)
        + "\n",
        encoding="utf-8",
    )


def load_manifest(path: str | Path) -> dict[str, Lexicon]:
    """Load a construct -> lexicon-path manifest and all lexicons it names.

    Relative paths are resolved against the manifest's own directory.
    """
    path = Path(path)
    obj = _load_json(path)
    if not isinstance(obj, dict):
        raise LexiconFormatError(f"{path}: manifest must be an object")
    out: dict[str, Lexicon] = {}
    for construct, lex_path in obj.items():
        if not isinstance(lex_path, str):
            raise LexiconFormatError(f"{path}: path for {construct!r} must be a string")
        resolved = Path(lex_path)
        if not resolved.is_absolute():
            resolved = path.parent / resolved
        out[construct] = load_lexicon(resolved)
    return out


def save_marker_mapping(mapping: MarkerMapping, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(mapping.to_json_dict(), ensure_ascii=False, indent=2) + "\n",
        encoding="utf-8",
    )
