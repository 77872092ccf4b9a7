"""Embedding-based lexicon expansion and category association.

Seed lexicons are contextualized by pulling, for every single-token seed
term, its k nearest neighbors in an embedding table (cosine similarity,
k=10 by default). The expanded lexicon is then ranked against a category
set by counting shared single-token terms, keeping the top-m categories
(m=10 by default); those become the construct's markers.

Embedding tables use the common text format: a "V D" header line followed
by V rows of "token v1 ... vD". Multiword seed terms pass through
unexpanded; out-of-vocabulary seeds are kept but contribute no neighbors.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import EmbeddingFormatError, OutOfVocabularyError
from .lexicon import CategorySet, Lexicon, MarkerMapping

log = logging.getLogger(__name__)


@dataclass
class ExpansionConfig:
    k: int = 10  # nearest neighbors per seed word
    m: int = 10  # categories kept per construct

    def __post_init__(self) -> None:
        if self.k < 1 or self.m < 1:
            raise ValueError("k and m must be >= 1")


class EmbeddingTable:
    """Token -> dense vector map with cached unit vectors for queries.

    Zero-norm vectors are loaded (the token exists) but are unusable as
    queries and never returned as neighbors.
    """

    def __init__(self, tokens: list[str], matrix: np.ndarray):
        if matrix.ndim != 2 or matrix.shape[0] != len(tokens):
            raise ValueError("matrix shape does not match token list")
        if not tokens:
            raise ValueError("empty vocabulary")
        self.dim = matrix.shape[1]
        self._tokens = list(tokens)
        self._matrix = np.asarray(matrix, dtype=np.float64)
        self._index = {t: i for i, t in enumerate(tokens)}
        self._norms = np.linalg.norm(self._matrix, axis=1)
        # Rows shadowed by a later duplicate token are not legal candidates.
        live = np.zeros(len(tokens), dtype=bool)
        live[list(self._index.values())] = True
        self._candidate = live & (self._norms > 0.0)
        self._units: np.ndarray | None = None
        self._token_rank: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self._index)

    def __contains__(self, token: str) -> bool:
        return token in self._index

    def vector(self, token: str) -> np.ndarray:
        try:
            return self._matrix[self._index[token]]
        except KeyError:
            raise OutOfVocabularyError(token) from None

    def usable(self, token: str) -> bool:
        """Whether the token can participate in similarity queries."""
        i = self._index.get(token)
        return i is not None and self._norms[i] > 0.0

    def _query_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        if self._units is None:
            units = np.zeros_like(self._matrix)
            ok = self._norms > 0.0
            units[ok] = self._matrix[ok] / self._norms[ok, None]
            self._units = units
            # Lexicographic rank per row, for deterministic tie-breaking.
            rank = np.empty(len(self._tokens), dtype=np.int64)
            order = sorted(range(len(self._tokens)), key=lambda i: self._tokens[i])
            for r, i in enumerate(order):
                rank[i] = r
            self._token_rank = rank
        return self._units, self._token_rank


def load_embeddings(path: str | Path) -> EmbeddingTable:
    """Parse the "V D" text format into an EmbeddingTable.

    The file must contain exactly V data rows of arity D+1. A duplicate
    token keeps its last row (with a warning), mirroring common tooling.
    """
    path = Path(path)
    with path.open("r", encoding="utf-8") as fh:
        header = fh.readline()
        parts = header.split()
        if len(parts) != 2:
            raise EmbeddingFormatError(f"{path}: line 1: header must be 'V D'")
        try:
            vocab, dim = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise EmbeddingFormatError(f"{path}: line 1: non-integer header") from exc
        if vocab < 1 or dim < 1:
            raise EmbeddingFormatError(f"{path}: line 1: header values must be >= 1")

        tokens: list[str] = []
        matrix = np.empty((vocab, dim), dtype=np.float64)
        seen: dict[str, int] = {}
        row = 0
        for lineno, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            if row >= vocab:
                raise EmbeddingFormatError(
                    f"{path}: line {lineno}: more rows than the header's {vocab}"
                )
            fields = line.split()
            if len(fields) != dim + 1:
                raise EmbeddingFormatError(
                    f"{path}: line {lineno}: expected {dim + 1} fields, got {len(fields)}"
                )
            token = fields[0]
            try:
                matrix[row] = [float(x) for x in fields[1:]]
            except ValueError as exc:
                raise EmbeddingFormatError(
                    f"{path}: line {lineno}: non-numeric component"
                ) from exc
            if token in seen:
                log.warning("%s: line %d: duplicate token %r, last row wins",
                            path, lineno, token)
            seen[token] = row
            tokens.append(token)
            row += 1
        if row != vocab:
            raise EmbeddingFormatError(
                f"{path}: expected {vocab} rows, file has {row}"
            )
    return EmbeddingTable(tokens, matrix)


def cosine(u: np.ndarray, v: np.ndarray) -> float:
    """Cosine similarity of two equal-length vectors with nonzero norms."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        raise ValueError("cosine undefined for zero-norm vectors")
    return float(np.dot(u, v) / (nu * nv))


def knn(table: EmbeddingTable, query: str, k: int) -> list[tuple[str, float]]:
    """The k most cosine-similar usable tokens to ``query``, best first.

    The query itself is excluded; ties are broken by token lexicographic
    order; fewer than k candidates returns them all. An out-of-vocabulary
    query raises :class:`OutOfVocabularyError`.
    """
    if query not in table:
        raise OutOfVocabularyError(query)
    if not table.usable(query):
        raise ValueError(f"query {query!r} has a zero-norm vector")
    if k < 1:
        raise ValueError("k must be >= 1")
    units, token_rank = table._query_arrays()
    qi = table._index[query]
    sims = units @ units[qi]
    mask = table._candidate.copy()
    mask[qi] = False
    idx = np.nonzero(mask)[0]
    if idx.size == 0:
        return []
    # Primary key: similarity descending. Secondary: token lexicographic.
    order = np.lexsort((token_rank[idx], -sims[idx]))
    top = idx[order[:k]]
    return [(table._tokens[i], float(sims[i])) for i in top]


def expand_lexicon(seed: Lexicon, table: EmbeddingTable, cfg: ExpansionConfig) -> Lexicon:
    """Union the seed with the k nearest neighbors of each single-token seed.

    Multiword terms pass through untouched; seeds missing from the
    vocabulary (or with zero-norm vectors) are kept but not expanded.
    """
    terms = set(seed.terms)
    for term in sorted(seed.terms):
        if len(term) != 1:
            continue
        token = term[0]
        try:
            neighbors = knn(table, token, cfg.k)
        except (OutOfVocabularyError, ValueError):
            log.debug("seed %r not expandable, kept as-is", token)
            continue
        terms.update((t,) for t, _ in neighbors)
    return Lexicon(name=seed.name, terms=frozenset(terms))


def associate_categories(
    expanded: Lexicon, cats: CategorySet, cfg: ExpansionConfig
) -> MarkerMapping:
    """Rank categories by shared single-token count against a lexicon.

    Zero-count categories are dropped, so the result holds at most m
    entries; ties are ordered by category name.
    """
    words = expanded.single_tokens()
    counted = []
    for cat_name, cat_lex in cats.categories.items():
        n = len(words & cat_lex.single_tokens())
        if n > 0:
            counted.append((cat_name, n))
    counted.sort(key=lambda cn: (-cn[1], cn[0]))
    return MarkerMapping(construct=expanded.name, ranked=tuple(counted[: cfg.m]))
