"""Word-embedding table: text-format loading, fallback lookup, cosine distance.

All diversity and distinctness metrics run on cosine distances over this
table. Lookup is forgiving about multi-word concepts: a phrase that is not
stored as an n-gram falls back to the mean of its token vectors, with a
last-resort plural stripping for tokens that still miss.
"""

from __future__ import annotations

import gzip
import io
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, TextIO

import numpy as np

from .errors import EmbeddingFormatError, EmptyTableError, UndefinedDistanceError
from .graph import _normalize_or_empty


def cosine_distance(u: np.ndarray, v: np.ndarray) -> float:
    """1 - cos(u, v), in [0, 2]; exactly symmetric in its arguments."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    nu = float(np.sqrt(np.dot(u, u)))
    nv = float(np.sqrt(np.dot(v, v)))
    if nu == 0.0 or nv == 0.0:
        raise UndefinedDistanceError("cosine distance undefined for zero vector")
    return 1.0 - float(np.dot(u, v)) / (nu * nv)


@dataclass(frozen=True)
class EmbeddingTable:
    """label -> vector, all of one dimension, no zero vectors stored."""

    dimension: int
    vectors: dict[str, np.ndarray]
    skipped_rows: int = field(default=0, compare=False)

    def __len__(self) -> int:
        return len(self.vectors)

    def __contains__(self, label: str) -> bool:
        return label in self.vectors

    def lookup(self, text: str) -> np.ndarray | None:
        """Vector for a concept, falling back for out-of-vocabulary phrases.

        Chain, first hit wins: exact normalized label; mean of the vectors of
        underscore-split tokens that are present; the same mean after
        stripping a trailing "es" then "s" from each absent token. Returns
        None when nothing resolves; callers count those as discards.
        """
        label = _normalize_or_empty(text)
        if not label:
            return None
        vec = self.vectors.get(label)
        if vec is not None:
            return vec
        tokens = [tok for tok in label.split("_") if tok]
        hits = [self.vectors[tok] for tok in tokens if tok in self.vectors]
        if not hits:
            hits = [v for v in (self._singularized(tok) for tok in tokens) if v is not None]
        if not hits:
            return None
        mean = np.mean(np.stack(hits), axis=0)
        if not np.any(mean):
            return None  # degenerate token mean, keep cosine well-defined
        return mean

    def _singularized(self, token: str) -> np.ndarray | None:
        if token.endswith("es"):
            vec = self.vectors.get(token[:-2])
            if vec is not None:
                return vec
        if token.endswith("s"):
            return self.vectors.get(token[:-1])
        return None


def _open_text(source: str | Path | TextIO) -> TextIO:
    if isinstance(source, (str, Path)):
        path = Path(source)
        if path.suffix == ".gz":
            return io.TextIOWrapper(gzip.open(path, "rb"), encoding="utf-8")
        return open(path, encoding="utf-8")
    return source


def load_embeddings(source: str | Path | TextIO) -> EmbeddingTable:
    """Parse a word2vec-style text table (optionally gzip-compressed).

    An optional first line "count dimension" declares the shape; otherwise
    the first valid row fixes the dimension. Rows with the wrong arity,
    unparsable values, or zero norm are skipped and counted.
    """
    fh = _open_text(source)
    close = isinstance(source, (str, Path))
    try:
        vectors: dict[str, np.ndarray] = {}
        dimension: int | None = None
        skipped = 0
        first = True
        for line in fh:
            tokens = line.split()
            if not tokens:
                continue
            if first:
                first = False
                if len(tokens) == 2:
                    try:
                        count, dim = int(tokens[0]), int(tokens[1])
                    except ValueError:
                        pass
                    else:
                        if count < 0 or dim < 1:
                            raise EmbeddingFormatError(
                                f"bad header counts: {line.rstrip()!r}")
                        dimension = dim
                        continue
            label = _normalize_or_empty(tokens[0])
            try:
                values = [float(tok) for tok in tokens[1:]]
            except ValueError:
                skipped += 1
                continue
            if not label or not values:
                skipped += 1
                continue
            if dimension is None:
                dimension = len(values)
            if len(values) != dimension:
                skipped += 1
                continue
            vec = np.asarray(values, dtype=np.float64)
            if not np.any(vec):
                skipped += 1
                continue
            vectors[label] = vec
        if not vectors:
            raise EmptyTableError("no valid embedding rows")
        return EmbeddingTable(dimension=dimension, vectors=vectors, skipped_rows=skipped)
    finally:
        if close:
            fh.close()


def save_embeddings(table: EmbeddingTable, path: str | Path) -> None:
    """Write the table back out in the loadable text format, sorted by label."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{len(table.vectors)} {table.dimension}\n")
        for label in sorted(table.vectors):
            values = " ".join(repr(float(x)) for x in table.vectors[label])
            fh.write(f"{label} {values}\n")


def table_from_pairs(pairs: Iterable[tuple[str, np.ndarray]]) -> EmbeddingTable:
    """Build a table directly from (label, vector) pairs (fixtures, tests)."""
    vectors = {}
    dimension = None
    for label, vec in pairs:
        vec = np.asarray(vec, dtype=np.float64)
        if dimension is None:
            dimension = len(vec)
        if len(vec) != dimension:
            raise EmbeddingFormatError("inconsistent dimensions in pairs")
        if not np.any(vec):
            raise EmbeddingFormatError(f"zero vector for {label!r}")
        vectors[_normalize_or_empty(label)] = vec
    if not vectors:
        raise EmptyTableError("no pairs given")
    return EmbeddingTable(dimension=dimension, vectors=vectors)
