"""Exact top-K cosine retrieval over stored chunk vectors.

The index is a linear scan: every query is scored against every entry, so
results are identical to brute force by construction. Entries are kept in
chunk-id order and ranking uses a stable sort, which makes equal
similarities break ties by ascending chunk id deterministically.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

from .errors import FormatError, InputError

DEFAULT_K = 5
_NORM_TOLERANCE = 1e-6


@dataclass(frozen=True, eq=False)
class IndexEntry:
    chunk_id: str
    vector: np.ndarray


@dataclass(frozen=True)
class RetrievalHit:
    chunk_id: str
    similarity: float
    rank: int


class VectorIndex:
    """Store unit vectors by chunk id and answer exact top-K queries.

    Concurrent readers are safe; insertion takes an internal lock and a
    query never observes a partially inserted entry.
    """

    def __init__(self, dims: int | None = None):
        if dims is not None and dims <= 0:
            raise InputError(f"dims must be positive, got {dims}")
        self._dims = dims
        self._vectors: dict[str, np.ndarray] = {}
        self._lock = threading.Lock()
        self._ids: list[str] = []
        self._matrix: np.ndarray | None = None
        self._dirty = False

    def __len__(self) -> int:
        return len(self._vectors)

    def __contains__(self, chunk_id: str) -> bool:
        return chunk_id in self._vectors

    @property
    def dims(self) -> int | None:
        return self._dims

    def insert(self, entry: IndexEntry) -> None:
        """Insert or replace the vector stored under ``entry.chunk_id``."""
        vector = np.asarray(entry.vector, dtype=np.float64)
        if vector.ndim != 1:
            raise InputError(f"vector for {entry.chunk_id!r} must be 1-D")
        if not np.all(np.isfinite(vector)):
            raise InputError(f"vector for {entry.chunk_id!r} has non-finite values")
        norm = float(np.linalg.norm(vector))
        if norm == 0.0:
            raise InputError(f"vector for {entry.chunk_id!r} is all zeros")
        with self._lock:
            if self._dims is None:
                self._dims = int(vector.shape[0])
            elif vector.shape[0] != self._dims:
                raise InputError(
                    f"vector for {entry.chunk_id!r} has {vector.shape[0]} dims, index has {self._dims}"
                )
            self._vectors[entry.chunk_id] = vector / norm
            self._dirty = True

    def _snapshot(self) -> tuple[list[str], np.ndarray | None]:
        with self._lock:
            if self._dirty or self._matrix is None:
                self._ids = sorted(self._vectors)
                self._matrix = (
                    np.stack([self._vectors[i] for i in self._ids])
                    if self._ids
                    else None
                )
                self._dirty = False
            return self._ids, self._matrix

    def top_k(self, query: np.ndarray, k: int = DEFAULT_K) -> list[RetrievalHit]:
        """The ``min(k, size)`` most similar entries, similarity descending,
        ties by ascending chunk id."""
        if k <= 0:
            raise InputError(f"k must be positive, got {k}")
        query = np.asarray(query, dtype=np.float64)
        if query.ndim != 1:
            raise InputError("query vector must be 1-D")
        if self._dims is not None and query.shape[0] != self._dims:
            raise InputError(
                f"query has {query.shape[0]} dims, index has {self._dims}"
            )
        norm = float(np.linalg.norm(query))
        if norm == 0.0:
            raise InputError("query vector is all zeros")

        ids, matrix = self._snapshot()
        if matrix is None:
            return []
        sims = np.clip(matrix @ (query / norm), -1.0, 1.0)
        # Stable sort over id-ordered rows: equal similarities keep id order.
        order = np.argsort(-sims, kind="stable")[: min(k, len(ids))]
        return [
            RetrievalHit(chunk_id=ids[i], similarity=float(sims[i]), rank=rank)
            for rank, i in enumerate(order, start=1)
        ]

    def entries(self) -> Iterable[IndexEntry]:
        ids, matrix = self._snapshot()
        if matrix is None:
            return []
        return [IndexEntry(chunk_id=i, vector=matrix[row]) for row, i in enumerate(ids)]

    def save(self, path: str | Path) -> None:
        ids, matrix = self._snapshot()
        obj = {
            "dims": self._dims,
            "entries": [
                {"chunk_id": chunk_id, "vector": matrix[row].tolist()}
                for row, chunk_id in enumerate(ids)
            ],
        }
        Path(path).write_text(json.dumps(obj) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "VectorIndex":
        path = Path(path)
        try:
            obj = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise FormatError(f"cannot load index {path}: {exc}") from None
        if not isinstance(obj, dict) or "entries" not in obj:
            raise FormatError(f"index {path} is missing the entries array")
        dims = obj.get("dims")
        index = cls(dims=dims if dims is not None else None)
        seen: set[str] = set()
        for i, rec in enumerate(obj["entries"]):
            try:
                chunk_id = rec["chunk_id"]
                vector = np.asarray(rec["vector"], dtype=np.float64)
            except (KeyError, TypeError, ValueError) as exc:
                raise FormatError(f"index {path}, entry {i}: {exc}") from None
            if chunk_id in seen:
                raise FormatError(f"index {path}, entry {i}: duplicate chunk_id {chunk_id!r}")
            seen.add(chunk_id)
            if dims is not None and vector.shape != (dims,):
                raise FormatError(
                    f"index {path}, entry {chunk_id!r}: vector shape {vector.shape} != ({dims},)"
                )
            if abs(float(np.linalg.norm(vector)) - 1.0) > _NORM_TOLERANCE:
                raise FormatError(
                    f"index {path}, entry {chunk_id!r}: vector is not unit-norm"
                )
            # Stored vectors are already unit-norm; bypass insert's
            # re-normalization so save/load round-trips bit-exactly.
            with index._lock:
                if index._dims is None:
                    index._dims = int(vector.shape[0])
                elif vector.shape[0] != index._dims:
                    raise FormatError(
                        f"index {path}, entry {chunk_id!r}: vector has {vector.shape[0]} dims,"
                        f" index has {index._dims}"
                    )
                index._vectors[chunk_id] = vector
                index._dirty = True
        return index


def build_index(chunks, encoder) -> VectorIndex:
    """Embed every chunk text and insert it under its chunk id."""
    index = VectorIndex(dims=encoder.dims)
    for chunk in chunks:
        index.insert(IndexEntry(chunk_id=chunk.chunk_id, vector=encoder.embed(chunk.text)))
    return index
