"""Datasource ingestion, normalization, segmentation, and length classification.

Documents hold normalized plain text. Chunk boundaries are a pure function
of ``(body, chunk_size, overlap)``, so the catalog persists documents only
and chunks are recomputed on load.

Normalization rules (applied once, at ingest):
  1. CRLF becomes LF.
  2. Remaining C0 control characters other than LF become a single space.
  3. Runs of more than two blank lines collapse to two (four or more
     consecutive newlines become three).
"""

from __future__ import annotations

import hashlib
import json
import re
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator, Mapping

import requests

from .errors import ConfigError, EncodingError, FetchError, FormatError, InputError

DEFAULT_CHUNK_SIZE = 1000
DEFAULT_OVERLAP = 200
DEFAULT_LENGTH_THRESHOLD = 4000

# Offsets are recoverable from the id alone, so chunk texts can be resolved
# against a catalog without re-running segmentation.
_CHUNK_ID_RE = re.compile(r"^(?P<doc>.+):(?P<start>\d{8})-(?P<end>\d{8})$")
_DOC_ID_RE = re.compile(r"^[A-Za-z0-9._-]+$")
_C0_EXCEPT_LF_RE = re.compile(r"[\x00-\x09\x0b-\x1f]")


class SourceKind(str, Enum):
    LOCAL_FILE = "local_file"
    RAW_TEXT = "raw_text"
    URL_FETCH = "url_fetch"


class LengthClass(Enum):
    LONG = "long"
    SHORT = "short"
    NONE = "none"


@dataclass(frozen=True)
class Document:
    doc_id: str
    title: str
    source: SourceKind
    body: str
    fetched_at: str  # ISO-8601
    industry_tag: str | None = None


@dataclass(frozen=True)
class Chunk:
    chunk_id: str
    doc_id: str
    start_offset: int
    end_offset: int
    text: str


def normalize_text(raw: str) -> str:
    text = raw.replace("\r\n", "\n")
    text = _C0_EXCEPT_LF_RE.sub(" ", text)
    return re.sub(r"\n{4,}", "\n\n\n", text)


def chunk_id_for(doc_id: str, start: int, end: int) -> str:
    return f"{doc_id}:{start:08d}-{end:08d}"


def parse_chunk_id(chunk_id: str) -> tuple[str, int, int]:
    m = _CHUNK_ID_RE.match(chunk_id)
    if m is None:
        raise InputError(f"malformed chunk id {chunk_id!r}")
    return m.group("doc"), int(m.group("start")), int(m.group("end"))


def segment(
    doc: Document,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    overlap: int = DEFAULT_OVERLAP,
) -> list[Chunk]:
    """Split a document body into chunks of ``chunk_size`` characters
    generated at stride ``chunk_size - overlap``.

    A trailing remainder shorter than the overlap is merged backward: its
    span is already covered by the previous chunk, so it is dropped.
    """
    if overlap < 0 or chunk_size <= overlap:
        raise ConfigError(
            f"chunk_size must exceed overlap >= 0, got chunk_size={chunk_size} overlap={overlap}"
        )
    body = doc.body
    n = len(body)
    if n == 0:
        return []
    stride = chunk_size - overlap
    spans = [(start, min(start + chunk_size, n)) for start in range(0, n, stride)]
    if len(spans) >= 2 and spans[-1][1] - spans[-1][0] < overlap:
        spans.pop()
    return [
        Chunk(
            chunk_id=chunk_id_for(doc.doc_id, start, end),
            doc_id=doc.doc_id,
            start_offset=start,
            end_offset=end,
            text=body[start:end],
        )
        for start, end in spans
    ]


def classify_datasource(
    docs: Iterable[Document], threshold: int = DEFAULT_LENGTH_THRESHOLD
) -> LengthClass:
    """Classify the combined datasource by total body length."""
    if threshold <= 0:
        raise ConfigError(f"length threshold must be positive, got {threshold}")
    docs = list(docs)
    if not docs:
        return LengthClass.NONE
    total = sum(len(d.body) for d in docs)
    return LengthClass.SHORT if total <= threshold else LengthClass.LONG


def _decode_utf8(data: bytes, origin: str) -> str:
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise EncodingError(f"{origin} is not valid UTF-8 text: {exc}") from None


class Catalog:
    """Ordered collection of documents with unique ids.

    Mutation is single-writer (guarded by an internal lock); reads are safe
    to run concurrently with no writer.
    """

    def __init__(self, documents: Iterable[Document] = ()):
        self._documents: dict[str, Document] = {}
        self._lock = threading.Lock()
        for doc in documents:
            self.add(doc)

    def __len__(self) -> int:
        return len(self._documents)

    def __iter__(self) -> Iterator[Document]:
        return iter(list(self._documents.values()))

    def __contains__(self, doc_id: str) -> bool:
        return doc_id in self._documents

    @property
    def documents(self) -> list[Document]:
        return list(self._documents.values())

    def get(self, doc_id: str) -> Document:
        try:
            return self._documents[doc_id]
        except KeyError:
            raise InputError(f"no document {doc_id!r} in catalog") from None

    def add(self, doc: Document) -> None:
        if not _DOC_ID_RE.match(doc.doc_id):
            raise InputError(
                f"doc_id {doc.doc_id!r} must match [A-Za-z0-9._-]+ (colon is reserved)"
            )
        with self._lock:
            if doc.doc_id in self._documents:
                raise InputError(f"duplicate doc_id {doc.doc_id!r}")
            self._documents[doc.doc_id] = doc

    def ingest(
        self,
        source: SourceKind | str,
        payload: str | bytes,
        metadata: Mapping[str, str] | None = None,
    ) -> Document:
        """Fetch/decode a datasource, normalize it, and append it.

        Nothing is appended when fetching or decoding fails.
        """
        source = SourceKind(source)
        metadata = dict(metadata or {})
        if source is SourceKind.RAW_TEXT:
            body = payload if isinstance(payload, str) else _decode_utf8(payload, "payload")
            default_title = metadata.get("title", "inline text")
        elif source is SourceKind.LOCAL_FILE:
            path = Path(payload if isinstance(payload, str) else _decode_utf8(payload, "path"))
            try:
                data = path.read_bytes()
            except OSError as exc:
                raise FetchError(f"cannot read {path}: {exc}") from None
            body = _decode_utf8(data, str(path))
            default_title = path.name
        elif source is SourceKind.URL_FETCH:
            url = payload if isinstance(payload, str) else _decode_utf8(payload, "url")
            try:
                response = requests.get(url, timeout=30)
            except requests.RequestException as exc:
                raise FetchError(f"cannot fetch {url}: {exc}") from None
            if response.status_code >= 400:
                raise FetchError(f"cannot fetch {url}: HTTP {response.status_code}")
            body = _decode_utf8(response.content, url)
            default_title = url
        else:  # pragma: no cover - SourceKind() already rejects unknowns
            raise InputError(f"unknown source kind {source!r}")

        body = normalize_text(body)
        digest = hashlib.sha256(body.encode("utf-8")).hexdigest()[:8]
        doc = Document(
            doc_id=metadata.get("doc_id", f"doc-{len(self._documents):04d}-{digest}"),
            title=metadata.get("title", default_title),
            source=source,
            body=body,
            fetched_at=metadata.get(
                "fetched_at", datetime.now(timezone.utc).isoformat(timespec="seconds")
            ),
            industry_tag=metadata.get("industry") or metadata.get("industry_tag"),
        )
        self.add(doc)
        return doc

    def total_length(self) -> int:
        return sum(len(d.body) for d in self._documents.values())

    def chunk_all(
        self, chunk_size: int = DEFAULT_CHUNK_SIZE, overlap: int = DEFAULT_OVERLAP
    ) -> list[Chunk]:
        chunks: list[Chunk] = []
        for doc in self._documents.values():
            chunks.extend(segment(doc, chunk_size, overlap))
        return chunks

    def resolve_chunk(self, chunk_id: str) -> Chunk:
        """Rebuild a chunk from the offsets embedded in its id."""
        doc_id, start, end = parse_chunk_id(chunk_id)
        doc = self.get(doc_id)
        if end > len(doc.body) or start >= end:
            raise InputError(
                f"chunk {chunk_id!r} is out of bounds for document {doc_id!r}"
            )
        return Chunk(chunk_id, doc_id, start, end, doc.body[start:end])

    def save(self, path: str | Path) -> None:
        records = [
            {
                "doc_id": d.doc_id,
                "title": d.title,
                "source": d.source.value,
                "industry_tag": d.industry_tag,
                "body": d.body,
                "fetched_at": d.fetched_at,
            }
            for d in self._documents.values()
        ]
        Path(path).write_text(
            json.dumps(records, indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
        )

    @classmethod
    def load(cls, path: str | Path) -> "Catalog":
        path = Path(path)
        try:
            records = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise FormatError(f"cannot load catalog {path}: {exc}") from None
        if not isinstance(records, list):
            raise FormatError(f"catalog {path} must be a JSON array of documents")
        catalog = cls()
        for i, rec in enumerate(records):
            try:
                catalog.add(
                    Document(
                        doc_id=rec["doc_id"],
                        title=rec["title"],
                        source=SourceKind(rec["source"]),
                        body=rec["body"],
                        fetched_at=rec["fetched_at"],
                        industry_tag=rec.get("industry_tag"),
                    )
                )
            except (KeyError, TypeError, ValueError, InputError) as exc:
                raise FormatError(f"catalog {path}, record {i}: {exc}") from None
        return catalog
