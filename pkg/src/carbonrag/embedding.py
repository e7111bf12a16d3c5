"""Text encoders over one shared vector space, plus cosine similarity.

Every encoder emits unit-norm float64 vectors. The lexical baseline and
the trained dual-tower encoder are fully deterministic across runs and
platforms; the remote encoder wraps an HTTP endpoint and re-normalizes
whatever it returns.

Token features are hashed bag-of-words: lowercase, split on
non-alphanumerics, FNV-1a 64-bit bucket assignment with a fixed seed.
"""

from __future__ import annotations

import json
import logging
import os
import re
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol, Sequence

import numpy as np
import requests

from .errors import ConfigError, FormatError, InputError, TransportError

logger = logging.getLogger(__name__)

DEFAULT_DIMS = 64
DEFAULT_FEATURE_DIMS = 256
DEFAULT_HASH_SEED = 0
DEFAULT_MARGIN = 0.2

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_U64 = 0xFFFFFFFFFFFFFFFF


def _fnv1a64(data: bytes, seed: int = 0) -> int:
    h = (_FNV_OFFSET ^ seed) & _U64
    for byte in data:
        h ^= byte
        h = (h * _FNV_PRIME) & _U64
    return h


def tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


def hashed_token_counts(text: str, dims: int, seed: int = DEFAULT_HASH_SEED) -> np.ndarray:
    counts = np.zeros(dims, dtype=np.float64)
    for token in tokenize(text):
        counts[_fnv1a64(token.encode("utf-8"), seed) % dims] += 1.0
    return counts


def _basis_e0(dims: int) -> np.ndarray:
    v = np.zeros(dims, dtype=np.float64)
    v[0] = 1.0
    return v


def _unit_or_e0(vector: np.ndarray, context: str) -> np.ndarray:
    # Guard: an all-zero vector cannot be normalized; fall back to e_0 so
    # downstream cosines stay finite.
    norm = float(np.linalg.norm(vector))
    if norm == 0.0:
        logger.warning("%s produced a zero vector; embedding as basis e_0", context)
        return _basis_e0(vector.shape[0])
    return vector / norm


def _require_text(text: str) -> str:
    if not text or not text.strip():
        raise InputError("cannot embed empty text")
    return text


def cosine_similarity(a: np.ndarray, b: np.ndarray) -> float:
    """Cosine of the angle between two vectors, clamped into [-1, 1]."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.ndim != 1 or b.ndim != 1 or a.shape != b.shape:
        raise InputError(f"dimension mismatch: {a.shape} vs {b.shape}")
    norm_a = float(np.linalg.norm(a))
    norm_b = float(np.linalg.norm(b))
    if norm_a == 0.0 or norm_b == 0.0:
        raise InputError("cosine similarity is undefined for a zero vector")
    return float(min(1.0, max(-1.0, float(np.dot(a, b)) / (norm_a * norm_b))))


class Encoder(Protocol):
    kind: str
    dims: int

    def embed(self, text: str) -> np.ndarray: ...


@dataclass(frozen=True)
class LexicalEncoder:
    """Deterministic hashed bag-of-words baseline."""

    dims: int = DEFAULT_DIMS
    seed: int = DEFAULT_HASH_SEED

    kind = "lexical_baseline"

    def __post_init__(self):
        if self.dims <= 0:
            raise ConfigError(f"dims must be positive, got {self.dims}")

    def embed(self, text: str) -> np.ndarray:
        _require_text(text)
        counts = hashed_token_counts(text, self.dims, self.seed)
        return _unit_or_e0(counts, f"lexical embedding of {text[:40]!r}")


@dataclass(frozen=True, eq=False)
class DualTowerEncoder:
    """Shared linear map over hashed token features.

    Both towers are the same matrix (Siamese weight sharing), so
    ``embed_query`` and ``embed_passage`` are aliases of ``embed``.
    """

    matrix: np.ndarray  # (dims, feature_dims)
    seed: int = 0
    hash_seed: int = DEFAULT_HASH_SEED

    kind = "toy_dual_tower"

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.float64)
        if m.ndim != 2:
            raise ConfigError(f"tower matrix must be 2-D, got shape {m.shape}")
        m = np.ascontiguousarray(m)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dims(self) -> int:
        return int(self.matrix.shape[0])

    @property
    def feature_dims(self) -> int:
        return int(self.matrix.shape[1])

    def features(self, text: str) -> np.ndarray:
        counts = hashed_token_counts(text, self.feature_dims, self.hash_seed)
        norm = float(np.linalg.norm(counts))
        return counts / norm if norm > 0.0 else counts

    def embed(self, text: str) -> np.ndarray:
        _require_text(text)
        f = self.features(text)
        if not f.any():
            logger.warning("no tokens in %r; embedding as basis e_0", text[:40])
            return _basis_e0(self.dims)
        return _unit_or_e0(self.matrix @ f, f"tower embedding of {text[:40]!r}")

    def embed_query(self, text: str) -> np.ndarray:
        return self.embed(text)

    def embed_passage(self, text: str) -> np.ndarray:
        return self.embed(text)


@dataclass(frozen=True)
class TrainingPair:
    text_a: str
    text_b: str
    related: bool


@dataclass(frozen=True)
class TrainingResult:
    encoder: DualTowerEncoder
    losses: tuple[float, ...]  # losses[0] is evaluated before any update

    @property
    def initial_loss(self) -> float:
        return self.losses[0]

    @property
    def final_loss(self) -> float:
        return self.losses[-1]


def _pair_cosine_grad(W: np.ndarray, fa: np.ndarray, fb: np.ndarray):
    u = W @ fa
    v = W @ fb
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu < 1e-12 or nv < 1e-12:
        return 0.0, np.zeros_like(W)
    s = float(np.dot(u, v)) / (nu * nv)
    ds_du = v / (nu * nv) - (s / (nu * nu)) * u
    ds_dv = u / (nu * nv) - (s / (nv * nv)) * v
    return s, np.outer(ds_du, fa) + np.outer(ds_dv, fb)


def _dataset_loss(W: np.ndarray, feats, margin: float) -> float:
    total = 0.0
    for fa, fb, related in feats:
        s, _ = _pair_cosine_grad(W, fa, fb)
        total += (1.0 - s) if related else max(0.0, s - margin)
    return total


def train_dual_tower(
    pairs: Sequence[TrainingPair],
    *,
    dims: int = DEFAULT_DIMS,
    epochs: int = 50,
    learning_rate: float = 0.1,
    margin: float = DEFAULT_MARGIN,
    feature_dims: int = DEFAULT_FEATURE_DIMS,
    seed: int = 0,
    hash_seed: int = DEFAULT_HASH_SEED,
) -> TrainingResult:
    """Fit the shared tower by full-batch gradient descent.

    The objective pulls related pairs toward cosine 1 and pushes unrelated
    pairs below the margin:
    ``sum_related (1 - s) + sum_unrelated max(0, s - margin)``.
    """
    if not pairs:
        raise ConfigError("training requires at least one pair")
    for p in pairs:
        if not p.text_a.strip() or not p.text_b.strip():
            raise InputError("training pair texts must be non-empty")
    n_related = sum(1 for p in pairs if p.related)
    if n_related == 0 or n_related == len(pairs):
        raise ConfigError(
            "training requires at least one related and one unrelated pair"
        )
    if dims <= 0 or feature_dims <= 0:
        raise ConfigError("dims and feature_dims must be positive")
    if epochs < 0:
        raise ConfigError(f"epochs must be >= 0, got {epochs}")

    rng = np.random.default_rng(seed)
    W = rng.normal(0.0, 1.0 / np.sqrt(feature_dims), size=(dims, feature_dims))

    probe = DualTowerEncoder(matrix=W, seed=seed, hash_seed=hash_seed)
    feats = [(probe.features(p.text_a), probe.features(p.text_b), p.related) for p in pairs]

    losses = [_dataset_loss(W, feats, margin)]
    for _ in range(epochs):
        grad = np.zeros_like(W)
        for fa, fb, related in feats:
            s, ds_dW = _pair_cosine_grad(W, fa, fb)
            if related:
                grad -= ds_dW
            elif s > margin:
                grad += ds_dW
        W = W - learning_rate * grad
        losses.append(_dataset_loss(W, feats, margin))

    encoder = DualTowerEncoder(matrix=W, seed=seed, hash_seed=hash_seed)
    return TrainingResult(encoder=encoder, losses=tuple(losses))


@dataclass
class RemoteEncoder:
    """Client for a remote embedding endpoint.

    Wire contract: ``POST {"input": [texts]}`` returns
    ``{"embeddings": [[...], ...]}``. Vectors are re-normalized locally so
    the unit-norm contract never depends on the server.
    """

    endpoint: str
    dims: int = DEFAULT_DIMS
    timeout: float = 30.0
    max_attempts: int = 3
    backoff_base: float = 0.5
    api_key_env: str = "EMBEDDING_API_KEY"
    session: requests.Session | None = field(default=None, repr=False)

    kind = "remote"

    def _headers(self) -> dict[str, str]:
        headers = {"Content-Type": "application/json"}
        key = os.environ.get(self.api_key_env, "")
        if key:
            headers["Authorization"] = f"Bearer {key}"
        return headers

    def _post(self, payload: dict) -> dict:
        http = self.session or requests
        last_error = None
        for attempt in range(1, self.max_attempts + 1):
            try:
                response = http.post(
                    self.endpoint, json=payload, headers=self._headers(), timeout=self.timeout
                )
            except requests.RequestException as exc:
                last_error = str(exc)
            else:
                if response.status_code >= 500:
                    last_error = f"HTTP {response.status_code}"
                elif response.status_code >= 400:
                    raise TransportError(
                        f"embedding endpoint rejected the request: HTTP {response.status_code}",
                        attempts=attempt,
                        stage="embedding",
                    )
                else:
                    try:
                        return response.json()
                    except ValueError as exc:  # body was not JSON; retrying cannot help
                        raise FormatError(
                            f"embedding endpoint returned non-JSON: {exc}"
                        ) from None
            if attempt < self.max_attempts:
                time.sleep(self.backoff_base * 2 ** (attempt - 1))
        raise TransportError(
            f"embedding endpoint unreachable after {self.max_attempts} attempts: {last_error}",
            attempts=self.max_attempts,
            stage="embedding",
        )

    def embed_batch(self, texts: Sequence[str]) -> list[np.ndarray]:
        for t in texts:
            _require_text(t)
        data = self._post({"input": list(texts)})
        vectors = data.get("embeddings")
        if not isinstance(vectors, list) or len(vectors) != len(texts):
            raise FormatError(
                f"embedding endpoint returned {len(vectors) if isinstance(vectors, list) else 'no'}"
                f" embeddings for {len(texts)} inputs"
            )
        out = []
        for i, values in enumerate(vectors):
            v = np.asarray(values, dtype=np.float64)
            if v.ndim != 1 or v.shape[0] != self.dims:
                raise FormatError(
                    f"embedding {i} has shape {v.shape}, expected ({self.dims},)"
                )
            out.append(_unit_or_e0(v, f"remote embedding {i}"))
        return out

    def embed(self, text: str) -> np.ndarray:
        return self.embed_batch([text])[0]


def save_encoder(encoder, path: str | Path) -> None:
    """Persist an encoder spec as JSON."""
    if isinstance(encoder, LexicalEncoder):
        obj = {"kind": encoder.kind, "dims": encoder.dims, "seed": encoder.seed}
    elif isinstance(encoder, DualTowerEncoder):
        obj = {
            "kind": encoder.kind,
            "dims": encoder.dims,
            "seed": encoder.seed,
            "hash_seed": encoder.hash_seed,
            "matrix": encoder.matrix.tolist(),
        }
    elif isinstance(encoder, RemoteEncoder):
        obj = {"kind": encoder.kind, "dims": encoder.dims, "endpoint": encoder.endpoint}
    else:
        raise InputError(f"cannot persist encoder of type {type(encoder).__name__}")
    Path(path).write_text(json.dumps(obj, indent=2) + "\n", encoding="utf-8")


def load_encoder(path: str | Path):
    path = Path(path)
    try:
        obj = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"cannot load encoder {path}: {exc}") from None
    kind = obj.get("kind")
    try:
        if kind == "lexical_baseline":
            return LexicalEncoder(dims=int(obj["dims"]), seed=int(obj["seed"]))
        if kind == "toy_dual_tower":
            matrix = np.asarray(obj["matrix"], dtype=np.float64)
            if matrix.ndim != 2 or matrix.shape[0] != int(obj["dims"]):
                raise FormatError(
                    f"encoder {path}: matrix shape {matrix.shape} does not match dims {obj['dims']}"
                )
            return DualTowerEncoder(
                matrix=matrix,
                seed=int(obj["seed"]),
                hash_seed=int(obj.get("hash_seed", DEFAULT_HASH_SEED)),
            )
        if kind == "remote":
            return RemoteEncoder(endpoint=obj["endpoint"], dims=int(obj["dims"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"encoder {path} is malformed: {exc}") from None
    raise FormatError(f"encoder {path} has unknown kind {kind!r}")


def encoder_from_spec(spec: str):
    """Build an encoder from a CLI-style spec string.

    Accepted forms: ``lexical``, ``lexical:<dims>``, ``remote:<url>``, or a
    path to a saved encoder JSON file.
    """
    if spec == "lexical":
        return LexicalEncoder()
    if spec.startswith("lexical:"):
        try:
            return LexicalEncoder(dims=int(spec.split(":", 1)[1]))
        except ValueError:
            raise ConfigError(f"bad lexical encoder spec {spec!r}") from None
    if spec.startswith("remote:"):
        return RemoteEncoder(endpoint=spec.split(":", 1)[1])
    if Path(spec).is_file():
        return load_encoder(spec)
    raise ConfigError(
        f"unknown encoder spec {spec!r} (expected 'lexical', 'lexical:<dims>', "
        f"'remote:<url>', or a saved encoder file)"
    )
