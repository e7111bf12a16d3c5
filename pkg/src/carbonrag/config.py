"""Run configuration: one JSON file describing a full pipeline run.

Flags override file values, file values override defaults. The effective
configuration is embedded verbatim in every benchmark report so a run can
be reproduced from its report alone.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping

from .corpus import DEFAULT_CHUNK_SIZE, DEFAULT_LENGTH_THRESHOLD, DEFAULT_OVERLAP
from .embedding import encoder_from_spec
from .errors import ConfigError
from .fusion import DEFAULT_PROMPT_BUDGET, TEMPLATE_VERSION
from .generation import backend_from_spec
from .index import DEFAULT_K


@dataclass(frozen=True)
class RunConfig:
    catalog_path: str | None = None
    index_path: str | None = None
    factor_db_path: str | None = None
    benchmark_path: str | None = None
    report_out: str | None = None
    encoder: str = "lexical"
    k: int = DEFAULT_K
    chunk_size: int = DEFAULT_CHUNK_SIZE
    overlap: int = DEFAULT_OVERLAP
    length_threshold: int = DEFAULT_LENGTH_THRESHOLD
    backend: str | None = None
    model: str = "default"
    prompt_budget: int = DEFAULT_PROMPT_BUDGET
    template_version: str = TEMPLATE_VERSION

    def __post_init__(self):
        if self.k <= 0:
            raise ConfigError(f"k must be positive, got {self.k}")
        if self.chunk_size <= self.overlap:
            raise ConfigError(
                f"chunk_size ({self.chunk_size}) must exceed overlap ({self.overlap})"
            )
        if self.prompt_budget <= 0:
            raise ConfigError(f"prompt_budget must be positive, got {self.prompt_budget}")
        if self.template_version != TEMPLATE_VERSION:
            raise ConfigError(
                f"config pins template version {self.template_version!r} but this "
                f"build renders {TEMPLATE_VERSION!r}; refusing a silent mismatch"
            )

    @classmethod
    def field_names(cls) -> tuple[str, ...]:
        return tuple(f.name for f in dataclasses.fields(cls))

    @classmethod
    def from_file(cls, path: str | Path) -> "RunConfig":
        path = Path(path)
        try:
            obj = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot load config {path}: {exc}") from None
        if not isinstance(obj, dict):
            raise ConfigError(f"config {path} must be a JSON object")
        unknown = sorted(set(obj) - set(cls.field_names()))
        if unknown:
            raise ConfigError(f"config {path} has unknown keys: {', '.join(unknown)}")
        try:
            return cls(**obj)
        except TypeError as exc:
            raise ConfigError(f"config {path}: {exc}") from None

    def merged(self, overrides: Mapping[str, Any]) -> "RunConfig":
        """New config with non-None override values applied (flags win)."""
        effective = {k: v for k, v in overrides.items() if v is not None}
        unknown = sorted(set(effective) - set(self.field_names()))
        if unknown:
            raise ConfigError(f"unknown config overrides: {', '.join(unknown)}")
        return dataclasses.replace(self, **effective)

    def to_json_obj(self) -> dict:
        return dataclasses.asdict(self)

    def require(self, field_name: str, *, must_exist: bool = False) -> str:
        value = getattr(self, field_name)
        if not value:
            raise ConfigError(f"config is missing {field_name}")
        if must_exist and not Path(value).exists():
            raise ConfigError(f"{field_name} {value!r} does not exist")
        return value

    def build_encoder(self):
        return encoder_from_spec(self.encoder)

    def build_backend(self, *, audit_log_path: str | Path | None = None):
        spec = self.require("backend")
        return backend_from_spec(spec, audit_log_path=audit_log_path, model=self.model)
