"""
Environment-backed defaults and the run configuration embedded in artifacts.

Precedence is flag > environment (``LINKEVAL_*``) > built-in default; the CLI
resolves flags against ``CONFIG`` and records the result in a ``RunConfig``.
"""
import os
from pathlib import Path
from typing import Any, Literal, Type, TypeVar

import ujson as json
from pydantic import BaseModel, Field

ENV_PREFIX = "LINKEVAL_"

TieMode = Literal["average", "pessimistic"]

T = TypeVar("T", bound="BaseModel")


def _env(name: str) -> str | None:
    value = os.getenv(f"{ENV_PREFIX}{name}")
    return value if value not in (None, "") else None


def _env_int(name: str, default: int | None) -> int | None:
    value = _env(name)
    return int(value) if value is not None else default


class Config:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super(Config, cls).__new__(cls)
        return cls._instance

    @property
    def seed(self) -> int | None:
        return _env_int("SEED", None)

    @property
    def runs(self) -> int:
        return _env_int("RUNS", 100) or 100

    @property
    def num_negatives(self) -> int:
        return _env_int("NUM_NEGATIVES", 49) or 49

    @property
    def tmn_negatives(self) -> int:
        return _env_int("TMN_NEGATIVES", 50) or 50

    @property
    def n_jobs(self) -> int:
        return _env_int("N_JOBS", 1) or 1

    @property
    def tie(self) -> TieMode:
        value = _env("TIE") or "average"
        if value not in ("average", "pessimistic"):
            raise ValueError(f"{ENV_PREFIX}TIE must be 'average' or 'pessimistic', got {value!r}")
        return value  # type: ignore[return-value]

    @property
    def parallel_backend(self) -> str:
        return _env("PARALLEL_BACKEND") or "loky"

    @property
    def json_logs(self) -> bool:
        return (_env("JSON_LOGS") or "").lower() in ("1", "true", "yes")

    @property
    def data_dir(self) -> Path | None:
        value = _env("DATA_DIR")
        return Path(value) if value else None


CONFIG = Config()


class RunConfig(BaseModel):
    """Everything needed to regenerate an artifact from its own header."""

    command: str = Field(..., description="CLI command that produced the artifact.")
    datasets: list[str] = Field(default_factory=list, description="Benchmark directories, one per version.")
    layout: str = Field("single", description="Benchmark directory layout.")
    protocol: str | None = Field(None, description="non-sampling, random or tmn.")
    runs: int | None = Field(None, description="Repetitions of the random protocol.")
    num_negatives: int | None = Field(None, description="Negatives per query (random protocol or TMN generation).")
    resample_known: bool = Field(False, description="Random protocol draws only true negatives.")
    tmn_file: str | None = Field(None, description="Type-matched negatives file (pattern).")
    ks: list[int] = Field(default_factory=lambda: [1, 3, 10], description="Cut-offs for hits@k.")
    seed: int | None = Field(None, description="Master seed for every sampled artifact.")
    model: str | None = Field(None, description="baseline, random or predictions:<path>.")
    rules: str | None = Field(None, description="Rule file, or 'auto' to learn from the train graph.")
    min_support: int = Field(1, description="Minimum |X_b ∩ X_h| for a rule to be kept.")
    min_confidence: float = Field(0.0, description="Minimum confidence for a rule to be kept.")
    tie: TieMode = Field("average", description="Rank convention for tied scores.")
    n_jobs: int = Field(1, description="Worker processes.")
    out: str | None = Field(None, description="Output path.")

    def to_json(self) -> str:
        return self.model_dump_json()

    @classmethod
    def from_json(cls: Type[T], json_str: str) -> T:
        return cls.model_validate(json.loads(json_str))

    def header_lines(self) -> list[str]:
        """Comment lines for text artifacts (TSV, CSV, plain tables)."""
        return [f"# config: {self.to_json()}"]

    def as_meta(self) -> dict[str, Any]:
        return self.model_dump(mode="json")


def read_header_config(path: Path) -> RunConfig | None:
    """Recover the RunConfig from the leading comment lines of a text artifact."""
    with path.open(encoding="utf-8") as f:
        for line in f:
            if not line.startswith("#"):
                break
            if line.startswith("# config: "):
                return RunConfig.from_json(line[len("# config: "):])
    return None
