"""Run configuration shared by the library entry points and the CLI.

Config files are flat JSON objects whose keys are the field names below;
unknown keys are rejected so typos fail loudly.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Any, Dict, Optional, Union


@dataclass(frozen=True)
class Config:
    min_link_confidence: float = 0.25
    min_align_conf: float = 2 / 3
    max_bridge_popularity: Optional[int] = 100_000
    distinctness_threshold: float = 0.8
    bm25_k1: float = 1.2
    bm25_b: float = 0.75
    strictness: str = "strict"

    def __post_init__(self):
        for name in ("min_link_confidence", "min_align_conf", "distinctness_threshold", "bm25_b"):
            val = getattr(self, name)
            if not 0.0 <= val <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {val}")
        if self.bm25_k1 <= 0:
            raise ValueError(f"bm25_k1 must be > 0, got {self.bm25_k1}")
        if self.max_bridge_popularity is not None and self.max_bridge_popularity < 0:
            raise ValueError("max_bridge_popularity must be >= 0")
        if self.strictness not in ("strict", "lenient"):
            raise ValueError(f"strictness must be 'strict' or 'lenient', got {self.strictness!r}")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Config":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    def merged(self, overrides: Dict[str, Any]) -> "Config":
        """Copy with every non-``None`` override applied."""
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})


def load_config(path: Union[str, Path]) -> Config:
    with open(path, encoding="utf-8") as f:
        data = json.load(f)
    if not isinstance(data, dict):
        raise ValueError(f"{path}: config must be a JSON object")
    return Config.from_dict(data)


def save_config(config: Config, path: Union[str, Path]):
    Path(path).write_text(json.dumps(config.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
