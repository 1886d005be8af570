"""Run configuration: desk-scale caps, search budgets, seed and output options.

A config file (pointed to by ``BARFILL_CONFIG``) holds simple ``key=value``
lines using the field names below; ``#`` starts a comment.
"""

from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass, fields
from pathlib import Path

from .errors import PreconditionError

ENV_VAR = "BARFILL_CONFIG"


@dataclass(frozen=True)
class RunConfig:
    max_group_order: int = 20000
    max_tuples: int = 1 << 24          # |G|^n for any enumerated tuple basis
    max_echelon_rows: int = 4096       # rows of a matrix that gets eliminated
    max_nnz: int = 10**7               # nonzeros of an assembled sparse matrix
    max_census: int = 10**6            # chains examined by exhaustive isop/phi/psi
    max_classes: int = 4096            # homology classes scanned for minimal reps
    search_nodes: int = 10**7          # node budget per filler search
    max_weight: int = 8                # weight ceiling of iterative deepening
    seed: int = 0
    output: str = "json"               # json | csv
    checkpoint: str | None = None
    checkpoint_every: int = 10**6
    threads: int = 1

    def __post_init__(self):
        for f in fields(self):
            if f.name.startswith("max_") or f.name in ("search_nodes", "checkpoint_every", "threads"):
                if getattr(self, f.name) <= 0:
                    raise PreconditionError(f"config value {f.name} must be positive")
        if self.output not in ("json", "csv"):
            raise PreconditionError(f"unknown output format {self.output!r}")

    def replace(self, **changes) -> "RunConfig":
        changes = {k: v for k, v in changes.items() if v is not None}
        return dataclasses.replace(self, **changes)


DEFAULT = RunConfig()


def _coerce(name: str, raw: str):
    types = {f.name: f.type for f in fields(RunConfig)}
    if name not in types:
        raise PreconditionError(f"unknown config key {name!r}")
    t = types[name]
    if "int" in t and "str" not in t:
        return int(raw.replace("_", ""))
    if raw.lower() in ("none", ""):
        return None
    return raw


def parse_config_text(text: str, base: RunConfig = DEFAULT) -> RunConfig:
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise PreconditionError(f"config line {lineno}: expected key=value")
        key, raw = (s.strip() for s in line.split("=", 1))
        values[key] = _coerce(key, raw)
    return dataclasses.replace(base, **values)


def load_config(path: str | os.PathLike | None = None) -> RunConfig:
    """Load ``path`` or, failing that, the file named by ``$BARFILL_CONFIG``."""
    path = path or os.environ.get(ENV_VAR)
    if not path:
        return DEFAULT
    return parse_config_text(Path(path).read_text())
