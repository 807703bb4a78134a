"""Service configuration: JSON file plus environment overrides."""

from __future__ import annotations

import dataclasses
import json
import os
from dataclasses import dataclass
from typing import Optional

from ..distance import Weights
from ..hints import HintConfig


@dataclass(frozen=True)
class ServiceConfig:
    weights: Weights = Weights()
    hints: HintConfig = HintConfig()
    top_k: int = 4                    # clusters expanded during lookup
    min_attempts: int = 3             # author attempts before hints are served
    recluster_period: float = 900.0   # seconds between scheduled recluster runs
    workers: int = 1                  # distance computations per update job
    store_path: str = ":memory:"
    listen: str = "127.0.0.1:8077"
    threshold_dist: Optional[float] = None  # None = derive per matrix
    instructor_token: Optional[str] = None


_ENV_PREFIX = "CTUTOR_"


def _coerce(value: str, target_type):
    if target_type is bool:
        return value.lower() in ("1", "true", "yes", "on")
    if target_type is int:
        return int(value)
    if target_type is float:
        return float(value)
    return value


def load_config(path: Optional[str] = None, env=os.environ) -> ServiceConfig:
    """Build a ServiceConfig from an optional JSON file and CTUTOR_* env vars.

    File layout mirrors the dataclasses: top-level keys for ServiceConfig
    fields, with "weights" and "hints" as nested objects. Environment
    variables override both, e.g. CTUTOR_TOP_K=6 or
    CTUTOR_WEIGHTS_ADD_DELETE=30.
    """
    data: dict = {}
    if path:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)

    def section(cls, name):
        values = dict(data.get(name, {}))
        for f in dataclasses.fields(cls):
            env_key = f"{_ENV_PREFIX}{name.upper()}_{f.name.upper()}"
            if env_key in env:
                ftype = {"add_delete": float, "replace_cap": float,
                         "block_multiplier": float, "leftout_token_cost": float,
                         "ordering_penalty": float, "max_exact_pairing": int,
                         "pairing_timeout": float, "reveal_ratio": float,
                         "max_ops": int, "max_hints": int}.get(f.name, str)
                values[f.name] = _coerce(env[env_key], ftype)
        known = {f.name for f in dataclasses.fields(cls)}
        return cls(**{k: v for k, v in values.items() if k in known})

    weights = section(Weights, "weights")
    hints = section(HintConfig, "hints")

    top = {k: v for k, v in data.items() if k not in ("weights", "hints")}
    for f in dataclasses.fields(ServiceConfig):
        if f.name in ("weights", "hints"):
            continue
        env_key = f"{_ENV_PREFIX}{f.name.upper()}"
        if env_key in env:
            ftype = {"top_k": int, "min_attempts": int, "workers": int,
                     "recluster_period": float, "threshold_dist": float}.get(f.name, str)
            top[f.name] = _coerce(env[env_key], ftype)
    known = {f.name for f in dataclasses.fields(ServiceConfig)}
    top = {k: v for k, v in top.items() if k in known and k not in ("weights", "hints")}
    return ServiceConfig(weights=weights, hints=hints, **top)
