"""Defaults for verification runs, overridable by a TOML file named in CFDYN_CONFIG."""
from __future__ import annotations

import os
import sys
from dataclasses import dataclass, fields, replace

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

__all__ = ["VerifyConfig", "load_config", "ENV_VAR"]

ENV_VAR = "CFDYN_CONFIG"


@dataclass(frozen=True)
class VerifyConfig:
    samples: int = 10_000
    seed: int = 0
    epsilon: float = 1e-9
    grid: int = 600


def load_config(path: str | None = None) -> VerifyConfig:
    """Read ``[verify]`` (or top-level) keys samples, seed, epsilon, grid."""
    path = path or os.environ.get(ENV_VAR)
    cfg = VerifyConfig()
    if not path:
        return cfg
    with open(path, "rb") as fh:
        data = tomllib.load(fh)
    data = data.get("verify", data)
    known = {f.name: f.type for f in fields(VerifyConfig)}
    unknown = set(data) - set(known)
    if unknown:
        raise ValueError(f"unknown config keys: {', '.join(sorted(unknown))}")
    cast = {"samples": int, "seed": int, "epsilon": float, "grid": int}
    return replace(cfg, **{k: cast[k](v) for k, v in data.items()})
