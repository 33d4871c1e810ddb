"""Run configuration and sieve cache management.

Precedence: command-line flags > PTL_* environment variables > config
file (``key = value`` lines, ``#`` comments) > defaults.
"""
from __future__ import annotations

import logging
import os
from dataclasses import dataclass
from pathlib import Path

from .arith import DEFAULT_CEILING, SieveTable, build_sieve, load_sieve, read_cache_limit, save_sieve
from .errors import InvalidArgument, OutOfRange

log = logging.getLogger(__name__)

DEFAULT_SIEVE_LIMIT = 10**6
OUTPUTS = ("csv", "json", "table")
ENV_PREFIX = "PTL_"


@dataclass
class RunConfig:
    sieve_limit: int = DEFAULT_SIEVE_LIMIT
    cache_path: Path | None = None
    partitions: int = 1
    output: str = "table"
    no_build: bool = False
    force_rebuild: bool = False

    def __post_init__(self):
        if self.sieve_limit < 2:
            raise InvalidArgument(f"sieve_limit must be >= 2, got {self.sieve_limit}")
        if self.partitions < 1:
            raise InvalidArgument(f"partitions must be >= 1, got {self.partitions}")
        if self.output not in OUTPUTS:
            raise InvalidArgument(f"output must be one of {OUTPUTS}, got {self.output!r}")


_FIELDS = {
    "sieve_limit": int,
    "cache_path": Path,
    "partitions": int,
    "output": str,
}


def _parse_bool(v: str) -> bool:
    return v.strip().lower() in ("1", "true", "yes", "on")


def read_config_file(path) -> dict:
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidArgument(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.lower().replace("-", "_")
        if key not in _FIELDS:
            raise InvalidArgument(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = value
    return out


def resolve_config(flags: dict | None = None, env=None, config_file=None) -> RunConfig:
    """Merge flags, environment and an optional config file into a RunConfig."""
    env = os.environ if env is None else env
    flags = {k: v for k, v in (flags or {}).items() if v is not None}
    merged: dict = {}
    config_file = flags.pop("config", None) or config_file or env.get(ENV_PREFIX + "CONFIG")
    if config_file:
        merged.update(read_config_file(config_file))
    for key in _FIELDS:
        v = env.get(ENV_PREFIX + key.upper())
        if v:
            merged[key] = v
    merged.update(flags)
    kw = {}
    for key, conv in _FIELDS.items():
        if key in merged:
            kw[key] = conv(merged[key]) if not isinstance(merged[key], conv) else merged[key]
    for key in ("no_build", "force_rebuild"):
        if key in merged:
            v = merged[key]
            kw[key] = v if isinstance(v, bool) else _parse_bool(v)
    try:
        return RunConfig(**kw)
    except (TypeError, ValueError) as exc:
        raise InvalidArgument(str(exc)) from exc


def load_or_build_sieve(cfg: RunConfig, limit: int | None = None) -> SieveTable:
    """Sieve of at least ``limit`` (default cfg.sieve_limit), via the cache when configured.

    A cache covering the limit is reused; a smaller one is rebuilt and
    rewritten.  A corrupt cache is an error unless force_rebuild is set.
    """
    limit = cfg.sieve_limit if limit is None else limit
    path = cfg.cache_path
    if path is None:
        if cfg.no_build:
            raise InvalidArgument("--no-build given without a sieve cache path")
        return build_sieve(limit)
    path = Path(path)
    if path.exists() and not cfg.force_rebuild:
        cached = read_cache_limit(path)
        if cached >= limit:
            log.info("loading sieve cache %s (limit %d)", path, cached)
            return load_sieve(path)
        log.info("sieve cache %s is stale (limit %d < %d)", path, cached, limit)
    if cfg.no_build:
        state = "stale" if path.exists() else "missing"
        raise OutOfRange(f"sieve cache {path} is {state} and --no-build forbids rebuilding")
    if limit > DEFAULT_CEILING:
        log.warning("building a sieve beyond the documented ceiling: %d entries", limit)
    sieve = build_sieve(limit)
    tmp = path.with_suffix(path.suffix + ".tmp")
    save_sieve(sieve, tmp)
    os.replace(tmp, path)
    return sieve

