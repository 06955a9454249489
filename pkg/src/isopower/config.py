"""Run-time bounds and output settings.

A :class:`Config` is immutable.  The active one lives in a context variable so
library calls pick it up without threading an argument through every
function; :func:`using` swaps it for the duration of a ``with`` block.
"""
from __future__ import annotations

import contextlib
import contextvars
import dataclasses
import os
from dataclasses import dataclass

from .errors import UsageError


@dataclass(frozen=True)
class Config:
    bound_q: int = 10**6          # largest field order that is enumerated point by point
    bound_ext: int = 24           # largest extension degree over the prime field
    bound_disc: int = 10**6       # largest |D| for class-group enumeration
    table_cap: int = 1 << 16      # fields up to this size use log/exp tables
    bound_group: int = 20000      # largest group handled by subgroup enumeration
    max_rank: int = 3             # largest rank reported by image descriptions
    seed: int = 0
    format: str = "json"

    def __post_init__(self):
        for f in ("bound_q", "bound_ext", "bound_disc", "table_cap", "bound_group", "max_rank"):
            if getattr(self, f) <= 0:
                raise UsageError(f"{f} must be positive", field=f, value=getattr(self, f))
        if self.format not in ("json", "csv"):
            raise UsageError("format must be json or csv", value=self.format)

    def replace(self, **kw) -> "Config":
        return dataclasses.replace(self, **{k: v for k, v in kw.items() if v is not None})


_FIELDS = {f.name: f.type for f in dataclasses.fields(Config)}

_current: contextvars.ContextVar[Config] = contextvars.ContextVar("isopower_config", default=Config())


def current() -> Config:
    return _current.get()


@contextlib.contextmanager
def using(cfg: Config):
    token = _current.set(cfg)
    try:
        yield cfg
    finally:
        _current.reset(token)


def parse_config_text(text: str, base: Config | None = None) -> Config:
    """Read ``key=value`` lines; blank lines and ``#`` comments are skipped."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError("config line is not key=value", line=lineno)
        key, val = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _FIELDS:
            raise UsageError("unknown config key", key=key, line=lineno)
        if key == "format":
            values[key] = val
        else:
            try:
                values[key] = int(val.replace("_", ""), 0)
            except ValueError:
                raise UsageError("config value is not an integer", key=key, line=lineno) from None
    return (base or Config()).replace(**values)


def from_environment() -> Config:
    path = os.environ.get("ISOPOWER_CONFIG")
    if not path:
        return Config()
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_config_text(fh.read())
    except OSError as exc:
        raise UsageError("cannot read ISOPOWER_CONFIG", path=path, reason=str(exc)) from None
