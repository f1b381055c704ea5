"""Run-time configuration and shared high-precision contexts."""

from __future__ import annotations

import math
import os
import threading
from dataclasses import dataclass, replace

import mpmath

PRECISION_ENV = "LATTICE_DEHN_PRECISION"
DEFAULT_ZERO_TOLERANCE = "1e-30"
DEFAULT_SAMPLES = 10_000
DEFAULT_COLUMN_CAPACITY = 10**9


def _env_precision() -> int:
    raw = os.environ.get(PRECISION_ENV)
    if raw is None:
        return 256
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{PRECISION_ENV} must be an integer, got {raw!r}") from None
    if value < 64:
        raise ValueError(f"{PRECISION_ENV} must be >= 64, got {value}")
    return value


DEFAULT_PRECISION = _env_precision()

_contexts: dict[int, mpmath.ctx_mp.MPContext] = {}
_lock = threading.Lock()


def mp(prec: int | None = None) -> mpmath.ctx_mp.MPContext:
    """Return a shared, never-mutated mpmath context at ``prec`` bits.

    One context per precision keeps concurrent callers from racing on the
    global ``mpmath.mp`` precision.
    """
    prec = DEFAULT_PRECISION if prec is None else int(prec)
    ctx = _contexts.get(prec)
    if ctx is None:
        with _lock:
            ctx = _contexts.get(prec)
            if ctx is None:
                ctx = mpmath.MPContext()
                ctx.prec = prec
                _contexts[prec] = ctx
    return ctx


def decimal_digits(prec: int | None = None) -> int:
    prec = DEFAULT_PRECISION if prec is None else prec
    return int(prec * math.log10(2))


def format_decimal(x, prec: int | None = None) -> str:
    """Decimal string with as many digits as the precision supports; integers print without ``.0``."""
    ctx = mp(prec)
    s = ctx.nstr(x, decimal_digits(ctx.prec))
    return s[:-2] if s.endswith(".0") else s


@dataclass(frozen=True)
class Config:
    precision_bits: int = DEFAULT_PRECISION
    zero_tolerance: str = DEFAULT_ZERO_TOLERANCE
    sample_count: int = DEFAULT_SAMPLES
    seed: int = 0
    output: str = "json"
    column_capacity: int = DEFAULT_COLUMN_CAPACITY

    def __post_init__(self):
        if self.precision_bits < 64:
            raise ValueError("precision_bits must be >= 64")
        if not mpmath.mpf(self.zero_tolerance) > 0:
            raise ValueError("zero_tolerance must be positive")
        if self.sample_count < 1:
            raise ValueError("sample_count must be positive")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
        if self.output not in ("json", "text"):
            raise ValueError("output must be 'json' or 'text'")

    @property
    def tolerance(self):
        return mp(self.precision_bits).mpf(self.zero_tolerance)

    def with_(self, **changes) -> "Config":
        return replace(self, **changes)
