"""Result types and the periodicity-aware error shared by all inversion methods."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from ..errors import DomainError

CLAMP_TOL = 1e-8


class Status(str, Enum):
    RECOVERED = "recovered"
    FAILURE = "failure"
    NOT_ATTEMPTED = "not_attempted"


@dataclass(frozen=True)
class Failure:
    """Returned instead of a value when the algebra does not see the input."""

    reason: str

    def __bool__(self):
        return False


@dataclass
class InversionResult:
    x_recovered: np.ndarray
    per_index_status: tuple[Status, ...]
    error_metric: float | None = None
    oracle_calls: int = 0
    details: dict = field(default_factory=dict)

    @property
    def success(self) -> bool:
        return all(s == Status.RECOVERED for s in self.per_index_status)

    def to_json_obj(self) -> dict:
        return {
            "x_recovered": [None if not np.isfinite(v) else float(v) for v in self.x_recovered],
            "per_index_status": [s.value for s in self.per_index_status],
            "error_metric": self.error_metric,
            "oracle_calls": self.oracle_calls,
            "details": to_jsonable(self.details),
        }


def to_jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, Enum):
        return obj.value
    return obj


class DomainClampWarning(UserWarning):
    pass


def safe_arccos(c: float, tol: float = CLAMP_TOL) -> float:
    """``arccos`` that clamps tiny overshoots and rejects real inconsistencies."""
    if abs(c) > 1.0:
        if abs(c) - 1.0 > tol:
            raise DomainError(f"arccos argument {c!r} is outside [-1, 1]")
        warnings.warn(f"arccos argument {c!r} clamped to [-1, 1]", DomainClampWarning, stacklevel=2)
        c = float(np.clip(c, -1.0, 1.0))
    return float(np.arccos(c))


def periodic_distance(a: float, b: float, period: float | None) -> float:
    if period is None or not np.isfinite(period):
        return abs(a - b)
    d = (a - b) % period
    return float(min(d, period - d))


def periodic_error(x_rec, x_true, periods) -> float:
    """Max over indices of the distance modulo each input's fundamental period."""
    x_rec = np.atleast_1d(np.asarray(x_rec, dtype=float))
    x_true = np.atleast_1d(np.asarray(x_true, dtype=float))
    if x_rec.shape != x_true.shape:
        raise ValueError("shape mismatch between recovered and true inputs")
    if not x_rec.size:
        return 0.0
    if np.isscalar(periods) or periods is None:
        periods = [periods] * x_rec.size
    errs = [periodic_distance(a, b, p) for a, b, p in zip(x_rec, x_true, periods)]
    return float(max(errs))


def encoding_periods(enc) -> list[float | None]:
    return [enc.period(j) for j in range(enc.input_dim)]
