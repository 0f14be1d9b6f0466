"""Arithmetic-mode plumbing: exact rationals vs binary floats.

Every probability table, marginal and measure in this package carries a
``mode`` tag, either ``"rational"`` (entries are ``fractions.Fraction``,
stored in object-dtype numpy arrays, all comparisons exact) or ``"float"``
(float64 arrays, comparisons within a tolerance). Helpers here coerce
scalars and nested data into the right representation and centralize the
two comparison semantics.
"""

from __future__ import annotations

import math
import os
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from typing import Iterable, Union

import numpy as np

from .errors import InputError

Scalar = Union[float, Fraction]

RATIONAL = "rational"
FLOAT = "float"
MODES = (RATIONAL, FLOAT)

DEFAULT_TOL = 1e-9


def default_tol() -> float:
    """Default comparison tolerance; the LQHV_TOL env var overrides it."""
    raw = os.environ.get("LQHV_TOL")
    if raw is None:
        return DEFAULT_TOL
    try:
        return float(raw)
    except ValueError as exc:
        raise InputError(f"LQHV_TOL is not a number: {raw!r}") from exc


def check_mode(mode: str) -> str:
    if mode not in MODES:
        raise InputError(f"unknown arithmetic mode {mode!r}; expected 'rational' or 'float'")
    return mode


def coerce_scalar(value, mode: str) -> Scalar:
    """Coerce one number into the mode's scalar type.

    In rational mode, floats are read as their shortest decimal literal
    (so 0.45 becomes 9/20, not the exact binary expansion); strings accept
    the "p/q" and decimal forms.
    """
    if mode == FLOAT:
        try:
            out = float(value)
        except (TypeError, ValueError) as exc:
            raise InputError(f"cannot interpret {value!r} as a float") from exc
        if not math.isfinite(out):
            raise InputError(f"non-finite entry {value!r}")
        return out
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"cannot parse rational entry {value!r}") from exc
    if isinstance(value, (float, np.floating)):
        if not math.isfinite(float(value)):
            raise InputError(f"non-finite entry {value!r}")
        try:
            return Fraction(Decimal(repr(float(value))))
        except InvalidOperation as exc:  # pragma: no cover - repr is always decimal
            raise InputError(f"cannot interpret {value!r} as a rational") from exc
    raise InputError(f"cannot interpret {value!r} as a rational")


def as_array(data, mode: str, shape: tuple[int, ...] | None = None) -> np.ndarray:
    """Coerce nested data into a mode-typed numpy array (read-only)."""
    if mode == FLOAT:
        try:
            arr = np.asarray(data, dtype=float)
        except (TypeError, ValueError) as exc:
            raise InputError(f"cannot interpret data as a float array: {exc}") from exc
        if not np.all(np.isfinite(arr)):
            raise InputError("non-finite entry in float array")
        arr = arr.copy()
    else:
        raw = np.asarray(data, dtype=object)
        arr = np.frompyfunc(lambda v: coerce_scalar(v, RATIONAL), 1, 1)(raw)
        if arr.shape == ():
            arr = arr.reshape(1)[:1].reshape(())
    if shape is not None:
        if int(np.prod(shape, dtype=object)) != arr.size:
            raise InputError(f"expected {shape} = {int(np.prod(shape, dtype=object))} entries, got {arr.size}")
        arr = arr.reshape(shape)
    arr.setflags(write=False)
    return arr


def zeros(shape: tuple[int, ...], mode: str) -> np.ndarray:
    if mode == FLOAT:
        return np.zeros(shape, dtype=float)
    out = np.empty(shape, dtype=object)
    out[...] = Fraction(0)
    return out


def zero(mode: str) -> Scalar:
    return 0.0 if mode == FLOAT else Fraction(0)


def one(mode: str) -> Scalar:
    return 1.0 if mode == FLOAT else Fraction(1)


def is_close(a: Scalar, b: Scalar, tol: float, mode: str) -> bool:
    """Mode-aware scalar comparison: exact in rational, |a-b| <= tol in float."""
    if mode == RATIONAL:
        return a == b
    return abs(a - b) <= tol


def max_abs(arr: np.ndarray) -> Scalar:
    """Largest absolute entry; Fraction(0)/0.0 for empty input."""
    if arr.size == 0:
        return Fraction(0) if arr.dtype == object else 0.0
    return abs(arr).max()


def max_abs_diff(a: np.ndarray, b: np.ndarray) -> Scalar:
    return max_abs(a - b)


def format_scalar(value: Scalar, mode: str):
    """JSON-ready form of one entry: "p/q" strings in rational mode."""
    if mode == RATIONAL:
        return str(value)
    return float(value)


def format_array(arr: np.ndarray, mode: str) -> list:
    return [format_scalar(v, mode) for v in arr.reshape(-1)]


def convert_array(arr: np.ndarray, mode_from: str, mode_to: str) -> np.ndarray:
    """Re-type an array between modes (float -> rational reads decimal literals)."""
    if mode_from == mode_to:
        return arr
    return as_array(arr.tolist(), mode_to, shape=arr.shape)


def normalize_weights(weights: Iterable, mode: str) -> list[Scalar]:
    """Coerce nonnegative weights and scale them to sum 1."""
    ws = [coerce_scalar(w, mode) for w in weights]
    if any(w < 0 for w in ws):
        raise InputError("weights must be nonnegative")
    total = sum(ws, zero(mode))
    if total == 0:
        raise InputError("weights must not all be zero")
    return [w / total for w in ws]
