"""Chebyshev polynomials on [-1, 1] via trigonometric identities.

The trig forms T_k(cos t) = cos(k t) and U_k(cos t) = sin((k+1) t)/sin(t)
are numerically stable and extend to real (non-integer) order k, which the
continuous-time curves need. The three-term recurrences are kept only as
integer-order cross-checks.
"""

from __future__ import annotations

import math


def cheb_t(k: float, x: float) -> float:
    """First kind: T_k(x) = cos(k arccos x); real order k >= 0, |x| <= 1."""
    if k < 0:
        raise ValueError(f"order must be >= 0, got {k}")
    if abs(x) > 1.0:
        raise ValueError(f"|x| <= 1 required on the trigonometric branch, got {x}")
    return math.cos(k * math.acos(x))


def cheb_u(k: float, x: float) -> float:
    """Second kind: U_k(x) = sin((k+1) arccos x)/sin(arccos x); U_{-1} = 0.

    Real order k >= -1 and |x| <= 1; the x = +-1 endpoints use the limit
    (k+1) cos(k arccos x).
    """
    if k < -1:
        raise ValueError(f"order must be >= -1, got {k}")
    if abs(x) > 1.0:
        raise ValueError(f"|x| <= 1 required on the trigonometric branch, got {x}")
    theta = math.acos(x)
    s = math.sin(theta)
    if s == 0.0:
        return (k + 1) * math.cos(k * theta)
    return math.sin((k + 1) * theta) / s


def cheb_t_rec(k: int, x: float) -> float:
    """Integer-order T_k by the three-term recurrence (cross-check only)."""
    if k < 0:
        raise ValueError(f"order must be >= 0, got {k}")
    prev, cur = 1.0, x
    if k == 0:
        return prev
    for _ in range(k - 1):
        prev, cur = cur, 2.0 * x * cur - prev
    return cur


def cheb_u_rec(k: int, x: float) -> float:
    """Integer-order U_k by the three-term recurrence (cross-check only)."""
    if k < -1:
        raise ValueError(f"order must be >= -1, got {k}")
    prev, cur = 0.0, 1.0  # U_{-1}, U_0
    if k == -1:
        return prev
    for _ in range(k):
        prev, cur = cur, 2.0 * x * cur - prev
    return cur
