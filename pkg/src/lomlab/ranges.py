"""Dimension-sequence calculus for operator-range isomorphism.

A dense operator range is modeled by the sequence dim H_k of its graded
pieces, with weight 2^-k attached to level k; index 0 may carry an infinite
dimension.  Two ranges are isomorphic iff there is a shift p making the
windowed dimension sums of each sequence dominate the other's.  The check
over a finite horizon is semi-decidable: the verdict records exactly what was
established (a working p, a witness pair violating every p up to the bound,
or undecided with the search bounds).

All partial sums are exact integer arithmetic; witnesses can be re-verified
by independent summation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import mpmath

from .errors import BadExponentError

__all__ = [
    "INFINITY",
    "DimSequence",
    "IsoVerdict",
    "range_weights",
    "check_isomorphism",
    "power_family",
    "asymptotic_certificate",
    "shift_right",
    "window_sum",
    "witness_violates",
]

INFINITY = math.inf


@dataclass(frozen=True)
class DimSequence:
    """Nonnegative integer dimensions indexed from 0; only index 0 may be INFINITY.

    Indices beyond the materialized horizon are unknown (not zero); indices
    below 0 are implicitly zero.
    """

    dims: tuple

    def __post_init__(self):
        if not self.dims:
            raise ValueError("a dimension sequence needs at least one entry")
        cleaned = []
        for idx, d in enumerate(self.dims):
            if d == INFINITY:
                if idx != 0:
                    raise ValueError("INFINITY is only allowed at index 0")
                cleaned.append(INFINITY)
                continue
            di = int(d)
            if di != d or di < 0:
                raise ValueError(f"dims[{idx}] = {d!r} is not a nonnegative integer")
            cleaned.append(di)
        object.__setattr__(self, "dims", tuple(cleaned))

    @property
    def horizon(self) -> int:
        return len(self.dims) - 1

    @property
    def infinite_head(self) -> bool:
        return self.dims[0] == INFINITY

    def prefix_sums(self):
        """Integer prefix sums with the infinite head counted as zero."""
        out = [0] * (len(self.dims) + 1)
        for idx, d in enumerate(self.dims):
            out[idx + 1] = out[idx] + (0 if d == INFINITY else d)
        return out


def window_sum(seq: DimSequence, lo: int, hi: int):
    """Exact sum of dims over indices lo..hi (inclusive), by direct summation.

    Negative indices contribute zero; any window containing an infinite head
    is INFINITY.  Raises if the window runs past the materialized horizon.
    """
    if hi > seq.horizon:
        raise ValueError(f"window end {hi} beyond the materialized horizon {seq.horizon}")
    if hi < lo:
        return 0
    if lo <= 0 and seq.infinite_head:
        return INFINITY
    total = 0
    for k in range(max(lo, 0), hi + 1):
        total += seq.dims[k]
    return total


@dataclass(frozen=True)
class IsoVerdict:
    """Outcome of the windowed-sum comparison.

    ``verdict`` is one of "isomorphic" (with the smallest working shift p),
    "non_isomorphic" (with a witness pair (n, m) and the direction whose sum
    is too large, valid for every p <= p_max), or "undecided".
    """

    verdict: str
    p: Optional[int] = None
    witness: Optional[tuple] = None  # (n, m, direction)
    p_max: int = 0
    horizon: int = 0

    @property
    def isomorphic(self) -> bool:
        return self.verdict == "isomorphic"


def range_weights(seq: DimSequence):
    """Diagonal model of the range-defining operator: [(2^-k, dims[k])]."""
    return [(2.0 ** (-k), seq.dims[k]) for k in range(len(seq.dims))]


def _direction_violation(h: DimSequence, k: DimSequence, p: int, m_max: int):
    """First pair (n, m) with sum_{n..m} h > sum_{n-p..m+p} k, else None.

    Only pairs whose windows stay within both materialized horizons are
    examined.  Returns ``(found_pair_or_None, checked_any)``.
    """
    ph = h.prefix_sums()
    pk = k.prefix_sums()
    m_top = min(m_max, h.horizon, k.horizon - p)
    if m_top < 1:
        return None, False

    # LHS(n, m) = H[n..m], RHS = K[n-p..m+p].  For finite comparisons define
    # G(m) = PH[m] - PK[m+p] and D(n) = PH[n-1] - PK[n-p-1]; a violation is
    # G(m) > min_{0 <= n < m} D(n).  Infinite heads: LHS infinite only at
    # n = 0; RHS infinite for n <= p.
    def d_val(n):
        lo = n - p - 1
        return ph[n] - (pk[lo + 1] if lo >= 0 else 0)

    if h.infinite_head and not k.infinite_head:
        # n = 0 makes the left window infinite while the right stays finite.
        return (0, 1), True

    checked = False
    best_n = None
    best_d = None
    for m in range(1, m_top + 1):
        n = m - 1
        # n-candidates with an infinite RHS never violate; skip n <= p when
        # the right head is infinite, and n = 0 when the left head is infinite
        # (both infinite: satisfied).
        skip_low = 0
        if k.infinite_head:
            skip_low = p + 1
        elif h.infinite_head:
            skip_low = 1
        if n >= skip_low:
            dn = d_val(n)
            if best_d is None or dn < best_d:
                best_d = dn
                best_n = n
        if best_d is None:
            continue
        checked = True
        g = ph[m + 1] - pk[m + p + 1]
        if g > best_d:
            return (best_n, m), True
    return None, checked


def check_isomorphism(h: DimSequence, k: DimSequence, p_max: int, horizon: int) -> IsoVerdict:
    """Compare two dimension sequences over all window pairs up to ``horizon``.

    Searches for the smallest p in 0..p_max for which both directional
    inequalities hold on every checkable pair; failing that, produces a single
    witness pair violating one direction for every p <= p_max (a window
    violating at p_max violates at all smaller p, since the dominating window
    only shrinks).  If neither can be established within the materialized
    horizons, the verdict is undecided.
    """
    if horizon < 2:
        raise ValueError("horizon must be at least 2")
    if p_max < 0:
        raise ValueError("p_max must be nonnegative")
    for p in range(p_max + 1):
        fail_hk, checked_hk = _direction_violation(h, k, p, horizon)
        fail_kh, checked_kh = _direction_violation(k, h, p, horizon)
        if fail_hk is None and fail_kh is None and checked_hk and checked_kh:
            return IsoVerdict("isomorphic", p=p, p_max=p_max, horizon=horizon)
    fail_hk, _ = _direction_violation(h, k, p_max, horizon)
    if fail_hk is not None:
        n, m = fail_hk
        return IsoVerdict("non_isomorphic", witness=(n, m, "left_exceeds_right"),
                          p_max=p_max, horizon=horizon)
    fail_kh, _ = _direction_violation(k, h, p_max, horizon)
    if fail_kh is not None:
        n, m = fail_kh
        return IsoVerdict("non_isomorphic", witness=(n, m, "right_exceeds_left"),
                          p_max=p_max, horizon=horizon)
    return IsoVerdict("undecided", p_max=p_max, horizon=horizon)


def witness_violates(h: DimSequence, k: DimSequence, n: int, m: int, p: int,
                     direction: str) -> bool:
    """Re-check a witness pair at shift p by direct summation (no prefix arrays)."""
    if direction == "left_exceeds_right":
        big, small = h, k
    elif direction == "right_exceeds_left":
        big, small = k, h
    else:
        raise ValueError(f"unknown direction {direction!r}")
    lhs = window_sum(big, n, m)
    rhs = window_sum(small, n - p, m + p)
    if lhs == INFINITY:
        return rhs != INFINITY
    if rhs == INFINITY:
        return False
    return lhs > rhs


def _integer_root(x: int, n: int) -> int:
    """floor(x ** (1/n)) by Newton iteration on integers."""
    if x < 0 or n < 1:
        raise ValueError("integer root needs x >= 0 and n >= 1")
    if x in (0, 1) or n == 1:
        return x
    g = 1 << ((x.bit_length() + n - 1) // n)
    while True:
        ng = ((n - 1) * g + x // g ** (n - 1)) // n
        if ng >= g:
            break
        g = ng
    while g ** n > x:
        g -= 1
    while (g + 1) ** n <= x:
        g += 1
    return g


def _floor_power(k: int, t: float) -> int:
    """Exact floor(k ** t) for k >= 1.

    Exponents whose exact binary value has a small denominator go through an
    integer root (exact, so integer-valued powers like 4**2.5 floor
    correctly); other exponents are evaluated with 50-digit working precision
    and a guard band.
    """
    if k == 1:
        return 1
    frac = Fraction(t)
    if frac.denominator == 1:
        return k ** frac.numerator
    if frac.denominator <= 64:
        return _integer_root(k ** frac.numerator, frac.denominator)
    with mpmath.workdps(50):
        val = mpmath.power(k, mpmath.mpf(t))
        return int(mpmath.floor(val + mpmath.mpf("1e-30")))


def power_family(t: float, horizon: int) -> DimSequence:
    """Sequence with an infinite head and dims[k] = floor(k^t) for k >= 1."""
    if not t > 1:
        raise BadExponentError(f"exponent must exceed 1, got {t}")
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    dims = [INFINITY] + [_floor_power(k, t) for k in range(1, horizon + 1)]
    return DimSequence(tuple(dims))


def asymptotic_certificate(t: float, r: float, p: int, horizon: int) -> Optional[int]:
    """Smallest m <= horizon with sum_{k=p+1..m} floor(k^t) > sum_{k=1..m+p} floor(k^r).

    Such an m concretely violates the window inequality at shift p for the two
    power families; absence within the horizon is reported as None, not as
    equality of the families.
    """
    if not (t > r > 1):
        raise BadExponentError(f"need t > r > 1, got t={t}, r={r}")
    if p < 0:
        raise ValueError("p must be nonnegative")
    left = 0
    right = sum(_floor_power(k, r) for k in range(1, p + 1))
    for m in range(p + 1, horizon + 1):
        left += _floor_power(m, t)
        right += _floor_power(m + p, r)
        if left > right:
            return m
    return None


def shift_right(seq: DimSequence, s: int) -> DimSequence:
    """New sequence with dims'[k] = dims[k - s] (zeros in front).

    Only defined for finite-headed sequences: shifting would move an infinite
    head to a positive index.
    """
    if s < 0:
        raise ValueError("shift must be nonnegative")
    if seq.infinite_head and s > 0:
        raise ValueError("cannot shift a sequence with an infinite head")
    return DimSequence((0,) * s + seq.dims)
