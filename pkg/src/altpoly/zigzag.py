"""Alternating-permutation counts and their asymptotics.

The only non-exact arithmetic in the package lives here, and it is
interval-bounded: asymptotic ratios are evaluated in mpmath's interval
arithmetic at high precision, so every reported digit is certified.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

import mpmath

from .rationals import normalize_rat, rat

_BRUTE_BOUND = 10


@dataclass(frozen=True)
class ZigzagTable:
    """tilde[n] counts all alternating permutations of n letters (both
    possible starts); euler[n] halves that for n >= 2, matching the
    sec+tan coefficients."""

    tilde: tuple
    euler: tuple


def zigzag_numbers(N: int) -> ZigzagTable:
    """Boustrophedon recurrence, exact integers for 0..N."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    euler = []
    row = [1]
    for n in range(N + 1):
        euler.append(row[-1])
        new = [0]
        for k in range(n + 1):
            new.append(new[-1] + row[n - k])
        row = new
    tilde = tuple(e if n < 2 else 2 * e for n, e in enumerate(euler))
    return ZigzagTable(tilde, tuple(euler))


def _is_alternating(perm) -> bool:
    last = None
    for k in range(len(perm) - 1):
        direction = perm[k + 1] > perm[k]
        if direction == last:
            return False
        last = direction
    return True


def brute_alternating_count(n: int) -> int:
    """Direct filter over all n! permutations (the oracle for the table)."""
    if n < 0 or n > _BRUTE_BOUND:
        raise ValueError(f"permutation brute force bounded at n={_BRUTE_BOUND}")
    if n == 0:
        return 1
    return sum(1 for p in permutations(range(1, n + 1)) if _is_alternating(p))


def sec_tan_series(N: int) -> list:
    """Exact Taylor coefficients of sec x + tan x up to x^N.

    Computed by power-series division (sec = 1/cos, tan = sin/cos) rather
    than from the zigzag table, so the two routes check each other.
    """
    if N < 0:
        raise ValueError("N must be nonnegative")
    n = N + 1
    cos = [rat(0)] * n
    sin = [rat(0)] * n
    fact = 1
    for k in range(n):
        if k:
            fact *= k
        if k % 2 == 0:
            cos[k] = rat((-1)**(k // 2), fact)
        else:
            sin[k] = rat((-1)**(k // 2), fact)
    sec = [rat(0)] * n
    sec[0] = 1 / cos[0]
    for k in range(1, n):
        acc = rat(0)
        for i in range(1, k + 1):
            acc += cos[i] * sec[k - i]
        sec[k] = -acc / cos[0]
    out = []
    for k in range(n):
        tan_k = sum((sin[i] * sec[k - i] for i in range(k + 1)), rat(0))
        out.append(normalize_rat(sec[k] + tan_k))
    return out


def expected_count(n: int):
    """Exact mean number of alternating words in one bracketed monomial of
    n distinct variables, averaged over variable orderings: 2^{n-1} E~_n/n!."""
    if n < 1:
        raise ValueError("n must be positive")
    tilde = zigzag_numbers(n).tilde[n]
    fact = 1
    for k in range(2, n + 1):
        fact *= k
    return normalize_rat(rat(2**(n - 1) * tilde, fact))


@dataclass(frozen=True)
class AsymptoticReport:
    """Interval-certified ratios against the limiting expressions."""

    n: int
    density_ratio: tuple   # (lo, hi) floats: (E~_n/n!) / (4 (2/pi)^{n+1})
    expected_ratio: tuple  # (lo, hi) floats: expected_count(n) / (4/pi)^{n+1}

    def density_error(self) -> float:
        lo, hi = self.density_ratio
        return max(abs(lo - 1.0), abs(hi - 1.0))

    def expected_error(self) -> float:
        lo, hi = self.expected_ratio
        return max(abs(lo - 1.0), abs(hi - 1.0))


def asymptotic_check(n: int, digits: int = 12) -> AsymptoticReport:
    """Certified ratio of the exact counts to their asymptotic forms."""
    if n < 2:
        raise ValueError("n must be at least 2")
    iv = mpmath.iv
    old_prec = iv.prec
    try:
        iv.prec = max(80, int(digits * 3.5) + 40 + 4 * n)
        tilde = zigzag_numbers(n).tilde[n]
        fact = 1
        for k in range(2, n + 1):
            fact *= k
        density = iv.mpf(tilde) / iv.mpf(fact)
        two_over_pi = iv.mpf(2) / iv.pi
        r1 = density / (4 * two_over_pi**(n + 1))
        expected = expected_count(n)
        num = iv.mpf(int(rat(expected).numerator))
        den = iv.mpf(int(rat(expected).denominator))
        four_over_pi = iv.mpf(4) / iv.pi
        r2 = (num / den) / (four_over_pi**(n + 1))
        return AsymptoticReport(
            n,
            (float(mpmath.mpf(r1.a)), float(mpmath.mpf(r1.b))),
            (float(mpmath.mpf(r2.a)), float(mpmath.mpf(r2.b))),
        )
    finally:
        iv.prec = old_prec
