"""Divisor sums, the weight-two Eisenstein series and eta-type products."""

from __future__ import annotations

import threading
from fractions import Fraction
from functools import lru_cache
from math import isqrt
from typing import Callable, Dict

from .series import PowerSeries, compose_power, invert, mul, theta

__all__ = [
    "divisor_sigma",
    "cover_count",
    "g2",
    "euler_product",
    "eta24_inverse",
    "eta24_inverse_oracle",
    "f_combo",
    "SeriesCatalog",
    "CATALOG",
]

G2_CONSTANT = Fraction(-1, 24)


@lru_cache(maxsize=None)
def divisor_sigma(d: int) -> int:
    """Sum of the positive divisors of ``d``."""
    if d < 1:
        raise ValueError(f"divisor_sigma is defined for d >= 1, got {d}")
    total = 0
    for k in range(1, isqrt(d) + 1):
        if d % k == 0:
            total += k
            if k * k != d:
                total += d // k
    return total


def cover_count(r: int) -> int:
    """Number of connected genus-one degree-``r`` covers of a fixed elliptic curve.

    This is the divisor sum sigma(r) (index-r sublattices of Z^2), so
    ``cover_count(2) == 3``.
    """
    if r < 1:
        raise ValueError("cover degree must be positive")
    return divisor_sigma(r)


def g2(order: int) -> PowerSeries:
    """``G2(t) = -1/24 + sum_{d>=1} sigma(d) t^d``."""
    return PowerSeries([G2_CONSTANT] + [divisor_sigma(d) for d in range(1, order + 1)])


def euler_product(order: int) -> PowerSeries:
    """``prod_{l=1}^{order} (1 - t^l)``, one truncated factor at a time."""
    c = [0] * (order + 1)
    c[0] = 1
    for l in range(1, order + 1):
        # multiply by (1 - t^l): new[n] = old[n] - old[n-l]
        c[l:] = [a - b for a, b in zip(c[l:], c)]
    return PowerSeries(c)


def eta24_inverse(order: int) -> PowerSeries:
    """``prod_{l>=1} (1 - t^l)^(-24)`` truncated at ``order``."""
    return invert(euler_product(order) ** 24)


def eta24_inverse_oracle(order: int) -> PowerSeries:
    """Independent route: partition numbers by the pentagonal recurrence,
    then the 24-fold Cauchy power with the reference product."""
    p = [0] * (order + 1)
    p[0] = 1
    for n in range(1, order + 1):
        s, k = 0, 1
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > n:
                break
            sign = 1 if k % 2 else -1
            s += sign * p[n - g1]
            g2_ = k * (3 * k + 1) // 2
            if g2_ <= n:
                s += sign * p[n - g2_]
            k += 1
        p[n] = s
    part = PowerSeries(p)
    out = part
    for _ in range(23):
        out = mul(out, part)
    return out


def f_combo(order: int, g2_series: PowerSeries = None) -> PowerSeries:
    """``32 G2(t^2)^2 - 40 G2(t^2) G2(t) + 8 G2(t)^2 - t G2'(t)``."""
    g = g2(order) if g2_series is None else g2_series.truncate(order)
    g_sq = compose_power(g, 2)
    return 32 * (g_sq * g_sq) - 40 * (g_sq * g) + 8 * (g * g) - theta(g)


class SeriesCatalog:
    """Order-aware cache of named series.

    An entry is rebuilt only when a larger order than the cached one is
    requested; smaller requests are served by truncation.
    """

    def __init__(self, builders: Dict[str, Callable[[int], PowerSeries]] = None):
        self._builders = dict(_DEFAULT_BUILDERS if builders is None else builders)
        self._cache: Dict[str, PowerSeries] = {}
        self._lock = threading.Lock()

    def names(self):
        return sorted(self._builders)

    def get(self, name: str, order: int) -> PowerSeries:
        cached = self._cache.get(name)
        if cached is not None and cached.order >= order:
            return cached.truncate(order)
        try:
            build = self._builders[name]
        except KeyError:
            raise KeyError(f"unknown series {name!r}") from None
        fresh = build(order)
        with self._lock:
            cur = self._cache.get(name)
            if cur is None or cur.order < fresh.order:
                self._cache[name] = fresh
        return fresh.truncate(order)


_DEFAULT_BUILDERS = {
    "g2": g2,
    "eta24_inverse": eta24_inverse,
    "F": f_combo,
}

CATALOG = SeriesCatalog()
