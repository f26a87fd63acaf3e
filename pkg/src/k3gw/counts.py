"""Generating functions of genus 0 and genus 1 family invariants of E(2).

Conventions.  ``s`` is the section class (s.s = -2) and ``f`` the fiber
class (f.f = 0, s.f = 1).  The three families of curve classes are

* ``N``: the primitive classes ``s + d f`` (square 2d - 2),
* ``P``: the primitive classes ``(s - 3f) + d (2f)`` (square 4d - 8),
* ``M``: the index-two classes ``2s + d f`` for even d, together with the
  primitive ones for odd d (square 4d - 8).

``P`` is obtained from ``N`` by deformation invariance: ``(s-3f) + 2d f``
and ``s + (2d-3) f`` are both primitive with the same square.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import List, Optional

from .qseries import CATALOG, SeriesCatalog, cover_count
from .series import PowerSeries, compose_power, reindex, theta

__all__ = [
    "CurveClass",
    "FamilySeries",
    "CountRow",
    "FAMILY_IDS",
    "n0",
    "n1",
    "p0",
    "p1",
    "d0",
    "m0",
    "m1_theorem",
    "m1_ode",
    "h1_from_ode",
    "gyz",
    "family_series",
    "n1_index2",
    "table",
]


@dataclass(frozen=True)
class CurveClass:
    """The class ``a s + b f`` in H_2(E(2))."""

    a: int
    b: int

    @property
    def square(self) -> int:
        sq = -2 * self.a * self.a + 2 * self.a * self.b
        assert sq % 2 == 0
        return sq

    @property
    def index(self) -> int:
        return gcd(self.a, self.b)

    @property
    def is_primitive(self) -> bool:
        return self.index == 1

    def __add__(self, other: "CurveClass") -> "CurveClass":
        return CurveClass(self.a + other.a, self.b + other.b)

    def __rmul__(self, k: int) -> "CurveClass":
        return CurveClass(k * self.a, k * self.b)

    def dot(self, other: "CurveClass") -> int:
        return -2 * self.a * other.a + self.a * other.b + self.b * other.a


FAMILY_IDS = ("N0", "N1", "P0", "P1", "D0", "M0", "M1_theorem", "M1_ode", "GYZ1")


@dataclass(frozen=True)
class FamilySeries:
    id: str
    series: PowerSeries
    provenance: str


@dataclass(frozen=True)
class CountRow:
    e: int
    d: int
    n1_index1: Fraction
    n1_index2: Fraction
    agree: bool


def _cat(catalog: Optional[SeriesCatalog]) -> SeriesCatalog:
    return CATALOG if catalog is None else catalog


def _half_order(order: int) -> int:
    # order of N needed so that reindex(N, 2, -3) reaches ``order``
    return max(order, 2 * order - 3)


def n0(order: int, catalog: SeriesCatalog = None) -> PowerSeries:
    return _cat(catalog).get("eta24_inverse", order)


def n1(order: int, catalog: SeriesCatalog = None) -> PowerSeries:
    cat = _cat(catalog)
    return theta(cat.get("g2", order)) * n0(order, cat)


def p0(order: int, catalog: SeriesCatalog = None) -> PowerSeries:
    return reindex(n0(_half_order(order), catalog), 2, -3).truncate(order)


def p1(order: int, catalog: SeriesCatalog = None) -> PowerSeries:
    return reindex(n1(_half_order(order), catalog), 2, -3).truncate(order)


def d0(order: int, catalog: SeriesCatalog = None) -> PowerSeries:
    """Double-cover part ``N0(t^2)/8`` of M0."""
    return compose_power(n0(order, catalog), 2).scale(Fraction(1, 8))


def m0(order: int, catalog: SeriesCatalog = None) -> PowerSeries:
    return p0(order, catalog) + d0(order, catalog)


def m1_theorem(order: int, catalog: SeriesCatalog = None) -> PowerSeries:
    """``P1(t) + 2 N1(t^2)``."""
    return p1(order, catalog) + 2 * compose_power(n1(order, catalog), 2)


def h1_from_ode(h0: PowerSeries, g2_series: PowerSeries = None) -> PowerSeries:
    """Genus-one series of a family, solved from its genus-zero series.

    Uses the second-order relation

        (1/9) t^2 H0'' - (1/3) t H0' + (4/9) H0 - (8/3) H1
            = (20/3) G2 t H0' - (64 G2^2 + (40/3) G2 - 8 t G2') H0

    and returns H1 at the order of ``h0``.
    """
    if h0.order < 2:
        raise ValueError("h1_from_ode needs a genus-zero series of order >= 2")
    g = CATALOG.get("g2", h0.order) if g2_series is None else g2_series.truncate(h0.order)
    th = theta(h0)
    t2_second = theta(th) - th
    lhs = t2_second.scale(Fraction(1, 9)) - th.scale(Fraction(1, 3)) + h0.scale(Fraction(4, 9))
    potential = 64 * (g * g) + g.scale(Fraction(40, 3)) - 8 * theta(g)
    rhs = (g * th).scale(Fraction(20, 3)) - potential * h0
    return (lhs - rhs).scale(Fraction(3, 8))


def m1_ode(order: int, catalog: SeriesCatalog = None) -> PowerSeries:
    return h1_from_ode(m0(order, catalog), _cat(catalog).get("g2", order))


def gyz(order: int, catalog: SeriesCatalog = None) -> PowerSeries:
    """``t G2'(t) prod (1 - t^l)^(-24)``, built straight from its factors."""
    cat = _cat(catalog)
    return theta(cat.get("g2", order)) * cat.get("eta24_inverse", order)


_BUILDERS = {
    "N0": (n0, "eta24_inverse"),
    "N1": (n1, "theta(G2) * N0"),
    "P0": (p0, "reindex(N0, 2, -3)"),
    "P1": (p1, "reindex(N1, 2, -3)"),
    "D0": (d0, "N0(t^2) / 8"),
    "M0": (m0, "P0 + D0"),
    "M1_theorem": (m1_theorem, "P1 + 2 N1(t^2)"),
    "M1_ode": (m1_ode, "h1_from_ode(M0)"),
    "GYZ1": (gyz, "t G2'(t) * eta24_inverse"),
}


def family_series(id: str, order: int, catalog: SeriesCatalog = None) -> FamilySeries:
    build, recipe = _BUILDERS[id]
    return FamilySeries(id, build(order, catalog), recipe)


def n1_index2(e: int, m1: PowerSeries = None, n1_series: PowerSeries = None) -> Fraction:
    """Elliptic curve count for the index-two class of square 8e - 8.

    ``m1[2e]`` counts genus-one maps; each curve in the primitive half class
    is hit by ``cover_count(2) = 3`` double covers but counts once.
    """
    if e < 1:
        raise ValueError("e must be positive")
    if m1 is None:
        m1 = m1_theorem(2 * e)
    if n1_series is None:
        n1_series = n1(e)
    if 2 * e > m1.order or e > n1_series.order:
        raise IndexError(f"e={e} needs M1 to order {2 * e} and N1 to order {e}")
    return m1[2 * e] - (cover_count(2) - 1) * n1_series[e]


def table(max_e: int, m1: PowerSeries = None, n1_series: PowerSeries = None,
          catalog: SeriesCatalog = None) -> List[CountRow]:
    """Rows ``e = 1..max_e`` comparing N1(d, 1) and N1(d, 2) at d = 4e - 3."""
    if max_e <= 0:
        return []
    need_n = 4 * max_e - 3
    if m1 is None:
        m1 = m1_theorem(2 * max_e, catalog)
    if n1_series is None:
        n1_series = n1(need_n, catalog)
    if m1.order < 2 * max_e or n1_series.order < need_n:
        raise ValueError(f"max_e={max_e} needs M1 to order {2 * max_e} and N1 to order {need_n}")
    rows = []
    for e in range(1, max_e + 1):
        d = 4 * e - 3
        idx1 = n1_series[d]
        idx2 = n1_index2(e, m1, n1_series)
        rows.append(CountRow(e, d, idx1, idx2, idx1 == idx2))
    return rows
