"""Explicit model of H^*(E(2); Q) with its intersection pairing.

The ring is ``Q.1 + L_Q + Q.pt`` with ``L`` the rank-22 lattice
``U^3 + E8(-1)^2``.  A class is stored by its three graded parts; the
lattice part is a coordinate vector with respect to the chosen lattice
basis, and the Gram matrix of that basis lives on :class:`CohBasis`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

__all__ = [
    "CohClass",
    "CohBasis",
    "FamilyChoice",
    "SingularGramError",
    "e8_cartan",
    "k3_lattice_gram",
    "build_basis",
    "diagonal_model",
    "random_unimodular_model",
    "family_choice",
    "FAMILY_NAMES",
]

_ZERO = Fraction(0)


class SingularGramError(ValueError):
    pass


@dataclass(frozen=True)
class CohClass:
    unit: Fraction
    lattice: Tuple[Fraction, ...]
    point: Fraction
    name: str = field(default="", compare=False)

    def components(self) -> List["CohClass"]:
        """Homogeneous pieces, dropping the zero ones."""
        zero_lat = tuple(_ZERO for _ in self.lattice)
        out = []
        if self.unit:
            out.append(CohClass(self.unit, zero_lat, _ZERO, self.name))
        if any(self.lattice):
            out.append(CohClass(_ZERO, self.lattice, _ZERO, self.name))
        if self.point:
            out.append(CohClass(_ZERO, zero_lat, self.point, self.name))
        return out

    @cached_property
    def degree(self) -> Optional[int]:
        """Real cohomological degree 0, 2 or 4 for a homogeneous class."""
        parts = [d for d, nz in ((0, self.unit), (2, any(self.lattice)), (4, self.point)) if nz]
        return parts[0] if len(parts) == 1 else None

    def is_zero(self) -> bool:
        return not (self.unit or self.point or any(self.lattice))

    def __add__(self, other: "CohClass") -> "CohClass":
        return CohClass(self.unit + other.unit,
                        tuple(a + b for a, b in zip(self.lattice, other.lattice)),
                        self.point + other.point)

    def __rmul__(self, k) -> "CohClass":
        k = Fraction(k)
        return CohClass(k * self.unit, tuple(k * a for a in self.lattice), k * self.point)

    def __sub__(self, other: "CohClass") -> "CohClass":
        return self + (-1) * other

    def __str__(self):
        return self.name or repr(self)


def _invert_matrix(m: Sequence[Sequence]) -> List[List[Fraction]]:
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise SingularGramError("intersection pairing is degenerate")
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                k = a[r][col]
                a[r] = [x - k * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def e8_cartan() -> List[List[int]]:
    """Cartan matrix of E8 (positive definite, even, unimodular)."""
    edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (2, 7)]
    c = [[2 * int(i == j) for j in range(8)] for i in range(8)]
    for i, j in edges:
        c[i][j] = c[j][i] = -1
    return c


def _block_sum(*blocks: Sequence[Sequence[int]]) -> List[List[int]]:
    n = sum(len(b) for b in blocks)
    out = [[0] * n for _ in range(n)]
    k = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                out[k + i][k + j] = x
        k += len(b)
    return out


_U = [[0, 1], [1, 0]]


def k3_lattice_gram() -> List[List[int]]:
    """Gram matrix of ``U + U + U + E8(-1) + E8(-1)``."""
    e8m = [[-x for x in row] for row in e8_cartan()]
    return _block_sum(_U, _U, _U, e8m, e8m)


class CohBasis:
    """The 24-element basis ``1, b_1..b_22, pt`` and its dual under the pairing."""

    def __init__(self, gram22: Sequence[Sequence], s: Sequence, f: Sequence):
        r = len(gram22)
        self.rank = r
        self.gram22 = tuple(tuple(Fraction(x) for x in row) for row in gram22)
        if any(self.gram22[i][j] != self.gram22[j][i] for i in range(r) for j in range(r)):
            raise ValueError("Gram matrix must be symmetric")
        self._rows = tuple(tuple((j, x) for j, x in enumerate(row) if x) for row in self.gram22)
        zero_lat = (_ZERO,) * r

        def lat(i):
            return tuple(Fraction(int(i == j)) for j in range(r))

        self.unit = CohClass(Fraction(1), zero_lat, _ZERO, "1")
        self.point = CohClass(_ZERO, zero_lat, Fraction(1), "pt")
        self.classes: Tuple[CohClass, ...] = (
            (self.unit,)
            + tuple(CohClass(_ZERO, lat(i), _ZERO, f"b{i + 1}") for i in range(r))
            + (self.point,)
        )
        inv = _invert_matrix(self.gram)
        # dual class H^a = sum_b inv[a][b] H_b so that <H_a, H^b> = delta
        self.duals: Tuple[CohClass, ...] = tuple(
            self._combine(inv[a], f"{self.classes[a].name}^") for a in range(len(self.classes))
        )
        self.s = CohClass(_ZERO, tuple(Fraction(x) for x in s), _ZERO, "s")
        self.f = CohClass(_ZERO, tuple(Fraction(x) for x in f), _ZERO, "f")
        self.c1 = CohClass(_ZERO, zero_lat, _ZERO, "c1")

    def _combine(self, coeffs, name) -> CohClass:
        lat = tuple(Fraction(c) for c in coeffs[1:-1])
        return CohClass(Fraction(coeffs[0]), lat, Fraction(coeffs[-1]), name)

    @property
    def gram(self) -> List[List[Fraction]]:
        """Full 24x24 pairing on ``classes``."""
        n = self.rank + 2
        g = [[_ZERO] * n for _ in range(n)]
        g[0][n - 1] = g[n - 1][0] = Fraction(1)
        for i in range(self.rank):
            for j in range(self.rank):
                g[i + 1][j + 1] = self.gram22[i][j]
        return g

    def lattice_pair(self, u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
        total = _ZERO
        for i, ui in enumerate(u):
            if ui:
                for j, g in self._rows[i]:
                    vj = v[j]
                    if vj:
                        total += ui * g * vj
        return total

    def pair(self, x: CohClass, y: CohClass) -> Fraction:
        """``integral of x cup y``."""
        return x.unit * y.point + x.point * y.unit + self.lattice_pair(x.lattice, y.lattice)

    def cup(self, x: CohClass, y: CohClass) -> CohClass:
        lat = tuple(x.unit * b + y.unit * a for a, b in zip(x.lattice, y.lattice))
        top = x.unit * y.point + x.point * y.unit + self.lattice_pair(x.lattice, y.lattice)
        return CohClass(x.unit * y.unit, lat, top)

    def integrate(self, *xs: CohClass) -> Fraction:
        if not xs:
            raise ValueError("nothing to integrate")
        degs = [x.degree for x in xs]
        if None not in degs:
            # homogeneous classes: only total degree 4 can integrate to nonzero
            if sum(degs) != 4:
                return _ZERO
            acc = Fraction(1)
            mid = []
            for x, dg in zip(xs, degs):
                if dg == 0:
                    acc *= x.unit
                elif dg == 4:
                    acc *= x.point
                else:
                    mid.append(x.lattice)
            if mid:
                acc *= self.lattice_pair(*mid)
            return acc
        acc = xs[0]
        for x in xs[1:]:
            acc = self.cup(acc, x)
        return acc.point

    def euler_trace(self) -> Fraction:
        """``sum_a integral H_a cup H^a``; equals the Euler characteristic."""
        return sum((self.pair(h, d) for h, d in zip(self.classes, self.duals)), _ZERO)


def build_basis(gram22: Sequence[Sequence] = None, s: Sequence = None,
                f: Sequence = None) -> CohBasis:
    """Basis of H^*(E(2)); defaults to U^3 + E8(-1)^2 with s = e1 - f1, f = f1."""
    if gram22 is None:
        gram22 = k3_lattice_gram()
        r = len(gram22)
        s = [1, -1] + [0] * (r - 2)
        f = [0, 1] + [0] * (r - 2)
    elif s is None or f is None:
        raise ValueError("a custom Gram matrix needs the coordinates of s and f")
    return CohBasis(gram22, s, f)


def diagonal_model() -> CohBasis:
    """``U + <-2>^20``: nondegenerate, not unimodular, same s and f."""
    g = _block_sum(_U, *[[[-2]] for _ in range(20)])
    return CohBasis(g, [1, -1] + [0] * 20, [0, 1] + [0] * 20)


def random_unimodular_model(seed: int = 0, steps: int = 60) -> CohBasis:
    """The standard lattice written in a random integral basis."""
    rng = random.Random(seed)
    g = k3_lattice_gram()
    r = len(g)
    p = [[int(i == j) for j in range(r)] for i in range(r)]
    for _ in range(steps):
        i, j = rng.sample(range(r), 2)
        k = rng.choice([-2, -1, 1, 2])
        # column op: new basis vector j gains k * old basis vector i
        for row in p:
            row[j] += k * row[i]
    new_g = [[sum(p[a][i] * g[a][b] * p[b][j] for a in range(r) for b in range(r) if p[a][i] and p[b][j])
              for j in range(r)] for i in range(r)]
    pinv = _invert_matrix(p)
    s_old = [1, -1] + [0] * (r - 2)
    f_old = [0, 1] + [0] * (r - 2)
    s_new = [sum(pinv[i][k] * s_old[k] for k in range(r)) for i in range(r)]
    f_new = [sum(pinv[i][k] * f_old[k] for k in range(r)) for i in range(r)]
    return CohBasis(new_g, s_new, f_new)


@dataclass(frozen=True)
class FamilyChoice:
    """A pair (S, F) with the curve classes A = S + d F."""

    name: str
    S: CohClass
    F: CohClass


FAMILY_NAMES = ("2s,f", "s-3f,2f")


def family_choice(name: str, basis: CohBasis) -> FamilyChoice:
    s, f = basis.s, basis.f
    if name == "2s,f":
        S, F = 2 * s, f
    elif name == "s-3f,2f":
        S, F = s - 3 * f, 2 * f
    else:
        raise ValueError(f"unknown family {name!r}; expected one of {FAMILY_NAMES}")
    return FamilyChoice(name, CohClass(S.unit, S.lattice, S.point, "S"),
                        CohClass(F.unit, F.lattice, F.point, "F"))
