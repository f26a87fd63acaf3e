"""Reduction of Gromov-Witten brackets on E(2) to two family atoms.

Each bracket reduces either to a polynomial in the formal fiber degree
``d`` times one of ``GW_1(pt)`` (family, genus one, one point insertion)
and ``GW_0`` (family, genus zero, no insertions), to a pure number (for
brackets of the trivial class), or stays irreducible.

Rules, in the order they are tried:

* trivial class, genus 0: nonzero only for three plain insertions, where it
  is the triple intersection number;
* trivial class, genus 1: nonzero only for one insertion, where it is
  ``-(1/24) c1(alpha)``; ``c1 = 0`` on a K3 surface;
* trivial class, genus 2: ``<tau(a1), a2> = 0`` and ``<tau(a)> = 0`` when c1 = 0;
* a plain unit insertion kills a bracket without descendants;
* family, genus 0: a point insertion kills the bracket;
* family: a plain degree-2 insertion ``beta`` is removed with the factor
  ``beta . (S + d F)``;
* what remains must be one of the two atoms.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iproduct
from typing import Iterable, List, Optional, Sequence, Tuple

from .cohomology import CohBasis, CohClass, FamilyChoice

__all__ = [
    "PolyInD",
    "Insertion",
    "Correlator",
    "ReducedValue",
    "FAMILY",
    "ORDINARY",
    "reduce",
    "class_dot_A",
    "a_squared",
]

FAMILY = "family"
ORDINARY = "ordinary"

_ZERO = Fraction(0)


class PolyInD:
    """Univariate polynomial in ``d`` with exact rational coefficients."""

    __slots__ = ("c",)

    def __init__(self, coeffs: Iterable = ()):
        c = [Fraction(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.c = tuple(c)

    @classmethod
    def const(cls, x) -> "PolyInD":
        return cls([x])

    @property
    def degree(self) -> int:
        return len(self.c) - 1

    def coeff(self, k: int) -> Fraction:
        return self.c[k] if 0 <= k < len(self.c) else _ZERO

    def is_zero(self) -> bool:
        return not self.c

    def __bool__(self):
        return bool(self.c)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = PolyInD.const(other)
        if not isinstance(other, PolyInD):
            return NotImplemented
        return self.c == other.c

    def __hash__(self):
        return hash(self.c)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = PolyInD.const(other)
        n = max(len(self.c), len(other.c))
        return PolyInD(self.coeff(k) + other.coeff(k) for k in range(n))

    __radd__ = __add__

    def __neg__(self):
        return PolyInD(-x for x in self.c)

    def __sub__(self, other):
        return self + (-other if isinstance(other, PolyInD) else -Fraction(other))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return PolyInD(other * x for x in self.c)
        if not self.c or not other.c:
            return PolyInD()
        out = [_ZERO] * (len(self.c) + len(other.c) - 1)
        for i, a in enumerate(self.c):
            if a:
                for j, b in enumerate(other.c):
                    out[i + j] += a * b
        return PolyInD(out)

    __rmul__ = __mul__

    def __call__(self, d):
        acc = _ZERO
        for x in reversed(self.c):
            acc = acc * d + x
        return acc

    def __str__(self):
        if not self.c:
            return "0"
        parts = []
        for k in range(len(self.c) - 1, -1, -1):
            a = self.c[k]
            if not a:
                continue
            mag = abs(a)
            mono = "" if k == 0 else ("d" if k == 1 else f"d^{k}")
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            sign = "-" if a < 0 else "+"
            if not parts:
                parts.append(body if sign == "+" else f"-{body}")
            else:
                parts.append(f"{sign} {body}")
        return " ".join(parts)

    def __repr__(self):
        return f"PolyInD({str(self)!r})"


@dataclass(frozen=True)
class Insertion:
    cls: CohClass
    level: int = 0

    def __str__(self):
        return f"tau({self.cls})" if self.level else str(self.cls)


@dataclass(frozen=True)
class Correlator:
    """A family bracket ``GW^H_{S+dF,g}(...)`` or a trivial-class bracket."""

    kind: str
    genus: int
    insertions: Tuple[Insertion, ...] = ()

    def __post_init__(self):
        if self.kind not in (FAMILY, ORDINARY):
            raise ValueError(f"unknown correlator kind {self.kind!r}")
        if not 0 <= self.genus <= 2:
            raise ValueError("only genus 0, 1, 2 brackets occur")
        for ins in self.insertions:
            if not 0 <= ins.level <= 2:
                raise ValueError("descendant level must be 0, 1 or 2")

    def __str__(self):
        head = "fam" if self.kind == FAMILY else "ord"
        return f"{head}{self.genus}(" + ", ".join(str(i) for i in self.insertions) + ")"


@dataclass(frozen=True)
class ReducedValue:
    """``scalar + gw1pt * GW_1(pt) + gw0 * GW_0`` with polynomial coefficients."""

    scalar: PolyInD = field(default_factory=PolyInD)
    gw1pt: PolyInD = field(default_factory=PolyInD)
    gw0: PolyInD = field(default_factory=PolyInD)
    irreducible_terms: Tuple[Tuple[str, str], ...] = ()

    @property
    def coeff_gw1pt(self) -> PolyInD:
        return self.gw1pt

    @property
    def coeff_gw0(self) -> PolyInD:
        return self.gw0

    @property
    def fully_reduced(self) -> bool:
        return not self.irreducible_terms

    def is_zero(self) -> bool:
        return self.fully_reduced and not (self.scalar or self.gw1pt or self.gw0)

    def __add__(self, other: "ReducedValue") -> "ReducedValue":
        return ReducedValue(self.scalar + other.scalar, self.gw1pt + other.gw1pt,
                            self.gw0 + other.gw0, self.irreducible_terms + other.irreducible_terms)

    def scale(self, k) -> "ReducedValue":
        if not isinstance(k, PolyInD):
            k = PolyInD.const(k)
        return ReducedValue(self.scalar * k, self.gw1pt * k, self.gw0 * k, self.irreducible_terms)

    def times(self, other: "ReducedValue") -> "ReducedValue":
        """Product where at most one side carries atoms."""
        if self.gw1pt or self.gw0:
            if other.gw1pt or other.gw0:
                raise ValueError("product of two family atoms is not linear in the atoms")
            return self.scale(other.scalar)
        return other.scale(self.scalar)

    def as_dict(self) -> dict:
        return {
            "gw1pt": str(self.gw1pt),
            "gw0": str(self.gw0),
            "irreducible": [f"{src}: {term}" if src else term for src, term in self.irreducible_terms],
        }


ZERO_VALUE = ReducedValue()


def class_dot_A(beta: CohClass, family: FamilyChoice, basis: CohBasis) -> PolyInD:
    """``beta . (S + d F)`` as a polynomial of degree <= 1 in d."""
    return PolyInD([basis.pair(beta, family.S), basis.pair(beta, family.F)])


def a_squared(family: FamilyChoice, basis: CohBasis) -> PolyInD:
    S, F = family.S, family.F
    return PolyInD([basis.pair(S, S), 2 * basis.pair(S, F), basis.pair(F, F)])


def _note(trace: Optional[Counter], rule: str):
    if trace is not None:
        trace[rule] += 1


def _expand(c: Correlator) -> List[Tuple[Correlator, Fraction]]:
    """Split inhomogeneous insertions by multilinearity."""
    if all(ins.cls.degree is not None for ins in c.insertions):
        return [(c, Fraction(1))]
    choices = []
    for ins in c.insertions:
        pieces = ins.cls.components()
        if not pieces:
            return []
        choices.append([Insertion(p, ins.level) for p in pieces])
    return [(Correlator(c.kind, c.genus, tuple(combo)), Fraction(1)) for combo in iproduct(*choices)]


def _reduce_ordinary(c: Correlator, basis: CohBasis, trace) -> Optional[Fraction]:
    ins = c.insertions
    k = len(ins)
    has_desc = any(i.level for i in ins)
    if c.genus == 0 and not has_desc:
        if k != 3:
            _note(trace, "ord-g0-selection")
            return _ZERO
        _note(trace, "ord-g0-triple")
        return basis.integrate(*(i.cls for i in ins))
    if c.genus == 1 and not has_desc:
        _note(trace, "ord-g1-c1")
        if k != 1:
            return _ZERO
        return Fraction(-1, 24) * basis.pair(basis.c1, ins[0].cls)
    if c.genus == 2:
        levels = sorted(i.level for i in ins)
        if k == 2 and levels[0] == 0 and levels[1] > 0:
            _note(trace, "ord-g2-descendant")
            return _ZERO
        if k == 1 and levels[0] > 0:
            # -c1(alpha) * (Hodge integral); c1 = 0
            _note(trace, "ord-g2-descendant")
            return -basis.pair(basis.c1, ins[0].cls)
    if not has_desc and any(i.cls.degree == 0 for i in ins):
        _note(trace, "unit-insertion")
        return _ZERO
    return None


def _reduce_family(c: Correlator, family: FamilyChoice, basis: CohBasis, trace) -> Optional[ReducedValue]:
    ins = list(c.insertions)
    if any(i.level for i in ins):
        return None
    if any(i.cls.degree == 0 for i in ins):
        _note(trace, "unit-insertion")
        return ZERO_VALUE
    if c.genus == 0 and any(i.cls.degree == 4 for i in ins):
        _note(trace, "family-g0-point")
        return ZERO_VALUE
    factor = PolyInD.const(1)
    rest = []
    for i in ins:
        if i.cls.degree == 2:
            _note(trace, "divisor")
            factor = factor * class_dot_A(i.cls, family, basis)
        else:
            rest.append(i)
    if not factor:
        return ZERO_VALUE
    if c.genus == 1 and len(rest) == 1 and rest[0].cls.degree == 4:
        _note(trace, "atom-gw1pt")
        return ReducedValue(gw1pt=factor * rest[0].cls.point)
    if c.genus == 0 and not rest:
        _note(trace, "atom-gw0")
        return ReducedValue(gw0=factor)
    return None


def reduce(c: Correlator, family: FamilyChoice, basis: CohBasis,
           trace: Counter = None, source: str = "") -> ReducedValue:
    """Reduce one bracket; irreducible pieces are returned as data."""
    total = ZERO_VALUE
    for piece, weight in _expand(c):
        if piece.kind == ORDINARY:
            v = _reduce_ordinary(piece, basis, trace)
            val = ReducedValue(scalar=PolyInD.const(v)) if v is not None else None
        else:
            val = _reduce_family(piece, family, basis, trace)
        if val is None:
            _note(trace, "irreducible")
            val = ReducedValue(irreducible_terms=((source, str(piece)),))
        total = total + val.scale(weight)
    return total


def reduce_product(factors: Sequence[Correlator], family: FamilyChoice, basis: CohBasis,
                   trace: Counter = None, source: str = "") -> ReducedValue:
    """Reduce a product of brackets, trivial-class factors first.

    A vanishing trivial-class factor kills the product before the family
    factor is looked at, so irreducible family brackets multiplied by zero
    never surface.
    """
    ordered = sorted(factors, key=lambda c: c.kind != ORDINARY)
    values = []
    for c in ordered:
        v = reduce(c, family, basis, trace, source)
        if v.is_zero():
            return ZERO_VALUE
        values.append(v)
    if not all(v.fully_reduced for v in values):
        text = " * ".join(str(x) for x in factors)
        return ReducedValue(irreducible_terms=((source, text),))
    acc = ReducedValue(scalar=PolyInD.const(1))
    for v in values:
        acc = acc.times(v)
    return acc
