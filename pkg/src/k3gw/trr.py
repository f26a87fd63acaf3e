"""Genus-two topological recursion for ``GW^H_{S+dF,2}(tau_1(F), tau_2(F))``.

The right-hand side is stored as data: a list of summands, each a
coefficient times a sum of products of brackets.  Inside a product,
``fam<g>(...)`` is a family bracket of the class S + dF and ``ord<g>(...)``
a bracket of the trivial class.  Insertion tokens:

    F        the fiber-type class F
    a, b     basis classes H_a, H_b (summed over the 24-element basis)
    a*, b*   the dual classes H^a, H^b
    tau X    a descendant insertion of X

Dual-basis sums are expanded over the concrete basis.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction as Q
from itertools import product as iproduct
from typing import Dict, List, Optional, Sequence, Tuple

from .cohomology import CohBasis, FamilyChoice, build_basis, family_choice
from .reducer import (FAMILY, ORDINARY, Correlator, Insertion, PolyInD, ReducedValue, ZERO_VALUE,
                      a_squared, class_dot_A, reduce_product)

__all__ = [
    "TRR_TERMS",
    "PF_TRR_TERMS",
    "Summand",
    "TrrEvaluation",
    "parse_product",
    "eval_terms",
    "eval_trr_rhs",
    "eval_pf_trr",
    "pf_trr2_check",
    "pf_trr3_value",
    "expected_closed_form",
    "completeness_poly",
    "a_squared_poly",
]


@dataclass(frozen=True)
class Summand:
    coeff: Q
    products: Tuple[str, ...]


def _s(coeff, *products) -> Summand:
    return Summand(Q(coeff), tuple(products))


# Note: the 23/240 and 2/48 summands repeat H_b where H^b would be the
# natural dual; they are kept as transcribed (both vanish either way).
TRR_TERMS: Tuple[Summand, ...] = (
    _s(2, "fam2(tau F, a) ord0(a*, F)", "ord2(tau F, a) fam0(a*, F)"),
    _s(-1, "fam0(F, a) ord0(F, b) ord2(a*, b*)"),
    _s(-1, "ord0(F, a) fam0(F, b) ord2(a*, b*)"),
    _s(-1, "ord0(F, a) ord0(F, b) fam2(a*, b*)"),
    _s(3, "fam0(F, F, a) ord2(tau a*)", "ord0(F, F, a) fam2(tau a*)"),
    _s(-3, "fam0(F, F, a) ord0(a*, b) ord2(b*)"),
    _s(-3, "ord0(F, F, a) fam0(a*, b) ord2(b*)"),
    _s(-3, "ord0(F, F, a) ord0(a*, b) fam2(b*)"),
    _s(Q(13, 10), "fam0(F, F, a, b) ord1(a*) ord1(b*)"),
    _s(Q(13, 10), "ord0(F, F, a, b) fam1(a*) ord1(b*)"),
    _s(Q(13, 10), "ord0(F, F, a, b) ord1(a*) fam1(b*)"),
    _s(Q(8, 5), "fam1(F, a) ord0(a*, F, b) ord1(b*)"),
    _s(Q(8, 5), "ord1(F, a) fam0(a*, F, b) ord1(b*)"),
    _s(Q(8, 5), "ord1(F, a) ord0(a*, F, b) fam1(b*)"),
    _s(Q(-4, 5), "fam0(F, F, a) ord1(a*, b) ord1(b*)"),
    _s(Q(-4, 5), "ord0(F, F, a) fam1(a*, b) ord1(b*)"),
    _s(Q(-4, 5), "ord0(F, F, a) ord1(a*, b) fam1(b*)"),
    _s(Q(23, 240), "fam0(F, F, a, a*, b) ord1(b)", "ord0(F, F, a, a*, b) fam1(b)"),
    _s(Q(2, 48), "fam0(F, a, a*, b) ord1(b, F)", "ord0(F, a, a*, b) fam1(b, F)"),
    _s(Q(-1, 80), "fam1(F, F, a) ord0(a*, b, b*)", "ord1(F, F, a) fam0(a*, b, b*)"),
    _s(Q(7, 30), "fam0(F, F, a, b) ord1(a*, b*)", "ord0(F, F, a, b) fam1(a*, b*)"),
    _s(Q(2, 30), "fam0(F, a, b) ord1(a*, b*, F)", "ord0(F, a, b) fam1(a*, b*, F)"),
    _s(Q(-1, 30), "fam0(F, F, a) ord1(a*, b, b*)", "ord0(F, F, a) fam1(a*, b, b*)"),
    _s(Q(1, 576), "fam0(F, F, a, a*, b, b*)"),
)

# The three sums left once the trivial-class selection rules are applied.
PF_TRR_TERMS: Tuple[Summand, ...] = (
    _s(Q(-1, 80), "fam1(F, F, a) ord0(a*, b, b*)"),
    _s(Q(1, 15), "fam1(F, a, b) ord0(F, a*, b*)"),
    _s(Q(1, 576), "fam0(F, F, a, a*, b, b*)"),
)

_FACTOR = re.compile(r"(fam|ord)(\d)\(([^)]*)\)")
_TOKENS = {"F", "a", "a*", "b", "b*"}


def parse_product(text: str) -> List[Tuple[str, int, List[Tuple[str, int]]]]:
    """``"fam1(F, a) ord0(a*)"`` -> [(kind, genus, [(token, level), ...]), ...]."""
    factors = []
    pos = 0
    for m in _FACTOR.finditer(text):
        if text[pos:m.start()].strip():
            raise ValueError(f"cannot parse {text[pos:m.start()]!r} in {text!r}")
        pos = m.end()
        kind = FAMILY if m.group(1) == "fam" else ORDINARY
        ins = []
        for raw in m.group(3).split(","):
            tok = raw.strip()
            if not tok:
                continue
            level = 0
            if tok.startswith("tau "):
                tok, level = tok[4:].strip(), 1
            if tok not in _TOKENS:
                raise ValueError(f"unknown insertion {tok!r} in {text!r}")
            ins.append((tok, level))
        factors.append((kind, int(m.group(2)), ins))
    if text[pos:].strip() or not factors:
        raise ValueError(f"cannot parse product {text!r}")
    return factors


def _indices(factors) -> List[str]:
    seen = []
    for _, _, ins in factors:
        for tok, _ in ins:
            ix = tok.rstrip("*")
            if ix in ("a", "b") and ix not in seen:
                seen.append(ix)
    return seen


@dataclass
class TrrEvaluation:
    total: ReducedValue
    by_term: Dict[str, ReducedValue]
    survivors: List[Tuple[str, Q, str]]
    rules: Counter = field(default_factory=Counter)


def _bind(factors, env, family: FamilyChoice, basis: CohBasis) -> List[Correlator]:
    out = []
    for kind, genus, ins in factors:
        bound = []
        for tok, level in ins:
            if tok == "F":
                cls = family.F
            elif tok.endswith("*"):
                cls = basis.duals[env[tok[0]]]
            else:
                cls = basis.classes[env[tok]]
            bound.append(Insertion(cls, level))
        out.append(Correlator(kind, genus, tuple(bound)))
    return out


def _ordinary_factors_survive(correlators: Sequence[Correlator], family, basis) -> bool:
    ords = [c for c in correlators if c.kind == ORDINARY]
    if not ords:
        return True
    return not reduce_product(ords, family, basis).is_zero()


def eval_terms(terms: Sequence[Summand], family: FamilyChoice, basis: CohBasis,
               label_prefix: str = "T") -> TrrEvaluation:
    """Expand and reduce every summand; also record which sub-products
    survive the trivial-class selection rules alone."""
    rules: Counter = Counter()
    by_term: Dict[str, ReducedValue] = {}
    survivors = []
    total = ZERO_VALUE
    n = len(basis.classes)
    for k, term in enumerate(terms, 1):
        for j, text in enumerate(term.products):
            label = f"{label_prefix}{k}" + (chr(ord("a") + j) if len(term.products) > 1 else "")
            factors = parse_product(text)
            idx = _indices(factors)
            acc = ZERO_VALUE
            survived = False
            for combo in iproduct(range(n), repeat=len(idx)):
                env = dict(zip(idx, combo))
                corr = _bind(factors, env, family, basis)
                if not survived and _ordinary_factors_survive(corr, family, basis):
                    survived = True
                acc = acc + reduce_product(corr, family, basis, rules, label)
            acc = acc.scale(term.coeff)
            by_term[label] = acc
            if survived:
                survivors.append((label, term.coeff, text))
            total = total + acc
    return TrrEvaluation(total, by_term, survivors, rules)


def _setup(family, basis):
    basis = build_basis() if basis is None else basis
    if isinstance(family, str):
        family = family_choice(family, basis)
    return family, basis


def eval_trr_rhs(family="2s,f", basis: CohBasis = None,
                 terms: Sequence[Summand] = TRR_TERMS) -> TrrEvaluation:
    """Evaluate the full genus-two recursion for one (S, F) choice."""
    family, basis = _setup(family, basis)
    return eval_terms(terms, family, basis, "T")


def eval_pf_trr(family="2s,f", basis: CohBasis = None) -> TrrEvaluation:
    family, basis = _setup(family, basis)
    return eval_terms(PF_TRR_TERMS, family, basis, "R")


@dataclass(frozen=True)
class PfTrr2Result:
    sub_sums: Tuple[PolyInD, PolyInD]
    total: PolyInD
    ok: bool


def pf_trr2_check(family="2s,f", basis: CohBasis = None) -> PfTrr2Result:
    """The two genus-one sums collapse to ``-(2/3) GW_1(pt)``."""
    family, basis = _setup(family, basis)
    ev = eval_terms(PF_TRR_TERMS[:2], family, basis, "R")
    first, second = ev.by_term["R1"], ev.by_term["R2"]
    total = first.gw1pt + second.gw1pt
    ok = (ev.total.fully_reduced and not ev.total.gw0 and not ev.total.scalar
          and total == PolyInD.const(Q(-2, 3)))
    return PfTrr2Result((first.gw1pt, second.gw1pt), total, ok)


def pf_trr3_value(family="2s,f", basis: CohBasis = None) -> ReducedValue:
    """The 1/576 genus-zero sum alone."""
    family, basis = _setup(family, basis)
    return eval_terms(PF_TRR_TERMS[2:], family, basis, "R").total


def expected_closed_form() -> ReducedValue:
    """``-(2/3) GW_1(pt) + ((d - 2)^2 / 9) GW_0``."""
    return ReducedValue(gw1pt=PolyInD.const(Q(-2, 3)), gw0=PolyInD([Q(4, 9), Q(-4, 9), Q(1, 9)]))


def completeness_poly(family="2s,f", basis: CohBasis = None) -> PolyInD:
    """``sum_a (H_a . A)(A . H^a)``; should equal A^2."""
    family, basis = _setup(family, basis)
    acc = PolyInD()
    for h, hd in zip(basis.classes, basis.duals):
        acc = acc + class_dot_A(h, family, basis) * class_dot_A(hd, family, basis)
    return acc


def a_squared_poly(family="2s,f", basis: CohBasis = None) -> PolyInD:
    family, basis = _setup(family, basis)
    return a_squared(family, basis)
