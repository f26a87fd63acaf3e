"""Truncated formal power series with exact rational coefficients.

A :class:`PowerSeries` of order ``N`` stores the coefficients of
``t^0 .. t^N``; everything above ``t^N`` is unknown, not zero.  Binary
operations return a series of the smaller operand order so that no result
ever claims more precision than its inputs carry.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Optional, Sequence

try:
    import gmpy2
except ImportError:  # pragma: no cover - exercised only without gmpy2
    gmpy2 = None

__all__ = [
    "PowerSeries",
    "NonUnitError",
    "mul",
    "mul_fast",
    "invert",
    "differentiate",
    "theta",
    "compose_power",
    "reindex",
    "equal_to_order",
    "first_difference",
]

_ZERO = Fraction(0)
_ONE = Fraction(1)


class NonUnitError(ArithmeticError):
    """Raised when inverting a series whose constant term vanishes."""


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    raise TypeError(f"exact rational coefficient required, got {type(x).__name__}")


class PowerSeries:
    """An immutable truncated power series ``sum_{n<=order} c_n t^n``."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable, order: Optional[int] = None):
        c = [_as_fraction(x) for x in coeffs]
        if order is not None:
            if order < 0:
                raise ValueError("order must be non-negative")
            if len(c) > order + 1:
                del c[order + 1:]
            else:
                c.extend([_ZERO] * (order + 1 - len(c)))
        if not c:
            raise ValueError("a power series needs at least one coefficient")
        self._c = tuple(c)

    @classmethod
    def _wrap(cls, coeffs: Sequence[Fraction]) -> "PowerSeries":
        # Trusted constructor: coeffs are already normalized Fractions.
        obj = cls.__new__(cls)
        obj._c = tuple(coeffs)
        return obj

    @classmethod
    def zero(cls, order: int) -> "PowerSeries":
        return cls._wrap([_ZERO] * (order + 1))

    @classmethod
    def one(cls, order: int) -> "PowerSeries":
        return cls.monomial(0, order)

    @classmethod
    def monomial(cls, n: int, order: int, coeff=1) -> "PowerSeries":
        c = [_ZERO] * (order + 1)
        if n <= order:
            c[n] = _as_fraction(coeff)
        return cls._wrap(c)

    @property
    def order(self) -> int:
        return len(self._c) - 1

    @property
    def coeffs(self) -> tuple:
        return self._c

    def __len__(self):
        return len(self._c)

    def __iter__(self):
        return iter(self._c)

    def __getitem__(self, n: int) -> Fraction:
        if not isinstance(n, int):
            raise TypeError("coefficient index must be an integer")
        if n < 0 or n > self.order:
            raise IndexError(f"coefficient t^{n} is outside the truncation order {self.order}")
        return self._c[n]

    def truncate(self, order: int) -> "PowerSeries":
        if order > self.order:
            raise ValueError(f"cannot extend a series of order {self.order} to {order}")
        return PowerSeries._wrap(self._c[: order + 1])

    def is_zero(self) -> bool:
        return not any(self._c)

    def __eq__(self, other):
        if not isinstance(other, PowerSeries):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(self._c)

    def __repr__(self):
        shown = ", ".join(str(x) for x in self._c[:6])
        tail = ", ..." if self.order >= 6 else ""
        return f"PowerSeries([{shown}{tail}], order={self.order})"

    def _coerce(self, other) -> "PowerSeries":
        if isinstance(other, PowerSeries):
            return other
        return PowerSeries.monomial(0, self.order, _as_fraction(other))

    def __add__(self, other):
        if not isinstance(other, (PowerSeries, int, Fraction)):
            return NotImplemented
        other = self._coerce(other)
        return PowerSeries._wrap([a + b for a, b in zip(self._c, other._c)])

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, (PowerSeries, int, Fraction)):
            return NotImplemented
        other = self._coerce(other)
        return PowerSeries._wrap([a - b for a, b in zip(self._c, other._c)])

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return PowerSeries._wrap([-a for a in self._c])

    def scale(self, k) -> "PowerSeries":
        k = _as_fraction(k)
        return PowerSeries._wrap([k * a for a in self._c])

    def __mul__(self, other):
        if isinstance(other, PowerSeries):
            return mul_fast(self, other)
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int) -> "PowerSeries":
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers are supported")
        result = PowerSeries.one(self.order)
        base = self
        while k:
            if k & 1:
                result = mul_fast(result, base)
            k >>= 1
            if k:
                base = mul_fast(base, base)
        return result


def equal_to_order(f: PowerSeries, g: PowerSeries, n: int) -> bool:
    """Compare coefficients ``0..n``; both series must be known that far."""
    if n > f.order or n > g.order:
        raise IndexError(f"cannot compare to order {n}: operands have orders {f.order}, {g.order}")
    return f.coeffs[: n + 1] == g.coeffs[: n + 1]


def first_difference(f: PowerSeries, g: PowerSeries, n: Optional[int] = None) -> Optional[int]:
    """Smallest exponent ``<= n`` at which ``f`` and ``g`` differ, else None."""
    if n is None:
        n = min(f.order, g.order)
    if n > f.order or n > g.order:
        raise IndexError(f"cannot compare to order {n}: operands have orders {f.order}, {g.order}")
    for i in range(n + 1):
        if f.coeffs[i] != g.coeffs[i]:
            return i
    return None


def mul(f: PowerSeries, g: PowerSeries) -> PowerSeries:
    """Reference Cauchy product, coefficient by coefficient."""
    n = min(f.order, g.order)
    a, b = f.coeffs, g.coeffs
    out = []
    for k in range(n + 1):
        s = _ZERO
        for i in range(k + 1):
            if a[i] and b[k - i]:
                s += a[i] * b[k - i]
        out.append(s)
    return PowerSeries._wrap(out)


def _integer_vector(coeffs: Sequence[Fraction]):
    den = math.lcm(*(c.denominator for c in coeffs))
    return [c.numerator * (den // c.denominator) for c in coeffs], den


def _bigmul(x: int, y: int) -> int:
    if gmpy2 is not None:
        return int(gmpy2.mpz(x) * gmpy2.mpz(y))
    return x * y


def _pack(xs: Sequence[int], width: int) -> int:
    pos = bytearray(width * len(xs))
    neg = bytearray(width * len(xs))
    for i, x in enumerate(xs):
        if x > 0:
            pos[i * width:(i + 1) * width] = x.to_bytes(width, "little")
        elif x < 0:
            neg[i * width:(i + 1) * width] = (-x).to_bytes(width, "little")
    return int.from_bytes(pos, "little") - int.from_bytes(neg, "little")


def _kronecker_product(xs: Sequence[int], ys: Sequence[int], m: int):
    """First ``m`` coefficients of the integer polynomial product xs*ys."""
    mx = max(abs(x) for x in xs)
    my = max(abs(y) for y in ys)
    if mx == 0 or my == 0:
        return [0] * m
    # each output digit is bounded by m*mx*my; one extra bit for the sign
    bits = mx.bit_length() + my.bit_length() + m.bit_length() + 1
    width = (bits + 7) // 8
    prod = _bigmul(_pack(xs, width), _pack(ys, width))
    # Offset every digit by half the radix so all digits become
    # non-negative; the low m digits are then exact modulo 2^(8*width*m).
    total_bits = 8 * width * m
    half = (b"\x00" * (width - 1) + b"\x80") * m
    low = (prod + int.from_bytes(half, "little")) & ((1 << total_bits) - 1)
    raw = low.to_bytes(width * m, "little")
    shift = 1 << (8 * width - 1)
    return [int.from_bytes(raw[i * width:(i + 1) * width], "little") - shift for i in range(m)]


def mul_fast(f: PowerSeries, g: PowerSeries) -> PowerSeries:
    """Product via Kronecker substitution into a single big-integer multiply.

    Denominators are cleared with the lcm of each operand, the integer
    coefficient vectors are packed into one integer each, multiplied
    (GMP when available), and unpacked.  Equal to :func:`mul` exactly.
    """
    n = min(f.order, g.order)
    m = n + 1
    xs, dx = _integer_vector(f.coeffs[:m])
    ys, dy = _integer_vector(g.coeffs[:m])
    prod = _kronecker_product(xs, ys, m)
    den = dx * dy
    if den == 1:
        return PowerSeries._wrap([Fraction(c) for c in prod])
    return PowerSeries._wrap([Fraction(c, den) for c in prod])


def invert(f: PowerSeries) -> PowerSeries:
    """Multiplicative inverse by Newton iteration ``g <- g (2 - f g)``."""
    if f.coeffs[0] == 0:
        raise NonUnitError("series with zero constant term is not invertible")
    g = PowerSeries._wrap([1 / f.coeffs[0]])
    prec = 0
    while prec < f.order:
        prec = min(2 * prec + 1, f.order)
        g = PowerSeries(g.coeffs, prec)
        fg = mul_fast(f.truncate(prec), g)
        g = mul_fast(g, 2 - fg)
    return g


def differentiate(f: PowerSeries) -> PowerSeries:
    """d/dt; the result has order ``f.order - 1``."""
    if f.order == 0:
        raise ValueError("derivative of an order-0 series carries no coefficients")
    return PowerSeries._wrap([n * f.coeffs[n] for n in range(1, f.order + 1)])


def theta(f: PowerSeries) -> PowerSeries:
    """The Euler operator t*d/dt; preserves the order."""
    return PowerSeries._wrap([n * c for n, c in enumerate(f.coeffs)])


def compose_power(f: PowerSeries, k: int) -> PowerSeries:
    """Substitute ``t -> t^k``, keeping the order of ``f``."""
    if k < 1:
        raise ValueError("substitution exponent must be positive")
    out = [_ZERO] * (f.order + 1)
    for n in range(f.order // k + 1):
        out[k * n] = f.coeffs[n]
    return PowerSeries._wrap(out)


def reindex(f: PowerSeries, stride: int, offset: int) -> PowerSeries:
    """``result[d] = f[stride*d + offset]`` with out-of-range indices read as 0.

    Indices below zero are genuinely zero (no class there); the result order
    is chosen so that no index above ``f.order`` is ever read.
    """
    if stride < 1:
        raise ValueError("stride must be positive")
    order = (f.order - offset) // stride
    if order < 0:
        raise ValueError(f"reindexing leaves no known coefficients (order {f.order}, offset {offset})")
    out = []
    for d in range(order + 1):
        i = stride * d + offset
        out.append(f.coeffs[i] if i >= 0 else _ZERO)
    return PowerSeries._wrap(out)
