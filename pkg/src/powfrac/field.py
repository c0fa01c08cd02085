"""Exact arithmetic in Q(alpha), traces and the trace recurrence."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Optional, Sequence

import mpmath
from mpmath import mp

from .errors import BaseMismatch, InternalInconsistency, NotAlgebraicInteger, ParseError
from .poly_algebra import AlgebraicNumber, _divmod, _mul


def _lowest_terms(coords: Sequence[Fraction]) -> tuple[tuple[int, ...], int]:
    den = reduce(math.lcm, (Fraction(c).denominator for c in coords), 1)
    e = [int(Fraction(c) * den) for c in coords]
    g = reduce(math.gcd, e, den)
    return tuple(x // g for x in e), den // g


@dataclass(frozen=True, eq=False)
class FieldElement:
    """``(e_0 + e_1 alpha + ... + e_{d-1} alpha^{d-1}) / L`` in lowest terms."""

    base: AlgebraicNumber
    e: tuple[int, ...]
    L: int = 1

    def __post_init__(self):
        d = self.base.degree
        e = tuple(int(x) for x in self.e)
        if len(e) > d:
            raise ValueError(f"expected at most {d} coordinates, got {len(e)}")
        e = e + (0,) * (d - len(e))
        if self.L == 0:
            raise ZeroDivisionError("denominator L must be nonzero")
        sign = 1 if self.L > 0 else -1
        e, L = _lowest_terms([Fraction(sign * x, abs(self.L)) for x in e])
        object.__setattr__(self, "e", e)
        object.__setattr__(self, "L", L)

    @classmethod
    def from_coords(cls, base: AlgebraicNumber, coords: Sequence) -> "FieldElement":
        e, L = _lowest_terms([Fraction(c) for c in coords])
        return cls(base, e, L)

    @classmethod
    def rational(cls, base: AlgebraicNumber, value) -> "FieldElement":
        return cls.from_coords(base, [Fraction(value)])

    @classmethod
    def alpha_power(cls, base: AlgebraicNumber, n: int) -> "FieldElement":
        return cls(base, (0, 1)) ** n if base.degree > 1 else cls.rational(base, base.rational_value() ** n)

    @classmethod
    def parse(cls, base: AlgebraicNumber, text: str) -> "FieldElement":
        """Accept ``(e0,e1,...)/L``, ``(e0,e1,...)``, a fraction ``p/q`` or a decimal."""
        s = text.strip().replace(" ", "")
        m = re.fullmatch(r"\(([-+\d,]+)\)(?:/(\d+))?", s)
        if m:
            try:
                e = [int(x) for x in m.group(1).split(",")]
            except ValueError:
                raise ParseError(f"bad field element {text!r}") from None
            if len(e) > base.degree:
                raise ParseError(f"{text!r} has more than {base.degree} coordinates")
            return cls(base, tuple(e), int(m.group(2) or 1))
        try:
            return cls.rational(base, Fraction(s))
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"bad field element {text!r}") from None

    def coords(self) -> list[Fraction]:
        return [Fraction(x, self.L) for x in self.e]

    def rational_value(self) -> Optional[Fraction]:
        """The element as a rational number, or ``None`` if it is irrational."""
        if any(self.e[1:]):
            return None
        return Fraction(self.e[0], self.L)

    def __eq__(self, other):
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.base is other.base and self.e == other.e and self.L == other.L

    def __hash__(self):
        return hash((id(self.base), self.e, self.L))

    def __add__(self, other):
        return field_arith(self, _coerce(self, other), "add")

    __radd__ = __add__

    def __sub__(self, other):
        return field_arith(self, _coerce(self, other), "sub")

    def __rsub__(self, other):
        return field_arith(_coerce(self, other), self, "sub")

    def __mul__(self, other):
        return field_arith(self, _coerce(self, other), "mul")

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not supported")
        result = FieldElement(self.base, (1,))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __str__(self):
        return "(" + ",".join(map(str, self.e)) + f")/{self.L}"

    def __repr__(self):
        return f"FieldElement({self}, base={self.base.minpoly})"

    def enclosure(self, bits: int) -> tuple[int, int]:
        """Integers ``lo <= hi`` with the value in ``[lo, hi] / 2^bits``."""
        r = self.rational_value()
        if r is not None:
            scaled = r * 2**bits
            return math.floor(scaled), math.ceil(scaled)
        guard = 8 + self.base.degree + max(abs(x) for x in self.e).bit_length()
        work = bits + guard
        a = self.base.enclosure(work)
        power = (1 << work, 1 << work)
        lo = hi = 0
        for k, ek in enumerate(self.e):
            if k:
                power = fixed_mul(power, a, work)
            if ek:
                t = (power[0] * ek, power[1] * ek)
                lo, hi = lo + min(t), hi + max(t)
        lo, hi = lo // self.L, -((-hi) // self.L)
        shift = work - bits
        return lo >> shift, -((-hi) >> shift)

    def value(self, prec: int = 53) -> mpmath.mpf:
        lo, hi = self.enclosure(prec + 4)
        with mp.workprec(prec + 8):
            return mpmath.mpf(lo + hi) / 2 ** (prec + 5)

    def is_positive(self) -> bool:
        r = self.rational_value()
        if r is not None:
            return r > 0
        bits = 64
        while True:
            lo, hi = self.enclosure(bits)
            if lo > 0:
                return True
            if hi < 0:
                return False
            bits *= 2  # a nonzero irrational element separates from 0 eventually


def fixed_mul(x: tuple[int, int], y: tuple[int, int], bits: int) -> tuple[int, int]:
    """Outward-rounded product of two fixed-point intervals scaled by ``2^bits``."""
    prods = (x[0] * y[0], x[0] * y[1], x[1] * y[0], x[1] * y[1])
    return min(prods) >> bits, -((-max(prods)) >> bits)


def _coerce(x: FieldElement, y) -> FieldElement:
    if isinstance(y, FieldElement):
        return y
    return FieldElement.rational(x.base, y)


def field_arith(x: FieldElement, y: FieldElement, op: str) -> FieldElement:
    """``x op y`` for op in {add, sub, mul}, reduced modulo the minimal polynomial."""
    if x.base is not y.base:
        raise BaseMismatch("elements live over different algebraic numbers")
    cx, cy = x.coords(), y.coords()
    if op == "add":
        out = [a + b for a, b in zip(cx, cy)]
    elif op == "sub":
        out = [a - b for a, b in zip(cx, cy)]
    elif op == "mul":
        _, out = _divmod(_mul(cx, cy), list(x.base.minpoly.coeffs))
    else:
        raise ValueError(f"unknown op {op!r}")
    return FieldElement.from_coords(x.base, out)


def power_sums(a: AlgebraicNumber, N: int) -> list[Fraction]:
    """``Tr(alpha^k)`` for ``k = 0..N`` via Newton's identities."""
    if N < 0:
        raise ValueError("N must be non-negative")
    coeffs = a.minpoly.coeffs
    d = len(coeffs) - 1
    c = [Fraction(x, coeffs[-1]) for x in coeffs]  # monic-normalized
    p = [Fraction(d)]
    for k in range(1, N + 1):
        if k <= d:
            s = k * c[d - k] + sum(c[d - i] * p[k - i] for i in range(1, k))
        else:
            s = sum(c[d - i] * p[k - i] for i in range(1, d + 1))
        p.append(-s)
    return [int(x) if x.denominator == 1 else x for x in p]


def trace_sequence(xi: FieldElement, N: int) -> list[int]:
    """``b_n = Tr(L xi alpha^n)`` for ``n = 1..N`` (L the denominator of xi)."""
    a = xi.base
    if not a.minpoly.is_monic():
        raise NotAlgebraicInteger(f"{a.minpoly} is not monic")
    if N < 1:
        raise ValueError("N must be at least 1")
    d = a.degree
    ps = power_sums(a, N + d)
    b = [sum(ek * ps[n + k] for k, ek in enumerate(xi.e)) for n in range(1, N + 1)]
    coeffs = a.minpoly.coeffs
    for n in range(N - d):
        if sum(coeffs[i] * b[n + i] for i in range(d + 1)) != 0:
            raise InternalInconsistency(f"trace recurrence fails at n={n + 1}")
    return b
