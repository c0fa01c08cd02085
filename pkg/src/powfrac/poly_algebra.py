"""Exact integer polynomials, unit-circle root counts and PV/Salem classification.

All decisions here are exact: real roots are located with Sturm chains over
the rationals, roots on the unit circle come from the reciprocal gcd
``gcd(p, z^d p(1/z))`` and a Sturm count of its Chebyshev transform, and the
remaining inside/outside split uses the Schur-Cohn reduction.  Floating root
finders are only used to produce candidates that are then certified with
exact Gaussian-integer arithmetic.
"""

from __future__ import annotations

import json
import math
import os
import re
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import reduce
from typing import NamedTuple, Optional, Sequence

import mpmath
from mpmath import mp

from .errors import (
    AmbiguousRoot,
    BadInput,
    NoRootAboveOne,
    NotSalem,
    NotSquarefree,
    ParseError,
    PrecisionExhausted,
)

DEFAULT_PRECISION_CAP = 4096


def default_precision_cap() -> int:
    """Precision cap in bits, overridable with ``POWFRAC_PRECISION_CAP``."""
    raw = os.environ.get("POWFRAC_PRECISION_CAP")
    if raw is None:
        return DEFAULT_PRECISION_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise BadInput(f"POWFRAC_PRECISION_CAP must be an integer, got {raw!r}")
    if cap < 64:
        raise BadInput("POWFRAC_PRECISION_CAP must be at least 64")
    return cap


# ---------------------------------------------------------------------------
# coefficient-list helpers (ascending degree)
# ---------------------------------------------------------------------------

def _trim(c):
    c = list(c)
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return c or [0]


def _deg(c):
    c = _trim(c)
    return -1 if c == [0] else len(c) - 1


def _deriv(c):
    return _trim([i * c[i] for i in range(1, len(c))] or [0])


def _mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _divmod(num, den):
    """Polynomial division over Q."""
    num = [Fraction(x) for x in _trim(num)]
    den = _trim(den)
    if den == [0]:
        raise ZeroDivisionError("polynomial division by zero")
    if len(num) < len(den):
        return [Fraction(0)], num
    lead = Fraction(den[-1])
    q = [Fraction(0)] * (len(num) - len(den) + 1)
    for i in range(len(num) - len(den), -1, -1):
        coef = num[i + len(den) - 1] / lead
        q[i] = coef
        if coef:
            for j, dj in enumerate(den):
                num[i + j] -= coef * dj
    return _trim(q), _trim(num[: len(den) - 1] or [0])


def _positive_primitive(c):
    """Scale rational coefficients by a positive constant to coprime integers."""
    c = _trim([Fraction(x) for x in c])
    den = reduce(math.lcm, (x.denominator for x in c), 1)
    ints = [int(x * den) for x in c]
    g = reduce(math.gcd, ints, 0)
    if g == 0:
        return [0]
    return [x // g for x in ints]


def _primitive(c):
    """Coprime integer coefficients with positive leading coefficient."""
    out = _positive_primitive(c)
    if out[-1] < 0:
        out = [-x for x in out]
    return out


def _gcd(a, b):
    a, b = _trim(a), _trim(b)
    while b != [0]:
        _, r = _divmod(a, b)
        a, b = b, r
    if a == [0]:
        return [0]
    return _primitive(a)


def _exact_div(a, b):
    q, r = _divmod(a, b)
    if r != [0]:
        raise ArithmeticError("inexact polynomial division")
    return _primitive(q)


def _eval(c, x):
    acc = 0
    for coef in reversed(c):
        acc = acc * x + coef
    return acc


def _sign(x):
    return (x > 0) - (x < 0)


def _dyadic_sign(c, num, k):
    """Sign of p(num / 2^k) for integer coefficients, in pure integer arithmetic."""
    d = len(c) - 1
    acc = c[d]
    for i in range(d - 1, -1, -1):
        acc = acc * num + (c[i] << (k * (d - i)))
    return _sign(acc)


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

_TERM = re.compile(
    r"""^(?P<coef>\d+)?\*?(?:(?P<var>[a-z])(?:(?:\^|\*\*)(?P<exp>\d+))?)?$"""
)


def parse_polynomial(text: str) -> list[int]:
    """Parse ``[-1,-1,0,1]`` (ascending) or ``z^3-z-1`` into integer coefficients."""
    s = text.strip()
    if not s:
        raise ParseError("empty polynomial")
    if s.startswith("["):
        try:
            values = json.loads(s)
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad coefficient list {text!r}: {exc}") from None
        if not isinstance(values, list) or not all(
            isinstance(v, int) and not isinstance(v, bool) for v in values
        ):
            raise ParseError(f"coefficient list must hold integers: {text!r}")
        return values
    s = s.replace(" ", "")
    if s[0] not in "+-":
        s = "+" + s
    coeffs: dict[int, int] = {}
    var_name = None
    for sign, body in re.findall(r"([+-])([^+-]+)", s):
        m = _TERM.match(body)
        if not m or (m.group("coef") is None and m.group("var") is None):
            raise ParseError(f"cannot parse term {sign}{body!r} in {text!r}")
        if m.group("var"):
            if var_name is None:
                var_name = m.group("var")
            elif var_name != m.group("var"):
                raise ParseError(f"mixed variables in {text!r}")
            exp = int(m.group("exp") or 1)
        else:
            exp = 0
        coef = int(m.group("coef") or 1)
        coeffs[exp] = coeffs.get(exp, 0) + (coef if sign == "+" else -coef)
    if "".join(sign + body for sign, body in re.findall(r"([+-])([^+-]+)", s)) != s:
        raise ParseError(f"cannot parse {text!r}")
    top = max(coeffs)
    return [coeffs.get(i, 0) for i in range(top + 1)]


# ---------------------------------------------------------------------------
# IntPolynomial
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IntPolynomial:
    """Primitive integer polynomial, coefficients in ascending degree.

    The constructor normalizes: trailing zeros are dropped, the content is
    divided out and the leading coefficient is made positive.
    """

    coeffs: tuple[int, ...]

    def __post_init__(self):
        raw = [int(c) for c in self.coeffs]
        if any(c != r for c, r in zip(self.coeffs, raw)):
            raise BadInput("coefficients must be integers")
        c = _primitive(raw)
        if len(c) < 2:
            raise BadInput("polynomial must have degree at least 1")
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def parse(cls, text: str) -> "IntPolynomial":
        return cls(tuple(parse_polynomial(text)))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1]

    @property
    def constant(self) -> int:
        return self.coeffs[0]

    def is_monic(self) -> bool:
        return self.leading == 1

    def is_self_reciprocal(self) -> bool:
        return self.coeffs == self.coeffs[::-1]

    def __call__(self, x):
        return _eval(self.coeffs, x)

    def derivative(self) -> list[int]:
        return _deriv(list(self.coeffs))

    def __str__(self) -> str:
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if i == 0:
                body = str(mag)
            else:
                body = ("" if mag == 1 else str(mag)) + ("z" if i == 1 else f"z^{i}")
            terms.append((sign, body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += sign + body
        return out


def length(p: IntPolynomial) -> int:
    """Sum of absolute values of the coefficients."""
    return sum(abs(c) for c in p.coeffs)


# ---------------------------------------------------------------------------
# Sturm chains and real roots
# ---------------------------------------------------------------------------

def sturm_chain(c: Sequence[int]) -> list[list[int]]:
    """Sturm sequence with every member rescaled by a positive constant."""
    chain = [_positive_primitive(c), _positive_primitive(_deriv(list(c)))]
    while _deg(chain[-1]) > 0:
        _, r = _divmod(chain[-2], chain[-1])
        if r == [0]:
            break
        chain.append(_positive_primitive([-x for x in r]))
    return chain


def _variations(chain, x):
    if x is None:  # +infinity
        signs = [_sign(q[-1]) for q in chain]
    elif x == "-inf":
        signs = [_sign(q[-1]) * (-1) ** (len(q) - 1) for q in chain]
    else:
        signs = [_sign(_eval(q, x)) for q in chain]
    signs = [s for s in signs if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_real_roots(c, lo=None, hi=None, chain=None) -> int:
    """Distinct real roots in ``(lo, hi]``; ``None`` bounds mean infinite."""
    chain = chain or sturm_chain(c)
    return _variations(chain, "-inf" if lo is None else Fraction(lo)) - _variations(
        chain, None if hi is None else Fraction(hi)
    )


def _cauchy_bound(c) -> Fraction:
    return 1 + max(Fraction(abs(x), abs(c[-1])) for x in c[:-1])


def isolate_real_roots(c, lo=None, hi=None) -> list[tuple[Fraction, Fraction]]:
    """Disjoint intervals ``(a, b]`` each holding exactly one real root in ``(lo, hi]``."""
    chain = sturm_chain(c)
    bound = _cauchy_bound(c)
    lo = -bound if lo is None else Fraction(lo)
    hi = bound if hi is None else Fraction(hi)
    out = []
    stack = [(lo, hi, count_real_roots(c, lo, hi, chain))]
    while stack:
        a, b, n = stack.pop()
        if n == 0:
            continue
        if n == 1:
            out.append((a, b))
            continue
        mid = (a + b) / 2
        left = count_real_roots(c, a, mid, chain)
        stack.append((mid, b, n - left))
        stack.append((a, mid, left))
    return sorted(out)


def refine_root(c, lo, hi, bits: int) -> tuple[int, int]:
    """Enclose the unique simple root in ``(lo, hi]`` as ``[A, B] / 2^bits``.

    Bisection brings the bracket to ~60 bits, mpmath Newton extends it to
    ``bits``, and the candidate is certified by an exact sign change.
    Returns ``A == B`` when the root is hit exactly.
    """
    c = list(c)
    lo, hi = Fraction(lo), Fraction(hi)
    if _eval(c, hi) == 0:
        a = hi * 2**bits
        return math.floor(a), math.ceil(a)
    s_lo = _sign(_eval(c, lo))
    coarse = min(bits, 60)
    while hi - lo > Fraction(1, 2**coarse):
        mid = (lo + hi) / 2
        s = _sign(_eval(c, mid))
        if s == 0:
            a = mid * 2**bits
            return math.floor(a), math.ceil(a)
        if s == s_lo:
            lo = mid
        else:
            hi = mid
    lo_n, hi_n = math.floor(lo * 2**bits), math.ceil(hi * 2**bits)
    if bits <= coarse:
        return lo_n, hi_n
    desc = c[::-1]
    with mp.workprec(bits + 64):
        x = mpmath.mpf(lo.numerator) / lo.denominator
        steps = 4 + max(1, math.ceil(math.log2(bits / 50)))
        for _ in range(steps):
            val, der = mpmath.polyval(desc, x, derivative=True)
            if der == 0:
                break
            x -= val / der
        cand = int(mpmath.floor(x * mpmath.mpf(2) ** bits))
    for pad in (0, 1, 16, 2**10):
        a, b = max(cand - pad, lo_n), min(cand + 1 + pad, hi_n)
        if a > b:
            continue
        sa = _dyadic_sign(c, a, bits)
        sb = _dyadic_sign(c, b, bits)
        if sa == 0:
            return a, a
        if sb == 0:
            return b, b
        if sa == s_lo and sb != s_lo:
            return a, b
    # Newton did not land: finish by exact bisection on the dyadic grid
    a, b = lo_n, hi_n
    while b - a > 1:
        mid = (a + b) // 2
        s = _dyadic_sign(c, mid, bits)
        if s == 0:
            return mid, mid
        if s == s_lo:
            a = mid
        else:
            b = mid
    return a, b


# ---------------------------------------------------------------------------
# certified complex roots
# ---------------------------------------------------------------------------

class ConjugateDisc(NamedTuple):
    """Disc ``|z - (re + i im) / 2^bits| <= radius / 2^bits`` holding one root."""

    re: int
    im: int
    radius: int
    bits: int

    def center(self, prec: int = 53) -> mpmath.mpc:
        with mp.workprec(prec):
            scale = mpmath.mpf(2) ** -self.bits
            return mpmath.mpc(self.re * scale, self.im * scale)

    def strictly_inside(self) -> bool:
        one = 1 << self.bits
        return self.radius < one and self.re**2 + self.im**2 < (one - self.radius) ** 2

    def strictly_outside(self) -> bool:
        one = 1 << self.bits
        return self.re**2 + self.im**2 > (one + self.radius) ** 2


def _gauss_eval(c, x, y, k):
    """``p((x + iy) / 2^k) * 2^(k*deg)`` as a Gaussian integer."""
    d = len(c) - 1
    re, im = c[d], 0
    for i in range(d - 1, -1, -1):
        re, im = re * x - im * y, re * y + im * x
        re += c[i] << (k * (d - i))
    return re, im


def _mpf_scaled(x, bits):
    return int(mpmath.nint(x * mpmath.mpf(2) ** bits))


def certified_roots(c, bits: int = 128, cap: Optional[int] = None) -> list[ConjugateDisc]:
    """All complex roots of a squarefree integer polynomial in disjoint discs.

    Each disc uses the Newton inclusion radius ``deg * |p(z)| / |p'(z)|``;
    ``deg`` pairwise disjoint discs each containing a root hold exactly one
    root apiece.  Precision doubles until the discs separate.
    """
    c = list(c)
    d = len(c) - 1
    cap = default_precision_cap() if cap is None else cap
    dc = _deriv(c)
    work = max(bits, 64)
    while True:
        discs = _try_discs(c, dc, d, work)
        if discs is not None:
            return discs
        work *= 2
        if work > cap:
            raise PrecisionExhausted(
                f"complex roots of degree-{d} polynomial not separated within {cap} bits"
            )


def _try_discs(c, dc, d, bits):
    with mp.workprec(bits + 32):
        try:
            roots = mpmath.polyroots(
                [mpmath.mpf(x) for x in reversed(c)],
                maxsteps=200 + 4 * bits,
                extraprec=bits,
                cleanup=True,
            )
        except mpmath.libmp.NoConvergence:
            return None
        pts = [(_mpf_scaled(mpmath.re(z), bits), _mpf_scaled(mpmath.im(z), bits)) for z in roots]
    discs = []
    for x, y in pts:
        pr, pi = _gauss_eval(c, x, y, bits)
        dr, di = _gauss_eval(dc, x, y, bits)
        den = dr * dr + di * di
        if den == 0:
            return None
        num = d * d * (pr * pr + pi * pi)
        q = -(-num // den)
        r = math.isqrt(q)
        if r * r < q:
            r += 1
        discs.append(ConjugateDisc(x, y, r + 1, bits))
    for i in range(d):
        for j in range(i + 1, d):
            a, b = discs[i], discs[j]
            if (a.radius + b.radius) ** 2 >= (a.re - b.re) ** 2 + (a.im - b.im) ** 2:
                return None
    return discs


# ---------------------------------------------------------------------------
# unit circle
# ---------------------------------------------------------------------------

class AngleInterval(NamedTuple):
    lo: mpmath.mpf
    hi: mpmath.mpf

    @property
    def mid(self) -> mpmath.mpf:
        return (self.lo + self.hi) / 2

    @property
    def width(self) -> mpmath.mpf:
        return self.hi - self.lo


class UnitCircleCounts(NamedTuple):
    inside: int
    on: int
    outside: int


def schur_cohn_inside(c) -> Optional[int]:
    """Roots strictly inside the unit disc, for a polynomial with none on the circle.

    Uses ``T f = a_0 f - a_n f*`` (``f*`` the reversed polynomial): by Rouché,
    ``T f`` has as many zeros inside as ``f`` when ``|a_0| > |a_n|`` and as
    many as ``f*`` otherwise, and ``deg T f < deg f``.  Returns ``None`` on the
    singular case ``|a_0| = |a_n|``.
    """
    f = _trim(list(c))
    inside_sign, total = 1, 0
    while _deg(f) > 0:
        n = len(f) - 1
        a0, an = f[0], f[-1]
        if abs(a0) == abs(an):
            return None
        star = f[::-1]
        g = _trim([a0 * x - an * y for x, y in zip(f, star)])
        g = _positive_primitive(g)
        if abs(a0) < abs(an):
            # inside(f) = n - inside(g)
            total += inside_sign * n
            inside_sign = -inside_sign
        f = g
    return total


def chebyshev_transform(g) -> list[int]:
    """``h`` with ``g(z) = z^j h(z + 1/z)`` for a palindromic ``g`` of degree ``2j``."""
    g = list(g)
    if len(g) % 2 == 0 or g != g[::-1]:
        raise ValueError("chebyshev_transform needs a palindromic even-degree polynomial")
    j = (len(g) - 1) // 2
    if j == 0:
        return [g[0]]
    v_prev, v_cur = [2], [0, 1]  # V_0 = 2, V_1 = x, with V_k(z + 1/z) = z^k + z^-k
    h = [g[j]]
    for k in range(1, j + 1):
        term = [g[j + k] * x for x in v_cur]
        h = [a + b for a, b in _zip_pad(h, term)]
        v_prev, v_cur = v_cur, [a - b for a, b in _zip_pad([0] + v_cur, v_prev)]
    return _trim(h)


def _zip_pad(a, b):
    n = max(len(a), len(b))
    return zip(list(a) + [0] * (n - len(a)), list(b) + [0] * (n - len(b)))


def _circle_parts(c):
    """Split the reciprocal gcd into (±1 root count, palindromic remainder)."""
    g = _gcd(c, c[::-1])
    pm_one = 0
    for root in (1, -1):
        if _deg(g) >= 1 and _eval(g, root) == 0:
            g = _exact_div(g, [-root, 1])
            pm_one += 1
    if _deg(g) >= 1 and g != g[::-1]:
        g = [-x for x in g] if [-x for x in g] == g[::-1] else g
    return pm_one, g


def unit_circle_counts(p: IntPolynomial, precision: int = 128, cap: Optional[int] = None) -> UnitCircleCounts:
    """Exact counts of roots inside, on and outside the unit circle."""
    c = list(p.coeffs)
    if _deg(_gcd(c, _deriv(c))) > 0:
        raise NotSquarefree(f"{p} has a repeated root")
    recip = _gcd(c, c[::-1])
    pm_one, g = _circle_parts(c)
    on = pm_one
    paired = 0
    if _deg(g) >= 2:
        h = chebyshev_transform(g)
        on_pairs = count_real_roots(h, -2, 2) if _deg(h) >= 1 else 0
        on += 2 * on_pairs
        paired = _deg(g) - 2 * on_pairs
    inside = paired // 2
    q = _exact_div(c, recip) if _deg(recip) >= 1 else c
    if _deg(q) >= 1:
        n_in = schur_cohn_inside(q)
        if n_in is None:
            discs = certified_roots(q, precision, cap)
            cap_ = default_precision_cap() if cap is None else cap
            bits = precision
            while not all(dd.strictly_inside() or dd.strictly_outside() for dd in discs):
                bits *= 2
                if bits > cap_:
                    raise PrecisionExhausted("root discs straddle the unit circle")
                discs = certified_roots(q, bits, cap_)
            n_in = sum(dd.strictly_inside() for dd in discs)
        inside += n_in
    return UnitCircleCounts(inside, on, p.degree - inside - on)


# ---------------------------------------------------------------------------
# irreducibility evidence
# ---------------------------------------------------------------------------

def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i * i != n:
                large.append(n // i)
        i += 1
    return small + large[::-1]


def rational_roots(p: IntPolynomial) -> list[Fraction]:
    c = p.coeffs
    if c[0] == 0:
        return [Fraction(0)] + rational_roots(IntPolynomial(c[1:])) if len(c) > 2 else [Fraction(0)]
    if abs(c[0]) > 10**14 or abs(c[-1]) > 10**14:
        raise BadInput("coefficients too large for the rational-root test")
    found = set()
    for r in _divisors(c[0]):
        for s in _divisors(c[-1]):
            for cand in (Fraction(r, s), Fraction(-r, s)):
                if _eval(c, cand) == 0:
                    found.add(cand)
    return sorted(found)


def _primes_below(n):
    return [k for k in range(2, n) if all(k % q for q in range(2, math.isqrt(k) + 1))]


def _fp_trim(a):
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return a


def _fp_mod(a, f, prime):
    a = [x % prime for x in a]
    df = len(f) - 1
    inv = pow(f[-1], -1, prime)
    for i in range(len(a) - 1, df - 1, -1):
        coef = a[i] * inv % prime
        if coef:
            for j in range(df + 1):
                a[i - df + j] = (a[i - df + j] - coef * f[j]) % prime
    return _fp_trim(a[:df] or [0])


def _fp_mulmod(a, b, f, prime):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _fp_mod(out, f, prime)


def _fp_powmod(a, e, f, prime):
    result, base = [1], _fp_mod(a, f, prime)
    while e:
        if e & 1:
            result = _fp_mulmod(result, base, f, prime)
        base = _fp_mulmod(base, base, f, prime)
        e >>= 1
    return result


def _fp_gcd(a, b, prime):
    a, b = _fp_trim([x % prime for x in a]), _fp_trim([x % prime for x in b])
    while b != [0]:
        a, b = b, _fp_mod(a, b, prime)
    return a


def irreducible_mod(c, prime: int) -> bool:
    """Rabin's test: is ``c`` irreducible over GF(prime)?  Requires prime ∤ lead."""
    f = [x % prime for x in c]
    n = len(f) - 1
    if n == 1:
        return True
    frob = [[0, 1]]  # frob[k] = x^(prime^k) mod f
    for _ in range(n):
        frob.append(_fp_powmod(frob[-1], prime, f, prime))
    def minus_x(a):
        a = a + [0] * (2 - len(a))
        a[1] = (a[1] - 1) % prime
        return _fp_trim(a)

    if minus_x(frob[n]) != [0]:
        return False
    for r in _prime_factors(n):
        g = _fp_gcd(f, minus_x(frob[n // r]), prime)
        if len(g) > 1:
            return False
    return True


def _prime_factors(n):
    out, k = [], 2
    while k * k <= n:
        if n % k == 0:
            out.append(k)
            while n % k == 0:
                n //= k
        k += 1
    if n > 1:
        out.append(n)
    return out


def _fp_divexact(a, b, prime):
    a = [x % prime for x in a]
    db = len(b) - 1
    inv = pow(b[-1], -1, prime)
    q = [0] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        coef = a[i] * inv % prime
        q[i - db] = coef
        if coef:
            for j in range(db + 1):
                a[i - db + j] = (a[i - db + j] - coef * b[j]) % prime
    return _fp_trim(q)


def factor_degrees_mod(c, prime: int) -> Optional[list[int]]:
    """Degrees of the irreducible factors of ``c`` over GF(prime).

    Distinct-degree factorization; ``None`` when the reduction is not
    squarefree or drops degree.
    """
    f = _fp_trim([x % prime for x in c])
    if len(f) != len(c):
        return None
    df = [(i * x) % prime for i, x in enumerate(f)][1:] or [0]
    if len(_fp_gcd(f, _fp_trim(df), prime)) > 1:
        return None
    degrees = []
    h = [0, 1]
    i = 0
    while len(f) - 1 >= 2 * (i + 1):
        i += 1
        h = _fp_powmod(h, prime, f, prime)
        hx = h + [0] * (2 - len(h))
        hx[1] = (hx[1] - 1) % prime
        g = _fp_gcd(f, _fp_trim(hx), prime)
        if len(g) > 1:
            degrees += [i] * ((len(g) - 1) // i)
            f = _fp_divexact(f, g, prime)
            h = _fp_mod(h, f, prime) if len(f) > 1 else [0]
    if len(f) > 1:
        degrees.append(len(f) - 1)
    return sorted(degrees)


def _subset_sums(degrees):
    sums = {0}
    for k in degrees:
        sums |= {s + k for s in sums}
    return sums


class Irreducibility(str, Enum):
    PROVED = "Proved"
    UNVERIFIED = "Unverified"


def irreducibility_evidence(p: IntPolynomial) -> tuple[Irreducibility, str]:
    """Rational-root test, then factorization patterns modulo primes below 100.

    A single prime with an irreducible reduction proves irreducibility; so
    does a set of primes whose factor-degree patterns admit no common proper
    subset sum (a factor over Z would reduce to a product of factors mod
    every prime).
    """
    if p.degree == 1:
        return Irreducibility.PROVED, "degree 1"
    roots = rational_roots(p)
    if roots:
        raise BadInput(f"{p} is reducible: rational root {roots[0]}")
    possible = set(range(1, p.degree))
    used = []
    for prime in _primes_below(100):
        if p.leading % prime == 0:
            continue
        degrees = factor_degrees_mod(list(p.coeffs), prime)
        if degrees is None:
            continue
        if degrees == [p.degree]:
            return Irreducibility.PROVED, f"irreducible mod {prime}"
        before = len(possible)
        possible &= _subset_sums(degrees)
        if len(possible) < before:
            used.append(prime)
        if not possible:
            return Irreducibility.PROVED, "factor degree patterns mod " + ",".join(map(str, used))
    return Irreducibility.UNVERIFIED, "no rational roots; modular patterns inconclusive below 100"


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

class Classification(str, Enum):
    PV = "PV"
    SALEM = "Salem"
    NEITHER = "Neither"


@dataclass(frozen=True, eq=False)
class AlgebraicNumber:
    """The unique real root > 1 of ``minpoly`` together with its conjugate data."""

    minpoly: IntPolynomial
    alpha_interval: tuple[Fraction, Fraction]
    conjugates: tuple[ConjugateDisc, ...]
    counts: UnitCircleCounts
    classification: Classification
    irreducibility: Irreducibility
    irreducibility_note: str = ""
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def degree(self) -> int:
        return self.minpoly.degree

    @property
    def conjugate_bits(self) -> int:
        return self.conjugates[0].bits

    def rational_value(self) -> Optional[Fraction]:
        """alpha itself when the degree is 1."""
        if self.degree != 1:
            return None
        a0, a1 = self.minpoly.coeffs
        return Fraction(-a0, a1)

    def enclosure(self, bits: int) -> tuple[int, int]:
        """Integers ``lo <= hi`` with ``lo / 2^bits <= alpha <= hi / 2^bits``."""
        key = ("enc", bits)
        hit = self._cache.get(key)
        if hit is None:
            r = self.rational_value()
            if r is not None:
                scaled = r * 2**bits
                hit = (math.floor(scaled), math.ceil(scaled))
            else:
                lo, hi = self.alpha_interval
                hit = refine_root(self.minpoly.coeffs, lo, hi, bits)
            self._cache[key] = hit
        return hit

    def log2_upper(self) -> float:
        return math.log2(float(self.alpha_interval[1])) + 1e-9

    def value(self, prec: int = 53) -> mpmath.mpf:
        lo, hi = self.enclosure(prec + 8)
        with mp.workprec(prec + 8):
            return mpmath.mpf(lo + hi) / 2 ** (prec + 9)

    def conjugate_discs(self, bits: int) -> list[ConjugateDisc]:
        """Certified discs for all ``d`` conjugates at ``bits`` (cached per call site)."""
        if bits <= self.conjugate_bits:
            return list(self.conjugates)
        key = ("conj", bits)
        hit = self._cache.get(key)
        if hit is None:
            hit = certified_roots(self.minpoly.coeffs, bits, max(bits, default_precision_cap()))
            self._cache[key] = hit
        return list(hit)

    def conjugate_values(self, prec: int) -> list[mpmath.mpc]:
        """All ``d`` conjugates at ``prec`` bits, alpha first, then by decreasing modulus."""
        discs = self.conjugate_discs(prec + 16)
        with mp.workprec(prec + 16):
            vals = [d_.center(prec + 16) for d_ in discs]
            a = self.value(prec + 16)
            vals.sort(key=lambda z: (abs(z - a) > 2 ** (-prec // 2), -abs(z), -mpmath.im(z)))
        return vals


def is_pv(a: AlgebraicNumber) -> bool:
    return a.classification is Classification.PV


def is_salem(a: AlgebraicNumber) -> bool:
    return a.classification is Classification.SALEM


def _isolate_alpha(c) -> tuple[Fraction, Fraction]:
    n_above = count_real_roots(c, 1, None)
    if n_above == 0:
        raise NoRootAboveOne("no real root greater than 1")
    if n_above > 1:
        raise AmbiguousRoot(f"{n_above} real roots greater than 1 (input is reducible)")
    (lo, hi), = isolate_real_roots(c, 1, None)
    chain = sturm_chain(c)
    while lo <= 1:
        mid = (lo + hi) / 2
        if count_real_roots(c, 1, mid, chain) == 0:
            lo = mid
        else:
            hi = mid
    return lo, hi


def classify(p: IntPolynomial, precision: int = 128, cap: Optional[int] = None) -> AlgebraicNumber:
    """Classify the unique real root > 1 of ``p`` as PV, Salem or neither."""
    if isinstance(p, str):
        p = IntPolynomial.parse(p)
    c = list(p.coeffs)
    if _deg(_gcd(c, _deriv(c))) > 0:
        raise NotSquarefree(f"{p} has a repeated root")
    interval = _isolate_alpha(c)
    status, note = irreducibility_evidence(p)
    counts = unit_circle_counts(p, precision, cap)
    discs = certified_roots(c, precision, cap)
    d = p.degree
    if p.is_monic() and counts.inside == d - 1 and counts.on == 0:
        kind = Classification.PV
    elif (
        p.is_monic()
        and counts.on >= 1
        and counts.outside == 1
        and p.is_self_reciprocal()
    ):
        kind = Classification.SALEM
    else:
        kind = Classification.NEITHER
    return AlgebraicNumber(
        minpoly=p,
        alpha_interval=interval,
        conjugates=tuple(discs),
        counts=counts,
        classification=kind,
        irreducibility=status,
        irreducibility_note=note,
    )


def conjugate_arguments(a: AlgebraicNumber, precision: int = 64) -> list[AngleInterval]:
    """Arguments in (0, pi) of the upper-half-plane unit-circle conjugates.

    Each angle is an interval of width at most ``2^-precision`` with endpoints
    carried at higher working precision, sorted ascending.
    """
    if a.classification is not Classification.SALEM:
        raise NotSalem(f"{a.minpoly} is classified {a.classification.value}, not Salem")
    key = ("args", precision)
    hit = a._cache.get(key)
    if hit is not None:
        return list(hit)
    h = chebyshev_transform(list(a.minpoly.coeffs))
    out = []
    for lo, hi in isolate_real_roots(h, -2, 2):
        # sin(phi) >= sqrt(1 - max(x^2)/4) bounds the arccos slope
        xmax = max(abs(lo), abs(hi))
        if xmax >= 2:
            xmax = max(abs(lo), abs(hi)) - Fraction(1, 2**20)
        slack = 4 + max(0, math.ceil(-0.5 * math.log2(max(1e-300, 1 - float(xmax) ** 2 / 4))))
        bits = precision + slack + 8
        while True:
            A, B = refine_root(h, lo, hi, bits)
            with mp.workprec(bits + 32):
                scale = mpmath.mpf(2) ** -bits
                pad = mpmath.mpf(2) ** -(bits + 12)
                phi_lo = mpmath.acos(min(mpmath.mpf(1), B * scale / 2)) - pad
                phi_hi = mpmath.acos(max(mpmath.mpf(-1), A * scale / 2)) + pad
                ok = phi_hi - phi_lo <= mpmath.mpf(2) ** -precision
            if ok:
                out.append(AngleInterval(phi_lo, phi_hi))
                break
            bits *= 2
            if bits > max(4 * precision + 256, default_precision_cap()):
                raise PrecisionExhausted("conjugate argument not resolved")
    out.sort(key=lambda iv: iv.lo)
    a._cache[key] = tuple(out)
    return out
