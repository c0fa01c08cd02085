"""Certified orbits ``x_n = floor(L xi alpha^n)``, ``y_n = {L xi alpha^n}``.

Two paths produce the same samples.  When alpha is rational (degree 1) the
exact path multiplies fractions.  Otherwise the adaptive path runs a
fixed-point interval recurrence ``v_n = v_{n-1} * alpha`` with outward
rounding; a sample is emitted only when its enclosure certifies
``floor(v_n * 2^resolution)``.  On a straddle the sample is first tested
symbolically (is ``L xi alpha^n`` rational?) and otherwise recomputed at
doubled precision until it certifies or hits the cap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .errors import BadInput, BaseMismatch, InconsistentSample, PrecisionExhausted
from .field import FieldElement, fixed_mul
from .poly_algebra import AlgebraicNumber, IntPolynomial, default_precision_cap, length

try:
    from gmpy2 import mpz
except ImportError:  # pragma: no cover
    mpz = int

GUARD_BITS = 64


@dataclass(frozen=True)
class OrbitSample:
    n: int
    x: int
    y: Fraction
    resolution: int
    bits_used: int
    exact: bool

    @property
    def norm(self) -> Fraction:
        """Distance of ``L xi alpha^n`` to the nearest integer."""
        return min(self.y, 1 - self.y)

    def csv_row(self) -> str:
        if self.exact:
            y = f"{self.y.numerator}/{self.y.denominator}" if self.y.denominator != 1 else str(self.y.numerator)
        else:
            y = fixed_point(self.y, self.resolution)
        return f"{self.n},{self.x},{y},{self.bits_used},{str(self.exact).lower()}"


CSV_HEADER = "n,x_n,y_n,bits_used,exact"


def fixed_point(y: Fraction, resolution: int) -> str:
    """Truncated decimal with enough digits to carry ``resolution`` bits."""
    digits = math.ceil(resolution * math.log10(2)) + 1
    scaled = (y.numerator * 10**digits) // y.denominator
    whole, frac = divmod(scaled, 10**digits)
    return f"{whole}.{frac:0{digits}d}"


def write_csv(samples: Iterable[OrbitSample]) -> str:
    return "\n".join([CSV_HEADER] + [s.csv_row() for s in samples]) + "\n"


@dataclass(frozen=True)
class OrbitConfig:
    """``N``: horizon; ``resolution``: certified bits of ``y_n``;
    ``precision_cap``: bit ceiling for straddle refinement (``None`` picks
    ``max(POWFRAC_PRECISION_CAP, 2 * base)``); ``L_scale``: multiplier on xi."""

    N: int
    resolution: int = 64
    precision_cap: Optional[int] = None
    L_scale: int = 1
    method: str = "auto"
    start: int = 1

    def __post_init__(self):
        if self.N < 1:
            raise BadInput("horizon N must be at least 1")
        if self.resolution < 16:
            raise BadInput("resolution must be at least 16 bits")
        if self.L_scale < 1:
            raise BadInput("L_scale must be a positive integer")
        if self.method not in ("auto", "adaptive", "exact"):
            raise BadInput(f"unknown method {self.method!r}")
        if not 1 <= self.start <= self.N:
            raise BadInput("start must lie in [1, N]")

    def base_bits(self, a: AlgebraicNumber) -> int:
        growth = math.ceil(self.N * max(a.log2_upper(), 0.0))
        extra = max(0, self.L_scale.bit_length())
        return self.resolution + growth + GUARD_BITS + self.N.bit_length() + extra

    def effective_cap(self, a: AlgebraicNumber) -> int:
        base = self.base_bits(a)
        if self.precision_cap is None:
            return max(default_precision_cap(), 2 * base)
        if self.precision_cap < base:
            raise BadInput(
                f"precision cap {self.precision_cap} is below the {base} bits the horizon needs"
            )
        return self.precision_cap


def as_field_element(xi, a: AlgebraicNumber) -> FieldElement:
    if isinstance(xi, FieldElement):
        if xi.base is not a:
            raise BaseMismatch("xi is defined over a different algebraic number")
        return xi
    if isinstance(xi, str):
        return FieldElement.parse(a, xi)
    return FieldElement.rational(a, Fraction(xi))


def iterate(xi: Union[FieldElement, Fraction, int, str], a: AlgebraicNumber, cfg: OrbitConfig) -> list[OrbitSample]:
    """Samples for ``n = cfg.start .. cfg.N`` of the orbit of ``cfg.L_scale * xi``."""
    xi = as_field_element(xi, a)
    if not xi.is_positive():
        raise BadInput("xi must be positive")
    method = cfg.method
    if method == "auto":
        method = "exact" if a.degree == 1 else "adaptive"
    if method == "exact":
        if a.degree != 1:
            raise BadInput("the exact path needs a rational alpha (degree 1)")
        return _iterate_exact(xi, a, cfg)
    return _iterate_adaptive(xi, a, cfg)


def _exact_sample(n, value: Fraction, cfg, bits_used=0) -> OrbitSample:
    x = math.floor(value)
    return OrbitSample(n, x, value - x, cfg.resolution, bits_used, True)


def _iterate_exact(xi, a, cfg):
    alpha = a.rational_value()
    v = xi.rational_value() * cfg.L_scale
    out = []
    for n in range(1, cfg.N + 1):
        v *= alpha
        if n >= cfg.start:
            out.append(_exact_sample(n, v, cfg))
    return out


def _certified(enc, bits, res):
    shift = bits - res
    lo, hi = enc[0] >> shift, enc[1] >> shift
    return lo if lo == hi else None


def _sample_from_floor(n, F, cfg, bits):
    res = cfg.resolution
    return OrbitSample(n, F >> res, Fraction(F & ((1 << res) - 1), 1 << res), res, bits, False)


def _power_enclosure(a, n, bits):
    """Fixed-point enclosure of ``alpha^n`` by square-and-multiply."""
    A = a.enclosure(bits)
    result = (1 << bits, 1 << bits)
    while n:
        if n & 1:
            result = fixed_mul(result, A, bits)
        A = fixed_mul(A, A, bits)
        n >>= 1
    return result


def _iterate_adaptive(xi, a, cfg):
    res = cfg.resolution
    W = cfg.base_bits(a)
    cap = cfg.effective_cap(a)
    scaled = xi * cfg.L_scale
    a_lo, a_hi = map(mpz, a.enclosure(W))
    v_lo, v_hi = map(mpz, scaled.enclosure(W))
    shift = W - res
    out = []
    for n in range(1, cfg.N + 1):
        # alpha > 1 is positive, so the product bounds only depend on the signs of v
        v_lo = (v_lo * (a_lo if v_lo >= 0 else a_hi)) >> W
        v_hi = -((-(v_hi * (a_hi if v_hi >= 0 else a_lo))) >> W)
        if n < cfg.start:
            continue
        F = v_lo >> shift
        if F == v_hi >> shift:
            out.append(_sample_from_floor(n, int(F), cfg, W))
        else:
            out.append(_resolve_straddle(n, scaled, a, cfg, W, cap))
    return out


def _resolve_straddle(n, scaled, a, cfg, W, cap):
    exact = (scaled * FieldElement.alpha_power(a, n)).rational_value()
    if exact is not None:
        return _exact_sample(n, exact, cfg, W)
    bits = 2 * W
    while bits <= cap:
        enc = fixed_mul(scaled.enclosure(bits), _power_enclosure(a, n, bits), bits)
        F = _certified(enc, bits, cfg.resolution)
        if F is not None:
            return _sample_from_floor(n, F, cfg, bits)
        bits *= 2
    raise PrecisionExhausted(f"floor at n={n} not certified within {cap} bits")


# ---------------------------------------------------------------------------
# s_n and the smallness evidence
# ---------------------------------------------------------------------------

def s_sequence(samples: Sequence[OrbitSample], p: IntPolynomial) -> dict[int, int]:
    """``s_n = -(a_0 x_n + ... + a_d x_{n+d})`` for every fully covered ``n``.

    The fractional side ``a_0 y_n + ... + a_d y_{n+d}`` is checked against it
    within the truncation error of the reported ``y``.
    """
    by_n = {s.n: s for s in samples}
    a = p.coeffs
    d = p.degree
    bound = length(p) - 1
    out = {}
    for n in sorted(by_n):
        window = [by_n.get(n + i) for i in range(d + 1)]
        if any(w is None for w in window):
            continue
        s_int = -sum(ai * w.x for ai, w in zip(a, window))
        s_frac = sum(ai * w.y for ai, w in zip(a, window))
        slack = sum(abs(ai) * Fraction(1, 1 << w.resolution) for ai, w in zip(a, window) if not w.exact)
        if abs(s_frac - s_int) > slack:
            raise InconsistentSample(f"s_{n}: integer side {s_int} vs fractional side {float(s_frac)}")
        if abs(s_int) > bound:
            raise InconsistentSample(f"|s_{n}| = {abs(s_int)} exceeds L(alpha) - 1 = {bound}")
        out[n] = s_int
    return out


@dataclass(frozen=True)
class SmallnessReport:
    holds: bool
    first_violation: Optional[int]
    sup_norm: Fraction
    threshold: Fraction


def smallness_check(samples: Sequence[OrbitSample], p: IntPolynomial) -> SmallnessReport:
    """Does ``||xi alpha^n|| < 1 / L(alpha)`` hold on every sampled ``n``?"""
    if not samples:
        raise BadInput("smallness_check needs at least one sample")
    threshold = Fraction(1, length(p))
    first = None
    sup = Fraction(0)
    for s in samples:
        norm = s.norm
        sup = max(sup, norm)
        if first is None and norm >= threshold:
            first = s.n
    return SmallnessReport(first is None, first, sup, threshold)
