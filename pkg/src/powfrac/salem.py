"""Salem numbers: the cosine sums U, V, H, R_n, the period q, Kronecker search and density."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import gmpy2
import mpmath
import numpy as np
from mpmath import mp

from .analyze import pure_period_mod
from .errors import BadInput, InternalInconsistency, NotSalem
from .field import FieldElement, trace_sequence
from .orbit import OrbitSample, as_field_element
from .poly_algebra import AlgebraicNumber, Classification, conjugate_arguments


def tag_mpf(x, bits: int) -> dict:
    digits = max(5, int(bits * math.log10(2)))
    return {"value": mpmath.nstr(x, digits, strip_zeros=False), "bits": bits}


@dataclass(frozen=True)
class SalemContext:
    """Everything the near-integer argument needs for one pair ``(alpha, xi)``.

    ``phis`` are the arguments in (0, pi) of the unit-circle conjugates, ``U``
    and ``V`` the cosine and sine sums of the coordinates of ``L xi`` at each
    angle, ``q`` the pure period of the traces modulo ``L`` and
    ``ell_residue = b_q mod L``.
    """

    a: AlgebraicNumber
    xi: FieldElement
    phis: tuple
    U_vals: tuple
    V_vals: tuple
    H: mpmath.mpf
    q: int
    ell_residue: int
    precision: int
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def m(self) -> int:
        return len(self.phis)

    @property
    def L(self) -> int:
        return self.xi.L

    @property
    def amplitudes(self) -> list:
        with mp.workprec(self.precision):
            return [mpmath.sqrt(u * u + v * v) for u, v in zip(self.U_vals, self.V_vals)]

    def to_json(self) -> dict:
        p = self.precision
        return {
            "minpoly": str(self.a.minpoly),
            "xi": str(self.xi),
            "L": self.L,
            "m": self.m,
            "phis": [tag_mpf(x, p) for x in self.phis],
            "U": [tag_mpf(x, p) for x in self.U_vals],
            "V": [tag_mpf(x, p) for x in self.V_vals],
            "H": tag_mpf(self.H, p),
            "q": self.q,
            "ell_residue": self.ell_residue,
        }


def build_context(a: AlgebraicNumber, xi, precision: int = 128) -> SalemContext:
    if a.classification is not Classification.SALEM:
        raise NotSalem(f"{a.minpoly} is classified {a.classification.value}, not Salem")
    xi = as_field_element(xi, a)
    angles = conjugate_arguments(a, precision + 16)
    with mp.workprec(precision + 32):
        phis = tuple(iv.mid for iv in angles)
        U = tuple(mpmath.fsum(e * mpmath.cos(k * phi) for k, e in enumerate(xi.e)) for phi in phis)
        V = tuple(mpmath.fsum(e * mpmath.sin(k * phi) for k, e in enumerate(xi.e)) for phi in phis)
        H = mpmath.fsum(mpmath.sqrt(u * u + v * v) for u, v in zip(U, V))
    if H < mpmath.mpf(2) ** -(precision // 2):
        raise InternalInconsistency("H vanished numerically; the input is probably corrupt")
    d = a.degree
    coeffs = a.minpoly.coeffs
    L = xi.L
    init = trace_sequence(xi, d)
    period = pure_period_mod([coeffs[k] for k in range(d - 1, -1, -1)], init, L)
    q = period.period
    ell = _trace_mod(xi, q, L)
    return SalemContext(a, xi, phis, U, V, H, q, ell, precision)


def _trace_mod(xi: FieldElement, n: int, L: int) -> int:
    """``b_n mod L`` by running the trace recurrence modulo L."""
    coeffs = xi.base.minpoly.coeffs
    d = len(coeffs) - 1
    b = [x % L for x in trace_sequence(xi, d)]
    while len(b) < n:
        b.append(-sum(coeffs[i] * b[len(b) - d + i] for i in range(d)) % L)
    return b[n - 1]


def _phase(phi, k: int):
    """``k * phi`` reduced into [0, 2 pi) with enough guard bits for the product."""
    extra = max(1, int(k).bit_length())
    with mp.workprec(mp.prec + extra):
        return mpmath.fmod(phi * k, 2 * mpmath.pi)


def _to_mpfr(x: mpmath.mpf):
    """Exact conversion (the current MPFR precision must hold the mantissa)."""
    return gmpy2.mul_2exp(gmpy2.mpfr(int(x.man)), int(x.exp)) if x else gmpy2.mpfr(0)


def _mpfr_terms(ctx: SalemContext):
    key = ("mpfr", ctx.precision)
    hit = ctx._cache.get(key)
    if hit is None:
        with gmpy2.context(gmpy2.get_context(), precision=ctx.precision + 32):
            hit = [tuple(map(_to_mpfr, t)) for t in zip(ctx.phis, ctx.U_vals, ctx.V_vals)]
            hit.append(gmpy2.const_pi() * 2)
        ctx._cache[key] = hit
    return hit


def residual_R(ctx: SalemContext, n: int):
    """``R_n = sum_j U_j cos(q n phi_j) - V_j sin(q n phi_j)``.

    Phases ``q n phi_j`` are reduced mod 2 pi with guard bits for the size of
    ``q n``; the arithmetic runs in MPFR.
    """
    *terms, two_pi = _mpfr_terms(ctx)
    k = ctx.q * n
    with gmpy2.context(gmpy2.get_context(), precision=ctx.precision + 32 + k.bit_length()):
        total = gmpy2.mpfr(0)
        for phi, u, v in terms:
            t = gmpy2.fmod(phi * k, two_pi)
            total += u * gmpy2.cos(t) - v * gmpy2.sin(t)
        man, exp = total.as_mantissa_exp()
    with mp.workprec(ctx.precision):
        return mpmath.ldexp(mpmath.mpf(int(man)), int(exp))


def _small_term(ctx: SalemContext, n: int, prec: int):
    """Contribution of the conjugate ``1/alpha`` to ``Tr(L xi alpha^n)``."""
    with mp.workprec(prec):
        inv = 1 / ctx.a.value(prec)
        return mpmath.fsum(e * inv ** (k + n) for k, e in enumerate(ctx.xi.e))


def _cosine_sum(ctx: SalemContext, n: int, prec: int):
    with mp.workprec(prec):
        total = mpmath.mpf(0)
        for phi, u, v in zip(ctx.phis, ctx.U_vals, ctx.V_vals):
            t = _phase(phi, n)
            total += u * mpmath.cos(t) - v * mpmath.sin(t)
        return total


@dataclass(frozen=True)
class ClosureReport:
    max_residual: mpmath.mpf
    worst_n: int
    checked: int
    precision: int

    def to_json(self) -> dict:
        return {"max_residual": tag_mpf(self.max_residual, 53), "worst_n": self.worst_n,
                "checked": self.checked, "precision": self.precision}


def trace_closure(ctx: SalemContext, samples: Sequence[OrbitSample], precision: int = 256) -> ClosureReport:
    """Residual of ``b_n = L x_n + L y_n + (1/alpha term) + 2 (cosine sum)`` over the samples.

    The samples are those of ``xi`` itself (``L_scale = 1``).
    """
    if ctx.precision < precision:
        ctx = build_context(ctx.a, ctx.xi, precision)
    N = max(s.n for s in samples)
    b = trace_sequence(ctx.xi, N)
    L = ctx.L
    worst, worst_n = mpmath.mpf(0), 0
    with mp.workprec(precision):
        for s in samples:
            y = mpmath.mpf(s.y.numerator) / s.y.denominator
            rhs = L * s.x + L * y + _small_term(ctx, s.n, precision) + 2 * _cosine_sum(ctx, s.n, precision)
            r = abs(b[s.n - 1] - rhs)
            if r > worst:
                worst, worst_n = r, s.n
    return ClosureReport(worst, worst_n, len(samples), precision)


@dataclass(frozen=True)
class NearIntegerRow:
    n: int
    v: mpmath.mpf
    distance: mpmath.mpf
    nearest: int
    residue: int


@dataclass(frozen=True)
class NearIntegerReport:
    """``v_n = L y_{qn} + 2 R_n`` should approach integers congruent to ``b_q`` mod L.

    Only the congruence and the nearness are tested; convergence to a single
    integer is not observable at a finite horizon and is left unverified.
    """

    rows: tuple[NearIntegerRow, ...]
    tail_start: int
    tail_max_distance: mpmath.mpf
    envelope: tuple[tuple[int, mpmath.mpf], ...]
    residues_consistent: bool
    observed_integers: dict = field(default_factory=dict)
    limit_claim: str = "unverified"

    def to_json(self, bits: int = 53) -> dict:
        return {
            "tail_start": self.tail_start,
            "tail_max_distance": tag_mpf(self.tail_max_distance, bits),
            "envelope": [[n, tag_mpf(v, bits)] for n, v in self.envelope],
            "residues_consistent": self.residues_consistent,
            "observed_integers": {str(k): v for k, v in sorted(self.observed_integers.items())},
            "limit_claim": self.limit_claim,
            "checked": len(self.rows),
        }


def near_integer_check(
    ctx: SalemContext, samples: Sequence[OrbitSample], horizon: Optional[int] = None, tail_start: Optional[int] = None
) -> NearIntegerReport:
    """Rows for every ``n`` with ``q n`` sampled and ``n <= horizon``."""
    by_n = {s.n: s for s in samples}
    q, L = ctx.q, ctx.L
    ns = sorted(k // q for k in by_n if k % q == 0)
    if horizon is not None:
        ns = [n for n in ns if n <= horizon]
    if not ns:
        raise BadInput("no samples at multiples of q")
    tail_start = ns[len(ns) // 5] if tail_start is None else tail_start
    rows = []
    with mp.workprec(ctx.precision):
        for n in ns:
            y = by_n[q * n].y
            v = L * mpmath.mpf(y.numerator) / y.denominator + 2 * residual_R(ctx, n)
            k = int(mpmath.nint(v))
            rows.append(NearIntegerRow(n, v, abs(v - k), k, k % L))
    tail = [r for r in rows if r.n >= tail_start] or rows[-1:]
    sup = mpmath.mpf(0)
    suffix = []
    for r in reversed(rows):
        sup = max(sup, r.distance)
        suffix.append((r.n, sup))
    suffix.reverse()
    step = max(1, len(suffix) // 8)
    envelope = tuple(suffix[::step])
    consistent = all(r.residue == ctx.ell_residue for r in tail)
    observed = Counter(r.nearest for r in tail)
    return NearIntegerReport(tuple(rows), tail_start, max(r.distance for r in tail), envelope, consistent, dict(observed))


def kronecker_search(
    phis: Sequence,
    targets: Sequence,
    tol: float,
    n_max: int,
    U: Optional[Sequence] = None,
    V: Optional[Sequence] = None,
    q: int = 1,
    chunk: int = 1 << 16,
) -> Optional[int]:
    """Smallest ``n <= n_max`` with ``U_j cos(q n phi_j) - V_j sin(q n phi_j)`` within
    ``tol * A_j`` of ``theta_j * A_j`` for every j, ``A_j = sqrt(U_j^2 + V_j^2)``.

    A float64 screen with a slackened tolerance proposes candidates; each is
    confirmed in multiprecision before it is returned.
    """
    m = len(phis)
    if len(targets) != m:
        raise BadInput(f"need {m} targets, got {len(targets)}")
    if tol <= 0:
        raise BadInput("tol must be positive")
    U = [1] * m if U is None else list(U)
    V = [0] * m if V is None else list(V)
    with mp.workprec(max(mp.prec, 128)):
        amp = [mpmath.sqrt(mpmath.mpf(u) ** 2 + mpmath.mpf(v) ** 2) for u, v in zip(U, V)]
        # U cos t - V sin t = A cos(t + psi)
        psi = [mpmath.atan2(v, u) for u, v in zip(U, V)]
        two_pi = 2 * mpmath.pi
        step = [mpmath.fmod(q * mpmath.mpf(phi), two_pi) for phi in phis]
        step_hi = np.array([float(s) for s in step])
        step_lo = np.array([float(s - mpmath.mpf(float(s))) for s in step])
        psi_f = np.array([float(p) for p in psi])
    theta = np.array([float(t) for t in targets])
    slack = 1e-9
    for first in range(1, n_max + 1, chunk):
        n = np.arange(first, min(first + chunk, n_max + 1), dtype=np.float64)[:, None]
        t = np.fmod(n * step_hi, 2 * np.pi) + n * step_lo + psi_f
        ok = np.all(np.abs(np.cos(t) - theta) <= tol + slack, axis=1)
        for idx in np.flatnonzero(ok):
            cand = int(n[idx, 0])
            if _confirm(cand, step, psi, theta, tol):
                return cand
    return None


def _confirm(n, step, psi, theta, tol) -> bool:
    with mp.workprec(max(mp.prec, 128) + n.bit_length()):
        return all(
            abs(mpmath.cos(mpmath.fmod(n * s, 2 * mpmath.pi) + p) - mpmath.mpf(float(th))) <= tol
            for s, p, th in zip(step, psi, theta)
        )


@dataclass(frozen=True)
class DensityReport:
    interval: tuple[Fraction, Fraction]
    max_gap: Fraction
    histogram: tuple[int, ...]
    samples: int
    horizon: int
    label: str = "empirical evidence for an interval of limit points, not a proof"

    @property
    def length(self) -> Fraction:
        return self.interval[1] - self.interval[0]

    def to_json(self, bits: int = 64) -> dict:
        from .analyze import tagged

        return {
            "interval": [str(self.interval[0]), str(self.interval[1])],
            "length": str(self.length),
            "max_gap": tagged(self.max_gap, bits),
            "bins": len(self.histogram),
            "samples": self.samples,
            "horizon": self.horizon,
            "label": self.label,
        }

    def histogram_csv(self) -> str:
        k = len(self.histogram)
        lines = ["bin_lo,bin_hi,count"]
        lines += [f"{Fraction(i, k)},{Fraction(i + 1, k)},{c}" for i, c in enumerate(self.histogram)]
        return "\n".join(lines) + "\n"


def density_scan(
    ctx: Optional[SalemContext], samples: Sequence[OrbitSample], bins: int = 50, horizon: Optional[int] = None
) -> DensityReport:
    """Histogram of ``y_{qn}`` and the longest run of consecutive nonempty bins.

    ``ctx=None`` skips the Salem gate and uses ``q = 1``.
    """
    if bins < 1:
        raise BadInput("bins must be positive")
    q = 1 if ctx is None else ctx.q
    ys = [s.y for s in samples if s.n % q == 0 and (horizon is None or s.n // q <= horizon)]
    if not ys:
        raise BadInput("no samples to scan")
    hist = [0] * bins
    for y in ys:
        hist[min(bins - 1, math.floor(y * bins))] += 1
    best, run_start, best_start = 0, None, 0
    for i, c in enumerate(hist + [0]):
        if c and run_start is None:
            run_start = i
        elif not c and run_start is not None:
            if i - run_start > best:
                best, best_start = i - run_start, run_start
            run_start = None
    lo, hi = Fraction(best_start, bins), Fraction(best_start + best, bins)
    inside = sorted(y for y in ys if lo <= y < hi)
    gap = max((b - a for a, b in zip(inside, inside[1:])), default=Fraction(0))
    n_hi = max(s.n for s in samples) // q if horizon is None else horizon
    return DensityReport((lo, hi), gap, tuple(hist), len(ys), n_hi)
