"""Limit-point clustering, the PV check, the collision argument and periodicity."""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Optional, Sequence

from .errors import (
    BadInput,
    EtaAssignmentError,
    NoCollision,
    NoIrrationalPairs,
    PeriodicityViolation,
    ToleranceViolation,
)
from .field import FieldElement
from .orbit import OrbitConfig, OrbitSample, as_field_element, fixed_point, iterate
from .poly_algebra import AlgebraicNumber, IntPolynomial, length

DEFAULT_WARMUP = 10
DEFAULT_DEN_MAX = 64


def _frac(x: Fraction) -> Fraction:
    return x - math.floor(x)


def circle_distance(x: Fraction, y: Fraction) -> Fraction:
    d = _frac(x - y)
    return min(d, 1 - d)


def nearest_int_distance(x) -> Fraction:
    """``||x|| = min({x}, 1 - {x})``."""
    f = _frac(Fraction(x))
    return min(f, 1 - f)


def tagged(x: Fraction, bits: int) -> dict:
    """JSON form of a number together with the resolution it is good to."""
    return {"value": fixed_point(Fraction(x), bits) if x >= 0 else "-" + fixed_point(-Fraction(x), bits), "bits": bits}


# ---------------------------------------------------------------------------
# clustering
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Cluster:
    center: Fraction
    population: int
    maxdev: Fraction
    members: tuple[int, ...] = field(repr=False, default=())
    arc: int = field(repr=False, default=0)

    def to_json(self, bits: int) -> dict:
        return {"center": tagged(self.center, bits), "pop": self.population, "maxdev": tagged(self.maxdev, bits)}


@dataclass(frozen=True)
class LimitPointReport:
    """Desk proxy for the limit set: clusters of ``y_n`` for ``warmup <= n <= horizon``.

    ``separated`` records whether the arcs have the neighbourhood structure
    the collision argument uses: circular centers pairwise more than
    ``2 * epsilon`` apart and every sample within ``epsilon`` of its center.
    For a dense orbit the two cannot hold together; membership is always
    kept and separation is only reported.  ``count`` is the number of arcs
    on R/Z, so a cluster straddling 0 counts once though listed twice.
    """

    clusters: tuple[Cluster, ...]
    epsilon: Fraction
    warmup: int
    horizon: int
    resolution: int
    separated: bool
    count: int
    arc_centers: tuple[Fraction, ...] = ()
    values: tuple[tuple[int, Fraction], ...] = field(repr=False, default=())

    @property
    def centers(self) -> list[Fraction]:
        return [c.center for c in self.clusters]

    def to_json(self) -> dict:
        bits = self.resolution
        return {
            "clusters": [c.to_json(bits) for c in self.clusters],
            "epsilon": tagged(self.epsilon, bits),
            "warmup": self.warmup,
            "horizon": self.horizon,
            "count": self.count,
            "separated": self.separated,
        }


def _retained(samples, warmup):
    return [(s.n, s.y) for s in samples if s.n >= warmup]


def cluster_limit_points(samples: Sequence[OrbitSample], epsilon, warmup: int = DEFAULT_WARMUP) -> LimitPointReport:
    """Cover the retained ``y_n`` on the circle R/Z by arcs of length ``2 * epsilon``.

    The sweep starts just after the widest gap and opens a new arc at the
    first value more than ``2 * epsilon`` past the current arc's start.  The
    center of an arc is its most recent member (largest ``n``), clamped so
    that every member stays within ``epsilon``.  An arc crossing 0 is
    reported twice, at its ``[0, 1]`` endpoints, split by side.
    """
    epsilon = Fraction(epsilon)
    if not 0 < epsilon < Fraction(1, 4):
        raise BadInput("epsilon must lie in (0, 1/4)")
    if not samples:
        raise BadInput("no samples to cluster")
    horizon = max(s.n for s in samples)
    if horizon < warmup:
        raise BadInput("horizon must exceed the warmup")
    resolution = min(s.resolution for s in samples)
    values = _retained(samples, warmup)
    return _cluster_values(values, epsilon, warmup, horizon, resolution)


def _cluster_values(values, epsilon, warmup, horizon, resolution) -> LimitPointReport:
    # everything below runs on integers over one common denominator D
    D = reduce(math.lcm, {y.denominator for _, y in values}, epsilon.denominator)
    Y = [int(y * D) for _, y in values]
    E = int(epsilon * D)
    k = len(Y)
    order = sorted(range(k), key=Y.__getitem__)
    # start after the widest circular gap
    gaps = [Y[order[i + 1]] - Y[order[i]] for i in range(k - 1)] + [Y[order[0]] + D - Y[order[-1]]]
    start = (max(range(k), key=lambda i: (gaps[i], -i)) + 1) % k
    order = order[start:] + order[:start]
    offset = Y[order[0]]

    arcs: list[list[int]] = []
    arc_start = None
    for idx in order:
        u = (Y[idx] - offset) % D
        if arc_start is None or u - arc_start > 2 * E:
            arcs.append([])
            arc_start = u
        arcs[-1].append(idx)

    def dist(a, b):
        t = (a - b) % D
        return min(t, D - t)

    circ_centers = []
    clusters = []
    for j, arc in enumerate(arcs):
        us = [(Y[i] - offset) % D for i in arc]
        tail = max(arc, key=lambda i: values[i][0])
        c_u = min(max((Y[tail] - offset) % D, max(us) - E), min(us) + E)
        c = (c_u + offset) % D
        circ_centers.append(c)
        clusters.extend(_report_arc(arc, j, values, Y, D, c, E, dist))
    separated = all(dist(Y[i], c) <= E for arc, c in zip(arcs, circ_centers) for i in arc) and all(
        dist(circ_centers[i], circ_centers[j]) > 2 * E for i in range(len(arcs)) for j in range(i + 1, len(arcs))
    )
    clusters.sort(key=lambda cl: cl.center)
    arc_centers = tuple(Fraction(c, D) for c in circ_centers)
    return LimitPointReport(
        tuple(clusters), epsilon, warmup, horizon, resolution, separated, len(arcs), arc_centers, tuple(values)
    )


def _report_arc(arc, j, values, Y, D, c, E, dist):
    """One entry, or two when the arc straddles 0: members split by side, centers clipped to [0, 1]."""
    low = [i for i in arc if 2 * Y[i] < D]
    high = [i for i in arc if 2 * Y[i] >= D]
    if not (low and high and dist(c, 0) <= E):
        return [_make_cluster(arc, j, values, Y, D, c, dist)]
    signed = c if 2 * c < D else c - D
    return [
        _make_cluster(low, j, values, Y, D, max(signed, 0), dist),
        _make_cluster(high, j, values, Y, D, min(D + signed, D), dist),
    ]


def _make_cluster(members, j, values, Y, D, center, dist):
    dev = max(dist(Y[i], center) for i in members)
    return Cluster(Fraction(center, D), len(members), Fraction(dev, D), tuple(sorted(values[i][0] for i in members)), j)


def pv_verify(report: LimitPointReport, L: int, tol) -> bool:
    """Is every cluster center within ``tol`` of some ``k / L``?"""
    tol = Fraction(tol)
    return all(abs(c - Fraction(round(c * L), L)) <= tol for c in report.centers)


def scale_and_project(report: LimitPointReport, L: int, tol=None) -> LimitPointReport:
    """Cluster ``{L xi alpha^n} = {L y_n}`` and check it embeds in ``{0, {L mu}, 1}``."""
    if L < 1:
        raise BadInput("L must be a positive integer")
    eps = min(report.epsilon * L, Fraction(24, 100))
    tol = eps if tol is None else Fraction(tol)
    bits = max(16, report.resolution - L.bit_length())
    scaled = [(n, _frac(L * y)) for n, y in report.values]
    out = _cluster_values(scaled, eps, report.warmup, report.horizon, bits)
    targets = [Fraction(0), Fraction(1)] + [_frac(L * c) for c in report.centers]
    for c in out.centers:
        if min(abs(c - t) for t in targets) > tol:
            raise ToleranceViolation(f"scaled center {float(c):.6g} not near {{0, frac(L mu), 1}}")
    return out


# ---------------------------------------------------------------------------
# differences, L and tau
# ---------------------------------------------------------------------------

def rational_approximation(x: Fraction, rat_tol, den_max: int = DEFAULT_DEN_MAX) -> Optional[Fraction]:
    """``p/q`` with ``q <= den_max`` within ``rat_tol`` of ``x`` (best convergent), or None."""
    x = Fraction(x)
    best = x.limit_denominator(den_max)
    return best if abs(x - best) <= Fraction(rat_tol) else None


@dataclass(frozen=True)
class DifferenceStructure:
    differences: tuple[Fraction, ...]
    rational: dict
    L_common: int
    scaled: tuple[Fraction, ...]
    tau: Optional[Fraction]
    tau_pair: Optional[tuple[Fraction, Fraction]]
    proxy: bool = True

    def epsilon_bound(self, p: IntPolynomial) -> Optional[Fraction]:
        """``tau / (2 L(alpha))``: epsilon must stay below this."""
        return None if self.tau is None else self.tau / (2 * length(p))

    def to_json(self, bits: int) -> dict:
        return {
            "differences": [tagged(d, bits) for d in self.differences],
            "rational": {fixed_point(k, bits): f"{v.numerator}/{v.denominator}" for k, v in self.rational.items()},
            "L_common": self.L_common,
            "scaled": [tagged(s, bits) for s in self.scaled],
            "tau": None if self.tau is None else tagged(self.tau, bits),
            "tau_proxy": self.proxy,
        }


def difference_structure(
    report: LimitPointReport,
    a_d: int = 1,
    rat_tol=None,
    den_max: int = DEFAULT_DEN_MAX,
    strict: bool = False,
) -> DifferenceStructure:
    """Differences of centers, the common denominator ``L`` and ``tau``.

    A center counts as rational when a convergent with denominator at most
    ``den_max`` lies within ``rat_tol`` (default ``10 * 2^-resolution``).
    ``tau = min ||a_d (eta - eta')||`` over pairs from the scaled irrational
    centers together with 0 and 1, the pair (1, 0) excluded.
    """
    rat_tol = Fraction(10, 2**report.resolution) if rat_tol is None else Fraction(rat_tol)
    centers = sorted(set(report.centers))
    diffs = sorted({mi - mj for mi in centers for mj in centers if mi >= mj})
    rational = {}
    for x in set(centers) | set(diffs):
        r = rational_approximation(x, rat_tol, den_max)
        if r is not None:
            rational[x] = r
    L = reduce(math.lcm, (r.denominator for r in rational.values()), 1)
    scaled = sorted({_frac(L * mu) for mu in centers if mu not in rational})
    pool = sorted(set(scaled) | {Fraction(0), Fraction(1)})
    tau, pair = None, None
    if scaled:
        for i, eta in enumerate(pool):
            for eta2 in pool[:i]:
                if (eta, eta2) == (Fraction(1), Fraction(0)):
                    continue
                v = nearest_int_distance(a_d * (eta - eta2))
                if tau is None or v < tau:
                    tau, pair = v, (eta, eta2)
        if not 0 < tau < Fraction(1, 2):
            raise ToleranceViolation(f"tau = {float(tau)} outside (0, 1/2)")
    elif strict:
        raise NoIrrationalPairs("every difference was classified rational; tau is undefined")
    return DifferenceStructure(tuple(diffs), rational, L, tuple(scaled), tau, pair)


# ---------------------------------------------------------------------------
# eta assignment, window collision, contraction
# ---------------------------------------------------------------------------

def assign_eta(report: LimitPointReport, epsilon=None) -> list[tuple[int, Fraction]]:
    """Nearest reported center for every retained sample, as ``(n, eta_n)``."""
    epsilon = report.epsilon if epsilon is None else Fraction(epsilon)
    centers = sorted(report.centers)
    out = []
    for n, y in sorted(report.values):
        i = bisect.bisect_left(centers, y)
        eta = min(centers[max(0, i - 1) : i + 1], key=lambda c: (abs(y - c), c))
        if circle_distance(y, eta) > epsilon:
            raise EtaAssignmentError(f"y_{n} is farther than epsilon from every center")
        out.append((n, eta))
    return out


def find_vector_collision(eta_sequence: Sequence, d: int, first_index: int = 1) -> tuple[int, int]:
    """Smallest ``(m, r)``, ``m > r``, with ``Z_m = Z_r`` for ``Z_h = (eta_h, ..., eta_{h+d})``.

    ``eta_sequence[i]`` is ``eta_{first_index + i}``.
    """
    seen: dict[tuple, int] = {}
    for i in range(len(eta_sequence) - d):
        window = tuple(eta_sequence[i : i + d + 1])
        h = first_index + i
        if window in seen:
            return h, seen[window]
        seen[window] = h
    g = len({x for x in eta_sequence if x not in (0, 1)})
    need = (g + 2) ** (d + 1) + d + 1
    raise NoCollision(f"no repeated window among {len(eta_sequence)} terms (pigeonhole bound {need})", need)


@dataclass(frozen=True)
class ContractionReport:
    holds: bool
    max_norm: Fraction
    argmax: int
    bound: Fraction
    lemma1_gate: bool
    xi_prime: str
    horizon: int

    def to_json(self, bits: int) -> dict:
        return {
            "holds": self.holds,
            "max_norm": tagged(self.max_norm, bits),
            "argmax": self.argmax,
            "bound": tagged(self.bound, bits),
            "lemma1_gate": self.lemma1_gate,
            "xi_prime": self.xi_prime,
            "horizon": self.horizon,
        }


def verify_contraction(
    xi,
    a: AlgebraicNumber,
    L: int,
    m: int,
    r: int,
    epsilon,
    horizon: int,
    start: int = 1,
    resolution: int = 64,
    precision_cap: Optional[int] = None,
) -> ContractionReport:
    """Iterate ``xi' = L xi (alpha^m - alpha^r)`` and compare ``sup ||xi' alpha^n||`` with ``2 epsilon``.

    Also reports whether ``2 epsilon < 1 / L(alpha)``, the hypothesis under
    which the smallness lemma applies to ``xi'``.
    """
    if not m > r >= 1:
        raise BadInput("need m > r >= 1")
    epsilon = Fraction(epsilon)
    xi = as_field_element(xi, a)
    xi_prime = xi * L * (FieldElement.alpha_power(a, m) - FieldElement.alpha_power(a, r))
    cfg = OrbitConfig(horizon, resolution=resolution, start=start, precision_cap=precision_cap)
    samples = iterate(xi_prime, a, cfg)
    worst = max(samples, key=lambda s: (s.norm, -s.n))
    bound = 2 * epsilon
    return ContractionReport(
        holds=worst.norm < bound,
        max_norm=worst.norm,
        argmax=worst.n,
        bound=bound,
        lemma1_gate=bound < Fraction(1, length(a.minpoly)),
        xi_prime=str(xi_prime),
        horizon=horizon,
    )


# ---------------------------------------------------------------------------
# periodicity
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PeriodReport:
    pure: bool
    period: int
    preperiod: int
    modulus: int

    def to_json(self) -> dict:
        return {"pure": self.pure, "period": self.period, "preperiod": self.preperiod, "modulus": self.modulus}


def pure_period_mod(A: Sequence[int], init: Sequence[int], L: int, scan: Optional[int] = None) -> PeriodReport:
    """Period of ``b_{k+d} + A_{d-1} b_{k+d-1} + ... + A_0 b_k = 0`` modulo ``L``.

    ``A`` is given as ``(A_{d-1}, ..., A_0)``.  The state windows are scanned
    until the first repeat.  With ``gcd(A_0, L) = 1`` the preperiod must be 0.
    """
    A = list(A)
    init = list(init)
    d = len(A)
    if d == 0 or not init:
        raise BadInput("recurrence coefficients and initial values must be nonempty")
    if len(init) != d:
        raise BadInput(f"need exactly {d} initial values, got {len(init)}")
    if A[-1] == 0:
        raise BadInput("A_0 must be nonzero")
    if L < 1:
        raise BadInput("modulus must be positive")
    scan = 2 * L**d + d if scan is None else scan
    asc = A[::-1]  # A_0 .. A_{d-1}
    state = tuple(x % L for x in init)
    seen = {state: 0}
    for k in range(1, scan + 1):
        nxt = -sum(c * s for c, s in zip(asc, state)) % L
        state = state[1:] + (nxt,)
        if state in seen:
            pre = seen[state]
            report = PeriodReport(pre == 0, k - pre, pre, L)
            if math.gcd(A[-1], L) == 1 and pre != 0:
                raise PeriodicityViolation(f"gcd(A_0, L) = 1 but preperiod is {pre}")
            return report
        seen[state] = k
    raise BadInput(f"no repeated state within scan={scan}")


@dataclass(frozen=True)
class UltimatePeriod:
    period: int
    start: int
    scanned: int
    note: str = "desk-scale evidence over the scanned window, not a proof"


def ultimate_period_scan(seq: Sequence[int], maxT: int, min_coverage: float = 0.5) -> Optional[UltimatePeriod]:
    """Smallest ``(t, n_0)`` with ``b_{n+t} = b_n`` for all ``n >= n_0`` in the window.

    ``n_0`` is 1-based.  The periodic stretch must cover at least
    ``min_coverage`` of the window and two full periods, so a coincidence in
    the last few terms does not count.
    """
    seq = list(seq)
    k = len(seq)
    if maxT >= k / 2:
        raise BadInput("maxT must be below half the sequence length")
    need = math.ceil(min_coverage * k)
    for t in range(1, maxT + 1):
        i = k - t - 1
        while i >= 0 and seq[i] == seq[i + t]:
            i -= 1
        n0 = i + 2
        stretch = k - n0 + 1
        if stretch >= max(2 * t, need):
            return UltimatePeriod(t, n0, k)
    return None
