"""Acceptance criteria, one pass/fail line each.

Run with ``pytest tests/test_acceptance.py`` or directly as a script; the
lines are echoed in an "acceptance criteria" section at the end either way.
"""

import json
import math
import sys
import time
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings

from powfrac.analyze import (
    assign_eta,
    cluster_limit_points,
    find_vector_collision,
    pure_period_mod,
    verify_contraction,
)
from powfrac.cli import main
from powfrac.field import FieldElement, trace_sequence
from powfrac.orbit import OrbitConfig, iterate, s_sequence
from powfrac.poly_algebra import Classification, IntPolynomial, classify
from powfrac.salem import build_context, density_scan, kronecker_search, trace_closure

import conftest
from conftest import CORPUS, LEHMER, number
from test_analyze import brute_period, unit_recurrences


def record(k, ok, detail):
    line = f"ACCEPTANCE {k}: {'PASS' if ok else 'FAIL'} {detail}"
    conftest.ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def test_1_rational_orbit_oracle():
    t0 = time.perf_counter()
    samples = iterate(1, number("three_halves"), OrbitConfig(300, method="adaptive"))
    elapsed = time.perf_counter() - t0
    bad = [
        s.n for s in samples
        if (s.x, s.y) != (3**s.n // 2**s.n, Fraction(((3**s.n % 2**s.n) << 64) // 2**s.n, 2**64))
    ]
    record(1, not bad and elapsed < 5, f"3/2 orbit n<=300 matches exact rationals ({len(bad)} mismatches, {elapsed:.2f}s)")


def test_2_1_golden_centers():
    rep = cluster_limit_points(iterate(1, number("golden"), OrbitConfig(200)), Fraction(1, 100))
    worst = max(min(c, 1 - c) for c in rep.centers)
    record("2.1", worst < Fraction(1, 10**9), f"golden xi=1 N=200 centers within {float(worst):.2e} of {{0, 1}}")


def test_2_2_golden_envelope():
    # stated envelope: min(y_n, 1 - y_n) <= 0.62^(n+1) on [5, 60]
    samples = iterate(1, number("golden"), OrbitConfig(60))
    viol = [s.n for s in samples if 5 <= s.n <= 60 and min(s.y, 1 - s.y) > Fraction(62, 100) ** (s.n + 1)]
    record("2.2", not viol, f"golden envelope 0.62^(n+1) on [5, 60]: {len(viol)} violations (observed distance is 0.618^n)")


def test_2_3_golden_third():
    a = number("golden")
    rep = cluster_limit_points(iterate(FieldElement(a, (1, 1), 3), a, OrbitConfig(200)), Fraction(1, 100))
    worst = max(min(abs(c - Fraction(k, 3)) for k in range(4)) for c in rep.centers)
    record("2.3", worst < Fraction(1, 10**6), f"golden xi=(1+alpha)/3 centers within {float(worst):.2e} of k/3")


def test_3_classification_corpus():
    expect = {
        "z-2": Classification.PV,
        "z^3-z-1": Classification.PV,
        "z^2-3z+1": Classification.PV,
        LEHMER: Classification.SALEM,
        "z^4-z^3-z^2-z+1": Classification.SALEM,
        "2z-3": Classification.NEITHER,
    }
    t0 = time.perf_counter()
    wrong = []
    for text, kind in expect.items():
        p = IntPolynomial.parse(text)
        got = {classify(p, precision=b).classification for b in (128, 256)}
        if got != {kind}:
            wrong.append(text)
    elapsed = time.perf_counter() - t0
    record(3, not wrong and elapsed < 2, f"6 polynomials classified, stable at 128/256 bits ({len(wrong)} wrong, {elapsed:.2f}s)")


_brute_mismatches = []


@settings(max_examples=500, deadline=None, database=None)
@given(unit_recurrences())
def _random_unit_recurrences(case):
    A, init, L = case
    rep = pure_period_mod(A, init, L)
    if rep.preperiod != 0 or rep.period != brute_period(A, init, L):
        _brute_mismatches.append(case)


def test_4_pure_periodicity():
    fib = pure_period_mod([-1, -1], [1, 1], 10)
    luc = pure_period_mod([-1, -1], [2, 1], 3)
    dbl = pure_period_mod([-2], [1], 4)
    _brute_mismatches.clear()
    _random_unit_recurrences()
    ok = (
        (fib.pure, fib.period) == (True, 60)
        and (luc.pure, luc.period) == (True, 8)
        and (dbl.pure, dbl.preperiod) == (False, 2)
        and not _brute_mismatches
    )
    record(4, ok, f"Fibonacci mod 10 period {fib.period}, Lucas mod 3 period {luc.period}, "
                  f"2b mod 4 preperiod {dbl.preperiod}, 500 random unit recurrences ({len(_brute_mismatches)} bad)")


def test_5_vijayaraghavan_counts():
    a = number("three_halves")
    samples = iterate(1, a, OrbitConfig(2000))
    eps = Fraction(1, 100)
    c1 = cluster_limit_points([s for s in samples if s.n <= 1000], eps).count
    c2 = cluster_limit_points(samples, eps).count
    record(5, c1 >= 30 and c2 > c1, f"3/2 eps=0.01 cluster counts N=1000: {c1}, N=2000: {c2}")


def test_6_collision_machinery():
    a = number("golden")
    eps = Fraction(1, 1000)
    rep = cluster_limit_points(iterate(1, a, OrbitConfig(200)), eps, warmup=10)
    etas = assign_eta(rep)
    m, r = find_vector_collision([e for _, e in etas], a.degree, etas[0][0])
    c = verify_contraction(1, a, 1, m, r, eps, 100, start=10)
    bad_s = []
    for name in CORPUS:
        b = number(name)
        s = s_sequence(iterate(1, b, OrbitConfig(300)), b.minpoly)
        bound = sum(abs(x) for x in b.minpoly.coeffs) - 1
        if not all(abs(v) <= bound for v in s.values()):
            bad_s.append(name)
    ok = m - r <= 6 and c.holds and c.max_norm < 2 * eps and not bad_s
    record(6, ok, f"golden collision (m, r) = ({m}, {r}), max norm {float(c.max_norm):.2e} < 2e-3, "
                  f"s-bound on {len(CORPUS)} corpus numbers ({len(bad_s)} bad)")


def test_7_trace_closure():
    a = number("lehmer")
    xi = FieldElement(a, (1,))
    N = 500
    # oracle first: traces as sums over all complex embeddings
    b = trace_sequence(xi, N)
    with mpmath.workprec(256):
        roots = mpmath.polyroots(list(a.minpoly.coeffs)[::-1], maxsteps=400, extraprec=400)
        oracle_ok = all(
            abs(mpmath.fsum(z**n for z in roots).real - b[n - 1]) < 2.0**-200 * max(1, abs(b[n - 1]))
            for n in range(1, N + 1)
        )
    ctx = build_context(a, xi, 256)
    rep = trace_closure(ctx, iterate(xi, a, OrbitConfig(N)), precision=256)
    tol = mpmath.mpf(2) ** -48
    record(7, oracle_ok and rep.max_residual < tol,
           f"Lehmer closure n<=500 residual {mpmath.nstr(rep.max_residual, 3)} < 2^-48 (embedding oracle ok: {oracle_ok})")


def test_8_salem_density():
    a = number("lehmer")
    ctx = build_context(a, 1)
    samples = iterate(1, a, OrbitConfig(40000))
    short = density_scan(ctx, samples, bins=50, horizon=20000)
    full = density_scan(ctx, samples, bins=50, horizon=40000)
    ok = short.length >= Fraction(1, 2) and full.length >= short.length
    record(8, ok, f"Lehmer density run {short.length} at 20000, {full.length} at 40000")


def test_9_kronecker():
    a = number("lehmer")
    ctx = build_context(a, 1)
    t0 = time.perf_counter()
    n = kronecker_search(ctx.phis, [1] * ctx.m, 0.15, 10**6)
    elapsed = time.perf_counter() - t0
    record(9, n is not None and elapsed < 30, f"Lehmer {ctx.m} angles, targets 1, tol 0.15: witness n = {n} ({elapsed:.2f}s)")


def test_10_liouville():
    a = number("two")
    xi = sum(Fraction(1, 2 ** math.factorial(k)) for k in range(6))
    rep = cluster_limit_points(iterate(xi, a, OrbitConfig(100)), Fraction(1, 10**7))
    targets = [Fraction(0), Fraction(1)] + [Fraction(1, 2**k) for k in range(1, 130)]
    worst = max(min(abs(c - t) for t in targets) for c in rep.centers)
    record(10, worst < Fraction(1, 10**6), f"Liouville seed, b=2, N=100: {len(rep.centers)} centers, worst offset {float(worst):.2e}")


THEOREM_RUNS = [
    ("golden", "1", 200),
    ("golden", "(1,1)/3", 200),
    ("two", "1", 200),
    ("plastic", "1", 200),
    ("golden_sq", "1", 200),
    ("three_halves", "1", 2000),
    ("salem4", "1", 2000),
    ("lehmer", "1", 20000),
]


def test_11_replay(tmp_path, capsys):
    results = []
    for i, (name, xi, N) in enumerate(THEOREM_RUNS):
        out = tmp_path / f"run{i}"
        code = main(["theorem-check", CORPUS[name], "--xi", xi, "--N", str(N), "--out", str(out)])
        again = main(["replay", str(out / "manifest.json")])
        capsys.readouterr()
        verdict = json.loads((out / "theorem_check.json").read_text())["verdict"]
        results.append((name, code == 0 and again == 0, verdict))
    bad = [r[0] for r in results if not r[1]]
    record(11, not bad, f"{len(results)} theorem-check manifests replay byte-identical ({len(bad)} differ)")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
