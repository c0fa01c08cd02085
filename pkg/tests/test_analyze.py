import math
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from powfrac.analyze import (
    Cluster,
    LimitPointReport,
    assign_eta,
    circle_distance,
    cluster_limit_points,
    difference_structure,
    find_vector_collision,
    nearest_int_distance,
    pure_period_mod,
    pv_verify,
    rational_approximation,
    scale_and_project,
    ultimate_period_scan,
    verify_contraction,
)
from powfrac.errors import (
    BadInput,
    EtaAssignmentError,
    NoCollision,
    NoIrrationalPairs,
    PeriodicityViolation,
)
from powfrac.field import FieldElement
from powfrac.orbit import OrbitConfig, OrbitSample, iterate, s_sequence


def fake_samples(ys, start=1):
    return [OrbitSample(start + i, 0, Fraction(y), 64, 0, True) for i, y in enumerate(ys)]


# --- clustering -----------------------------------------------------------------

def test_golden_two_endpoints(golden):
    rep = cluster_limit_points(iterate(1, golden, OrbitConfig(60)), Fraction(1, 10**4), 20)
    assert rep.count == 1
    assert len(rep.clusters) == 2
    assert rep.centers[0] == 0 and 1 - rep.centers[1] < Fraction(1, 10**9)


def test_three_halves_many_clusters(three_halves):
    rep = cluster_limit_points(iterate(1, three_halves, OrbitConfig(2000)), Fraction(1, 100))
    assert rep.count >= 30


def test_constant_orbit(two):
    rep = cluster_limit_points(iterate(1, two, OrbitConfig(50)), Fraction(1, 100))
    assert [(c.center, c.population) for c in rep.clusters] == [(0, 41)]
    assert rep.separated


def test_bad_epsilon(golden):
    samples = iterate(1, golden, OrbitConfig(30))
    for eps in (0, Fraction(1, 4), -1):
        with pytest.raises(BadInput):
            cluster_limit_points(samples, eps)
    with pytest.raises(BadInput):
        cluster_limit_points(samples[:5], Fraction(1, 100), warmup=10)


dyadic = st.integers(0, 2**20 - 1).map(lambda k: Fraction(k, 2**20))


@settings(max_examples=150, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.lists(dyadic, min_size=1, max_size=80), st.sampled_from([Fraction(1, 100), Fraction(1, 20), Fraction(1, 7)]))
def test_cluster_partition(ys, eps):
    rep = cluster_limit_points(fake_samples(ys), eps, warmup=1)
    members = [n for c in rep.clusters for n in c.members]
    assert sorted(members) == list(range(1, len(ys) + 1))
    # each entry's maxdev is honest and within epsilon
    by_n = {i + 1: y for i, y in enumerate(ys)}
    for c in rep.clusters:
        assert c.maxdev == max(circle_distance(by_n[n], c.center) for n in c.members)
        assert c.maxdev <= eps
        assert 0 <= c.center <= 1
    assert rep.count == len(rep.arc_centers) == len({c.arc for c in rep.clusters})
    assert len(rep.clusters) <= rep.count + 1
    for c in rep.clusters:
        assert all(circle_distance(by_n[n], rep.arc_centers[c.arc]) <= eps for n in c.members)
    centers = rep.arc_centers
    apart = all(circle_distance(a, b) > 2 * eps for i, a in enumerate(centers) for b in centers[i + 1 :])
    assert rep.separated == apart


def test_cluster_deterministic(three_halves):
    samples = iterate(1, three_halves, OrbitConfig(500))
    assert cluster_limit_points(samples, Fraction(1, 50)) == cluster_limit_points(list(samples), Fraction(1, 50))


# --- PV check and scaling ------------------------------------------------------------

def test_pv_verify(golden, three_halves):
    rep = cluster_limit_points(iterate(1, golden, OrbitConfig(200)), Fraction(1, 100))
    assert pv_verify(rep, 1, Fraction(1, 10**9))
    third = cluster_limit_points(iterate(FieldElement(golden, (1, 1), 3), golden, OrbitConfig(200)), Fraction(1, 100))
    assert pv_verify(third, 3, Fraction(1, 10**6))
    assert not pv_verify(third, 1, Fraction(1, 10**6))
    rh = cluster_limit_points(iterate(1, three_halves, OrbitConfig(1000)), Fraction(1, 100))
    assert not pv_verify(rh, 1, Fraction(1, 100))


def test_scale_and_project(golden):
    rep = cluster_limit_points(iterate(FieldElement(golden, (1, 1), 3), golden, OrbitConfig(200)), Fraction(1, 100))
    scaled = scale_and_project(rep, 3)
    assert all(min(c, 1 - c) < Fraction(1, 10**6) for c in scaled.centers)
    with pytest.raises(BadInput):
        scale_and_project(rep, 0)


# --- differences and tau ------------------------------------------------------------

def test_rational_approximation():
    assert rational_approximation(Fraction(1, 3) + Fraction(1, 2**70), Fraction(1, 2**60)) == Fraction(1, 3)
    assert rational_approximation(Fraction(1414213562373095, 10**15), Fraction(1, 2**50)) is None


def test_difference_structure_rational_centers(golden):
    rep = cluster_limit_points(iterate(FieldElement(golden, (1, 1), 3), golden, OrbitConfig(200)), Fraction(1, 100))
    ds = difference_structure(rep)
    assert ds.L_common == 3 and ds.tau is None and ds.proxy
    with pytest.raises(NoIrrationalPairs):
        difference_structure(rep, strict=True)


def test_tau_from_irrational_center(golden):
    root2 = Fraction(math.isqrt(2 << 200), 2**100) / 2  # sqrt(2)/2 to 100 bits
    clusters = (Cluster(Fraction(0), 1, Fraction(0)), Cluster(Fraction(1, 3), 1, Fraction(0)), Cluster(root2, 1, Fraction(0)))
    rep = LimitPointReport(clusters, Fraction(1, 100), 0, 1, 64, True, 3)
    ds = difference_structure(rep)
    eta = 3 * root2 - 2
    assert ds.L_common == 3
    assert ds.scaled == (eta,)
    assert ds.tau == min(nearest_int_distance(eta), nearest_int_distance(eta - 1))
    assert 0 < ds.tau < Fraction(1, 2)
    assert ds.epsilon_bound(golden.minpoly) == ds.tau / 6


# --- collision and contraction -------------------------------------------------------

def test_vector_collision_examples():
    assert find_vector_collision([0, 1] * 5, 2) == (3, 1)
    assert find_vector_collision([5, 5, 5], 1) == (2, 1)
    with pytest.raises(NoCollision) as info:
        find_vector_collision([0, 1, 2], 1)
    assert info.value.needed_horizon == 3**2 + 2


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 2), min_size=4, max_size=40), st.integers(1, 3))
def test_vector_collision_is_first(seq, d):
    try:
        m, r = find_vector_collision(seq, d)
    except NoCollision:
        windows = [tuple(seq[i : i + d + 1]) for i in range(len(seq) - d)]
        assert len(set(windows)) == len(windows)
        return
    win = lambda h: tuple(seq[h - 1 : h + d])
    assert win(m) == win(r) and m > r
    earlier = [win(h) for h in range(1, m)]
    assert len(set(earlier)) == len(earlier)


def test_assign_eta_rejects_far_samples():
    rep = cluster_limit_points(fake_samples([0, Fraction(1, 2)]), Fraction(1, 100), warmup=1)
    far = LimitPointReport(rep.clusters, rep.epsilon, 1, 3, 64, True, 2, rep.arc_centers, rep.values + ((3, Fraction(1, 4)),))
    with pytest.raises(EtaAssignmentError):
        assign_eta(far)


def test_collision_then_contraction_golden(golden):
    eps = Fraction(1, 1000)
    rep = cluster_limit_points(iterate(1, golden, OrbitConfig(200)), eps, 10)
    etas = assign_eta(rep)
    m, r = find_vector_collision([e for _, e in etas], 2, etas[0][0])
    assert m - r <= 6
    c = verify_contraction(1, golden, 1, m, r, eps, 100)
    assert c.holds and c.max_norm < 2 * eps and c.lemma1_gate


def test_contraction_integer_alpha(two):
    c = verify_contraction(Fraction(5, 7), two, 7, 4, 2, Fraction(1, 100), 30)
    assert c.holds and c.max_norm == 0


def test_contraction_fails_for_three_halves(three_halves):
    c = verify_contraction(1, three_halves, 1, 3, 1, Fraction(1, 100), 60)
    assert not c.holds


def test_contraction_argument_checks(golden):
    with pytest.raises(BadInput):
        verify_contraction(1, golden, 1, 2, 2, Fraction(1, 100), 10)


# --- periodicity ---------------------------------------------------------------------

def test_period_examples():
    assert pure_period_mod([-1, -1], [1, 1], 10).to_json() == {"pure": True, "period": 60, "preperiod": 0, "modulus": 10}
    assert pure_period_mod([-1, -1], [2, 1], 3).period == 8
    rep = pure_period_mod([-2], [1], 4)
    assert (rep.pure, rep.preperiod, rep.period) == (False, 2, 1)


def test_period_errors():
    with pytest.raises(BadInput):
        pure_period_mod([1, 0], [1, 1], 5)
    with pytest.raises(BadInput):
        pure_period_mod([1], [], 5)
    with pytest.raises(BadInput):
        pure_period_mod([-1, -1], [1, 1], 10, scan=10)


def test_gcd_gate_guards_preperiod(monkeypatch):
    # a unit A_0 can never produce a preperiod; fake one to see the guard fire
    import powfrac.analyze as an

    real_gcd = math.gcd
    monkeypatch.setattr(an.math, "gcd", lambda a, b: 1)
    try:
        with pytest.raises(PeriodicityViolation):
            an.pure_period_mod([-2], [1], 4)
    finally:
        monkeypatch.setattr(an.math, "gcd", real_gcd)


def brute_period(A, init, L):
    """Step the state from its start until it comes back (or give up after L^d steps)."""
    d = len(A)
    asc = A[::-1]
    start = tuple(x % L for x in init)
    state = start
    for k in range(1, L**d + 1):
        state = state[1:] + (-sum(c * s for c, s in zip(asc, state)) % L,)
        if state == start:
            return k
    return None


@st.composite
def unit_recurrences(draw):
    d = draw(st.integers(1, 3))
    L = draw(st.integers(1, 30))
    A = draw(st.lists(st.integers(-30, 30), min_size=d, max_size=d))
    a0 = draw(st.integers(-30, 30).filter(lambda x: x != 0 and math.gcd(x, L) == 1))
    A[-1] = a0
    init = draw(st.lists(st.integers(-100, 100), min_size=d, max_size=d))
    return A, init, L


@settings(max_examples=500, deadline=None)
@given(unit_recurrences())
def test_unit_constant_term_gives_pure_period(case):
    A, init, L = case
    rep = pure_period_mod(A, init, L)
    assert rep.pure and rep.preperiod == 0
    assert rep.period == brute_period(A, init, L)


def test_ultimate_period_scan(golden):
    s = s_sequence(iterate(1, golden, OrbitConfig(200)), golden.minpoly)
    found = ultimate_period_scan(list(s.values()), 50)
    assert (found.period, found.start) == (2, 1)
    pre = ultimate_period_scan([7, 7, 7] + [1, 2, 3] * 10, 5)
    assert (pre.period, pre.start) == (3, 4)
    assert ultimate_period_scan(list(range(20)), 5) is None
    with pytest.raises(BadInput):
        ultimate_period_scan([1, 2, 3], 2)
