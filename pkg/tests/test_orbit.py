from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from powfrac.errors import BadInput, InconsistentSample, PrecisionExhausted
from powfrac.field import FieldElement
from powfrac.orbit import (
    CSV_HEADER,
    OrbitConfig,
    iterate,
    s_sequence,
    smallness_check,
    write_csv,
)

from conftest import number

LUCAS = [2, 1]
for _ in range(400):
    LUCAS.append(LUCAS[-1] + LUCAS[-2])


def test_three_halves_first_values(three_halves):
    ys = [s.y for s in iterate(1, three_halves, OrbitConfig(5))]
    assert ys == [Fraction(1, 2), Fraction(1, 4), Fraction(3, 8), Fraction(1, 16), Fraction(19, 32)]


def test_adaptive_equals_exact_oracle(three_halves):
    """(3^n mod 2^n) / 2^n, truncated to 64 bits."""
    cfg = OrbitConfig(300, method="adaptive")
    for s in iterate(1, three_halves, cfg):
        n = s.n
        assert s.x == 3**n // 2**n
        assert s.y == Fraction(((3**n % 2**n) << 64) // 2**n, 2**64)


def test_golden_lucas(golden):
    """alpha^n = L_n - beta^n with |beta| < 1."""
    samples = iterate(1, golden, OrbitConfig(120))
    assert abs(float(samples[9].y) - 0.99187) < 1e-5
    for s in samples:
        lucas = LUCAS[s.n]
        x_expect = lucas - 1 if s.n % 2 == 0 else lucas
        assert s.x == x_expect
        beta_n = (-1) ** s.n * ((5**0.5 - 1) / 2) ** s.n
        if s.n < 60:
            assert abs(float(s.y) - (-beta_n) % 1) < 1e-12


def test_integer_alpha_exact(two):
    samples = iterate(1, two, OrbitConfig(50))
    assert all(s.y == 0 and s.exact and s.x == 2**s.n for s in samples)


def test_seed_in_field(golden):
    # 2 - alpha = alpha^-2, so the orbit is the xi = 1 orbit shifted by two
    out = iterate(FieldElement(golden, (2, -1)), golden, OrbitConfig(40))
    ref = iterate(1, golden, OrbitConfig(38))
    assert (out[1].x, out[1].y, out[1].exact) == (1, 0, True)
    assert [(s.x, s.y) for s in out[2:]] == [(s.x, s.y) for s in ref]


def test_integer_seed_times_integer_power(two):
    # every sample lands exactly on an integer once xi = 3/8 is absorbed
    out = iterate(Fraction(3, 8), two, OrbitConfig(6))
    assert [s.y for s in out] == [Fraction(3, 4), Fraction(1, 2), 0, 0, 0, 0]


def test_lehmer_against_high_precision(lehmer):
    samples = iterate(1, lehmer, OrbitConfig(400))
    with mpmath.workprec(600):
        a = lehmer.value(560)
        for s in samples[::37]:
            v = a**s.n
            assert s.x == int(mpmath.floor(v))
            assert abs(s.y - Fraction(int(mpmath.floor((v - s.x) * 2**64)), 2**64)) == 0


def test_csv(three_halves):
    text = write_csv(iterate(1, three_halves, OrbitConfig(3)))
    assert text.splitlines() == [CSV_HEADER, "1,1,1/2,0,true", "2,2,1/4,0,true", "3,3,3/8,0,true"]


def test_precision_cap_below_need(golden):
    with pytest.raises(BadInput):
        iterate(1, golden, OrbitConfig(100, precision_cap=32))


def test_precision_exhausted(golden, monkeypatch):
    import powfrac.orbit as orb

    monkeypatch.setattr(orb, "_certified", lambda enc, bits, res: None)
    cfg = OrbitConfig(3)
    with pytest.raises(PrecisionExhausted):
        orb._resolve_straddle(2, FieldElement(golden, (0, 1)), golden, cfg, cfg.base_bits(golden), 4 * cfg.base_bits(golden))


def test_config_validation():
    for kw in ({"N": 0}, {"N": 5, "resolution": 8}, {"N": 5, "method": "fast"}, {"N": 5, "start": 9}):
        with pytest.raises(BadInput):
            OrbitConfig(**kw)


def test_nonpositive_xi(golden):
    with pytest.raises(BadInput):
        iterate(FieldElement(golden, (1, -1)), golden, OrbitConfig(5))


# --- s_n ----------------------------------------------------------------------

def test_s_sequence_examples(golden, three_halves):
    s = s_sequence(iterate(1, three_halves, OrbitConfig(6)), three_halves.minpoly)
    assert [s[n] for n in range(1, 6)] == [-1, 0, -1, 1, -1]
    g = s_sequence(iterate(1, golden, OrbitConfig(30)), golden.minpoly)
    assert [g[n] for n in range(1, 9)] == [-1, 0] * 4


@pytest.mark.parametrize("name", ["golden", "two", "plastic", "golden_sq", "lehmer", "salem4", "three_halves"])
def test_s_sequence_bound_on_corpus(name):
    a = number(name)
    s = s_sequence(iterate(1, a, OrbitConfig(300)), a.minpoly)
    bound = sum(abs(c) for c in a.minpoly.coeffs) - 1
    assert s and all(abs(v) <= bound for v in s.values())


def test_s_sequence_detects_corruption(golden):
    samples = iterate(1, golden, OrbitConfig(10))
    bad = samples[:4] + [type(samples[4])(5, samples[4].x + 1, samples[4].y, 64, 0, False)] + samples[5:]
    with pytest.raises(InconsistentSample):
        s_sequence(bad, golden.minpoly)


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 50), st.integers(1, 6))
def test_s_sequence_bounded_for_random_seeds(num, den):
    a = number("plastic")
    xi = FieldElement(a, (num, 1), den)
    s = s_sequence(iterate(xi, a, OrbitConfig(80)), a.minpoly)
    assert all(abs(v) <= 2 for v in s.values())


def test_smallness(golden):
    samples = iterate(1, golden, OrbitConfig(40))
    full = smallness_check(samples, golden.minpoly)
    assert not full.holds and full.first_violation == 1
    tail = smallness_check([s for s in samples if s.n >= 3], golden.minpoly)
    assert tail.holds and tail.sup_norm < Fraction(1, 3)
