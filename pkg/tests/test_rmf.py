import cmath
import math

import numpy as np
import pytest

from polyrmf.errors import DomainError
from polyrmf.moments import fourth_moment_exact, second_moment_exact
from polyrmf.poly import IntPolynomial
from polyrmf.rmf import (
    CltReport,
    RmfSampler,
    _f_values_vector,
    derive_seed,
    f_value,
    mix64,
    monte_carlo_clt,
    partial_sum,
    partial_sum_by_class,
    prime_hash,
)
from polyrmf.sieve import sieve_values


def test_hash_pins():
    # frozen from the initial run; these must never change silently
    assert derive_seed(0, 0) == 16294208416658607535
    assert derive_seed(0, 1) == 7960286522194355700
    assert prime_hash(0, 2) == 7891318372903466208
    assert mix64(mix64(123)) != mix64(123)


def test_sign_pins():
    s = RmfSampler(7)
    signs = [s.f_prime(p) for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29)]
    assert signs == [-1, -1, -1, -1, 1, 1, 1, -1, 1, 1]


def test_partial_sum_pins(x2p1, table_1e3):
    assert partial_sum(RmfSampler(2024), table_1e3) == 21
    t300 = sieve_values(x2p1, 300)
    assert partial_sum(RmfSampler(2024), t300) == -11


def test_steinhaus_pin():
    z = RmfSampler(7, "steinhaus").f_prime(2)
    assert z.real == pytest.approx(-0.308663144849301, abs=1e-14)
    assert z.imag == pytest.approx(-0.951171416208319, abs=1e-14)
    assert abs(z) == pytest.approx(1.0, abs=1e-14)


def test_sampler_validation():
    with pytest.raises(ValueError):
        RmfSampler(0, "gaussian")
    s = RmfSampler(-1)
    assert s.seed == (1 << 64) - 1  # seeds normalize to 64 bits


def test_f_value_multiplicative(x2p1):
    t = sieve_values(x2p1, 50)
    s = RmfSampler(99)
    for n in (1, 3, 5, 8, 9):
        rec = t.record(n)
        expected = math.prod(s.f_prime(p) for p, _ in rec.factors)
        assert f_value(s, rec) == expected
    assert f_value(s, t.record(7)) == 0  # 50 = 2 * 5^2


def test_f_value_on_units():
    t = sieve_values(IntPolynomial((0, 0, 1)), 4)  # x^2
    s = RmfSampler(5)
    assert f_value(s, t.record(1)) == 1  # value 1
    assert partial_sum(s, t) == 1  # all other rows are squares
    st = RmfSampler(5, "steinhaus")
    assert f_value(st, t.record(1)) == 1


def test_steinhaus_completely_multiplicative(x2p1):
    t = sieve_values(x2p1, 50)
    s = RmfSampler(31, "steinhaus")
    rec = t.record(7)  # 50 = 2 * 5^2
    expected = s.f_prime(2) * s.f_prime(5) ** 2
    assert cmath.isclose(f_value(s, rec), expected, abs_tol=1e-12)
    assert abs(f_value(s, rec)) == pytest.approx(1.0)


def test_scalar_and_vector_paths_agree():
    for coeffs in [(1, 0, 1), (0, 1, 1)]:
        t = sieve_values(IntPolynomial(coeffs), 400)
        s = RmfSampler(12345)
        vec = _f_values_vector(s.seed, t, "rademacher")
        sca = np.array([f_value(s, rec) for rec in t], dtype=float)
        assert np.array_equal(vec, sca)
        st = RmfSampler(12345, "steinhaus")
        vecs = _f_values_vector(st.seed, t, "steinhaus")
        scas = np.array([f_value(st, rec) for rec in t], dtype=complex)
        assert np.allclose(vecs, scas, atol=1e-12)


def test_partial_sum_by_class_partitions(x2p1, table_1e3):
    s = RmfSampler(77)
    by_class = partial_sum_by_class(s, table_1e3)
    assert sum(by_class.values()) == partial_sum(s, table_1e3)
    assert all(k is None or k >= 2 for k in by_class)
    st = RmfSampler(77, "steinhaus")
    by_class_c = partial_sum_by_class(st, table_1e3)
    assert sum(by_class_c.values()) == pytest.approx(partial_sum(st, table_1e3))


def test_derived_streams_differ(table_1e3):
    base = RmfSampler(4)
    sums = {partial_sum(base.derive(i), table_1e3) for i in range(8)}
    assert len(sums) > 1


def test_monte_carlo_mean_is_centered(x2p1):
    t = sieve_values(x2p1, 500)
    rep = monte_carlo_clt(x2p1, 500, 1000, seed=3, table=t)
    assert isinstance(rep, CltReport)
    assert abs(rep.mean_real) <= 4.0 / math.sqrt(1000)
    assert rep.mean_imag == 0.0
    assert not rep.ks_vacuous
    assert rep.normalizer == pytest.approx(math.sqrt(second_moment_exact(t)))


def test_monte_carlo_raw_moments_near_exact(x2p1):
    t = sieve_values(x2p1, 300)
    rep = monte_carlo_clt(x2p1, 300, 1500, seed=0, table=t)
    b = second_moment_exact(t)
    f4 = fourth_moment_exact(t)
    assert abs(rep.raw_m2 - b) / b < 0.10
    assert abs(rep.raw_m4 - f4) / f4 < 0.15


def test_monte_carlo_kappa_normalization_close_to_exact(x2p1):
    t = sieve_values(x2p1, 2000)
    a = monte_carlo_clt(x2p1, 2000, 10, seed=1, table=t, normalization="exact")
    b = monte_carlo_clt(x2p1, 2000, 10, seed=1, table=t, normalization="kappa",
                        prime_bound=10**4)
    assert b.ks_vacuous  # 10 trials is far below the reliability floor
    assert a.normalizer == pytest.approx(b.normalizer, rel=0.02)


def test_monte_carlo_steinhaus_moments(x2p1):
    t = sieve_values(x2p1, 400)
    rep = monte_carlo_clt(x2p1, 400, 1200, seed=9, model="steinhaus", table=t)
    assert abs(rep.m2 - 1.0) < 0.15
    assert abs(rep.m4 - 2.0) < 0.5  # complex normal: E|Z|^4 = 2
    assert rep.normalizer == pytest.approx(math.sqrt(400))  # injective, all rows count


def test_monte_carlo_flags_unproven_classes():
    cubic = IntPolynomial((2, 0, 0, 1))
    rep = monte_carlo_clt(cubic, 200, 5, seed=0)
    assert rep.outside_proven_class
    square = IntPolynomial((1, 4, 4))  # (2x+1)^2
    rep2 = monte_carlo_clt(square, 100, 5, seed=0, model="steinhaus")
    assert rep2.outside_proven_class
    rep3 = monte_carlo_clt(IntPolynomial((1, 0, 1)), 100, 5, seed=0)
    assert not rep3.outside_proven_class


def test_monte_carlo_zero_norm_raises():
    square = IntPolynomial((1, 4, 4))  # all values are odd squares
    with pytest.raises(DomainError):
        monte_carlo_clt(square, 50, 5, seed=0)


def test_monte_carlo_validation(x2p1):
    with pytest.raises(ValueError):
        monte_carlo_clt(x2p1, 100, 0)
    with pytest.raises(ValueError):
        monte_carlo_clt(x2p1, 100, 5, model="bogus")
    with pytest.raises(ValueError):
        monte_carlo_clt(x2p1, 100, 5, normalization="bogus")
    t = sieve_values(x2p1, 50)
    with pytest.raises(ValueError):
        monte_carlo_clt(x2p1, 100, 5, table=t)  # range mismatch


def test_monte_carlo_histogram_totals(x2p1):
    rep = monte_carlo_clt(x2p1, 200, 300, seed=2)
    assert len(rep.hist_edges) == len(rep.hist_counts) + 1
    assert sum(rep.hist_counts) <= 300
