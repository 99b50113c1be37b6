import json
import math

import pytest

import smoothlab as sl

EULER_GAMMA = 0.5772156649015329


@pytest.fixture(scope="module")
def dickman():
    return sl.build_dickman()


@pytest.fixture(scope="module")
def primes():
    return sl.build_prime_table(20000)


def test_prime_table(primes):
    assert sl.build_prime_table(10).primes() == [2, 3, 5, 7]
    assert primes.count_upto(100) == 25
    assert primes.lambda_(4) == pytest.approx(math.log(2) / 2 + math.log(3) / 3, rel=1e-15)
    assert primes.euler_product(10) == pytest.approx(8 / 35, rel=1e-15)
    assert sl.harmonic(4) == pytest.approx(25 / 12, rel=1e-15)


def test_dickman(dickman):
    assert dickman.rho(0.7) == 1.0
    assert dickman.rho(2.0) == pytest.approx(1 - math.log(2), abs=1e-12)
    assert dickman.cdf(1.0) == pytest.approx(math.exp(-EULER_GAMMA), abs=1e-14)
    assert dickman.integral(20.0) == pytest.approx(math.exp(EULER_GAMMA), abs=1e-6)
    with pytest.raises(ValueError):
        dickman.rho(-1.0)
    with pytest.raises(IndexError):
        dickman.rho(25.0)


def test_smooth_probabilities(dickman, primes):
    sieve = sl.build_lpf_sieve(1000)
    assert sl.psi_count(sieve, 100, 3) == 20
    assert sl.psi_h_prob_exact(sieve, 4, 2) == pytest.approx(0.84, rel=1e-15)
    assert sl.psi_h_prob_approx(dickman, 50, 50, False) == 1.0
    assert sl.s_m_cdf_exact(primes, 2, 4.0) == pytest.approx(0.875, rel=1e-15)


def test_samplers(dickman, primes):
    a = sl.sample_harmonic_rejection(primes, 100, 2000, seed=3)
    b = sl.sample_harmonic_rejection(primes, 100, 2000, seed=3)
    assert a == b
    assert all(1 <= k <= 100 for k in a)
    d = sl.sample_dickman(dickman, 20000, seed=4, method="perpetuity")
    assert abs(sum(d) / len(d) - 1.0) < 3 * math.sqrt(0.5 / len(d))
    assert min(sl.sample_s_m(primes, 100, 100)) >= 0.0
    assert sl.sample_harmonic_direct(1, 5) == [1] * 5


def test_identities(dickman, primes):
    lhs, rhs = sl.size_bias_check(0.5, lambda k: 1.0 if k == 1 else 0.0)
    assert lhs == pytest.approx(0.25) and rhs == pytest.approx(0.25)
    tv = sl.tv_uniform_vs_hq(primes, 100)
    assert tv["tv"] <= tv["bound"]
    assert abs(tv["total_mass"] - 1) <= 1e-12
    assert sl.f1z_eval(dickman, 1.0, 2.0) == pytest.approx(0.5 - math.exp(-EULER_GAMMA))


def test_scans_and_report():
    recs = sl.scan_debruijn({"debruijn_n_grid": [100, 1000], "x_grid": [1, 2]})
    row = next(r for r in recs if r["n"] == 100 and r["upsilon"] == 2)
    assert row["m"] == 10 and row["exact"] == pytest.approx(0.46)
    main = sl.scan_main_theorem({"n_grid": [1000]})
    assert {r["variant"] for r in main} == {"gamma-on", "gamma-off"}
    with pytest.raises(ValueError):
        sl.scan_kolmogorov({"mc_count": 10})
    ok, text = sl.run_all({
        "n_grid": [1000], "m_grid": [100], "debruijn_n_grid": [1000],
        "mertens_limit": 10000, "coverage_limit": 10000, "lemma51_limit": 200,
        "tv_n": [21], "vm_m": [100], "acceptance_n": [21], "acceptance_attempts": 20000,
        "mc_count": 1000000, "ks_count": 5000,
    })
    assert ok
    assert json.loads(text)["pass"] is True
