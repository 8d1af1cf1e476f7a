import math

import pytest

import hsle


def test_exponents():
    assert hsle.eta(4.0, 4.0) == pytest.approx(2.0, abs=1e-12)
    assert hsle.eta(8.0 / 3.0, 2.0) == pytest.approx(2.0 / 3.0, abs=1e-12)
    c = hsle.central_charge(3.0)
    assert hsle.eta_of_c(c, 1.5) == pytest.approx(hsle.eta(3.0, 1.5), abs=1e-12)


def test_params_and_lambda():
    p = hsle.make_params(4.0, 0.0, 1.0)
    assert p.kappa == 4.0
    alpha, beta = hsle.exponents_from_mu_nu(p)
    assert beta == pytest.approx(2.25)
    lam = hsle.lambda_sequence(p, 4)
    assert lam[0] == pytest.approx(1.125)
    for n, x in enumerate(lam):
        assert x == pytest.approx(hsle.eta_n(4.0, alpha, beta, n), abs=1e-12)
    q = hsle.params_from_exponents(4.0, alpha, beta)
    assert q.nu == pytest.approx(1.0)


def test_errors_map_to_python():
    with pytest.raises(ValueError):
        hsle.make_params(5.0, 0.0, 1.0)
    with pytest.raises(hsle.DomainError):
        hsle.classify_construction(3.0, 0.0, 0.1)


def test_survival_against_simulation():
    p = hsle.make_params(4.0, 0.0, 1.0)
    times = hsle.sample_hitting_times(p, 2000, seed=3, threads=1)
    assert len(times) == 2000
    assert times == hsle.sample_hitting_times(p, 2000, seed=3, threads=2)
    s = hsle.survival_series(p, [1.0, 2.0])
    for t, q in zip([1.0, 2.0], s):
        sd = math.sqrt(q * (1 - q) / len(times))
        assert abs(hsle.empirical_survival(times, t) - q) < 4 * sd
    assert hsle.disconnection_probability(4.0, alpha=0.0, beta=2.25, R=math.e) == pytest.approx(
        s[0], abs=1e-12
    )


def test_trace_and_tables():
    p = hsle.make_params(3.0, 0.0, 0.4)
    tr = hsle.trace(p, seed=5, n_points=30)
    assert len(tr["t"]) == 30
    assert (tr["re"][0], tr["im"][0]) == (1.0, 0.0)
    assert tr["classification"] == hsle.classify_geometry(p) == "case_ii"
    times, thetas, hit = hsle.simulate_theta(p, seed=5)
    assert thetas[-1] == pytest.approx(math.pi)
    assert hit == times[-1]

    tab = hsle.exponent_table(8.0 / 3.0, 0.0, 2.0, 40)
    assert sum(tab["a_n"]) == pytest.approx(1.0, abs=1e-9)
    rep = hsle.verify_table([3.0])
    assert set(rep["status"]) <= {"pass", "skip"}
