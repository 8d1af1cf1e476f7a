"""Hypergeometric SLE: disconnection exponents, hitting-time laws and traces."""

from ._hsle import (
    DomainError,
    Error,
    NumericalError,
    Params,
    __version__,
    central_charge,
    classify_construction,
    classify_geometry,
    disconnection_probability,
    eta,
    eta_n,
    eta_of_c,
    exponent_table,
    exponents_from_mu_nu,
    lambda_n,
    lambda_sequence,
    make_params,
    mu_upper_bound,
    params_from_exponents,
    sample_hitting_times,
    simulate_theta,
    survival_series,
    trace,
    verify_table,
)


def empirical_survival(times, t):
    """Fraction of hitting times strictly above t."""
    return sum(1 for x in times if x > t) / len(times)
