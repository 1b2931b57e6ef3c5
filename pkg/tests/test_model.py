import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from batescva.model import (
    BatesParams,
    ConfigError,
    DefaultModel,
    Exercise,
    JumpLaw,
    NumericsConfig,
    OptionKind,
    OptionSpec,
    default_probability,
    published_base_case,
    payoff,
)

PUT = OptionSpec(OptionKind.PUT, Exercise.EUROPEAN, 100.0, 1.0)
CALL = OptionSpec(OptionKind.CALL, Exercise.EUROPEAN, 100.0, 1.0)


@pytest.mark.parametrize(
    "spec, s, expected",
    [(PUT, 100.0, 0.0), (PUT, 80.0, 20.0), (CALL, 120.0, 20.0), (CALL, 80.0, 0.0)],
)
def test_payoff_examples(spec, s, expected):
    assert payoff(spec, s) == expected


@given(
    st.floats(0, 1e4), st.floats(0, 1e4), st.sampled_from([PUT, CALL]),
)
def test_payoff_is_1_lipschitz(s1, s2, spec):
    assert abs(payoff(spec, s1) - payoff(spec, s2)) <= abs(s1 - s2) + 1e-9


def test_default_probability_examples():
    assert default_probability(DefaultModel(0.03, 0.4), 0.0) == 0.0
    assert default_probability(DefaultModel(0.0, 0.4), 5.0) == 0.0
    assert default_probability(DefaultModel(0.03, 0.4), 1.0) == pytest.approx(1 - math.exp(-0.03), rel=1e-14)
    assert default_probability(DefaultModel(0.03, 0.4), 1.0) == pytest.approx(0.0295545, abs=1e-7)


def test_default_probability_rejects_negative_time():
    with pytest.raises(ValueError):
        default_probability(DefaultModel(0.03, 0.4), -0.1)


@given(st.floats(0, 1), st.floats(0, 10), st.floats(0, 10))
def test_default_probability_monotone_and_memoryless(delta, t, s):
    m = DefaultModel(delta, 0.4)
    pd_t, pd_s, pd_ts = (float(default_probability(m, x)) for x in (t, s, t + s))
    assert pd_ts >= pd_t - 1e-15
    assert pd_ts - pd_t == pytest.approx(math.exp(-delta * t) * pd_s, abs=1e-12)


def test_density_is_derivative_of_pd():
    m = DefaultModel(0.03, 0.4)
    t, eps = 0.7, 1e-6
    fd = (default_probability(m, t + eps) - default_probability(m, t - eps)) / (2 * eps)
    assert m.density(t) == pytest.approx(fd, rel=1e-8)


def test_published_base_case_values():
    params, specs, dm = published_base_case()
    assert [p.s0 for p in params] == [80.0, 100.0, 120.0]
    p = params[0]
    assert (p.kappa, p.theta, p.sigma, p.rho, p.v0, p.r, p.eta) == (2.0, 0.01, 0.2, 0.5, 0.01, 0.03, 0.0)
    assert (p.lam, p.alpha, p.beta2) == (0.1, 0.1, 0.1)
    assert (dm.delta, dm.recovery) == (0.03, 0.4)
    assert all(s.kind is OptionKind.PUT and s.strike == 100.0 and s.maturity == 1.0 for s in specs)
    assert [s.exercise for s in specs] == [Exercise.EUROPEAN, Exercise.AMERICAN]


@pytest.mark.parametrize("law", list(JumpLaw))
def test_compensator_matches_mean_jump_size(law):
    """lam * (E[1+J] - 1), with E[1+J] checked by quadrature of the log-normal law."""
    from scipy.integrate import quad
    from scipy.stats import norm

    p = BatesParams(100, 0.01, 0.03, 0, 2, 0.01, 0.2, 0.5, 0.1, 0.1, 0.1, jump_law=law)
    m, b = p.log_jump_mean, math.sqrt(p.beta2)
    mean_1pj = quad(lambda x: math.exp(x) * norm.pdf(x, m, b), m - 12 * b, m + 12 * b)[0]
    assert p.jump_compensator == pytest.approx(p.lam * (mean_1pj - 1), rel=1e-10)
    if law is JumpLaw.MEAN_CORRECTED:
        assert mean_1pj == pytest.approx(math.exp(p.alpha), rel=1e-10)


def test_feller_violation_is_allowed():
    p = BatesParams(100, 0.01, 0.03, 0, 1.0, 0.01, 0.5, 0.5, 0.1, 0.1, 0.1)
    assert 2 * p.kappa * p.theta < p.sigma**2


@pytest.mark.parametrize(
    "field, value",
    [("s0", 0.0), ("v0", -0.1), ("kappa", 0.0), ("theta", 0.0), ("sigma", 0.0),
     ("rho", 1.0), ("rho", -1.0), ("lam", -0.1), ("beta2", -0.1)],
)
def test_bates_params_invariants(field, value):
    kw = dict(s0=100, v0=0.01, r=0.03, eta=0, kappa=2, theta=0.01, sigma=0.2, rho=0.5, lam=0.1, alpha=0.1, beta2=0.1)
    kw[field] = value
    with pytest.raises(ConfigError, match=field):
        BatesParams(**kw)


def test_rho_bar():
    p = BatesParams(100, 0.01, 0.03, 0, 2, 0.01, 0.2, 0.6, 0.1, 0.1, 0.1)
    assert p.rho_bar == pytest.approx(0.8)


@pytest.mark.parametrize(
    "kwargs",
    [dict(n_time=1, n_y=101), dict(n_time=10, n_y=100), dict(n_time=10, n_y=1),
     dict(n_time=10, n_y=101, n_paths=0), dict(n_time=10, n_y=101, y_halfwidth_sds=0)],
)
def test_numerics_config_invariants(kwargs):
    with pytest.raises(ConfigError):
        NumericsConfig(**kwargs)


def test_option_and_default_invariants():
    with pytest.raises(ConfigError):
        OptionSpec("put", "european", 0.0, 1.0)
    with pytest.raises(ConfigError):
        OptionSpec("put", "european", 100.0, 0.0)
    with pytest.raises(ValueError):
        OptionSpec("straddle", "european", 100.0, 1.0)
    with pytest.raises(ConfigError):
        DefaultModel(-0.01, 0.4)
    with pytest.raises(ConfigError):
        DefaultModel(0.03, 1.5)


def test_types_are_immutable():
    p = published_base_case()[0][0]
    with pytest.raises(Exception):
        p.s0 = 1.0
    assert np.isfinite(p.mu_y(0.0))
