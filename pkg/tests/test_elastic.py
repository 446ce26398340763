"""
Closed-form elastic series.
"""
import math

import pytest

from viscorod.errors import DomainError
from viscorod.kernels import elastic_P, elastic_sigma_bound, elastic_sigma_H, elastic_step_discrepancy
from viscorod.oracle import oracle_P, oracle_sigma_H


@pytest.mark.parametrize("t", [0.0, 0.5, 3.0])
def test_displacement_vanishes_at_fixed_end(t):
    assert elastic_P(1.0, 0.0, t).value == 0.0


@pytest.mark.parametrize("x", [0.25, 0.5, 1.0])
def test_displacement_starts_at_rest(x):
    assert elastic_P(1.0, x, 0.0).value == 0.0


def test_displacement_series_converges():
    coarse = elastic_P(1.0, 1.0, math.pi, n_terms=1000).value
    fine = elastic_P(1.0, 1.0, math.pi, n_terms=10_000).value
    assert abs(coarse - fine) < 1e-4


def test_causal():
    assert elastic_P(1.0, 0.5, -0.1).value == 0.0
    assert elastic_sigma_H(1.0, 0.5, -0.1).value == 0.0


@pytest.mark.parametrize("x", [0.0, 0.5, 1.0])
def test_stress_starts_at_rest(x):
    assert abs(elastic_sigma_H(1.0, x, 0.0, n_terms=10_000).value) < 1e-2


def test_bare_series_misses_the_step():
    bare = elastic_sigma_H(1.0, 0.5, 0.0, include_step=False).value
    assert bare == pytest.approx(-1.0, abs=1e-2)


@pytest.mark.parametrize("x, t", [(0.0, 0.7), (0.5, 2.3), (1.0, 4.1)])
def test_stress_bounded(x, t):
    bound = elastic_sigma_bound(1.0)
    assert math.isfinite(bound)
    assert abs(elastic_sigma_H(1.0, x, t, include_step=False).value) <= bound


def test_step_discrepancy_is_unit_step():
    assert elastic_step_discrepancy(1.0, 0.5, 1.0, n_terms=2000) == pytest.approx(1.0, abs=1e-12)


def test_agrees_with_oracle(elastic):
    assert elastic_sigma_H(1.0, 1.0, 1.0).value == pytest.approx(oracle_sigma_H(elastic, 1.0, 1.0, 1.0).value, abs=1e-3)
    assert elastic_P(1.0, 1.0, 1.0).value == pytest.approx(oracle_P(elastic, 1.0, 1.0, 1.0).value, abs=1e-3)


def test_needs_terms():
    with pytest.raises(DomainError):
        elastic_P(1.0, 0.5, 1.0, n_terms=0)
