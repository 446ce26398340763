"""
Forcing signals and the convolution layer.
"""
import math

import numpy as np
import pytest

from viscorod.errors import DomainError, SampleFlag
from viscorod.forcing import (
    Heaviside,
    Impulse,
    PowerStep,
    Sinusoid,
    Tabulated,
    compose_sigma,
    compose_u,
    convolve,
    eval_F,
    laplace_F,
)
from viscorod.kernels import (
    KernelKind,
    KernelSpec,
    eval_exponential_response,
    eval_P,
    eval_sigma_H,
    eval_step_displacement,
)
from viscorod.modes import build_mode_set
from viscorod.oracle import oracle_response


@pytest.fixture(scope="module")
def small_elastic_specs(elastic):
    modes = build_mode_set(elastic, 1.0, 256)
    return (
        KernelSpec.for_modes(KernelKind.DISPLACEMENT_P, modes),
        KernelSpec.for_modes(KernelKind.STRESS_SIGMA_H, modes),
    )


@pytest.fixture(scope="module")
def ramp_table():
    return Tabulated(times=(0.0, 0.5, 1.0, 1.5, 2.0, 3.0), values=(0.0, 0.4, 1.0, 0.7, 0.2, 0.0))


class TestSignals:
    @pytest.mark.parametrize(
        "signal, t, expected",
        [
            (Heaviside(), 2.0, 1.0),
            (Heaviside(), -1.0, 0.0),
            (Heaviside(delay=0.5), 0.4, 0.0),
            (PowerStep(alpha=0.5), 1.0, 1.0 / math.sqrt(math.pi)),
            (Sinusoid(omega=2.0, amplitude=3.0), 0.25, 3.0 * math.sin(0.5)),
            (Impulse(), 1.0, 0.0),
        ],
    )
    def test_eval_F(self, signal, t, expected):
        assert eval_F(signal, t) == pytest.approx(expected, rel=1e-14)

    def test_impulse_support(self):
        assert eval_F(Impulse(delay=0.5), 0.5) == math.inf

    def test_tabulated_interpolates_and_holds(self, ramp_table):
        assert eval_F(ramp_table, 0.75) == pytest.approx(0.7)
        assert eval_F(ramp_table, 10.0) == 0.0

    def test_truncated_closes_with_interpolated_point(self, ramp_table):
        cut = ramp_table.truncated(1.25)
        assert cut.times[-1] == 1.25
        assert cut.values[-1] == pytest.approx(0.85)
        assert eval_F(cut, 5.0) == pytest.approx(0.85)

    def test_laplace_pairs(self):
        s = np.array([2.0 + 0j, 1.0 + 1j])
        np.testing.assert_allclose(laplace_F(Heaviside(), s), 1.0 / s)
        np.testing.assert_allclose(laplace_F(Impulse(delay=1.0), s), np.exp(-s))
        np.testing.assert_allclose(laplace_F(Sinusoid(omega=3.0), s), 3.0 / (s * s + 9.0))
        np.testing.assert_allclose(laplace_F(PowerStep(alpha=0.5), s), s ** -0.5)

    def test_no_transform_for_tables(self, ramp_table):
        assert laplace_F(ramp_table, np.array([1.0 + 0j])) is None

    def test_bad_table(self):
        with pytest.raises(ValueError):
            Tabulated(times=(0.0, 0.0), values=(1.0, 2.0))


class TestComposeU:
    def test_impulse_is_kernel(self, zener_specs):
        spec_P = zener_specs[0]
        assert compose_u(spec_P, Impulse(), 0.5, 1.0).value == eval_P(spec_P, 0.5, 1.0).value

    def test_delayed_impulse(self, zener_specs):
        spec_P = zener_specs[0]
        assert compose_u(spec_P, Impulse(delay=0.5), 0.5, 1.5).value == eval_P(spec_P, 0.5, 1.0).value

    def test_step_uses_integrated_kernel(self, small_elastic_specs):
        spec_P = small_elastic_specs[0]
        assert (
            compose_u(spec_P, Heaviside(delay=0.5), 0.75, 1.5).value
            == eval_step_displacement(spec_P, 0.75, 1.0).value
        )

    @pytest.mark.parametrize("t", [-1.0, 0.0, 0.3])
    def test_nothing_before_the_load(self, small_elastic_specs, t):
        assert compose_u(small_elastic_specs[0], Sinusoid(omega=1.0, delay=0.3), 0.5, t).value == 0.0

    def test_fixed_end(self, small_elastic_specs):
        assert compose_u(small_elastic_specs[0], Sinusoid(omega=1.0), 0.0, 2.0).value == 0.0

    def test_linear_in_force(self, small_elastic_specs):
        spec_P = small_elastic_specs[0]
        one = compose_u(spec_P, Sinusoid(omega=2.0, amplitude=1.0), 1.0, 1.5)
        two = compose_u(spec_P, Sinusoid(omega=2.0, amplitude=2.0), 1.0, 1.5)
        assert abs(two.value - 2.0 * one.value) <= two.error + 2.0 * one.error + 1e-12

    def test_causal_in_the_load(self, small_elastic_specs, ramp_table):
        spec_P = small_elastic_specs[0]
        full = compose_u(spec_P, ramp_table, 1.0, 1.0)
        cut = compose_u(spec_P, ramp_table.truncated(1.2), 1.0, 1.0)
        assert cut.value == pytest.approx(full.value, abs=1e-14)

    def test_power_step_matches_oracle(self, elastic, elastic_specs):
        signal = PowerStep(alpha=0.5)
        value = compose_u(elastic_specs[0], signal, 1.0, 1.5).value
        reference = oracle_response(elastic, 1.0, signal, "displacement", 1.0, 1.5).value
        assert abs(value - reference) <= 1e-3 * max(abs(reference), 1e-2)

    @pytest.mark.slow
    def test_sinusoid_matches_oracle(self, zener, zener_specs, zener_modes):
        signal = Sinusoid(omega=2.0)
        value = compose_u(zener_specs[0], signal, 1.0, 1.5).value
        reference = oracle_response(zener, 1.0, signal, "displacement", 1.0, 1.5,
                                    xi_max=zener_modes.xi_max).value
        assert abs(value - reference) <= 1e-3 * max(abs(reference), 1e-2)

    def test_needs_displacement_spec(self, zener_specs):
        with pytest.raises(DomainError):
            compose_u(zener_specs[1], Heaviside(), 0.5, 1.0)


class TestComposeSigma:
    def test_step_is_exact(self, zener_specs):
        spec_sigma = zener_specs[1]
        sample = compose_sigma(spec_sigma, Heaviside(), 0.5, 1.0)
        assert sample.value == eval_sigma_H(spec_sigma, 0.5, 1.0).value
        assert SampleFlag.DERIVED_STRESS not in sample.flags

    def test_general_load_is_flagged(self, small_elastic_specs):
        sample = compose_sigma(small_elastic_specs[1], Sinusoid(omega=1.0), 0.5, 1.0)
        assert SampleFlag.DERIVED_STRESS in sample.flags
        assert math.isfinite(sample.value)

    def test_nothing_before_the_load(self, small_elastic_specs):
        assert compose_sigma(small_elastic_specs[1], Sinusoid(omega=1.0, delay=1.0), 0.5, 0.5).value == 0.0

    def test_needs_stress_spec(self, zener_specs):
        with pytest.raises(DomainError):
            compose_sigma(zener_specs[0], Heaviside(), 0.5, 1.0)


def _table_transform(table):
    """F̃(s) of the piecewise-linear table, held at its last value."""
    times = np.array(table.times)
    slopes = np.diff(table.values) / np.diff(times)

    def f_tilde(s):
        s = np.asarray(s)[..., None]
        ramps = slopes * (np.exp(-s * times[:-1]) - np.exp(-s * times[1:])) / (s * s)
        return table.values[0] / s[..., 0] + ramps.sum(axis=-1)

    return f_tilde


class TestClosedFormLoads:
    def test_constant_table_is_a_scaled_step(self, zener_specs):
        spec_P = zener_specs[0]
        table = Tabulated(times=(0.0, 1.0), values=(2.0, 2.0))
        sample = compose_u(spec_P, table, 1.0, 1.5)
        assert sample.value == pytest.approx(2.0 * eval_step_displacement(spec_P, 1.0, 1.5).value, abs=4e-6)

    def test_ramp_matches_oracle(self, zener, zener_specs, zener_modes, ramp_table):
        sample = compose_u(zener_specs[0], ramp_table, 1.0, 1.5)
        reference = oracle_response(zener, 1.0, _table_transform(ramp_table), "displacement", 1.0, 1.5,
                                    xi_max=zener_modes.xi_max).value
        assert sample.error <= zener_specs[0].tol
        assert SampleFlag.ACCURACY not in sample.flags
        assert abs(sample.value - reference) <= 1e-3 * max(abs(reference), 1e-2)

    def test_ramp_stress_matches_oracle(self, zener, zener_specs, zener_modes, ramp_table):
        sample = compose_sigma(zener_specs[1], ramp_table, 0.5, 2.5)
        reference = oracle_response(zener, 1.0, _table_transform(ramp_table), "stress", 0.5, 2.5,
                                    xi_max=zener_modes.xi_max).value
        assert SampleFlag.DERIVED_STRESS in sample.flags
        assert SampleFlag.ACCURACY not in sample.flags
        assert abs(sample.value - reference) <= 1e-3 * max(abs(reference), 1e-2)

    @pytest.mark.slow
    def test_ramp_matches_quadrature(self, zener_specs, ramp_table):
        spec_P = zener_specs[0]
        closed = compose_u(spec_P, ramp_table, 0.75, 2.0).value
        quadrature = convolve(lambda s: eval_P(spec_P, 0.75, s), ramp_table, 2.0, spec_P.tol).value
        assert abs(closed - quadrature) <= 1e-3 * max(abs(quadrature), 1e-2)

    def test_elastic_sinusoid_matches_oracle(self, elastic, small_elastic_specs):
        signal = Sinusoid(omega=3.0, amplitude=0.5)
        value = compose_u(small_elastic_specs[0], signal, 1.0, 2.0).value
        reference = oracle_response(elastic, 1.0, signal, "displacement", 1.0, 2.0).value
        assert abs(value - reference) <= 1e-3 * max(abs(reference), 1e-2)

    def test_sinusoid_stress_matches_oracle(self, zener, zener_specs, zener_modes):
        signal = Sinusoid(omega=2.0, amplitude=1.5)
        sample = compose_sigma(zener_specs[1], signal, 0.5, 1.5)
        reference = oracle_response(zener, 1.0, signal, "stress", 0.5, 1.5, xi_max=zener_modes.xi_max).value
        assert SampleFlag.DERIVED_STRESS in sample.flags
        assert sample.error <= zener_specs[1].tol
        assert abs(sample.value - reference) <= 1e-3 * max(abs(reference), 1e-2)

    def test_sinusoid_within_budget(self, zener_specs):
        sample = compose_u(zener_specs[0], Sinusoid(omega=2.0), 1.0, 1.5)
        assert sample.error <= zener_specs[0].tol
        assert SampleFlag.ACCURACY not in sample.flags

    def test_exponential_response_needs_imaginary_rate(self, zener_specs):
        with pytest.raises(DomainError):
            eval_exponential_response(zener_specs[0], 0.5, 1.0, 0.5 + 1.0j)
