"""
Solution kernels: branch-cut integrands, residue series and their assembly.
"""
import cmath
import math

import numpy as np
import pytest

from viscorod.constitutive import CutSide, eval_M_on_cut
from viscorod.errors import AccuracyError, DomainError, SampleFlag
from viscorod.forcing import Heaviside
from viscorod.kernels import (
    KernelKind,
    KernelSample,
    KernelSpec,
    branch_cut_integrand_P,
    branch_cut_integrand_sigma,
    calibrate_cut_sides,
    elastic_P,
    elastic_sigma_H,
    eval_kernel,
    eval_P,
    eval_sigma_H,
    eval_step_displacement,
    residue_terms,
)
from viscorod.modes import build_mode_set
from viscorod.oracle import oracle_P, oracle_response, oracle_sigma_H, transform_P


def _hand_ratio(m, kappa, x, q, numerator):
    z = q * m
    return numerator(kappa * x * z) / (z * cmath.sinh(kappa * z) + kappa * cmath.cosh(kappa * z))


class TestIntegrands:
    def test_elastic_vanishes(self, elastic_specs):
        spec_P, spec_sigma = elastic_specs
        assert branch_cut_integrand_P(spec_P, 0.5, 2.0) == 0.0
        assert branch_cut_integrand_sigma(spec_sigma, 0.5, 2.0) == 0.0

    def test_fixed_end(self, zener_specs):
        spec_P, _ = zener_specs
        np.testing.assert_array_equal(branch_cut_integrand_P(spec_P, 0.0, np.array([0.1, 1.0, 10.0])), 0.0)

    def test_P_composed_by_hand(self, zener, zener_specs):
        spec_P, _ = zener_specs
        m = eval_M_on_cut(zener, 1.0, CutSide.LOWER)
        expected = (m * _hand_ratio(m, 1.0, 1.0, 1.0, cmath.sinh)).imag
        assert branch_cut_integrand_P(spec_P, 1.0, 1.0) == pytest.approx(expected, rel=1e-12)
        assert expected != 0.0

    def test_sigma_at_fixed_end(self, zener, zener_specs):
        _, spec_sigma = zener_specs
        m = eval_M_on_cut(zener, 1.0, CutSide.UPPER)
        expected = _hand_ratio(m, 1.0, 0.0, 1.0, cmath.cosh).imag
        assert branch_cut_integrand_sigma(spec_sigma, 0.0, 1.0) == pytest.approx(expected, rel=1e-12)

    def test_vectorised(self, zener_specs):
        spec_P, _ = zener_specs
        q = np.logspace(-3, 3, 7)
        values = branch_cut_integrand_P(spec_P, 0.5, q)
        assert values.shape == q.shape
        assert values[3] == pytest.approx(branch_cut_integrand_P(spec_P, 0.5, 1.0))

    def test_needs_positive_q(self, zener_specs):
        with pytest.raises(DomainError):
            branch_cut_integrand_P(zener_specs[0], 0.5, 0.0)


class TestSpec:
    def test_default_sides(self, zener_specs):
        spec_P, spec_sigma = zener_specs
        assert spec_P.cut_side is CutSide.LOWER
        assert spec_sigma.cut_side is CutSide.UPPER

    def test_mismatched_modes(self, elastic, zener_modes):
        with pytest.raises(DomainError):
            KernelSpec(kind=KernelKind.DISPLACEMENT_P, model=elastic, kappa=1.0, modes=zener_modes)

    def test_wrong_kind(self, zener_specs):
        spec_P, spec_sigma = zener_specs
        with pytest.raises(DomainError):
            eval_P(spec_sigma, 0.5, 1.0)
        with pytest.raises(DomainError):
            eval_sigma_H(spec_P, 0.5, 1.0)

    def test_x_range(self, zener_specs):
        with pytest.raises(DomainError):
            eval_P(zener_specs[0], 1.5, 1.0)


class TestCausality:
    @pytest.mark.parametrize("t", [-1.0, -1e-9])
    def test_zero_before_load(self, zener_specs, t):
        spec_P, spec_sigma = zener_specs
        assert eval_P(spec_P, 0.5, t).value == 0.0
        assert eval_sigma_H(spec_sigma, 0.5, t).value == 0.0

    @pytest.mark.parametrize("t", [0.0, 0.3, 4.0])
    def test_fixed_end_displacement(self, zener_specs, t):
        assert eval_P(zener_specs[0], 0.0, t).value == 0.0

    def test_values_are_real(self, zener_specs):
        sample = eval_kernel(zener_specs[1], 0.25, 0.7)
        assert type(sample.value) is float
        terms = residue_terms(zener_specs[1], 0.25, 0.7)
        assert np.iscomplexobj(terms)


class TestElasticPipeline:
    @pytest.mark.parametrize("x, t", [(0.25, 0.1), (0.5, 1.0), (1.0, 2.0), (0.75, 5.0)])
    def test_matches_trigonometric_series(self, elastic_specs, x, t):
        spec_P, spec_sigma = elastic_specs
        n = spec_P.modes.n_max
        assert eval_P(spec_P, x, t).value == pytest.approx(elastic_P(1.0, x, t, n).value, abs=1e-10)
        assert eval_sigma_H(spec_sigma, x, t).value == pytest.approx(
            elastic_sigma_H(1.0, x, t, n).value, abs=1e-10
        )


class TestZenerKernels:
    def test_P_matches_oracle(self, zener, zener_specs, zener_modes):
        value = eval_P(zener_specs[0], 1.0, 1.0).value
        reference = oracle_P(zener, 1.0, 1.0, 1.0, xi_max=zener_modes.xi_max).value
        assert abs(value - reference) <= 1e-3 * abs(reference)

    def test_sigma_matches_oracle(self, zener, zener_specs, zener_modes):
        value = eval_sigma_H(zener_specs[1], 0.5, 2.0).value
        reference = oracle_sigma_H(zener, 1.0, 0.5, 2.0, xi_max=zener_modes.xi_max).value
        assert abs(value - reference) <= 1e-3 * max(abs(reference), 1e-2)

    def test_stress_relaxes_to_load(self, zener_specs):
        assert eval_sigma_H(zener_specs[1], 0.5, 200.0).value == pytest.approx(1.0, abs=1e-3)

    def test_step_displacement_matches_oracle(self, zener, zener_specs, zener_modes):
        value = eval_step_displacement(zener_specs[0], 0.5, 1.5).value
        reference = oracle_response(zener, 1.0, Heaviside(), "displacement", 0.5, 1.5,
                                    xi_max=zener_modes.xi_max).value
        assert abs(value - reference) <= 1e-3 * abs(reference)

    def test_small_s_amplitude(self, zener):
        for x in (0.25, 0.5, 1.0):
            p_tilde = transform_P(zener, 1.0, x)(np.array([1e-6 + 0j]))[0]
            assert abs(p_tilde) == pytest.approx(x, rel=1e-3)

    def test_halving_modes_within_tail_error(self, zener, zener_modes):
        spec_64 = KernelSpec.for_modes(KernelKind.STRESS_SIGMA_H, zener_modes, max_modes=64)
        spec_32 = KernelSpec.for_modes(KernelKind.STRESS_SIGMA_H, build_mode_set(zener, 1.0, 32), max_modes=32)
        for x, t in ((0.5, 1.0), (1.0, 0.5)):
            coarse = eval_sigma_H(spec_32, x, t)
            fine = eval_sigma_H(spec_64, x, t)
            assert abs(coarse.value - fine.value) <= coarse.error


class TestAccuracyBudget:
    @pytest.fixture
    def strict_P(self, zener_modes):
        return KernelSpec.for_modes(KernelKind.DISPLACEMENT_P, zener_modes, tol=1e-15, max_modes=64)

    def test_flagged_when_lenient(self, strict_P):
        sample = eval_P(strict_P, 0.5, 1.0)
        assert SampleFlag.ACCURACY in sample.flags

    def test_raises_when_strict(self, strict_P):
        with pytest.raises(AccuracyError) as info:
            eval_P(strict_P, 0.5, 1.0, strict=True)
        assert math.isfinite(info.value.value)

    def test_default_budget_met(self, zener_specs):
        sample = eval_sigma_H(zener_specs[1], 0.5, 1.0)
        assert sample.error <= zener_specs[1].tol
        assert not sample.flags

    @pytest.mark.parametrize("t", [0.5, 2.0])
    def test_step_displacement_budget_met(self, zener_specs, t):
        sample = eval_step_displacement(zener_specs[0], 0.5, t)
        assert sample.error <= zener_specs[0].tol
        assert not sample.flags

    def test_stress_starts_from_rest(self, zener_specs):
        for x in (0.0, 0.5, 1.0):
            assert eval_sigma_H(zener_specs[1], x, 0.0) == KernelSample(0.0, 0.0)
            assert eval_P(zener_specs[0], x, 0.0) == KernelSample(0.0, 0.0)

    def test_pinned_spec_does_not_grow(self, strict_P):
        assert strict_P.modes_for(0.1) is strict_P.modes


class TestModeGrowth:
    def test_early_times_grow_the_mode_set(self, zener_specs):
        spec_P = zener_specs[0]
        modes = spec_P.modes_for(0.1)
        assert spec_P.modes.n_max < modes.n_max <= spec_P.max_modes
        assert modes.tail_bound(KernelKind.DISPLACEMENT_P, 0.1) <= spec_P.tol / 2.0
        assert spec_P.modes_for(0.1) is modes

    def test_late_times_keep_the_starting_set(self, zener_specs):
        assert zener_specs[1].modes_for(1.0) is zener_specs[1].modes

    def test_extension_continues_the_poles(self, zener_modes):
        grown = zener_modes.extended(128)
        np.testing.assert_array_equal(grown.s[:64], zener_modes.s)
        assert grown.n_max == 128
        assert all(m.residual < 1e-9 for m in grown.modes)

    def test_unreachable_budget_does_not_grow(self, elastic):
        modes = build_mode_set(elastic, 1.0, 64)
        spec = KernelSpec.for_modes(KernelKind.DISPLACEMENT_P, modes, max_modes=256)
        assert spec.modes_for(1.0) is modes

    @pytest.mark.parametrize("x", [0.25, 1.0])
    def test_early_P_matches_oracle(self, zener, zener_specs, zener_modes, x):
        sample = eval_P(zener_specs[0], x, 0.1)
        reference = oracle_P(zener, 1.0, x, 0.1, xi_max=zener_modes.xi_max).value
        assert sample.error <= zener_specs[0].tol
        assert SampleFlag.ACCURACY not in sample.flags
        assert abs(sample.value - reference) <= 1e-3 * max(abs(reference), 1e-2)

    @pytest.mark.slow
    @pytest.mark.parametrize("x", [0.5, 1.0])
    def test_early_sigma_matches_oracle(self, zener, zener_specs, zener_modes, x):
        sample = eval_sigma_H(zener_specs[1], x, 0.1)
        reference = oracle_sigma_H(zener, 1.0, x, 0.1, xi_max=zener_modes.xi_max).value
        assert SampleFlag.ACCURACY not in sample.flags
        assert abs(sample.value - reference) <= 1e-3 * max(abs(reference), 1e-2)

    @pytest.mark.slow
    def test_early_step_displacement_matches_oracle(self, zener, zener_specs, zener_modes):
        sample = eval_step_displacement(zener_specs[0], 1.0, 0.1)
        reference = oracle_response(zener, 1.0, Heaviside(), "displacement", 1.0, 0.1,
                                    xi_max=zener_modes.xi_max).value
        assert SampleFlag.ACCURACY not in sample.flags
        assert abs(sample.value - reference) <= 1e-3 * max(abs(reference), 1e-2)


class TestCalibration:
    def test_zener_sides_confirmed(self, zener_specs):
        cal_P, cal_sigma = calibrate_cut_sides(*zener_specs)
        assert not cal_P.skipped and not cal_sigma.skipped
        assert cal_P.spec.cut_side is CutSide.LOWER
        assert cal_sigma.spec.cut_side is CutSide.UPPER
        assert cal_P.deviation_kept < cal_P.deviation_flipped
        assert "cut side" in cal_sigma.render()

    def test_elastic_skipped(self, elastic_specs):
        calibrations = calibrate_cut_sides(*elastic_specs)
        assert all(c.skipped for c in calibrations)
        assert "skipped" in calibrations[0].render()
