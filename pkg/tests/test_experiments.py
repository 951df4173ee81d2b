import math

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from hsearch import (
    FAMILIES,
    ValidationError,
    discrepancy_scan,
    family_params,
    farhi_params,
    make_params,
    near_perfect_deficit,
    phase_sweep,
    random_init_trials,
    scaling_study,
)


class TestPhaseSweep:
    def test_known_values(self):
        report = phase_sweep(1.0, 1.0, 1.0, 1.0, 0.1,
                             phi_grid=(0.0, math.pi / 2, math.pi))
        assert report.axis_name == "phi"
        assert_allclose(report.probabilities, [1.0, 0.9901, 1.0], atol=1e-9)
        assert report.metadata["a"] == 1.0

    def test_perfect_at_multiples_of_pi(self):
        grid = tuple(n * math.pi for n in (-1, 0, 1, 2))
        report = phase_sweep(1.0, 1.0, 1.0, 1.0, 0.3, phi_grid=grid)
        assert_allclose(report.probabilities, 1.0, atol=1e-9)

    def test_zero_coupling_is_flat(self):
        report = phase_sweep(1.0, 1.0, 0.0, 1.0, 0.2,
                             phi_grid=np.linspace(0, math.pi, 7))
        assert np.ptp(report.probabilities) < 1e-12

    def test_monotone_flag(self):
        grid = np.linspace(0, math.pi, 17)
        report = phase_sweep(1.0, 1.0, 1.0, 1.0, 0.2, phi_grid=grid)
        assert report.monotone_first_quadrant is True
        # strictly decreasing P on [0, pi/2]
        first = report.probabilities[grid <= math.pi / 2 + 1e-12]
        assert np.all(np.diff(first) <= 1e-12)

    def test_monotone_undefined_off_diagonal(self):
        report = phase_sweep(1.0, 0.5, 1.5, 1.0, 0.2,
                             phi_grid=np.linspace(0, math.pi, 9))
        assert report.monotone_first_quadrant is None

    def test_validation(self):
        with pytest.raises(ValidationError):
            phase_sweep(1.0, 1.0, 1.0, 1.0, 0.2, phi_grid=())
        with pytest.raises(ValidationError):
            phase_sweep(1.0, 1.0, 1.0, 1.0, 1.5, phi_grid=(0.0,))

    def test_report_arrays_read_only(self):
        report = phase_sweep(1.0, 1.0, 1.0, 1.0, 0.2, phi_grid=(0.0, 1.0))
        with pytest.raises(ValueError):
            report.probabilities[0] = 0.0


class TestFamilies:
    def test_registry(self):
        assert FAMILIES == ("farhi", "fenner", "perfect_fixed_r", "new")

    def test_family_params_dispatch(self):
        assert family_params("farhi", 2.0, 0.1) == farhi_params(2.0)
        fen = family_params("fenner", 1.0, 0.1)
        assert fen.r == pytest.approx(0.2)
        assert fen.phi == pytest.approx(math.pi / 2)
        new = family_params("new", 1.0, 0.1)
        assert (new.a, new.d) == (0.0, 0.0)

    def test_unknown_family(self):
        with pytest.raises(ValidationError):
            family_params("grover", 1.0, 0.1)


class TestScaling:
    def test_farhi_slope_half(self):
        report = scaling_study("farhi", (4, 16, 64, 256, 1024))
        assert report.slope == pytest.approx(0.5, abs=1e-10)
        assert report.residual_rms < 1e-10
        # T = (pi/2) sqrt(N) exactly for this family
        assert_allclose(report.readout_times,
                        (math.pi / 2) * np.sqrt(report.sizes), rtol=1e-12)

    def test_fenner_slope_near_half(self):
        report = scaling_study("fenner", (16, 64, 256, 1024, 4096))
        assert report.slope == pytest.approx(0.5, abs=0.02)

    def test_new_family_flat(self):
        # constant gap: readout time independent of N
        report = scaling_study("new", (4, 16, 64, 256))
        assert abs(report.slope) < 1e-10
        assert np.ptp(report.readout_times) < 1e-12

    def test_perfect_fixed_r_sublinear(self):
        report = scaling_study("perfect_fixed_r", (16, 64, 256, 1024, 4096))
        # D = 1 + x stays O(1), so T saturates
        assert abs(report.slope) < 0.05

    def test_overlaps_are_inverse_sqrt(self):
        report = scaling_study("farhi", (4, 16, 64))
        assert_allclose(report.overlaps, 1 / np.sqrt([4, 16, 64]), rtol=1e-14)

    def test_validation(self):
        with pytest.raises(ValidationError):
            scaling_study("farhi", (4, 16))           # too few sizes
        with pytest.raises(ValidationError):
            scaling_study("farhi", (4, 16, 8))        # not increasing
        with pytest.raises(ValidationError):
            scaling_study("farhi", (2, 4, 8))         # below minimum size
        with pytest.raises(ValidationError):
            scaling_study("nope", (4, 16, 64))


class TestTrials:
    def test_deterministic_under_seed(self):
        p = make_params(1, 1, 1, 1, 0)
        a = random_init_trials(16, 2, 10, 42, p)
        b = random_init_trials(16, 2, 10, 42, p)
        assert_array_equal(a.overlaps, b.overlaps)
        assert_array_equal(a.probabilities, b.probabilities)
        c = random_init_trials(16, 2, 10, 43, p)
        assert not np.array_equal(a.overlaps, c.overlaps)

    def test_perfect_hamiltonian_always_succeeds(self):
        report = random_init_trials(32, 4, 20, 7, make_params(1, 1, 1, 1, 0))
        assert report.min_probability >= 1 - 1e-8
        assert report.redraws == 0

    def test_deficit_matches_closed_form(self):
        p = make_params(1, 1, 1, 1, math.pi / 2)
        report = random_init_trials(16, 1, 12, 3, p)
        for x, prob in zip(report.overlaps, report.probabilities):
            assert 1 - prob == pytest.approx(near_perfect_deficit(p, x),
                                             abs=1e-8)

    def test_report_stats(self):
        report = random_init_trials(8, 1, 5, 0, make_params(1, 1, 1, 1, 1.0))
        assert report.min_probability <= report.mean_probability \
            <= report.max_probability
        assert len(report.probabilities) == 5
        assert report.dim == 8 and report.n_targets == 1

    def test_validation(self):
        p = farhi_params(1.0)
        with pytest.raises(ValidationError):
            random_init_trials(8, 0, 5, 0, p)
        with pytest.raises(ValidationError):
            random_init_trials(8, 8, 5, 0, p)
        with pytest.raises(ValidationError):
            random_init_trials(8, 1, 0, 0, p)


class TestDiscrepancyScan:
    def test_channels_agree_for_healthy_params(self):
        params = [make_params(1, 1, 1, 1, 0),
                  make_params(1, 1, 1, 1, math.pi)]
        report = discrepancy_scan(params, (0.1, 0.3), (0.5, 2.0))
        for channel in (report.eq1_vs_oracle, report.eq2_vs_oracle,
                        report.c_vs_m):
            assert channel.n_failed == 0
            assert channel.max_residual < 1e-8

    def test_degenerate_cell_counts_as_failure(self):
        # zero Hamiltonian: no oscillation, every channel NaNs out
        params = [make_params(1, 0, 0, 0, 0)]
        report = discrepancy_scan(params, (0.2,), (1.0,))
        assert report.eq2_vs_oracle.n_failed == report.eq2_vs_oracle.n_points
        assert report.eq1_vs_oracle.n_failed == report.eq1_vs_oracle.n_points

    def test_mixed_scan_keeps_good_cells(self):
        params = [make_params(1, 0, 0, 0, 0), farhi_params(1.0)]
        report = discrepancy_scan(params, (0.2,), (1.0,))
        assert 0 < report.eq2_vs_oracle.n_failed < report.eq2_vs_oracle.n_points
        assert np.nanmax(report.eq2_vs_oracle.residuals) < 1e-8

    def test_channel_shapes(self):
        report = discrepancy_scan([farhi_params(1.0)], (0.1, 0.2, 0.4),
                                  (0.5, 1.0))
        # eq1 gets one residual per time sample plus the readout time
        assert report.eq1_vs_oracle.n_points == 3 * 3
        assert report.eq2_vs_oracle.n_points == 3
        assert report.c_vs_m.n_points == 3

    def test_validation(self):
        with pytest.raises(ValidationError):
            discrepancy_scan([], (0.1,), (1.0,))
        with pytest.raises(ValidationError):
            discrepancy_scan([farhi_params(1.0)], (), (1.0,))
        with pytest.raises(ValidationError):
            discrepancy_scan([farhi_params(1.0)], (0.1,), (-1.0,))
