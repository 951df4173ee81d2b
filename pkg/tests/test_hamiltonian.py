import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from hsearch import (
    DimensionTooLarge,
    OverlapOutOfRange,
    Tolerances,
    ValidationError,
    farhi_params,
    fenner_params,
    full_matrix,
    is_perfect,
    make_overlap_problem,
    make_params,
    make_problem,
    new_params,
    perfect_params,
    qD_values,
    reduced_matrix,
    uniform_state,
)


def random_params(rng):
    return make_params(
        rng.uniform(0.3, 2.0),
        rng.uniform(-2, 2),
        rng.uniform(-2, 2),
        rng.uniform(0, 2),
        rng.uniform(0, 2 * math.pi),
    )


class TestReducedMatrix:
    def test_farhi_fixture(self):
        h = reduced_matrix(farhi_params(1.0), 0.5)
        root = 0.5 * math.sqrt(0.75)
        assert_allclose(h.matrix, [[1.25, root], [root, 0.75]], atol=1e-15)

    def test_off_diagonal_phase(self):
        # cos(pi/2) ~ 6e-17 leaves only rounding dust on the diagonal
        h = reduced_matrix(make_params(1, 0, 0, 0.2, math.pi / 2), 0.1)
        assert h.matrix[0, 0] == pytest.approx(0, abs=1e-15)
        assert h.matrix[1, 1] == 0
        assert h.matrix[0, 1] == pytest.approx(0.2j * math.sqrt(0.99), abs=1e-15)

    def test_hermitian_and_trace_det_identities(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            p = random_params(rng)
            x = rng.uniform(0.05, 0.95)
            m = reduced_matrix(p, x).matrix
            scale = p.energy * (abs(p.a) + abs(p.d) + p.r + 1)
            assert np.max(np.abs(m - m.conj().T)) <= 1e-12 * scale
            trace = (m[0, 0] + m[1, 1]).real
            assert trace == pytest.approx(
                p.energy * (p.a + p.d + 2 * p.r * math.cos(p.phi) * x),
                abs=1e-12 * scale)
            det = (m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]).real
            assert det == pytest.approx(
                p.energy**2 * (p.a * p.d - p.r**2) * (1 - x * x),
                abs=1e-12 * scale)

    def test_eigenvalues_are_E_q_pm_D(self):
        rng = np.random.default_rng(6)
        for _ in range(25):
            p = random_params(rng)
            x = rng.uniform(0.05, 0.95)
            h = reduced_matrix(p, x)
            q, big_d = qD_values(p, x)
            scale = p.energy * (abs(p.a) + abs(p.d) + p.r + 1)
            expected = sorted([p.energy * (q - big_d), p.energy * (q + big_d)])
            assert_allclose(np.linalg.eigvalsh(h.matrix), expected,
                            atol=1e-10 * scale)

    def test_energy_scales_linearly(self):
        m1 = reduced_matrix(farhi_params(1.0), 0.3).matrix
        m2 = reduced_matrix(farhi_params(2.0), 0.3).matrix
        assert_allclose(m2, 2 * m1, rtol=1e-15)

    def test_overlap_out_of_range(self):
        for x in (0.0, 1.0, -0.5, 2.0):
            with pytest.raises(OverlapOutOfRange):
                reduced_matrix(farhi_params(1.0), x)


class TestFullMatrix:
    def test_two_dim_case_equals_reduced(self):
        """With N=2 and the initial state (x, sqrt(1-x^2)), the
        computational basis is the reduced basis."""
        x = 0.3
        prob = make_overlap_problem(2, (0,), x)
        p = make_params(1.0, 0.7, -0.4, 1.1, 0.9)
        assert_allclose(full_matrix(p, prob), reduced_matrix(p, x).matrix,
                        atol=1e-14)

    def test_rank_at_most_two(self):
        prob = make_problem(16, {0}, uniform_state(16))
        h = full_matrix(farhi_params(1.0), prob)
        s = np.linalg.svd(h, compute_uv=False)
        assert np.sum(s > 1e-10) <= 2

    def test_spectrum_is_E_q_pm_D_plus_zeros(self):
        prob = make_problem(16, {2}, uniform_state(16))
        p = make_params(1.0, 0.5, 1.5, 0.8, 0.4)
        q, big_d = qD_values(p, prob.overlap)
        eigs = np.sort(np.linalg.eigvalsh(full_matrix(p, prob)))
        expected = np.sort(np.concatenate(
            [np.zeros(14), [p.energy * (q - big_d), p.energy * (q + big_d)]]))
        assert_allclose(eigs, expected, atol=1e-10)

    def test_restriction_reproduces_reduced_matrix(self):
        prob = make_problem(32, {0, 1}, uniform_state(32))
        p = make_params(0.8, 1.0, -0.5, 1.2, 2.0)
        x = prob.overlap
        w = prob.target_state
        r_state = (prob.initial - x * w) / math.sqrt(1 - x * x)
        basis = np.column_stack([w, r_state])
        restricted = basis.conj().T @ full_matrix(p, prob) @ basis
        scale = p.energy * (abs(p.a) + abs(p.d) + p.r + 1)
        assert_allclose(restricted, reduced_matrix(p, x).matrix,
                        atol=1e-10 * scale)

    def test_dimension_cap(self):
        prob = make_problem(8, {0}, uniform_state(8))
        with pytest.raises(DimensionTooLarge):
            full_matrix(farhi_params(1.0), prob, dim_cap=4)


class TestPresets:
    def test_farhi(self):
        assert farhi_params(1.0) == make_params(1, 1, 1, 0, 0)
        assert is_perfect(farhi_params(1.0))

    def test_fenner_matches_antisymmetric_form(self):
        """The (E, 0, 0, 2x, pi/2) parameters reproduce the antisymmetric
        Hamiltonian 2iEx(|w><s| - |s><w|) on the full space."""
        x = 0.1
        prob = make_overlap_problem(16, (0,), x)
        h = full_matrix(fenner_params(1.0, x), prob)
        w, s = prob.target_state, prob.initial
        direct = 2j * x * (np.outer(w, s.conj()) - np.outer(s, w.conj()))
        assert_allclose(h, direct, atol=1e-12)

    def test_fenner_coupling_tied_to_overlap(self):
        p = fenner_params(1.0, 0.1)
        assert p.r == pytest.approx(0.2)
        assert p.phi == pytest.approx(math.pi / 2)
        assert not is_perfect(p)

    def test_new_params(self):
        p = new_params(1.0, 1.0, 0.0)
        assert (p.a, p.d) == (0.0, 0.0)
        with pytest.raises(ValidationError):
            new_params(1.0, 0.0, 0.0)

    def test_new_phase_pi_flips_coupling_sign(self):
        x = 0.4
        m0 = reduced_matrix(new_params(1.0, 1.0, 0.0), x).matrix
        m1 = reduced_matrix(new_params(1.0, 1.0, math.pi), x).matrix
        assert_allclose(np.abs(m1), np.abs(m0), atol=1e-15)
        assert m1[0, 1].real == pytest.approx(-m0[0, 1].real, abs=1e-15)

    def test_perfect_params(self):
        assert perfect_params() == make_params(1, 1, 1, 1, 0)
        assert perfect_params(minus=True).phi == math.pi
        assert is_perfect(perfect_params(minus=True))


class TestIsPerfect:
    def test_canonical_cases(self):
        assert is_perfect(make_params(1, 1, 1, 1, 0))
        assert not is_perfect(make_params(1, 1, 1, 1, math.pi / 2))
        assert is_perfect(make_params(1, 1, 1, 0, math.pi / 2))  # r=0: phi moot

    def test_unequal_diagonal(self):
        assert not is_perfect(make_params(1, 1, 2, 1, 0))

    def test_phase_tolerance(self):
        tol = Tolerances(phase_mod=1e-6)
        assert is_perfect(make_params(1, 1, 1, 1, 1e-7), tol)
        assert not is_perfect(make_params(1, 1, 1, 1, 1e-7))
