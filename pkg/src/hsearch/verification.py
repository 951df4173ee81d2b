"""The acceptance suite: nine named checks, each pitting closed forms,
exact propagation, and the full-space integrator against one another on
pinned grids.

Every check returns a :class:`CriterionResult` with its headline residual
and a one-line account of what was compared.  ``run_all`` drives them in
a fixed order; the command-line ``verify`` subcommand and the test suite
are both thin wrappers over this module.

Passing ``tolerance`` to any check replaces its default thresholds
(residual bounds, slope windows, probability floors) with the given
value — deliberately blunt, so an over-tight override fails loudly
rather than silently skipping comparisons.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import closedform, evolution, experiments
from .core import (
    GParams,
    Tolerances,
    ValidationError,
    draw_unit_vector,
    make_overlap_problem,
    make_params,
    make_problem,
    seeded_rng,
    uniform_state,
)
from .hamiltonian import farhi_params, fenner_params, perfect_params, reduced_matrix

#: Integrator settings for oracle runs feeding 1e-9-level comparisons.
_TIGHT = Tolerances(ode_tol=1e-12)


@dataclass(frozen=True)
class CriterionResult:
    name: str
    passed: bool
    max_residual: float
    details: str

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: max_residual={self.max_residual:.3e} ({self.details})"


def _ode_probability(params: GParams, x: float, t: float, tol: Tolerances = _TIGHT) -> float:
    """Oracle read-out: integrate the equivalent 2-dimensional problem."""
    problem = make_overlap_problem(2, (0,), x)
    state = evolution.evolve_full(params, problem, t, tol=tol)
    return abs(state[0]) ** 2


def _ode_probabilities(params: GParams, x: float, times: np.ndarray,
                       tol: Tolerances = _TIGHT) -> np.ndarray:
    problem = make_overlap_problem(2, (0,), x)
    states = evolution.evolve_full_times(params, problem, times, tol=tol)
    return np.abs(states[:, 0]) ** 2


# --------------------------------------------------------------------------
# 1. Perfect search
# --------------------------------------------------------------------------

def check_perfect(tolerance: Optional[float] = None) -> CriterionResult:
    """Equal diagonals and a real coupling give P(T) = 1 for every overlap
    and scale — exactly per the propagator, and independently per the
    integrator on a 64-dimensional problem."""
    tol_exact = 1e-9 if tolerance is None else tolerance
    tol_ode = 1e-8 if tolerance is None else tolerance
    grid = itertools.product(
        (0.5, 1.0, 2.0),            # a = d
        (0.5, 1.0, 2.0),            # r
        (0.0, math.pi),             # phi
        (0.05, 0.1, 0.3, 0.7, 0.9),  # x
        (0.5, 1.0),                 # E
    )
    worst_exact = 0.0
    worst_ode = 0.0
    n = 0
    for a, r, phi, x, energy in grid:
        params = make_params(energy, a, a, r, phi)
        t_read = closedform.readout_time(params, x)
        worst_exact = max(worst_exact,
                          abs(evolution.success_probability(params, x, t_read) - 1.0))
        problem = make_overlap_problem(64, (0,), x)
        state = evolution.evolve_full(params, problem, t_read, tol=_TIGHT)
        p_full = evolution.target_subspace_probability(problem, state)
        worst_ode = max(worst_ode, abs(p_full - 1.0))
        n += 1
    passed = worst_exact < tol_exact and worst_ode < tol_ode
    return CriterionResult(
        "perfect", passed, max(worst_exact, worst_ode),
        f"{n} grid points; exact |P(T)-1| max {worst_exact:.3e} (<{tol_exact:.0e}), "
        f"N=64 integrator max {worst_ode:.3e} (<{tol_ode:.0e})",
    )


# --------------------------------------------------------------------------
# 2. Near-perfect bound
# --------------------------------------------------------------------------

def check_near_perfect(tolerance: Optional[float] = None) -> CriterionResult:
    """With equal diagonals the read-out deficit is r^2 sin^2(phi) x^2
    (1-x^2)/D^2: quadratic in the overlap, with the exact prefactor."""
    rel_tol = 1e-6 if tolerance is None else tolerance
    xs = (0.2, 0.1, 0.05, 0.025)
    worst_rel = 0.0
    all_bounded = True
    for phi in (math.pi / 4, math.pi / 2):
        params = make_params(1.0, 1.0, 1.0, 1.0, phi)
        for x in xs:
            t_read = closedform.readout_time(params, x)
            deficit = 1.0 - evolution.success_probability(params, x, t_read)
            expected = closedform.near_perfect_deficit(params, x)
            worst_rel = max(worst_rel, abs(deficit - expected) / expected)
        report = closedform.pg_bound_check(params, xs)
        all_bounded = all_bounded and report.bounded
    passed = worst_rel < rel_tol and all_bounded
    return CriterionResult(
        "near-perfect", passed, worst_rel,
        f"deficit vs r^2 sin^2(phi) x^2 (1-x^2)/D^2 rel err max {worst_rel:.3e} "
        f"(<{rel_tol:.0e}); x^2-scaling ratios bounded: {all_bounded}",
    )


# --------------------------------------------------------------------------
# 3. Special cases
# --------------------------------------------------------------------------

def check_special_cases(tolerance: Optional[float] = None) -> CriterionResult:
    """The named limits come out exactly: the r=0 family reaches
    probability one at T = pi/(2 E x), and the purely off-diagonal
    x-coupled family reaches exactly 1 - x^2."""
    tol = 1e-9 if tolerance is None else tolerance
    worst = 0.0
    for energy in (1.0, 2.0):
        for x in (0.05, 0.1, 0.25):
            params = farhi_params(energy)
            t_read = closedform.readout_time(params, x)
            expected_t = math.pi / (2.0 * energy * x)
            worst = max(worst, abs(t_read - expected_t) / expected_t)
            worst = max(worst, abs(evolution.success_probability(params, x, t_read) - 1.0))

            params = fenner_params(energy, x)
            t_read = closedform.readout_time(params, x)
            p = evolution.success_probability(params, x, t_read)
            worst = max(worst, abs(p - (1.0 - x * x)))
    passed = worst < tol
    return CriterionResult(
        "special-cases", passed, worst,
        f"r=0 family P(T)=1 and T=pi/(2Ex); off-diagonal family P(T)=1-x^2; "
        f"max residual {worst:.3e} (<{tol:.0e})",
    )


# --------------------------------------------------------------------------
# 4. Scaling
# --------------------------------------------------------------------------

def check_scaling(tolerance: Optional[float] = None) -> CriterionResult:
    """Read-out time grows like sqrt(N) under uniform initialization for
    the families whose gap is proportional to the overlap."""
    sizes = (4, 16, 64, 256, 1024, 4096)
    window_farhi = 0.01 if tolerance is None else tolerance
    window_fenner = 0.02 if tolerance is None else tolerance
    farhi = experiments.scaling_study("farhi", sizes)
    fenner = experiments.scaling_study("fenner", sizes)
    dev_farhi = abs(farhi.slope - 0.5)
    dev_fenner = abs(fenner.slope - 0.5)
    passed = dev_farhi < window_farhi and dev_fenner < window_fenner
    return CriterionResult(
        "scaling", passed, max(dev_farhi, dev_fenner),
        f"log-log slopes: farhi {farhi.slope:.4f} (0.5+/-{window_farhi}), "
        f"fenner {fenner.slope:.4f} (0.5+/-{window_fenner})",
    )


# --------------------------------------------------------------------------
# 5. Reduction consistency
# --------------------------------------------------------------------------

def check_reduction(tolerance: Optional[float] = None) -> CriterionResult:
    """The full N-dimensional integration never leaves the two-level
    subspace: its target probability tracks the exact reduced propagator
    across a period, for uniform and random initializations alike."""
    tol = 1e-8 if tolerance is None else tolerance
    param_set = (
        farhi_params(1.0),
        make_params(1.0, 1.0, 1.0, 1.0, math.pi / 2),
        make_params(1.0, 0.5, 2.0, 1.0, math.pi / 4),
    )
    worst = 0.0
    cases = 0
    for dim in (16, 64, 256):
        inits = {
            "uniform": uniform_state(dim),
            "random": draw_unit_vector(seeded_rng(7), dim),
        }
        for label, vec in inits.items():
            problem = make_problem(dim, (0,), vec)
            x = problem.overlap
            for params in param_set:
                _, big_d = closedform.qD_values(params, x)
                period = math.pi / (params.energy * big_d)
                times = np.linspace(0.0, period, 20)
                states = evolution.evolve_full_times(params, problem, times, tol=_TIGHT)
                for t, state in zip(times, states):
                    amp_w, _ = evolution.project_reduced(problem, state)
                    p_exact = evolution.success_probability(params, x, float(t))
                    worst = max(worst, abs(abs(amp_w) ** 2 - p_exact))
                cases += 1
    passed = worst < tol
    return CriterionResult(
        "reduction", passed, worst,
        f"{cases} (N, init, params) cases x 20 times; full-vs-reduced "
        f"probability max residual {worst:.3e} (<{tol:.0e})",
    )


# --------------------------------------------------------------------------
# 6. Initialization / multi-target independence
# --------------------------------------------------------------------------

def check_initialization(tolerance: Optional[float] = None) -> CriterionResult:
    """The perfect family stays perfect for any number of marked states
    and arbitrary random initial vectors."""
    floor = 1e-8 if tolerance is None else tolerance
    params = perfect_params(1.0)
    worst = 0.0
    runs = []
    for dim in (16, 64, 256):
        m_values = sorted({1, max(1, dim // 16), dim // 4})
        for m in m_values:
            report = experiments.random_init_trials(dim, m, 50, 42, params)
            worst = max(worst, 1.0 - report.min_probability)
            runs.append(f"N={dim},M={m}")
    passed = worst < floor
    return CriterionResult(
        "initialization", passed, worst,
        f"{len(runs)} (N, M) combinations x 50 seeded trials; "
        f"max 1-P(T) = {worst:.3e} (<{floor:.0e})",
    )


# --------------------------------------------------------------------------
# 7. Printed-formula arbitration
# --------------------------------------------------------------------------

def check_arbitration(tolerance: Optional[float] = None) -> CriterionResult:
    """At the read-out time the rational form, the derived |M|^2/D^2, and
    the integrator must agree pairwise; the binomial fixture pins the
    printed coefficients exactly."""
    tol = 1e-9 if tolerance is None else tolerance
    tol_fixture = 1e-12 if tolerance is None else tolerance
    grid = itertools.product(
        (0.5, 1.0, 2.0),
        (0.5, 1.0, 2.0),
        (0.0, math.pi / 4, math.pi / 2, math.pi),
        (0.05, 0.1, 0.3, 0.7, 0.9),
        (0.5, 1.0),
    )
    worst = {"eq2_vs_m": 0.0, "m_vs_oracle": 0.0, "eq2_vs_oracle": 0.0}
    n = 0
    for a, r, phi, x, energy in grid:
        params = make_params(energy, a, a, r, phi)
        t_read = closedform.readout_time(params, x)
        _, big_d = closedform.qD_values(params, x)
        p_eq2 = closedform.probability_eq2(params, x)
        p_m = abs(closedform.M_value(params, x)) ** 2 / big_d**2
        p_oracle = _ode_probability(params, x, t_read)
        worst["eq2_vs_m"] = max(worst["eq2_vs_m"], abs(p_eq2 - p_m))
        worst["m_vs_oracle"] = max(worst["m_vs_oracle"], abs(p_m - p_oracle))
        worst["eq2_vs_oracle"] = max(worst["eq2_vs_oracle"], abs(p_eq2 - p_oracle))
        n += 1

    u, l = closedform.coefficients_eq3(make_params(1.0, 1.0, 1.0, 1.0, 0.0))
    fixture = max(
        float(np.max(np.abs(u - np.array([1, 4, 6, 4, 1, 0, 0])))),
        float(np.max(np.abs(l - np.array([1, 4, 6, 4, 1])))),
    )
    passed = all(v < tol for v in worst.values()) and fixture < tol_fixture
    return CriterionResult(
        "arbitration", passed, max(max(worst.values()), fixture),
        f"{n} read-out points; pairwise residuals eq2-vs-M {worst['eq2_vs_m']:.3e}, "
        f"M-vs-oracle {worst['m_vs_oracle']:.3e}, eq2-vs-oracle "
        f"{worst['eq2_vs_oracle']:.3e} (<{tol:.0e}); binomial fixture {fixture:.3e}",
    )


# --------------------------------------------------------------------------
# 8. Two-term formula validity domain
# --------------------------------------------------------------------------

def check_eq1_domain(tolerance: Optional[float] = None) -> CriterionResult:
    """The two-term P(t) is exact when sin(phi) = 0; otherwise
    its pointwise error is precisely the dropped interference term
    2x cos(EDt) sin(EDt) r sin(phi) (1-x^2)/D, which dies at t = T."""
    tol = 1e-9 if tolerance is None else tolerance
    worst_exact = 0.0      # sin(phi)=0: two-term form vs oracle, all t
    worst_identity = 0.0   # phi=pi/2: (oracle - two-term) vs analytic cross-term
    worst_at_t = 0.0       # phi=pi/2: two-term form vs oracle at t=T

    for params in (make_params(1.0, 1.0, 1.0, 1.0, 0.0),
                   make_params(1.0, 0.5, 2.0, 1.5, math.pi)):
        for x in (0.1, 0.5):
            t_read = closedform.readout_time(params, x)
            times = np.linspace(0.0, 2.0 * t_read, 41)
            oracle = _ode_probabilities(params, x, times)
            for t, p_ode in zip(times, oracle):
                for which in ("paper", "derived"):
                    p_two = closedform.probability_eq1(params, x, float(t), which)
                    worst_exact = max(worst_exact, abs(p_two - p_ode))

    for x in (0.1, 0.5):
        params = make_params(1.0, 1.0, 1.0, 1.0, math.pi / 2)
        t_read = closedform.readout_time(params, x)
        _, big_d = closedform.qD_values(params, x)
        times = np.linspace(0.0, 2.0 * t_read, 41)
        oracle = _ode_probabilities(params, x, times)
        for t, p_ode in zip(times, oracle):
            t = float(t)
            p_two = closedform.probability_eq1(params, x, t, "derived")
            theta = params.energy * big_d * t
            analytic = (2.0 * x * math.cos(theta) * math.sin(theta)
                        * params.r * math.sin(params.phi) * (1.0 - x * x) / big_d)
            worst_identity = max(worst_identity, abs((p_ode - p_two) - analytic))
        worst_at_t = max(worst_at_t, abs(
            closedform.probability_eq1(params, x, t_read, "derived")
            - _ode_probability(params, x, t_read)))

    worst = max(worst_exact, worst_identity, worst_at_t)
    passed = worst < tol
    return CriterionResult(
        "eq1-domain", passed, worst,
        f"sin(phi)=0 exactness {worst_exact:.3e}; cross-term identity "
        f"{worst_identity:.3e}; read-out agreement {worst_at_t:.3e} (<{tol:.0e})",
    )


# --------------------------------------------------------------------------
# 9. Structural invariants
# --------------------------------------------------------------------------

def check_invariants(tolerance: Optional[float] = None) -> CriterionResult:
    """Hermiticity, trace/determinant identities, unitarity, composition,
    energy conservation, and the eigenvalue identity E(q +/- D), on a
    seed-pinned random parameter cloud."""
    rng = seeded_rng(1234)
    n_points = 500
    worst = dict.fromkeys(
        ("hermiticity", "trace", "det", "unitarity", "composition",
         "energy", "eigenvalues"), 0.0)
    # Each entry: (default threshold, True if measured relative to scale).
    bounds = {
        "hermiticity": (1e-12, True),
        "trace": (1e-12, True),
        "det": (1e-12, True),
        "unitarity": (1e-12, False),
        "composition": (1e-11, False),
        "energy": (1e-9, True),
        "eigenvalues": (1e-10, True),
    }
    eye = np.eye(2)
    for _ in range(n_points):
        energy = rng.uniform(0.3, 2.0)
        a = rng.uniform(-2.0, 2.0)
        d = rng.uniform(-2.0, 2.0)
        r = rng.uniform(0.0, 2.0)
        phi = rng.uniform(0.0, 2.0 * math.pi)
        x = rng.uniform(0.05, 0.95)
        t1 = rng.uniform(0.0, 10.0) / energy
        t2 = rng.uniform(0.0, 10.0) / energy
        params = make_params(energy, a, d, r, phi)
        scale = energy * (abs(a) + abs(d) + r + 1.0)

        h = reduced_matrix(params, x)
        m = h.matrix
        worst["hermiticity"] = max(
            worst["hermiticity"],
            float(np.max(np.abs(m - m.conj().T))) / scale)
        trace_expected = energy * (a + d + 2.0 * r * math.cos(phi) * x)
        worst["trace"] = max(
            worst["trace"], abs((m[0, 0] + m[1, 1]).real - trace_expected) / scale)
        det_expected = energy**2 * (a * d - r * r) * (1.0 - x * x)
        det = (m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]).real
        worst["det"] = max(worst["det"], abs(det - det_expected) / scale)

        u1 = evolution.propagator_2x2(h, t1)
        worst["unitarity"] = max(
            worst["unitarity"], float(np.max(np.abs(u1 @ u1.conj().T - eye))))
        u2 = evolution.propagator_2x2(h, t2)
        u12 = evolution.propagator_2x2(h, t1 + t2)
        worst["composition"] = max(
            worst["composition"], float(np.max(np.abs(u12 - u2 @ u1))))

        s0 = np.array([x, math.sqrt(1.0 - x * x)], dtype=np.complex128)
        psi = u1 @ s0
        e0 = (s0.conj() @ m @ s0).real
        e1 = (psi.conj() @ m @ psi).real
        worst["energy"] = max(worst["energy"], abs(e1 - e0) / scale)

        q, big_d = closedform.qD_values(params, x)
        eigs = np.linalg.eigvalsh(m)
        expected = np.array([energy * (q - big_d), energy * (q + big_d)])
        worst["eigenvalues"] = max(
            worst["eigenvalues"], float(np.max(np.abs(eigs - expected))) / scale)

    failed = [
        name for name, (default, _) in bounds.items()
        if worst[name] >= (default if tolerance is None else tolerance)
    ]
    summary = ", ".join(f"{k} {worst[k]:.2e}" for k in bounds)
    return CriterionResult(
        "invariants", not failed, max(worst.values()),
        f"{n_points} random points; per-channel max (scale-relative where "
        f"applicable): {summary}" + (f"; FAILED: {failed}" if failed else ""),
    )


# --------------------------------------------------------------------------
# Driver
# --------------------------------------------------------------------------

CRITERIA: dict[str, Callable[[Optional[float]], CriterionResult]] = {
    "perfect": check_perfect,
    "near-perfect": check_near_perfect,
    "special-cases": check_special_cases,
    "scaling": check_scaling,
    "reduction": check_reduction,
    "initialization": check_initialization,
    "arbitration": check_arbitration,
    "eq1-domain": check_eq1_domain,
    "invariants": check_invariants,
}


def run_all(
    only: Optional[str] = None,
    tolerance: Optional[float] = None,
) -> list[CriterionResult]:
    """Run the acceptance checks in order.

    ``only`` filters by substring of the criterion name (so ``"perfect"``
    selects both the perfect and near-perfect checks); ``tolerance``
    overrides every check's default thresholds with one number.
    """
    names = [n for n in CRITERIA if only is None or only in n]
    if not names:
        raise ValidationError(
            f"--only {only!r} matches no criterion; available: {', '.join(CRITERIA)}"
        )
    if tolerance is not None and not (tolerance > 0 and math.isfinite(tolerance)):
        raise ValidationError(f"tolerance override must be positive and finite, got {tolerance}")
    return [CRITERIA[name](tolerance) for name in names]
