"""Time evolution under the search Hamiltonian, by two independent routes.

The reduced route diagonalizes the 2x2 matrix analytically: with
``m = H/E``, ``q = tr(m)/2`` and ``D = sqrt(q^2 - det(m))`` the propagator is

    exp(-i H t) = e^{-i E q t} [cos(E D t) I - i E t sinc(E D t) (m - q I)],

exact for all parameter values (the ``sinc`` form stays finite as
``D -> 0``).  The full-space route integrates the Schroedinger equation on
the dense ``N x N`` Hamiltonian with an adaptive Runge-Kutta scheme and
never looks at the two-level structure, which makes it a genuinely
independent check on the reduction.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .core import (
    DEFAULT_TOLERANCES,
    GParams,
    IntegratorDriftExceeded,
    NegativeDiscriminant,
    NonFiniteInput,
    SearchProblem,
    Tolerances,
    ValidationError,
)
from .hamiltonian import DIM_CAP, ReducedHamiltonian, full_matrix, reduced_matrix

#: Below this value of ``|E D t|`` the propagator switches to the series
#: form of ``sin(E D t)/(E D t)`` to avoid cancellation.
SINC_SERIES_CUTOFF = 1e-6

#: Allowed norm drift of the integrated state before the run is rejected.
DRIFT_LIMIT = 1e-8


def spectral_split(h: ReducedHamiltonian) -> tuple[float, float]:
    """Mean level ``q`` and half-gap ``D`` of ``H/E``, from trace and
    determinant of the reduced matrix.

    Returns ``(q, D)`` with eigenvalues of ``H`` equal to ``E (q +/- D)``.
    Raises :class:`NegativeDiscriminant` if rounding pushes the
    discriminant below zero by more than an eps-level amount, which would
    indicate a non-Hermitian matrix upstream.
    """
    m = h.matrix / h.params.energy
    q = 0.5 * (m[0, 0].real + m[1, 1].real)
    det = (m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]).real
    disc = q * q - det
    if disc < 0.0:
        if disc < -1e-12 * max(1.0, q * q + abs(det)):
            raise NegativeDiscriminant(
                f"discriminant {disc} is negative beyond rounding; "
                "the reduced matrix is not Hermitian"
            )
        disc = 0.0
    return q, math.sqrt(disc)


def propagator_2x2(h: ReducedHamiltonian, t: float) -> np.ndarray:
    """Exact unitary ``exp(-i H t)`` for the reduced two-level system."""
    if not math.isfinite(t):
        raise NonFiniteInput(f"time must be finite, got {t}")
    energy = h.params.energy
    q, big_d = spectral_split(h)
    theta = energy * big_d * t
    if abs(theta) < SINC_SERIES_CUTOFF:
        sinc = 1.0 - theta * theta / 6.0
    else:
        sinc = math.sin(theta) / theta
    k = h.matrix / energy - q * np.eye(2)
    u = math.cos(theta) * np.eye(2) - 1j * energy * t * sinc * k
    u *= cmath.exp(-1j * energy * q * t)
    return u


def evolve_reduced(params: GParams, overlap: float, t: float) -> tuple[complex, complex]:
    """Amplitudes ``(<w|psi(t)>, <r|psi(t)>)`` starting from ``|s>``.

    The initial state in the ``{|w>, |r>}`` basis is
    ``(x, sqrt(1 - x^2))``.
    """
    h = reduced_matrix(params, overlap)
    u = propagator_2x2(h, t)
    x = h.overlap
    s0 = np.array([x, math.sqrt(1.0 - x * x)], dtype=np.complex128)
    amp = u @ s0
    return complex(amp[0]), complex(amp[1])


def success_probability(params: GParams, overlap: float, t: float) -> float:
    """``|<w|psi(t)>|^2`` from the exact reduced propagator (unclamped)."""
    amp_w, _ = evolve_reduced(params, overlap, t)
    return abs(amp_w) ** 2


@dataclass(frozen=True)
class Trace:
    """Sampled reduced evolution: times, success probabilities, and the
    two-component amplitudes ``(<w|psi>, <r|psi>)`` row per sample."""

    times: np.ndarray = field(repr=False)
    probs: np.ndarray = field(repr=False)
    amplitudes: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return len(self.times)


def probability_trace(
    params: GParams,
    overlap: float,
    t_max: float,
    steps: int = 200,
) -> Trace:
    """Reduced evolution sampled on ``steps`` points of ``[0, t_max]``."""
    if steps < 2:
        raise ValidationError(f"a trace needs at least 2 samples, got {steps}")
    if not (math.isfinite(t_max) and t_max > 0):
        raise ValidationError(f"t_max must be positive and finite, got {t_max}")
    h = reduced_matrix(params, overlap)
    x = h.overlap
    s0 = np.array([x, math.sqrt(1.0 - x * x)], dtype=np.complex128)
    times = np.linspace(0.0, t_max, steps)
    amps = np.empty((steps, 2), dtype=np.complex128)
    for i, t in enumerate(times):
        amps[i] = propagator_2x2(h, float(t)) @ s0
    probs = np.clip(np.abs(amps[:, 0]) ** 2, 0.0, 1.0)
    for arr in (times, probs, amps):
        arr.setflags(write=False)
    return Trace(times=times, probs=probs, amplitudes=amps)


# --------------------------------------------------------------------------
# Full-space integration
# --------------------------------------------------------------------------

def _ode_max_step(params: GParams) -> float:
    # Resolve the fastest phase in the spectrum: eigenvalues are bounded by
    # E (|a| + |d| + 2r), so a tenth of the corresponding period is safe.
    return math.pi / (10.0 * params.energy * (abs(params.a) + abs(params.d) + 2.0 * params.r + 1.0))


def evolve_full_times(
    params: GParams,
    problem: SearchProblem,
    times: np.ndarray,
    tol: Tolerances = DEFAULT_TOLERANCES,
    dim_cap: int = DIM_CAP,
) -> np.ndarray:
    """Integrate ``i dpsi/dt = H psi`` on the full space, returning the
    state at each requested time as the rows of a ``(len(times), N)`` array.

    Times must be finite, non-negative, and non-decreasing.  The local
    error tolerance is ``tol.ode_tol``; if the accumulated norm drift of
    any returned state exceeds ``1e-8`` the run raises
    :class:`IntegratorDriftExceeded`.  States that pass the check are
    renormalized before being returned.
    """
    t_arr = np.asarray(times, dtype=np.float64)
    if t_arr.ndim != 1 or len(t_arr) == 0:
        raise ValidationError("times must be a non-empty 1-D array")
    if not np.all(np.isfinite(t_arr)):
        raise NonFiniteInput("times contain NaN or Inf")
    if t_arr[0] < 0 or np.any(np.diff(t_arr) < 0):
        raise ValidationError("times must be non-negative and non-decreasing")

    h = full_matrix(params, problem, dim_cap=dim_cap)
    y0 = np.array(problem.initial, dtype=np.complex128)
    out = np.empty((len(t_arr), problem.dim), dtype=np.complex128)

    t_end = float(t_arr[-1])
    if t_end == 0.0:
        out[:] = y0
        return out

    def rhs(_t, y):
        return -1j * (h @ y)

    sol = solve_ivp(
        rhs,
        (0.0, t_end),
        y0,
        method="RK45",
        t_eval=t_arr,
        rtol=tol.ode_tol,
        atol=tol.ode_tol,
        max_step=_ode_max_step(params),
    )
    if not sol.success:
        raise IntegratorDriftExceeded(f"integration failed: {sol.message}")
    states = sol.y.T
    norms = np.linalg.norm(states, axis=1)
    drift = float(np.max(np.abs(norms - 1.0)))
    if drift > DRIFT_LIMIT:
        raise IntegratorDriftExceeded(
            f"norm drift {drift:.3e} exceeds the {DRIFT_LIMIT:.0e} limit"
        )
    out[:] = states / norms[:, None]
    return out


def evolve_full(
    params: GParams,
    problem: SearchProblem,
    t: float,
    tol: Tolerances = DEFAULT_TOLERANCES,
    dim_cap: int = DIM_CAP,
) -> np.ndarray:
    """State at a single time ``t``; see :func:`evolve_full_times`."""
    if not (math.isfinite(t) and t >= 0):
        raise ValidationError(f"time must be non-negative and finite, got {t}")
    return evolve_full_times(params, problem, np.array([t]), tol=tol, dim_cap=dim_cap)[0]


def target_subspace_probability(problem: SearchProblem, state: np.ndarray) -> float:
    """Total probability of finding the state in the marked subspace."""
    vec = np.asarray(state)
    if vec.shape != (problem.dim,):
        raise ValidationError(
            f"state must have shape ({problem.dim},), got {vec.shape}"
        )
    return float(np.sum(np.abs(vec[problem.target_indices]) ** 2))


def project_reduced(problem: SearchProblem, state: np.ndarray) -> tuple[complex, complex]:
    """Components ``(<w|psi>, <r|psi>)`` of a full-space state, where
    ``|r>`` is the normalized part of ``|s>`` orthogonal to ``|w>``."""
    vec = np.asarray(state, dtype=np.complex128)
    if vec.shape != (problem.dim,):
        raise ValidationError(
            f"state must have shape ({problem.dim},), got {vec.shape}"
        )
    x = problem.overlap
    w = problem.target_state
    r = (problem.initial - x * w) / math.sqrt(1.0 - x * x)
    return complex(w.conj() @ vec), complex(r.conj() @ vec)
