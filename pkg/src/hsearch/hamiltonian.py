"""Hamiltonian construction: the exact two-level reduction and its
full ``N``-dimensional counterpart, plus the named parameter presets.

The dynamics of ``H = E(a|w><w| + b|w><s| + c|s><w| + d|s><s|)`` never
leaves ``span{|w>, |s>}``.  With ``|r>`` the unit vector obtained by
removing the ``|w>`` component from ``|s>`` (so ``|s> = x|w> +
sqrt(1-x^2)|r>`` with ``x = <w|s>`` real and positive), the matrix in the
orthonormal basis ``{|w>, |r>}`` is

    H/E = [[a + (b+c)x + d x^2,   (b + d x) sqrt(1-x^2)],
           [(c + d x) sqrt(1-x^2),  d (1-x^2)          ]].
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import (
    DEFAULT_TOLERANCES,
    DimensionTooLarge,
    GParams,
    NonFiniteInput,
    OverlapOutOfRange,
    SearchProblem,
    Tolerances,
    ValidationError,
    make_params,
)

#: Hard cap on the dimension of dense full-space matrices.
DIM_CAP = 4096


@dataclass(frozen=True)
class ReducedHamiltonian:
    """The 2x2 matrix of ``H`` in the ``{|w>, |r>}`` basis, with the
    parameters and overlap it was built from."""

    matrix: np.ndarray = field(repr=False)
    params: GParams
    overlap: float


def _check_overlap(x: float) -> float:
    x = float(x)
    if not math.isfinite(x):
        raise NonFiniteInput(f"overlap must be finite, got {x}")
    if not 0.0 < x < 1.0:
        raise OverlapOutOfRange(f"overlap must lie strictly inside (0, 1), got {x}")
    return x


def reduced_matrix(params: GParams, overlap: float) -> ReducedHamiltonian:
    """Two-level reduction of the search Hamiltonian at overlap ``x``.

    The matrix is exactly Hermitian by construction: the diagonal is built
    from real quantities and the off-diagonal entries are stored as
    explicit conjugates.
    """
    x = _check_overlap(overlap)
    b = params.b
    y = math.sqrt(1.0 - x * x)
    upper = (b + params.d * x) * y
    h = np.array(
        [
            [params.a + 2.0 * params.r * math.cos(params.phi) * x + params.d * x * x, upper],
            [upper.conjugate(), params.d * (1.0 - x * x)],
        ],
        dtype=np.complex128,
    )
    # (b + c) x is written as 2 r cos(phi) x so the diagonal is exactly real
    # in floating point, not merely up to rounding of b + conj(b).
    h *= params.energy
    h.setflags(write=False)
    return ReducedHamiltonian(matrix=h, params=params, overlap=x)


def full_matrix(
    params: GParams,
    problem: SearchProblem,
    dim_cap: int = DIM_CAP,
) -> np.ndarray:
    """Dense ``N x N`` Hamiltonian ``E(a ww* + b ws* + c sw* + d ss*)``
    built from the problem's marked state ``w`` and initial state ``s``.

    Raises :class:`DimensionTooLarge` when ``problem.dim`` exceeds
    ``dim_cap`` (default 4096), since the cost is quadratic in ``N``.
    """
    if problem.dim > dim_cap:
        raise DimensionTooLarge(
            f"dimension {problem.dim} exceeds the dense-matrix cap {dim_cap}"
        )
    w = problem.target_state
    s = problem.initial
    h = params.a * np.outer(w, w.conj())
    h += params.b * np.outer(w, s.conj())
    h += params.c * np.outer(s, w.conj())
    h += params.d * np.outer(s, s.conj())
    h *= params.energy
    return h


# --------------------------------------------------------------------------
# Presets
# --------------------------------------------------------------------------

def farhi_params(energy: float = 1.0) -> GParams:
    """Analog-search Hamiltonian ``E(|w><w| + |s><s|)``: a = d = 1, r = 0."""
    return make_params(energy, 1.0, 1.0, 0.0, 0.0)


def fenner_params(energy: float, overlap: float) -> GParams:
    """Purely off-diagonal Hamiltonian ``i E' (|w><s| - |s><w|)`` with the
    coupling tied to the overlap: a = d = 0, r = 2x, phi = pi/2.

    Written in the (E, a, d, r, phi) form the intrinsic energy scale is
    ``E' = E x``, absorbed here by setting r = 2x at unit relative coupling.
    """
    x = _check_overlap(overlap)
    return make_params(energy, 0.0, 0.0, 2.0 * x, math.pi / 2.0)


def new_params(energy: float, r: float, phi: float = 0.0) -> GParams:
    """Zero-diagonal family ``E r (e^{i phi}|w><s| + e^{-i phi}|s><w|)``.

    At ``phi = 0`` this family finds the marked state with certainty at
    the overlap-independent time ``pi / (2 E r)``.
    """
    if r <= 0:
        raise ValidationError(
            f"the zero-diagonal family needs a positive coupling, got r={r}"
        )
    return make_params(energy, 0.0, 0.0, r, phi)


def perfect_params(
    energy: float = 1.0,
    a: float = 1.0,
    r: float = 1.0,
    minus: bool = False,
) -> GParams:
    """A member of the perfect-search family: equal diagonal (d = a) and a
    real coupling, ``phi = pi`` when ``minus`` else ``phi = 0``."""
    return make_params(energy, a, a, r, math.pi if minus else 0.0)


def is_perfect(params: GParams, tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
    """Whether the parameters satisfy the exact-search conditions
    ``a == d`` and ``sin(phi) == 0`` (up to ``tol.phase_mod``).

    A zero coupling makes the phase irrelevant, so ``r == 0`` passes the
    phase condition vacuously.
    """
    scale = 1.0 + abs(params.a) + abs(params.d)
    if abs(params.a - params.d) > tol.phase_mod * scale:
        return False
    if params.r == 0.0:
        return True
    return abs(math.sin(params.phi)) <= tol.phase_mod
