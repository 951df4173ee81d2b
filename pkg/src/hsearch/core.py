"""Domain types shared by every other module.

State vectors are plain complex ``numpy`` arrays normalized to unit
Euclidean norm; the constructors here are the only places that accept
unvalidated input.  Everything constructed by this module is immutable
(frozen dataclasses, read-only arrays) and safe to share between threads.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np


# --------------------------------------------------------------------------
# Errors
# --------------------------------------------------------------------------

class HsearchError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(HsearchError, ValueError):
    """Bad input caught before any computation starts."""


class NumericalError(HsearchError, ArithmeticError):
    """A computation hit a singular or unstable regime."""


class NonPositiveEnergy(ValidationError):
    pass


class NegativeCoupling(ValidationError):
    pass


class NonFiniteInput(ValidationError):
    pass


class EmptyTargets(ValidationError):
    pass


class TargetsCoverAll(ValidationError):
    pass


class ZeroOverlap(ValidationError):
    pass


class UnnormalizedInput(ValidationError):
    pass


class OverlapOutOfRange(ValidationError):
    pass


class DimensionTooLarge(ValidationError):
    pass


class IntegratorDriftExceeded(NumericalError):
    pass


class SingularDenominator(NumericalError):
    pass


class NoOscillation(NumericalError):
    pass


class NegativeDiscriminant(HsearchError, AssertionError):
    """Internal inconsistency: a Hermitian family produced a negative
    spectral discriminant.  This is a bug, not a user error."""


# --------------------------------------------------------------------------
# Tolerances
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds used across the package.

    Attributes
    ----------
    prob_abs:
        Absolute tolerance on probabilities.
    matrix_abs:
        Absolute tolerance on matrix-element comparisons (per unit of the
        natural scale ``E * (|a| + |d| + r + 1)``).
    phase_mod:
        Threshold under which a phase (or ``a - d`` mismatch) counts as
        exactly zero when classifying parameter regimes.
    ode_tol:
        Local error tolerance handed to the adaptive integrator.
    """

    prob_abs: float = 1e-9
    matrix_abs: float = 1e-10
    phase_mod: float = 1e-12
    ode_tol: float = 1e-10

    def __post_init__(self):
        for name in ("prob_abs", "matrix_abs", "phase_mod", "ode_tol"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and value > 0 and math.isfinite(value)):
                raise ValidationError(f"tolerance {name} must be a positive finite number")


#: Default tolerances, used wherever the caller does not supply their own.
DEFAULT_TOLERANCES = Tolerances()


# --------------------------------------------------------------------------
# Hamiltonian family parameters
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class GParams:
    """Parameters (E, a, d, r, phi) of the two-state search Hamiltonian
    family ``H = E(a|w><w| + b|w><s| + c|s><w| + d|s><s|)``.

    Hermiticity forces ``a`` and ``d`` real and ``b = conj(c) = r e^{i phi}``,
    so the off-diagonal coupling is stored as magnitude ``r >= 0`` and phase
    ``phi``; a negative coupling is expressed as ``phi + pi``.  ``hbar = 1``
    throughout, so time carries units of ``1/energy``.
    """

    energy: float
    a: float
    d: float
    r: float
    phi: float

    @property
    def b(self) -> complex:
        """Coupling ``b = r e^{i phi}`` multiplying ``|w><s|``."""
        return self.r * cmath.exp(1j * self.phi)

    @property
    def c(self) -> complex:
        """Coupling ``c`` multiplying ``|s><w|``; exactly ``conj(b)``."""
        return self.b.conjugate()


def make_params(energy: float, a: float, d: float, r: float, phi: float) -> GParams:
    """Validate and build :class:`GParams`.

    Raises
    ------
    NonFiniteInput
        If any argument is NaN or infinite.
    NonPositiveEnergy
        If ``energy <= 0``.
    NegativeCoupling
        If ``r < 0``; fold the sign into the phase instead (``phi + pi``).
    """
    values = (energy, a, d, r, phi)
    if not all(math.isfinite(v) for v in values):
        raise NonFiniteInput(f"parameters must be finite, got {values}")
    if energy <= 0:
        raise NonPositiveEnergy(f"energy must be positive, got {energy}")
    if r < 0:
        raise NegativeCoupling(
            f"coupling magnitude must be >= 0, got {r}; use phi + pi for a sign flip"
        )
    return GParams(float(energy), float(a), float(d), float(r), float(phi))


# --------------------------------------------------------------------------
# Search problems on the full N-dimensional space
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SearchProblem:
    """A search instance: dimension, marked indices, and the prepared state.

    ``target_state`` is the normalized projection of ``initial`` onto the
    span of the target basis states.  Defining the marked state this way
    makes the overlap ``<w|s>`` automatically real and positive, confines
    the dynamics to a two-dimensional subspace, and makes the total
    probability in the target subspace equal ``|<w|psi>|**2`` for any
    number of targets.
    """

    dim: int
    targets: frozenset[int]
    initial: np.ndarray = field(repr=False)
    target_state: np.ndarray = field(repr=False)
    overlap: float

    @property
    def target_indices(self) -> np.ndarray:
        """Sorted targets as an integer index array."""
        return np.fromiter(sorted(self.targets), dtype=np.intp)


def _frozen(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=np.complex128, copy=True)
    out.setflags(write=False)
    return out


def make_problem(dim: int, targets: Iterable[int], initial: np.ndarray) -> SearchProblem:
    """Validate a raw instance and derive the target state and overlap.

    The raw vector must already be normalized to within ``1e-6``; it is then
    renormalized exactly.  Construction fails when the projection of the
    initial state onto the target subspace is numerically zero
    (:class:`ZeroOverlap`) or carries the whole norm
    (:class:`OverlapOutOfRange`), since either case degenerates the
    two-dimensional reduction.
    """
    dim = int(dim)
    if dim < 2:
        raise ValidationError(f"dimension must be at least 2, got {dim}")
    target_set = frozenset(int(t) for t in targets)
    if not target_set:
        raise EmptyTargets("at least one target index is required")
    if any(t < 0 or t >= dim for t in target_set):
        raise ValidationError(f"target indices must lie in [0, {dim})")
    if len(target_set) == dim:
        raise TargetsCoverAll("targets cover the whole space; nothing to search for")

    vec = np.asarray(initial, dtype=np.complex128)
    if vec.shape != (dim,):
        raise ValidationError(f"initial state must have shape ({dim},), got {vec.shape}")
    if not (np.all(np.isfinite(vec.real)) and np.all(np.isfinite(vec.imag))):
        raise NonFiniteInput("initial state contains NaN or Inf")
    norm = float(np.linalg.norm(vec))
    if abs(norm - 1.0) > 1e-6:
        raise UnnormalizedInput(f"initial state norm {norm} deviates from 1 by more than 1e-6")
    vec = vec / norm

    idx = np.fromiter(sorted(target_set), dtype=np.intp)
    proj = np.zeros(dim, dtype=np.complex128)
    proj[idx] = vec[idx]
    x = float(np.linalg.norm(proj))
    if x < 1e-12:
        raise ZeroOverlap("initial state has no component in the target subspace")
    off_norm = float(np.linalg.norm(vec - proj))
    if off_norm < 1e-12:
        raise OverlapOutOfRange(
            "initial state lies entirely in the target subspace; overlap must be < 1"
        )
    w = proj / x
    return SearchProblem(
        dim=dim,
        targets=target_set,
        initial=_frozen(vec),
        target_state=_frozen(w),
        overlap=x,
    )


def uniform_state(dim: int) -> np.ndarray:
    """Uniform superposition over ``dim`` basis states."""
    if dim < 1:
        raise ValidationError("dimension must be positive")
    return np.full(dim, 1.0 / math.sqrt(dim), dtype=np.complex128)


def make_overlap_problem(dim: int, targets: Iterable[int], x: float) -> SearchProblem:
    """Build a problem whose overlap with the target subspace is exactly ``x``.

    The initial state is ``x`` times the uniform state on the targets plus
    ``sqrt(1 - x^2)`` times the uniform state on the complement.
    """
    if not 0.0 < x < 1.0:
        raise OverlapOutOfRange(f"overlap must lie in (0, 1), got {x}")
    dim = int(dim)
    target_set = sorted(set(int(t) for t in targets))
    if not target_set:
        raise EmptyTargets("at least one target index is required")
    n_t = len(target_set)
    if n_t >= dim:
        raise TargetsCoverAll("targets cover the whole space; nothing to search for")
    vec = np.full(dim, math.sqrt((1.0 - x * x) / (dim - n_t)), dtype=np.complex128)
    vec[target_set] = x / math.sqrt(n_t)
    return make_problem(dim, target_set, vec)


# --------------------------------------------------------------------------
# Deterministic randomness
# --------------------------------------------------------------------------

def seeded_rng(seed: int) -> np.random.Generator:
    """Deterministic random stream; same seed, same draws."""
    return np.random.default_rng(seed)


def draw_unit_vector(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Haar-uniform random unit vector: 2*dim standard normals, normalized."""
    if dim < 1:
        raise ValidationError("dimension must be positive")
    while True:
        z = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        norm = np.linalg.norm(z)
        if norm > 1e-12:  # excludes a measure-zero degenerate draw
            return z / norm
