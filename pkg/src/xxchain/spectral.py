"""Exact diagonalization of the sector Hamiltonian and spectrum analysis.

The homogeneous-chain magnon energies fill the band |E| <= 2|J|.  A strong
enough edge impurity splits one level below and one above the band; the
critical strength where the lowest level exits the band is found here by
bisection on the lowest eigenvalue.  The derivative of an eigenvalue with
respect to the impurity strength follows from the Hellmann-Feynman theorem
and only needs the eigenvector's first two components:

    dE_j / dalpha = 2 J psi_1 psi_2
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgError, eigh_tridiagonal, eigvalsh_tridiagonal

from .chain import ChainSpec, TridiagonalHamiltonian, build_hamiltonian, with_alpha
from .errors import ConvergenceFailure, NoBracket, TooSmallN, WrongConfiguration

# Leading coefficients smaller than this are skipped by the sign convention.
SIGN_EPS = 1e-12
# Residual contract: max_j ||H v_j - E_j v_j|| <= RESIDUAL_TOL * (max|E| + 1).
RESIDUAL_TOL = 1e-10
# Band boundary tolerance: energies this close to +-2|J| count as in-band.
BAND_EDGE_TOL = 1e-9


class BandLabel(enum.Enum):
    IN_BAND = "in_band"
    ISOLATED_BELOW = "isolated_below"
    ISOLATED_ABOVE = "isolated_above"


@dataclass(frozen=True)
class SpectralDecomposition:
    """Ascending eigenvalues with orthonormal, sign-fixed eigenvectors.

    vectors[j] is the eigenvector belonging to energies[j]; its first
    coefficient with modulus above SIGN_EPS is positive.
    """

    energies: np.ndarray
    vectors: np.ndarray
    residual_bound: float

    def __post_init__(self):
        energies = np.asarray(self.energies, dtype=float)
        vectors = np.asarray(self.vectors, dtype=float)
        energies.setflags(write=False)
        vectors.setflags(write=False)
        object.__setattr__(self, "energies", energies)
        object.__setattr__(self, "vectors", vectors)

    @property
    def n_sites(self) -> int:
        return self.energies.size


@dataclass(frozen=True)
class BandClassification:
    """Per-state band labels relative to the infinite-chain band edge 2|J|."""

    labels: tuple[BandLabel, ...]
    band_edge: float

    def count(self, label: BandLabel) -> int:
        return sum(1 for item in self.labels if item is label)


def _tridiagonal_matvec_rows(
    diag: np.ndarray, offdiag: np.ndarray, states: np.ndarray
) -> np.ndarray:
    """Apply the tridiagonal matrix to every row of a (n_states, N) array."""
    out = states * diag
    out[:, :-1] += states[:, 1:] * offdiag
    out[:, 1:] += states[:, :-1] * offdiag
    return out


def eigendecompose(hamiltonian: TridiagonalHamiltonian) -> SpectralDecomposition:
    """Full eigendecomposition with a fixed sign convention.

    Raises ConvergenceFailure if the solver fails or the residual bound
    RESIDUAL_TOL * (max|E| + 1) is not met.
    """
    try:
        energies, columns = eigh_tridiagonal(hamiltonian.diag, hamiltonian.offdiag)
    except LinAlgError as exc:
        raise ConvergenceFailure(f"tridiagonal eigensolver failed: {exc}") from exc
    vectors = np.ascontiguousarray(columns.T)

    n = vectors.shape[0]
    lead = np.argmax(np.abs(vectors) > SIGN_EPS, axis=1)
    signs = np.sign(vectors[np.arange(n), lead])
    signs[signs == 0.0] = 1.0
    vectors *= signs[:, None]

    residual = _tridiagonal_matvec_rows(hamiltonian.diag, hamiltonian.offdiag, vectors)
    residual -= energies[:, None] * vectors
    residual_bound = float(np.sqrt(np.max(np.sum(residual * residual, axis=1))))
    scale = float(np.max(np.abs(energies))) + 1.0
    if residual_bound > RESIDUAL_TOL * scale:
        raise ConvergenceFailure(
            f"residual {residual_bound:.3e} exceeds {RESIDUAL_TOL:.0e} * {scale:.3e}"
        )
    return SpectralDecomposition(energies=energies, vectors=vectors, residual_bound=residual_bound)


def classify_band(dec: SpectralDecomposition, exchange_j: float) -> BandClassification:
    """Label each state as in-band or isolated below/above the band."""
    edge = 2.0 * abs(exchange_j)
    labels = []
    for energy in dec.energies:
        if energy < -edge - BAND_EDGE_TOL:
            labels.append(BandLabel.ISOLATED_BELOW)
        elif energy > edge + BAND_EDGE_TOL:
            labels.append(BandLabel.ISOLATED_ABOVE)
        else:
            labels.append(BandLabel.IN_BAND)
    return BandClassification(labels=tuple(labels), band_edge=edge)


def lowest_energy(spec: ChainSpec) -> float:
    """Smallest sector eigenvalue, without computing eigenvectors."""
    hamiltonian = build_hamiltonian(spec)
    value = eigvalsh_tridiagonal(
        hamiltonian.diag, hamiltonian.offdiag, select="i", select_range=(0, 0)
    )
    return float(value[0])


def estimate_alpha_c(
    template: ChainSpec, alpha_range: tuple[float, float] = (1.0, 2.0), tol: float = 1e-4
) -> float:
    """Bisect for the smallest impurity strength at which E_1 < -2|J|.

    The swept strength is applied to every impurity bond of the template.
    Raises TooSmallN for chains shorter than 10 sites and NoBracket when the
    interval does not straddle the exit point (or E_1 fails to decrease
    monotonically on it).
    """
    if template.n_sites < 10:
        raise TooSmallN(f"need n_sites >= 10, got {template.n_sites}")
    lo, hi = float(alpha_range[0]), float(alpha_range[1])
    if not lo < hi:
        raise ValueError(f"alpha_range must satisfy lo < hi, got {alpha_range}")
    if tol <= 0.0:
        raise ValueError(f"tol must be positive, got {tol}")

    edge = 2.0 * abs(template.exchange_j)
    samples: list[tuple[float, float]] = []

    def exited(alpha: float) -> bool:
        energy = lowest_energy(with_alpha(template, alpha))
        samples.append((alpha, energy))
        return energy < -edge

    if exited(lo):
        raise NoBracket(f"E_1 already below -2|J| at alpha={lo}")
    if not exited(hi):
        raise NoBracket(f"E_1 still inside the band at alpha={hi}")

    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if exited(mid):
            hi = mid
        else:
            lo = mid

    samples.sort()
    energies = np.array([energy for _, energy in samples])
    if np.any(np.diff(energies) > 1e-12):
        raise NoBracket("E_1(alpha) is not monotone on the bracket")
    return 0.5 * (lo + hi)


def denergy_dalpha(spec: ChainSpec, state_index: int) -> float:
    """Hellmann-Feynman derivative dE_j/dalpha = 2 J psi_1 psi_2.

    Only defined for the single-impurity-at-bond-1 layout; state_index is
    1-based (state 1 has the lowest energy).
    """
    if len(spec.impurities) != 1 or spec.impurities[0][0] != 1:
        raise WrongConfiguration(
            f"need exactly one impurity on bond 1, got impurities={spec.impurities}"
        )
    if not 1 <= state_index <= spec.n_sites:
        raise ValueError(f"state_index must be in 1..{spec.n_sites}, got {state_index}")
    dec = eigendecompose(build_hamiltonian(spec))
    vector = dec.vectors[state_index - 1]
    return float(2.0 * spec.exchange_j * vector[0] * vector[1])
