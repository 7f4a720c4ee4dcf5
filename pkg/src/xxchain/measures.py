"""Localization and bipartite entanglement of one-excitation states.

Localization is quantified by the inverse participation ratio

    L_IPR = (sum_n |psi_n|^2)^2 / sum_n |psi_n|^4,

which is 1 for a state concentrated on a single site and N for a uniformly
spread one.  Entanglement between two sites is the Wootters concurrence of
their reduced density matrix; for a one-excitation state the nearest-neighbor
reduced matrix has the closed form C = 2 |psi_{i+1} psi_i|, and for the first
bond it also equals |(1/J) dE_j/dalpha| via the Hellmann-Feynman theorem.

Two-qubit matrices live in the basis {|uu>, |ud>, |du>, |dd>} where u is spin
up and d is the (excited) down spin.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.optimize import minimize_scalar

from .chain import ChainSpec, build_hamiltonian, with_alpha
from .errors import (
    BadSite,
    BadSitePair,
    NotDensityMatrix,
    NotNormalized,
)
from .spectral import denergy_dalpha, eigendecompose

NORM_TOL = 1e-9
DENSITY_TOL = 1e-10

_SY = np.array([[0.0, -1.0j], [1.0j, 0.0]])
# sigma_y otimes sigma_y is real in the computational basis.
_YY = np.kron(_SY, _SY).real


@dataclass(frozen=True)
class AmplitudeVector:
    """N complex site amplitudes of a one-excitation state, unit norm."""

    amps: np.ndarray
    time_tag: float | None = None

    def __post_init__(self):
        amps = np.array(self.amps, dtype=complex)
        if amps.ndim != 1:
            raise ValueError("amplitudes must form a 1-d vector")
        norm_sq = float(np.sum(np.abs(amps) ** 2))
        if abs(norm_sq - 1.0) > NORM_TOL:
            raise NotNormalized(f"|psi|^2 = {norm_sq!r}, expected 1 within {NORM_TOL}")
        amps.setflags(write=False)
        object.__setattr__(self, "amps", amps)

    @property
    def n_sites(self) -> int:
        return self.amps.size


@dataclass(frozen=True)
class TwoQubitDensity:
    """4x4 density matrix of a site pair, basis {|uu>, |ud>, |du>, |dd>}."""

    matrix: np.ndarray
    sites: tuple[int, int]

    def __post_init__(self):
        matrix = np.array(self.matrix, dtype=complex)
        if matrix.shape != (4, 4):
            raise ValueError(f"expected a 4x4 matrix, got shape {matrix.shape}")
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "sites", (int(self.sites[0]), int(self.sites[1])))

    def validate(self) -> "TwoQubitDensity":
        """Check hermiticity, unit trace and positivity; raise NotDensityMatrix."""
        _check_density(self.matrix)
        return self


def _amplitudes(state) -> np.ndarray:
    if isinstance(state, AmplitudeVector):
        return state.amps
    amps = np.asarray(state, dtype=complex)
    if amps.ndim != 1:
        raise ValueError("amplitudes must form a 1-d vector")
    return amps


def _require_normalized(amps: np.ndarray) -> np.ndarray:
    norm_sq = float(np.sum(np.abs(amps) ** 2))
    if abs(norm_sq - 1.0) > NORM_TOL:
        raise NotNormalized(f"|psi|^2 = {norm_sq!r}, expected 1 within {NORM_TOL}")
    return amps


def _check_density(matrix: np.ndarray) -> None:
    if matrix.shape != (4, 4):
        raise NotDensityMatrix(f"expected a 4x4 matrix, got shape {matrix.shape}")
    if np.max(np.abs(matrix - matrix.conj().T)) > DENSITY_TOL:
        raise NotDensityMatrix("matrix is not Hermitian")
    trace = complex(np.trace(matrix))
    if abs(trace - 1.0) > DENSITY_TOL:
        raise NotDensityMatrix(f"trace is {trace!r}, expected 1")
    eigenvalues = np.linalg.eigvalsh(matrix)
    if eigenvalues[0] < -DENSITY_TOL:
        raise NotDensityMatrix(f"negative eigenvalue {eigenvalues[0]!r}")


def ipr(state) -> float:
    """Inverse participation ratio of a normalized state; lies in [1, N]."""
    amps = _require_normalized(_amplitudes(state))
    probabilities = np.abs(amps) ** 2
    total = probabilities.sum()
    return float(total * total / np.sum(probabilities * probabilities))


def reduced_density_two_sites(state, site_i: int, site_j: int) -> TwoQubitDensity:
    """Two-site reduced density matrix of a one-excitation state.

    Tracing out the other N-2 spins leaves populations
    (1 - |psi_i|^2 - |psi_j|^2, |psi_j|^2, |psi_i|^2, 0) and the single
    coherence psi_i psi_j* between |du> and |ud>.
    """
    amps = _require_normalized(_amplitudes(state))
    n = amps.size
    if not (1 <= site_i < site_j <= n):
        raise BadSitePair(f"need 1 <= i < j <= {n}, got ({site_i}, {site_j})")
    amp_i = amps[site_i - 1]
    amp_j = amps[site_j - 1]
    pop_i = abs(amp_i) ** 2
    pop_j = abs(amp_j) ** 2
    matrix = np.zeros((4, 4), dtype=complex)
    matrix[0, 0] = max(1.0 - pop_i - pop_j, 0.0)
    matrix[1, 1] = pop_j
    matrix[2, 2] = pop_i
    matrix[1, 2] = amp_j * np.conj(amp_i)
    matrix[2, 1] = amp_i * np.conj(amp_j)
    return TwoQubitDensity(matrix=matrix, sites=(site_i, site_j))


def _sqrtm_psd(matrix: np.ndarray) -> np.ndarray:
    """Square root of a Hermitian PSD matrix, zeroing numerically-null modes."""
    eigenvalues, eigenvectors = np.linalg.eigh(matrix)
    cutoff = 1e-12 * max(float(eigenvalues[-1]), 0.0)
    clipped = np.where(eigenvalues > cutoff, eigenvalues, 0.0)
    return (eigenvectors * np.sqrt(clipped)) @ eigenvectors.conj().T


def wootters_concurrence(rho) -> float:
    """Concurrence C = max(0, l1 - l2 - l3 - l4) of a two-qubit state.

    The l_i are the decreasingly-ordered square roots of the eigenvalues of
    rho * rho_tilde with rho_tilde = (sy x sy) rho* (sy x sy).  They are
    computed as the singular values of sqrt(rho) (sy x sy) sqrt(rho)*, which
    is exact for the same spectrum but does not lose half the significant
    digits on the zero modes the way sqrt-of-eigenvalue does.
    """
    matrix = rho.matrix if isinstance(rho, TwoQubitDensity) else np.asarray(rho, dtype=complex)
    _check_density(matrix)
    root = _sqrtm_psd(matrix)
    lam = np.linalg.svd(root @ _YY @ root.conj(), compute_uv=False)
    value = lam[0] - lam[1] - lam[2] - lam[3]
    return float(min(max(value, 0.0), 1.0))


def nn_concurrence_closed_form(eigvec, site: int) -> float:
    """Nearest-neighbor concurrence 2 |psi_{site+1} psi_site| of an eigenstate."""
    amps = _amplitudes(eigvec)
    if not 1 <= site <= amps.size - 1:
        raise BadSite(f"site must be in 1..{amps.size - 1}, got {site}")
    return float(2.0 * abs(amps[site] * amps[site - 1]))


def c12_from_energy_derivative(spec: ChainSpec, state_index: int) -> float:
    """First-bond concurrence |(1/J) dE_j/dalpha| by the Hellmann-Feynman route."""
    return abs(denergy_dalpha(spec, state_index) / spec.exchange_j)


def eigenstate_c12(spec: ChainSpec, state_index: int) -> float:
    """C_12 of one selected eigenstate, 2 |psi_1 psi_2|, without a full solve."""
    hamiltonian = build_hamiltonian(spec)
    if not 1 <= state_index <= hamiltonian.n_sites:
        raise ValueError(f"state_index must be in 1..{hamiltonian.n_sites}, got {state_index}")
    _, columns = eigh_tridiagonal(
        hamiltonian.diag,
        hamiltonian.offdiag,
        select="i",
        select_range=(state_index - 1, state_index - 1),
    )
    return float(2.0 * abs(columns[0, 0] * columns[1, 0]))


def ipr_of_rows(states: np.ndarray) -> np.ndarray:
    """IPR of every row of an array of normalized amplitude vectors."""
    probabilities = np.abs(states) ** 2
    totals = probabilities.sum(axis=1)
    return totals * totals / np.sum(probabilities * probabilities, axis=1)


def ipr_sweep(
    template: ChainSpec, alphas, state_indices
) -> list[tuple[float, int, float]]:
    """Rows (alpha, j, L_IPR) for the requested 1-based eigenstate indices."""
    rows = []
    indices = [int(j) for j in state_indices]
    for alpha in alphas:
        dec = eigendecompose(build_hamiltonian(with_alpha(template, float(alpha))))
        values = ipr_of_rows(dec.vectors)
        for j in indices:
            rows.append((float(alpha), j, float(values[j - 1])))
    return rows


def c12_sweep(
    template: ChainSpec, alphas, state_indices
) -> list[tuple[float, int, float]]:
    """Rows (alpha, j, C_12) for the requested 1-based eigenstate indices."""
    rows = []
    indices = [int(j) for j in state_indices]
    for alpha in alphas:
        dec = eigendecompose(build_hamiltonian(with_alpha(template, float(alpha))))
        for j in indices:
            vector = dec.vectors[j - 1]
            rows.append((float(alpha), j, float(2.0 * abs(vector[0] * vector[1]))))
    return rows


def sweep_alpha_grid(step: float = 0.005, upper: float = 2.0) -> np.ndarray:
    """Default impurity-strength grid for localization/concurrence sweeps."""
    count = int(round(upper / step)) + 1
    return step * np.arange(count)


@dataclass(frozen=True)
class ConcurrencePeak:
    """Location and height of a curve's largest maximum over alpha."""

    alpha: float
    height: float
    dominant: bool


def _local_maxima(values: np.ndarray) -> list[int]:
    picks = []
    for k in range(1, values.size - 1):
        if values[k] >= values[k - 1] and values[k] >= values[k + 1] and (
            values[k] > values[k - 1] or values[k] > values[k + 1]
        ):
            picks.append(k)
    return picks


def c12_peak(
    template: ChainSpec,
    state_index: int,
    alphas=None,
    *,
    exclude_below: float = 0.02,
    dominance: float = 3.0,
    refine: bool = True,
) -> ConcurrencePeak:
    """Largest maximum of C_12(E_j, alpha) over an alpha grid.

    The region alpha < exclude_below is skipped (site 1 decouples at alpha=0
    and the resulting degeneracy makes C_12 ill-defined there).  The maximum
    counts as dominant when it exceeds `dominance` times the next-largest
    local maximum of the same curve.  With refine=True the grid maximum is
    polished by bounded scalar minimization between its neighbors.
    """
    if alphas is None:
        alphas = sweep_alpha_grid()
    alphas = np.asarray(alphas, dtype=float)
    keep = alphas >= exclude_below
    alphas = alphas[keep]
    if alphas.size < 3:
        raise ValueError("need at least three alpha samples above the exclusion cut")
    curve = np.array([eigenstate_c12(with_alpha(template, a), state_index) for a in alphas])

    best = int(np.argmax(curve))
    maxima = _local_maxima(curve)
    others = [curve[k] for k in maxima if k != best]
    dominant = not others or curve[best] > dominance * max(others)

    alpha_peak = float(alphas[best])
    height = float(curve[best])
    if refine:
        lo = alphas[max(best - 1, 0)]
        hi = alphas[min(best + 1, alphas.size - 1)]
        if hi > lo:
            result = minimize_scalar(
                lambda a: -eigenstate_c12(with_alpha(template, float(a)), state_index),
                bounds=(float(lo), float(hi)),
                method="bounded",
                options={"xatol": 1e-6},
            )
            if -result.fun >= height:
                alpha_peak = float(result.x)
                height = float(-result.fun)
    return ConcurrencePeak(alpha=alpha_peak, height=height, dominant=dominant)
