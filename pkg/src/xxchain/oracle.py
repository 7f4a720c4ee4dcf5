"""Brute-force full-Hilbert-space reference simulator for small chains.

Everything here works on the full 2^N space (2^(N+1) with the ancilla) and is
written to be obviously correct rather than fast: operators are assembled
from Kronecker products of Pauli matrices and evolved by dense
diagonalization.  It exists to validate the one-excitation-sector machinery
end to end, so nothing in this module reuses the sector code paths.

Basis conventions (fixed so dumps are comparable):
  * qubit 1 is the most significant bit of the basis index; the ancilla,
    when present, sits above site 1 (qubit 1 = ancilla, qubit k+1 = site k);
  * bit value 1 marks a down (excited) spin, so the all-up state is index 0
    and the one-excitation state |n> is index 2^(N-n).

The bond term is (J_b/2)(sx sx + sy sy): the half compensates the factor 2
the raw Pauli flip-flop carries, so the one-excitation block of the full
matrix reproduces the sector matrix (off-diagonals J_b) and the group
velocity stays at 2|J| sites per unit time (arrival near t ~ N/2).  The
field enters as -h sum(sz) plus the constant h (N-1) that recenters the
one-excitation block's diagonal at exactly h.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .chain import ChainSpec, bond_couplings, validate_spec
from .errors import NotNormalized, TooLarge
from .measures import TwoQubitDensity, wootters_concurrence

MAX_SITES = 12
MAX_QUBITS = 13  # chain plus ancilla

_SX = np.array([[0.0, 1.0], [1.0, 0.0]])
_SY = np.array([[0.0, -1.0j], [1.0j, 0.0]])
_SZ = np.array([[1.0, 0.0], [0.0, -1.0]])
# sx x sx + sy x sy is real: it is twice the flip-flop operator on a bond.
_FLIP_FLOP = (np.kron(_SX, _SX) + np.kron(_SY, _SY)).real


@dataclass(frozen=True)
class FullState:
    """Normalized amplitudes over the computational basis of all qubits."""

    amps: np.ndarray
    n_qubits: int

    def __post_init__(self):
        amps = np.array(self.amps, dtype=complex)
        if amps.shape != (2 ** self.n_qubits,):
            raise ValueError(
                f"expected {2 ** self.n_qubits} amplitudes for {self.n_qubits} qubits, "
                f"got shape {amps.shape}"
            )
        norm_sq = float(np.sum(np.abs(amps) ** 2))
        if abs(norm_sq - 1.0) > 1e-9:
            raise NotNormalized(f"|psi|^2 = {norm_sq!r}, expected 1 within 1e-9")
        amps.setflags(write=False)
        object.__setattr__(self, "amps", amps)


def _embed_pair(block: np.ndarray, left_qubit: int, n_qubits: int) -> np.ndarray:
    """Embed a two-qubit operator acting on qubits (k, k+1), 0-based k."""
    left = np.eye(2 ** left_qubit)
    right = np.eye(2 ** (n_qubits - left_qubit - 2))
    return np.kron(np.kron(left, block), right)


def _embed_single(op: np.ndarray, qubit: int, n_qubits: int) -> np.ndarray:
    left = np.eye(2 ** qubit)
    right = np.eye(2 ** (n_qubits - qubit - 1))
    return np.kron(np.kron(left, op), right)


def full_hamiltonian(spec: ChainSpec) -> np.ndarray:
    """Dense 2^N x 2^N Hamiltonian assembled from Pauli two-site terms."""
    validate_spec(spec)
    n = spec.n_sites
    if n > MAX_SITES:
        raise TooLarge(f"full Hamiltonian limited to {MAX_SITES} sites, got {n}")
    dim = 2 ** n
    matrix = np.zeros((dim, dim))
    for bond, coupling in enumerate(bond_couplings(spec)):
        matrix += 0.5 * coupling * _embed_pair(_FLIP_FLOP, bond, n)
    if spec.field_h != 0.0:
        for qubit in range(n):
            matrix -= spec.field_h * _embed_single(_SZ, qubit, n)
        matrix += spec.field_h * (n - 1) * np.eye(dim)
    return matrix


def one_excitation_indices(n_sites: int) -> np.ndarray:
    """Basis indices of |1>, ..., |N>: site s maps to index 2^(N-s)."""
    return np.array([2 ** (n_sites - s) for s in range(1, n_sites + 1)])


def sector_block(matrix: np.ndarray, n_sites: int) -> np.ndarray:
    """One-excitation block of a full-space operator, ordered by site."""
    indices = one_excitation_indices(n_sites)
    return matrix[np.ix_(indices, indices)]


@lru_cache(maxsize=8)
def _full_eigh(spec: ChainSpec) -> tuple[np.ndarray, np.ndarray]:
    matrix = full_hamiltonian(spec)
    energies, vectors = np.linalg.eigh(matrix)
    energies.setflags(write=False)
    vectors.setflags(write=False)
    return energies, vectors


def full_evolve(spec: ChainSpec, initial: FullState, t: float) -> FullState:
    """Evolve a full-space state by exp(-i H t) via dense diagonalization."""
    if spec.n_sites > MAX_SITES:
        raise TooLarge(f"full evolution limited to {MAX_SITES} sites, got {spec.n_sites}")
    if initial.n_qubits != spec.n_sites:
        raise ValueError(
            f"state has {initial.n_qubits} qubits but the chain has {spec.n_sites} sites"
        )
    energies, vectors = _full_eigh(spec)
    coefficients = vectors.conj().T @ initial.amps
    amps = vectors @ (np.exp(-1j * energies * float(t)) * coefficients)
    return FullState(amps=amps, n_qubits=spec.n_sites)


def site_state(spec: ChainSpec, site: int) -> FullState:
    """Full-space delta state |site> with every other spin up."""
    if not 1 <= site <= spec.n_sites:
        raise ValueError(f"site must be in 1..{spec.n_sites}, got {site}")
    amps = np.zeros(2 ** spec.n_sites, dtype=complex)
    amps[2 ** (spec.n_sites - site)] = 1.0
    return FullState(amps=amps, n_qubits=spec.n_sites)


def bell_pair_state(n_sites: int) -> FullState:
    """(|up_A down_1> + |down_A up_1>)/sqrt(2) with the rest of the chain up."""
    amps = np.zeros(2 ** (n_sites + 1), dtype=complex)
    amps[2 ** (n_sites - 1)] = 1.0 / np.sqrt(2.0)  # ancilla up, excitation on site 1
    amps[2 ** n_sites] = 1.0 / np.sqrt(2.0)  # ancilla down, chain all up
    return FullState(amps=amps, n_qubits=n_sites + 1)


def ancilla_evolve(spec: ChainSpec, t: float) -> FullState:
    """Evolve the Bell-pair state; the ancilla is uncoupled.

    The ancilla Hamiltonian is I_2 x H_chain, so evolution acts blockwise on
    the chain register of each ancilla branch (an exact operator identity,
    not an approximation).
    """
    n = spec.n_sites
    if n + 1 > MAX_QUBITS:
        raise TooLarge(f"ancilla evolution limited to {MAX_QUBITS} qubits, got {n + 1}")
    initial = bell_pair_state(n)
    energies, vectors = _full_eigh(spec)
    phases = np.exp(-1j * energies * float(t))
    amps = initial.amps.reshape(2, 2 ** n)
    evolved = np.empty_like(amps)
    for branch in range(2):
        evolved[branch] = vectors @ (phases * (vectors.conj().T @ amps[branch]))
    return FullState(amps=evolved.reshape(-1), n_qubits=n + 1)


def partial_trace_pair(state: FullState, qubit_a: int, qubit_b: int) -> np.ndarray:
    """4x4 reduced density matrix of two qubits (1-based, most significant first)."""
    n = state.n_qubits
    if qubit_a == qubit_b or not (1 <= qubit_a <= n and 1 <= qubit_b <= n):
        raise ValueError(f"need two distinct qubits in 1..{n}, got ({qubit_a}, {qubit_b})")
    tensor = state.amps.reshape((2,) * n)
    tensor = np.moveaxis(tensor, (qubit_a - 1, qubit_b - 1), (0, 1))
    flat = tensor.reshape(4, -1)
    return flat @ flat.conj().T


def oracle_concurrence(state: FullState, qubit_a: int, qubit_b: int) -> float:
    """Wootters concurrence of two named qubits of a full-space pure state."""
    if state.n_qubits > MAX_QUBITS:
        raise TooLarge(f"oracle concurrence limited to {MAX_QUBITS} qubits, got {state.n_qubits}")
    rho = partial_trace_pair(state, qubit_a, qubit_b)
    return wootters_concurrence(TwoQubitDensity(matrix=rho, sites=(qubit_a, qubit_b)))


def sz_sector_probabilities(state: FullState) -> np.ndarray:
    """Total probability in each excitation-number sector (0..n_qubits)."""
    n = state.n_qubits
    indices = np.arange(2 ** n)
    counts = np.zeros(2 ** n, dtype=int)
    for bit in range(n):
        counts += (indices >> bit) & 1
    return np.bincount(counts, weights=np.abs(state.amps) ** 2, minlength=n + 1)


@dataclass(frozen=True)
class OracleCheckResult:
    """Sector-versus-full-space deviations for one chain length."""

    n_sites: int
    block_dev: float
    amplitude_dev: float
    concurrence_dev: float
    passed: bool


BLOCK_TOL = 1e-12
AMPLITUDE_TOL = 1e-8
CONCURRENCE_TOL = 1e-8


def oracle_check(
    n_values=range(2, 9),
    alphas=(0.4, 1.0, 3.0),
    times=(1.0, 5.0, 20.0),
) -> list[OracleCheckResult]:
    """Cross-validate the sector machinery against the full space.

    For every (N, alpha): the one-excitation block of the full Hamiltonian is
    compared with the sector matrix, sector propagation from |1> is compared
    per amplitude with full-space evolution, and the traced (ancilla, N)
    concurrence is compared with |f_N(t)|.
    """
    from .chain import build_hamiltonian, single_impurity
    from .dynamics import propagate, transfer_amplitude
    from .spectral import eigendecompose

    results = []
    for n in n_values:
        block_dev = 0.0
        amplitude_dev = 0.0
        concurrence_dev = 0.0
        for alpha in alphas:
            spec = single_impurity(int(n), float(alpha))
            sector = build_hamiltonian(spec)
            block = sector_block(full_hamiltonian(spec), spec.n_sites)
            block_dev = max(block_dev, float(np.max(np.abs(block - sector.to_dense()))))

            dec = eigendecompose(sector)
            indices = one_excitation_indices(spec.n_sites)
            start = site_state(spec, 1)
            for t in times:
                full = full_evolve(spec, start, float(t))
                sector_amps = propagate(dec, float(t)).amps
                amplitude_dev = max(
                    amplitude_dev, float(np.max(np.abs(full.amps[indices] - sector_amps)))
                )
                traced = oracle_concurrence(ancilla_evolve(spec, float(t)), 1, spec.n_sites + 1)
                expected = abs(transfer_amplitude(dec, float(t)))
                concurrence_dev = max(concurrence_dev, abs(traced - expected))
        passed = (
            block_dev <= BLOCK_TOL
            and amplitude_dev <= AMPLITUDE_TOL
            and concurrence_dev <= CONCURRENCE_TOL
        )
        results.append(
            OracleCheckResult(
                n_sites=int(n),
                block_dev=block_dev,
                amplitude_dev=amplitude_dev,
                concurrence_dev=concurrence_dev,
                passed=passed,
            )
        )
    return results
