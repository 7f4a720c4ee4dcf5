"""Exact time evolution in the one-excitation sector.

Evolution is done in the eigenbasis: starting from site s,

    psi_n(t) = sum_j exp(-i E_j t) psi_n^(j) psi_s^(j),

which is exact for every t (hbar = 1).  The end-to-end transfer amplitude is
f_N(t) = <N| exp(-i H t) |1>, the transfer fidelity F = |f_N|^2 is the excited
population of the receiving spin, and the entanglement protocol that shares a
Bell pair between an uncoupled ancilla A and site 1 delivers concurrence
C_{A,N}(t) = |f_N(t)| between A and site N.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .measures import AmplitudeVector, ipr_of_rows, wootters_concurrence
from .spectral import SpectralDecomposition


class SeriesKind(enum.Enum):
    IPR = "ipr"
    FIDELITY = "fidelity"
    TRANSFER_AMPLITUDE = "transfer_amplitude"
    CONCURRENCE_AN = "concurrence_an"


@dataclass(frozen=True)
class TimeSeries:
    """One value per time on a strictly ascending grid."""

    times: np.ndarray
    values: np.ndarray
    kind: SeriesKind

    def __post_init__(self):
        times = np.array(self.times, dtype=float)
        values = np.array(self.values)
        if times.ndim != 1 or times.size == 0:
            raise ValueError("time grid must be a nonempty 1-d array")
        if values.shape != times.shape:
            raise ValueError("times and values must have matching lengths")
        if times.size > 1 and np.any(np.diff(times) <= 0.0):
            raise ValueError("time grid must be strictly ascending")
        times.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)


class Propagator:
    """Evolves a single-site initial excitation under a fixed decomposition."""

    def __init__(self, dec: SpectralDecomposition, init_site: int = 1):
        if not 1 <= init_site <= dec.n_sites:
            raise ValueError(f"init_site must be in 1..{dec.n_sites}, got {init_site}")
        self.dec = dec
        self.init_site = int(init_site)
        # weight of eigenstate j in the initial delta state
        self._weights = dec.vectors[:, init_site - 1].copy()

    def amplitudes(self, t: float) -> AmplitudeVector:
        phases = np.exp(-1j * self.dec.energies * float(t))
        amps = (phases * self._weights) @ self.dec.vectors
        return AmplitudeVector(amps, time_tag=float(t))

    def amplitude_matrix(self, times) -> np.ndarray:
        """Site amplitudes for every time: shape (len(times), N)."""
        times = np.asarray(times, dtype=float)
        phases = np.exp(-1j * np.outer(times, self.dec.energies))
        return (phases * self._weights) @ self.dec.vectors


def propagate(dec: SpectralDecomposition, t: float, init_site: int = 1) -> AmplitudeVector:
    """State at time t when the excitation starts as a delta on init_site."""
    return Propagator(dec, init_site).amplitudes(t)


def transfer_amplitude(dec: SpectralDecomposition, t):
    """End-to-end amplitude f_N(t) = <N| exp(-i H t) |1>; scalar or array t."""
    weights = dec.vectors[:, 0] * dec.vectors[:, -1]
    times = np.asarray(t, dtype=float)
    flat = np.exp(-1j * np.outer(times.ravel(), dec.energies)) @ weights
    if times.ndim == 0:
        return complex(flat[0])
    return flat.reshape(times.shape)


def fidelity(dec: SpectralDecomposition, t):
    """Transfer fidelity F(t) = |f_N(t)|^2, clipped into [0, 1]."""
    amplitude = transfer_amplitude(dec, t)
    value = np.minimum(np.abs(amplitude) ** 2, 1.0)
    if np.ndim(t) == 0:
        return float(value)
    return value


def receiver_pair_density(amplitude: complex) -> np.ndarray:
    """Reduced density matrix of (ancilla, site N) in the Bell-pair protocol.

    The pair basis is {|uu>, |ud>, |du>, |dd>} with the ancilla first.  The
    phase of the untouched all-up chain component is taken as zero; only the
    coherence magnitude |f_N|/2 enters the concurrence.
    """
    f = complex(amplitude)
    population = min(abs(f) ** 2, 1.0)
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = 0.5 * (1.0 - population)
    rho[1, 1] = 0.5 * population
    rho[2, 2] = 0.5
    rho[1, 2] = 0.5 * f
    rho[2, 1] = 0.5 * np.conj(f)
    return rho


def concurrence_AN(dec: SpectralDecomposition, t):
    """Concurrence between the ancilla and site N; equals |f_N(t)|."""
    amplitude = transfer_amplitude(dec, t)
    if np.ndim(t) == 0:
        return wootters_concurrence(receiver_pair_density(amplitude))
    flat = amplitude.ravel()
    values = np.array([wootters_concurrence(receiver_pair_density(f)) for f in flat])
    return values.reshape(np.shape(t))


def time_series(dec: SpectralDecomposition, kind: SeriesKind, t_grid) -> TimeSeries:
    """Evaluate one observable on a whole time grid."""
    times = np.asarray(t_grid, dtype=float)
    kind = SeriesKind(kind)
    if kind is SeriesKind.IPR:
        states = Propagator(dec, 1).amplitude_matrix(times)
        values = ipr_of_rows(states)
    elif kind is SeriesKind.FIDELITY:
        values = np.asarray(fidelity(dec, times), dtype=float)
    elif kind is SeriesKind.TRANSFER_AMPLITUDE:
        values = np.asarray(transfer_amplitude(dec, times))
    else:
        values = np.asarray(concurrence_AN(dec, times), dtype=float)
    return TimeSeries(times=times, values=values, kind=kind)
