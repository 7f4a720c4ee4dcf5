"""Transfer experiments on the mirror-impurity chain.

The excitation is injected at site 1 and read out at site N; both edge bonds
carry the same rescaled coupling.  The wavefront crosses the chain at the
maximal group velocity 2|J| sites per unit time, so the arrival shows up near
t ~ N/2 as a local minimum of the running IPR and, at the same time, as the
first prominent fidelity maximum.  The protocol layer scans the impurity
strength on a grid, records the fidelity peak inside the refocus window
[0.25 N, 0.75 N], and reports the strength that transfers best together with
its transfer time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .chain import mirror_impurities, build_hamiltonian
from .dynamics import SeriesKind, TimeSeries, fidelity
from .errors import NoMinimumInWindow
from .spectral import eigendecompose

REFOCUS_T_STEP = 0.1


def refocus_window(n_sites: int) -> tuple[float, float]:
    """Search window [0.25 N, 0.75 N] around the ballistic arrival time."""
    return 0.25 * n_sites, 0.75 * n_sites


def default_alpha_grid() -> np.ndarray:
    """Impurity-strength grid 0.30 .. 1.00, step 0.01."""
    return np.arange(30, 101) / 100.0


@dataclass(frozen=True)
class Landscape:
    """Fidelity F(alpha, t) tabulated on a rectangular grid."""

    alphas: np.ndarray
    times: np.ndarray
    fidelities: np.ndarray

    def __post_init__(self):
        alphas = np.array(self.alphas, dtype=float)
        times = np.array(self.times, dtype=float)
        values = np.array(self.fidelities, dtype=float)
        if values.shape != (alphas.size, times.size):
            raise ValueError("fidelity grid shape must be (len(alphas), len(times))")
        for array in (alphas, times, values):
            array.setflags(write=False)
        object.__setattr__(self, "alphas", alphas)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "fidelities", values)

    def peak(self) -> tuple[float, float, float]:
        """(alpha, t, F) of the global maximum; first grid point on ties."""
        flat = int(np.argmax(self.fidelities))
        row, col = divmod(flat, self.times.size)
        return float(self.alphas[row]), float(self.times[col]), float(self.fidelities[row, col])


@dataclass(frozen=True)
class AlphaTrace:
    """Refocus-window fidelity peak for one impurity strength."""

    alpha: float
    t_refocus: float
    f_peak: float


@dataclass(frozen=True)
class TransferReport:
    """Outcome of the impurity-strength optimization for one chain length."""

    n_sites: int
    alpha_opt: float
    t_tr: float
    f_max: float
    c_max: float
    per_alpha: tuple[AlphaTrace, ...]


@dataclass(frozen=True)
class ScalingResult:
    """Per-length reports plus the linear fit of the transfer time vs N."""

    reports: tuple[TransferReport, ...]
    t_tr_slope: float | None
    t_tr_intercept: float | None
    t_tr_correlation: float | None


def fidelity_landscape(
    n_sites: int, alphas, times, *, exchange_j: float = -1.0, field_h: float = 0.0
) -> Landscape:
    """Tabulate F(alpha, t) for the mirror-impurity chain."""
    alphas = np.asarray(alphas, dtype=float)
    times = np.asarray(times, dtype=float)
    if alphas.size == 0 or times.size == 0:
        raise ValueError("alpha and time grids must be nonempty")
    grid = np.empty((alphas.size, times.size))
    for row, alpha in enumerate(alphas):
        spec = mirror_impurities(n_sites, float(alpha), exchange_j=exchange_j, field_h=field_h)
        dec = eigendecompose(build_hamiltonian(spec))
        grid[row] = fidelity(dec, times)
    return Landscape(alphas=alphas, times=times, fidelities=grid)


def detect_refocus_time(series: TimeSeries, window: tuple[float, float]) -> float:
    """Time of the deepest IPR local minimum inside the window.

    Ties break toward the earliest time.  Raises NoMinimumInWindow when the
    series has no interior local minimum there.
    """
    if series.kind is not SeriesKind.IPR:
        raise ValueError(f"need an IPR series, got kind={series.kind.value!r}")
    lo, hi = float(window[0]), float(window[1])
    if not lo < hi:
        raise ValueError(f"window must satisfy lo < hi, got {window}")
    times = series.times
    values = series.values
    if times[0] > lo or times[-1] < hi:
        raise ValueError(
            f"series [{times[0]}, {times[-1]}] does not cover the window [{lo}, {hi}]"
        )
    best_k = -1
    for k in range(1, times.size - 1):
        if not lo <= times[k] <= hi:
            continue
        left, mid, right = values[k - 1], values[k], values[k + 1]
        if mid <= left and mid <= right and (mid < left or mid < right):
            if best_k < 0 or mid < values[best_k]:
                best_k = k
    if best_k < 0:
        raise NoMinimumInWindow(f"no IPR local minimum inside [{lo}, {hi}]")
    return float(times[best_k])


def optimize_alpha(
    n_sites: int,
    alpha_grid=None,
    *,
    exchange_j: float = -1.0,
    field_h: float = 0.0,
    t_step: float = REFOCUS_T_STEP,
) -> TransferReport:
    """Grid search for the impurity strength with the best refocus-window peak.

    For every alpha the fidelity is scanned over the refocus window with step
    t_step and its maximum recorded; the winning alpha (first grid point on
    ties) defines alpha_opt, t_tr and f_max.  The landscape is multimodal, so
    the search is exhaustive rather than gradient-based.
    """
    if alpha_grid is None:
        alpha_grid = default_alpha_grid()
    alphas = np.asarray(alpha_grid, dtype=float)
    if alphas.size == 0:
        raise ValueError("alpha grid must be nonempty")
    if np.any(alphas <= 0.0):
        raise ValueError("alpha grid entries must be positive")
    lo, hi = refocus_window(n_sites)
    times = lo + t_step * np.arange(int(math.floor((hi - lo) / t_step + 1e-9)) + 1)

    traces = []
    for alpha in alphas:
        spec = mirror_impurities(n_sites, float(alpha), exchange_j=exchange_j, field_h=field_h)
        dec = eigendecompose(build_hamiltonian(spec))
        values = fidelity(dec, times)
        k = int(np.argmax(values))
        traces.append(AlphaTrace(alpha=float(alpha), t_refocus=float(times[k]), f_peak=float(values[k])))

    winner = traces[int(np.argmax([trace.f_peak for trace in traces]))]
    return TransferReport(
        n_sites=int(n_sites),
        alpha_opt=winner.alpha,
        t_tr=winner.t_refocus,
        f_max=winner.f_peak,
        c_max=math.sqrt(winner.f_peak),
        per_alpha=tuple(traces),
    )


def scaling_sweep(n_list, alpha_grid=None, **kwargs) -> ScalingResult:
    """Optimize every chain length and fit t_tr vs N by least squares.

    Lengths must be even (the spectrum-symmetry bookkeeping assumes it).  The
    slope is reported as absent when fewer than two lengths are given.
    """
    lengths = [int(n) for n in n_list]
    if not lengths:
        raise ValueError("n_list must be nonempty")
    for n in lengths:
        if n % 2 != 0:
            raise ValueError(f"chain lengths must be even, got {n}")
    reports = tuple(optimize_alpha(n, alpha_grid, **kwargs) for n in lengths)
    if len(reports) < 2:
        return ScalingResult(reports=reports, t_tr_slope=None, t_tr_intercept=None, t_tr_correlation=None)
    ns = np.array([report.n_sites for report in reports], dtype=float)
    t_trs = np.array([report.t_tr for report in reports])
    slope, intercept = np.polyfit(ns, t_trs, 1)
    correlation = float(np.corrcoef(ns, t_trs)[0, 1])
    return ScalingResult(
        reports=reports,
        t_tr_slope=float(slope),
        t_tr_intercept=float(intercept),
        t_tr_correlation=correlation,
    )
