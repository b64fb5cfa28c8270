"""Weighted short-time norms X_k, F_k(T), F^s(T) and the resolvent N_k.

A trajectory sampled at uniform dt is windowed by eta0(2^{2k}(t - t_k))
(support width 4 * 2^{-2k}), demodulated by exp(-i t mu(n)) so the discrete
temporal frequency tau' equals the modulation tau - mu(n), transformed, and
binned into dyadic shells in |tau'|:

    j = 0 bin:  |tau'| <= 2,       bin j >= 1:  2^j < |tau'| <= 2^{j+1}

Shell masses are L^2(dt)-calibrated so that sum_j mass_j^2 equals the
squared L^2(dt) norm of the windowed data exactly (discrete Plancherel).
The X_k norm is sum_j 2^{j/2} beta_{j,k} mass_j with the weight

    beta_{j,0} = 1,   beta_{j,k} = 1 + 2^{gamma (j - 5k)}  (k >= 1),

gamma in (0, 1/4], default 1/4.  F_k(T) takes the sup over a t_k grid of
spacing 2^{-2k}/4; windows that do not fit inside the recorded span fall
back to a single centered window with the data zero-extended (the
trajectory acting as its own extension, which upper-bounds the infimum over
extensions; flagged in the result metadata).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.fft as sfft

from .errors import ParameterError, ResolutionError
from .integrate import Trajectory, _linear_symbol
from .spectral import chi

GAMMA_DEFAULT = 0.25
WINDOW_HALF_WIDTH = 2.0  # support of eta0 in scaled units
MIN_WINDOW_SAMPLES = 64


def beta_weight(j: int, k: int, gamma: float = GAMMA_DEFAULT) -> float:
    """Modulation weight beta_{j,k} = 1 (k=0) or 1 + 2^{gamma(j-5k)}."""
    if not 0.0 < gamma <= 0.25:
        raise ParameterError(f"gamma must lie in (0, 1/4], got {gamma}")
    if j < 0 or k < 0:
        raise ParameterError("dyadic indices must be nonnegative")
    if k == 0:
        return 1.0
    return 1.0 + 2.0 ** (gamma * (j - 5 * k))


@dataclass(frozen=True)
class WeightTable:
    """Weight parameters for the X_k sums.

    clamp_offset, when set, drops shells above j = 5k + clamp_offset (the
    regime where the weight is no longer controllable); default is no
    clamp, keeping the full discrete surrogate.
    """

    gamma: float = GAMMA_DEFAULT
    clamp_offset: int | None = None

    def __post_init__(self):
        if not 0.0 < self.gamma <= 0.25:
            raise ParameterError(f"gamma must lie in (0, 1/4], got {self.gamma}")

    def beta(self, j: int, k: int) -> float:
        return beta_weight(j, k, self.gamma)

    def keep_shell(self, j: int, k: int) -> bool:
        return self.clamp_offset is None or j <= 5 * k + self.clamp_offset


@dataclass
class ModulationShellSet:
    """Dyadic shell masses of one windowed, demodulated snapshot."""

    k: int
    window_center: float
    shells: dict
    window_l2: float
    n_samples: int
    dt: float
    zero_extended: bool = False

    def total_mass_sq(self) -> float:
        return float(sum(m * m for m in self.shells.values()))


def _shell_index(abs_tau: np.ndarray) -> np.ndarray:
    """Sharp dyadic binning: 0 for |tau| <= 2, else j with 2^j < |tau| <= 2^{j+1}."""
    out = np.zeros(abs_tau.shape, dtype=int)
    big = abs_tau > 2.0
    out[big] = np.ceil(np.log2(abs_tau[big])).astype(int) - 1
    return np.maximum(out, 0)


def _window_samples(traj: Trajectory, k: int, t_k: float):
    """Uniform in-window samples (indices, offsets, zero_extended flag)."""
    times = traj.times
    if len(times) < 2:
        raise ResolutionError("trajectory must carry at least two records")
    dts = np.diff(times)
    dt = float(dts[0])
    if np.max(np.abs(dts - dt)) > 1e-9 * max(dt, 1e-300):
        raise ResolutionError("modulation decomposition needs uniform record spacing")
    half = WINDOW_HALF_WIDTH * 4.0 ** (-k)
    span = 2.0 * half
    need = span / MIN_WINDOW_SAMPLES
    if dt > need * (1 + 1e-12):
        raise ResolutionError(
            f"record spacing {dt:.3e} too coarse for k={k}: need dt <= {need:.3e}"
        )
    m_lo = int(np.floor((t_k - half - times[0]) / dt))
    m_hi = int(np.ceil((t_k + half - times[0]) / dt))
    idx = np.arange(m_lo, m_hi + 1)
    zero_extended = bool(idx[0] < 0 or idx[-1] >= len(times))
    return idx, dt, zero_extended


def modulation_decompose(traj: Trajectory, k: int, t_k: float) -> ModulationShellSet:
    """Windowed space-time transform of the I_k band, binned in |tau - mu(n)|."""
    from .spectral import eta0

    grid = traj.grid
    idx, dt, zero_extended = _window_samples(traj, k, t_k)
    mu = _linear_symbol(grid, traj.params, traj.equation_tag)
    band = np.nonzero(chi(k, grid.modes))[0]
    if band.size == 0:
        return ModulationShellSet(k, t_k, {}, 0.0, len(idx), dt, zero_extended)

    t_atoms = traj.times[0] + idx * dt
    inside = (idx >= 0) & (idx < len(traj.times))
    data = np.zeros((len(idx), band.size), dtype=np.complex128)
    data[inside] = traj.states[np.clip(idx, 0, len(traj.times) - 1)][:, band][inside]
    window = eta0(4.0**k * (t_atoms - t_k))
    demod = np.exp(-1j * np.outer(t_atoms, mu[band]))
    g = data * demod * window[:, None]

    G = sfft.fft(g, axis=0)
    taus = 2.0 * np.pi * sfft.fftfreq(len(idx), d=dt)
    shell_of = _shell_index(np.abs(taus))
    # L^2(dt) calibration: sum_j mass_j^2 = dt * sum |g|^2
    weights = (np.abs(G) ** 2).sum(axis=1) * (dt / len(idx))
    shells: dict = {}
    for j, w in zip(shell_of, weights):
        shells[int(j)] = shells.get(int(j), 0.0) + float(w)
    shells = {j: float(np.sqrt(m)) for j, m in sorted(shells.items())}
    window_l2 = float(np.sqrt(dt * np.sum(np.abs(g) ** 2)))
    return ModulationShellSet(k, t_k, shells, window_l2, len(idx), dt, zero_extended)


def xk_norm(shells: ModulationShellSet, wt: WeightTable | None = None) -> float:
    """sum_j 2^{j/2} beta_{j,k} * (shell mass)."""
    if wt is None:
        wt = WeightTable()
    return float(
        sum(
            2.0 ** (j / 2.0) * wt.beta(j, shells.k) * m
            for j, m in shells.shells.items()
            if wt.keep_shell(j, shells.k)
        )
    )


def _tk_grid(traj: Trajectory, k: int, T: float):
    """Window centers: interior sliding grid of spacing 2^{-2k}/4, or a
    single centered window (zero-extended data) when none fits."""
    t0, t1 = traj.times[0], min(traj.times[-1], T)
    half = WINDOW_HALF_WIDTH * 4.0 ** (-k)
    lo, hi = t0 + half, t1 - half
    if hi >= lo:
        step = 4.0 ** (-k) / 4.0
        n = int(np.floor((hi - lo) / step)) + 1
        return lo + step * np.arange(n), False
    return np.array([0.5 * (t0 + t1)]), True


def fk_norm(traj: Trajectory, k: int, T: float, wt: WeightTable | None = None) -> float:
    """sup over the t_k grid of the X_k norm of the windowed data."""
    centers, extended = _tk_grid(traj, k, T)
    best = 0.0
    for t_k in centers:
        best = max(best, xk_norm(modulation_decompose(traj, k, t_k), wt))
    return best


def nk_norm(traj: Trajectory, k: int, T: float, wt: WeightTable | None = None) -> float:
    """Like fk_norm with the resolvent weight (tau - mu(n) + i 2^{2k})^{-1}."""
    from .spectral import eta0

    if wt is None:
        wt = WeightTable()
    grid = traj.grid
    centers, _ = _tk_grid(traj, k, T)
    mu = _linear_symbol(grid, traj.params, traj.equation_tag)
    band = np.nonzero(chi(k, grid.modes))[0]
    if band.size == 0:
        return 0.0
    best = 0.0
    for t_k in centers:
        idx, dt, _ = _window_samples(traj, k, t_k)
        t_atoms = traj.times[0] + idx * dt
        inside = (idx >= 0) & (idx < len(traj.times))
        data = np.zeros((len(idx), band.size), dtype=np.complex128)
        data[inside] = traj.states[np.clip(idx, 0, len(traj.times) - 1)][:, band][inside]
        window = eta0(4.0**k * (t_atoms - t_k))
        demod = np.exp(-1j * np.outer(t_atoms, mu[band]))
        g = data * demod * window[:, None]
        G = sfft.fft(g, axis=0)
        taus = 2.0 * np.pi * sfft.fftfreq(len(idx), d=dt)
        G = G / (taus[:, None] + 1j * 4.0**k)
        shell_of = _shell_index(np.abs(taus))
        weights = (np.abs(G) ** 2).sum(axis=1) * (dt / len(idx))
        shells: dict = {}
        for j, w in zip(shell_of, weights):
            shells[int(j)] = shells.get(int(j), 0.0) + float(w)
        val = sum(
            2.0 ** (j / 2.0) * wt.beta(j, k) * np.sqrt(m)
            for j, m in shells.items()
            if wt.keep_shell(j, k)
        )
        best = max(best, float(val))
    return best


def fs_norm(traj: Trajectory, s: float, T: float, wt: WeightTable | None = None) -> float:
    """(sum_k 2^{2sk} ||P_k traj||_{F_k(T)}^2)^{1/2} over the retained bands."""
    grid = traj.grid
    M = grid.max_mode
    k_max = max(0, int(np.ceil(np.log2(max(M, 2)))))
    total = 0.0
    for k in range(0, k_max + 1):
        chik = chi(k, grid.modes)
        if not np.any(chik):
            continue
        band = np.nonzero(chik)[0]
        if not np.any(np.abs(traj.states[:, band])):
            continue
        proj = Trajectory(
            grid,
            traj.times,
            traj.states * chik[None, :],
            traj.params,
            traj.equation_tag,
            traj.dt,
            traj.record_stride,
        )
        fk = fk_norm(proj, k, T, wt)
        total += 4.0 ** (s * k) * fk * fk
    return float(np.sqrt(total))
