"""Conserved Hamiltonians, drift reporting, localized modified energies, E^s.

The three Hamiltonians of the constrained family (physical integrals over
[0, 2*pi]):

    H0 = int u^2/2
    H1 = int (u_x)^2/2 + (c1/80) u^4
    H2 = int (u_xx)^2/2 + (c1/8) u^2 u_x^2 + (c1^2/1600) u^6

All three are constant along the constrained flow; H2 generates it.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError
from .integrate import Trajectory
from .spectral import (
    GridSpec,
    SpectralField,
    chi,
    project_pk,
    psi,
    synthesize_values,
)

TWO_PI = 2.0 * np.pi


def _phys(grid: GridSpec, coeff: np.ndarray, order: int = 0) -> np.ndarray:
    w = (1j * grid.modes.astype(float)) ** order if order else 1.0
    return synthesize_values(grid, w * coeff).real


def _quad(grid: GridSpec, values: np.ndarray) -> float:
    """Collocation trapezoid integral over [0, 2*pi], exact for trig
    polynomials below the Nyquist band."""
    return float(np.sum(values) * (TWO_PI / grid.phys_points))


def hamiltonian_h0(u: SpectralField) -> float:
    u.require_real(what="H0 input")
    U = _phys(u.grid, u.coeff)
    return 0.5 * _quad(u.grid, U * U)


def hamiltonian_h1(u: SpectralField, c1: float) -> float:
    u.require_real(what="H1 input")
    U = _phys(u.grid, u.coeff)
    Ux = _phys(u.grid, u.coeff, 1)
    u2 = U * U
    return _quad(u.grid, 0.5 * Ux * Ux + (c1 / 80.0) * u2 * u2)


def hamiltonian_h2(u: SpectralField, c1: float) -> float:
    u.require_real(what="H2 input")
    U = _phys(u.grid, u.coeff)
    Ux = _phys(u.grid, u.coeff, 1)
    Uxx = _phys(u.grid, u.coeff, 2)
    u2 = U * U
    return _quad(
        u.grid,
        0.5 * Uxx * Uxx + (c1 / 8.0) * u2 * Ux * Ux + (c1**2 / 1600.0) * u2 * u2 * u2,
    )


@dataclass
class HamiltonianReport:
    times: np.ndarray
    h0: np.ndarray
    h1: np.ndarray
    h2: np.ndarray
    relative_drift: tuple

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["time", "H0", "H1", "H2"])
            for i in range(len(self.times)):
                w.writerow(
                    [
                        f"{self.times[i]:.16e}",
                        f"{self.h0[i]:.16e}",
                        f"{self.h1[i]:.16e}",
                        f"{self.h2[i]:.16e}",
                    ]
                )


def _rel_drift(series: np.ndarray) -> float:
    ref = series[0]
    scale = max(abs(ref), 1e-300)
    return float(np.max(np.abs(series - ref)) / scale)


def drift_report(traj: Trajectory, c1: float) -> HamiltonianReport:
    """Time series of H0, H1, H2 on the recorded states with max relative drift."""
    n = len(traj)
    h0 = np.empty(n)
    h1 = np.empty(n)
    h2 = np.empty(n)
    for i in range(n):
        f = traj.field(i)
        h0[i] = hamiltonian_h0(f)
        h1[i] = hamiltonian_h1(f, c1)
        h2[i] = hamiltonian_h2(f, c1)
    return HamiltonianReport(
        traj.times.copy(), h0, h1, h2, (_rel_drift(h0), _rel_drift(h1), _rel_drift(h2))
    )


# ---------------------------------------------------------------------------
# Localized modified energy E_k
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ModifiedEnergyParams:
    """Correction weights; the defaults are the proof's choice."""

    kappa: float = -4.0 / 3.0
    epsilon: float = -2.0 / 3.0


def _ek_correction(grid: GridSpec, v1c, v2c, wc, k: int, weight3: np.ndarray) -> complex:
    """sum over n1+n2+n3+n = 0 (pairwise sums of (n1,n2,n3) nonzero) of
    v1(n1) v2(n2) weight3(n3)/n3 * w(n3) chi_k(n)/n * w(n).

    weight3 is a per-mode table (psi_k or chi_k evaluated on grid.modes).
    Cost O(|supp chi_k| * M^2) by looping outputs over the chi_k band.
    """
    M = grid.max_mode
    modes = grid.modes
    chik = chi(k, modes)
    out = 0.0 + 0.0j
    idx_n = np.nonzero(chik)[0]
    n1g, n2g = np.meshgrid(modes, modes, indexing="ij")
    v1g = v1c[:, None]
    v2g = v2c[None, :]
    prod12 = v1g * v2g
    for i_n in idx_n:
        n = modes[i_n]
        if n == 0:
            continue
        n3g = -n - n1g - n2g
        valid = np.abs(n3g) <= M
        # nonresonance: (n1+n2)(n1+n3)(n2+n3) != 0 with n1+n2+n3 = -n
        nz = (n1g + n2g) * (n1g + n3g) * (n2g + n3g) != 0
        sel = valid & nz & (n3g != 0)
        if not np.any(sel):
            continue
        i3 = n3g[sel] + M
        w3 = weight3[i3]
        m = np.any(w3 != 0)
        if not m:
            continue
        term = prod12[sel] * (w3 / n3g[sel]) * wc[i3]
        out += np.sum(term) * (chik[i_n] / n) * wc[i_n]
    return out


def modified_energy_ek(
    v1: SpectralField,
    v2: SpectralField,
    w: SpectralField,
    k: int,
    mp: ModifiedEnergyParams | None = None,
) -> float:
    """||P_k w||^2 plus the kappa/psi and epsilon/chi cubic corrections,
    summed over the (l, m) pairs (1,1), (1,2), (2,2) with equal weights.

    Defined for k >= 1 (the k = 0 block carries no correction)."""
    if k < 1:
        raise ParameterError("modified energy E_k is defined for k >= 1")
    if mp is None:
        mp = ModifiedEnergyParams()
    grid = w.grid
    w.require_real(what="modified energy w")
    pkw = project_pk(w, k)
    base = float(np.sum(np.abs(pkw.coeff) ** 2))
    psik = psi(k, grid.modes)
    chik = chi(k, grid.modes)
    total = base
    for a, b in ((v1.coeff, v1.coeff), (v1.coeff, v2.coeff), (v2.coeff, v2.coeff)):
        s_psi = _ek_correction(grid, a, b, w.coeff, k, psik)
        s_chi = _ek_correction(grid, a, b, w.coeff, k, chik)
        total += mp.kappa * s_psi.real + mp.epsilon * s_chi.real
    return total


# ---------------------------------------------------------------------------
# E^s energy on trajectories
# ---------------------------------------------------------------------------

def es_energy(traj: Trajectory, s: float, T: float | None = None) -> float:
    """||P_0 u(0)|| ^2 + sum_{k>=1} 2^{2sk} sup_t ||P_k u(t)||^2, square-rooted.

    The sup runs over the recorded time grid (recording stride bounds the
    gap to the continuous sup).
    """
    grid = traj.grid
    M = grid.max_mode
    mask = np.ones(len(traj), dtype=bool)
    if T is not None:
        mask = traj.times <= T + 1e-15
    states = traj.states[mask]
    k_max = max(1, int(np.ceil(np.log2(max(M, 2)))) + 1)
    chi0 = chi(0, grid.modes)
    total = float(np.sum(np.abs(chi0 * states[0]) ** 2))
    for k in range(1, k_max + 1):
        chik = chi(k, grid.modes)
        if not np.any(chik):
            continue
        masses = np.sum(np.abs(states * chik[None, :]) ** 2, axis=1)
        total += 2.0 ** (2 * s * k) * float(np.max(masses))
    return float(np.sqrt(total))
