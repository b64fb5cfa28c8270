"""Hamiltonian values, conservation along flows, modified energy, E^s."""

import numpy as np
import pytest

from mkdvlab.equations import EquationParams
from mkdvlab.errors import ParameterError
from mkdvlab.integrate import StepControl, evolve
from mkdvlab.invariants import (
    ModifiedEnergyParams,
    drift_report,
    es_energy,
    hamiltonian_h0,
    hamiltonian_h1,
    hamiltonian_h2,
    modified_energy_ek,
)
from mkdvlab.spectral import GridSpec, SpectralField, project_pk, sobolev_norm

from oracles import random_real_coeffs


class TestHamiltonianValues:
    def test_zero(self, grid8):
        z = SpectralField.zeros(grid8)
        assert hamiltonian_h0(z) == 0.0
        assert hamiltonian_h1(z, 40.0) == 0.0
        assert hamiltonian_h2(z, 40.0) == 0.0

    def test_cosine_h0(self, cosine_field):
        assert hamiltonian_h0(cosine_field) == pytest.approx(np.pi / 2, rel=1e-13)

    def test_h0_quadratic_scaling(self, grid8):
        for A in (0.5, 2.0, 3.0):
            f = SpectralField.from_modes(grid8, {1: A / 2, -1: A / 2})
            assert hamiltonian_h0(f) == pytest.approx(A**2 * np.pi / 2, rel=1e-12)

    def test_cosine_h1(self, cosine_field):
        # pi/2 + (40/80) * 3pi/4
        assert hamiltonian_h1(cosine_field, 40.0) == pytest.approx(
            np.pi / 2 + 3 * np.pi / 8, rel=1e-13
        )
        assert hamiltonian_h1(cosine_field, 0.0) == pytest.approx(np.pi / 2, rel=1e-13)

    def test_cosine_h2(self, cosine_field):
        # int uxx^2/2 = pi/2 ; 5 * int cos^2 sin^2 = 5 pi/4 ; int cos^6 = 5pi/8
        want = np.pi / 2 + 5 * np.pi / 4 + 5 * np.pi / 8
        assert hamiltonian_h2(cosine_field, 40.0) == pytest.approx(want, rel=1e-13)
        assert hamiltonian_h2(cosine_field, 0.0) == pytest.approx(np.pi / 2, rel=1e-13)

    def test_scaling_decomposition(self, grid8, rng):
        # h1(lambda u) = lambda^2 a + lambda^4 b with a, b from two probes
        c = random_real_coeffs(8, rng, amplitude=0.3)
        f1 = SpectralField(grid8, c)
        f2 = SpectralField(grid8, 2.0 * c)
        a_plus_b = hamiltonian_h1(f1, 40.0)
        v2 = hamiltonian_h1(f2, 40.0)  # 4a + 16b
        f3 = SpectralField(grid8, 3.0 * c)
        v3 = hamiltonian_h1(f3, 40.0)  # 9a + 81b
        b = (v2 - 4 * a_plus_b) / 12.0
        a = a_plus_b - b
        assert v3 == pytest.approx(9 * a + 81 * b, rel=1e-10)


class TestConservation:
    def test_constrained_flow_conserves_all(self):
        grid = GridSpec(32)
        p = EquationParams.constrained_family(40.0)
        u0 = SpectralField.from_modes(grid, {1: 0.05, -1: 0.05, 2: 0.025, -2: 0.025})
        traj = evolve(u0, 0.01, p, tag="physical_5mkdv")
        rep = drift_report(traj, 40.0)
        assert max(rep.relative_drift) < 1e-9

    def test_zero_trajectory_zero_drift(self, grid8):
        p = EquationParams.constrained_family(40.0)
        traj = evolve(SpectralField.zeros(grid8), 0.01, p)
        rep = drift_report(traj, 40.0)
        assert rep.relative_drift == (0.0, 0.0, 0.0)

    def test_linear_flow_h0_exact(self, grid8, rng):
        p = EquationParams(c1=0, c2=0, c3=0, c4=0)
        u0 = SpectralField(grid8, random_real_coeffs(8, rng, amplitude=0.2))
        traj = evolve(u0, 0.1, p, tag="linear", ctrl=StepControl(dt=0.01))
        rep = drift_report(traj, 0.0)
        assert rep.relative_drift[0] < 1e-13

    def test_broken_c4_drifts_measurably(self):
        # negative control: H2 drift with perturbed c4 far exceeds the
        # conserved-run drift, while H0 stays exact (still divergence form)
        grid = GridSpec(32)
        u0 = SpectralField.from_modes(grid, {1: 0.05, -1: 0.05, 2: 0.025, -2: 0.025})
        T = 0.01
        p_good = EquationParams.constrained_family(40.0)
        good = drift_report(evolve(u0, T, p_good), 40.0)
        p_bad = EquationParams.constrained_family(40.0)
        p_bad.c4 *= 1.01
        bad = drift_report(evolve(u0, T, p_bad), 40.0)
        assert bad.relative_drift[0] < 1e-9
        assert bad.relative_drift[2] > 100.0 * max(good.relative_drift[2], 1e-16)

    def test_drift_decreases_at_fourth_order_in_dt(self):
        # time-discretization part of the Hamiltonian drift scales ~ dt^4
        grid = GridSpec(10)
        p = EquationParams.constrained_family(40.0)
        u0 = SpectralField.from_modes(grid, {1: 0.15, -1: 0.15})
        T = 0.02
        for splitting in ("etd_rk4", "integrating_factor_rk4"):
            drifts, dts = [], []
            for frac in (32, 64, 128):
                traj = evolve(
                    u0, T, p, "physical_5mkdv",
                    StepControl(dt=T / frac, record_stride=1, stiff_splitting=splitting),
                )
                drifts.append(max(drift_report(traj, 40.0).relative_drift))
                dts.append(T / frac)
            slope = np.polyfit(np.log(dts), np.log(drifts), 1)[0]
            assert slope >= 3.9, (splitting, drifts)

    def test_csv_roundtrip(self, tmp_path, grid8):
        p = EquationParams.constrained_family(40.0)
        u0 = SpectralField.from_modes(grid8, {1: 0.05, -1: 0.05})
        rep = drift_report(evolve(u0, 0.001, p), 40.0)
        path = tmp_path / "drift.csv"
        rep.write_csv(path)
        lines = path.read_text().splitlines()
        assert lines[0] == "time,H0,H1,H2"
        assert len(lines) == len(rep.times) + 1


class TestModifiedEnergy:
    def test_zero_w(self, grid16):
        z = SpectralField.zeros(grid16)
        v = SpectralField.from_modes(grid16, {1: 0.3, -1: 0.3})
        assert modified_energy_ek(v, v, z, 2) == 0.0

    def test_zero_v_reduces_to_projection(self, grid16, rng):
        w = SpectralField(grid16, random_real_coeffs(16, rng))
        z = SpectralField.zeros(grid16)
        got = modified_energy_ek(z, z, w, 3)
        want = float(np.sum(np.abs(project_pk(w, 3).coeff) ** 2))
        assert got == pytest.approx(want, rel=1e-13)

    def test_k_zero_unsupported(self, grid16):
        z = SpectralField.zeros(grid16)
        with pytest.raises(ParameterError):
            modified_energy_ek(z, z, z, 0)

    def test_comparability_small_data(self, grid16, rng):
        # |E_k - ||P_k w||^2| <= C ||v||^2 ||P~_k w||^2 with C modest, and
        # the 1/2 .. 3/2 comparability window at small ||v||
        mp = ModifiedEnergyParams()
        ratios = []
        for trial in range(6):
            w = SpectralField(grid16, random_real_coeffs(16, rng))
            v = SpectralField(grid16, random_real_coeffs(16, rng, amplitude=0.05))
            for k in (2, 3):
                base = float(np.sum(np.abs(project_pk(w, k).coeff) ** 2))
                if base < 1e-12:
                    continue
                ek = modified_energy_ek(v, v, w, k, mp)
                vnorm2 = sobolev_norm(v, 0.0) ** 2
                band = float(
                    sum(
                        np.sum(np.abs(project_pk(w, kk).coeff) ** 2)
                        for kk in (k - 1, k, k + 1)
                    )
                )
                ratios.append(abs(ek - base) / max(vnorm2 * band, 1e-300))
                assert 0.5 * base <= ek <= 1.5 * base
        assert ratios and max(ratios) < 100.0

    def test_defaults_match_proof_choice(self):
        mp = ModifiedEnergyParams()
        assert mp.kappa == pytest.approx(-4.0 / 3.0)
        assert mp.epsilon == pytest.approx(-2.0 / 3.0)


class TestEsEnergy:
    def test_zero_trajectory(self, grid8):
        p = EquationParams.constrained_family(40.0)
        traj = evolve(SpectralField.zeros(grid8), 0.01, p)
        assert es_energy(traj, 2.0) == 0.0

    def test_linear_flow_time_independent(self, grid16):
        # P_k-localized datum under the linear flow: E^s equals the datum's
        # weighted Littlewood-Paley norm, time-independently
        p = EquationParams(c1=0, c2=0, c3=0, c4=0)
        u0 = SpectralField.from_modes(grid16, {8: 0.5, -8: 0.5})
        t1 = evolve(u0, 0.001, p, tag="linear", ctrl=StepControl(dt=1e-4))
        t2 = evolve(u0, 0.01, p, tag="linear", ctrl=StepControl(dt=1e-3))
        assert es_energy(t1, 1.5) == pytest.approx(es_energy(t2, 1.5), rel=1e-12)

    def test_single_snapshot_dyadic_equivalence(self, grid16, rng):
        # comparable to the Sobolev norm within the dyadic 2^{+-s} slack
        s = 1.0
        w = SpectralField(grid16, random_real_coeffs(16, rng))
        p = EquationParams.constrained_family(40.0)
        traj = evolve(w, 1e-6, p, tag="linear", ctrl=StepControl(dt=1e-6))
        es = es_energy(traj, s)
        hs = sobolev_norm(w, s)
        assert es / hs < 4.0 * 2**s
        assert es / hs > 1.0 / (4.0 * 2**s)
