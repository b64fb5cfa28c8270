"""Counterexample data, oscillatory primitives, quintic terms, growth law."""

import math

import numpy as np
import pytest
import scipy.integrate as si

from mkdvlab.equations import EquationParams, RenormalizedTerms
from mkdvlab.errors import ConditioningError, ConfigurationError
from mkdvlab.illposed import (
    CounterexampleSpec,
    build_counterexample_data,
    counterexample_support,
    eval_appendix_terms,
    eval_d0,
    eval_d_full,
    eval_resonant_cubic_fifth,
    fifth_derivative_direct,
    growth_experiment,
    hs_norm_of_map,
    iter_quintic_tuples,
    m0_tuple,
    numeric_fifth_derivative,
    osc_double,
    osc_single,
    symmetrized_support,
    t2_duhamel_fifth,
)
from mkdvlab.integrate import StepControl
from mkdvlab.resonance import enumerate_n3, phi_cubic
from mkdvlab.spectral import GridSpec, SpectralField, sobolev_norm


class TestOscillatoryPrimitives:
    def test_single_zero_phase(self):
        assert osc_single(0, 0.3) == 0.3

    def test_single_closed_form(self):
        for phi in (1.0, -7.0, 1234.0):
            t = 0.21
            want = (np.exp(1j * phi * t) - 1.0) / (1j * phi)
            assert abs(osc_single(phi, t) - want) < 1e-15

    def test_single_bound(self):
        for phi in (0, 1, -3, 10**6, -(10**12)):
            for t in (1e-6, 1e-3, 0.5):
                v = abs(osc_single(phi, t))
                bound = t if phi == 0 else min(t, 2.0 / abs(phi))
                assert v <= bound * (1 + 1e-12)

    @pytest.mark.parametrize("a,b", [(3.0, 5.0), (0.0, 7.0), (11.0, 0.0), (-40.0, 40.0), (0.0, 0.0)])
    def test_double_against_quadrature(self, a, b):
        t = 0.37
        qr, _ = si.quad(lambda tp: (np.exp(1j * a * tp) * osc_single(b, tp)).real, 0, t, limit=300)
        qi, _ = si.quad(lambda tp: (np.exp(1j * a * tp) * osc_single(b, tp)).imag, 0, t, limit=300)
        assert abs(osc_double(a, b, t) - (qr + 1j * qi)) < 1e-12


class TestCounterexampleData:
    def test_c5_values(self):
        spec = CounterexampleSpec(N=8, s=1.0)
        supp = counterexample_support(spec)
        assert supp[7] == supp[8] == pytest.approx(1 / 8)
        for n in (-2, -1, 1, 2):
            assert supp[n] == 1.0

    def test_c3_support(self):
        spec = CounterexampleSpec(N=8, s=1.0, variant="C3")
        assert set(counterexample_support(spec)) == {-1, 1, 8}

    def test_field_not_hermitian(self):
        grid = GridSpec(16)
        f = build_counterexample_data(CounterexampleSpec(N=8, s=1.0), grid)
        assert not f.is_real()

    def test_grid_too_small(self):
        grid = GridSpec(8)
        with pytest.raises(ConfigurationError):
            build_counterexample_data(CounterexampleSpec(N=16, s=1.0), grid)

    @pytest.mark.parametrize("N", [8, 64, 512])
    @pytest.mark.parametrize("s", [0.25, 0.5, 1.0])
    def test_sobolev_norm_order_one(self, N, s):
        # ||v0||_{H^s} ~ 1, concretely in (2, 4) for s in (0, 1]
        spec = CounterexampleSpec(N=N, s=s)
        v = hs_norm_of_map(counterexample_support(spec), s)
        assert 2.0 < v < 4.0

    def test_symmetrization(self):
        spec = CounterexampleSpec(N=8, s=1.0)
        sym = symmetrized_support(counterexample_support(spec))
        for n, v in sym.items():
            assert sym[-n] == pytest.approx(np.conj(v))


class TestD0:
    def test_phi_m0_vanishes_exactly(self):
        for N in (8, 64, 4096):
            spec = CounterexampleSpec(N=N, s=1.0)
            tup = m0_tuple(spec)
            assert tup.phi_out + tup.phi_in == 0
            # cross-check through the resonance module
            assert (
                phi_cubic(N, 2, -1, N - 1) + phi_cubic(N - 1, -2, 1, N) == 0
            )

    def test_linear_in_t(self):
        s1 = CounterexampleSpec(N=128, s=1.0, t=1e-4)
        s2 = CounterexampleSpec(N=128, s=1.0, t=2e-4)
        assert abs(eval_d0(s2)) == pytest.approx(2 * abs(eval_d0(s1)), rel=1e-12)

    def test_closed_form_value(self):
        # |N^s D0| = t N^3 (N-1)^3 / [(5/2)(N-2)(N+1)(2N^2-2N+6)]  (s = 1)
        spec = CounterexampleSpec(N=64, s=1.0, t=1e-4)
        N, t = 64, 1e-4
        want_ns = t * N**3 * (N - 1) ** 3 / (2.5 * (N - 2) * (N + 1) * (2 * N**2 - 2 * N + 6))
        got = (1 + N * N) ** 0.5 * abs(eval_d0(spec))  # <N>^s weight
        assert got == pytest.approx(want_ns * math.sqrt(1 + 1 / N**2), rel=1e-10)

    def test_ratio_to_tN2_is_one_fifth(self):
        # the exact constant: ratio * 5 -> 1 from below
        for N in (64, 512, 4096):
            spec = CounterexampleSpec(N=N, s=1.0, t=1e-4)
            ratio = (1 + N * N) ** 0.5 * abs(eval_d0(spec)) / (1e-4 * N**2)
            assert 0.98 < 5.0 * ratio < 1.001


class TestDFull:
    def test_m0_term_reproduced_bitwise(self):
        spec = CounterexampleSpec(N=16, s=1.0, t=1e-4)
        rep = eval_d_full(spec)
        assert rep["d0"] == eval_d0(spec)  # same code path, bit-identical

    def test_tuples_respect_nonresonant_sets(self):
        # every outer tuple of the walker lies in the enumerated A3 sets
        spec = CounterexampleSpec(N=8, s=1.0, t=1e-3)
        supp = counterexample_support(spec)
        from_enum = {}
        for tup in iter_quintic_tuples(supp, spec, outer_terms=("cubic2",),
                                       inner_terms=("cubic2",), slots=(2,)):
            n = tup.n
            if abs(n) <= 12 and max(abs(m) for m in tup.outer) <= 12:
                key = n
                if key not in from_enum:
                    from_enum[key] = {(t3.n1, t3.n2, t3.n3) for t3 in enumerate_n3(n, 12)}
                assert tup.outer in from_enum[key]

    def test_triangle_bookkeeping(self):
        spec = CounterexampleSpec(N=64, s=1.0, t=1e-4)
        rep = eval_d_full(spec)
        # |D(N)| >= |D0| - sum of other tuples' moduli at mode N (weighted)
        assert rep["hs_norm"] >= rep["d0_hsnorm"] - rep["nonresonant_moduli"] - 1e-12
        # the cancellation slack is what the siblings of m0 remove; reported
        assert rep["cancellation_slack"] >= 0.0

    def test_full_norm_linear_growth(self):
        # the resonant tuple's leg multiset admits sibling splits whose
        # outer phases come with opposite signs (outer legs (2,-1) versus
        # (-2,1)); exactly integrated they cancel the N^2 part and the full
        # sum grows like t*N -- still unbounded, one power below the
        # single-tuple rate
        norms = []
        for N in (256, 512, 1024, 2048):
            rep = eval_d_full(CounterexampleSpec(N=N, s=1.0, t=1e-4))
            norms.append(rep["hs_norm"])
        slope = np.polyfit(np.log([256, 512, 1024, 2048]), np.log(norms), 1)[0]
        assert 0.9 <= slope <= 1.1

    def test_no_skipped_tuples_at_zero_d1(self):
        spec = CounterexampleSpec(N=32, s=1.0, t=1e-4)
        assert eval_d_full(spec)["skipped_outer_resonant"] == 0


class TestGrowthExperiment:
    def test_slope_two(self):
        Ns = [2**k for k in range(6, 13)]
        rows, slope = growth_experiment(Ns, s=1.0, t=1e-4)
        assert 1.9 <= slope <= 2.1

    def test_running_slope_column(self):
        Ns = [64, 128, 256]
        rows, _ = growth_experiment(Ns, s=1.0, t=1e-4)
        assert math.isnan(rows[0].slope_running)
        assert rows[-1].slope_running == pytest.approx(2.0, abs=0.1)

    def test_c3_variant_cubic_slope(self):
        # resonant quadruple (N,1,-1,N) drives ~ t N^3
        Ns = [2**k for k in range(6, 12)]
        rows, slope = growth_experiment(Ns, s=1.0, t=1e-4, variant="C3")
        assert 2.9 <= slope <= 3.1

    def test_phi_ratio_converges_to_five(self):
        N = 4096
        val = abs(phi_cubic(N, 2, -1, N - 1)) / N**4
        assert abs(val - 5.0) < 0.05 * 5.0


class TestAppendixTerms:
    def test_separation_at_1024(self):
        spec = CounterexampleSpec(N=1024, s=1.0, t=1e-4)
        rep = eval_appendix_terms(spec)
        tn2 = spec.t * spec.N**2
        for v in (rep.b1, rep.b2, rep.c1, rep.c2, rep.d1_norms):
            assert v < 0.1 * tn2
        assert rep.d0_hsnorm > 10.0 * max(rep.b1, rep.b2, rep.c1, rep.c2, rep.d1_norms)

    def test_b1_tracks_its_bound(self):
        rows, _ = growth_experiment([2**k for k in range(6, 13)], s=1.0, t=1e-4)
        ratios = [r.b1 / (r.t * max(r.N ** (1 - r.s), 1.0)) for r in rows]
        assert max(ratios) / min(ratios) <= 8.0

    def test_d1_tracks_its_bound(self):
        rows, _ = growth_experiment([2**k for k in range(6, 13)], s=1.0, t=1e-4)
        ratios = [r.d1 / (r.t * max(r.N ** (2 - r.s), 1.0)) for r in rows]
        assert max(ratios) / min(ratios) <= 8.0

    def test_restricted_mode_smaller(self):
        spec = CounterexampleSpec(N=256, s=1.0, t=1e-4)
        full = eval_appendix_terms(spec)
        restr = eval_appendix_terms(spec, restricted=True)
        assert restr.d1_norms <= full.d1_norms

    def test_resonant_cubic_report_scaling(self):
        # dropped resonant term's fifth derivative ~ t^2 N^{6-4s}
        Ns = (256, 512, 1024)
        vals = [
            eval_resonant_cubic_fifth(CounterexampleSpec(N=N, s=1.0, t=1e-4)) for N in Ns
        ]
        slope = np.polyfit(np.log(Ns), np.log(vals), 1)[0]
        assert abs(slope - 2.0) < 0.1
        v1 = eval_resonant_cubic_fifth(CounterexampleSpec(N=256, s=1.0, t=1e-4))
        v2 = eval_resonant_cubic_fifth(CounterexampleSpec(N=256, s=1.0, t=2e-4))
        assert v2 / v1 == pytest.approx(4.0, rel=0.05)  # t^2 scaling


class TestNormalFormConsistency:
    def test_direct_equals_boundary_plus_distributed(self):
        spec = CounterexampleSpec(N=8, s=1.0, t=0.005)
        supp = symmetrized_support(counterexample_support(spec))
        d_direct, _ = t2_duhamel_fifth(supp, spec, route="direct")
        d_nf, skipped = t2_duhamel_fifth(supp, spec, route="normal_form")
        assert skipped == 0
        keys = set(d_direct) | set(d_nf)
        scale = max(abs(v) for v in d_direct.values())
        gap = max(abs(d_direct.get(k, 0) - d_nf.get(k, 0)) for k in keys)
        assert gap < 1e-12 * scale


class TestNumericFifthDerivative:
    def test_linear_flow_higher_derivatives_vanish(self):
        grid = GridSpec(16)
        u0 = SpectralField.from_modes(grid, {1: 0.5, -1: 0.5, 3: 0.2, -3: 0.2})
        p = EquationParams.constrained_family(40.0)
        terms = RenormalizedTerms(False, False, False, False)
        a5, rep = numeric_fifth_derivative(u0, 0.01, [0.05, 0.1, 0.15], p, terms)
        assert np.max(np.abs(a5.coeff)) < 1e-10
        assert rep["even_part_max"] < 1e-12

    def test_degenerate_deltas_rejected(self):
        grid = GridSpec(16)
        u0 = SpectralField.from_modes(grid, {1: 0.5, -1: 0.5})
        p = EquationParams.constrained_family(40.0)
        with pytest.raises(ConditioningError):
            numeric_fifth_derivative(u0, 0.01, [0.05, 0.0500001, 0.05000011], p,
                                     RenormalizedTerms())

    def test_cross_validation_small(self):
        # cubic-only flow at N=8, max_mode=32: numeric divided difference
        # matches the closed-form second iterate
        spec = CounterexampleSpec(N=8, s=1.0, t=0.002)
        grid = GridSpec(32)
        supp = symmetrized_support(counterexample_support(spec))
        u0 = SpectralField.zeros(grid)
        for n, a in supp.items():
            u0.coeff[n + grid.max_mode] = a
        flow = RenormalizedTerms(False, True, False, False)
        p = EquationParams.constrained_family(40.0)
        p.d1 = p.d2 = 0.0
        ana = fifth_derivative_direct(supp, spec, flow)
        M = grid.max_mode
        ana_arr = np.zeros(2 * M + 1, dtype=complex)
        for n, v in ana.items():
            if abs(n) <= M:
                ana_arr[n + M] = v
        a5, rep = numeric_fifth_derivative(
            u0, spec.t, [0.01, 0.02, 0.03, 0.04], p, flow,
            ctrl=StepControl(dt=2e-6, record_stride=10**9),
        )
        rel = np.max(np.abs(a5.coeff - ana_arr)) / np.max(np.abs(ana_arr))
        assert rel < 1e-3
