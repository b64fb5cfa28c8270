"""Exact resonance arithmetic and enumeration against defining brute force."""

from fractions import Fraction

import numpy as np
import pytest

from mkdvlab.equations import dispersion_mu
from mkdvlab.errors import ParameterError
from mkdvlab.resonance import (
    enumerate_n3,
    enumerate_n5,
    phi_cubic,
    resonance_g,
    resonance_h,
)


class TestResonanceH:
    def test_pair_sum_zero_kills(self):
        assert resonance_h(1, -1, 5) == 0

    def test_hand_expansion(self):
        assert resonance_h(1, 1, 1) == 3**5 - 3  # 240
        # factored: (5/2) * 2*2*2 * (1+1+1+9) = 240
        assert resonance_h(1, 1, 1) == 5 * (2 * 2 * 2 * 12) // 2

    def test_high_frequency_asymptotics(self):
        # H(2,-1,N-1) ~ 5 N^4 (the quadratic factor contributes 2N^2)
        ratios = [resonance_h(2, -1, N - 1) / N**4 for N in (2**8, 2**10, 2**12)]
        assert abs(ratios[-1] / 5.0 - 1.0) < 0.01
        assert abs(ratios[-1]) > abs(ratios[0]) * 0.9

    def test_factorization_identity_window(self):
        # resonance_h internally asserts direct == factored; sweep |n_i|<=25
        for a in range(-25, 26, 5):
            for b in range(-25, 26, 3):
                for c in range(-25, 26, 7):
                    resonance_h(a, b, c)

    def test_membership_characterization(self):
        # H = 0 iff a pair-sum vanishes, |n_i| <= 12 exhaustively
        for a in range(-12, 13):
            for b in range(-12, 13):
                for c in range(-12, 13):
                    h = resonance_h(a, b, c)
                    pairs_zero = (a + b) * (a + c) * (b + c) == 0
                    assert (h == 0) == pairs_zero, (a, b, c)

    def test_all_zero_corner(self):
        assert resonance_h(0, 0, 0) == 0

    def test_no_wrap_at_large_n(self):
        n = 2**20
        assert resonance_h(n, n, n) == (3 * n) ** 5 - 3 * n**5


class TestResonanceG:
    def test_reduces_to_h_at_d1_zero(self):
        for tup in [(1, 1, 1), (2, -1, 7), (3, 4, -5)]:
            assert resonance_g(*tup, 0) == resonance_h(*tup)

    def test_hand_expansion_with_d1(self):
        # G(1,1,1,d1) = 240 + 24 d1
        for d1 in (0, 1, 7, Fraction(3, 2)):
            assert resonance_g(1, 1, 1, d1) == 240 + 24 * d1

    def test_pair_sum_zero_for_any_d1(self):
        assert resonance_g(4, -4, 9, Fraction(22, 7)) == 0

    def test_mu_identity_exact_rational(self):
        rng = np.random.default_rng(7)
        for _ in range(300):
            a, b, c = (int(x) for x in rng.integers(-60, 61, 3))
            d1 = Fraction(int(rng.integers(-50, 50)), int(rng.integers(1, 20)))
            d2 = Fraction(int(rng.integers(-50, 50)), int(rng.integers(1, 20)))
            n = a + b + c
            lhs = resonance_g(a, b, c, d1)
            rhs = (
                dispersion_mu(n, d1, d2)
                - dispersion_mu(a, d1, d2)
                - dispersion_mu(b, d1, d2)
                - dispersion_mu(c, d1, d2)
            )
            assert lhs == rhs, (a, b, c, d1, d2)


class TestPhiCubic:
    def test_value_at_ones(self):
        assert phi_cubic(3, 1, 1, 1) == -240

    def test_resonant_quadruple(self):
        for N in (8, 64, 4096):
            assert phi_cubic(N, 1, -1, N) == 0

    def test_counterexample_scaling(self):
        # phi(N,2,-1,N-1) ~ -5 N^4
        vals = [phi_cubic(N, 2, -1, N - 1) / N**4 for N in (2**6, 2**12)]
        assert abs(abs(vals[1]) - 5.0) < 0.05 * 5.0

    def test_free_evaluation_allowed(self):
        # n != n1+n2+n3 is a free evaluation
        assert phi_cubic(0, 1, 1, 1) == 3

    def test_negates_g_on_plane(self):
        assert phi_cubic(7, 2, 2, 3, 3, 5) == -resonance_g(2, 2, 3, 3)


class TestEnumerators:
    @staticmethod
    def brute_n3(n, r):
        out = set()
        for a in range(-r, r + 1):
            for b in range(-r, r + 1):
                c = n - a - b
                if abs(c) <= r and (a + b) * (a + c) * (b + c) != 0:
                    out.add((a, b, c))
        return out

    @staticmethod
    def brute_n5(n, r):
        out = set()
        rng = range(-r, r + 1)
        for a in rng:
            for b in rng:
                for c in rng:
                    for d in rng:
                        e = n - a - b - c - d
                        if abs(e) > r:
                            continue
                        t = (a, b, c, d, e)
                        if all(sum(t) - x != 0 for x in t):
                            out.add(t)
        return out

    def test_n3_matches_brute_force_radius12(self):
        for n in (0, 1, 5, -3):
            got = {(t.n1, t.n2, t.n3) for t in enumerate_n3(n, 12)}
            assert got == self.brute_n3(n, 12)

    def test_n3_example_inclusion(self):
        got = {(t.n1, t.n2, t.n3) for t in enumerate_n3(0, 3)}
        assert (1, 2, -3) in got
        assert (1, -1, 0) not in got

    def test_n3_symmetry(self):
        got = {(t.n1, t.n2, t.n3) for t in enumerate_n3(4, 6)}
        for a, b, c in list(got):
            assert (b, a, c) in got and (c, b, a) in got
        neg = {(t.n1, t.n2, t.n3) for t in enumerate_n3(-4, 6)}
        assert neg == {(-a, -b, -c) for a, b, c in got}

    def test_n5_matches_brute_force(self):
        for n, r in ((0, 4), (2, 4), (1, 3)):
            got = {(t.n1, t.n2, t.n3, t.n4, t.n5) for t in enumerate_n5(n, r)}
            assert got == self.brute_n5(n, r)

    def test_n5_four_sum_exclusions(self):
        got = {(t.n1, t.n2, t.n3, t.n4, t.n5) for t in enumerate_n5(0, 2)}
        assert (1, 1, -1, -1, 0) not in got  # subset {1,1,-1,-1} sums to zero

    def test_n5_zero_radius(self):
        assert enumerate_n5(0, 0) == []

    def test_radius_caps(self):
        with pytest.raises(ParameterError):
            enumerate_n3(0, 10**4 + 1)
        with pytest.raises(ParameterError):
            enumerate_n5(0, 31)


class TestCsv:
    def test_triples_csv(self, tmp_path):
        from mkdvlab.resonance import write_triples_csv

        trips = enumerate_n3(0, 2, d1=1)
        path = tmp_path / "n3.csv"
        write_triples_csv(path, 0, trips)
        lines = path.read_text().splitlines()
        assert lines[0] == "n,n1,n2,n3,H,G"
        assert len(lines) == len(trips) + 1
