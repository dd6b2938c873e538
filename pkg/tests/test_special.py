import itertools
import math
from fractions import Fraction

import pytest

from rmlab import (
    FeasibilityError,
    FeasibilityLimits,
    build_htilde,
    canonical_fit,
    htilde_poly,
    htilde_uniformity_deviation,
    htilde_value_distribution,
    lucas_digit_words,
    verify_degree_by_derivatives,
)
from rmlab.words import point_to_index


class TestLucasDigits:
    def test_all_ones_p2(self):
        ws, wps = lucas_digit_words(3, 1, 1, 2)
        idx = point_to_index(2, (1, 1, 1))
        # W = 3 -> digits 1, 1; S_1 = 3 mod 2, S_2 = C(3,2) mod 2
        assert (ws[0].values[idx], ws[1].values[idx]) == (1, 1)
        assert (wps[0].values[idx], wps[1].values[idx]) == (3 % 2, math.comb(3, 2) % 2)

    def test_zeros(self):
        ws, wps = lucas_digit_words(3, 2, 1, 2)
        assert all(w.values[0] == 0 for w in ws + wps)

    def test_all_ones_p3(self):
        ws, wps = lucas_digit_words(4, 1, 1, 3)
        idx = point_to_index(3, (1, 1, 1, 1))
        # W = 4 = (1,1) base 3; S_1 = 4 mod 3, S_3 = C(4,3) mod 3
        assert (ws[0].values[idx], ws[1].values[idx]) == (1, 1)
        assert (wps[0].values[idx], wps[1].values[idx]) == (1, 1)

    def test_cube_identity_binomial_oracle(self):
        # on the cube, digit i of the weight equals C(weight, p^i) mod p
        p, r, A, k = 2, 3, 2, 1
        ws, wps = lucas_digit_words(r, A, k, p)
        for bits in itertools.product((0, 1), repeat=r * A):
            idx = point_to_index(p, bits)
            weight = sum(
                int(all(bits[i * A + j] for j in range(A))) for i in range(r)
            )
            for i in range(k + 1):
                expect = math.comb(weight, p**i) % p
                assert ws[i].values[idx] == expect
                assert wps[i].values[idx] == expect

    def test_few_summands_allowed(self):
        # r < p^k: top digit is never reached on the cube, not an error
        ws, wps = lucas_digit_words(2, 1, 2, 2)
        for bits in itertools.product((0, 1), repeat=2):
            idx = point_to_index(2, bits)
            assert ws[2].values[idx] == wps[2].values[idx] == 0

    def test_feasibility(self):
        with pytest.raises(FeasibilityError):
            lucas_digit_words(40, 1, 1, 2, FeasibilityLimits(table_cap=1000))


class TestHtilde:
    def test_k0_table(self):
        w = build_htilde(2, 1, 0, 2)
        assert [str(w.torus_value(i)) for i in range(4)] == ["0", "1/2", "1/2", "0"]

    def test_k1_table(self):
        w = build_htilde(1, 1, 1, 2)
        assert [str(w.torus_value(i)) for i in range(2)] == ["0", "1/4"]

    def test_zero_point(self):
        assert build_htilde(3, 2, 1, 3).values[0] == 0

    def test_poly_and_table_agree(self):
        for (r, A, k, p) in [(2, 1, 0, 2), (1, 1, 1, 2), (2, 2, 1, 2), (2, 2, 1, 3)]:
            poly = htilde_poly(r, A, k, p)
            assert poly.to_word().values == build_htilde(r, A, k, p).values

    def test_degree_and_depth(self):
        # degree A + (p-1)k and depth k, certified by derivatives and by fit
        poly = htilde_poly(1, 2, 1, 3)
        assert poly.degree() == 2 + 2 * 1 and poly.depth() == 1
        word = poly.to_word()
        assert verify_degree_by_derivatives(word, 4).ok
        assert not verify_degree_by_derivatives(word, 3).ok
        assert canonical_fit(word, 1) == poly

    def test_distribution_matches_enumeration(self):
        for (r, A, k, p) in [(2, 2, 1, 2), (2, 1, 1, 3), (3, 2, 0, 3)]:
            table = build_htilde(r, A, k, p)
            counts = [0] * p ** (k + 1)
            for v in table.values:
                counts[v] += 1
            assert counts == htilde_value_distribution(r, A, k, p)

    def test_deviation_sequence_p2(self):
        devs = [htilde_uniformity_deviation(r, 1, 1, 2) for r in (2, 4, 8, 16)]
        assert devs == [
            Fraction(1),
            Fraction(1, 2),
            Fraction(1, 8),
            Fraction(1, 128),
        ]
