import itertools

import numpy as np
import pytest
from conftest import CROSS_2x4, HAMMING_7_4, random_dmin5_matrices

from symgt.superimposed_codes import (
    PRIMITIVE_POLYNOMIALS,
    FieldElement,
    GF2m,
    bch_parity_check,
    find_dependent_columns,
    gf_mul,
    load_matrix,
    min_distance_at_least_5,
    save_matrix,
    subset_sums,
    verify_disjunct,
    verify_separable,
)
from symgt.ternary_algebra import format_word, is_included, word_sum


def _replay(code, witness):
    """Check a false verdict's counterexample through the ternary operations."""
    xs, ys = witness.counterexample
    sx = word_sum([code[:, j] for j in xs])
    sy = word_sum([code[:, j] for j in ys])
    if witness.property == "separable":
        return set(xs) != set(ys) and format_word(sx) == format_word(sy)
    return is_included(sx, sy) and not set(xs) <= set(ys)


class TestField:
    @pytest.mark.parametrize("k", [3, 4])
    def test_axioms_exhaustive(self, k):
        F = GF2m(k)
        els = range(F.order)
        for a, b in itertools.product(els, els):
            assert F.mul(a, b) == F.mul(b, a)
        for a, b, c in itertools.product(els, els, els):
            assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
            assert F.mul(a, b ^ c) == F.mul(a, b) ^ F.mul(a, c)

    @pytest.mark.parametrize("k", sorted(PRIMITIVE_POLYNOMIALS))
    def test_generator(self, k):
        F = GF2m(k)
        powers = F.powers()
        assert sorted(powers) == list(range(1, F.order))
        assert F.mul(powers[-1], 2) == 1

    def test_inverse_exists(self):
        F = GF2m(4)
        for a in range(1, 16):
            assert any(F.mul(a, b) == 1 for b in range(1, 16))

    def test_gf16_example(self):
        F = GF2m(4)
        a = FieldElement(0b0010, F)
        assert gf_mul(a, FieldElement(0b1000, F)).value == 0b0011
        assert gf_mul(a, FieldElement(1, F)) == a
        assert gf_mul(a, FieldElement(0, F)).value == 0
        assert (a + a).value == 0

    def test_field_mismatch(self):
        with pytest.raises(ValueError):
            gf_mul(FieldElement(1, GF2m(3)), FieldElement(1, GF2m(4)))
        with pytest.raises(ValueError):
            GF2m(11)
        with pytest.raises(ValueError):
            GF2m(4, 0b111)
        with pytest.raises(ValueError):
            GF2m(4).mul(16, 1)


class TestVerify:
    def test_identity(self):
        I = np.eye(3, dtype=np.uint8)
        assert verify_disjunct(I, 2)
        assert verify_separable(I, 2)
        sums = subset_sums(I, [(0,), (1,), (2,), (0, 1), (0, 2), (1, 2)])
        assert [format_word(r) for r in sums] == ["100", "010", "001", "220", "202", "022"]

    def test_cross_code(self):
        sep = verify_separable(CROSS_2x4, 2)
        assert not sep
        assert sep.counterexample == ((0, 1), (2, 3))
        d = sep.to_dict(CROSS_2x4)
        assert d["counterexample"]["sum_x"] == d["counterexample"]["sum_y"] == "22"
        dis = verify_disjunct(CROSS_2x4, 2)
        assert not dis
        assert dis.counterexample == ((0,), (2, 3))
        assert _replay(CROSS_2x4, sep) and _replay(CROSS_2x4, dis)

    def test_duplicate_column(self):
        code = np.array([[1, 0, 1], [0, 1, 0]], dtype=np.uint8)
        w = verify_disjunct(code, 1)
        assert not w and w.counterexample == ((0,), (2,))
        assert not verify_separable(code, 1)

    def test_guards(self):
        big = np.eye(21, dtype=np.uint8)
        with pytest.raises(ValueError):
            verify_disjunct(big, 2)
        assert verify_disjunct(big, 1, force=True)
        with pytest.raises(ValueError):
            verify_separable(np.eye(41, dtype=np.uint8), 2)
        with pytest.raises(ValueError):
            verify_separable(np.eye(3, dtype=np.uint8), 0)

    def test_witness_replay_corpus(self, corpus):
        for name, code in corpus.items():
            for m in (1, 2):
                for w in (verify_disjunct(code, m, force=True), verify_separable(code, m, force=True)):
                    if not w:
                        assert _replay(code, w), (name, m, w)

    def test_separable_downward_closed(self, corpus):
        for code in corpus.values():
            if verify_separable(code, 2):
                assert verify_separable(code, 1)

    def test_disjunct_implies_separable(self, corpus):
        for code in corpus.values():
            for m in (1, 2):
                if verify_disjunct(code, m, force=True):
                    assert verify_separable(code, m, force=True)

    def test_disjunct_brute_force(self, corpus):
        """Vectorised check against a literal reading of the definition."""
        for name, code in corpus.items():
            if code.shape[1] > 10:
                continue
            subs = [c for s in (1, 2) for c in itertools.combinations(range(code.shape[1]), s)]
            sums = {S: word_sum([code[:, j] for j in S]) for S in subs}
            literal = all(not is_included(sums[S], sums[T]) or set(S) <= set(T) for S in subs for T in subs)
            assert bool(verify_disjunct(code, 2)) == literal, name


class TestDistance:
    def test_hamming(self):
        assert not min_distance_at_least_5(HAMMING_7_4)
        dep = find_dependent_columns(HAMMING_7_4)
        assert dep == (0, 1, 2)
        assert not np.bitwise_xor.reduce(HAMMING_7_4[:, list(dep)], axis=1).any()

    def test_identity(self):
        assert min_distance_at_least_5(np.eye(3, dtype=np.uint8))

    def test_zero_and_repeat(self):
        assert find_dependent_columns(np.array([[1, 0], [0, 0]])) == (1,)
        assert find_dependent_columns(np.array([[1, 1], [0, 0]])) == (0, 1)

    def test_four_columns(self):
        # e1, e2, e3, e1+e2+e3 - only the full quadruple is dependent
        H = np.array([[1, 0, 0, 1], [0, 1, 0, 1], [0, 0, 1, 1]], dtype=np.uint8)
        assert find_dependent_columns(H) == (0, 1, 2, 3)

    def test_against_brute_force(self):
        rng = np.random.default_rng(5)
        for _ in range(40):
            H = (rng.random((6, 9)) < 0.5).astype(np.uint8)
            brute = any(
                not np.bitwise_xor.reduce(H[:, list(c)], axis=1).any()
                for s in range(1, 5)
                for c in itertools.combinations(range(9), s)
            )
            assert min_distance_at_least_5(H) == (not brute)


class TestConstruction:
    @pytest.mark.parametrize("k", range(2, 11))
    def test_shape_and_distance(self, k):
        H = bch_parity_check(k)
        assert H.shape == (2 * k, 2**k - 1)
        assert min_distance_at_least_5(H)

    def test_golden_k3(self):
        assert save_matrix(bch_parity_check(3)) == (
            "1001011\n0101110\n0010111\n1110100\n0100111\n0011101\n"
        )

    def test_first_columns(self):
        H = bch_parity_check(4)
        # alpha^0 = 1 and alpha^0 = 1 in both halves
        assert H[:, 0].tolist() == [1, 0, 0, 0, 1, 0, 0, 0]
        # alpha^1 = 0010, alpha^3 = 1000 (LSB first)
        assert H[:, 1].tolist() == [0, 1, 0, 0, 0, 0, 0, 1]

    @pytest.mark.parametrize("k", [3, 4, 5])
    def test_separable(self, k):
        assert verify_separable(bch_parity_check(k), 2)

    def test_prop4_random_corpus(self):
        mats = random_dmin5_matrices()
        assert len(mats) == 20
        for H in mats:
            assert verify_separable(H, 2)

    @pytest.mark.parametrize("k", [1, 11])
    def test_range(self, k):
        with pytest.raises(ValueError):
            bch_parity_check(k)


class TestTextFormat:
    def test_examples(self):
        assert load_matrix("10\n01\n").tolist() == [[1, 0], [0, 1]]
        assert load_matrix("1\n0\n1\n").shape == (3, 1)

    @pytest.mark.parametrize("text", ["10\n0\n", "", "12\n", "ab\n"])
    def test_rejects(self, text):
        with pytest.raises(ValueError):
            load_matrix(text)

    def test_roundtrip(self):
        H = bch_parity_check(5)
        assert np.array_equal(load_matrix(save_matrix(H)), H)
        assert save_matrix(load_matrix("  10\n\n01  \n")) == "10\n01\n"
