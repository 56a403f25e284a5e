import random

import numpy as np
import pytest

from cyclotome import (
    NEITHER,
    PALEY_PDS,
    SKEW_HDS,
    build_field,
    build_scheme,
    check_skew,
    construct_case_A,
    construct_case_B,
    difference_histogram,
    predicted_sign_pattern,
    sign_pattern_check,
    union_of_classes,
    verify_by_characters,
    verify_paley_pds_brute,
    verify_skew_hds_brute,
)
from cyclotome import numtheory as nt
from cyclotome.errors import CaseMismatch, PatternMismatch


def histogram_oracle(D):
    """Difference counts by explicit double loop over element codes."""
    fld = D.scheme.field
    out = [0] * fld.q
    codes = D.codes().tolist()
    for a in codes:
        for b in codes:
            if a != b:
                out[fld.sub_codes(a, b)] += 1
    return out


def perturbed_transversal(seed):
    """Break a transversal mod 14: replace one member with the antipode of
    another, so D picks up a class together with its negative."""
    rng = random.Random(seed)
    members = list(range(7))
    i, j = rng.sample(range(7), 2)
    members[i] = members[j] + 7
    return sorted(members)


class TestHistogram:
    def test_against_oracle_prime_field(self):
        S = build_scheme(build_field(13, 1), 2)
        D = union_of_classes(S, [0])
        assert difference_histogram(D).tolist() == histogram_oracle(D)

    def test_against_oracle_extension_field(self):
        S = build_scheme(build_field(3, 3), 13)
        rng = random.Random(0)
        for _ in range(3):
            I = rng.sample(range(13), 5)
            D = union_of_classes(S, I)
            assert difference_histogram(D).tolist() == histogram_oracle(D)

    def test_conservation(self, scheme_11_3):
        D = union_of_classes(scheme_11_3, range(7))
        hist = difference_histogram(D)
        assert hist.sum() == D.k * (D.k - 1)

    def test_digit_fallback_matches_split(self, monkeypatch):
        # force the digit-loop kernel and compare against the table route
        import cyclotome.verify as v

        S = build_scheme(build_field(3, 3), 13)
        D = union_of_classes(S, [0, 2, 5, 7, 11])
        fast = difference_histogram(D)
        monkeypatch.setattr(v, "_SPLIT_TABLE_LIMIT", 0)
        slow = difference_histogram(D)
        assert np.array_equal(fast, slow)
        assert slow.tolist() == histogram_oracle(D)

    def test_thread_count_invariance(self, scheme_11_3):
        D = union_of_classes(scheme_11_3, range(7))
        h1 = difference_histogram(D, threads=1)
        h2 = difference_histogram(D, threads=2)
        assert np.array_equal(h1, h2)


class TestCheckSkew:
    def test_example(self, scheme_11_3):
        assert check_skew(union_of_classes(scheme_11_3, range(7)))

    def test_empty(self, scheme_11_3):
        assert not check_skew(union_of_classes(scheme_11_3, []))

    def test_antipodal_pair(self, scheme_11_3):
        assert not check_skew(union_of_classes(scheme_11_3, [0, 1, 2, 3, 4, 5, 7]))


class TestBruteForce:
    def test_consecutive_transversal_1331(self, scheme_11_3):
        D = construct_case_A(nt.case_a_params(7, 1, 11), 1, range(7),
                             scheme=scheme_11_3)
        rep = verify_skew_hds_brute(D)
        assert rep.verdict == SKEW_HDS
        assert (rep.v, rep.k, rep.lam) == (1331, 665, 332)
        assert rep.histogram_summary == (332, 332)

    def test_fixed_index_set_243(self):
        rep = verify_skew_hds_brute(construct_case_B(11, 3))
        assert rep.verdict == SKEW_HDS
        assert (rep.v, rep.k, rep.lam) == (243, 121, 60)

    def test_classical_paley_set(self, field_11_3):
        squares = union_of_classes(build_scheme(field_11_3, 2), [0])
        rep = verify_skew_hds_brute(squares)
        assert rep.verdict == SKEW_HDS
        assert (rep.v, rep.k, rep.lam) == (1331, 665, 332)

    def test_paley_pds_f13(self):
        D = union_of_classes(build_scheme(build_field(13, 1), 2), [0])
        rep = verify_paley_pds_brute(D)
        assert rep.verdict == PALEY_PDS
        assert (rep.v, rep.k, rep.lam, rep.mu) == (13, 6, 2, 3)

    def test_pds_precondition(self, scheme_11_3):
        D = union_of_classes(scheme_11_3, range(7))
        with pytest.raises(CaseMismatch):
            verify_paley_pds_brute(D)

    def test_perturbed_is_refuted(self, scheme_11_3):
        D = union_of_classes(scheme_11_3, perturbed_transversal(1))
        assert verify_skew_hds_brute(D).verdict == NEITHER


class TestCharacters:
    def test_consecutive_transversal_1331(self, scheme_11_3):
        D = union_of_classes(scheme_11_3, range(7))
        rep = verify_by_characters(D)
        assert rep.verdict == SKEW_HDS
        assert rep.max_abs_deviation < 1e-6 * 1331**0.5
        assert len(rep.sign_pattern) == 14

    def test_fixed_index_set_243(self):
        rep = verify_by_characters(construct_case_B(11, 3))
        assert rep.verdict == SKEW_HDS

    def test_pds_branch(self, field_37_3):
        scheme = build_scheme(field_37_3, 14)
        D = construct_case_A(nt.case_a_params(7, 1, 37), 1, range(7), scheme=scheme)
        rep = verify_by_characters(D)
        assert rep.verdict == PALEY_PDS
        assert rep.max_abs_deviation < 1e-6 * 50653**0.5

    def test_empty_is_neither(self, scheme_11_3):
        assert verify_by_characters(union_of_classes(scheme_11_3, [])).verdict == NEITHER

    def test_agrees_with_brute_on_perturbations(self, scheme_11_3):
        for seed in range(5):
            D = union_of_classes(scheme_11_3, perturbed_transversal(seed))
            assert verify_by_characters(D).verdict == NEITHER
            assert verify_skew_hds_brute(D).verdict == NEITHER


class TestSignPattern:
    def test_consecutive_transversal_1331(self, scheme_11_3):
        D = construct_case_A(nt.case_a_params(7, 1, 11), 1, range(7),
                             scheme=scheme_11_3)
        rep = sign_pattern_check(D)
        assert rep.global_constant == 1  # frozen on first run
        assert rep.actual == [g * p for g, p in
                              zip([rep.global_constant] * 14, rep.predicted)]

    def test_prediction_parity_m2(self):
        # pure parity algebra at (p1, m) = (7, 2): no field is built
        I = list(range(49))
        pattern = predicted_sign_pattern(I, 7, 2)
        assert len(pattern) == 98
        for a in range(98):
            i_a = next(i for i in I if (a + i) % 49 == 0)
            assert pattern[a] == (-1) ** (2 + (a + i_a) // 49)

    def test_uniqueness_of_i_a(self, scheme_11_3):
        D = construct_case_A(nt.case_a_params(7, 1, 11), 1,
                             [0, 1, 3, 4, 5, 6, 9], scheme=scheme_11_3)
        rep = sign_pattern_check(D)
        assert len(rep.predicted) == 14

    def test_non_transversal_rejected(self, scheme_11_3):
        with pytest.raises(PatternMismatch):
            predicted_sign_pattern([0, 1, 2, 3, 4, 5, 12], 7, 1)

    def test_wrong_provenance(self, scheme_11_3):
        D = union_of_classes(scheme_11_3, range(7))
        with pytest.raises(CaseMismatch):
            sign_pattern_check(D)


class TestOracleEquivalence:
    def test_small_candidates_agree(self, scheme_11_3, scheme_3_5, field_37_3):
        candidates = [
            union_of_classes(scheme_11_3, range(7)),
            union_of_classes(scheme_11_3, [0, 1, 3, 4, 5, 6, 9]),
            construct_case_B(11, 3),
            union_of_classes(scheme_3_5, [0, 2, 4, 6, 8, 10, 12, 14, 16, 18, 20]),
        ]
        scheme37 = build_scheme(field_37_3, 14)
        candidates.append(union_of_classes(scheme37, range(7)))
        for D in candidates:
            q = D.scheme.field.q
            brute = (verify_skew_hds_brute(D) if q % 4 == 3
                     else verify_paley_pds_brute(D))
            chars = verify_by_characters(D)
            assert brute.verdict == chars.verdict, D
