import math

import numpy as np
import pytest

from cyclotome import charsums as cs
from cyclotome import numtheory as nt
from cyclotome import build_field, build_scheme, union_of_classes
from cyclotome.errors import (
    BadResidue,
    BudgetExceeded,
    CaseMismatch,
    ClosedFormMismatch,
    IdentityViolation,
    NoSolution,
    SchemeMismatch,
)

SQRT11 = math.sqrt(11)
SQRT3 = math.sqrt(3)

# frozen on first run; the imaginary sign at j = 7 is a regression constant
GAUSS_11_3_ODD = complex(0.0, -11 * SQRT11)


class TestGaussSums:
    def test_trivial_character(self, scheme_11_3):
        rec = cs.gauss_sum(scheme_11_3, 0)
        assert abs(rec.value + 1) < 1e-9

    def test_modulus_all_j(self, scheme_3_5):
        G = cs.gauss_sum_table(scheme_3_5)
        for j in range(1, 22):
            assert abs(abs(G[j]) ** 2 - 243) < 1e-6 * math.sqrt(243)

    def test_quadratic_exponent_frozen_sign(self, scheme_11_3):
        rec = cs.gauss_sum(scheme_11_3, 7)
        assert abs(rec.value.real) < 1e-6
        assert abs(abs(rec.value.imag) - 11 * SQRT11) < 1e-6
        assert abs(rec.value - GAUSS_11_3_ODD) < 1e-6

    def test_against_direct_summation(self, scheme_11_3, scheme_3_5):
        for S in (scheme_11_3, scheme_3_5):
            G = cs.gauss_sum_table(S)
            tol = 1e-6 * math.sqrt(S.field.q)
            for j in range(S.N):
                assert abs(G[j] - cs.gauss_sum_direct(S, j)) < tol

    def test_classical_sign_at_large_prime(self):
        # quadratic Gauss sum of F_p is +sqrt(p) for p = 1 mod 4: the classical
        # positive-branch evaluation, reproduced here at a six-digit prime
        S = build_scheme(build_field(1299709, 1), 2)
        g = cs.gauss_sum(S, 1).value
        assert abs(g - math.sqrt(1299709)) < 1e-6 * math.sqrt(1299709)
        assert abs(g.imag) < 1e-6

    def test_odd_exponents_all_equal_7mod8(self, scheme_11_3):
        # Galois stability: the closed form has no j-dependence for odd j
        G = cs.gauss_sum_table(scheme_11_3)
        odd = [G[j] for j in range(1, 14, 2)]
        assert max(abs(v - odd[0]) for v in odd) < 1e-9


class TestIdentities:
    def test_reference_schemes(self, scheme_11_3, scheme_3_5):
        for S in (scheme_11_3, scheme_3_5):
            rep = cs.check_basic_identities(S)
            assert rep.max_deviation < 1e-6 * math.sqrt(S.field.q)

    def test_quadratic_scheme_f7(self):
        S = build_scheme(build_field(7, 1), 2)
        rep = cs.check_basic_identities(S)
        assert rep.max_deviation < 1e-6 * math.sqrt(7)
        g = cs.gauss_sum(S, 1).value
        assert abs(g * g.conjugate() - 7) < 1e-9

    def test_violation_detected(self):
        # corrupt the period cache: the suite must flag the broken scheme
        S = build_scheme(build_field(7, 1), 2)
        S.gauss_periods()
        S._periods = S._periods + 0.5
        with pytest.raises(IdentityViolation):
            cs.check_basic_identities(S)


class TestSolveBC:
    def test_case_b_parameters(self):
        bc = cs.solve_bc(11, 3, 1, 5)
        assert bc.b == 1
        assert set(bc.c_candidates) == {1, -1}
        # 9 b = -2 = 9 (mod 11) forces b = 1, and 1 + 11 = 12 = 4*3
        assert bc.b * pow(3, 2, 11) % 11 == (-2) % 11
        assert bc.b**2 + 11 * 1 == 4 * 3

    def test_case_a_parameters(self):
        bc = cs.solve_bc(7, 11, 1, 3)
        assert bc.b == -4 and set(bc.c_candidates) == {2, -2}
        assert (-4) ** 2 + 7 * 4 == 4 * 11

    def test_no_solution(self):
        # 4 p^h = 8 < p1 = 11 leaves no room for c != 0
        with pytest.raises(NoSolution):
            cs.solve_bc(11, 2, 1, 3)

    def test_bad_residue(self):
        with pytest.raises(BadResidue):
            cs.solve_bc(13, 3, 1, 5)


class TestClosedForms:
    def test_case_a_odd_prediction(self):
        params = nt.case_a_params(7, 1, 11)
        pred = cs.closed_form_index2(params, 0)
        (v,) = pred["odd"]
        assert abs(v - (-11) * 1j * SQRT11) < 1e-12
        # item (3) at t = m agrees with item (1), as the proof notes
        (vq,) = cs.closed_form_index2(params, 1)["quadratic"]
        assert abs(vq - v) < 1e-12

    def test_case_b_even_prediction(self):
        params = nt.case_b_params(11, 3)
        cands = cs.closed_form_index2(params, 0)["even"]
        expected = {9 * (1 + c * 1j * SQRT11) / 2 for c in (1, -1)}
        assert all(min(abs(c - e) for e in expected) < 1e-12 for c in cands)

    def test_case_b_quadratic_prediction(self):
        params = nt.case_b_params(11, 3)
        (vq,) = cs.closed_form_index2(params, 1)["quadratic"]
        assert abs(vq - 9j * SQRT3) < 1e-12

    def test_compare_case_a(self, scheme_11_3):
        rep = cs.compare_with_closed_form(scheme_11_3, nt.case_a_params(7, 1, 11))
        assert rep.global_sign == 1  # frozen regression constant
        assert rep.quadratic_sign == 1
        assert rep.max_abs_deviation < rep.tol
        odd = [r for r in rep.records if r.j % 2 == 1]
        assert len(odd) == 7 and all(r.matched for r in odd)

    def test_compare_case_b(self, scheme_3_5):
        rep = cs.compare_with_closed_form(scheme_3_5, nt.case_b_params(11, 3))
        assert rep.matched_c in (1, -1)
        assert rep.quadratic_sign == 1  # g(chi^11) = 9i*sqrt(3) on the nose
        assert rep.max_abs_deviation < rep.tol
        even = [r for r in rep.records if r.j % 2 == 0 and r.j != 0]
        assert len(even) == 10 and all(r.matched for r in even)

    def test_compare_pds_branch(self, field_37_3):
        scheme = build_scheme(field_37_3, 14)
        rep = cs.compare_with_closed_form(scheme, nt.case_a_params(7, 1, 37))
        # p = 1 mod 4: order-14 sums are real and the quadratic sum is +sqrt(q)
        coprime = [r for r in rep.records if r.j in (1, 3, 5, 9, 11, 13)]
        assert all(r.matched and abs(r.value.imag) < 1e-6 for r in coprime)
        quad = next(r for r in rep.records if r.j == 7)
        assert abs(quad.value - math.sqrt(50653)) < 1e-6

    def test_compare_large_7mod8(self):
        # N = 46 over F_3^11: all 46 exponents match, same frozen signs
        S = build_scheme(build_field(3, 11), 46)
        bc = cs.solve_bc(23, 3, 3, 11)
        assert bc.b == -4 and set(bc.c_candidates) == {2, -2}
        rep = cs.compare_with_closed_form(S, nt.case_a_params(23, 1, 3))
        assert rep.global_sign == 1 and rep.quadratic_sign == 1
        assert sum(1 for r in rep.records if r.matched) == 46

    def test_scheme_params_mismatch(self, scheme_11_3):
        with pytest.raises(CaseMismatch):
            cs.compare_with_closed_form(scheme_11_3, nt.case_b_params(11, 3))

    def test_mismatch_on_corrupted_periods(self):
        S = build_scheme(build_field(11, 3), 14)
        S.gauss_periods()
        S._periods = S._periods[::-1].copy()
        with pytest.raises(ClosedFormMismatch):
            cs.compare_with_closed_form(S, nt.case_a_params(7, 1, 11))


class TestDavenportHasse:
    def test_p3_s3(self):
        rep = cs.davenport_hasse_check(3, 1, 3, 2)
        assert rep.max_deviation < rep.tol
        # (-1)^(s-1) g(quad of F_3)^s = (i sqrt 3)^3 = -3 sqrt(3) i
        S = build_scheme(build_field(3, 3), 2)
        g = cs.gauss_sum(S, 1).value
        assert abs(g - (1j * SQRT3) ** 3) < 1e-9

    def test_p7_s3(self):
        rep = cs.davenport_hasse_check(7, 1, 3, 2)
        assert rep.max_deviation < rep.tol

    def test_s1_degenerate(self):
        rep = cs.davenport_hasse_check(3, 1, 1, 2)
        assert rep.max_deviation < 1e-12

    def test_larger_base(self):
        rep = cs.davenport_hasse_check(3, 2, 3, 8)
        assert rep.max_deviation < rep.tol

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            cs.davenport_hasse_check(3, 1, 30, 2)


class TestRestrictedSums:
    def test_empty_and_full(self, scheme_11_3):
        empty = union_of_classes(scheme_11_3, [])
        assert np.allclose(cs.restricted_sums(scheme_11_3, empty), 0)
        full = union_of_classes(scheme_11_3, range(14))
        assert np.allclose(cs.restricted_sums(scheme_11_3, full), -1, atol=1e-9)

    def test_example_shape(self, scheme_11_3):
        D = union_of_classes(scheme_11_3, range(7))
        sums = cs.restricted_sums(scheme_11_3, D)
        sq = math.sqrt(1331)
        for s in sums:
            assert abs(s.real + 0.5) < 1e-6
            assert abs(abs(s.imag) - sq / 2) < 1e-6

    def test_total_is_minus_size(self, scheme_3_5):
        D = union_of_classes(scheme_3_5, [0, 3, 17])
        assert abs(cs.restricted_sums(scheme_3_5, D).sum() + 3) < 1e-9

    def test_scheme_mismatch(self, scheme_11_3, scheme_3_5):
        D = union_of_classes(scheme_3_5, [0])
        with pytest.raises(SchemeMismatch):
            cs.restricted_sums(scheme_11_3, D)
