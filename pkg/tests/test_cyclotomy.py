import cmath
import random

import numpy as np
import pytest

from cyclotome import build_field, build_scheme, invert_generator, union_of_classes
from cyclotome.cyclotomy import IndexSet
from cyclotome.errors import EvenCharacteristic, NotDivisor, ZeroElement


def periods_oracle(scheme):
    """Per-class additive character sums by explicit element enumeration."""
    fld = scheme.field
    out = np.zeros(scheme.N, dtype=complex)
    for i in range(scheme.N):
        for code in scheme.class_codes(i):
            out[i] += cmath.exp(2j * cmath.pi * fld.trace_code(int(code)) / fld.p)
    return out


class TestScheme:
    def test_class_sizes(self, scheme_11_3, scheme_3_5):
        assert scheme_11_3.class_size == 95
        assert scheme_3_5.class_size == 11

    def test_singleton_classes(self):
        F = build_field(3, 3)
        S = build_scheme(F, 26)
        assert S.class_size == 1

    def test_not_divisor(self, field_11_3):
        with pytest.raises(NotDivisor):
            build_scheme(field_11_3, 13)
        with pytest.raises(NotDivisor):
            build_scheme(field_11_3, 1)

    def test_class_of(self, scheme_11_3, field_11_3):
        assert scheme_11_3.class_of(field_11_3.generator()) == 1
        assert scheme_11_3.class_of(field_11_3.one()) == 0
        with pytest.raises(ZeroElement):
            scheme_11_3.class_of(field_11_3.zero())

    def test_class_homomorphism(self, scheme_11_3, field_11_3):
        rng = random.Random(8)
        F, S = field_11_3, scheme_11_3
        for _ in range(100):
            a, b = rng.randrange(1, F.q), rng.randrange(1, F.q)
            assert S.class_of_code(F.mul_codes(a, b)) == \
                (S.class_of_code(a) + S.class_of_code(b)) % S.N

    def test_classes_partition(self, scheme_3_5):
        F = scheme_3_5.field
        seen = np.zeros(F.q, dtype=int)
        for i in range(scheme_3_5.N):
            codes = scheme_3_5.class_codes(i)
            assert len(codes) == scheme_3_5.class_size
            seen[codes] += 1
        assert seen[0] == 0
        assert np.all(seen[1:] == 1)


class TestMinusOneClass:
    def test_reference_classes(self, scheme_11_3, scheme_3_5, field_37_3):
        assert scheme_11_3.minus_one_class() == 7
        assert scheme_3_5.minus_one_class() == 11
        assert build_scheme(field_37_3, 14).minus_one_class() == 0

    def test_even_characteristic(self):
        F = build_field(2, 4)
        S = build_scheme(F, 5)
        with pytest.raises(EvenCharacteristic):
            S.minus_one_class()

    def test_negation_shifts_class(self, scheme_11_3):
        rng = random.Random(12)
        S = scheme_11_3
        neg = S.field.neg_table
        moc = S.minus_one_class()
        for _ in range(50):
            a = rng.randrange(1, S.field.q)
            assert S.class_of_code(int(neg[a])) == (S.class_of_code(a) + moc) % S.N


class TestPeriods:
    def test_sum_is_minus_one(self, scheme_11_3, scheme_3_5):
        for S in (scheme_11_3, scheme_3_5):
            assert abs(S.gauss_periods().sum() + 1) < 1e-9

    def test_magnitude_bound(self, scheme_3_5):
        assert np.all(np.abs(scheme_3_5.gauss_periods()) <= scheme_3_5.class_size + 1e-9)

    def test_against_enumeration_oracle(self, scheme_3_5):
        assert np.allclose(scheme_3_5.gauss_periods(), periods_oracle(scheme_3_5),
                           atol=1e-9)

    def test_generator_inversion_permutes(self, scheme_3_5):
        S2 = build_scheme(invert_generator(scheme_3_5.field), 22)
        eta, eta2 = scheme_3_5.gauss_periods(), S2.gauss_periods()
        for i in range(22):
            assert abs(eta2[i] - eta[(-i) % 22]) < 1e-9


class TestUnions:
    def test_empty(self, scheme_11_3):
        D = union_of_classes(scheme_11_3, [])
        assert D.k == 0 and D.membership.sum() == 0

    def test_full(self, scheme_11_3):
        D = union_of_classes(scheme_11_3, range(14))
        assert D.k == 1330
        assert not D.membership[0] and D.membership[1:].all()

    def test_example_size(self, scheme_11_3):
        D = union_of_classes(scheme_11_3, range(7))
        assert D.k == 665 and int(D.membership.sum()) == 665

    def test_index_set_validation(self):
        with pytest.raises(ValueError):
            IndexSet.coerce([0, 0, 1], 14)
        with pytest.raises(ValueError):
            IndexSet.coerce([14], 14)
