"""Cyclotomic classes of order N and their Gauss periods.

Class membership is read off discrete logs (x is in class dlog(x) mod N);
no explicit element lists are stored. The periods are the additive-character
sums over single classes and drive every character-based verification.
"""

from dataclasses import dataclass, field as dataclass_field

import numpy as np

from .errors import EvenCharacteristic, NotDivisor, ZeroElement
from .finite_field import FieldElement, FiniteField


@dataclass(frozen=True)
class IndexSet:
    """A duplicate-free sorted set of residues mod N."""

    members: tuple

    @classmethod
    def coerce(cls, items, N: int) -> "IndexSet":
        members = sorted(int(i) for i in items)
        if len(set(members)) != len(members):
            raise ValueError("index set contains duplicates")
        if members and not (0 <= members[0] and members[-1] < N):
            raise ValueError(f"index set members must lie in [0, {N})")
        return cls(tuple(members))

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    def __contains__(self, i):
        return i in self.members


class CyclotomicScheme:
    """A built field together with the order-N class structure."""

    def __init__(self, field: FiniteField, N: int):
        if N <= 1:
            raise NotDivisor(f"order N = {N} must exceed 1")
        if (field.q - 1) % N != 0:
            raise NotDivisor(f"N = {N} does not divide q - 1 = {field.q - 1}")
        self.field = field
        self.N = N
        self.class_size = (field.q - 1) // N
        self._periods = None

    def class_of_code(self, code: int) -> int:
        if code == 0:
            raise ZeroElement("0 belongs to no cyclotomic class")
        return self.field.dlog_code(code) % self.N

    def class_of(self, x: FieldElement) -> int:
        return self.class_of_code(x.code)

    def minus_one_class(self) -> int:
        """Class index of -1, i.e. ((q-1)/2) mod N."""
        if self.field.p == 2:
            raise EvenCharacteristic("-1 = 1 in characteristic 2")
        return ((self.field.q - 1) // 2) % self.N

    def class_codes(self, i: int) -> np.ndarray:
        """Element codes of class i, in ascending dlog order."""
        return self.field.exp_table[i % self.N :: self.N]

    def gauss_periods(self) -> np.ndarray:
        """The N per-class additive character sums; cached after first call.

        Accumulates exact integer counts of trace values per class, then takes
        one complex product, so the output is reproducible bit for bit.
        """
        if self._periods is None:
            fld = self.field
            traces = fld.traces_of_codes(fld.exp_table)
            classes = np.arange(fld.q - 1, dtype=np.int64) % self.N
            counts = np.zeros((self.N, fld.p), dtype=np.int64)
            np.add.at(counts, (classes, traces), 1)
            roots = np.exp(2j * np.pi * np.arange(fld.p) / fld.p)
            self._periods = counts @ roots
        return self._periods

    def __repr__(self):
        return f"CyclotomicScheme(q={self.field.q}, N={self.N})"


def build_scheme(field: FiniteField, N: int) -> CyclotomicScheme:
    return CyclotomicScheme(field, N)


@dataclass
class CandidateSet:
    """A union of cyclotomic classes, with membership bitmask and provenance."""

    scheme: CyclotomicScheme
    index_set: IndexSet
    membership: np.ndarray
    provenance: dict = dataclass_field(default_factory=lambda: {"case": "user"})

    @property
    def k(self) -> int:
        return len(self.index_set) * self.scheme.class_size

    def codes(self) -> np.ndarray:
        return np.flatnonzero(self.membership)

    def minus_membership(self) -> np.ndarray:
        """Bitmask of -D."""
        out = np.zeros_like(self.membership)
        neg = self.scheme.field.neg_table
        out[neg[self.codes()]] = True
        return out

    def is_skew_disjoint(self) -> bool:
        """True iff D and -D share no element."""
        return not np.any(self.membership & self.minus_membership())

    def is_symmetric(self) -> bool:
        """True iff -D = D."""
        return bool(np.array_equal(self.membership, self.minus_membership()))

    def __repr__(self):
        return (
            f"CandidateSet(q={self.scheme.field.q}, N={self.scheme.N}, "
            f"|I|={len(self.index_set)}, case={self.provenance.get('case')})"
        )


def union_of_classes(scheme: CyclotomicScheme, I) -> CandidateSet:
    """The subset of F_q^* formed by the classes indexed by I."""
    index_set = I if isinstance(I, IndexSet) else IndexSet.coerce(I, scheme.N)
    membership = np.zeros(scheme.field.q, dtype=bool)
    if len(index_set) > 0:
        ks = np.arange(scheme.field.q - 1, dtype=np.int64)
        picked = np.isin(ks % scheme.N, np.array(index_set.members, dtype=np.int64))
        membership[scheme.field.exp_table[picked]] = True
    return CandidateSet(scheme, index_set, membership)
