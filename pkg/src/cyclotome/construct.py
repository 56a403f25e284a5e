"""The two class-union constructions.

Case A (p1 = 7 mod 8): any transversal index set I mod p1^m over the order-N
classes of F_{p^(f*s)}, s odd, gives a skew Hadamard difference set when
p = 3 mod 4 and a Paley-type PDS when p = 1 mod 4.

Case B (p1 = 3 mod 8, 1 + p1 = 4p^h): the fixed index set <p> u 2<p> u {0}
over the order-2p1 classes of F_{p^f}, after orienting the generator so the
in-field quadratic period sum equals -1.
"""

import random

from .cyclotomy import CandidateSet, IndexSet, build_scheme, union_of_classes
from .errors import (
    BadIndexSet,
    ConditionViolated,
    EvenLift,
    NormalizationImpossible,
    SkewPreconditionFailed,
)
from .finite_field import FiniteField, build_field, invert_generator
from .numtheory import CaseAParams, CaseBParams, case_b_params


def validate_transversal(I, p1: int, m: int) -> bool:
    """True iff I has exactly p1^m members whose residues mod p1^m are distinct."""
    members = list(I)
    pm = p1**m
    if len(members) != pm:
        return False
    return len({i % pm for i in members}) == pm


def random_transversal(p1: int, m: int, seed: int) -> IndexSet:
    """For each residue r mod p1^m, pick r or r + p1^m with a seeded generator."""
    rng = random.Random(seed)
    pm = p1**m
    members = [r + pm * rng.randrange(2) for r in range(pm)]
    return IndexSet.coerce(members, 2 * pm)


def construct_case_A(params: CaseAParams, s: int, I, *,
                     budget: int | None = None, scheme=None) -> CandidateSet:
    """Build D as the I-indexed class union in F_{p^(f*s)} and check its branch.

    A prebuilt scheme for the same parameters may be supplied to avoid
    rebuilding tables when constructing many candidates over one field.
    """
    if s < 1 or s % 2 == 0:
        raise EvenLift(f"extension degree s = {s} must be odd")
    N = params.N
    index_set = I if isinstance(I, IndexSet) else IndexSet.coerce(I, N)
    if not validate_transversal(index_set, params.p1, params.m):
        raise BadIndexSet(
            f"index set {list(index_set)} is not a transversal mod {params.p1}^{params.m}")

    if scheme is None:
        field = build_field(params.p, params.f * s, budget)
        scheme = build_scheme(field, N)
    else:
        fld = scheme.field
        if fld.p != params.p or fld.f != params.f * s or scheme.N != N:
            raise SkewPreconditionFailed("supplied scheme does not match parameters")

    D = union_of_classes(scheme, index_set)
    D.provenance = {"case": "A", "p1": params.p1, "m": params.m, "p": params.p,
                    "s": s, "I": list(index_set)}

    if params.p % 4 == 3:
        if scheme.minus_one_class() != params.p1**params.m:
            raise SkewPreconditionFailed(
                f"-1 lies in class {scheme.minus_one_class()}, not {params.p1**params.m}")
        if not D.is_skew_disjoint():
            raise SkewPreconditionFailed("D meets -D")
    else:
        if not D.is_symmetric():
            raise SkewPreconditionFailed("-D != D on the PDS branch")
    return D


def subgroup_mod(p: int, N: int) -> list:
    """<p> as sorted residues mod N."""
    seen = set()
    x = 1 % N
    while x not in seen:
        seen.add(x)
        x = x * p % N
    return sorted(seen)


def case_b_index_set(p1: int, p: int) -> IndexSet:
    """<p> u 2<p> u {0} as residues mod 2*p1."""
    N = 2 * p1
    sub = subgroup_mod(p, N)
    members = {0} | set(sub) | {2 * x % N for x in sub}
    return IndexSet.coerce(members, N)


def normalize_generator_case_B(field: FiniteField, p1: int) -> FiniteField:
    """Orient gamma so that 1 + 2 * sum over quadratic residues r of gamma^(rn)
    equals -1 in the field (n = (q-1)/p1); flips the generator at most once."""
    q = field.q
    if (q - 1) % p1 != 0:
        raise NormalizationImpossible(f"p1 = {p1} does not divide q - 1")
    n = (q - 1) // p1

    def quadratic_period_code(fld):
        qr = sorted({r * r % p1 for r in range(1, p1)})
        acc = 1  # the constant 1
        for r in qr:
            beta = int(fld.exp_table[r * n % (q - 1)])
            acc = fld.add_codes(acc, fld.add_codes(beta, beta))
        return acc

    minus_one = field.neg_code(1)
    S = quadratic_period_code(field)
    if S == minus_one:
        return field
    if S != 1:
        raise NormalizationImpossible(
            f"period sum code {S} is neither 1 nor -1; parameters violate 1+p1=4p^h")
    flipped = invert_generator(field)
    assert quadratic_period_code(flipped) == minus_one
    return flipped


def construct_case_B(params_or_p1, p: int | None = None, *,
                     budget: int | None = None) -> CandidateSet:
    """Build the fixed-index-set skew candidate for validated 3-mod-8 parameters.

    Accepts either a CaseBParams or the raw (p1, p) pair; raw pairs are
    validated first and raise ConditionViolated naming the failed hypothesis.
    """
    if isinstance(params_or_p1, CaseBParams):
        params = case_b_params(params_or_p1.p1, params_or_p1.p)
    else:
        params = case_b_params(params_or_p1, p)

    p1 = params.p1
    N = params.N
    field = build_field(params.p, params.f, budget)
    field = normalize_generator_case_B(field, p1)
    scheme = build_scheme(field, N)

    # proof facts, asserted rather than assumed
    sub = subgroup_mod(params.p, N)
    qr = sorted({r * r % p1 for r in range(1, p1)})
    if sorted({x % p1 for x in sub}) != qr:
        raise ConditionViolated(0, "<p> mod p1 is not the set of nonzero squares")
    if 2 in qr or (p1 - 1) in qr:
        raise ConditionViolated(1, "2 and -1 must be quadratic nonresidues mod p1")

    index_set = case_b_index_set(p1, params.p)
    if len(index_set) != p1 or {i % p1 for i in index_set} != set(range(p1)):
        raise ConditionViolated(0, "index set does not cover Z/p1 exactly")

    D = union_of_classes(scheme, index_set)
    D.provenance = {"case": "B", "p1": p1, "p": params.p, "h": params.h,
                    "I": list(index_set)}
    if scheme.minus_one_class() != p1 or not D.is_skew_disjoint():
        raise SkewPreconditionFailed("constructed set is not skew")
    return D
