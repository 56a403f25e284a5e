"""Elementary number theory: orders, the index-2 predicate, class numbers,
p-adic digit sums, and the parameter searches for the two construction cases."""

import math
from dataclasses import dataclass

from .errors import BadResidue, ConditionViolated, DegenerateResidue, NotCoprime, NotPrime

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 3.3e24 (covers all inputs < 2^64)."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division, {prime: exponent}."""
    if n < 1:
        raise ValueError("factorize expects n >= 1")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def euler_phi(n: int) -> int:
    phi = 1
    for p, e in factorize(n).items():
        phi *= p ** (e - 1) * (p - 1)
    return phi


def mult_order(a: int, n: int) -> int:
    """Least d > 0 with a^d = 1 (mod n)."""
    if n <= 1:
        raise ValueError("modulus must exceed 1")
    a %= n
    if math.gcd(a, n) != 1:
        raise NotCoprime(f"gcd({a}, {n}) != 1")
    d = euler_phi(n)
    for ell in factorize(d):
        while d % ell == 0 and pow(a, d // ell, n) == 1:
            d //= ell
    return d


def is_index_two(p: int, N: int) -> bool:
    """True iff <p> has index 2 in (Z/NZ)* and -1 is not a power of p mod N."""
    if math.gcd(p, N) != 1:
        raise NotCoprime(f"gcd({p}, {N}) != 1")
    d = mult_order(p, N)
    if 2 * d != euler_phi(N):
        return False
    # <p> is cyclic of order d; it contains -1 iff d is even and p^(d/2) = -1.
    if d % 2 == 0 and pow(p, d // 2, N) == N - 1:
        return False
    return True


def class_number(p1: int) -> int:
    """Class number of the imaginary quadratic field of discriminant -p1.

    Counts reduced primitive forms (a, b, c) with b^2 - 4ac = -p1,
    -a < b <= a <= c, and b >= 0 whenever a = c or a = |b|.
    """
    if not is_prime(p1):
        raise NotPrime(f"{p1} is not prime")
    if p1 % 4 != 3:
        raise BadResidue(f"{p1} is not 3 mod 4")
    h = 0
    a = 1
    while 3 * a * a <= p1:
        for b in range(-a + 1, a + 1):
            if (b * b + p1) % (4 * a) != 0:
                continue
            c = (b * b + p1) // (4 * a)
            if c < a:
                continue
            if b < 0 and (a == c or a == -b):
                continue
            h += 1
        a += 1
    return h


def digit_sum_s(a: int, p: int, f: int) -> int:
    """Sum of the base-p digits of a reduced mod p^f - 1."""
    return sum(_digits_mod(a, p, f))


def digit_factorial_t(a: int, p: int, f: int) -> int:
    """Product of the factorials of the base-p digits of a mod p^f - 1."""
    t = 1
    for d in _digits_mod(a, p, f):
        t *= math.factorial(d)
    return t


def _digits_mod(a: int, p: int, f: int) -> list[int]:
    r = a % (p**f - 1)
    if r == 0:
        raise DegenerateResidue(f"{a} is divisible by {p}^{f} - 1")
    digits = []
    for _ in range(f):
        r, d = divmod(r, p)
        digits.append(d)
    return digits


@dataclass(frozen=True)
class CaseAParams:
    """Index-2 parameters with p1 = 7 mod 8: N = 2*p1^m, f = phi(N)/2."""

    p1: int
    m: int
    p: int
    f: int
    pds_flag: bool  # True iff p = 1 mod 4 (construction yields a PDS, not a skew set)

    @property
    def N(self) -> int:
        return 2 * self.p1**self.m


@dataclass(frozen=True)
class CaseBParams:
    """Index-2 parameters with p1 = 3 mod 8 and 1 + p1 = 4p^h: N = 2*p1."""

    p1: int
    p: int
    h: int
    f: int

    @property
    def N(self) -> int:
        return 2 * self.p1


def case_a_params(p1: int, m: int, p: int) -> CaseAParams:
    """Validate and package an index-2 tuple for the 7-mod-8 construction."""
    if not is_prime(p1) or p1 % 8 != 7:
        raise BadResidue(f"p1={p1} must be a prime = 7 mod 8")
    if not is_prime(p):
        raise NotPrime(f"p={p} is not prime")
    N = 2 * p1**m
    if math.gcd(p, N) != 1:
        raise NotCoprime(f"gcd({p}, {N}) != 1")
    if not is_index_two(p, N):
        raise BadResidue(f"(p={p}, N={N}) is not an index-2 pair")
    return CaseAParams(p1=p1, m=m, p=p, f=euler_phi(N) // 2, pds_flag=p % 4 == 1)


def search_case_A(p1_max: int, m_max: int, p_max: int) -> list[CaseAParams]:
    """All (p1, m, p) with p1 = 7 mod 8 prime, m <= m_max, p prime, index 2."""
    hits = []
    for p1 in range(7, p1_max + 1, 8):
        if not is_prime(p1):
            continue
        for m in range(1, m_max + 1):
            N = 2 * p1**m
            for p in range(2, p_max + 1):
                if not is_prime(p) or math.gcd(p, N) != 1:
                    continue
                if is_index_two(p, N):
                    hits.append(CaseAParams(p1, m, p, euler_phi(N) // 2, p % 4 == 1))
    hits.sort(key=lambda t: (t.p1, t.m, t.p))
    return hits


def _integer_root(n: int, k: int) -> int | None:
    """Exact k-th root of n, or None."""
    r = round(n ** (1.0 / k))
    for cand in (r - 1, r, r + 1):
        if cand > 0 and cand**k == n:
            return cand
    return None


def search_case_B(p1_max: int, p_max: int) -> list[CaseBParams]:
    """All (p1, p, h) with p1 = 3 mod 8, p1 > 3, 1 + p1 = 4p^h, p = 3 mod 4, index 2."""
    hits = []
    for p1 in range(11, p1_max + 1, 8):
        if not is_prime(p1):
            continue
        h = class_number(p1)
        p = _integer_root((1 + p1) // 4, h)
        if p is None or p > p_max:
            continue
        if not is_prime(p) or p % 4 != 3:
            continue
        if not is_index_two(p, 2 * p1):
            continue
        assert p1 % p == p - 1, "1 + p1 = 4p^h forces p1 = -1 mod p"
        hits.append(CaseBParams(p1=p1, p=p, h=h, f=(p1 - 1) // 2))
    hits.sort(key=lambda t: (t.p1, t.p))
    return hits


def case_b_params(p1: int, p: int) -> CaseBParams:
    """Validate and package a (p1, p) pair for the 3-mod-8 construction.

    Raises ConditionViolated naming the first failed hypothesis; condition 0
    stands for the index-2 requirement that frames all four numbered ones.
    """
    if not is_prime(p1) or p1 % 8 != 3 or p1 <= 3:
        raise ConditionViolated(1, f"p1={p1} must be a prime = 3 mod 8, p1 > 3")
    if not is_prime(p):
        raise ConditionViolated(3, f"p={p} is not prime")
    h = class_number(p1)
    if 1 + p1 != 4 * p**h:
        raise ConditionViolated(3, f"1 + {p1} != 4*{p}^{h} (h is the class number)")
    if p % 4 != 3:
        raise ConditionViolated(4, f"p={p} is not 3 mod 4")
    if not is_index_two(p, 2 * p1):
        raise ConditionViolated(0, f"index-2 condition failed for (p={p}, N={2 * p1})")
    return CaseBParams(p1=p1, p=p, h=h, f=(p1 - 1) // 2)
