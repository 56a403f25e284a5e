"""Explicit model of F_{p^f} with full exponential and discrete-log tables.

Elements are stored as base-p packed integer codes (sum of c_i * p^i over the
coefficients of the polynomial representative), which makes table indexing
O(1). A fixed primitive element gamma drives the exp/dlog tables; all
multiplicative structure downstream (cyclotomic classes, character sums)
reads from those tables.
"""

import math
import random
from functools import cached_property

import numpy as np

from . import numtheory
from .errors import BudgetExceeded, NotPrime, ZeroElement

DEFAULT_BUDGET = 1 << 25

_TABLE_BLOCK = 4096


# ---------------------------------------------------------------------------
# dense polynomial arithmetic over F_p (coefficient lists, low degree first)

def _poly_trim(a):
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return a


def _poly_mul_mod(a, b, mod, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_rem(out, mod, p)


def _poly_rem(a, mod, p):
    # mod is monic
    a = list(a)
    dm = len(mod) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i] % p
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * mod[j]) % p
    return _poly_trim(a[:dm] if dm > 0 else [0])


def _poly_pow_mod(base, e, mod, p):
    result = [1]
    acc = _poly_rem(base, mod, p)
    while e > 0:
        if e & 1:
            result = _poly_mul_mod(result, acc, mod, p)
        acc = _poly_mul_mod(acc, acc, mod, p)
        e >>= 1
    return result


def _poly_gcd(a, b, p):
    a, b = list(a), list(b)
    while b != [0]:
        # make b monic, then reduce a by it
        inv = pow(b[-1], p - 2, p)
        b = [c * inv % p for c in b]
        a, b = b, _poly_rem(a, b, p)
    return _poly_trim(a)


def _frobenius_power(k, mod, p):
    """x^(p^k) mod the monic polynomial `mod`."""
    x = [0, 1]
    out = _poly_rem(x, mod, p)
    for _ in range(k):
        out = _poly_pow_mod(out, p, mod, p)
    return out


def is_irreducible(mod, p):
    """Monic polynomial irreducibility over F_p by Frobenius conditions."""
    f = len(mod) - 1
    if f < 1:
        return False
    if f == 1:
        return True
    if _frobenius_power(f, mod, p) != _poly_rem([0, 1], mod, p):
        return False
    for ell in numtheory.factorize(f):
        g = _frobenius_power(f // ell, mod, p)
        diff = list(g) + [0] * max(0, 2 - len(g))
        diff[1] = (diff[1] - 1) % p  # subtract x
        if _poly_gcd(list(mod), _poly_trim(diff), p) != [1]:
            return False
    return True


def _find_irreducible(p, f, seed):
    if f == 1:
        return (0, 1)  # the polynomial x; F_p itself
    rng = random.Random(seed)
    while True:
        cand = [rng.randrange(p) for _ in range(f)] + [1]
        if cand[0] == 0:
            continue  # divisible by x
        if is_irreducible(cand, p):
            return tuple(cand)


def _find_primitive(p, f, mod, q1_factors):
    """First element code (in ascending code order) of multiplicative order q-1."""
    q = p**f
    if q == 2:
        return 1
    start = p if f > 1 else 2  # constants cannot generate F_{p^f}^* for f > 1
    for code in range(start, q):
        cand = _decode(code, p, f)
        if all(
            _poly_pow_mod(cand, (q - 1) // ell, mod, p) != [1]
            for ell in q1_factors
        ):
            return code
    raise AssertionError("no primitive element found; modulus not irreducible?")


def _decode(code, p, f):
    digits = []
    for _ in range(f):
        code, d = divmod(code, p)
        digits.append(d)
    return _poly_trim(digits)


def _mul_matrix(elem, mod, p):
    """Matrix of multiplication by `elem` in the monomial basis, columns = e * x^j."""
    f = len(mod) - 1
    M = np.zeros((f, f), dtype=np.int64)
    col = _poly_rem(list(elem), mod, p)
    for j in range(f):
        M[: len(col), j] = col
        col = _poly_mul_mod(col, [0, 1], mod, p)
    return M


class FieldElement:
    """An element of a built field, identified by its packed code."""

    __slots__ = ("field", "code")

    def __init__(self, field, code):
        self.field = field
        self.code = code

    def _check(self, other):
        if not isinstance(other, FieldElement) or other.field is not self.field:
            raise ValueError("arithmetic requires elements of the same field")

    def __add__(self, other):
        self._check(other)
        return FieldElement(self.field, self.field.add_codes(self.code, other.code))

    def __sub__(self, other):
        self._check(other)
        return FieldElement(self.field, self.field.sub_codes(self.code, other.code))

    def __mul__(self, other):
        self._check(other)
        return FieldElement(self.field, self.field.mul_codes(self.code, other.code))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg_code(self.code))

    def __pow__(self, e):
        return FieldElement(self.field, self.field.pow_code(self.code, e))

    def __eq__(self, other):
        return (
            isinstance(other, FieldElement)
            and other.field is self.field
            and other.code == self.code
        )

    def __hash__(self):
        return hash((id(self.field), self.code))

    def __repr__(self):
        return f"FieldElement(code={self.code}, q={self.field.q})"


class FiniteField:
    """F_{p^f} with a fixed primitive element and exp/dlog tables.

    Immutable once built; safe to share read-only. Use build_field() or
    invert_generator() to obtain instances.
    """

    def __init__(self, p, f, modulus, seed, gamma, exp_table, dlog_table,
                 trace_vector, orientation_flipped):
        self.p = p
        self.f = f
        self.q = p**f
        self.modulus = tuple(modulus)
        self.seed = seed
        self.gamma = gamma
        self.exp_table = exp_table
        self.dlog_table = dlog_table
        self._trace_vector = trace_vector
        self.orientation_flipped = orientation_flipped
        self._pvec = np.array([p**i for i in range(f)], dtype=np.int64)

    # -- element constructors ------------------------------------------------

    def element(self, code: int) -> FieldElement:
        if not 0 <= code < self.q:
            raise ValueError(f"code {code} outside [0, {self.q})")
        return FieldElement(self, code)

    def zero(self) -> FieldElement:
        return FieldElement(self, 0)

    def one(self) -> FieldElement:
        return FieldElement(self, 1)

    def generator(self) -> FieldElement:
        return FieldElement(self, self.gamma)

    # -- scalar code arithmetic ----------------------------------------------

    def add_codes(self, a: int, b: int) -> int:
        p = self.p
        out, shift = 0, 1
        for _ in range(self.f):
            out += ((a + b) % p) * shift
            a //= p
            b //= p
            shift *= p
        return out

    def neg_code(self, a: int) -> int:
        p = self.p
        out, shift = 0, 1
        for _ in range(self.f):
            out += (-a % p) * shift
            a //= p
            shift *= p
        return out

    def sub_codes(self, a: int, b: int) -> int:
        return self.add_codes(a, self.neg_code(b))

    def mul_codes(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        k = (int(self.dlog_table[a]) + int(self.dlog_table[b])) % (self.q - 1)
        return int(self.exp_table[k])

    def inv_code(self, a: int) -> int:
        if a == 0:
            raise ZeroElement("0 has no inverse")
        return int(self.exp_table[-int(self.dlog_table[a]) % (self.q - 1)])

    def pow_code(self, a: int, e: int) -> int:
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                raise ZeroElement("0 has no inverse")
            return 0
        return int(self.exp_table[(int(self.dlog_table[a]) * e) % (self.q - 1)])

    # -- discrete logs and orders ----------------------------------------------

    def dlog_code(self, a: int) -> int:
        if a == 0:
            raise ZeroElement("dlog(0) undefined")
        return int(self.dlog_table[a])

    def element_order_code(self, a: int) -> int:
        if a == 0:
            raise ZeroElement("order of 0 undefined")
        return (self.q - 1) // math.gcd(self.dlog_code(a), self.q - 1)

    # -- traces ---------------------------------------------------------------

    def trace_code(self, a: int) -> int:
        p = self.p
        out = 0
        for t in self._trace_vector:
            out += int(t) * (a % p)
            a //= p
        return out % p

    def digits_of_codes(self, codes: np.ndarray) -> np.ndarray:
        """(n, f) matrix of base-p digits for an array of codes."""
        rem = codes.astype(np.int64, copy=True)
        out = np.empty((len(codes), self.f), dtype=np.int32)
        for i in range(self.f):
            rem, out[:, i] = np.divmod(rem, self.p)
        return out

    def traces_of_codes(self, codes: np.ndarray) -> np.ndarray:
        """Vectorized absolute traces, values in [0, p)."""
        out = np.empty(len(codes), dtype=np.int64)
        t = self._trace_vector.astype(np.int64)
        for lo in range(0, len(codes), 1 << 20):
            chunk = codes[lo : lo + (1 << 20)]
            out[lo : lo + (1 << 20)] = self.digits_of_codes(chunk) @ t % self.p
        return out

    @cached_property
    def neg_table(self) -> np.ndarray:
        """Code of -x for every code x."""
        out = np.empty(self.q, dtype=np.int32)
        for lo in range(0, self.q, 1 << 20):
            codes = np.arange(lo, min(self.q, lo + (1 << 20)), dtype=np.int64)
            digits = self.digits_of_codes(codes)
            out[lo : lo + (1 << 20)] = (-digits % self.p) @ self._pvec
        return out

    # -- serialization ----------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "f": self.f,
            "modulus": list(self.modulus),
            "seed": self.seed,
            "orientation_flipped": self.orientation_flipped,
        }

    def __repr__(self):
        flip = ", flipped" if self.orientation_flipped else ""
        return f"FiniteField(p={self.p}, f={self.f}, q={self.q}{flip})"


def build_field(p: int, f: int, budget: int | None = None, *,
                seed: int = 0, modulus=None) -> FiniteField:
    """Construct F_{p^f} with full tables.

    The irreducible modulus comes from a seeded random search (or is taken
    as given and re-verified); the primitive element is the first code in
    ascending order that passes the order test, so the whole construction
    is reproducible from (p, f, modulus, seed).
    """
    if budget is None:
        budget = DEFAULT_BUDGET
    if not numtheory.is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if f < 1:
        raise ValueError("extension degree must be positive")
    q = p**f
    if q > budget:
        raise BudgetExceeded(f"q = {p}^{f} = {q} exceeds table budget {budget}")

    if modulus is None:
        modulus = _find_irreducible(p, f, seed)
    else:
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != f + 1 or modulus[f] != 1:
            raise ValueError("modulus must be monic of degree f")
        if not is_irreducible(list(modulus), p):
            raise ValueError("supplied modulus is not irreducible")

    q1_factors = sorted(numtheory.factorize(q - 1)) if q > 2 else []
    gamma = _find_primitive(p, f, list(modulus), q1_factors)

    exp_table = _build_exp_table(p, f, list(modulus), gamma)
    counts = np.bincount(exp_table, minlength=q)
    if counts[0] != 0 or (q > 1 and counts[1:].max(initial=1) != 1):
        raise AssertionError("exp table is not a bijection onto nonzero codes")
    dlog_table = np.empty(q, dtype=np.int32)
    dlog_table[0] = -1
    dlog_table[exp_table] = np.arange(q - 1, dtype=np.int32)

    trace_vector = _trace_vector(p, f, list(modulus))

    return FiniteField(p, f, modulus, seed, gamma, exp_table, dlog_table,
                       trace_vector, orientation_flipped=False)


def _build_exp_table(p, f, mod, gamma):
    """Codes of gamma^k for k = 0..q-2, via blocked matrix powering."""
    q = p**f
    pvec = np.array([p**i for i in range(f)], dtype=np.int64)
    M = _mul_matrix(_decode(gamma, p, f), mod, p)

    block = min(_TABLE_BLOCK, q - 1)
    V = np.zeros((block, f), dtype=np.int64)
    cur = np.zeros(f, dtype=np.int64)
    cur[0] = 1
    for k in range(block):
        V[k] = cur
        cur = M @ cur % p

    exp_table = np.empty(q - 1, dtype=np.int32)
    exp_table[:block] = V @ pvec
    if q - 1 > block:
        gamma_block = _poly_pow_mod(_decode(gamma, p, f), block, mod, p)
        Mb_T = np.ascontiguousarray(_mul_matrix(gamma_block, mod, p).T)
        done = block
        while done < q - 1:
            V = V @ Mb_T % p
            n = min(block, q - 1 - done)
            exp_table[done : done + n] = V[:n] @ pvec
            done += n
    return exp_table


def _trace_vector(p, f, mod):
    """Traces of the basis monomials: entry j is Tr(x^j) in [0, p)."""
    xp = _frobenius_power(1, mod, p)
    F = np.zeros((f, f), dtype=np.int64)
    col = [1]
    for j in range(f):
        F[: len(col), j] = col
        col = _poly_mul_mod(col, xp, mod, p)
    S = np.eye(f, dtype=np.int64)
    P = F.copy()
    for _ in range(f - 1):
        S = (S + P) % p
        P = P @ F % p
    if f > 1 and S[1:, :].any():
        raise AssertionError("trace functional did not collapse to F_p")
    return S[0, :].astype(np.int32)


def invert_generator(field: FiniteField) -> FiniteField:
    """Same field structure with gamma replaced by gamma^(-1), tables rebuilt."""
    q = field.q
    exp_table = np.empty_like(field.exp_table)
    exp_table[0] = field.exp_table[0]
    exp_table[1:] = field.exp_table[:0:-1]
    dlog_table = np.empty_like(field.dlog_table)
    dlog_table[0] = -1
    dlog_table[exp_table] = np.arange(q - 1, dtype=np.int32)
    gamma = int(exp_table[1]) if q > 2 else 1
    return FiniteField(field.p, field.f, field.modulus, field.seed, gamma,
                       exp_table, dlog_table, field._trace_vector,
                       orientation_flipped=not field.orientation_flipped)


def field_from_dict(d: dict, budget: int | None = None) -> FiniteField:
    """Rebuild a field from its serialized header; reproduces identical tables."""
    field = build_field(d["p"], d["f"], budget, seed=d.get("seed", 0),
                        modulus=d["modulus"])
    if d.get("orientation_flipped", False):
        field = invert_generator(field)
    return field


# -- module-level operation surface ------------------------------------------

def trace(x: FieldElement) -> int:
    """Absolute trace to the prime field, as a residue in [0, p)."""
    return x.field.trace_code(x.code)


def dlog(x: FieldElement) -> int:
    """Exponent k with gamma^k = x; raises ZeroElement on 0."""
    return x.field.dlog_code(x.code)


def element_order(x: FieldElement) -> int:
    """Multiplicative order, (q-1)/gcd(dlog x, q-1)."""
    return x.field.element_order_code(x.code)
