"""Ground-truth verification of candidate sets.

The brute-force route counts every ordered difference of distinct elements
into a flat length-q histogram (O(k^2) time, O(q) memory) and checks the
counts elementwise. Subtraction of packed codes goes through two precomputed
half-width difference tables, so the inner loop is two gathers and an add;
the pair loop is compiled and parallelized over fixed chunks whose partial
histograms are merged by integer addition, making the result independent of
thread count. The character route checks the restricted sums against the
two-eigenvalue criteria.
"""

import math
import warnings
from dataclasses import dataclass, field as dataclass_field

import numba
import numpy as np
from numba import njit, prange

# harmless fallback to the next threading layer; the version note is just noise
warnings.filterwarnings("ignore", message="The TBB threading layer requires TBB version")

from .charsums import restricted_sums
from .cyclotomy import CandidateSet
from .errors import CaseMismatch, EvenCharacteristic, PatternMismatch

SKEW_HDS = "SkewHDS"
PALEY_PDS = "PaleyPDS"
NEITHER = "Neither"

BRUTE_FORCE = "BruteForce"
CHARACTER_SUMS = "CharacterSums"
BOTH = "Both"

_VERDICT_TOL_FACTOR = 1e-3  # verdicts flip beyond this * sqrt(q)
_WARN_TOL_FACTOR = 1e-6  # deviations beyond this * sqrt(q) draw a warning


@dataclass
class VerificationReport:
    verdict: str
    v: int
    k: int
    lam: int | None = None
    mu: int | None = None
    method: str = BRUTE_FORCE
    max_abs_deviation: float | None = None
    histogram_summary: tuple | None = None
    sign_pattern: list | None = None
    warnings: list = dataclass_field(default_factory=list)


@njit(cache=True, parallel=True)
def _hist_pairs_prime(codes, q, nchunks):
    k = codes.shape[0]
    hist = np.zeros((nchunks, q), dtype=np.int64)
    for c in prange(nchunks):
        start = c * k // nchunks
        stop = (c + 1) * k // nchunks
        h = hist[c]
        for i in range(start, stop):
            a = codes[i]
            for j in range(k):
                d = a - codes[j]
                if d < 0:
                    d += q
                h[d] += 1
    return hist.sum(axis=0)


@njit(cache=True, parallel=True)
def _hist_pairs_split(lo, hi, sub_lo, sub_hi, q, nchunks):
    k = lo.shape[0]
    hist = np.zeros((nchunks, q), dtype=np.int64)
    for c in prange(nchunks):
        start = c * k // nchunks
        stop = (c + 1) * k // nchunks
        h = hist[c]
        for i in range(start, stop):
            row_lo = sub_lo[lo[i]]
            row_hi = sub_hi[hi[i]]
            for j in range(k):
                h[row_lo[lo[j]] + row_hi[hi[j]]] += 1
    return hist.sum(axis=0)


@njit(cache=True, parallel=True)
def _hist_pairs_digits(digits, pvec, p, q, nchunks):
    k = digits.shape[0]
    f = digits.shape[1]
    hist = np.zeros((nchunks, q), dtype=np.int64)
    for c in prange(nchunks):
        start = c * k // nchunks
        stop = (c + 1) * k // nchunks
        h = hist[c]
        for i in range(start, stop):
            for j in range(k):
                code = 0
                for t in range(f):
                    d = digits[i, t] - digits[j, t]
                    if d < 0:
                        d += p
                    code += d * pvec[t]
                h[code] += 1
    return hist.sum(axis=0)


def _difference_table(p, ndigits, scale):
    """(Q, Q) table of packed digitwise differences, entries scaled by `scale`."""
    Q = p**ndigits
    rem = np.arange(Q, dtype=np.int64)
    digits = np.empty((Q, ndigits), dtype=np.int64)
    for i in range(ndigits):
        rem, digits[:, i] = np.divmod(rem, p)
    diff = (digits[:, None, :] - digits[None, :, :]) % p
    pvec = p ** np.arange(ndigits, dtype=np.int64) * scale
    return diff @ pvec


def _nchunks(q):
    # fixed per field size (not per thread count) so output never depends on threads
    return max(1, min(64, (1 << 29) // (8 * q)))


_SPLIT_TABLE_LIMIT = 1 << 24  # max entries per half-width table


def difference_histogram(D: CandidateSet, threads: int | None = None) -> np.ndarray:
    """Counts of d1 - d2 over ordered pairs of distinct elements of D."""
    fld = D.scheme.field
    if threads is not None:
        numba.set_num_threads(max(1, min(threads, numba.config.NUMBA_NUM_THREADS)))
    codes = D.codes().astype(np.int64)
    k = len(codes)
    f1 = (fld.f + 1) // 2
    if fld.f == 1:
        hist = _hist_pairs_prime(codes, fld.q, _nchunks(fld.q))
    elif fld.p ** (2 * f1) <= _SPLIT_TABLE_LIMIT:
        Q1 = fld.p**f1
        sub_lo = _difference_table(fld.p, f1, 1)
        sub_hi = _difference_table(fld.p, fld.f - f1, Q1)
        hist = _hist_pairs_split(codes % Q1, codes // Q1, sub_lo, sub_hi,
                                 fld.q, _nchunks(fld.q))
    else:
        # large p at f >= 2: lookup tables would not fit, subtract digitwise
        digits = fld.digits_of_codes(codes).astype(np.int64)
        pvec = fld.p ** np.arange(fld.f, dtype=np.int64)
        hist = _hist_pairs_digits(digits, pvec, fld.p, fld.q, _nchunks(fld.q))
    hist[0] -= k  # drop the d - d self-pairs
    assert hist.sum() == k * (k - 1), "difference count conservation failed"
    return hist


def warmup_kernels():
    """Force jit compilation on tiny inputs (cached across processes)."""
    _hist_pairs_prime(np.array([1, 2], dtype=np.int64), 3, 2)
    t = _difference_table(3, 1, 1)
    _hist_pairs_split(np.array([0], dtype=np.int64), np.array([0], dtype=np.int64),
                      t, _difference_table(3, 1, 3), 9, 2)
    _hist_pairs_digits(np.array([[1, 0], [2, 1]], dtype=np.int64),
                       np.array([1, 3], dtype=np.int64), 3, 9, 2)


def check_skew(D: CandidateSet) -> bool:
    """0 not in D, D disjoint from -D, and |D| = (q-1)/2; together these make
    F_q the disjoint union of D, -D and {0}."""
    q = D.scheme.field.q
    return (
        not D.membership[0]
        and D.k == (q - 1) // 2
        and int(D.membership.sum()) == D.k
        and D.is_skew_disjoint()
    )


def verify_skew_hds_brute(D: CandidateSet, threads: int | None = None) -> VerificationReport:
    """Exact difference counting; SkewHDS iff skew and all nonzero counts equal."""
    fld = D.scheme.field
    q = fld.q
    if q % 2 == 0:
        raise EvenCharacteristic("skew sets require odd q")
    hist = difference_histogram(D, threads)
    mn = int(hist[1:].min())
    mx = int(hist[1:].max())
    lam = (q - 3) // 4
    ok = check_skew(D) and (q - 3) % 4 == 0 and mn == lam and mx == lam
    return VerificationReport(
        verdict=SKEW_HDS if ok else NEITHER,
        v=q,
        k=D.k,
        lam=lam if ok else None,
        method=BRUTE_FORCE,
        histogram_summary=(mn, mx),
    )


def verify_paley_pds_brute(D: CandidateSet, threads: int | None = None) -> VerificationReport:
    """Exact difference counting against the (v, (v-1)/2, (v-5)/4, (v-1)/4) pattern."""
    q = D.scheme.field.q
    if q % 4 != 1:
        raise CaseMismatch(f"Paley-type PDS requires q = 1 mod 4, got q = {q}")
    hist = difference_histogram(D, threads)
    lam = (q - 5) // 4
    mu = (q - 1) // 4
    codes = D.codes()
    off = np.ones(q, dtype=bool)
    off[codes] = False
    off[0] = False
    on_ok = codes.size > 0 and hist[codes].min() == lam and hist[codes].max() == lam
    off_ok = hist[off].min() == mu and hist[off].max() == mu if off.any() else True
    ok = (
        not D.membership[0]
        and D.k == (q - 1) // 2
        and D.is_symmetric()
        and on_ok
        and off_ok
    )
    return VerificationReport(
        verdict=PALEY_PDS if ok else NEITHER,
        v=q,
        k=D.k,
        lam=lam if ok else None,
        mu=mu if ok else None,
        method=BRUTE_FORCE,
        histogram_summary=(int(hist[1:].min()), int(hist[1:].max())),
    )


def verify_by_characters(D: CandidateSet) -> VerificationReport:
    """Decide the verdict from the N restricted character sums."""
    q = D.scheme.field.q
    sums = restricted_sums(D.scheme, D)
    sq = math.sqrt(q)
    tol = _VERDICT_TOL_FACTOR * sq
    warn_tol = _WARN_TOL_FACTOR * sq
    warns = []

    if check_skew(D):
        dev = float(
            max(
                max(abs(s.real + 0.5), abs(abs(s.imag) - sq / 2))
                for s in sums
            )
        )
        signs = [1 if s.imag > 0 else -1 for s in sums]
        if dev <= tol:
            if dev > warn_tol:
                warns.append(
                    f"character deviation {dev:.3e} above precision band {warn_tol:.3e}")
            return VerificationReport(
                verdict=SKEW_HDS, v=q, k=D.k, lam=(q - 3) // 4,
                method=CHARACTER_SUMS, max_abs_deviation=dev,
                sign_pattern=signs, warnings=warns)
        return VerificationReport(verdict=NEITHER, v=q, k=D.k,
                                  method=CHARACTER_SUMS, max_abs_deviation=dev,
                                  sign_pattern=signs, warnings=warns)

    if (
        q % 4 == 1
        and not D.membership[0]
        and D.k == (q - 1) // 2
        and D.is_symmetric()
    ):
        r_plus, r_minus = (-1 + sq) / 2, (-1 - sq) / 2
        dev = float(
            max(
                max(abs(s.imag), min(abs(s.real - r_plus), abs(s.real - r_minus)))
                for s in sums
            )
        )
        signs = [1 if abs(s.real - r_plus) < abs(s.real - r_minus) else -1 for s in sums]
        if dev <= tol:
            if dev > warn_tol:
                warns.append(
                    f"character deviation {dev:.3e} above precision band {warn_tol:.3e}")
            return VerificationReport(
                verdict=PALEY_PDS, v=q, k=D.k, lam=(q - 5) // 4, mu=(q - 1) // 4,
                method=CHARACTER_SUMS, max_abs_deviation=dev,
                sign_pattern=signs, warnings=warns)
        return VerificationReport(verdict=NEITHER, v=q, k=D.k,
                                  method=CHARACTER_SUMS, max_abs_deviation=dev,
                                  sign_pattern=signs, warnings=warns)

    return VerificationReport(verdict=NEITHER, v=q, k=D.k, method=CHARACTER_SUMS)


@dataclass
class SignPatternReport:
    global_constant: int
    predicted: list
    actual: list


def predicted_sign_pattern(I, p1: int, m: int) -> list:
    """(-1)^(m + j_a) for a = 0..N-1, where i_a is the unique member of the
    transversal I with p1^m | (a + i_a) and j_a = (a + i_a)/p1^m."""
    pm = p1**m
    out = []
    for a in range(2 * pm):
        hits = [i for i in I if (a + i) % pm == 0]
        if len(hits) != 1:
            raise PatternMismatch(f"no unique i_a for a={a}: {hits}")
        j_a = (a + hits[0]) // pm
        out.append((-1) ** (m + j_a))
    return out


def sign_pattern_check(D: CandidateSet) -> SignPatternReport:
    """Check the per-position signs of the restricted sums of a 7-mod-8 skew
    candidate against the parity of (a + i_a)/p1^m, up to one global constant."""
    prov = D.provenance
    if prov.get("case") != "A" or prov["p"] % 4 != 3:
        raise CaseMismatch("sign pattern applies to skew case-A candidates only")
    sums = restricted_sums(D.scheme, D)
    predicted = predicted_sign_pattern(D.index_set, prov["p1"], prov["m"])
    actual = [1 if s.imag > 0 else -1 for s in sums]
    N = D.scheme.N

    g = actual[0] * predicted[0]
    if any(actual[a] != g * predicted[a] for a in range(N)):
        raise PatternMismatch(
            f"sign pattern disagrees with prediction under global constant {g}")
    return SignPatternReport(global_constant=g, predicted=predicted, actual=actual)
