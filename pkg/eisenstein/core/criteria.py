"""
Elementary sums deciding the rank of the Eisenstein part of the Hecke algebra, and the identities between them.

Notation used below (m = (N - 1)/2, log at the modulus of the given LogMap):

    S_i = sum_{k=1}^{m} k * log(k)^i           (Merel sums)
    Q_i = sum_{k=1}^{N-1} k^2 * log(k)^i       (square-weighted sums)
    F_i = sum_{k=1}^{m} log(k)^i

For p >= 5, S_1 = 0 mod p^r iff n(r,p) >= 2 and S_1 = S_2 = 0 mod p^r iff n(r,p) >= 3. The primes 2 and 3 have their own
forms of the criteria, stated with lifted moduli.
"""

import dataclasses
from fractions import Fraction
from typing import Dict, Optional

import numpy as np

import eisenstein.core.errors as errors
import eisenstein.core.util as util
from eisenstein.core.dlog import LogMap
from eisenstein.core.fields import FieldCtx
from eisenstein.core.report import CheckList


def _powers_mod(values: np.ndarray, i: int, modulus: int) -> np.ndarray:
    result = np.ones_like(values) % modulus
    for _ in range(i):
        result = result * values % modulus
    return result


def merel_sum(lm: LogMap, i: int) -> int:
    """S_i = sum_{k=1}^{(N-1)/2} k * log(k)^i mod p^r (log(k)^0 = 1)"""
    if i < 0:
        raise ValueError("exponent should be non-negative")
    m, q = lm.ctx.m, lm.modulus
    k = np.arange(1, m + 1, dtype=np.int64) % q
    return int((k * _powers_mod(lm.values[:m], i, q) % q).sum() % q)


def squares_sum(lm: LogMap, i: int) -> int:
    """Q_i = sum_{k=1}^{N-1} k^2 * log(k)^i mod the log modulus"""
    N, q = lm.ctx.N, lm.modulus
    k = np.arange(1, N, dtype=np.int64) % q
    return int((k * k % q * _powers_mod(lm.values, i, q) % q).sum() % q)


def f_sum(lm: LogMap, i: int) -> int:
    """F_i = sum_{k=1}^{(N-1)/2} log(k)^i"""
    m, q = lm.ctx.m, lm.modulus
    return int(_powers_mod(lm.values[:m], i, q).sum() % q)


def _require_p_at_least_5(p: int) -> None:
    if p < 5:
        raise errors.UnsupportedPrime(f"criterion is stated for p >= 5, got p = {p}")


def criterion_ge2(lm: LogMap) -> bool:
    _require_p_at_least_5(lm.p)
    return merel_sum(lm, 1) == 0


def criterion_ge3(lm: LogMap) -> bool:
    _require_p_at_least_5(lm.p)
    return merel_sum(lm, 1) == 0 and merel_sum(lm, 2) == 0


def criterion_ge2_p3(ctx: FieldCtx, r: int) -> bool:
    """n(r,3) >= 2 iff sum_{k=1}^{N-1} k^2 * log(k) = 0 mod 3^r"""
    util.require_eisenstein(ctx.N, 3, r)
    return squares_sum(LogMap(ctx, 3, r), 1) == 0


def criterion_ge3_p3(ctx: FieldCtx, r: int) -> bool:
    """For t >= 2 and r <= t - 1: n(r,3) >= 3 iff Q_1 = Q_2 = 0 mod 3^r"""
    t = util.require_eisenstein(ctx.N, 3, r)
    if t < 2 or r > t - 1:
        raise errors.RangeError(f"the p = 3 criterion for n >= 3 needs t >= 2 and r <= t - 1 (t = {t}, r = {r})")
    lm = LogMap(ctx, 3, r)
    return squares_sum(lm, 1) == 0 and squares_sum(lm, 2) == 0


def criterion_ge2_p2(ctx: FieldCtx, r: int) -> bool:
    """n(r,2) >= 2 iff sum_{k=1}^{(N-1)/2} k * log(k) = 2^(t-1) mod 2^r"""
    t = util.require_eisenstein(ctx.N, 2, r)
    lm = LogMap(ctx, 2, r)
    return merel_sum(lm, 1) == 2 ** (t - 1) % lm.modulus


def criterion_ge3_p2(ctx: FieldCtx, r: int) -> bool:
    """
    For t >= 2, r <= t - 1 and n(r,2) >= 2: n(r,2) >= 3 iff sum_{k=1}^{(N-1)/2} k * (log(k) + log(k)^2) = 0 mod 2^(r+1)
    with log taken at modulus 2^(r+1)
    """
    t = util.require_eisenstein(ctx.N, 2, r)
    if t < 2 or r > t - 1:
        raise errors.RangeError(f"the p = 2 criterion for n >= 3 needs t >= 2 and r <= t - 1 (t = {t}, r = {r})")
    if not criterion_ge2_p2(ctx, r):
        raise errors.RangeError("the p = 2 criterion for n >= 3 assumes n(r,2) >= 2")
    lm = LogMap(ctx, 2, r + 1)
    return (merel_sum(lm, 1) + merel_sum(lm, 2)) % lm.modulus == 0


def m0_m1_pairing(lm: LogMap) -> int:
    """
    Closed form of the pairing m0+ . m1- in Z/p^r:

        -(1/12) * log(epsilon * zeta * prod_{k=1}^{(N-1)/2} k^(-4k))

    with epsilon = -1 iff N = 1 mod 8 and zeta = 2^((N-1)/3) iff N = 1 mod 3 (both 1 otherwise). The argument is a
    12-th power up to the units of the log, so the log is taken at p^(r + v_p(12)) and divided exactly
    """
    N, p, r = lm.ctx.N, lm.p, lm.r
    extra = util.valuation(12, p) if p in (2, 3) else 0
    lifted = lm.lift(r + extra)
    q = lifted.modulus
    m = lm.ctx.m
    k = np.arange(1, m + 1, dtype=np.int64) % q
    # log(prod k^(-4k)) = -4 * S_1
    value = -4 * int((k * lifted.values[:m] % q).sum() % q)
    if N % 8 == 1:
        value += lifted(N - 1)
    if N % 3 == 1:
        value += (N - 1) // 3 * lifted(2)
    value %= q
    if value % p ** extra:
        raise errors.InternalInvariantViolation("pairing argument is not a power of the expected order")
    unit = 12 // p ** extra
    return -(value // p ** extra) * pow(unit, -1, lm.modulus) % lm.modulus


def m0_m1_pairing_expected(lm: LogMap) -> int:
    """Prime-specific simplification of the same pairing (theorem-backed cross-check of ``m0_m1_pairing``)"""
    ctx, p, q = lm.ctx, lm.p, lm.modulus
    if p >= 5:
        return util.fraction_mod(Fraction(merel_sum(lm, 1), 3), q)
    if p == 3:
        return util.fraction_mod(Fraction(-squares_sum(lm, 1), 4), q)
    t = util.eisenstein_valuation(ctx.N, 2)
    return util.fraction_mod(Fraction(-(2 ** (t - 1) - merel_sum(lm, 1)), 3), q)


def m1_m1_pairing(lm: LogMap) -> int:
    """m1+ . m1- = (1/6) * S_2 (p >= 5)"""
    _require_p_at_least_5(lm.p)
    return util.fraction_mod(Fraction(merel_sum(lm, 2), 6), lm.modulus)


@dataclasses.dataclass
class CriteriaReport:
    N: int
    p: int
    r: int
    t: int
    sums: Dict[int, int]  # S_i mod the criterion modulus, i = 0..3
    squares_sum: Dict[int, int]  # Q_i, i = 1, 2
    F: Dict[int, int]  # F_i mod p^v, i = 0..2
    ge2: Optional[bool]
    ge3: Optional[bool]
    m0_m1: int
    checks: CheckList

    def to_dict(self) -> dict:
        return dict(sums={str(i): v for i, v in self.sums.items()},
                    squares_sum={str(i): v for i, v in self.squares_sum.items()},
                    F={str(i): v for i, v in self.F.items()}, ge2=self.ge2, ge3=self.ge3, m0_m1=self.m0_m1)


def criteria_report(ctx: FieldCtx, p: int, r: int) -> CriteriaReport:
    """All the sums and the verdicts available for the prime p (including 2 and 3) at modulus p^r"""
    t = util.require_eisenstein(ctx.N, p, r)
    lm = LogMap(ctx, p, r)
    lifted = lm.lift(lm.max_r)
    checks = CheckList()

    if p >= 5:
        ge2, ge3 = criterion_ge2(lm), criterion_ge3(lm)
        checks.theorem('merel-sum-0', merel_sum(lm, 0) == 0, "sum of k over k <= (N-1)/2 vanishes mod p^r")
    elif p == 3:
        ge2 = criterion_ge2_p3(ctx, r)
        ge3 = criterion_ge3_p3(ctx, r) if t >= 2 and r <= t - 1 else None
    else:
        ge2 = criterion_ge2_p2(ctx, r)
        ge3 = criterion_ge3_p2(ctx, r) if t >= 2 and r <= t - 1 and ge2 else None

    m0_m1 = m0_m1_pairing(lm)
    expected = m0_m1_pairing_expected(lm)
    checks.theorem('pairing-m0-m1', m0_m1 == expected, f"closed form {m0_m1}, simplified form {expected}")

    return CriteriaReport(
        N=ctx.N, p=p, r=r, t=t,
        sums={i: merel_sum(lm, i) for i in range(4)},
        squares_sum={i: squares_sum(lm, i) for i in (1, 2)},
        F={i: f_sum(lifted, i) for i in range(3)},
        ge2=ge2, ge3=ge3, m0_m1=m0_m1, checks=checks)


def _cyclic_autocorrelation(weights: np.ndarray) -> np.ndarray:
    """A[u] = sum_t w[t] * w[t + u mod n]"""
    return np.correlate(np.concatenate([weights, weights]), weights, mode='valid')[:len(weights)]


def _cyclic_self_convolution(weights: np.ndarray) -> np.ndarray:
    """B[s] = sum_{t1 + t2 = s mod n} w[t1] * w[t2]"""
    n = len(weights)
    full = np.zeros(2 * n, dtype=np.int64)
    full[:2 * n - 1] = np.convolve(weights, weights)
    return full[:n] + full[n:]


def identity_suite(lm: LogMap, samples: int = 20, seed: int = 0) -> CheckList:
    """
    Evaluate the identities between S_i, Q_i and F_i and the difference / sum / sign-weighted log sums. They hold in
    Z/p^v for every Eisenstein prime p (v = v_p(N - 1)) so every check is theorem-backed. The modulus of the given
    LogMap is replaced by p^v
    """
    ctx = lm.ctx
    N, m, p = ctx.N, ctx.m, lm.p
    lm = lm.lift(lm.max_r)
    M = lm.modulus
    L = np.zeros(N, dtype=np.int64)
    L[1:] = lm.values
    L2 = L * L % M
    log2 = int(L[2])
    checks = CheckList()

    def frac(x) -> int:
        return util.fraction_mod(Fraction(x), M)

    S1, S2 = merel_sum(lm, 1), merel_sum(lm, 2)
    Q1, Q2 = squares_sum(lm, 1), squares_sum(lm, 2)
    F0, F1, F2 = m % M, f_sum(lm, 1), f_sum(lm, 2)

    if p > 2:
        checks.theorem('F0-F1-vanish', F0 == 0 and F1 == 0, f"F0 = {F0}, F1 = {F1}")
    else:
        checks.theorem('F0-F1-vanish', 2 * F0 % M == 0 and 4 * F1 % M == 0, f"2 F0 = {2 * F0 % M}, 4 F1 = {4 * F1 % M}")
    f2_factor = 1 if p > 3 else (3 if p == 3 else 4)
    checks.theorem('F2-vanish', f2_factor * F2 % M == 0, f"{f2_factor} F2 = {f2_factor * F2 % M}")

    left = 4 * S1 % M
    right = (-3 * Q1 - log2 * frac(Fraction(N - 1, 6)) - F1) % M
    checks.theorem('square-weight-log', left == right, f"{left} vs {right}")

    left = 4 * S2 % M
    right = (-3 * Q2 + log2 * log2 * frac(Fraction(N - 1, 6)) - 2 * log2 * Q1 + 3 * F2) % M
    checks.theorem('square-weight-log2', left == right, f"{left} vs {right}")

    # sum over t1 != t2 in [1, m] of log(t1 - t2)^i: difference d occurs m - d times with each sign
    d = np.arange(1, m, dtype=np.int64)
    counts = (m - d) % M
    # sum over t1, t2 in [1, m] of log(t1 + t2)^i: s = t1 + t2 in [2, N - 1]
    s = np.arange(2, N, dtype=np.int64)
    s_counts = np.minimum(s - 1, 2 * m + 1 - s) % M
    for i, values, S_i, F_i in ((1, L, S1, F1), (2, L2, S2, F2)):
        differences = int((counts * ((values[d] + values[N - d]) % M) % M).sum() % M)
        checks.theorem(f'difference-sum-{i}', differences == -2 * S_i % M, f"{differences} vs {-2 * S_i % M}")
        sums = int((s_counts * values[s] % M).sum() % M)
        checks.theorem(f'sum-sum-{i}', sums == (2 * S_i - F_i) % M, f"{sums} vs {(2 * S_i - F_i) % M}")

    # sign weight: -1 on [1, m], +1 on [m + 1, N - 1], 0 at 0
    D = np.zeros(N, dtype=np.int64)
    D[1:m + 1] = -1
    D[m + 1:] = 1
    A = _cyclic_autocorrelation(D) % M
    B = _cyclic_self_convolution(D) % M
    expected = {
        1: (6 * Q1 + log2 * frac(Fraction(N - 1, 3))) % M,
        2: (6 * Q2 - log2 * log2 * frac(Fraction(N - 1, 3)) + 4 * log2 * Q1 - 4 * F2) % M
    }
    for i, values, S_i, F_i in ((1, L, S1, F1), (2, L2, S2, F2)):
        weighted_difference = int((values[1:] * A[1:] % M).sum() % M)
        weighted_sum = int((values[1:] * B[1:] % M).sum() % M)
        via_merel = (-8 * S_i + 2 * F_i) % M
        checks.theorem(f'sign-weighted-{i}',
                       weighted_difference == -weighted_sum % M == via_merel == expected[i],
                       f"{weighted_difference}, {-weighted_sum % M}, {via_merel}, {expected[i]}")

    # shifted product: sum over s != 0, 1 of log(s - 1) * log(s) = F2
    shifted = int((L[1:N - 1] * L[2:] % M).sum() % M)
    checks.theorem('shifted-product', shifted == F2, f"{shifted} vs {F2}")

    log_minus_one = int(L[N - 1])
    rng = np.random.default_rng(seed)
    candidates = np.arange(2, N - 1)
    chosen = rng.choice(candidates, size=min(samples, len(candidates)), replace=False)
    k = np.arange(1, N, dtype=np.int64)
    failures = []
    for a in sorted(int(x) for x in chosen):
        mask = k != a
        lhs = int((L[(k[mask] - a) % N] * L[k[mask]] % M).sum() % M)
        rhs = (-int(L[a]) ** 2 + log_minus_one * int(L[a]) + F2) % M
        if lhs != rhs:
            failures.append(a)
    checks.theorem('bernardi', not failures, f"{len(chosen)} samples" + (f", failed at {failures}" if failures else ''))

    if p == 2:
        checks.theorem('log2-even', log2 % 2 == 0, f"log(2) = {log2}")
    return checks
