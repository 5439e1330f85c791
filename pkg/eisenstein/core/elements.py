"""
The explicit Eisenstein elements of the plus homology: m0+ (killed by every T_l - l - 1, boundary (N - 1)/12), m1+ (one
step above it in the Eisenstein filtration) and the p = 2 companion of m0+ given by lattice-point counts.

Coefficients are written through the sign character eps(v) = (-1)^(v+1) on 1..N-1 (eps(0) = 0) which is what the
second Bernoulli-type sums over Z/2N fold down to. For a symbol [c:d] with d != c put a = (d + c)/(d - c) mod N and

    rho(x)   = sum_w eps(x w) eps(w)
    rhoL(y)  = sum_w eps(w) eps(y w) log(w)
    kappa(a) = sum_x log(x + a) rho(x)          (log(0) read as 0)

then F0([c:d]) = -rho(a)/24 and F1([c:d]) = -(2 rhoL(a) + kappa(a))/48; both vanish on [1:1].
"""

import logging
import random
from fractions import Fraction
from typing import Iterable, Optional, Tuple

import numpy as np

import eisenstein.core.errors as errors
import eisenstein.core.util as util
from eisenstein.core.criteria import merel_sum
from eisenstein.core.dlog import LogMap
from eisenstein.core.fields import FieldCtx
from eisenstein.core.manin import ManinSpace, P1Index
from eisenstein.core.report import CheckList


_module_logger = logging.getLogger(__name__)

DEFAULT_CHECK_PRIMES = (2, 3, 5, 7, 11, 13)


def sign_character(N: int) -> np.ndarray:
    eps = np.where(np.arange(N) % 2 == 1, 1, -1).astype(np.int64)
    eps[0] = 0
    return eps


def symbol_parameters(p1: P1Index) -> np.ndarray:
    """a = (d + c)/(d - c) mod N for every symbol, -1 where d = c"""
    N = p1.N
    delta = (p1.ds - p1.cs) % N
    sigma = (p1.ds + p1.cs) % N
    return np.where(delta != 0, sigma * p1.ctx.inverse_table[delta] % N, -1)


def _correlations(N: int, log_table: Optional[np.ndarray], modulus: int) -> Tuple[np.ndarray, np.ndarray]:
    """rho over Z/N (exact integers) and, when a log table is given, rhoL modulo the modulus"""
    eps = sign_character(N)
    w = np.arange(1, N, dtype=np.int64)
    eps_w = eps[w]
    weighted = eps_w * log_table[w] % modulus if log_table is not None else None
    rho = np.zeros(N, dtype=np.int64)
    rho_log = np.zeros(N, dtype=np.int64)
    for x in range(1, N):
        shifted = eps[x * w % N]
        rho[x] = int(np.dot(shifted, eps_w))
        if weighted is not None:
            rho_log[x] = int(np.dot(shifted, weighted) % modulus)
        if x % 512 == 0:
            util.checkpoint('eisenstein element coefficients')
    return rho, rho_log


def f0_coefficients(p1: P1Index, modulus: int) -> np.ndarray:
    """F0 on every symbol modulo the given modulus (coprime to 6)"""
    rho, _ = _correlations(p1.N, None, modulus)
    a = symbol_parameters(p1)
    values = np.where(a >= 0, -rho[np.maximum(a, 0)], 0) % modulus
    return values * pow(24, -1, modulus) % modulus


def f1_coefficients(p1: P1Index, lm: LogMap) -> np.ndarray:
    N, q = p1.N, lm.modulus
    log_table = np.zeros(N, dtype=np.int64)
    log_table[1:] = lm.values % q
    rho, rho_log = _correlations(N, log_table, q)
    # kappa(a) = sum_x log(x + a) rho(x) for every a at once
    kappa = np.correlate(np.concatenate([log_table, log_table]), rho % q, 'valid')[:N] % q
    a = symbol_parameters(p1)
    safe = np.maximum(a, 0)
    values = np.where(a >= 0, -(2 * rho_log[safe] + kappa[safe]), 0) % q
    return values * pow(48, -1, q) % q


def _check_primes(ms: ManinSpace, primes: Optional[Iterable[int]]) -> Tuple[int, ...]:
    return tuple(ell for ell in (DEFAULT_CHECK_PRIMES if primes is None else primes) if ell != ms.N)


def f0_element(ms: ManinSpace, check_primes: Optional[Iterable[int]] = None,
               checks: Optional[CheckList] = None) -> np.ndarray:
    """
    m0+ = sum_x F0(x) xi(x) in V. Verified to be killed by T_l - l - 1 for the check primes, to have the boundary
    (N - 1)/12 and not to be divisible by p
    """
    q = ms.modulus
    coefficients = f0_coefficients(ms.p1, q)
    m0 = ms.project(coefficients)
    checks = CheckList() if checks is None else checks

    checks.theorem('f0-conjugation', np.array_equal(coefficients[ms.p1.iota], coefficients),
                   "F0([-c:d]) = F0([c:d])")
    for ell in _check_primes(ms, check_primes):
        checks.theorem(f'f0-eta{ell}', not np.any(ms.eta(ell) @ m0 % q))
    expected = util.fraction_mod(Fraction(ms.N - 1, 12), q)
    checks.theorem('f0-boundary', ms.boundary(m0) == expected, f"{ms.boundary(m0)} vs {expected}")
    checks.theorem('f0-primitive', bool(np.any(m0 % ms.p)), "m0+ is not in pV")
    if not checks.succeed:
        raise errors.VerificationFailed(f"m0+ verification failed for N = {ms.N}, p^r = {q}:\n{checks}")
    return m0


def f1_element(ms: ManinSpace, lm: LogMap, m0: Optional[np.ndarray] = None,
               check_primes: Optional[Iterable[int]] = None, checks: Optional[CheckList] = None) -> np.ndarray:
    """
    m1+ = sum_x F1(x) xi(x) in V, determined modulo the line of m0+. Verified against
    (T_l - l - 1) m1+ = ((l - 1)/2) log(l) m0+ and the boundary (1/3) sum_{k <= (N-1)/2} k log(k)
    """
    q = ms.modulus
    if lm.modulus != q:
        raise errors.RangeError(f"log modulus {lm.modulus} differs from the space modulus {q}")
    if m0 is None:
        m0 = f0_element(ms, check_primes=())
    coefficients = f1_coefficients(ms.p1, lm)
    m1 = ms.project(coefficients)
    checks = CheckList() if checks is None else checks

    half = pow(2, -1, q)
    for ell in _check_primes(ms, check_primes):
        expected = (ell - 1) * half * lm(ell) % q * m0 % q
        checks.theorem(f'f1-eta{ell}', np.array_equal(ms.eta(ell) @ m1 % q, expected))
    expected = merel_sum(lm, 1) * pow(3, -1, q) % q
    checks.theorem('f1-boundary', ms.boundary(m1) == expected, f"{ms.boundary(m1)} vs {expected}")
    if not checks.succeed:
        raise errors.VerificationFailed(f"m1+ verification failed for N = {ms.N}, p^r = {q}:\n{checks}")
    return m1


def f02_counts(p1: P1Index) -> np.ndarray:
    """#{s in [1, m] : (-(d + c)/(d - c)) s mod N in [1, m]} for every symbol (0 where d = c or d = -c)"""
    N = p1.N
    m = (N - 1) // 2
    multipliers = np.arange(N, dtype=np.int64)
    per_multiplier = np.zeros(N, dtype=np.int64)
    for s in range(1, m + 1):
        residues = multipliers * s % N
        per_multiplier += (residues >= 1) & (residues <= m)
        if s % 512 == 0:
            util.checkpoint('lattice point counts')
    a = symbol_parameters(p1)
    return np.where(a > 0, per_multiplier[(-a) % N], 0)


def f02_values(p1: P1Index) -> np.ndarray:
    """12 F02 = -(N - 1) + 4 count, as exact integers"""
    if p1.N % 8 != 1:
        raise errors.UnsupportedPrime(f"the p = 2 element needs N = 1 mod 8, got N = {p1.N}")
    return 4 * f02_counts(p1) - (p1.N - 1)


def f02_element(ctx: FieldCtx, samples: int = 50, seed: int = 0,
                checks: Optional[CheckList] = None) -> Tuple[np.ndarray, CheckList]:
    """
    Integral m0+ for p = 2 as the vector of 12 F02 on the symbols. Verified by the antisymmetry under [c:d] -> [-d:c]
    (off [+-1:1]), the parity of the counts against log((x + 1)/(x - 1)) mod 2 on random points and, in an auxiliary
    space over a prime q >= 5, by m0+(p = 2) = 2 m0+ and the boundary (N - 1)/6
    """
    N = ctx.N
    p1 = P1Index(ctx)
    values = f02_values(p1)
    counts = (values + N - 1) // 4
    checks = CheckList() if checks is None else checks

    off_diagonal = np.ones(p1.size, dtype=bool)
    off_diagonal[[p1.index(1, 1), p1.index(-1, 1)]] = False
    checks.theorem('f02-antisymmetry',
                   np.array_equal(values[p1.sigma][off_diagonal], -values[off_diagonal]))

    log2 = LogMap(ctx, 2, 1)
    rng = random.Random(seed)
    points = [rng.randrange(2, N - 1) for _ in range(samples)]
    checks.theorem('f02-gauss-lemma', all(
        counts[x] % 2 == log2((x + 1) * pow(x - 1, -1, N)) % 2 for x in points), f"{samples} random points")

    q0 = util.first_prime_at_least(5, exclude=N)
    auxiliary = ManinSpace(ctx, q0, 1)
    element = auxiliary.project(values * pow(12, -1, q0) % q0)
    doubled = 2 * auxiliary.project(f0_coefficients(p1, q0)) % q0
    checks.theorem('f02-twice-m0', np.array_equal(element, doubled), f"in the space modulo {q0}")
    expected = util.fraction_mod(Fraction(N - 1, 6), q0)
    checks.theorem('f02-boundary', auxiliary.boundary(element) == expected,
                   f"{auxiliary.boundary(element)} vs {expected} mod {q0}")
    if not checks.succeed:
        raise errors.VerificationFailed(f"p = 2 Eisenstein element verification failed for N = {N}:\n{checks}")
    return values, checks
