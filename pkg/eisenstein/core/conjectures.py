"""
Numerical verification of the arithmetic properties of the supersingular parameters that come from the Eisenstein
ideal: proved propositions (asserted), conjectural identities (reported as findings when they fail) and the Eisenstein
elements of level Gamma_0(N) cap Gamma(2) with the Hecke relations they satisfy.
"""

import logging
from typing import Dict, Tuple

import numpy as np

import eisenstein.core.errors as errors
from eisenstein.core.criteria import merel_sum
from eisenstein.core.dlog import ExtendedLog, LogMap
from eisenstein.core.report import CheckKind, CheckList
from eisenstein.core.supersingular import (SupersingularSet, frobenius_permutation, hecke_u2_matrix, isogenous_images,
                                           isogeny_matrix, log_hprime)


_module_logger = logging.getLogger(__name__)

HECKE_DEGREES = (3, 5)


def _difference_logs(ss: SupersingularSet, log: ExtendedLog) -> np.ndarray:
    """Matrix D[i, j] = Log(lambda_j - lambda_i) off the diagonal, 0 on it"""
    N, nr, q = ss.N, ss.ctx.nonresidue, log.modulus
    a = np.array([lam.a for lam in ss.lambdas], dtype=np.int64)
    b = np.array([lam.b for lam in ss.lambdas], dtype=np.int64)
    da = (a[None, :] - a[:, None]) % N
    db = (b[None, :] - b[:, None]) % N
    norms = (da * da % N - nr * (db * db % N) % N) % N
    np.fill_diagonal(norms, 1)
    logs = log.base.many(norms.ravel()).reshape(norms.shape) * pow(N + 1, -1, q) % q
    np.fill_diagonal(logs, 0)
    return logs


def _propositions(ss: SupersingularSet, checks: CheckList) -> None:
    ctx = ss.ctx
    half = pow(2, -1, ss.N)
    checks.theorem('cube', all(ctx.is_power(lam * (1 - lam) * half, 3) for lam in ss.lambdas),
                   "lambda (1 - lambda)/2 is a cube")
    checks.theorem('fourth-power', all(ctx.is_power(lam, 4) for lam in ss.lambdas))
    # N^2 = 1 mod 8 for every odd N
    checks.reported('eighth-power', all(ctx.is_power(lam, 8) for lam in ss.lambdas))


def _local_identities(D: np.ndarray, values: np.ndarray, modulus: int) -> bool:
    """sum_{lambda' != lambda} Log(lambda' - lambda) * values(lambda') = values(lambda)^2 for every lambda"""
    left = (D % modulus * (values % modulus)[None, :] % modulus).sum(axis=1) % modulus
    return bool(np.array_equal(left, values * values % modulus))


def _conjectures_p5(ss: SupersingularSet, log: ExtendedLog, checks: CheckList) -> None:
    q = log.modulus
    a = log_hprime(ss, log)
    b = log.many(ss.lambdas)
    c = log.many([1 - lam for lam in ss.lambdas])
    log2 = log(2)
    S1, S2 = merel_sum(log.base, 1), merel_sum(log.base, 2)
    sum_b2 = int((b * b % q).sum() % q)

    checks.conjecture('log-lambda-squares', sum_b2 == -32 * log2 * S1 % q, f"{sum_b2} vs {-32 * log2 * S1 % q}")
    checks.conjecture('log-lambda-nonzero', bool(np.any(b)))
    sum_a2 = int((a * a % q).sum() % q)
    expected = (4 * S2 - 48 * log2 * S1) % q
    checks.conjecture('log-hprime-squares', sum_a2 == expected, f"{sum_a2} vs {expected}")
    if S1 == 0:
        D = _difference_logs(ss, log)
        checks.conjecture('local-hprime', _local_identities(D, a, q))
        checks.conjecture('local-lambda', _local_identities(D, b, q))
    else:
        checks.conjecture('local-hprime', None, "sum k log(k) != 0")
        checks.conjecture('local-lambda', None, "sum k log(k) != 0")

    ab, ac, bc = (int((u * v % q).sum() % q) for u, v in ((a, b), (a, c), (b, c)))
    checks.reported('remark-identities', ab == ac == -sum_b2 % q and 2 * bc % q == sum_b2,
                    f"sum ab = {ab}, sum ac = {ac}, sum b^2 = {sum_b2}, sum bc = {bc}")


def _conjectures_p3(ss: SupersingularSet, log: ExtendedLog, checks: CheckList) -> None:
    """The base log is lifted to 3^(r+1); the identities hold modulo 9 or 3 only"""
    q = log.modulus
    a = log_hprime(ss, log)
    b = log.many(ss.lambdas)
    log2 = log(2)
    S1 = merel_sum(log.base, 1)
    checks.conjecture('log-lambda-non-cube', bool(np.any(b % 3)))
    sum_b2 = int((b * b % q).sum() % q)
    right = 4 * log2 * S1 % q
    checks.conjecture('log-lambda-squares', sum_b2 % 9 == right % 9 and sum_b2 % 3 == 0,
                      f"{sum_b2 % 9} vs {right % 9} mod 9")
    D = _difference_logs(ss, log)
    checks.conjecture('local-hprime', _local_identities(D % 3, a % 3, 3))
    checks.conjecture('local-lambda', _local_identities(D % 3, b % 3, 3))


def conjecture_suite(ss: SupersingularSet, lm: LogMap) -> CheckList:
    """Propositions must pass; conjectures and remarks are reported"""
    checks = CheckList()
    _propositions(ss, checks)
    if ss.N % 4 == 1:
        checks.conjecture('hprime-non-square', not any(ss.ctx.is_square(ss.hprime[lam]) for lam in ss.lambdas),
                          "no H'(lambda) is a square")
    else:
        checks.conjecture('hprime-non-square', None, "N = 3 mod 4")

    if lm.p == 2:
        return checks
    log = ExtendedLog(lm)
    if lm.p == 3:
        _conjectures_p3(ss, log, checks)
    else:
        _conjectures_p5(ss, log, checks)
        elements, _ = gamma2_eisenstein_elements(ss, lm, hecke_degrees=())
        kind = CheckKind.THEOREM if log(2) % lm.p else CheckKind.CONJECTURE
        for name in ('e0_0', 'e0_1'):
            checks.add(f'{name}-nonzero', kind, bool(np.any(elements[name] % lm.p)))
    return checks


def gamma2_eisenstein_elements(ss: SupersingularSet, lm: LogMap,
                               hecke_degrees: Tuple[int, ...] = HECKE_DEGREES
                               ) -> Tuple[Dict[str, np.ndarray], CheckList]:
    """
    Vectors on L annihilated by the Eisenstein ideals I_0, I_1, I_2 and the element e1_2 one step above e0_2. Checks
    U_2, U_N = Frobenius and T_l for the given degrees (those equal to N are skipped)
    """
    if lm.p < 5:
        raise errors.UnsupportedPrime(f"Gamma(2) Eisenstein elements are built for p >= 5, got p = {lm.p}")
    log = ExtendedLog(lm)
    q = log.modulus
    half = pow(2, -1, q)
    log2 = log(2)
    b = log.many(ss.lambdas)
    c = log.many([1 - lam for lam in ss.lambdas])
    elements = {
        'e0_0': b,
        'e0_1': (c - 2 * b - 4 * log2) % q,
        'e0_2': np.ones(len(ss), dtype=np.int64),
    }
    elements['e1_2'] = (elements['e0_0'] + half * elements['e0_1'] + half * log_hprime(ss, log)) % q

    checks = CheckList()
    u2 = hecke_u2_matrix(ss)
    for alpha in range(3):
        e = elements[f'e0_{alpha}']
        checks.theorem(f'u2-e0_{alpha}', not np.any((u2 @ e - alpha * e) % q))
    e12 = elements['e1_2']
    # (U_2 - 2) e1_2 is I_2-torsion, hence a multiple of e0_2
    checks.theorem('u2-e1_2', np.array_equal((u2 @ e12 - 2 * e12) % q, log2 * elements['e0_2'] % q))

    frobenius = frobenius_permutation(ss)
    checks.theorem('un-fixed', all(np.array_equal(vector[frobenius], vector) for vector in elements.values()))

    for ell in hecke_degrees:
        if ell == ss.N:
            continue
        T = isogeny_matrix(ss, isogenous_images(ss, ell))
        for alpha in range(3):
            e = elements[f'e0_{alpha}']
            checks.theorem(f't{ell}-e0_{alpha}', not np.any((T @ e - (ell + 1) * e) % q))
        expected = (ell - 1) // 2 * log(ell) * elements['e0_2'] % q
        checks.theorem(f't{ell}-e1_2', np.array_equal((T @ e12 - (ell + 1) * e12) % q, expected))
    _module_logger.debug(f"Gamma(2) Eisenstein elements for N = {ss.N}, modulus {q}: {checks}")
    return elements, checks
