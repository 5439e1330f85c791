"""
Supersingular Legendre parameters and the Hasse polynomial

    H(X) = sum_{i=0}^{m} binom(m, i)^2 X^i,  m = (N - 1)/2

whose roots in F_{N^2} are the supersingular lambda-invariants. The module on the isomorphism classes of supersingular
curves is indexed here by the orbits of the anharmonic group acting on the roots (lambda, 1/lambda, 1 - lambda, ...):
an orbit of size c carries the weight w = 6/c.
"""

import functools
import logging
from fractions import Fraction
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

import eisenstein.core.errors as errors
import eisenstein.core.util as util
from eisenstein.core.criteria import m1_m1_pairing, merel_sum, squares_sum
from eisenstein.core.dlog import ExtendedLog, LogMap, TwoAdicLog
from eisenstein.core.fields import FieldCtx, Fq2Elem, Scalar
from eisenstein.core.isogeny import legendre_isogenous
from eisenstein.core.poly import Poly, interpolate, resultant, roots_in_fq2
from eisenstein.core.report import CheckList


_module_logger = logging.getLogger(__name__)


def hasse_poly(ctx: FieldCtx) -> Poly:
    """Squared binomials computed by the multiplicative recurrence binom(m, i+1) = binom(m, i) * (m - i)/(i + 1)"""
    N, m = ctx.N, ctx.m
    inverse = ctx.inverse_table
    binomials = np.empty(m + 1, dtype=np.int64)
    binomials[0] = 1
    for i in range(m):
        binomials[i + 1] = binomials[i] * (m - i) % N * inverse[i + 1] % N
    return Poly(binomials * binomials % N, N)


def hasse_disc_closed(ctx: FieldCtx) -> int:
    """Disc(H) = (-1)^(m(m-1)/2) / m! * prod_{k=1}^{m} k^(4k) in F_N"""
    N, m = ctx.N, ctx.m
    product, factorial = 1, 1
    for k in range(1, m + 1):
        product = product * pow(k, 4 * k, N) % N
        factorial = factorial * k % N
    value = product * pow(factorial, -1, N) % N
    return -value % N if (m * (m - 1) // 2) % 2 else value


def j_invariant(lam: Fq2Elem) -> Fq2Elem:
    """j = 256 (1 - lambda + lambda^2)^3 / (lambda^2 (1 - lambda)^2)"""
    one_minus = 1 - lam
    return 256 * (1 - lam + lam * lam) ** 3 / (lam * lam * one_minus * one_minus)


def anharmonic_orbit(lam: Fq2Elem) -> Tuple[Fq2Elem, ...]:
    """Distinct values among lambda, 1/lambda, 1 - lambda, (lambda - 1)/lambda, lambda/(lambda - 1), 1/(1 - lambda)"""
    images = {lam, 1 / lam, 1 - lam, (lam - 1) / lam, lam / (lam - 1), 1 / (1 - lam)}
    return tuple(sorted(images))


class Orbit(NamedTuple):
    """Isomorphism class of supersingular curves seen through its Legendre parameters"""
    members: Tuple[Fq2Elem, ...]
    j: Fq2Elem

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def weight(self) -> int:
        return 6 // len(self.members)

    @property
    def representative(self) -> Fq2Elem:
        return self.members[0]


class SupersingularSet:
    """
    The set L of supersingular lambda-invariants of a prime N with H'(lambda) and the orbit partition. Immutable once
    built; every structural invariant is verified by the constructor and recorded in ``checks``
    """

    def __init__(self, ctx: FieldCtx):
        self.ctx = ctx
        self.N = ctx.N
        self.hasse = hasse_poly(ctx)
        self.hasse_prime = self.hasse.derivative()
        self.checks = CheckList()

        lambdas = roots_in_fq2(self.hasse, ctx)
        util.checkpoint('supersingular roots')
        self._require('root-count', len(lambdas) == ctx.m, f"{len(lambdas)} roots, expected {ctx.m}")
        self._require('simple-roots', len(set(lambdas)) == len(lambdas), "H has a repeated root")
        self.lambdas: List[Fq2Elem] = lambdas
        self._index: Dict[Fq2Elem, int] = {lam: i for i, lam in enumerate(lambdas)}

        hprime_values = self.hasse_prime.evaluate_fq2(lambdas)
        self._require('hprime-nonzero', not any(value.is_zero() for value in hprime_values), "H'(lambda) = 0")
        self.hprime: Dict[Fq2Elem, Fq2Elem] = dict(zip(lambdas, hprime_values))

        stable = all(1 / lam in self._index and 1 - lam in self._index and lam ** ctx.N in self._index
                     for lam in lambdas)
        self._require('closure', stable, "L is not stable under 1/x, 1 - x and Frobenius")

        orbits: List[Orbit] = []
        self.orbit_of: List[int] = [-1] * len(lambdas)
        for i, lam in enumerate(lambdas):
            if self.orbit_of[i] >= 0:
                continue
            members = anharmonic_orbit(lam)
            j_values = {j_invariant(member) for member in members}
            self._require('j-constant', len(j_values) == 1, f"j is not constant on the orbit of {lam}")
            for member in members:
                self.orbit_of[self._index[member]] = len(orbits)
            orbits.append(Orbit(members, j_values.pop()))
        self.orbits = orbits
        self._require('j-distinct', len({orbit.j for orbit in orbits}) == len(orbits),
                      "two orbits share a j-invariant")
        self._require('eichler-mass', self.mass == Fraction(self.N - 1, 12), f"mass {self.mass}")

    def _require(self, id: str, condition: bool, message: str) -> None:
        self.checks.theorem(id, condition, '' if condition else message)
        if not condition:
            raise errors.InternalInvariantViolation(f"N = {self.N}: {message}")

    def __repr__(self) -> str:
        return f"SupersingularSet(N={self.N}, |L|={len(self.lambdas)}, |S|={len(self.orbits)})"

    def __len__(self) -> int:
        return len(self.lambdas)

    def __contains__(self, lam: Scalar) -> bool:
        return self.ctx.coerce(lam) in self._index

    def index(self, lam: Scalar) -> int:
        lam = self.ctx.coerce(lam)
        if lam not in self._index:
            raise errors.NotSupersingular(f"{lam} is not a supersingular lambda-invariant for N = {self.N}")
        return self._index[lam]

    @property
    def mass(self) -> Fraction:
        """sum over the classes of 1/w_E"""
        return sum((Fraction(1, orbit.weight) for orbit in self.orbits), Fraction(0))

    @property
    def weights(self) -> np.ndarray:
        return np.array([orbit.weight for orbit in self.orbits], dtype=np.int64)

    def forget(self, vector: np.ndarray, modulus: int) -> np.ndarray:
        """Forgetful map from L-indexed to class-indexed vectors"""
        result = np.zeros(len(self.orbits), dtype=np.int64)
        np.add.at(result, np.array(self.orbit_of), np.asarray(vector, dtype=np.int64) % modulus)
        return result % modulus


@functools.lru_cache(maxsize=8)
def supersingular_set(ctx: FieldCtx) -> SupersingularSet:
    return SupersingularSet(ctx)


def _legendre_j_numerators(N: int) -> Tuple[Poly, Poly]:
    """A(X) = 256 (1 - X + X^2)^3 and B(X) = X^2 (1 - X)^2, so that j(X) = y iff A - y B = 0"""
    A = Poly([256], N) * Poly([1, -1, 1], N) ** 3
    B = Poly([0, 0, 1, -2, 1], N)
    return A, B


def p_resultant_poly(ctx: FieldCtx, hasse: Optional[Poly] = None) -> Poly:
    """
    P(Y) = Res_X(H'(X), 256 (1 - X + X^2)^3 - X^2 (1 - X)^2 Y), obtained by interpolation through deg H' + 1 values of
    Y. The resultant is the usual Sylvester one: lc(H')^6 * prod over the roots a of H' of the second argument at a
    """
    N = ctx.N
    hprime = (hasse if hasse is not None else hasse_poly(ctx)).derivative()
    A, B = _legendre_j_numerators(N)
    nodes = list(range(hprime.degree + 1))
    values = []
    for y in nodes:
        # resultant(f, g) = lc(g)^deg(f) * prod_{g(b)=0} f(b)
        values.append(resultant(A - B * y, hprime))
        util.checkpoint('resultant interpolation')
    return interpolate(nodes, values, N)


def verify_p_values(ss: SupersingularSet, P: Optional[Poly] = None) -> CheckList:
    """
    At every class E with parameters F_E and weight w_E (the product below is the orbit product with multiplicity):

        256 * P(j(E)) = prod_{lambda in F_E} H'(lambda)^(w_E)
                      = (-1)^(m+1) * (lambda (1 - lambda))^(1-N) * H'(lambda)^6 * lambda^4 * (1 - lambda)^4

    for each lambda in F_E. The last factor has zero logarithm so logs of both sides agree with
    H'(lambda)^6 lambda^4 (1 - lambda)^4
    """
    ctx = ss.ctx
    N, m = ctx.N, ctx.m
    P = P if P is not None else p_resultant_poly(ctx, ss.hasse)
    checks = CheckList()
    values = P.evaluate_fq2([orbit.j for orbit in ss.orbits])
    checks.theorem('p-nonzero', not any(value.is_zero() for value in values))

    sign = 1 if (m + 1) % 2 == 0 else -1
    resultant_failures, closed_failures = [], []
    for orbit, value in zip(ss.orbits, values):
        product = ctx.one
        for lam in orbit.members:
            product = product * ss.hprime[lam] ** orbit.weight
        if 256 * value != product:
            resultant_failures.append(orbit.representative)
        for lam in orbit.members:
            one_minus = 1 - lam
            closed = sign * (lam * one_minus) ** (1 - N) * ss.hprime[lam] ** 6 * lam ** 4 * one_minus ** 4
            if closed != product:
                closed_failures.append(lam)
    checks.theorem('p-values', not resultant_failures,
                   f"failed at {resultant_failures}" if resultant_failures else f"{len(ss.orbits)} classes")
    checks.theorem('p-values-closed-form', not closed_failures,
                   f"failed at {closed_failures}" if closed_failures else f"{len(ss)} parameters")
    return checks


def _require_extended(log: ExtendedLog) -> None:
    if log.p < 5:
        raise errors.UnsupportedPrime(f"e1 on the supersingular module is constructed for p >= 5, got p = {log.p}")


def log_hprime(ss: SupersingularSet, log: ExtendedLog) -> np.ndarray:
    """Log(H'(lambda)) for lambda in L, in the order of ``ss.lambdas``"""
    return log.many([ss.hprime[lam] for lam in ss.lambdas])


def e1_element(ss: SupersingularSet, log: ExtendedLog) -> np.ndarray:
    """
    Class-indexed coefficients of e1 (modulo the line of e0): (1/12) * sum_{lambda in F_E} Log(H'(lambda)), i.e.
    (1/12) Log of the product of H' over the distinct parameters of E
    """
    _require_extended(log)
    q = log.modulus
    return ss.forget(log_hprime(ss, log), q) * pow(12, -1, q) % q


def pairing_e1_e0(ss: SupersingularSet, log: ExtendedLog) -> int:
    """e1 . e0 = sum_E coefficient_E, since [E] . [E] = w_E and e0 = sum_E [E]/w_E"""
    return int(e1_element(ss, log).sum() % log.modulus)


def pairing_e1_e1(ss: SupersingularSet, log: ExtendedLog) -> int:
    """e1 . e1 = sum_E w_E * coefficient_E^2, defined only when e1 . e0 = 0"""
    q = log.modulus
    if pairing_e1_e0(ss, log) != 0:
        raise errors.PairingUndefined("e1 . e1 depends on the choice of e1 unless e1 . e0 = 0")
    e1 = e1_element(ss, log)
    return int((ss.weights * (e1 * e1 % q) % q).sum() % q)


def pairing_checks(ss: SupersingularSet, lm: LogMap) -> Tuple[Dict[str, Optional[int]], CheckList]:
    """Pairing values of e1 and their closed forms (p >= 5)"""
    log = ExtendedLog(lm)
    _require_extended(log)
    q = log.modulus
    checks = CheckList()
    values: Dict[str, Optional[int]] = {}

    a = log_hprime(ss, log)
    b = log.many(ss.lambdas)
    S1, S2 = merel_sum(lm, 1), merel_sum(lm, 2)
    e1_e0 = pairing_e1_e0(ss, log)
    values['e1_e0'] = e1_e0
    checks.theorem('e1-e0', e1_e0 == util.fraction_mod(Fraction(S1, 3), q), f"e1.e0 = {e1_e0}, S1 = {S1}")
    checks.theorem('hprime-log-sum', int(a.sum() % q) == 4 * S1 % q, "sum Log H'(lambda) = 4 S1")

    quadratic = (3 * int((a * a % q).sum()) - 4 * int((b * b % q).sum())) % q
    if e1_e0 == 0:
        e1_e1 = pairing_e1_e1(ss, log)
        values['e1_e1'] = e1_e1
        checks.theorem('e1-e1-closed-form', 72 * e1_e1 % q == quadratic, f"72 e1.e1 = {72 * e1_e1 % q}")
        checks.theorem('higher-eichler', quadratic == 12 * S2 % q, f"{quadratic} vs 12 S2 = {12 * S2 % q}")
        m1_m1 = m1_m1_pairing(lm)
        checks.theorem('e1-e1-vs-m1-m1', e1_e1 == m1_m1, f"e1.e1 = {e1_e1}, S2/6 = {m1_m1}")
    else:
        values['e1_e1'] = None
        checks.theorem('higher-eichler', None, "S1 != 0")
    return values, checks


def _quadratic_roots(ctx: FieldCtx, a: Fq2Elem, b: Fq2Elem, c: Fq2Elem) -> Tuple[Fq2Elem, Fq2Elem]:
    """Roots of a Y^2 + b Y + c in F_{N^2} (a != 0), sorted"""
    s = ctx.sqrt(b * b - 4 * a * c)
    if s is None:
        raise errors.InternalInvariantViolation("quadratic has no root in F_{N^2}")
    y1, y2 = (-b + s) / (2 * a), (-b - s) / (2 * a)
    return (y2, y1) if y2 < y1 else (y1, y2)


def u2_action(ss: SupersingularSet, lam: Scalar) -> Tuple[Fq2Elem, Fq2Elem]:
    """Roots of phi_2(lambda, Y) = Y^2 (1 - lambda)^2 + 16 lambda Y - 16 lambda (equal roots counted twice)"""
    ctx = ss.ctx
    lam = ctx.coerce(lam)
    ss.index(lam)
    one_minus = 1 - lam
    return _quadratic_roots(ctx, one_minus * one_minus, 16 * lam, -16 * lam)


def _phi2_x_roots(ctx: FieldCtx, lam: Fq2Elem) -> Tuple[Fq2Elem, Fq2Elem]:
    """Roots in X of phi_2(X, lambda) = lambda^2 (1 - X)^2 + 16 X lambda - 16 X"""
    return _quadratic_roots(ctx, lam * lam, -2 * lam * lam + 16 * lam - 16, lam * lam)


def verify_u2_multiplicative(ss: SupersingularSet) -> Dict[Fq2Elem, bool]:
    """lambda^(N-1) H'(l1) H'(l2) = lambda^2 (lambda - 1)/4 * H'(lambda)^2 with l1, l2 the roots of phi_2(X, lambda)"""
    ctx = ss.ctx
    quarter = pow(4, -1, ctx.N)
    results = {}
    for lam in ss.lambdas:
        l1, l2 = _phi2_x_roots(ctx, lam)
        h1, h2 = ss.hasse_prime.evaluate_fq2([l1, l2])
        left = lam ** (ctx.N - 1) * h1 * h2
        right = lam * lam * (lam - 1) * quarter * ss.hprime[lam] ** 2
        results[lam] = left == right
    return results


def verify_phi2_resultant(ss: SupersingularSet) -> bool:
    """
    Res_X(H(X), phi_2(X, y)) = H(y)^2 for every y in F_N. Both sides have degree <= N - 1 in y so this is the polynomial
    identity. For y != 0 the resultant is y^(2m) * prod over the roots b of the monic quadratic g = X^2 + c X + 1 of
    H(b) = u b + v, where u X + v = H mod g (computed for all y at once)
    """
    ctx = ss.ctx
    N, m = ctx.N, ctx.m
    y = np.arange(1, N, dtype=np.int64)
    y_squared = y * y % N
    y_squared_inv = ctx.inverse_table[y_squared]
    c = (-2 * y_squared + 16 * y - 16) % N * y_squared_inv % N
    u = np.zeros_like(y)
    v = np.zeros_like(y)
    for coefficient in reversed(ss.hasse.coeffs.tolist()):
        # (u X + v) * X + coefficient modulo X^2 + c X + 1
        u, v = (v - u * c) % N, (-u + coefficient) % N
    # prod (u b + v) over the two roots: u^2 b1 b2 + u v (b1 + b2) + v^2 with b1 b2 = 1, b1 + b2 = -c
    norm = (u * u % N - u * v % N * c % N + v * v) % N
    y_power = np.array([pow(int(value), 2 * m, N) for value in y], dtype=np.int64)
    left = y_power * norm % N
    h_values = ss.hasse.evaluate_many(y)
    right = h_values * h_values % N
    # y = 0: phi_2(X, 0) = -16 X and the resultant is prod_{H(a)=0} (-16 a) = 16^m * H(0)
    at_zero = pow(16, m, N) * ss.hasse(0) % N == ss.hasse(0) ** 2 % N
    return bool(np.array_equal(left, right)) and at_zero


def e1_p3_check(ss: SupersingularSet) -> CheckList:
    """p = 3, modulus 3^(t+1): -3 * sum_{k<N} k^2 log(k) = ((N - 1)/6) log(2) + sum_lambda Log(H'(lambda))"""
    ctx = ss.ctx
    t = util.require_eisenstein(ctx.N, 3, 1)
    lm = LogMap(ctx, 3, t + 1)
    log = ExtendedLog(LogMap(ctx, 3, t))
    q = lm.modulus
    if log.modulus != q:
        raise errors.InternalInvariantViolation("extended log modulus differs from 3^(t+1)")
    left = -3 * squares_sum(lm, 1) % q
    right = ((ctx.N - 1) // 6 * lm(2) + int(log_hprime(ss, log).sum())) % q
    checks = CheckList()
    checks.theorem('e1-p3', left == right, f"{left} vs {right} mod {q}")
    return checks


def two_adic_report(ss: SupersingularSet) -> Tuple[Dict[str, int], CheckList]:
    """p = 2 data of e1: the sign epsilon_2 and the constant C_2 (mod 4), with the checks they rely on"""
    ctx = ss.ctx
    N, m = ctx.N, ctx.m
    util.require_eisenstein(N, 2, 1)
    lam2 = TwoAdicLog(ctx)
    t, q = lam2.t, lam2.modulus
    checks = CheckList()

    factorial = 1
    for k in range(1, m + 1):
        factorial = factorial * k % N
    value = lam2(ctx.element(factorial))
    checks.theorem('epsilon2-odd', value % 2 ** (t + 1) == 0 and (value >> (t + 1)) % 2 == 1,
                   f"Lambda(m!) = {value} mod {q}")
    epsilon = (value >> (t + 1)) % 4
    odd_part = (N - 1) >> (t + 2)
    c2 = pow(odd_part, -1, 4) * epsilon % 4

    hprime_logs = [lam2(ss.hprime[lam]) for lam in ss.lambdas]
    disc = hasse_disc_closed(ctx)
    sign = -1 if (m * (m - 1) // 2) % 2 else 1
    checks.theorem('lambda-disc', sum(hprime_logs) % q == lam2(ctx.element(sign * disc)),
                   "sum Lambda(H'(lambda)) = Lambda(prod H'(lambda))")
    checks.theorem('hprime-nonsquare', any(not ctx.is_square(ss.hprime[lam]) for lam in ss.lambdas))
    return dict(t=t, epsilon2=epsilon, C2=c2), checks


def hecke_u2_matrix(ss: SupersingularSet) -> np.ndarray:
    """U_2 on Z[L] as an integer matrix acting on column vectors: U_2[lambda] = [l1] + [l2]"""
    size = len(ss)
    matrix = np.zeros((size, size), dtype=np.int64)
    for i, lam in enumerate(ss.lambdas):
        for image in u2_action(ss, lam):
            matrix[ss.index(image), i] += 1
    return matrix


def frobenius_permutation(ss: SupersingularSet) -> np.ndarray:
    """U_N: [lambda] -> [lambda^N] as an index permutation"""
    return np.array([ss.index(lam ** ss.N) for lam in ss.lambdas], dtype=np.int64)


def isogeny_matrix(ss: SupersingularSet, images: Sequence[Sequence[Fq2Elem]]) -> np.ndarray:
    """T'_l on Z[L] from the lists of l-isogenous parameters of every lambda"""
    size = len(ss)
    matrix = np.zeros((size, size), dtype=np.int64)
    for i, targets in enumerate(images):
        for image in targets:
            matrix[ss.index(image), i] += 1
    return matrix


@functools.lru_cache(maxsize=16)
def isogenous_images(ss: SupersingularSet, ell: int) -> Tuple[Tuple[Fq2Elem, ...], ...]:
    """For every lambda of L (in order) the l + 1 parameters l-isogenous to it"""
    images = []
    for lam in ss.lambdas:
        images.append(tuple(legendre_isogenous(ss.ctx, lam, ell)))
        util.checkpoint(f'{ell}-isogenies')
    return tuple(images)


def verify_hprime_product(ss: SupersingularSet, ell: int) -> Dict[Fq2Elem, bool]:
    """prod_{lambda' ~_l lambda} H'(lambda') = l^(l-1) * H'(lambda)^(l+1) for every lambda of L"""
    images = isogenous_images(ss, ell)
    counts = np.zeros(len(ss), dtype=np.int64)
    results = {}
    for lam, targets in zip(ss.lambdas, images):
        product = ss.ctx.one
        for image in targets:
            if image not in ss:
                raise errors.InternalInvariantViolation(f"{ell}-isogenous parameter {image} of {lam} is not in L")
            counts[ss.index(image)] += 1
            product = product * ss.hprime[image]
        results[lam] = product == ell ** (ell - 1) * ss.hprime[lam] ** (ell + 1)
    if counts.sum() != (ell + 1) * len(ss):
        raise errors.InternalInvariantViolation(f"{ell}-isogeny correspondence has total degree {counts.sum()}")
    _module_logger.debug(f"N = {ss.N}: {ell}-isogeny correspondence hits {np.count_nonzero(counts)} of {len(ss)} "
                         "parameters")
    return results
