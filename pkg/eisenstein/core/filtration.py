"""
Depth of the Eisenstein element in the filtration V > I V > I^2 V > ... of the plus homology modulo p^r, where I is
generated by eta_l = T_l - l - 1. The depth n(r,p) = max{k : m0+ in I^k V} gives g_p = n(1,p) and, taken over
r = 1..t, the Newton data of the completed Hecke algebra.
"""

import dataclasses
import logging
from typing import Iterable, List, Optional, Tuple

import numpy as np
import sympy

import eisenstein.core.errors as errors
import eisenstein.core.util as util
from eisenstein.core.elements import f0_element
from eisenstein.core.fields import FieldCtx
from eisenstein.core.linalg import HowellForm, matmul_mod, row_space_mod_p
from eisenstein.core.manin import ManinSpace, build_manin_space
from eisenstein.core.report import CheckList


_module_logger = logging.getLogger(__name__)

DEFAULT_GENERATORS = (2, 3, 5, 7, 11, 13)
DEFAULT_MAX_PRIME = 97

ChainSignature = Tuple[Tuple[int, ...], int]


@dataclasses.dataclass
class EisensteinFiltration:
    N: int
    p: int
    r: int
    e0: np.ndarray
    generators: List[int]  # primes l of the eta_l in use
    with_atkin_lehner: bool
    lengths: List[int]  # log_p |I^k V| for k = 0..n+1
    n: int
    kernel_dimensions: Optional[List[int]] = None  # dim V[I^k], k = 1..n+2 (r = 1 only)
    checks: CheckList = dataclasses.field(default_factory=CheckList)

    @property
    def signature(self) -> ChainSignature:
        return tuple(self.lengths), self.n

    def to_dict(self) -> dict:
        return dict(n=self.n, generators=self.generators, with_atkin_lehner=self.with_atkin_lehner,
                    lengths=self.lengths, kernel_dimensions=self.kernel_dimensions)


def _ideal_generators(ms: ManinSpace, primes: Iterable[int], atkin_lehner: bool) -> List[np.ndarray]:
    matrices = [ms.eta(ell) for ell in primes]
    if atkin_lehner:
        matrices.append((ms.atkin_lehner + np.eye(ms.dimension, dtype=np.int64)) % ms.modulus)
    return matrices


def _chain(ms: ManinSpace, e0: np.ndarray, matrices: List[np.ndarray]) -> ChainSignature:
    """Lengths of W_0 = V, W_k = sum_eta eta W_(k-1) up to the first module missing e0, and the depth of e0"""
    p, r, q = ms.p, ms.r, ms.modulus
    current = HowellForm(np.eye(ms.dimension, dtype=np.int64), p, r)
    lengths = [current.length]
    depth = 0
    while True:
        # rows are elements of W_k, eta acts on columns: (eta v)^T = v^T eta^T
        images = np.vstack([matmul_mod(current.rows, eta.T, q) for eta in matrices])
        following = HowellForm(images, p, r)
        lengths.append(following.length)
        util.checkpoint('filtration step')
        if not following.contains(e0):
            return tuple(lengths), depth
        if following.same_module(current):
            raise errors.InternalInvariantViolation(
                f"N = {ms.N}, p^r = {q}: the filtration stabilizes at step {depth + 1} with m0+ still inside")
        depth += 1
        current = following


def kernel_dimensions(ms: ManinSpace, matrices: List[np.ndarray], steps: int) -> List[int]:
    """dim_Fp V[I^k] for k = 1..steps, V taken modulo p"""
    p = ms.p
    matrices = [eta % p for eta in matrices]
    current = np.eye(ms.dimension, dtype=np.int64)
    dimensions = []
    for _ in range(steps):
        products = np.vstack([current @ eta % p for eta in matrices])
        current = row_space_mod_p(products, p)
        dimensions.append(ms.dimension - len(current))
        util.checkpoint('kernel chain')
    return dimensions


def _next_generator(primes: List[int], N: int) -> int:
    ell = sympy.nextprime(max(primes))
    return sympy.nextprime(ell) if ell == N else ell


def eisenstein_filtration(ms: ManinSpace, generators: Iterable[int] = DEFAULT_GENERATORS,
                          max_prime: int = DEFAULT_MAX_PRIME, with_atkin_lehner: bool = False,
                          e0: Optional[np.ndarray] = None) -> EisensteinFiltration:
    """
    Depth of m0+ in the I-adic filtration of V. The generator list (N removed) is enlarged with the following primes
    until two consecutive enlargements leave the whole chain unchanged; at r = 1 the result is cross-checked against
    the growth of the kernels V[I^k]
    """
    checks = CheckList()
    if e0 is None:
        e0 = f0_element(ms, checks=checks)
    primes = [ell for ell in generators if ell != ms.N]
    if not primes:
        raise errors.RangeError("no generator prime left after removing the level")

    if with_atkin_lehner:
        w = ms.atkin_lehner
        q = ms.modulus
        checks.theorem('atkin-lehner-involution',
                       np.array_equal(matmul_mod(w, w, q), np.eye(ms.dimension, dtype=np.int64) % q))
        checks.theorem('atkin-lehner-e0', not np.any((w @ e0 + e0) % q), "(w_N + 1) m0+ = 0")
        if not checks.succeed:
            raise errors.VerificationFailed(f"Atkin-Lehner checks failed for N = {ms.N}:\n{checks}")

    signature = _chain(ms, e0, _ideal_generators(ms, primes, with_atkin_lehner))
    unchanged = 0
    while unchanged < 2:
        ell = _next_generator(primes, ms.N)
        if ell > max_prime:
            raise errors.GeneratorInstability(
                f"N = {ms.N}, p^r = {ms.modulus}: the filtration is still changing with generators up to "
                f"{max(primes)} (bound {max_prime})")
        primes.append(ell)
        enlarged = _chain(ms, e0, _ideal_generators(ms, primes, with_atkin_lehner))
        if enlarged == signature:
            unchanged += 1
        else:
            _module_logger.debug(f"N = {ms.N}: adding T_{ell} changed the filtration {signature} -> {enlarged}")
            signature, unchanged = enlarged, 0
    lengths, n = signature

    dimensions = None
    if ms.r == 1:
        dimensions = kernel_dimensions(ms, _ideal_generators(ms, primes, with_atkin_lehner), n + 2)
        expected = [min(k, n + 1) for k in range(1, n + 3)]
        checks.theorem('kernel-growth', dimensions == expected, f"dim V[I^k] = {dimensions}, expected {expected}")
        if not checks.succeed:
            raise errors.VerificationFailed(f"N = {ms.N}, p = {ms.p}: image chain gives n = {n} but the kernel chain "
                                            f"disagrees:\n{checks}")

    _module_logger.debug(f"N = {ms.N}, p^r = {ms.modulus}: n = {n}, lengths {list(lengths)}, generators {primes}")
    return EisensteinFiltration(N=ms.N, p=ms.p, r=ms.r, e0=e0, generators=primes, with_atkin_lehner=with_atkin_lehner,
                                lengths=list(lengths), n=n, kernel_dimensions=dimensions, checks=checks)


@dataclasses.dataclass
class NewtonInvariants:
    N: int
    p: int
    t: int
    depths: List[int]  # n(r,p) for r = 1..t
    z: List[int]  # z_i = max{r : n(r,p) >= i} for i = 1..n(1,p)

    @property
    def g_p(self) -> int:
        return self.depths[0]

    def to_dict(self) -> dict:
        return dict(t=self.t, g_p=self.g_p, depths=self.depths, z_profile=self.z)


def newton_invariants(ctx: FieldCtx, p: int, generators: Iterable[int] = DEFAULT_GENERATORS,
                      max_prime: int = DEFAULT_MAX_PRIME, with_atkin_lehner: bool = False,
                      space: Optional[ManinSpace] = None) -> NewtonInvariants:
    """n(r,p) for r = 1..t from a single presentation modulo p^t, and the z-profile it determines"""
    t = util.require_eisenstein(ctx.N, p, 1)
    ms = space if space is not None else build_manin_space(ctx, p, t)
    depths = []
    for r in range(1, t + 1):
        filtration = eisenstein_filtration(ms.reduced(r), generators, max_prime, with_atkin_lehner)
        depths.append(filtration.n)
    if any(later > earlier for earlier, later in zip(depths, depths[1:])):
        raise errors.InternalInvariantViolation(f"N = {ctx.N}, p = {p}: n(r,p) = {depths} increases with r")
    z = [max(r for r, depth in enumerate(depths, start=1) if depth >= i) for i in range(1, depths[0] + 1)]
    return NewtonInvariants(N=ctx.N, p=p, t=t, depths=depths, z=z)
