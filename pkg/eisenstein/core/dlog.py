"""
Discrete logarithms. ``LogMap`` is the surjection F_N^x -> Z/p^r normalized by the primitive root (log(gen) = 1). Values
come from a lookup table filled by walking the powers of the generator; the Pohlig-Hellman solver is kept for single
queries and as an independent check of the table.

``ExtendedLog`` is the extension to F_{N^2}^x through the norm (defined for odd p), ``TwoAdicLog`` is the 2-adic
variant used when p = 2.
"""

import math
from typing import Callable, Optional, Sequence, TypeVar

import numpy as np
import sympy

import eisenstein.core.errors as errors
import eisenstein.core.util as util
from eisenstein.core.fields import FieldCtx, Fq2Elem, Scalar


G = TypeVar('G')


def baby_step_giant_step(g: G, h: G, order: int, mul: Callable[[G, G], G], power: Callable[[G, int], G],
                         key: Callable[[G], object] = lambda x: x) -> int:
    """Smallest x in [0, order) with g^x = h; g is assumed to have the given order"""
    m = math.isqrt(order - 1) + 1 if order > 1 else 1
    table = {}
    current = power(g, 0)
    for j in range(m):
        table.setdefault(key(current), j)
        current = mul(current, g)
    giant = power(g, -m % order) if order > 1 else current
    gamma = h
    for i in range(m):
        j = table.get(key(gamma))
        if j is not None:
            return (i * m + j) % order
        gamma = mul(gamma, giant)
    raise ValueError("logarithm does not exist (h is not in the subgroup generated by g)")


def pohlig_hellman_prime_power(g: G, h: G, p: int, e: int, mul: Callable[[G, G], G],
                               power: Callable[[G, int], G], key: Callable[[G], object] = lambda x: x) -> int:
    """
    x mod p^e with g^x = h for g of order exactly p^e, digit by digit: each p-adic digit is a discrete log in the
    subgroup of order p
    """
    gamma = power(g, p ** (e - 1))  # order p
    x = 0
    for k in range(e):
        # strip the known digits, project onto the order-p subgroup
        h_k = power(mul(power(g, -x % p ** e), h), p ** (e - 1 - k))
        digit = baby_step_giant_step(gamma, h_k, p, mul, power, key)
        x += digit * p ** k
    return x


class LogMap:
    """
    log: F_N^x -> Z/p^r, log(gen_fn) = 1. Any r with p^r | N - 1 is accepted so the lemmas and the small-prime
    criteria can use lifted moduli; ``make_log`` adds the Eisenstein restrictions
    """

    def __init__(self, ctx: FieldCtx, p: int, r: int, generator: Optional[int] = None):
        N = ctx.N
        if not sympy.isprime(p):
            raise errors.UnsupportedPrime(f"{p} is not a prime")
        if r < 1 or (N - 1) % p ** r:
            raise errors.RangeError(f"{p}^{r} does not divide N - 1 = {N - 1}")
        self.ctx = ctx
        self.p = p
        self.r = r
        self.modulus = p ** r
        self.t = util.eisenstein_valuation(N, p)
        self.v = util.valuation(N * N - 1, p)
        self.max_r = util.valuation(N - 1, p)
        self.generator = ctx.gen_fn if generator is None else generator % N
        if sympy.n_order(self.generator, N) != N - 1:
            raise ValueError(f"{generator} is not a primitive root modulo {N}")

        table = np.full(N, -1, dtype=np.int64)
        if self.generator == ctx.gen_fn:
            table[ctx.power_table] = np.arange(N - 1, dtype=np.int64) % self.modulus
        else:
            x = 1
            for k in range(N - 1):
                table[x] = k % self.modulus
                x = x * self.generator % N
        self.table = table

    def __repr__(self) -> str:
        return f"LogMap(N={self.ctx.N}, p={self.p}, r={self.r})"

    def __call__(self, x: int) -> int:
        value = int(self.table[int(x) % self.ctx.N])
        if value < 0:
            raise ZeroDivisionError("log(0) is undefined")
        return value

    def many(self, xs: Sequence[int]) -> np.ndarray:
        values = self.table[np.asarray(xs, dtype=np.int64) % self.ctx.N]
        if (values < 0).any():
            raise ZeroDivisionError("log(0) is undefined")
        return values

    @property
    def values(self) -> np.ndarray:
        """log(k) for k = 1..N-1"""
        return self.table[1:]

    def solve(self, x: int) -> int:
        """On-demand Pohlig-Hellman solution, independent of the table"""
        N, p, r = self.ctx.N, self.p, self.r
        x %= N
        if x == 0:
            raise ZeroDivisionError("log(0) is undefined")
        cofactor = (N - 1) // p ** r
        g = pow(self.generator, cofactor, N)  # order exactly p^r
        h = pow(x, cofactor, N)
        return pohlig_hellman_prime_power(g, h, p, r, lambda u, w: u * w % N, lambda u, k: pow(u, k, N))

    def lift(self, r: int) -> 'LogMap':
        """Same generator, another modulus (any r with p^r | N - 1)"""
        return LogMap(self.ctx, self.p, r, generator=self.generator)


def make_log(ctx: FieldCtx, p: int, r: int) -> LogMap:
    """LogMap for an Eisenstein pair: p | numerator((N - 1)/12) and 1 <= r <= t"""
    util.require_eisenstein(ctx.N, p, r)
    return LogMap(ctx, p, r)


class ExtendedLog:
    """
    Log: F_{N^2}^x -> Z/p^s, Log(z) = log(Norm z)/(N + 1). For p >= 5 the modulus is p^r; for p = 3 the norm loses one
    power of 3 (N + 1 = 2 mod 3 but the restriction picks up the lifted log) and the extension is taken at 3^(r+1)
    """

    def __init__(self, base: LogMap):
        if base.p == 2:
            raise errors.UnsupportedPrime("the norm extension of log is not defined for p = 2, use TwoAdicLog")
        if base.p == 3:
            base = base.lift(base.r + 1)
        self.base = base
        self.ctx = base.ctx
        self.p = base.p
        self.modulus = base.modulus
        self._scale = pow(self.ctx.N + 1, -1, self.modulus)

    def __repr__(self) -> str:
        return f"ExtendedLog(N={self.ctx.N}, modulus={self.modulus})"

    def __call__(self, z: Scalar) -> int:
        z = self.ctx.coerce(z)
        if z.is_zero():
            raise ZeroDivisionError("Log(0) is undefined")
        return self._scale * self.base(z.norm()) % self.modulus

    def many(self, elements: Sequence[Fq2Elem]) -> np.ndarray:
        N, nr = self.ctx.N, self.ctx.nonresidue
        a = np.array([z.a for z in elements], dtype=np.int64)
        b = np.array([z.b for z in elements], dtype=np.int64)
        norms = (a * a % N - nr * (b * b % N) % N) % N
        return self._scale * self.base.many(norms) % self.modulus

    def is_surjective(self) -> bool:
        return self(self.ctx.gen_fn2) % self.p != 0


def extend_log_fq2(lm: LogMap) -> ExtendedLog:
    return ExtendedLog(lm)


class TwoAdicLog:
    """
    Lambda: F_{N^2}^x -> Z/2^(t+3) for N = 1 mod 8, t = v_2(N - 1) - 2. The 2-Sylow of F_{N^2}^x is cyclic of order
    2^(t+3); the map is the discrete log there, normalized so that Lambda(gen_fn) = 2 and hence the restriction to F_N^x
    is twice the log at modulus 2^(t+2)
    """

    def __init__(self, ctx: FieldCtx):
        N = ctx.N
        if N % 8 != 1:
            raise errors.UnsupportedPrime(f"2-adic log needs N = 1 mod 8, got N = {N}")
        self.ctx = ctx
        self.t = util.valuation(N - 1, 2) - 2
        self.exponent = self.t + 3
        self.modulus = 2 ** self.exponent
        self._cofactor = (N * N - 1) // self.modulus
        self._gamma = ctx.gen_fn2 ** self._cofactor
        a = self._dlog(ctx.element(ctx.gen_fn) ** self._cofactor)
        if a % 4 != 2:
            raise errors.InternalInvariantViolation(f"gen_fn projects to 2-adic index {a}, expected 2 * odd")
        self._normalizer = pow(a // 2, -1, self.modulus)

    def _dlog(self, y: Fq2Elem) -> int:
        return pohlig_hellman_prime_power(self._gamma, y, 2, self.exponent, lambda u, w: u * w,
                                          lambda u, k: u ** k, key=lambda u: u.coordinates)

    def __call__(self, z: Fq2Elem) -> int:
        z = self.ctx.coerce(z)
        if z.is_zero():
            raise ZeroDivisionError("Lambda(0) is undefined")
        return self._normalizer * self._dlog(z ** self._cofactor) % self.modulus
