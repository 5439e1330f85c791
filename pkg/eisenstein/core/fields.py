"""
Prime field F_N and its quadratic extension F_{N^2} = F_N[x]/(x^2 - nr) where nr is the smallest quadratic non-residue.

Every choice made here (non-residue, generators, square roots) is the smallest one in a fixed order so that all derived
values are reproducible from N alone.
"""

import functools
import logging
from typing import Optional, Tuple, Union

import numpy as np
import sympy

import eisenstein.core.errors as errors
import eisenstein.core.settings


_module_logger = logging.getLogger(__name__)


class Fq2Elem:
    """Element a + b*x of F_{N^2}. Immutable; ints are coerced into the prime field where it makes sense"""

    __slots__ = ('a', 'b', 'ctx')

    def __init__(self, ctx: 'FieldCtx', a: int, b: int = 0):
        self.ctx = ctx
        self.a = int(a) % ctx.N
        self.b = int(b) % ctx.N

    def _coerce(self, other) -> Optional['Fq2Elem']:
        if isinstance(other, Fq2Elem):
            return other
        if isinstance(other, (int, np.integer)):
            return Fq2Elem(self.ctx, int(other))
        return None

    @property
    def coordinates(self) -> Tuple[int, int]:
        return self.a, self.b

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def in_prime_field(self) -> bool:
        return self.b == 0

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        return other is not None and self.a == other.a and self.b == other.b

    def __hash__(self) -> int:
        return hash((self.a, self.b))

    def __lt__(self, other: 'Fq2Elem') -> bool:
        return (self.a, self.b) < (other.a, other.b)

    def __repr__(self) -> str:
        return f"{self.a}+{self.b}x" if self.b else f"{self.a}"

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return Fq2Elem(self.ctx, self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return Fq2Elem(self.ctx, -self.a, -self.b)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return Fq2Elem(self.ctx, self.a - other.a, self.b - other.b)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self.ctx.mul_pair((self.a, self.b), (other.a, other.b))
        return Fq2Elem(self.ctx, a, b)

    __rmul__ = __mul__

    def norm(self) -> int:
        """N_{F_{N^2}/F_N}: (a + bx)(a - bx)"""
        return (self.a * self.a - self.ctx.nonresidue * self.b * self.b) % self.ctx.N

    def frobenius(self) -> 'Fq2Elem':
        return Fq2Elem(self.ctx, self.a, -self.b)

    def inverse(self) -> 'Fq2Elem':
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("0 is not invertible in F_{N^2}")
        n_inv = pow(n, -1, self.ctx.N)
        return Fq2Elem(self.ctx, self.a * n_inv, -self.b * n_inv)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, exponent: int) -> 'Fq2Elem':
        exponent = int(exponent)
        base = self if exponent >= 0 else self.inverse()
        a, b = self.ctx.pow_pair((base.a, base.b), abs(exponent))
        return Fq2Elem(self.ctx, a, b)


Scalar = Union[int, Fq2Elem]


class FieldCtx:
    """
    Arithmetic context of a prime level N. Holds the deterministic choices and a few lookup tables used by the
    vectorized code (powers of the primitive root, discrete log indices, inverses)
    """

    def __init__(self, N: int):
        if isinstance(N, bool) or not isinstance(N, (int, np.integer)) or N < 2:
            raise errors.BadPrime(f"N should be an integer >= 5, got {N!r}")
        N = int(N)
        if not sympy.isprime(N):
            raise errors.CompositeModulus(f"{N} is not a prime")
        if N < 5:
            raise errors.BadPrime(f"N = {N} is too small, N >= 5 is required")

        self.N = N
        self.m = (N - 1) // 2
        self.nonresidue = next(a for a in range(2, N) if pow(a, self.m, N) == N - 1)
        self.gen_fn = int(sympy.primitive_root(N))
        self.dtype = np.int64 if N < eisenstein.core.settings.int64_modulus_bound else object

    def __repr__(self) -> str:
        return f"FieldCtx(N={self.N})"

    # Raw (a, b) pair arithmetic, shared by Fq2Elem and the search loops below
    def mul_pair(self, u: Tuple[int, int], v: Tuple[int, int]) -> Tuple[int, int]:
        N = self.N
        return (u[0] * v[0] + self.nonresidue * u[1] * v[1]) % N, (u[0] * v[1] + u[1] * v[0]) % N

    def pow_pair(self, u: Tuple[int, int], exponent: int) -> Tuple[int, int]:
        result = (1, 0)
        while exponent:
            if exponent & 1:
                result = self.mul_pair(result, u)
            u = self.mul_pair(u, u)
            exponent >>= 1
        return result

    def element(self, a: int, b: int = 0) -> Fq2Elem:
        return Fq2Elem(self, a, b)

    def coerce(self, z: Scalar) -> Fq2Elem:
        return z if isinstance(z, Fq2Elem) else Fq2Elem(self, int(z))

    @property
    def zero(self) -> Fq2Elem:
        return Fq2Elem(self, 0)

    @property
    def one(self) -> Fq2Elem:
        return Fq2Elem(self, 1)

    @property
    def x(self) -> Fq2Elem:
        """The adjoined square root of the non-residue"""
        return Fq2Elem(self, 0, 1)

    @functools.cached_property
    def gen_fn2(self) -> Fq2Elem:
        """Smallest generator of F_{N^2}^x, scanning b = 1, 2, ... and then a = 0, 1, ..."""
        order = self.N * self.N - 1
        cofactors = [order // f for f in sympy.primefactors(order)]
        for b in range(1, self.N):
            for a in range(self.N):
                if all(self.pow_pair((a, b), e) != (1, 0) for e in cofactors):
                    return Fq2Elem(self, a, b)
        raise errors.InternalInvariantViolation(f"F_{self.N}^2 has no generator")  # cyclic group, unreachable

    @functools.cached_property
    def power_table(self) -> np.ndarray:
        """power_table[i] = gen_fn^i for i = 0..N-2"""
        table = np.empty(self.N - 1, dtype=np.int64)
        x = 1
        for i in range(self.N - 1):
            table[i] = x
            x = x * self.gen_fn % self.N
        return table

    @functools.cached_property
    def index_table(self) -> np.ndarray:
        """index_table[gen_fn^i] = i; index_table[0] = -1"""
        table = np.full(self.N, -1, dtype=np.int64)
        table[self.power_table] = np.arange(self.N - 1, dtype=np.int64)
        return table

    @functools.cached_property
    def inverse_table(self) -> np.ndarray:
        """inverse_table[x] = 1/x mod N; inverse_table[0] = 0"""
        table = np.zeros(self.N, dtype=np.int64)
        table[1:] = self.power_table[(-self.index_table[1:]) % (self.N - 1)]
        return table

    def legendre(self, a: int) -> int:
        a %= self.N
        if a == 0:
            return 0
        return 1 if pow(a, self.m, self.N) == 1 else -1

    def is_square(self, z: Scalar) -> bool:
        """Squares of F_{N^2}; every element of F_N is one"""
        z = self.coerce(z)
        return z.is_zero() or pow(z.norm(), self.m, self.N) == 1

    def is_power(self, z: Scalar, k: int) -> bool:
        """Whether z is a k-th power in F_{N^2}"""
        z = self.coerce(z)
        if z.is_zero():
            return True
        order = self.N * self.N - 1
        return z ** (order // sympy.gcd(k, order)) == 1

    def sqrt(self, z: Scalar) -> Optional[Fq2Elem]:
        """A square root in F_{N^2} (the one with the smaller (a, b) is not guaranteed), None for non-squares"""
        z = self.coerce(z)
        N = self.N
        if z.is_zero():
            return self.zero
        if z.in_prime_field():
            if self.legendre(z.a) == 1:
                return Fq2Elem(self, sympy.sqrt_mod(z.a, N))
            # z = nr * (z/nr) with z/nr a square in F_N
            return Fq2Elem(self, 0, sympy.sqrt_mod(z.a * pow(self.nonresidue, -1, N) % N, N))
        if not self.is_square(z):
            return None
        s = int(sympy.sqrt_mod(z.norm(), N))
        half = (N + 1) // 2
        for s_ in (s, N - s):
            # (c + dx)^2 = z  <=>  c^2 = (a +- sqrt(norm))/2, d = b/(2c)
            c = sympy.sqrt_mod((z.a + s_) * half % N, N)
            if c is None or c == 0:
                continue
            root = Fq2Elem(self, c, z.b * pow(2 * int(c), -1, N))
            if root * root == z:
                return root
        raise errors.InternalInvariantViolation(f"square root of the square {z} was not found")


@functools.lru_cache(maxsize=64)
def field_ctx_new(N: int) -> FieldCtx:
    """Shared (cached) context for the level N. Raises BadPrime / CompositeModulus on invalid levels"""
    return FieldCtx(N)
