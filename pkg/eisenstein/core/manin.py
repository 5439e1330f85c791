"""
Relative homology H_1(X_0(N), cusps) of prime level N presented by Manin symbols, in its plus quotient, with
coefficients in Z/p^r (p >= 5).

The Manin symbol of [c:d] in P^1(Z/N) is xi([c:d]) = {b/d, a/c} for any (a b; c d) in SL_2(Z) lifting the pair. They
span the homology subject to

    x + x.sigma = 0,    x + x.tau + x.tau^2 = 0,    x = iota(x)

with sigma = (0 -1; 1 0), tau = (0 -1; 1 -1) acting on the right and iota([c:d]) = [-c:d] (complex conjugation). The
boundary map is read in the basis (0) - (infinity): xi([1:0]) = {infinity, 0} has coefficient +1, xi([0:1]) has -1
and every other symbol joins two cusps equivalent to 0.
"""

import functools
import logging
import math
import threading
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np
import sympy

import eisenstein.core.errors as errors
import eisenstein.core.util as util
from eisenstein.core.fields import FieldCtx
from eisenstein.core.linalg import matmul_mod, relation_quotient


_module_logger = logging.getLogger(__name__)

Matrix2 = Tuple[int, int, int, int]  # (a, b, c, d) for (a b; c d)

SIGMA: Matrix2 = (0, -1, 1, 0)
TAU: Matrix2 = (0, -1, 1, -1)


class P1Index:
    """
    P^1(Z/N) for a prime N enumerated as [c:1] -> c (c = 0..N-1) and [1:0] -> N. The right action of a 2x2 matrix is
    computed for all points at once
    """

    def __init__(self, ctx: FieldCtx):
        self.ctx = ctx
        self.N = N = ctx.N
        self.size = N + 1
        self.cs = np.append(np.arange(N, dtype=np.int64), 1)
        self.ds = np.append(np.ones(N, dtype=np.int64), 0)
        self.sigma = self.act(SIGMA)
        self.tau = self.act(TAU)
        self.iota = self.index_many(-self.cs, self.ds)

    def __repr__(self) -> str:
        return f"P1Index(N={self.N})"

    def __len__(self) -> int:
        return self.size

    def index(self, c: int, d: int) -> int:
        N = self.N
        c, d = c % N, d % N
        if d:
            return c * pow(d, -1, N) % N
        if not c:
            raise errors.BothZero("[0:0] is not a point of P^1")
        return N

    def index_many(self, c: np.ndarray, d: np.ndarray) -> np.ndarray:
        N = self.N
        c, d = np.asarray(c, dtype=np.int64) % N, np.asarray(d, dtype=np.int64) % N
        if np.any((c == 0) & (d == 0)):
            raise errors.BothZero("[0:0] is not a point of P^1")
        return np.where(d != 0, c * self.ctx.inverse_table[d] % N, N)

    def pair(self, i: int) -> Tuple[int, int]:
        return int(self.cs[i]), int(self.ds[i])

    def act(self, matrix: Matrix2) -> np.ndarray:
        """Indices of [c:d].M = [a c + c' d : b c + d' d] for M = (a b; c' d') over all points"""
        a, b, c, d = matrix
        return self.index_many(self.cs * a + self.ds * c, self.cs * b + self.ds * d)


def merel_matrices(n: int, N: Optional[int] = None) -> List[Matrix2]:
    """X_n = {(a b; c d) : a > b >= 0, d > c >= 0, ad - bc = n}"""
    if n < 1:
        raise errors.BadIndex(f"n should be positive, got {n}")
    if N is not None and math.gcd(n, N) != 1:
        raise errors.BadIndex(f"n = {n} is not coprime to the level {N}")
    matrices = []
    for a in range(1, n + 1):
        for d in range(1, n + 1):
            bc = a * d - n
            if bc < 0:
                continue
            if bc == 0:
                matrices.extend((a, 0, c, d) for c in range(d))
                matrices.extend((a, b, 0, d) for b in range(1, a))
                continue
            for b in sympy.divisors(bc):
                c = bc // b
                if b < a and c < d:
                    matrices.append((a, b, c, d))
    return sorted(matrices)


def genus_x0(N: int) -> int:
    """Genus of X_0(N), N prime >= 5"""
    nu2 = 1 + sympy.jacobi_symbol(-1 % N, N)
    nu3 = 1 + sympy.jacobi_symbol(-3 % N, N)
    g = Fraction(N + 1, 12) - Fraction(nu2, 4) - Fraction(nu3, 3)
    if g.denominator != 1:
        raise errors.InternalInvariantViolation(f"genus formula gives {g} for N = {N}")
    return int(g)


def _convergent_denominators(x: Fraction) -> Iterator[Tuple[int, int]]:
    """Pairs (q_{k-1}, q_k) of consecutive convergent denominators of x, starting from (q_{-1}, q_0) = (0, 1)"""
    q_prev, q = 0, 1
    yield q_prev, q
    while x.denominator != 1:
        x = 1 / (x - (x.numerator // x.denominator))
        a = x.numerator // x.denominator
        q_prev, q = q, a * q + q_prev
        yield q_prev, q


def manin_symbols_of_path(p1: P1Index, alpha: Optional[Fraction], beta: Optional[Fraction]) -> List[Tuple[int, int]]:
    """
    {alpha, beta} = {0, beta} - {0, alpha} as a signed list of (sign, P^1 index); None stands for the cusp infinity.
    With convergents p_k/q_k of x, {0, x} = xi([0:1]) + sum_k xi([q_k : (-1)^(k-1) q_{k-1}])
    """

    def from_zero(x: Optional[Fraction]) -> List[Tuple[int, int]]:
        if x is None:
            return [(1, p1.index(0, 1))]
        if x == 0:
            return []
        symbols = [(1, p1.index(0, 1))]
        for k, (q_prev, q) in enumerate(_convergent_denominators(Fraction(x))):
            symbols.append((1, p1.index(q, q_prev if k % 2 else -q_prev)))
        return symbols

    return from_zero(beta) + [(-sign, index) for sign, index in from_zero(alpha)]


class _SignedUnionFind:
    """Classes of symbols under x = s * y with s = +-1; a class containing x = -x collapses to zero"""

    def __init__(self, size: int):
        self.parent = list(range(size))
        self.sign = [1] * size  # x = sign[x] * parent[x]
        self.zero = [False] * size

    def find(self, x: int) -> Tuple[int, int]:
        sign = 1
        path = []
        while self.parent[x] != x:
            path.append(x)
            sign *= self.sign[x]
            x = self.parent[x]
        root = x
        # path compression
        running = sign
        for node in path:
            node_sign = running
            running *= self.sign[node]
            self.parent[node], self.sign[node] = root, node_sign
        return sign, root

    def union(self, x: int, y: int, s: int) -> None:
        """x = s * y"""
        sx, rx = self.find(x)
        sy, ry = self.find(y)
        if rx == ry:
            if sx != s * sy:
                self.zero[rx] = True
            return
        # rx = sx * x = sx * s * y = sx * s * sy * ry
        self.parent[rx], self.sign[rx] = ry, sx * s * sy
        self.zero[ry] = self.zero[ry] or self.zero[rx]


class ManinSpace:
    """
    V = H_1(X_0(N), cusps; Z/p^r)_+ with a basis of symbol classes. ``projection[x]`` holds the coordinates of xi(x);
    Hecke matrices act on column vectors and are cached per index
    """

    def __init__(self, ctx: FieldCtx, p: int, r: int, check_rank: bool = True):
        if p < 5:
            raise errors.UnsupportedPrime(f"the Manin presentation has {p}-torsion, use p >= 5")
        self.ctx = ctx
        self.N = ctx.N
        self.p, self.r = p, r
        self.modulus = q = p ** r
        self.p1 = p1 = P1Index(ctx)
        self.genus = genus_x0(self.N)

        classes = _SignedUnionFind(p1.size)
        for x in range(p1.size):
            classes.union(x, int(p1.sigma[x]), -1)
            classes.union(x, int(p1.iota[x]), 1)
        roots: Dict[int, int] = {}
        signs = np.zeros(p1.size, dtype=np.int64)
        columns = np.zeros(p1.size, dtype=np.int64)
        for x in range(p1.size):
            sign, root = classes.find(x)
            if classes.zero[root]:
                continue
            signs[x] = sign
            columns[x] = roots.setdefault(root, len(roots))

        relations = []
        seen = set()
        for x in range(p1.size):
            orbit = (x, int(p1.tau[x]), int(p1.tau[p1.tau[x]]))
            key = min(orbit)
            if key in seen:
                continue
            seen.add(key)
            row = np.zeros(len(roots), dtype=np.int64)
            for point in orbit:  # a fixed point of tau gives 3x = 0
                if signs[point]:
                    row[columns[point]] += signs[point]
            if np.any(row % q):
                relations.append(row % q)
        util.checkpoint('manin relations')

        free, quotient = relation_quotient(np.array(relations, dtype=np.int64).reshape(-1, len(roots)),
                                           len(roots), p, r)
        self.dimension = len(free)
        self.projection = np.zeros((p1.size, self.dimension), dtype=np.int64)
        live = signs != 0
        self.projection[live] = signs[live, None] * quotient[columns[live]] % q
        # representative symbol of every basis vector: the first symbol of its class with sign +1
        self.representatives = np.array([int(np.nonzero(live & (columns == column) & (signs == 1))[0][0])
                                         for column in free], dtype=np.int64)

        if check_rank and self.dimension != self.genus + 1:
            raise errors.RankMismatch(f"N = {self.N}: plus quotient has rank {self.dimension}, "
                                      f"expected g + 1 = {self.genus + 1}")
        self.boundary_vector = (self.projection_boundary() % q).astype(np.int64)
        self._hecke_cache: Dict[int, np.ndarray] = {}
        self._cache_lock = threading.Lock()
        _module_logger.debug(f"{self!r} built from {len(relations)} three-term relations")

    def __repr__(self) -> str:
        return f"ManinSpace(N={self.N}, p={self.p}, r={self.r}, dim={self.dimension})"

    def projection_boundary(self) -> np.ndarray:
        """Boundary functional on V from the values on the basis symbols"""
        index_10, index_01 = self.p1.index(1, 0), self.p1.index(0, 1)
        values = np.zeros(self.dimension, dtype=np.int64)
        for j, x in enumerate(self.representatives):
            values[j] = 1 if x == index_10 else -1 if x == index_01 else 0
        return values

    def project(self, vector: np.ndarray) -> np.ndarray:
        """Image in V of a Z/p^r-combination of symbols (vector indexed by P^1)"""
        return matmul_mod(np.asarray(vector, dtype=np.int64)[None, :], self.projection, self.modulus)[0]

    def lift(self, j: int) -> np.ndarray:
        """A symbol combination projecting onto the j-th basis vector"""
        vector = np.zeros(self.p1.size, dtype=np.int64)
        vector[self.representatives[j]] = 1
        return vector

    def symbol(self, c: int, d: int) -> np.ndarray:
        return self.projection[self.p1.index(c, d)].copy()

    def boundary(self, v: np.ndarray) -> int:
        """Coefficient of (0) - (infinity) in the boundary"""
        return int(np.dot(self.boundary_vector, np.asarray(v, dtype=np.int64) % self.modulus) % self.modulus)

    def _check_relations(self, images: np.ndarray, name: str) -> None:
        """``images`` holds the image of every symbol; it must factor through the relations"""
        q, p1 = self.modulus, self.p1
        residues = [
            images + images[p1.sigma],
            images + images[p1.tau] + images[p1.tau[p1.tau]],
            images - images[p1.iota]
        ]
        if any(np.any(residue % q) for residue in residues):
            raise errors.NotWellDefined(f"{name} does not respect the Manin relations for N = {self.N}")

    def _operator_from_images(self, images: np.ndarray, name: str) -> np.ndarray:
        self._check_relations(images, name)
        return np.ascontiguousarray(images[self.representatives].T % self.modulus)

    def _compute_hecke(self, n: int) -> np.ndarray:
        q = self.modulus
        images = np.zeros((self.p1.size, self.dimension), dtype=np.int64)
        for matrix in merel_matrices(n, self.N):
            images = (images + self.projection[self.p1.act(matrix)]) % q
            util.checkpoint(f'T_{n}')
        return self._operator_from_images(images, f"T_{n}")

    def hecke_tn(self, n: int) -> np.ndarray:
        """Matrix of T_n on V (acting on column vectors)"""
        with self._cache_lock:
            if n not in self._hecke_cache:
                self._hecke_cache[n] = self._compute_hecke(n)
                _module_logger.debug(f"N = {self.N}: T_{n} computed")
            return self._hecke_cache[n]

    def eta(self, ell: int) -> np.ndarray:
        """T_l - l - 1"""
        return (self.hecke_tn(ell) - (ell + 1) * np.eye(self.dimension, dtype=np.int64)) % self.modulus

    @functools.cached_property
    def atkin_lehner(self) -> np.ndarray:
        """w_N sends xi(g) = {g0, g inf} to {W g0, W g inf} with W(z) = -1/(Nz)"""
        N, q, p1 = self.N, self.modulus, self.p1
        images = np.zeros((p1.size, self.dimension), dtype=np.int64)

        def w(numerator: int, denominator: int) -> Optional[Fraction]:
            # W(numerator/denominator) = -denominator/(N numerator); None is infinity
            return None if numerator == 0 else Fraction(-denominator, N * numerator)

        for x in range(p1.size):
            c, d = p1.pair(x)
            # integral lift (a b; c d) in SL_2(Z): d = 1 -> (1 0; c 1), d = 0 -> (0 -1; 1 0)
            a, b = (1, 0) if d == 1 else (0, -1)
            for sign, index in manin_symbols_of_path(p1, w(b, d), w(a, c)):
                images[x] = (images[x] + sign * self.projection[index]) % q
        util.checkpoint('atkin-lehner')
        return self._operator_from_images(images, "w_N")

    def reduced(self, r: int) -> 'ManinSpace':
        """The same space modulo p^r' (r' <= r) without redoing the presentation"""
        if not 1 <= r <= self.r:
            raise errors.RangeError(f"r' = {r} is outside 1..{self.r}")
        if r == self.r:
            return self
        other = object.__new__(ManinSpace)
        other.__dict__.update({key: value for key, value in self.__dict__.items()
                                if key not in ('_hecke_cache', '_cache_lock', 'atkin_lehner')})
        other.r, other.modulus = r, self.p ** r
        other.projection = self.projection % other.modulus
        other.boundary_vector = self.boundary_vector % other.modulus
        other._hecke_cache = {n: matrix % other.modulus for n, matrix in self._hecke_cache.items()}
        other._cache_lock = threading.Lock()
        return other


def build_manin_space(ctx: FieldCtx, p: int, r: int) -> ManinSpace:
    util.require_eisenstein(ctx.N, p, r)
    return ManinSpace(ctx, p, r)
