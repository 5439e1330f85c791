"""
Exact linear algebra over the local ring Z/p^r. Rows are numpy int64 vectors reduced modulo p^r; a submodule is kept in
Howell form so that membership is decided by a single reduction pass
"""

from typing import List, Tuple

import numpy as np

import eisenstein.core.errors as errors
import eisenstein.core.util as util


def valuations(values: np.ndarray, p: int, r: int) -> np.ndarray:
    """p-adic valuations of residues modulo p^r (r for zero)"""
    values = np.asarray(values, dtype=np.int64) % p ** r
    result = np.full(values.shape, r, dtype=np.int64)
    nonzero = values != 0
    v = np.zeros(values.shape, dtype=np.int64)
    remaining = values.copy()
    for k in range(r):
        divisible = nonzero & (remaining % p == 0)
        if not divisible.any():
            break
        v[divisible] += 1
        remaining[divisible] //= p
    result[nonzero] = v[nonzero]
    return result


class HowellForm:
    """
    Echelon form of the submodule of (Z/p^r)^n spanned by the given rows. Pivots are chosen with minimal p-valuation
    and normalized to p^v; for each non-unit pivot the row multiplied by p^(r-v) is put back into the pool, which
    makes the echelon rows span every element of the module that vanishes on the first columns
    """

    def __init__(self, rows: np.ndarray, p: int, r: int):
        self.p, self.r = p, r
        self.modulus = q = p ** r
        rows = np.atleast_2d(np.asarray(rows, dtype=np.int64)) % q
        self.ncols = rows.shape[1]
        pool = rows[np.any(rows, axis=1)]
        pivot_rows: List[np.ndarray] = []
        self.pivots: List[Tuple[int, int]] = []  # (column, valuation)

        for col in range(self.ncols):
            if not len(pool):
                break
            column = pool[:, col]
            candidates = np.nonzero(column)[0]
            if not len(candidates):
                continue
            vals = valuations(column[candidates], p, r)
            best = candidates[int(np.argmin(vals))]
            v = int(vals.min())
            pivot = pool[best]
            unit = int(pivot[col]) // p ** v
            pivot = pivot * pow(unit, -1, q) % q  # pivot entry is now p^v
            pool = np.delete(pool, best, axis=0)
            if len(pool):
                factors = pool[:, col] // p ** v  # every remaining entry is divisible by p^v
                pool = (pool - np.outer(factors, pivot)) % q
            # entries above the pivot are reduced modulo p^v
            for i, previous in enumerate(pivot_rows):
                factor = int(previous[col]) // p ** v
                if factor:
                    pivot_rows[i] = (previous - factor * pivot) % q
            if v > 0:
                pool = np.vstack([pool.reshape(-1, self.ncols), (p ** (r - v) * pivot % q)[None, :]])
            pool = pool[np.any(pool, axis=1)]
            pivot_rows.append(pivot)
            self.pivots.append((col, v))

        self.rows = np.array(pivot_rows, dtype=np.int64).reshape(len(pivot_rows), self.ncols)

    def __repr__(self) -> str:
        return f"HowellForm(pivots={len(self.pivots)}, length={self.length}, modulus={self.modulus})"

    @property
    def length(self) -> int:
        """log_p of the cardinality of the module"""
        return sum(self.r - v for _, v in self.pivots)

    @property
    def is_free(self) -> bool:
        return all(v == 0 for _, v in self.pivots)

    def reduce(self, vector: np.ndarray) -> np.ndarray:
        """Remainder of the vector after subtracting everything the pivots allow"""
        vector = np.asarray(vector, dtype=np.int64) % self.modulus
        for (col, v), row in zip(self.pivots, self.rows):
            factor = int(vector[col]) // self.p ** v
            if factor:
                vector = (vector - factor * row) % self.modulus
        return vector

    def contains(self, vector: np.ndarray) -> bool:
        return not np.any(self.reduce(vector))

    def same_module(self, other: 'HowellForm') -> bool:
        return self.length == other.length and all(other.contains(row) for row in self.rows)


def relation_quotient(relations: np.ndarray, ncols: int, p: int, r: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Presentation of (Z/p^r)^n / <relations> as a free module. Returns the free columns and the projection matrix
    (n x |free|) sending a generator to its coordinates. Raises RankMismatch when the quotient has torsion
    """
    q = p ** r
    if len(relations):
        form = HowellForm(relations, p, r)
        if not form.is_free:
            raise errors.RankMismatch("relation module has a non-unit pivot, the quotient is not free")
        pivot_cols = [col for col, _ in form.pivots]
        rows = form.rows
    else:
        pivot_cols, rows = [], np.zeros((0, ncols), dtype=np.int64)
    free = np.array(sorted(set(range(ncols)) - set(pivot_cols)), dtype=np.int64)
    projection = np.zeros((ncols, len(free)), dtype=np.int64)
    projection[free, np.arange(len(free))] = 1
    # unit pivots with everything above and below cleared: x_pivot = -sum_free row[free] * x_free
    for col, row in zip(pivot_cols, rows):
        projection[col] = -row[free] % q
    return free, projection


def row_space_mod_p(matrix: np.ndarray, p: int) -> np.ndarray:
    """Reduced echelon rows of the row space over F_p"""
    if not len(matrix):
        return np.zeros((0, matrix.shape[1] if matrix.ndim == 2 else 0), dtype=np.int64)
    return HowellForm(matrix, p, 1).rows


def kernel_mod_p(matrix: np.ndarray, p: int) -> np.ndarray:
    """Rows spanning {v : matrix @ v = 0} over F_p"""
    matrix = np.atleast_2d(np.asarray(matrix, dtype=np.int64)) % p
    n = matrix.shape[1]
    form = HowellForm(matrix, p, 1) if np.any(matrix) else None
    pivots = [col for col, _ in form.pivots] if form else []
    free = [col for col in range(n) if col not in set(pivots)]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for i, col in enumerate(free):
        basis[i, col] = 1
        for pivot_col, row in zip(pivots, form.rows if form else []):
            basis[i, pivot_col] = -row[col] % p
    return basis


def matmul_mod(a: np.ndarray, b: np.ndarray, modulus: int) -> np.ndarray:
    """Matrix product modulo m, accumulated column by column when a plain int64 product could overflow"""
    inner = a.shape[-1]
    if (modulus - 1) ** 2 * max(inner, 1) < 2 ** 63:
        return (a % modulus) @ (b % modulus) % modulus
    result = np.zeros((a.shape[0], b.shape[1]) if b.ndim == 2 else a.shape[0], dtype=np.int64)
    for k in range(inner):
        result = (result + np.multiply.outer(a[:, k] % modulus, b[k] % modulus) % modulus) % modulus
        util.checkpoint('modular product')
    return result
