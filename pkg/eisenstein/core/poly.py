"""
Dense univariate polynomials over F_N (``Poly``) and over F_{N^2} (``Fq2Poly``) backed by numpy arrays of coefficients
in ascending order. Root finding (Cantor-Zassenhaus) is done over F_{N^2} since supersingular parameters live there.
"""

import logging
from typing import List, Sequence, Tuple, Union

import numpy as np

import eisenstein.core.errors as errors
import eisenstein.core.util as util
from eisenstein.core.fields import FieldCtx, Fq2Elem, Scalar


_module_logger = logging.getLogger(__name__)


def _trim(coeffs: np.ndarray) -> np.ndarray:
    nonzero = np.flatnonzero(coeffs if coeffs.ndim == 1 else coeffs.any(axis=1))
    return coeffs[:nonzero[-1] + 1] if nonzero.size else coeffs[:0]


class Poly:
    """Polynomial over F_N; ``coeffs[i]`` is the coefficient of X^i. Zero polynomial has degree -1"""

    __slots__ = ('N', 'coeffs')

    def __init__(self, coeffs: Union[Sequence[int], np.ndarray], N: int):
        self.N = N
        dtype = np.int64 if N < (1 << 21) else object
        self.coeffs = _trim(np.asarray(coeffs, dtype=dtype) % N)

    @classmethod
    def constant(cls, c: int, N: int) -> 'Poly':
        return cls([c], N)

    @classmethod
    def monomial(cls, k: int, N: int, c: int = 1) -> 'Poly':
        coeffs = [0] * (k + 1)
        coeffs[k] = c
        return cls(coeffs, N)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> int:
        return int(self.coeffs[-1]) if len(self.coeffs) else 0

    def is_zero(self) -> bool:
        return len(self.coeffs) == 0

    def __repr__(self) -> str:
        return f"Poly({[int(c) for c in self.coeffs]}, N={self.N})"

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, np.integer)):
            other = Poly.constant(int(other), self.N)
        return isinstance(other, Poly) and self.N == other.N and np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash((self.N, tuple(int(c) for c in self.coeffs)))

    def _operand(self, other) -> 'Poly':
        return other if isinstance(other, Poly) else Poly.constant(int(other), self.N)

    def __add__(self, other) -> 'Poly':
        other = self._operand(other)
        size = max(len(self.coeffs), len(other.coeffs))
        result = np.zeros(size, dtype=self.coeffs.dtype)
        result[:len(self.coeffs)] += self.coeffs
        result[:len(other.coeffs)] += other.coeffs
        return Poly(result, self.N)

    __radd__ = __add__

    def __neg__(self) -> 'Poly':
        return Poly(-self.coeffs, self.N)

    def __sub__(self, other) -> 'Poly':
        return self + (-self._operand(other))

    def __rsub__(self, other) -> 'Poly':
        return self._operand(other) - self

    def __mul__(self, other) -> 'Poly':
        if isinstance(other, (int, np.integer)):
            return Poly(self.coeffs * (int(other) % self.N), self.N)
        if self.is_zero() or other.is_zero():
            return Poly([], self.N)
        return Poly(np.convolve(self.coeffs, other.coeffs), self.N)

    __rmul__ = __mul__

    def monic(self) -> 'Poly':
        if self.is_zero():
            return self
        return self * pow(self.lc, -1, self.N)

    def derivative(self) -> 'Poly':
        if self.degree < 1:
            return Poly([], self.N)
        return Poly(self.coeffs[1:] * np.arange(1, len(self.coeffs), dtype=self.coeffs.dtype), self.N)

    def __call__(self, x: int) -> int:
        """Horner evaluation at an element of F_N"""
        result = 0
        for c in reversed(self.coeffs.tolist()):
            result = (result * x + c) % self.N
        return result

    def evaluate_many(self, xs: np.ndarray) -> np.ndarray:
        """Vectorized Horner evaluation at many points of F_N"""
        xs = np.asarray(xs, dtype=self.coeffs.dtype) % self.N
        result = np.zeros_like(xs)
        for c in reversed(self.coeffs.tolist()):
            result = (result * xs + c) % self.N
        return result

    def evaluate_fq2(self, points: Sequence[Fq2Elem]) -> List[Fq2Elem]:
        """Vectorized Horner evaluation at many points of F_{N^2}"""
        if not len(points):
            return []
        ctx = points[0].ctx
        N, nr = self.N, ctx.nonresidue
        pa = np.array([z.a for z in points], dtype=self.coeffs.dtype)
        pb = np.array([z.b for z in points], dtype=self.coeffs.dtype)
        ra = np.zeros_like(pa)
        rb = np.zeros_like(pb)
        for c in reversed(self.coeffs.tolist()):
            ra, rb = (ra * pa + nr * (rb * pb % N) + c) % N, (ra * pb + rb * pa) % N
        return [Fq2Elem(ctx, a, b) for a, b in zip(ra.tolist(), rb.tolist())]

    def __divmod__(self, other: 'Poly') -> Tuple['Poly', 'Poly']:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        N = self.N
        dg = other.degree
        if self.degree < dg:
            return Poly([], N), self
        inv_lc = pow(other.lc, -1, N)
        g = other.coeffs
        r = self.coeffs.copy()
        q = np.zeros(self.degree - dg + 1, dtype=r.dtype)
        for k in range(self.degree - dg, -1, -1):
            c = int(r[k + dg]) * inv_lc % N
            if c:
                q[k] = c
                r[k:k + dg + 1] = (r[k:k + dg + 1] - c * g) % N
        return Poly(q, N), Poly(r[:dg], N)

    def __mod__(self, other: 'Poly') -> 'Poly':
        return divmod(self, other)[1]

    def __floordiv__(self, other: 'Poly') -> 'Poly':
        return divmod(self, other)[0]

    def __pow__(self, exponent: int) -> 'Poly':
        result = Poly.constant(1, self.N)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def powmod(self, exponent: int, modulus: 'Poly') -> 'Poly':
        result = Poly.constant(1, self.N) % modulus
        base = self % modulus
        while exponent:
            if exponent & 1:
                result = (result * base) % modulus
            base = (base * base) % modulus
            exponent >>= 1
        return result


def poly_gcd(f: Poly, g: Poly) -> Poly:
    """Monic gcd (zero if both are zero)"""
    while not g.is_zero():
        f, g = g, f % g
    return f.monic()


def resultant(f: Poly, g: Poly) -> int:
    """
    Res(f, g) = lc(g)^deg(f) * prod_{g(b)=0} f(b), so Res(f, c) = c^deg(f) for a constant c. Computed by the Euclidean
    recursion Res(f, g) = lc(g)^(deg f - deg r) * (-1)^(deg r * deg g) * Res(g, r) with r = f mod g
    """
    N = f.N
    if f.is_zero() and g.is_zero():
        raise errors.BothZero("the resultant of two zero polynomials is undefined")
    if f.is_zero() or g.is_zero():
        return 0
    result = 1
    while True:
        m, n = f.degree, g.degree
        if n == 0:
            return result * pow(g.lc, m, N) % N
        r = f % g
        if r.is_zero():
            return 0
        k = r.degree
        result = result * pow(g.lc, m - k, N) % N
        if (k * n) % 2:
            result = -result % N
        f, g = g, r


def discriminant(f: Poly) -> int:
    """(-1)^(n(n-1)/2) * Res(f, f') / lc(f)"""
    n = f.degree
    value = resultant(f, f.derivative()) * pow(f.lc, -1, f.N) % f.N
    return -value % f.N if (n * (n - 1) // 2) % 2 else value


def interpolate(xs: Sequence[int], ys: Sequence[int], N: int) -> Poly:
    """Newton interpolation through distinct nodes of F_N"""
    xs = [x % N for x in xs]
    coefficients = [y % N for y in ys]
    n = len(xs)
    # divided differences, in place
    for level in range(1, n):
        for i in range(n - 1, level - 1, -1):
            denominator = (xs[i] - xs[i - level]) % N
            coefficients[i] = (coefficients[i] - coefficients[i - 1]) * pow(denominator, -1, N) % N
    result = Poly.constant(coefficients[-1], N) if n else Poly([], N)
    for i in range(n - 2, -1, -1):
        result = result * Poly([-xs[i], 1], N) + coefficients[i]
    return result


class Fq2Poly:
    """
    Polynomial over F_{N^2}; ``coeffs`` is an (n, 2) array whose rows are the (a, b) coordinates of the coefficients
    in ascending order
    """

    __slots__ = ('ctx', 'coeffs')

    def __init__(self, ctx: FieldCtx, coeffs: Union[np.ndarray, Sequence]):
        self.ctx = ctx
        array = np.asarray(coeffs, dtype=ctx.dtype)
        if array.ndim == 1:  # plain F_N coefficients
            array = np.stack([array, np.zeros_like(array)], axis=1) if array.size else array.reshape(0, 2)
        self.coeffs = _trim(array % ctx.N)

    @classmethod
    def from_elements(cls, ctx: FieldCtx, elements: Sequence[Scalar]) -> 'Fq2Poly':
        pairs = [ctx.coerce(z).coordinates for z in elements]
        return cls(ctx, np.array(pairs, dtype=ctx.dtype).reshape(len(pairs), 2))

    @classmethod
    def from_poly(cls, ctx: FieldCtx, f: Poly) -> 'Fq2Poly':
        return cls(ctx, f.coeffs)

    @classmethod
    def x_minus(cls, ctx: FieldCtx, root: Scalar) -> 'Fq2Poly':
        return cls.from_elements(ctx, [-ctx.coerce(root), 1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return len(self.coeffs) == 0

    def coefficient(self, i: int) -> Fq2Elem:
        if i > self.degree:
            return self.ctx.zero
        return Fq2Elem(self.ctx, int(self.coeffs[i, 0]), int(self.coeffs[i, 1]))

    @property
    def lc(self) -> Fq2Elem:
        return self.coefficient(self.degree)

    def __repr__(self) -> str:
        return f"Fq2Poly({[self.coefficient(i) for i in range(self.degree + 1)]})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Fq2Poly) and np.array_equal(self.coeffs, other.coeffs)

    def _operand(self, other) -> 'Fq2Poly':
        return other if isinstance(other, Fq2Poly) else Fq2Poly.from_elements(self.ctx, [other])

    def __add__(self, other) -> 'Fq2Poly':
        other = self._operand(other)
        size = max(len(self.coeffs), len(other.coeffs))
        result = np.zeros((size, 2), dtype=self.coeffs.dtype)
        result[:len(self.coeffs)] += self.coeffs
        result[:len(other.coeffs)] += other.coeffs
        return Fq2Poly(self.ctx, result)

    __radd__ = __add__

    def __neg__(self) -> 'Fq2Poly':
        return Fq2Poly(self.ctx, -self.coeffs)

    def __sub__(self, other) -> 'Fq2Poly':
        return self + (-self._operand(other))

    def __rsub__(self, other) -> 'Fq2Poly':
        return self._operand(other) - self

    def scale(self, c: Scalar) -> 'Fq2Poly':
        c = self.ctx.coerce(c)
        return Fq2Poly(self.ctx, _scalar_times(self.ctx, (c.a, c.b), self.coeffs))

    def __mul__(self, other) -> 'Fq2Poly':
        if not isinstance(other, Fq2Poly):
            return self.scale(other)
        if self.is_zero() or other.is_zero():
            return Fq2Poly(self.ctx, np.zeros((0, 2), dtype=self.coeffs.dtype))
        N, nr = self.ctx.N, self.ctx.nonresidue
        a0, a1 = self.coeffs[:, 0], self.coeffs[:, 1]
        b0, b1 = other.coeffs[:, 0], other.coeffs[:, 1]
        real = np.convolve(a0, b0) % N + nr * (np.convolve(a1, b1) % N)
        imag = np.convolve(a0, b1) % N + np.convolve(a1, b0) % N
        return Fq2Poly(self.ctx, np.stack([real, imag], axis=1))

    __rmul__ = __mul__

    def monic(self) -> 'Fq2Poly':
        return self if self.is_zero() else self.scale(self.lc.inverse())

    def derivative(self) -> 'Fq2Poly':
        if self.degree < 1:
            return Fq2Poly(self.ctx, np.zeros((0, 2), dtype=self.coeffs.dtype))
        k = np.arange(1, len(self.coeffs), dtype=self.coeffs.dtype)
        return Fq2Poly(self.ctx, self.coeffs[1:] * k[:, None])

    def __call__(self, z: Scalar) -> Fq2Elem:
        z = self.ctx.coerce(z)
        result = self.ctx.zero
        for i in range(self.degree, -1, -1):
            result = result * z + self.coefficient(i)
        return result

    def __divmod__(self, other: 'Fq2Poly') -> Tuple['Fq2Poly', 'Fq2Poly']:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        ctx = self.ctx
        dg = other.degree
        if self.degree < dg:
            return Fq2Poly(ctx, np.zeros((0, 2), dtype=self.coeffs.dtype)), self
        inv_lc = other.lc.inverse()
        g = _scalar_times(ctx, (inv_lc.a, inv_lc.b), other.coeffs)  # monic divisor
        r = self.coeffs.copy()
        q = np.zeros((self.degree - dg + 1, 2), dtype=r.dtype)
        for k in range(self.degree - dg, -1, -1):
            c = (int(r[k + dg, 0]), int(r[k + dg, 1]))
            if c != (0, 0):
                q[k] = c
                r[k:k + dg + 1] = (r[k:k + dg + 1] - _scalar_times(ctx, c, g)) % ctx.N
        quotient = Fq2Poly(ctx, q).scale(inv_lc)
        return quotient, Fq2Poly(ctx, r[:dg])

    def __mod__(self, other: 'Fq2Poly') -> 'Fq2Poly':
        return divmod(self, other)[1]

    def __floordiv__(self, other: 'Fq2Poly') -> 'Fq2Poly':
        return divmod(self, other)[0]

    def powmod(self, exponent: int, modulus: 'Fq2Poly') -> 'Fq2Poly':
        result = Fq2Poly.from_elements(self.ctx, [1]) % modulus
        base = self % modulus
        while exponent:
            if exponent & 1:
                result = (result * base) % modulus
            base = (base * base) % modulus
            exponent >>= 1
        return result

    def compose_mod(self, inner: 'Fq2Poly', modulus: 'Fq2Poly') -> 'Fq2Poly':
        """self(inner) mod modulus"""
        result = Fq2Poly(self.ctx, np.zeros((0, 2), dtype=self.coeffs.dtype))
        for i in range(self.degree, -1, -1):
            result = (result * inner + self.coefficient(i)) % modulus
        return result


def _scalar_times(ctx: FieldCtx, c: Tuple[int, int], coeffs: np.ndarray) -> np.ndarray:
    N, nr = ctx.N, ctx.nonresidue
    ca, cb = c
    real = (ca * coeffs[:, 0] % N + nr * (cb * coeffs[:, 1] % N)) % N
    imag = (ca * coeffs[:, 1] % N + cb * coeffs[:, 0] % N) % N
    return np.stack([real, imag], axis=1) if len(coeffs) else coeffs


def fq2_gcd(f: Fq2Poly, g: Fq2Poly) -> Fq2Poly:
    while not g.is_zero():
        f, g = g, f % g
    return f.monic()


def fq2_invmod(a: Fq2Poly, modulus: Fq2Poly) -> Fq2Poly:
    """Inverse of a in F_{N^2}[X]/(modulus) by the extended Euclidean algorithm"""
    ctx = a.ctx
    r0, r1 = modulus, a % modulus
    s0 = Fq2Poly(ctx, np.zeros((0, 2), dtype=a.coeffs.dtype))
    s1 = Fq2Poly.from_elements(ctx, [1])
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
    if r0.degree != 0:
        raise ZeroDivisionError("element is not invertible modulo the given polynomial")
    return (s0 * r0.lc.inverse()) % modulus


def _split_by(f: Fq2Poly, exponent: int, degree: int, frobenius_fix: bool) -> List[Fq2Poly]:
    """
    Equal-degree factorization of a monic squarefree f whose irreducible factors all have the given degree (1 or 2)
    over F_{N^2}. Splitting polynomials are (X + a)^exponent - 1 for a = 0, 1, 2, ... and then a + x, ...
    """
    ctx = f.ctx
    if f.degree <= degree:
        return [f] if f.degree > 0 else []
    q = ctx.N * ctx.N
    frobenius = Fq2Poly.from_elements(ctx, [0, 1]).powmod(q, f) if frobenius_fix else None
    shifts = [ctx.element(a) for a in range(ctx.N)] + [ctx.element(a, 1) for a in range(ctx.N)]
    for shift in shifts:
        util.checkpoint('root splitting')
        y = Fq2Poly.from_elements(ctx, [shift, 1]).powmod(exponent, f)
        if frobenius_fix:
            # (X + a)^((q^2-1)/2) = y^(q+1) with y = (X + a)^((q-1)/2) and y^q = y(X^q)
            y = (y.compose_mod(frobenius, f) * y) % f
        g = fq2_gcd(f, y - 1)
        if 0 < g.degree < f.degree:
            return _split_by(g, exponent, degree, frobenius_fix) + _split_by(f // g, exponent, degree, frobenius_fix)
    raise errors.InternalInvariantViolation(f"cannot split a polynomial of degree {f.degree}")


def fq2_linear_roots(f: Fq2Poly) -> List[Fq2Elem]:
    """Distinct roots in F_{N^2} of a polynomial over F_{N^2}, sorted by (a, b)"""
    ctx = f.ctx
    q = ctx.N * ctx.N
    f = f.monic()
    X = Fq2Poly.from_elements(ctx, [0, 1])
    g = fq2_gcd(f, X.powmod(q, f) - X)
    roots = []
    for factor in _split_by(g, (q - 1) // 2, 1, frobenius_fix=False):
        factor = factor.monic()
        roots.append(-factor.coefficient(0))
    return sorted(roots)


def fq2_factor_degree_le2(f: Fq2Poly) -> Tuple[List[Fq2Elem], List[Fq2Poly]]:
    """
    Squarefree f splitting over F_{N^4} into linear and quadratic factors over F_{N^2}: returns the roots in F_{N^2}
    and the monic irreducible quadratic factors. Anything else is a contract violation
    """
    ctx = f.ctx
    q = ctx.N * ctx.N
    f = f.monic()
    roots = fq2_linear_roots(f)
    rest = f
    for root in roots:
        rest = rest // Fq2Poly.x_minus(ctx, root)
    if rest.degree <= 0:
        return roots, []
    X = Fq2Poly.from_elements(ctx, [0, 1])
    frobenius = X.powmod(q, rest)
    if frobenius.compose_mod(frobenius, rest) != X % rest:
        raise errors.InternalInvariantViolation("polynomial has irreducible factors of degree > 2")
    quadratics = [factor.monic() for factor in _split_by(rest, (q - 1) // 2, 2, frobenius_fix=True)]
    return roots, quadratics


def roots_in_fq2(f: Poly, ctx: FieldCtx) -> List[Fq2Elem]:
    """
    Roots in F_{N^2} of a polynomial over F_N with multiplicity, sorted by (a, b). The polynomial is split over F_N
    first: linear factors give the roots in F_N, irreducible quadratic factors give conjugate pairs in F_{N^2}
    """
    N = ctx.N
    if f.is_zero():
        raise ValueError("zero polynomial has every element as a root")
    f_monic = f.monic()
    X = Poly([0, 1], N)
    # X^(N^2) - X is the product of all monic irreducibles of degree 1 and 2
    xq = X.powmod(N, f_monic)
    xq2 = _compose_mod(xq, xq, f_monic)
    g = poly_gcd(f_monic, xq2 - X)
    linear_part = poly_gcd(g, xq - X)
    quadratic_part = g // linear_part

    distinct = []
    for factor in _split_fn(linear_part, (N - 1) // 2, 1):
        distinct.append((ctx.element(-factor.coeffs[0]), Poly(factor.coeffs, N)))
    for factor in _split_fn(quadratic_part, (N * N - 1) // 2, 2, xq=True):
        # X^2 + c1 X + c0: roots (-c1 +- sqrt(c1^2 - 4 c0))/2, the discriminant is a non-residue
        c0, c1 = int(factor.coeffs[0]), int(factor.coeffs[1])
        disc = (c1 * c1 - 4 * c0) % N
        s = ctx.sqrt(disc)
        half = pow(2, -1, N)
        for root in ((s - c1) * half, (-s - c1) * half):
            distinct.append((root, Poly(factor.coeffs, N)))

    roots = []
    for root, minimal in distinct:
        multiplicity = 0
        rest = f_monic
        while True:
            quotient, remainder = divmod(rest, minimal)
            if not remainder.is_zero():
                break
            multiplicity += 1
            rest = quotient
        roots.extend([root] * multiplicity)
    return sorted(roots)


def _compose_mod(f: Poly, inner: Poly, modulus: Poly) -> Poly:
    result = Poly([], f.N)
    for c in reversed(f.coeffs.tolist()):
        result = (result * inner + c) % modulus
    return result


def _split_fn(f: Poly, exponent: int, degree: int, xq: bool = False) -> List[Poly]:
    """Equal-degree splitting over F_N, the quadratic case uses (X + a)^((N^2-1)/2) = y^(N+1), y = (X+a)^((N-1)/2)"""
    N = f.N
    f = f.monic()
    if f.degree <= degree:
        return [f] if f.degree > 0 else []
    frobenius = Poly([0, 1], N).powmod(N, f) if xq else None
    for a in range(N):
        util.checkpoint('root splitting')
        if xq:
            y = Poly([a, 1], N).powmod((N - 1) // 2, f)
            y = (_compose_mod(y, frobenius, f) * y) % f
        else:
            y = Poly([a, 1], N).powmod(exponent, f)
        g = poly_gcd(f, y - 1)
        if 0 < g.degree < f.degree:
            return _split_fn(g, exponent, degree, xq) + _split_fn(f // g, exponent, degree, xq)
    raise errors.InternalInvariantViolation(f"cannot split a polynomial of degree {f.degree} over F_{N}")
