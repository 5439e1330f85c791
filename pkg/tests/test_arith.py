import time
from fractions import Fraction

import numpy as np

# Provides test constants and definitions
from tests.common import *

import eisenstein.core.errors as errors
import eisenstein.core.util as util
from eisenstein.core.dlog import ExtendedLog, LogMap, TwoAdicLog, baby_step_giant_step, make_log
from eisenstein.core.fields import FieldCtx, field_ctx_new
from eisenstein.core.linalg import HowellForm, kernel_mod_p, matmul_mod, relation_quotient
from eisenstein.core.poly import Poly, discriminant, interpolate, resultant, roots_in_fq2


class TestFields(CustomTestCase):
    """F_N and F_{N^2} arithmetic and the deterministic choices of the context"""

    def test_bad_levels(self):
        for N, error in ((1, errors.BadPrime), (3, errors.BadPrime), (15, errors.CompositeModulus),
                         (4, errors.CompositeModulus), ('11', errors.BadPrime)):
            with self.subTest(N=N):
                with self.assertRaises(error):
                    FieldCtx(N)

    def test_deterministic_choices(self):
        ctx = field_ctx_new(11)
        self.assertIs(ctx, field_ctx_new(11), msg="context is not shared")
        self.assertEqual(ctx.nonresidue, 2)
        self.assertEqual(ctx.gen_fn, 2)
        self.assertEqual(ctx.x * ctx.x, ctx.nonresidue)

    def test_arithmetic(self):
        ctx = field_ctx_new(CASE_N)
        z = ctx.element(3, 4)
        self.assertEqual(z * z.inverse(), 1)
        self.assertEqual(z / z, ctx.one)
        self.assertEqual(z ** CASE_N, z.frobenius(), msg="Frobenius is not the N-th power")
        self.assertEqual((z * z.frobenius()).coordinates, (z.norm(), 0))
        self.assertEqual(z - z, ctx.zero)
        with self.assertRaises(ZeroDivisionError):
            ctx.zero.inverse()

    def test_tables(self):
        ctx = field_ctx_new(CASE_N)
        x = np.arange(1, CASE_N)
        self.assertTrue(np.all(x * ctx.inverse_table[x] % CASE_N == 1))
        self.assertTrue(np.all(ctx.power_table[ctx.index_table[x]] == x))

    def test_square_roots(self):
        ctx = field_ctx_new(CASE_N)
        for z in (ctx.element(ctx.nonresidue), ctx.element(5), ctx.element(2, 7) ** 2, ctx.gen_fn2 ** 2):
            with self.subTest(z=z):
                root = ctx.sqrt(z)
                self.assertIsNotNone(root)
                self.assertEqual(root * root, z)
        self.assertFalse(ctx.is_square(ctx.gen_fn2), msg="generator of F_{N^2}^x should not be a square")
        self.assertIsNone(ctx.sqrt(ctx.gen_fn2))
        self.assertTrue(all(ctx.is_square(a) for a in range(1, 20)), msg="F_N is made of squares in F_{N^2}")


class TestPolynomials(CustomTestCase):

    def test_resultant_convention(self):
        # Res(f, g) = lc(g)^deg(f) * prod_{g(b)=0} f(b)
        H = Poly([1, 4, 1], 5)
        self.assertEqual(resultant(H, H.derivative()), 3)
        self.assertEqual(resultant(H, Poly([3], 5)), 9 % 5)
        self.assertEqual(discriminant(H), 2)

    def test_resultant_zero(self):
        zero = Poly([0], 5)
        self.assertEqual(resultant(zero, Poly([1, 4, 1], 5)), 0)
        with self.assertRaises(errors.BothZero):
            resultant(zero, Poly([], 5))

    def test_division(self):
        N = 13
        f = Poly([1, 2, 3, 4, 5], N)
        g = Poly([7, 0, 1], N)
        q, r = divmod(f, g)
        self.assertEqual(q * g + r, f)
        self.assertLess(r.degree, g.degree)

    def test_interpolate(self):
        N = 101
        f = Poly([5, 0, 7, 1], N)
        xs = list(range(4))
        self.assertEqual(interpolate(xs, [f(x) for x in xs], N), f)

    def test_roots_in_fq2(self):
        ctx = field_ctx_new(11)
        roots = roots_in_fq2(Poly([-2, 0, 1], 11), ctx)  # 2 is a non-residue modulo 11
        self.assertEqual(len(roots), 2)
        self.assertTrue(all(root * root == 2 for root in roots))
        self.assertFalse(any(root.in_prime_field() for root in roots))

        roots = roots_in_fq2(Poly([1, -2, 1], 11), ctx)  # (X - 1)^2
        self.assertEqual(roots, [ctx.one, ctx.one], msg="multiplicity is lost")


class TestLogs(CustomTestCase):

    def test_log_map(self):
        ctx = field_ctx_new(CASE_N)
        lm = LogMap(ctx, CASE_P, 1)
        self.assertEqual(lm(ctx.gen_fn), 1)
        for a, b in ((2, 3), (5, 7), (CASE_N - 1, 10)):
            with self.subTest(a=a, b=b):
                self.assertEqual(lm(a * b), (lm(a) + lm(b)) % lm.modulus)
                self.assertEqual(lm.solve(a), lm(a), msg="table and Pohlig-Hellman disagree")
        with self.assertRaises(ZeroDivisionError):
            lm(0)

    def test_log_map_preconditions(self):
        ctx = field_ctx_new(181)
        with self.assertRaises(errors.RangeError):
            LogMap(ctx, 5, 2)  # 25 does not divide 180
        with self.assertRaises(errors.UnsupportedPrime):
            LogMap(ctx, 4, 1)
        with self.assertRaises(errors.NotEisensteinPrime):
            make_log(field_ctx_new(13), 3, 1)

    def test_extended_log(self):
        ctx = field_ctx_new(CASE_N)
        lm = LogMap(ctx, CASE_P, 1)
        log = ExtendedLog(lm)
        self.assertTrue(log.is_surjective())
        # N + 1 = 2 mod p and log(k^2) = 2 log(k): the restriction to F_N is log itself
        for k in (2, 3, 10):
            self.assertEqual(log(k), lm(k))
        z, w = ctx.element(3, 4), ctx.element(1, 9)
        self.assertEqual(log(z * w), (log(z) + log(w)) % log.modulus)
        with self.assertRaises(errors.UnsupportedPrime):
            ExtendedLog(LogMap(ctx, 2, 1))

    def test_two_adic_log(self):
        ctx = field_ctx_new(17)
        lam2 = TwoAdicLog(ctx)
        self.assertEqual((lam2.t, lam2.modulus), (2, 32))
        self.assertEqual(lam2(ctx.element(ctx.gen_fn)), 2)
        z, w = ctx.gen_fn2, ctx.element(2, 5)
        self.assertEqual(lam2(z * w), (lam2(z) + lam2(w)) % 32)
        with self.assertRaises(errors.UnsupportedPrime):
            TwoAdicLog(field_ctx_new(13))

    def test_baby_step_giant_step(self):
        self.assertEqual(baby_step_giant_step(2, pow(2, 7, 11), 10, lambda u, v: u * v % 11,
                                              lambda u, k: pow(u, k, 11)), 7)


class TestUtil(CustomTestCase):

    def test_eisenstein_valuations(self):
        self.assertEqual(util.valuation(50, 5), 2)
        self.assertEqual(util.eisenstein_valuation(3001, 5), 3)
        self.assertEqual(util.eisenstein_primes(181), [3, 5])
        self.assertEqual(util.eisenstein_primes(13), [])
        self.assertEqual(util.require_eisenstein(17, 2, 1), 2)
        with self.assertRaises(errors.NotEisensteinPrime):
            util.require_eisenstein(13, 3, 1)
        with self.assertRaises(errors.RangeError):
            util.require_eisenstein(181, 5, 2)

    def test_parsers(self):
        self.assertEqual(util.fraction_mod(Fraction(1, 2), 5), 3)
        with self.assertRaises(ZeroDivisionError):
            util.fraction_mod(Fraction(1, 5), 25)
        self.assertEqual(util.parse_range('5..20'), (5, 20))
        self.assertEqual(util.parse_primes('2, 3 5'), [2, 3, 5])
        self.assertEqual(util.first_prime_at_least(5, exclude=5), 7)
        for bad in ('20..5', '5-20'):
            with self.subTest(text=bad):
                with self.assertRaises(ValueError):
                    util.parse_range(bad)
        with self.assertRaises(ValueError):
            util.parse_primes('2 4')

    def test_time_budget(self):
        util.checkpoint('no budget')  # should not raise
        with util.time_budget(0.001):
            time.sleep(0.01)
            with self.assertRaises(errors.BudgetExceeded):
                util.checkpoint('sleeping')
        util.checkpoint('budget is gone')


class TestLinalg(CustomTestCase):

    def test_howell_form(self):
        form = HowellForm(np.array([[5, 0], [0, 1]]), 5, 2)
        self.assertEqual(form.length, 3)
        self.assertFalse(form.is_free)
        self.assertTrue(form.contains(np.array([10, 3])))
        self.assertFalse(form.contains(np.array([1, 0])))

        # a non-unit pivot must not hide elements vanishing on the first column
        form = HowellForm(np.array([[5, 1]]), 5, 2)
        self.assertEqual(form.length, 2)
        self.assertTrue(form.contains(np.array([0, 5])))
        self.assertTrue(form.same_module(HowellForm(np.array([[5, 1], [0, 5]]), 5, 2)))

    def test_relation_quotient(self):
        free, projection = relation_quotient(np.array([[1, -1, 0]]), 3, 5, 1)
        self.assertEqual(free.tolist(), [1, 2])
        self.assertEqual(projection.tolist(), [[1, 0], [1, 0], [0, 1]])
        with self.assertRaises(errors.RankMismatch):
            relation_quotient(np.array([[5, 0]]), 2, 5, 2)

    def test_kernel_mod_p(self):
        self.assertEqual(kernel_mod_p(np.array([[1, 1]]), 5).tolist(), [[4, 1]])

    def test_matmul_mod_large_modulus(self):
        modulus = 2 ** 31 - 1
        rng = np.random.default_rng(0)
        a = rng.integers(0, modulus, size=(3, 4), dtype=np.int64)
        b = rng.integers(0, modulus, size=(4, 2), dtype=np.int64)
        expected = (a.astype(object) @ b.astype(object)) % modulus
        self.assertEqual(matmul_mod(a, b, modulus).tolist(), expected.tolist())
