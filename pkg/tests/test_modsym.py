from fractions import Fraction

import numpy as np

# Provides test constants and definitions
from tests.common import *

import eisenstein.core.errors as errors
import eisenstein.core.util as util
from eisenstein.core.dlog import LogMap
from eisenstein.core.elements import f0_element, f1_element, sign_character
from eisenstein.core.fields import field_ctx_new
from eisenstein.core.filtration import eisenstein_filtration, kernel_dimensions, newton_invariants
from eisenstein.core.manin import (ManinSpace, P1Index, build_manin_space, genus_x0, manin_symbols_of_path,
                                   merel_matrices)
from eisenstein.core.report import CheckList


class TestManinSymbols(CustomTestCase):

    def test_p1(self):
        p1 = P1Index(field_ctx_new(11))
        self.assertEqual(len(p1), 12)
        self.assertEqual(p1.index(1, 0), 11)
        self.assertEqual(p1.index(3, 3), 1)
        self.assertEqual(p1.pair(p1.index(4, 1)), (4, 1))
        with self.assertRaises(errors.BothZero):
            p1.index(0, 11)
        identity = np.arange(12)
        self.assertTrue(np.array_equal(p1.sigma[p1.sigma], identity))
        self.assertTrue(np.array_equal(p1.tau[p1.tau[p1.tau]], identity))
        self.assertTrue(np.array_equal(p1.iota[p1.iota], identity))

    def test_merel_matrices(self):
        self.assertEqual(merel_matrices(1), [(1, 0, 0, 1)])
        self.assertEqual(merel_matrices(2), [(1, 0, 0, 2), (1, 0, 1, 2), (2, 0, 0, 1), (2, 1, 0, 1)])
        self.assertTrue(all(a * d - b * c == 6 for a, b, c, d in merel_matrices(6)))
        with self.assertRaises(errors.BadIndex):
            merel_matrices(0)
        with self.assertRaises(errors.BadIndex):
            merel_matrices(22, N=11)

    def test_genus(self):
        for N, g in ((11, 1), (13, 0), (37, 2), (181, 14)):
            with self.subTest(N=N):
                self.assertEqual(genus_x0(N), g)

    def test_paths(self):
        p1 = P1Index(field_ctx_new(11))
        self.assertEqual(manin_symbols_of_path(p1, Fraction(0), None), [(1, p1.index(0, 1))])
        self.assertEqual(manin_symbols_of_path(p1, Fraction(0), Fraction(0)), [])


class TestManinSpace(CustomTestCase):

    def test_dimension(self):
        for N, p, dimension in ((11, 5, 2), (181, 5, 15)):
            with self.subTest(N=N):
                ms = ManinSpace(field_ctx_new(N), p, 1)
                self.assertEqual(ms.dimension, dimension)
                self.assertEqual(ms.dimension, ms.genus + 1)
                self.assertEqual(ms.projection.shape, (N + 1, dimension))

    def test_preconditions(self):
        ctx = field_ctx_new(181)
        with self.assertRaises(errors.UnsupportedPrime):
            ManinSpace(ctx, 3, 1)
        with self.assertRaises(errors.NotEisensteinPrime):
            build_manin_space(ctx, 7, 1)
        with self.assertRaises(errors.RangeError):
            ManinSpace(ctx, 5, 1).reduced(2)

    def test_relations(self):
        ms = ManinSpace(field_ctx_new(CASE_N), CASE_P, 1)
        q, p1 = ms.modulus, ms.p1
        self.assertFalse(np.any((ms.projection + ms.projection[p1.sigma]) % q))
        self.assertFalse(np.any((ms.projection + ms.projection[p1.tau] + ms.projection[p1.tau[p1.tau]]) % q))
        self.assertFalse(np.any((ms.projection - ms.projection[p1.iota]) % q))
        self.assertEqual(ms.boundary(ms.symbol(1, 0)), 1)
        self.assertEqual(ms.boundary(ms.symbol(0, 1)), q - 1)

    def test_hecke_level_11(self):
        # V = Eisenstein line + the newform 11a with a_2 = -2, a_3 = -1
        ms = ManinSpace(field_ctx_new(11), 5, 1)
        self.assertEqual(int(np.trace(ms.hecke_tn(2))) % 5, (3 - 2) % 5)
        self.assertEqual(int(np.trace(ms.hecke_tn(3))) % 5, (4 - 1) % 5)
        self.assertTrue(np.array_equal(ms.hecke_tn(1), np.eye(2, dtype=np.int64)))

    def test_hecke_multiplicative(self):
        ms = ManinSpace(field_ctx_new(CASE_N), CASE_P, 1)
        q = ms.modulus
        t2, t3 = ms.hecke_tn(2), ms.hecke_tn(3)
        self.assertTrue(np.array_equal(t2 @ t3 % q, ms.hecke_tn(6)))
        self.assertTrue(np.array_equal(t2 @ t3 % q, t3 @ t2 % q))
        # T_4 = T_2^2 - 2 for 2 not dividing N
        self.assertTrue(np.array_equal(ms.hecke_tn(4), (t2 @ t2 - 2 * np.eye(ms.dimension, dtype=np.int64)) % q))

    def test_atkin_lehner(self):
        ms = ManinSpace(field_ctx_new(CASE_N), CASE_P, 1)
        w = ms.atkin_lehner
        self.assertTrue(np.array_equal(w @ w % ms.modulus, np.eye(ms.dimension, dtype=np.int64)))
        m0 = f0_element(ms)
        self.assertFalse(np.any((w @ m0 + m0) % ms.modulus))


class TestEisensteinElements(CustomTestCase):

    def test_sign_character(self):
        self.assertEqual(sign_character(7).tolist(), [0, 1, -1, 1, -1, 1, -1])

    def test_m0_m1(self):
        ctx = field_ctx_new(CASE_N)
        ms = ManinSpace(ctx, CASE_P, 1)
        checks = CheckList()
        m0 = f0_element(ms, checks=checks)
        self.assertEqual(ms.boundary(m0), util.fraction_mod(Fraction(CASE_N - 1, 12), ms.modulus))
        m1 = f1_element(ms, LogMap(ctx, CASE_P, 1), m0=m0, checks=checks)
        self.assertChecksPass(checks)
        self.assertEqual(len(m1), ms.dimension)
        with self.assertRaises(errors.RangeError):
            f1_element(ms, LogMap(ctx, 2, 1), m0=m0)


class TestFiltration(CustomTestCase):

    def test_depths(self):
        for N, p, n in ((11, 5, 1), (181, 5, 3)):
            with self.subTest(N=N, p=p):
                filtration = eisenstein_filtration(ManinSpace(field_ctx_new(N), p, 1))
                self.assertEqual(filtration.n, n)
                self.assertEqual(filtration.kernel_dimensions, [min(k, n + 1) for k in range(1, n + 3)])
                self.assertEqual(filtration.lengths[0], genus_x0(N) + 1)
                self.assertTrue(filtration.checks.succeed)
                self.assertTrue(all(a > b for a, b in zip(filtration.lengths, filtration.lengths[1:])))

    def test_atkin_lehner_generator(self):
        ms = ManinSpace(field_ctx_new(181), 5, 1)
        self.assertEqual(eisenstein_filtration(ms, with_atkin_lehner=True).n, 3)

    def test_generator_instability(self):
        ms = ManinSpace(field_ctx_new(181), 5, 1)
        with self.assertRaises(errors.GeneratorInstability):
            eisenstein_filtration(ms, generators=(2,), max_prime=3)

    def test_kernel_dimensions(self):
        ms = ManinSpace(field_ctx_new(11), 5, 1)
        self.assertEqual(kernel_dimensions(ms, [ms.eta(2), ms.eta(3)], 3), [1, 2, 2])

    def test_newton_invariants(self):
        newton = newton_invariants(field_ctx_new(181), 5)
        self.assertEqual((newton.t, newton.g_p, newton.depths, newton.z), (1, 3, [3], [1, 1, 1]))
        self.assertEqual(newton.to_dict()['z_profile'], [1, 1, 1])
