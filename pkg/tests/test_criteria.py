import numpy as np

# Provides test constants and definitions
from tests.common import *

import eisenstein.core.errors as errors
from eisenstein.core.criteria import (criteria_report, criterion_ge2, criterion_ge2_p3, criterion_ge3, identity_suite,
                                      m0_m1_pairing, m1_m1_pairing, merel_sum)
from eisenstein.core.dlog import ExtendedLog, LogMap
from eisenstein.core.elements import f02_element, f02_values
from eisenstein.core.fields import field_ctx_new
from eisenstein.core.manin import P1Index
from eisenstein.core.supersingular import pairing_e1_e0, pairing_e1_e1, supersingular_set


class TestCriteria(CustomTestCase):
    """
    Elementary sums and the rank criteria. Expected values are the known levels where the Eisenstein part has rank
    at least 2 or 3
    """

    def test_merel_sums(self):
        lm = LogMap(field_ctx_new(11), 5, 1)
        # log base 2 modulo 11 reduced mod 5 on k = 1..5 is 0, 1, 3, 2, 4
        self.assertEqual(merel_sum(lm, 1), 39 % 5)
        self.assertEqual(merel_sum(lm, 0), 15 % 5)

        lm = LogMap(field_ctx_new(3671), 5, 1)
        self.assertEqual(merel_sum(lm, 1), 0)
        self.assertNotEqual(merel_sum(lm, 3), 0)
        self.assertEqual(merel_sum(LogMap(field_ctx_new(4229), 7, 1), 3), 0)

        with self.assertRaises(ValueError):
            merel_sum(lm, -1)

    def test_criteria_p5(self):
        for N, p, expected in ((181, 5, (True, True)), (11, 5, (False, False)), (4229, 7, (True, True))):
            with self.subTest(N=N, p=p):
                lm = LogMap(field_ctx_new(N), p, 1)
                self.assertEqual((criterion_ge2(lm), criterion_ge3(lm)), expected)

    def test_criteria_p3(self):
        for N in (1279, 1747):
            with self.subTest(N=N):
                self.assertTrue(criterion_ge2_p3(field_ctx_new(N), 1))
        with self.assertRaises(errors.NotEisensteinPrime):
            criterion_ge2_p3(field_ctx_new(13), 1)
        with self.assertRaises(errors.UnsupportedPrime):
            criterion_ge2(LogMap(field_ctx_new(1279), 3, 1))

    def test_report(self):
        report = criteria_report(field_ctx_new(CASE_N), CASE_P, 1)
        self.assertEqual(report.r, 1)
        self.assertChecksPass(report.checks)
        self.assertEqual(report.t, CASE_T)
        self.assertEqual(report.ge2, report.sums[1] == 0)
        self.assertEqual(set(report.to_dict()), {'sums', 'squares_sum', 'F', 'ge2', 'ge3', 'm0_m1'})

    def test_pairing_m0_m1(self):
        lm = LogMap(field_ctx_new(CASE_N), CASE_P, 1)
        self.assertEqual(m0_m1_pairing(lm) * 3 % lm.modulus, merel_sum(lm, 1))

    def test_pairing_m1_m1(self):
        lm = LogMap(field_ctx_new(181), 5, 1)
        self.assertEqual(m1_m1_pairing(lm) * 6 % lm.modulus, merel_sum(lm, 2))
        ss = supersingular_set(lm.ctx)
        log = ExtendedLog(lm)
        self.assertEqual(pairing_e1_e0(ss, log), 0, msg="e1.e1 needs e1.e0 = 0")
        self.assertEqual(m1_m1_pairing(lm), pairing_e1_e1(ss, log))
        with self.assertRaises(errors.UnsupportedPrime):
            m1_m1_pairing(LogMap(field_ctx_new(181), 3, 1))

    def test_report_p2(self):
        report = criteria_report(field_ctx_new(17), 2, 1)
        self.assertEqual(report.t, 2)
        self.assertIsNotNone(report.ge2)


class TestIdentitySuite(CustomTestCase):

    def test_identities_hold(self):
        for N, p in ((11, 5), (CASE_N, CASE_P)):
            with self.subTest(N=N, p=p):
                checks = identity_suite(LogMap(field_ctx_new(N), p, 1), samples=10, seed=1)
                self.assertChecksPass(checks, "identity")
                self.assertIsNotNone(checks.by_id('bernardi'))
                self.assertIsNotNone(checks.by_id('shifted-product'))


class TestTwoAdicElement(CustomTestCase):
    """The p = 2 companion of the Eisenstein element, from lattice-point counts"""

    def test_f02_element(self):
        ctx = field_ctx_new(17)
        values, checks = f02_element(ctx, samples=10)
        self.assertChecksPass(checks, "p = 2 element checks")
        self.assertEqual(len(values), 18)
        self.assertTrue(np.all((values + 16) % 4 == 0), msg="12 F02 should be 4 * count - (N - 1)")

    def test_needs_1_mod_8(self):
        with self.assertRaises(errors.UnsupportedPrime):
            f02_values(P1Index(field_ctx_new(13)))
