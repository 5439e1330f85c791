import configparser
import json
import logging

# Provides test constants and definitions
from tests.common import *

import eisenstein.core.cache
import eisenstein.core.config
import eisenstein.core.errors as errors
import eisenstein.core.log
import eisenstein.core.report
import eisenstein.core.settings
import eisenstein.core.study
from eisenstein.core.report import CheckKind, CheckList, EisensteinReport


class TestConfig(CustomTestCase):
    """
    Layering of the run config: defaults, then the eisenstein.ini file of the folder, then the runtime (CLI) values
    """

    def make_config(self, **scan) -> eisenstein.core.config.RunConfig:
        return eisenstein.core.config.RunConfig(STAGE_PATH, logging.getLogger('eisenstein.tests'),
                                                runtime_parameters={'scan': scan})

    def test_targets(self):
        self.assertEqual(self.make_config(N=181, p='all').targets(), [(181, 3), (181, 5)])
        self.assertEqual(self.make_config(N=181, p='all').targets(min_p=5), [(181, 5)])
        self.assertEqual(self.make_config(N=181, p=7).targets(), [(181, 7)], msg="explicit prime should be kept")
        self.assertEqual(self.make_config(range='5..20').targets(),
                         [(5, None), (7, None), (11, None), (13, None), (17, None), (19, None)])
        self.assertEqual(self.make_config(range='5..20', p='all').targets(), [(11, 5), (17, 2), (19, 3)])

    def test_bad_scan(self):
        with self.assertRaises(ValueError):
            self.make_config(N=11, range='5..20').levels()
        with self.assertRaises(ValueError):
            self.make_config().levels()

    def test_layering(self):
        STAGE_PATH.joinpath(eisenstein.core.settings.config_file_name).write_text(
            "[engine]\ngenerators_max_prime = 53\nrandom_seed = 7\n")
        config = eisenstein.core.config.RunConfig(
            STAGE_PATH, logging.getLogger('eisenstein.tests'),
            runtime_parameters={'engine': {'random_seed': 11, 'generators': None}})
        self.assertEqual(config.getint('engine', 'generators_max_prime'), 53, msg="config file value is lost")
        self.assertEqual(config.getint('engine', 'random_seed'), 11, msg="runtime value should win")
        self.assertEqual(config.get_primes('engine', 'generators'), [2, 3, 5, 7, 11, 13],
                         msg="None should not override the default")
        self.assertIsNone(config.get_optional_int('scan', 'r'))

    def test_save_config(self):
        config = self.make_config(N=181)
        self.assertEqual(config.save({'engine': {'identity_samples': 5}}), 0, msg="Return code is non-zero")

        saved = configparser.ConfigParser(interpolation=None)
        self.assertGreater(len(saved.read(STAGE_PATH.joinpath(eisenstein.core.settings.config_file_name))), 0,
                           msg="Config is empty")
        for section, parameters in eisenstein.core.settings.config_default.items():
            for option in parameters:
                with self.subTest(section=section, option=option):
                    self.assertNotEqual(saved.get(section, option, fallback="Not found"), "Not found")
        self.assertEqual(saved.get('engine', 'identity_samples'), '5')
        self.assertEqual(saved.get('scan', 'N'), '181')


class TestLog(CustomTestCase):

    def test_pair_logger(self):
        logger = eisenstein.core.log.PairLogger(logging.getLogger('eisenstein.pairs'), N=181, p=5)
        with self.assertLogs('eisenstein.pairs', level='WARNING') as logs:
            logger.warning("conjecture fails", finding=True)
        record = logs.records[0]
        self.assertEqual(record.getMessage(), "N=181 p=5: conjecture fails")
        self.assertEqual(getattr(record, eisenstein.core.log.SpecialLogEvent.__name__),
                         eisenstein.core.log.SpecialLogEvent.FINDING)
        formatter = eisenstein.core.log.DispatchingFormatter()
        self.assertEqual(formatter.format(record), "FINDING  N=181 p=5: conjecture fails")

        self.assertEqual(eisenstein.core.log.PairLogger(logging.getLogger('eisenstein.pairs'), N=11).prefix, "N=11")

    def test_log_current_exception(self):
        logger = logging.getLogger('eisenstein.tests')
        with self.assertLogs('eisenstein.tests', level='ERROR') as logs:
            try:
                raise errors.VerificationFailed("m0+ is not killed by T_2 - 3")
            except errors.VerificationFailed:
                eisenstein.core.log.log_current_exception(logger, show_traceback=False)
        self.assertIn("VerificationFailed: m0+ is not killed by T_2 - 3", logs.output[0])


class TestReport(CustomTestCase):

    def test_check_list(self):
        checks = CheckList()
        checks.theorem('proved', True)
        checks.conjecture('open', False, "counterexample")
        checks.reported('shown', None)
        self.assertTrue(checks.succeed, msg="a failed conjecture is not a failure")
        self.assertEqual([check.id for check in checks.findings], ['open'])
        self.assertEqual([check.status for check in checks], ['ok', 'finding', 'skip'])
        checks.theorem('broken', False)
        self.assertFalse(checks.succeed)
        self.assertIn('counterexample', str(checks))

    def test_record(self):
        report = EisensteinReport('criteria', 181, 5, 1, 1)
        report.values['ge2'] = True
        report.checks.theorem('pairing-m0-m1', True)
        record = json.loads(report.to_json())
        self.assertEqual(record['schema'], eisenstein.core.settings.schema_version)
        self.assertEqual(record['checks'][0], {'id': 'pairing-m0-m1', 'kind': 'theorem', 'passed': True,
                                               'detail': ''})
        self.assertNotIn('elapsed', record)
        restored = EisensteinReport.from_dict(record)
        self.assertEqual(restored.to_dict(), report.to_dict())
        self.assertIs(restored.checks[0].kind, CheckKind.THEOREM)

    def test_error_record(self):
        report = EisensteinReport('gp', 181, 3)
        report.set_error(errors.VerificationFailed("boom"), theorem_backed=True)
        self.assertFalse(report.succeed)
        self.assertEqual(report.error['type'], 'VerificationFailed')
        report = EisensteinReport('gp', 181, 3)
        report.set_error(errors.UnsupportedPrime("p = 3"), theorem_backed=False)
        self.assertTrue(report.succeed)

    def test_csv(self):
        first = EisensteinReport('criteria', 181, 5)
        first.values['sums'] = {'1': 0}
        second = EisensteinReport('criteria', 11, 5)
        second.checks.theorem('pairing-m0-m1', True)
        lines = eisenstein.core.report.render_csv([first, second]).splitlines()
        self.assertEqual(lines[0], "command,N,p,r,t,status,sums,check:pairing-m0-m1")
        self.assertEqual(len(lines), 3)

    def test_golden_table(self):
        self.assertEqual(eisenstein.core.report.golden_gp(181, 5), (1, 3))
        self.assertEqual(eisenstein.core.report.golden_gp(3001, 5), (3, 6))
        self.assertIsNone(eisenstein.core.report.golden_gp(11, 5))


class TestCache(CustomTestCase):

    def make_report(self) -> EisensteinReport:
        report = EisensteinReport('criteria', 181, 5, 1, 1)
        report.values['ge2'] = True
        report.elapsed = 1.5
        return report

    def test_put_get(self):
        cache = eisenstein.core.cache.ResultCache(STAGE_PATH / 'cache', options={'seed': 0}, version='1.0')
        self.assertIsNone(cache.get('criteria', 181, 5, None))
        cache.put(self.make_report(), None)
        cached = cache.get('criteria', 181, 5, None)
        self.assertIsNotNone(cached)
        self.assertEqual(cached.values, {'ge2': True})
        self.assertIsNone(cached.elapsed, msg="elapsed time should not be cached")
        self.assertIsNone(cache.get('criteria', 181, 5, 1), msg="another r is another entry")

        other = eisenstein.core.cache.ResultCache(STAGE_PATH / 'cache', options={'seed': 1}, version='1.0')
        self.assertIsNone(other.get('criteria', 181, 5, None), msg="options digest is ignored")
        newer = eisenstein.core.cache.ResultCache(STAGE_PATH / 'cache', options={'seed': 0}, version='1.1')
        self.assertIsNone(newer.get('criteria', 181, 5, None), msg="version is ignored")

    def test_timeouts_are_not_cached(self):
        cache = eisenstein.core.cache.ResultCache(STAGE_PATH / 'cache', version='1.0')
        report = self.make_report()
        report.set_error(errors.BudgetExceeded("time budget is over"), theorem_backed=False, status='timeout')
        cache.put(report)
        self.assertEqual(cache.keys(), [])

    def test_corrupted_entry(self):
        cache = eisenstein.core.cache.ResultCache(STAGE_PATH / 'cache', version='1.0')
        STAGE_PATH.joinpath('cache', f"{cache.key('criteria', 181, 5, None)}.json").write_text("{not json")
        with self.assertLogs('eisenstein.core.cache', level='WARNING'):
            self.assertIsNone(cache.get('criteria', 181, 5, None))

    def test_audit(self):
        cache = eisenstein.core.cache.ResultCache(STAGE_PATH / 'cache', version='1.0')
        cache.put(self.make_report())
        key = cache.keys()[0]
        self.assertEqual(cache.parse_key(key), ('criteria', 181, 5, None))

        self.assertEqual(cache.audit(3, lambda command, N, p, r: self.make_report()), [(key, True)])

        def different(command, N, p, r):
            report = self.make_report()
            report.values['ge2'] = False
            return report

        with self.assertLogs('eisenstein.core.cache', level='WARNING'):
            self.assertEqual(cache.audit(1, different), [(key, False)])


class TestStudy(CustomTestCase):
    """Single work items as the CLI runs them"""

    def test_precondition_error_record(self):
        report = eisenstein.core.study.run_item('criteria', 11, 7)
        self.assertEqual(report.status, 'error')
        self.assertEqual(report.error['type'], errors.NotEisensteinPrime.__name__)
        self.assertFalse(report.error['theorem_backed'])
        self.assertTrue(report.succeed, msg="a precondition failure is not a theorem failure")

        report = eisenstein.core.study.run_item('gp', 181, 3)
        self.assertEqual(report.error['type'], errors.UnsupportedPrime.__name__)

        with self.assertRaises(ValueError):
            eisenstein.core.study.run_item('unknown', 11, 5)

    def test_timeout_record(self):
        report = eisenstein.core.study.run_item('gp', 181, 5, budget_secs=1e-9)
        self.assertEqual(report.status, 'timeout')
        self.assertEqual(report.error['type'], errors.BudgetExceeded.__name__)

    def test_criteria(self):
        report = eisenstein.core.study.run_item('criteria', 181, 5, timings=True)
        self.assertEqual(report.status, 'ok')
        self.assertEqual((report.values['ge2'], report.values['ge3']), (True, True))
        self.assertIsNotNone(report.elapsed)
        json.dumps(report.to_dict())  # should be serializable

    def test_gp(self):
        for N, p, g_p in ((11, 5, 1), (181, 5, 3)):
            with self.subTest(N=N, p=p):
                report = eisenstein.core.study.run_item('gp', N, p)
                self.assertEqual(report.status, 'ok', msg=str(report))
                self.assertEqual(report.values['g_p'], g_p)
                self.assertTrue(report.succeed, msg=str(report.checks))
                json.dumps(report.to_dict())
        self.assertTrue(report.checks.by_id('golden-table').passed)

    def test_gp_single_modulus(self):
        report = eisenstein.core.study.run_item('gp', 181, 5, r=1, options={'with_atkin_lehner': True})
        self.assertEqual(report.values['n'], 3)
        self.assertTrue(report.values['with_atkin_lehner'])

    def test_supersingular_and_eichler(self):
        report = eisenstein.core.study.run_item('supersingular', 11)
        self.assertEqual((report.values['lambdas'], report.values['classes'], report.values['mass']), (5, 2, '5/6'))
        self.assertTrue(report.succeed, msg=str(report))

        report = eisenstein.core.study.run_item('eichler', 13)
        self.assertEqual(report.values['mass'], '1')
        self.assertTrue(report.checks.by_id('eichler-mass').passed)
        self.assertTrue(report.checks.by_id('discriminant-closed-form').passed)

        report = eisenstein.core.study.run_item('supersingular', 181, 5, pairings=True)
        self.assertEqual((report.values['e1_e0'], report.values['e1_e1']), (0, 0))
        self.assertTrue(report.succeed, msg=str(report))

    def test_identity_suite(self):
        report = eisenstein.core.study.run_item('identity-suite', 11, 5, options={'identity_samples': '5'})
        self.assertEqual(report.r, 1)
        self.assertTrue(report.succeed, msg=str(report))
