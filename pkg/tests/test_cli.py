import contextlib
import io
import json
import subprocess

# Provides test constants and definitions
from tests.common import *

import eisenstein.cli.app
import eisenstein.core.settings


class TestCLI(CustomTestCase):
    """
    Some tests to mimic the behavior of end-user tasks (CLI commands such as 'criteria', 'gp', etc.). Run the main
    function passing the arguments to it but sometimes even run as subprocess (to capture actual STDOUT/STDERR output)
    """

    def run_main(self, *args: str):
        """Return code and the STDOUT of a single in-process run (the config folder is the stage)"""
        buffer_stdout = io.StringIO()
        with contextlib.redirect_stdout(buffer_stdout):
            return_code = eisenstein.cli.app.main(sys_argv=[*args, '--directory', str(STAGE_PATH)],
                                                  should_setup_logging=False)
        return return_code, buffer_stdout.getvalue()

    def test_no_arguments(self):
        buffer_stdout = io.StringIO()
        with contextlib.redirect_stdout(buffer_stdout):
            return_code = eisenstein.cli.app.main(sys_argv=[], should_setup_logging=False)
        self.assertEqual(return_code, 0, msg="Non-zero return code")
        self.assertIn("No arguments were given", buffer_stdout.getvalue())

    def test_criteria(self):
        return_code, output = self.run_main('criteria', '--N', '181', '--p', '5')
        self.assertEqual(return_code, 0, msg="Non-zero return code")

        lines = output.splitlines()
        self.assertEqual(len(lines), 1, msg="One record per item is expected")
        record = json.loads(lines[0])
        self.assertEqual((record['command'], record['N'], record['p'], record['status']), ('criteria', 181, 5, 'ok'))
        self.assertTrue(record['values']['ge2'])
        self.assertEqual(record['schema'], eisenstein.core.settings.schema_version)
        self.assertNotIn('elapsed', record, msg="timings should be off by default")

    def test_precondition_error_record(self):
        """7 is not an Eisenstein prime for N = 11: an error record, not a failed run"""
        return_code, output = self.run_main('criteria', '--N', '11', '--p', '7')
        self.assertEqual(return_code, 0, msg="Non-zero return code")
        record = json.loads(output)
        self.assertEqual(record['status'], 'error')
        self.assertEqual(record['error']['type'], 'NotEisensteinPrime')

    def test_scan(self):
        """Every Eisenstein prime of every prime level in the range, in order"""
        return_code, output = self.run_main('criteria', '--range', '5..20', '--format', 'json')
        records = [json.loads(line) for line in output.splitlines()]
        self.assertEqual([(record['N'], record['p']) for record in records], [(11, 5), (17, 2), (19, 3)])

        with self.subTest(msg="--max-N is the same as a range from 5"):
            _, same_output = self.run_main('criteria', '--max-N', '20')
            self.assertEqual(same_output, output)

    def test_formats(self):
        with self.subTest(format='csv'):
            return_code, output = self.run_main('criteria', '--N', '181', '--p', '5', '--format', 'csv')
            self.assertEqual(return_code, 0, msg="Non-zero return code")
            lines = output.splitlines()
            self.assertEqual(len(lines), 2)
            self.assertTrue(lines[0].startswith('command,N,p,r,t,status'))
            self.assertTrue(lines[1].startswith('criteria,181,5,1,1,ok'))

        with self.subTest(format='human'):
            return_code, output = self.run_main('criteria', '--N', '181', '--p', '5', '--format', 'human')
            self.assertEqual(return_code, 0, msg="Non-zero return code")
            self.assertTrue(output.startswith('criteria  N=181 p=5 r=1 t=1  [ok]'))

    def test_config_file(self):
        """Values of the eisenstein.ini file are used unless the CLI overrides them"""
        STAGE_PATH.joinpath(eisenstein.core.settings.config_file_name).write_text("[app]\nformat = csv\n")
        _, output = self.run_main('criteria', '--N', '181', '--p', '5')
        self.assertTrue(output.startswith('command,'), msg="format from the config file is ignored")
        _, output = self.run_main('criteria', '--N', '181', '--p', '5', '--format', 'json')
        self.assertEqual(json.loads(output)['N'], 181, msg="CLI value should win over the config file")

    def test_cache(self):
        cache_dir = STAGE_PATH.joinpath('cache')
        _, first = self.run_main('criteria', '--N', '181', '--p', '5', '--cache-dir', str(cache_dir))
        self.assertEqual(len(list(cache_dir.glob('*.json'))), 1, msg="record has not been cached")
        return_code, second = self.run_main('criteria', '--N', '181', '--p', '5', '--cache-dir', str(cache_dir),
                                            '--audit-cache', '1')
        self.assertEqual(return_code, 0, msg="cached record differs from the recomputed one")
        self.assertEqual(first, second)

    def test_conjectures_summary(self):
        _, output = self.run_main('conjectures', '--N', '181', '--p', '5')
        lines = output.splitlines()
        self.assertEqual(len(lines), 2)
        summary = json.loads(lines[-1])
        self.assertEqual(summary['command'], 'conjectures-summary')
        self.assertEqual(summary['items'], 1)
        self.assertIn('log-lambda-squares', summary['checks'])

    def test_should_log_error(self):
        """
        We should see an error log message and a non-zero return code
        """
        with self.subTest(error="Bad range"):
            with self.assertLogs(level='ERROR') as logs:
                return_code, output = self.run_main('criteria', '--range', '20..5')
            self.assertNotEqual(return_code, 0, msg="Return code should be non-zero")
            self.assertEqual(output, '', msg="no record should be printed")
            self.assertTrue(next((True for msg in logs.output if '20..5' in msg), False),
                            msg="'ERROR' logging message hasn't been printed")

        with self.subTest(error="Audit without a cache"):
            with self.assertLogs(level='ERROR') as logs:
                return_code, _ = self.run_main('criteria', '--N', '181', '--p', '5', '--audit-cache', '1')
            self.assertNotEqual(return_code, 0, msg="Return code should be non-zero")
            self.assertTrue(next((True for msg in logs.output if '--cache-dir' in msg), False),
                            msg="'ERROR' logging message hasn't been printed")

    def test_verbosity(self):
        """
        Completely isolate runs by using subprocess. Records go to STDOUT, the log to STDERR
        """
        with self.subTest(verbosity_level='normal'):
            result = subprocess.run([PYTHON_EXEC, EISENSTEIN_MAIN_SCRIPT, 'criteria', '--N', '181', '--p', '5',
                                     '--directory', str(STAGE_PATH)],
                                    stdout=subprocess.PIPE, stderr=subprocess.PIPE, encoding='utf-8')
            self.assertEqual(result.returncode, 0, msg="Non-zero return code")
            self.assertNotIn('DEBUG', result.stderr, msg="Verbose logging output has been enabled on stderr")
            self.assertIn('INFO', result.stderr)
            self.assertEqual(json.loads(result.stdout)['N'], 181, msg="STDOUT should carry the record only")

        with self.subTest(verbosity_level='verbose'):
            result = subprocess.run([PYTHON_EXEC, EISENSTEIN_MAIN_SCRIPT, '-v', 'criteria', '--N', '181', '--p', '5',
                                     '--directory', str(STAGE_PATH)],
                                    stdout=subprocess.PIPE, stderr=subprocess.PIPE, encoding='utf-8')
            self.assertEqual(result.returncode, 0, msg="Non-zero return code")
            self.assertIn('DEBUG', result.stderr, msg="Verbose logging output hasn't been enabled on STDERR")
            self.assertEqual(len(result.stdout.splitlines()), 1)

    def test_version(self):
        result = subprocess.run([PYTHON_EXEC, EISENSTEIN_MAIN_SCRIPT, '--version'],
                                stdout=subprocess.PIPE, stderr=subprocess.PIPE, encoding='utf-8')
        self.assertEqual(result.returncode, 0, msg="Non-zero return code")
        self.assertTrue(result.stdout.startswith('eisenstein '))
