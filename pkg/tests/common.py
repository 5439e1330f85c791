"""
Shared constants and the base test case. Tests that depend on a level run against one N:p pair, read from
EISENSTEIN_TEST_CASE (CI/tests_runner.py sets it for every case of CI/lockfile.yml). The default 181:5 is the smallest
level with g_5 >= 3 and keeps a local run short; p >= 5 is required since the modular symbols tests need it.

    $  EISENSTEIN_TEST_CASE=4229:7 python -m unittest -b

The CLI tests spawn the app as a subprocess, so to have them in the coverage use pytest-cov rather than plain coverage:
    $  pytest --cov=eisenstein --cov-branch --cov-report=html
"""

import inspect
import os
import shutil
import sys
import tempfile
import unittest

from pathlib import Path

import eisenstein.cli.app
import eisenstein.core.util


def _parse_case(text: str):
    try:
        N, p = (int(value) for value in text.split(':'))
    except ValueError:
        raise ValueError(f"EISENSTEIN_TEST_CASE should look like 'N:p', got '{text}'") from None
    if p < 5 or p not in eisenstein.core.util.eisenstein_primes(N):
        raise ValueError(f"EISENSTEIN_TEST_CASE: {p} is not an Eisenstein prime >= 5 of the level {N}")
    return N, p


CASE = os.environ.get('EISENSTEIN_TEST_CASE', default='181:5')
os.environ['EISENSTEIN_TEST_CASE'] = CASE  # inherited by the CLI subprocesses
CASE_N, CASE_P = _parse_case(CASE)
CASE_T = eisenstein.core.util.eisenstein_valuation(CASE_N, CASE_P)

# Config files and caches of a test live here. Removed on interpreter shutdown
TEMP_DIR = tempfile.TemporaryDirectory()
STAGE_PATH = Path(TEMP_DIR.name).joinpath('stage')

EISENSTEIN_MAIN_SCRIPT: str = inspect.getfile(eisenstein.cli.app.main)
PYTHON_EXEC: str = sys.executable

print(f"Test case: N = {CASE_N}, p = {CASE_P}, t = {CASE_T}")
print(f"App script: {EISENSTEIN_MAIN_SCRIPT}, Python: {PYTHON_EXEC} {sys.version.split()[0]}")
print(f"Stage: {STAGE_PATH}")
print()


class CustomTestCase(unittest.TestCase):
    """Every test gets an empty stage folder"""

    def setUp(self):
        shutil.rmtree(STAGE_PATH, ignore_errors=True)
        STAGE_PATH.mkdir(parents=True)

    def tearDown(self):
        shutil.rmtree(STAGE_PATH, ignore_errors=True)

    def assertChecksPass(self, checks, what: str = 'theorem-backed check'):
        """``checks`` is a CheckList; its text form lists every check so the failing one is visible"""
        self.assertTrue(checks.succeed, msg=f"{what} failed:\n{checks}")
