#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Runs the test suite once per N:p case listed in lockfile.yml (or the ones given on the command line). On Linux pytest
is used so every case leaves a JUnit report and appends to a single coverage file; elsewhere the plain unittest runner
"""

import argparse
import os
import platform
import subprocess
import sys
from pathlib import Path

import yaml


ROOT = Path(__file__).parent.parent


def locked_cases() -> list:
    variables = yaml.safe_load(Path(__file__).parent.joinpath('lockfile.yml').read_text())['variables']
    return yaml.safe_load(variables['test_cases'])  # the list is kept as a YAML string (pipeline variables are strings)


def command(case: str, first: bool) -> list:
    if platform.system() != 'Linux':
        return [sys.executable, '-m', 'unittest', '-b', '-v']
    report = f"junit/test-{case.replace(':', '-')}.xml"
    args = [sys.executable, '-m', 'pytest', 'tests', f'--junitxml={report}', '-o', 'junit_family=xunit2',
            '--cov=eisenstein', '--cov-branch']
    if not first:
        args.append('--cov-append')
    return args


if __name__ == '__main__':
    parser = argparse.ArgumentParser(description="Run the tests for every N:p case")
    parser.add_argument('cases', nargs='*', metavar='N:p', help="cases to run (default: the ones from the lockfile)")
    cases = parser.parse_args().cases or locked_cases()

    results = {}
    for index, case in enumerate(cases):
        print(f"==== EISENSTEIN_TEST_CASE={case} ====", flush=True)
        env = dict(os.environ, EISENSTEIN_TEST_CASE=case)
        results[case] = subprocess.run(command(case, index == 0), cwd=ROOT, env=env).returncode

    if platform.system() == 'Linux':
        subprocess.run([sys.executable, '-m', 'coverage', 'xml'], cwd=ROOT)

    for case, code in results.items():
        print(f"{case:>12}  {'ok' if code == 0 else f'FAILED ({code})'}")
    sys.exit(int(any(results.values())))
