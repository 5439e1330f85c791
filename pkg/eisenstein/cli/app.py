#!/usr/bin/env python
# -*- coding: utf-8 -*-

import argparse
import collections
import inspect
import json
import logging
import multiprocessing
import sys
from pathlib import Path
from typing import Any, Dict, Iterator, List, Mapping, Optional, Tuple

MODULE_PATH = Path(__file__).parent  # module path, e.g. root/eisenstein/cli/

# Package root, e.g. root/ (so if ran from sources, this is a repository folder;
# if the package is installed, it is a site-package entry
ROOT_PATH = MODULE_PATH.parent.parent

try:
    import eisenstein.core.log
except ModuleNotFoundError:
    sys.path.append(str(ROOT_PATH))  # hack to be able to run the app as 'python path/to/app.py'
finally:
    import eisenstein.core.cache
    import eisenstein.core.config
    import eisenstein.core.log
    import eisenstein.core.report
    import eisenstein.core.settings
    import eisenstein.core.study
    import eisenstein.core.util


# Commands working on (N, p) pairs default to every Eisenstein prime of the level; the other ones are per-level
PAIR_COMMANDS = ('criteria', 'gp', 'conjectures', 'identity-suite')


def parse_args(args: List[str]) -> Optional[argparse.Namespace]:
    """
    Parse command line arguments.

    :param args: list of CLI arguments
    :return: argparse.Namespace or None if no arguments were given
    """

    root = argparse.ArgumentParser(description=inspect.cleandoc('''
        Numerical study of the Eisenstein ideal of prime level N: the rank criteria, the depth g_p of the Eisenstein
        element computed with modular symbols, the supersingular side (Hasse polynomial, higher Eichler formulas,
        isogeny identities) and the conjectural identities. Records are written to STDOUT (JSON Lines by default), the
        log goes to STDERR. Use 'eisenstein [command] -h' to see help on the particular command'''))

    # Global arguments (there is also an automatically added '-h, --help' option)
    root.add_argument('--version', action='version', version=f"eisenstein {eisenstein.core.util.get_version()}")
    root.add_argument('-v', '--verbose', help="enable verbose output (default level: INFO)", action='count', default=1)

    sub = root.add_subparsers(dest='command', title='commands', description="valid commands", help="available actions")

    criteria = sub.add_parser('criteria', help="evaluate the elementary criteria for n(r,p) >= 2 and >= 3")
    gp = sub.add_parser('gp', help="compute g_p and the Newton invariants n(r,p) with modular symbols")
    supersingular = sub.add_parser('supersingular', help="build the supersingular lambda-invariants and verify their "
                                                         "structure, U_2 and the isogeny identities")
    eichler = sub.add_parser('eichler', help="mass formula, Hasse discriminant and (with --p) the pairing identities")
    conjectures = sub.add_parser('conjectures', help="sweep the propositions and conjectural identities, summarize")
    identity_suite = sub.add_parser('identity-suite', help="verify the identities between the logarithmic sums")

    # Assign options to commands
    all_commands = [criteria, gp, supersingular, eichler, conjectures, identity_suite]
    for command in all_commands:
        levels = command.add_mutually_exclusive_group()
        levels.add_argument('--N', dest='N', type=int, help="single prime level")
        levels.add_argument('--range', dest='range', help="inclusive range of levels A..B (primes only)")
        levels.add_argument('--max-N', dest='max_N', type=int, help="same as --range 5..MAX_N")
        command.add_argument('--p', dest='p', help="prime or 'all' (every Eisenstein prime of the level)")
        command.add_argument('--r', dest='r', type=int, help="modulus exponent (1 <= r <= t)")
        command.add_argument('--format', dest='format', choices=eisenstein.core.settings.output_formats,
                             help="output format (default: json, i.e. JSON Lines)")
        command.add_argument('--cache-dir', dest='cache_dir', help="folder keeping the computed records")
        command.add_argument('--audit-cache', dest='audit_cache', type=int, metavar='K',
                             help="recompute K random cached records and compare")
        command.add_argument('--threads', dest='threads', type=int, help="number of worker processes")
        command.add_argument('--budget-secs', dest='budget_secs', type=float,
                             help="time budget per item, 0 disables it")
        command.add_argument('--timings', action='store_true', default=None, help="add elapsed seconds to the records")
        command.add_argument('-d', '--directory', dest='path', default=Path.cwd(),
                             help=f"folder with the {eisenstein.core.settings.config_file_name} config (current "
                                  "directory, if not given)")
    gp.add_argument('--gens-max-prime', dest='gens_max_prime', type=int,
                    help="largest prime l used for the T_l - l - 1 generators")
    gp.add_argument('--with-atkin-lehner', action='store_true', default=None, help="add w_N + 1 to the generators")
    supersingular.add_argument('--pairings', action='store_true', help="also verify the pairing identities (needs p)")

    if len(args) == 0:
        root.print_help()
        return None

    return root.parse_args(args)


def setup_logging(verbose: int = 1, dummy: bool = False) -> logging.Logger:
    """
    Prepare a logging setup suitable for a CLI application. Keep in mind, though, that Python ``logging`` module, in
    general, mutates some internal global state, so be careful not to invoke this procedure twice in a single "session"
    to avoid any unwanted interfering and possible slowdowns.

    :param verbose: verbosity counter (currently only 2 levels are supported: NORMAL, VERBOSE (starts from 1))
    :param dummy: if True, the function will create a "/dev/null" logger instead (no operation)
    :return: configured and ready-to-use root logger instance of the package
    """
    if dummy:
        logger = logging.getLogger(__name__)
        logger.addHandler(logging.NullHandler())
    else:
        logger = logging.getLogger('eisenstein')
        logger.setLevel(logging.DEBUG if verbose >= 2 else logging.INFO)
        handler = logging.StreamHandler(sys.stderr)  # STDOUT carries the records only
        formatter = eisenstein.core.log.DispatchingFormatter(
            verbosity=eisenstein.core.log.Verbosity(min(verbose, eisenstein.core.log.Verbosity.VERBOSE)))
        handler.setFormatter(formatter)
        logger.addHandler(handler)
        logger.debug("debug logging enabled")  # will be printed only in verbose mode
    return logger


def runtime_parameters(args: argparse.Namespace) -> Dict[str, Dict[str, Any]]:
    """CLI values in the config layout (None values never override anything)"""
    interval = args.range if args.range is not None else (f"5..{args.max_N}" if args.max_N is not None else None)
    p = args.p if args.p is not None else ('all' if args.command in PAIR_COMMANDS else None)
    return {
        'scan': {'command': args.command, 'N': args.N, 'range': interval, 'p': p, 'r': args.r},
        'engine': {'generators_max_prime': getattr(args, 'gens_max_prime', None),
                   'with_atkin_lehner': getattr(args, 'with_atkin_lehner', None)},
        'app': {'format': args.format, 'cache_dir': args.cache_dir, 'threads': args.threads,
                'budget_secs': args.budget_secs, 'timings': args.timings}
    }


Task = Tuple[str, int, Optional[int], Optional[int], Mapping[str, Any], float, bool, bool, str, Mapping[str, Any]]


def process_item(task: Task) -> eisenstein.core.report.EisensteinReport:
    """Pool worker: cached record if present, otherwise compute (and store) it"""
    command, N, p, r, options, budget, timings, pairings, cache_dir, cache_options = task
    cache = eisenstein.core.cache.ResultCache(Path(cache_dir), options=cache_options) if cache_dir else None
    if cache is not None:
        cached = cache.get(command, N, p, r)
        if cached is not None:
            logging.getLogger('eisenstein.cli').debug(f"N={N} p={p}: cache hit")
            return cached
    report = eisenstein.core.study.run_item(command, N, p, r, options=options, budget_secs=budget, timings=timings,
                                            pairings=pairings)
    if cache is not None:
        cache.put(report, r)
    return report


def run_tasks(tasks: List[Task], threads: int) -> Iterator[eisenstein.core.report.EisensteinReport]:
    """Records in the order of the tasks regardless of the completion order"""
    if threads > 1 and len(tasks) > 1:
        with multiprocessing.Pool(processes=threads) as pool:
            yield from pool.imap(process_item, tasks)
    else:
        yield from map(process_item, tasks)


def conjectures_summary(reports: List[eisenstein.core.report.EisensteinReport]) -> Dict[str, Any]:
    tally = collections.OrderedDict()
    for report in reports:
        for check in report.checks:
            counts = tally.setdefault(check.id, {'kind': check.kind.value, 'pass': 0, 'fail': 0, 'skip': 0})
            counts['skip' if check.passed is None else 'pass' if check.passed else 'fail'] += 1
    return dict(schema=eisenstein.core.settings.schema_version, command='conjectures-summary', items=len(reports),
                errors=sum(report.status != 'ok' for report in reports), checks=tally)


def main(sys_argv: List[str] = None, should_setup_logging: bool = True) -> int:
    """
    Entry point to the CLI edition of application. Since this is a highest-order wrapper, it can be used to
    programmatically the application (for testing, embedding, etc.). Example:

        ret_code = eisenstein.cli.app.main(sys_argv=['gp', '--N', '181', '--p', '5'])

    :param sys_argv: list of CLI arguments
    :param should_setup_logging: if True, a reasonable default logging schema would be applied, otherwise it is on
    caller to resolve (or not) some logging configuration. The latter can be useful when an outer code makes sequential
    calls to this API so it is unwanted to append logging handlers every time (e.g. when unit-testing)
    :return: 0 if no item reported a theorem-backed failure, -1 otherwise
    """

    if sys_argv is None:
        sys_argv = sys.argv[1:]

    args = parse_args(sys_argv)

    if args is not None and args.command is not None:
        logger = setup_logging(verbose=args.verbose, dummy=not should_setup_logging)
    else:
        print("\nNo arguments were given, exiting...")
        return 0

    # Wrap the main routine into try...except to gently handle possible error (API is designed to throw in certain
    # situations when it doesn't make much sense to continue with the met conditions)
    try:
        config = eisenstein.core.config.RunConfig(Path(args.path).expanduser(), logger,
                                                  runtime_parameters=runtime_parameters(args))
        if logger.isEnabledFor(logging.DEBUG):
            logger.debug(f"resolved config:\n{config}")

        targets = config.targets(min_p=5 if args.command == 'gp' else 2)
        if not len(targets):
            raise ValueError("no work items: the range holds no level with a suitable prime")
        output_format = config.get('app', 'format')
        r = config.get_optional_int('scan', 'r')
        options = dict(config['engine'])
        pairings = bool(getattr(args, 'pairings', False))
        cache_dir = config.get('app', 'cache_dir', fallback='')
        cache_options = dict(options, pairings=pairings)
        budget = config.getfloat('app', 'budget_secs')
        timings = config.get('app', 'timings').lower() in eisenstein.core.settings.yes_options
        tasks = [(args.command, N, p, r, options, budget, timings, pairings, cache_dir, cache_options)
                 for N, p in targets]
        logger.info(f"{args.command}: {len(tasks)} item(s)")

        reports = []
        for report in run_tasks(tasks, config.getint('app', 'threads')):
            reports.append(report)
            if output_format == 'json':
                print(report.to_json(), flush=True)
            elif output_format == 'human':
                print(report, flush=True)
        if output_format == 'csv':
            print(eisenstein.core.report.render_csv(reports), end='', flush=True)

        if args.command == 'conjectures':
            summary = conjectures_summary(reports)
            if output_format == 'json':
                print(json.dumps(summary, sort_keys=True, separators=(',', ':')), flush=True)
            else:
                logger.info("conjectures summary:\n" + '\n'.join(
                    f"{id:<24} {c['kind']:<10} pass {c['pass']}, fail {c['fail']}, skip {c['skip']}"
                    for id, c in summary['checks'].items()))

        succeed = all(report.succeed for report in reports)

        if args.audit_cache:
            if not cache_dir:
                raise ValueError("--audit-cache needs a cache directory (--cache-dir)")
            cache = eisenstein.core.cache.ResultCache(Path(cache_dir), options=cache_options)
            audit = cache.audit(args.audit_cache, lambda command, N, p, r_: eisenstein.core.study.run_item(
                command, N, p, r_, options=options, budget_secs=budget, pairings=pairings))
            mismatches = [key for key, matches in audit if not matches]
            logger.info(f"cache audit: {len(audit) - len(mismatches)} of {len(audit)} entries match")
            succeed = succeed and not mismatches

    except (Exception,):
        eisenstein.core.log.log_current_exception(logger)
        return -1

    if not succeed:
        logger.error("some item reported a theorem-backed failure")
        return -1
    return 0


if __name__ == '__main__':
    sys.exit(main())
