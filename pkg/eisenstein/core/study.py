"""
Core class representing the study of a single level N (optionally paired with an Eisenstein prime p). This interface is
what the CLI drives: every command is a method filling an ``EisensteinReport``; ``run_item`` wraps one call with the
time budget and the error classification so a range scan never stops on a single item.
"""

import logging
import time
from fractions import Fraction
from typing import Any, Callable, Dict, Mapping, Optional

import numpy as np

import eisenstein.core.errors as errors
import eisenstein.core.log
import eisenstein.core.settings
import eisenstein.core.util as util
from eisenstein.core.conjectures import conjecture_suite, gamma2_eisenstein_elements
from eisenstein.core.criteria import criteria_report, identity_suite
from eisenstein.core.dlog import LogMap
from eisenstein.core.elements import f0_element, f02_element, f1_element
from eisenstein.core.fields import field_ctx_new
from eisenstein.core.filtration import eisenstein_filtration, newton_invariants
from eisenstein.core.manin import build_manin_space
from eisenstein.core.poly import discriminant
from eisenstein.core.report import CheckList, EisensteinReport, golden_gp
from eisenstein.core.supersingular import (e1_p3_check, hasse_disc_closed, pairing_checks, supersingular_set,
                                           two_adic_report, verify_hprime_product, verify_p_values,
                                           verify_phi2_resultant, verify_u2_multiplicative)


COMMANDS = ('criteria', 'gp', 'supersingular', 'eichler', 'conjectures', 'identity-suite')


class EisensteinStudy:
    """
    Single level N with an optional prime p. Options come from the 'engine' config section (as strings or native
    values). Every command method takes the report to fill and returns nothing: values go to ``report.values`` and the
    verdicts to ``report.checks``
    """

    def __init__(self, N: int, p: Optional[int] = None, options: Mapping[str, Any] = None,
                 logger: eisenstein.core.log.Logger = None):
        self.N = N
        self.p = p
        if logger is not None:
            self.logger = logger
        else:
            self.logger = eisenstein.core.log.PairLogger(logging.getLogger('eisenstein.pairs'), N=N, p=p)
        defaults = eisenstein.core.settings.config_default['engine']
        self.options = {**defaults, **(options or {})}
        self.ctx = field_ctx_new(N)

    def __repr__(self) -> str:
        return f"EisensteinStudy(N={self.N}, p={self.p})"

    def _primes_option(self, key: str):
        value = self.options[key]
        return util.parse_primes(value) if isinstance(value, str) else list(value)

    def _bool_option(self, key: str) -> bool:
        value = self.options[key]
        if isinstance(value, str):
            return value.lower() in eisenstein.core.settings.yes_options
        return bool(value)

    def _require_p(self) -> int:
        if self.p is None:
            raise errors.UnsupportedPrime("this command needs a prime p (use --p)")
        return self.p

    def _merge(self, report: EisensteinReport, checks: CheckList) -> None:
        report.checks.extend(checks)
        for check in checks.findings:
            self.logger.warning(f"{check.id} does not hold ({check.detail})" if check.detail else
                                f"{check.id} does not hold", finding=True)

    def criteria(self, report: EisensteinReport, r: Optional[int] = None) -> None:
        p = self._require_p()
        result = criteria_report(self.ctx, p, r or 1)
        report.r, report.t = result.r, result.t
        report.values.update(result.to_dict())
        self._merge(report, result.checks)

    def gp(self, report: EisensteinReport, r: Optional[int] = None) -> None:
        """
        Newton invariants from the modular-symbols engine, the criteria cross-check, the m0+/m1+ verifications and the
        comparison with the published table. With ``r`` only the depth at that modulus is computed
        """
        p = self._require_p()
        if p < 5:
            raise errors.UnsupportedPrime(f"the filtration engine needs p >= 5, got p = {p}")
        t = util.require_eisenstein(self.N, p, r or 1)
        report.t = t
        generators = self._primes_option('generators')
        max_prime = int(self.options['generators_max_prime'])
        with_atkin_lehner = self._bool_option('with_atkin_lehner')
        check_primes = self._primes_option('hecke_check_primes')

        space = build_manin_space(self.ctx, p, r or t)
        self.logger.info(f"Manin space of dimension {space.dimension} (genus {space.genus}) built")
        checks = CheckList()
        if r is not None:
            report.r = r
            filtration = eisenstein_filtration(space, generators, max_prime, with_atkin_lehner)
            checks.extend(filtration.checks)
            report.values.update(filtration.to_dict())
            self._merge(report, checks)
            return

        newton = newton_invariants(self.ctx, p, generators, max_prime, with_atkin_lehner, space=space)
        report.values.update(newton.to_dict())

        # m0+, m1+ at the first level of the tower
        base = space.reduced(1)
        lm = LogMap(self.ctx, p, 1)
        m0 = f0_element(base, check_primes=check_primes, checks=checks)
        f1_element(base, lm, m0=m0, check_primes=check_primes, checks=checks)

        # Hecke multiplicativity on a couple of coprime pairs
        for n, m in ((2, 3), (2, 5)):
            if self.N in (n, m):
                continue
            product = base.hecke_tn(n) @ base.hecke_tn(m) % base.modulus
            checks.theorem(f'hecke-t{n}t{m}', np.array_equal(product, base.hecke_tn(n * m)), f"T_{n} T_{m} = T_{n * m}")

        criteria = criteria_report(self.ctx, p, 1)
        g_p = newton.g_p
        checks.theorem('criterion-ge2', criteria.ge2 == (g_p >= 2), f"S1 = 0: {criteria.ge2}, g_p = {g_p}")
        checks.theorem('criterion-ge3', criteria.ge3 == (g_p >= 3), f"S1 = S2 = 0: {criteria.ge3}, g_p = {g_p}")

        golden = golden_gp(self.N, p)
        if golden is not None:
            checks.theorem('golden-table', golden == (t, g_p), f"published (t, g_p) = {golden}")
        elif g_p >= 3 and self.N < 13000:
            checks.reported('golden-table', False, f"g_p = {g_p} >= 3 but the pair is not in the published table")
        self._merge(report, checks)

    def supersingular(self, report: EisensteinReport, r: Optional[int] = None, pairings: bool = False) -> None:
        ss = supersingular_set(self.ctx)
        report.values.update(lambdas=len(ss), classes=len(ss.orbits), mass=str(ss.mass),
                             j_invariants=sorted(str(orbit.j) for orbit in ss.orbits))
        checks = CheckList(ss.checks)
        checks.extend(verify_p_values(ss))
        u2 = verify_u2_multiplicative(ss)
        checks.theorem('u2-multiplicative', all(u2.values()), f"{sum(u2.values())} of {len(u2)}")
        checks.theorem('phi2-resultant', verify_phi2_resultant(ss), "Res_X(H, phi_2) = H(Y)^2")
        for ell in self._primes_option('isogeny_degrees'):
            if ell == self.N:
                continue
            products = verify_hprime_product(ss, ell)
            checks.theorem(f'hprime-product-{ell}', all(products.values()), f"{sum(products.values())} of {len(ss)}")
        self._merge(report, checks)
        if pairings:
            self._pairings(report, ss, r)

    def _pairings(self, report: EisensteinReport, ss, r: Optional[int]) -> None:
        p = self._require_p()
        t = util.require_eisenstein(self.N, p, r or 1)
        report.r, report.t = r or 1, t
        if p >= 5:
            values, checks = pairing_checks(ss, LogMap(self.ctx, p, r or 1))
            report.values.update(values)
        elif p == 3:
            checks = e1_p3_check(ss)
        elif self.N % 8 == 1:
            values, checks = two_adic_report(ss)
            report.values.update(values)
        else:
            checks = CheckList()
            checks.reported('two-adic', None, "needs N = 1 mod 8")
        self._merge(report, checks)

    def eichler(self, report: EisensteinReport, r: Optional[int] = None) -> None:
        ss = supersingular_set(self.ctx)
        checks = CheckList()
        report.values.update(mass=str(ss.mass), expected_mass=f"{self.N - 1}/12")
        checks.theorem('eichler-mass', ss.mass == Fraction(self.N - 1, 12))
        closed, computed = hasse_disc_closed(self.ctx), discriminant(ss.hasse)
        report.values.update(discriminant=computed)
        checks.theorem('discriminant-closed-form', closed == computed, f"closed form {closed}, resultant {computed}")
        self._merge(report, checks)
        if self.p is not None:
            self._pairings(report, ss, r)

    def conjectures(self, report: EisensteinReport, r: Optional[int] = None) -> None:
        p = self._require_p()
        report.t = util.require_eisenstein(self.N, p, r or 1)
        report.r = r or 1
        ss = supersingular_set(self.ctx)
        lm = LogMap(self.ctx, p, r or 1)
        checks = conjecture_suite(ss, lm)
        if p >= 5:
            _, gamma2_checks = gamma2_eisenstein_elements(ss, lm, tuple(self._primes_option('isogeny_degrees')))
            checks.extend(gamma2_checks)
        if p == 2 and self.N % 8 == 1:
            _, f02_checks = f02_element(self.ctx, seed=int(self.options['random_seed']))
            checks.extend(f02_checks)
        self._merge(report, checks)

    def identity_suite(self, report: EisensteinReport, r: Optional[int] = None) -> None:
        p = self._require_p()
        report.t = util.require_eisenstein(self.N, p, r or 1)
        lm = LogMap(self.ctx, p, r or 1)
        report.r = lm.max_r  # identities live at p^(v_p(N - 1))
        checks = identity_suite(lm, samples=int(self.options['identity_samples']),
                                seed=int(self.options['random_seed']))
        self._merge(report, checks)


def _method(study: EisensteinStudy, command: str) -> Callable[..., None]:
    return getattr(study, command.replace('-', '_'))


def run_item(command: str, N: int, p: Optional[int] = None, r: Optional[int] = None,
             options: Mapping[str, Any] = None, budget_secs: float = None, timings: bool = False,
             pairings: bool = False) -> EisensteinReport:
    """
    Run one command on one (N, p) item and return its record. Precondition failures and reportable outcomes become
    'error' records, an exhausted budget a 'timeout' record; theorem violations are flagged as theorem-backed. Nothing
    is raised except for genuine bugs of other kinds
    """
    if command not in COMMANDS:
        raise ValueError(f"unknown command '{command}', expected one of {COMMANDS}")
    report = EisensteinReport(command, N, p, r)
    logger = eisenstein.core.log.PairLogger(logging.getLogger('eisenstein.pairs'), N=N, p=p)
    start = time.perf_counter()
    try:
        with util.time_budget(budget_secs):
            study = EisensteinStudy(N, p, options=options, logger=logger)
            kwargs: Dict[str, Any] = dict(r=r)
            if command == 'supersingular':
                kwargs['pairings'] = pairings
            _method(study, command)(report, **kwargs)
    except errors.BudgetExceeded as e:
        logger.warning(str(e))
        report.set_error(e, theorem_backed=False, status='timeout')
    except errors.TheoremViolation as e:
        eisenstein.core.log.log_current_exception(logger)
        report.set_error(e, theorem_backed=True)
    except errors.EisensteinError as e:
        logger.debug(f"{type(e).__name__}: {e}")
        report.set_error(e, theorem_backed=False)
    else:
        if not report.checks.succeed:
            logger.error("theorem-backed check failed:\n" + str(report.checks))
    if timings:
        report.elapsed = time.perf_counter() - start
    return report
