"""
Some service code not falling into more specific categories: versioning, mapping clean-up, elementary number theory
shared by all the computational modules and the cooperative time budget.
"""

import collections.abc
import contextlib
import contextvars
import importlib.metadata
import time
from fractions import Fraction
from typing import Any, Iterator, List, Mapping, Optional, Tuple, Union

import sympy

import eisenstein.core.errors as errors


def _get_version_from_scm() -> str:
    try:
        import setuptools_scm  # setuptools_scm is the dev-only dependency
    except ImportError:
        return "Portable (not-installed). See git tag"
    else:
        # Calculate the version at runtime retrieving it from the actual Git repo
        return setuptools_scm.get_version(root='../..', relative_to=__file__)


def get_version() -> str:
    """Retrieve the package version as string"""
    try:
        # The wheel build is done with setuptools_scm so the metadata carries the git-derived version
        return importlib.metadata.version('eisenstein')
    except importlib.metadata.PackageNotFoundError:
        try:
            import eisenstein.core.version  # auto-generated by setuptools_scm
        except ImportError:
            return _get_version_from_scm()
        else:
            # noinspection PyUnresolvedReferences
            return eisenstein.core.version.version


def cleanup_mapping(mapping: Mapping[str, Any]) -> dict:
    """Return a deep copy of the given mapping excluding None and empty string values"""
    cleaned = {}
    for key, value in mapping.items():
        if isinstance(value, collections.abc.Mapping):
            cleaned[key] = cleanup_mapping(value)
        elif value is not None and value != '':
            cleaned[key] = value
    return cleaned


def valuation(n: int, p: int) -> int:
    """p-adic valuation of a non-zero integer"""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def eisenstein_numerator(N: int) -> int:
    """Numerator of (N - 1)/12"""
    return Fraction(N - 1, 12).numerator


def eisenstein_primes(N: int) -> List[int]:
    """Primes dividing the numerator of (N - 1)/12, ascending"""
    numerator = eisenstein_numerator(N)
    return sorted(sympy.primefactors(numerator)) if numerator > 1 else []


def eisenstein_valuation(N: int, p: int) -> int:
    """t = v_p(numerator((N - 1)/12)): the largest r such that p^r divides the Eisenstein ideal index"""
    numerator = eisenstein_numerator(N)
    return valuation(numerator, p) if numerator % p == 0 else 0


def require_eisenstein(N: int, p: int, r: int) -> int:
    """Check that p^r divides the numerator of (N - 1)/12 and return t"""
    t = eisenstein_valuation(N, p)
    if t == 0:
        raise errors.NotEisensteinPrime(f"{p} does not divide the numerator of ({N} - 1)/12")
    if not 1 <= r <= t:
        raise errors.RangeError(f"r = {r} is outside 1..{t} for N = {N}, p = {p}")
    return t


def fraction_mod(x: Union[Fraction, int], modulus: int) -> int:
    """Image of a rational with a denominator coprime to the modulus"""
    x = Fraction(x)
    try:
        return x.numerator * pow(x.denominator, -1, modulus) % modulus
    except ValueError:
        raise ZeroDivisionError(f"denominator of {x} is not invertible modulo {modulus}") from None


def parse_range(text: str) -> Tuple[int, int]:
    """'A..B' (inclusive) -> (A, B)"""
    parts = text.split('..')
    if len(parts) != 2:
        raise ValueError(f"range should look like A..B, got '{text}'")
    start, stop = int(parts[0]), int(parts[1])
    if start > stop:
        raise ValueError(f"range {text} is empty")
    return start, stop


def parse_primes(text: str) -> List[int]:
    """Whitespace- or comma-separated list of primes"""
    values = [int(token) for token in text.replace(',', ' ').split()]
    for value in values:
        if not sympy.isprime(value):
            raise ValueError(f"{value} is not a prime")
    return values


def first_prime_at_least(bound: int, exclude: int = None) -> int:
    q = bound - 1
    while True:
        q = sympy.nextprime(q)
        if q != exclude:
            return q


#
# Cooperative time budget. Long loops call checkpoint() which raises once the deadline of the innermost active budget
# is over. The budget is scoped to the current context so pool workers and threads do not interfere
#
_deadline: contextvars.ContextVar = contextvars.ContextVar('eisenstein_deadline', default=None)


@contextlib.contextmanager
def time_budget(seconds: Optional[float]) -> Iterator[None]:
    """Everything inside the block must finish in the given number of seconds (None or 0: unlimited)"""
    token = _deadline.set(time.monotonic() + seconds if seconds else None)
    try:
        yield
    finally:
        _deadline.reset(token)


def checkpoint(stage: str = '') -> None:
    deadline = _deadline.get()
    if deadline is not None and time.monotonic() > deadline:
        raise errors.BudgetExceeded(f"time budget is over{' during ' + stage if stage else ''}")
