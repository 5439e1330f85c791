"""
Result records. A ``Check`` is one verified statement, a ``CheckList`` gathers the checks of a work item and an
``EisensteinReport`` is the record of one (N, p) item as it is emitted by the CLI.
"""

import csv
import enum
import io
import json
from typing import Any, Dict, List, Optional, Tuple

import eisenstein.core.settings


@enum.unique
class CheckKind(enum.Enum):
    THEOREM = 'theorem'  # proved: a failure is a bug and fails the run
    CONJECTURE = 'conjecture'  # open: a failure is a finding
    REPORTED = 'reported'  # evaluated and shown, never asserted


class Check:
    """Class representing a single verified statement"""

    def __init__(self, id: str, kind: CheckKind, passed: Optional[bool], detail: str = ''):
        """
        :param id: short stable identifier (used as a CSV column and in summaries)
        :param kind: theorem-backed, conjectural or purely informative
        :param passed: None means the hypothesis of the statement does not hold for this input
        :param detail: optional human-readable remark (values compared, reason of skip, ...)
        """
        self.id = id
        self.kind = kind
        self.passed = passed
        self.detail = detail

    @property
    def failed(self) -> bool:
        return self.passed is False

    @property
    def status(self) -> str:
        if self.passed is None:
            return 'skip'
        if self.passed:
            return 'ok'
        return 'error' if self.kind is CheckKind.THEOREM else 'finding'

    def to_dict(self) -> Dict[str, Any]:
        return dict(id=self.id, kind=self.kind.value, passed=self.passed, detail=self.detail)

    def __repr__(self) -> str:
        return f"Check({self.id!r}, {self.kind.value}, {self.passed})"


class CheckList(List[Check]):
    """
    Convenient container of checks allowing external code to easily interpret them: ``succeed`` tells whether every
    theorem-backed statement held, ``findings`` lists the failed conjectures
    """

    def add(self, id: str, kind: CheckKind, passed: Optional[bool], detail: str = '') -> Check:
        check = Check(id, kind, None if passed is None else bool(passed), detail)
        self.append(check)
        return check

    def theorem(self, id: str, passed: Optional[bool], detail: str = '') -> Check:
        return self.add(id, CheckKind.THEOREM, passed, detail)

    def conjecture(self, id: str, passed: Optional[bool], detail: str = '') -> Check:
        return self.add(id, CheckKind.CONJECTURE, passed, detail)

    def reported(self, id: str, passed: Optional[bool], detail: str = '') -> Check:
        return self.add(id, CheckKind.REPORTED, passed, detail)

    @property
    def succeed(self) -> bool:
        return not any(check.failed for check in self if check.kind is CheckKind.THEOREM)

    @property
    def findings(self) -> List[Check]:
        return [check for check in self if check.failed and check.kind is CheckKind.CONJECTURE]

    def by_id(self, id: str) -> Optional[Check]:
        return next((check for check in self if check.id == id), None)

    def __str__(self) -> str:
        width = max((len(check.id) for check in self), default=10)
        lines = []
        for check in self:
            line = f"[{check.status:>7}]  {check.id:<{width}}"
            if check.detail:
                line += f"  {check.detail}"
            lines.append(line)
        return '\n'.join(lines)


class EisensteinReport:
    """
    Record of one work item: a command applied to an (N, p) pair (p may be absent for per-level commands). Values are
    plain JSON-compatible data; checks carry the verdicts
    """

    def __init__(self, command: str, N: int, p: Optional[int] = None, r: Optional[int] = None,
                 t: Optional[int] = None):
        self.command = command
        self.N = N
        self.p = p
        self.r = r
        self.t = t
        self.status = 'ok'
        self.values: Dict[str, Any] = {}
        self.checks = CheckList()
        self.error: Optional[Dict[str, Any]] = None
        self.elapsed: Optional[float] = None

    @property
    def succeed(self) -> bool:
        """No theorem-backed failure: neither a failed check nor a theorem-violation error"""
        return self.checks.succeed and not (self.error is not None and self.error.get('theorem_backed'))

    def set_error(self, exc: BaseException, theorem_backed: bool, status: str = 'error') -> None:
        self.status = status
        self.error = dict(type=type(exc).__name__, message=str(exc), theorem_backed=theorem_backed)

    def to_dict(self) -> Dict[str, Any]:
        record = dict(schema=eisenstein.core.settings.schema_version, command=self.command, N=self.N, p=self.p,
                      r=self.r, t=self.t, status=self.status, values=self.values,
                      checks=[check.to_dict() for check in self.checks], error=self.error)
        if self.elapsed is not None:
            record['elapsed'] = round(self.elapsed, 3)
        return record

    @classmethod
    def from_dict(cls, record: Dict[str, Any]) -> 'EisensteinReport':
        """Inverse of ``to_dict`` (used by the cache)"""
        report = cls(record['command'], record['N'], record.get('p'), record.get('r'), record.get('t'))
        report.status = record.get('status', 'ok')
        report.values = record.get('values', {})
        for check in record.get('checks', []):
            report.checks.add(check['id'], CheckKind(check['kind']), check['passed'], check.get('detail', ''))
        report.error = record.get('error')
        report.elapsed = record.get('elapsed')
        return report

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(',', ':'))

    def csv_row(self) -> Dict[str, Any]:
        """Flat view: scalar values and one column per check"""
        row = dict(command=self.command, N=self.N, p=self.p, r=self.r, t=self.t, status=self.status)
        for key, value in self.values.items():
            row[key] = json.dumps(value, sort_keys=True) if isinstance(value, (list, dict)) else value
        for check in self.checks:
            row[f"check:{check.id}"] = check.status
        if self.error is not None:
            row['error'] = f"{self.error['type']}: {self.error['message']}"
        return row

    def __str__(self) -> str:
        header = f"{self.command}  N={self.N}" + (f" p={self.p}" if self.p is not None else '') + \
                 (f" r={self.r}" if self.r is not None else '') + (f" t={self.t}" if self.t is not None else '') + \
                 f"  [{self.status}]"
        lines = [header]
        if self.error is not None:
            lines.append(f"    {self.error['type']}: {self.error['message']}")
        for key, value in self.values.items():
            lines.append(f"    {key} = {value}")
        if len(self.checks):
            lines.extend('    ' + line for line in str(self.checks).splitlines())
        return '\n'.join(lines)


def render_csv(reports: List[EisensteinReport]) -> str:
    """Whole table at once since the set of columns is the union over all rows"""
    rows = [report.csv_row() for report in reports]
    columns: List[str] = []
    for row in rows:
        columns.extend(key for key in row if key not in columns)
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=columns, lineterminator='\n')
    writer.writeheader()
    writer.writerows(rows)
    return buffer.getvalue()


#
# Published values of g_p for prime levels N < 13000 and primes p >= 5 with g_p >= 3, as (N, p) -> (t, g_p). The gp
# command compares its results against this table whenever the pair is listed
#
GOLDEN_GP_PROVENANCE = "published table of g_p (prime N < 13000, p >= 5, g_p >= 3), transcribed by hand"

GOLDEN_GP = {
    (181, 5): (1, 3), (1571, 5): (1, 3), (2621, 5): (1, 3), (3001, 5): (3, 6), (3671, 5): (1, 5),
    (4931, 5): (1, 3), (5381, 5): (1, 3), (5651, 5): (2, 4), (5861, 5): (1, 4), (6451, 5): (2, 3),
    (9001, 5): (3, 4), (9521, 5): (1, 3), (10061, 5): (1, 3), (11321, 5): (1, 3), (12101, 5): (2, 4),
    (12301, 5): (2, 3), (12541, 5): (1, 3), (12641, 5): (1, 4), (12791, 5): (1, 3),
    (4159, 7): (1, 4), (4229, 7): (1, 3), (4957, 7): (1, 3), (7673, 7): (1, 3), (10627, 7): (1, 3),
    (11159, 7): (1, 3),
    (1321, 11): (1, 3),
    (6761, 13): (2, 3),
    (1381, 23): (1, 3),
}


def golden_gp(N: int, p: int) -> Optional[Tuple[int, int]]:
    """(t, g_p) from the published table or None when the pair is not listed"""
    return GOLDEN_GP.get((N, p))
