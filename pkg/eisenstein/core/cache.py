"""
On-disk cache of the per-item records. One JSON file per key; the key combines the command, the pair, the modulus
exponent, the package version and a digest of the options that change the result, so a different setup never reads a
stale record.
"""

import hashlib
import json
import logging
import os
import random
import tempfile
from pathlib import Path
from typing import Any, Callable, List, Mapping, Optional, Tuple

import eisenstein.core.util
from eisenstein.core.report import EisensteinReport


_module_logger = logging.getLogger(__name__)


def options_digest(options: Mapping[str, Any]) -> str:
    text = json.dumps({key: str(value) for key, value in options.items()}, sort_keys=True)
    return hashlib.sha256(text.encode('utf-8')).hexdigest()[:16]


class ResultCache:
    """Directory of cached ``EisensteinReport`` records"""

    def __init__(self, directory: Path, options: Mapping[str, Any] = None, version: str = None):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self.version = version if version is not None else eisenstein.core.util.get_version()
        self.digest = options_digest(options or {})

    def __repr__(self) -> str:
        return f"ResultCache({str(self.directory)!r}, version={self.version!r})"

    def key(self, command: str, N: int, p: Optional[int], r: Optional[int]) -> str:
        version = ''.join(c if c.isalnum() or c in '.-' else '_' for c in self.version)
        return f"{command}_{N}_{p if p is not None else 'x'}_{r if r is not None else 'x'}_{version}_{self.digest}"

    def _path(self, key: str) -> Path:
        return self.directory / f"{key}.json"

    def get(self, command: str, N: int, p: Optional[int], r: Optional[int]) -> Optional[EisensteinReport]:
        path = self._path(self.key(command, N, p, r))
        try:
            with path.open(encoding='utf-8') as file:
                return EisensteinReport.from_dict(json.load(file))
        except FileNotFoundError:
            return None
        except (ValueError, KeyError) as e:
            _module_logger.warning(f"ignoring corrupted cache entry {path.name}: {e}")
            return None

    def put(self, report: EisensteinReport, r: Optional[int] = None) -> None:
        """
        Store the record under the requested modulus exponent ``r`` (None if the command default was used) so a later
        ``get`` with the same request finds it. Timeouts are never stored (they depend on the machine). Written to a
        temporary file and moved in place
        """
        if report.status == 'timeout':
            return
        path = self._path(self.key(report.command, report.N, report.p, r))
        record = report.to_dict()
        record.pop('elapsed', None)
        # Use mkstemp() in the target folder so the final os.replace() stays on the same filesystem
        descriptor, temporary_name = tempfile.mkstemp(dir=self.directory, suffix='.tmp')
        try:
            with os.fdopen(descriptor, mode='w', encoding='utf-8') as file:
                json.dump(record, file, sort_keys=True)
            os.replace(temporary_name, path)
        except Exception:
            Path(temporary_name).unlink(missing_ok=True)
            raise

    def keys(self) -> List[str]:
        return sorted(path.stem for path in self.directory.glob('*.json'))

    @staticmethod
    def parse_key(key: str) -> Tuple[str, int, Optional[int], Optional[int]]:
        """(command, N, p, r) of a key; commands never contain '_'"""
        command, N, p, r = key.split('_')[:4]
        return command, int(N), None if p == 'x' else int(p), None if r == 'x' else int(r)

    def audit(self, k: int, recompute: Callable[[str, int, Optional[int], Optional[int]], EisensteinReport],
              seed: int = 0) -> List[Tuple[str, bool]]:
        """
        Recompute k randomly chosen entries of the current version and options and compare the records (elapsed time
        excluded). ``recompute`` receives the (command, N, p, r) of the entry. Returns (key, matches) pairs
        """
        suffix = f"_{self.key('', 0, None, None).split('_', 4)[-1]}"
        candidates = [key for key in self.keys() if key.endswith(suffix)]
        chosen = random.Random(seed).sample(candidates, min(k, len(candidates)))
        results = []
        for key in sorted(chosen):
            with self._path(key).open(encoding='utf-8') as file:
                cached = EisensteinReport.from_dict(json.load(file))
            fresh = recompute(*self.parse_key(key))
            fresh_record = fresh.to_dict()
            fresh_record.pop('elapsed', None)
            cached_record = cached.to_dict()
            cached_record.pop('elapsed', None)
            matches = json.dumps(fresh_record, sort_keys=True) == json.dumps(cached_record, sort_keys=True)
            if not matches:
                _module_logger.warning(f"cache entry {key} differs from the recomputed record")
            results.append((key, matches))
        return results
