"""Run configuration, deterministic report serialization, and the JSON
result cache used by the command-line front end.

Reports must be byte-identical across repeated runs at a fixed
(command, config, version), so all payloads go through canonical JSON
(sorted keys, fixed separators, numbers as fixed-precision strings) and
the manifest's wall time is kept out of the payload (it is printed to
stderr on request instead).
"""

from __future__ import annotations

import hashlib
import json
import os
import sys
import tempfile
from dataclasses import dataclass, field, asdict
from fractions import Fraction
from pathlib import Path

from mpmath import mp, mpf, mpc

__version__ = "0.1.0"

ENV_PREFIX = "MOCKTHETA_"


@dataclass
class Config:
    precision_bits: int = 256
    series_order: int = 100
    coeff_tol: float = 1e-3
    eval_tol: float = 1e-6
    quad_tol: float = 1e-30
    K_max: int = 512
    cache_path: str | None = None
    output: str = "text"  # text | json | csv
    timing: bool = False

    def __post_init__(self):
        if self.precision_bits < 64:
            raise ValueError("precision_bits must be >= 64")
        for name in ("coeff_tol", "eval_tol", "quad_tol"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")

    @classmethod
    def from_env(cls, **overrides) -> "Config":
        """Environment variables MOCKTHETA_PREC, MOCKTHETA_TOL, MOCKTHETA_ORDER,
        MOCKTHETA_CACHE override the defaults; explicit overrides win."""
        kw = {}
        if os.environ.get(ENV_PREFIX + "PREC"):
            kw["precision_bits"] = int(os.environ[ENV_PREFIX + "PREC"])
        if os.environ.get(ENV_PREFIX + "TOL"):
            kw["eval_tol"] = float(os.environ[ENV_PREFIX + "TOL"])
        if os.environ.get(ENV_PREFIX + "ORDER"):
            kw["series_order"] = int(os.environ[ENV_PREFIX + "ORDER"])
        if os.environ.get(ENV_PREFIX + "CACHE"):
            kw["cache_path"] = os.environ[ENV_PREFIX + "CACHE"]
        kw.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**kw)


def num_str(x, digits: int = 36) -> str:
    """Deterministic decimal string for mpf/mpc/Fraction/int values."""
    if isinstance(x, (int,)):
        return str(x)
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, mpc) or (hasattr(x, "imag") and getattr(x, "imag", 0) != 0):
        return f"{num_str(x.real, digits)}{'+' if x.imag >= 0 else ''}{num_str(x.imag, digits)}j"
    return mp.nstr(mpf(x), digits, strip_zeros=True)


def canonical_json(payload) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def payload_digest(payload) -> str:
    return hashlib.sha256(canonical_json(payload).encode()).hexdigest()


@dataclass
class RunManifest:
    command: str
    parameters: dict
    version: str = __version__
    precision: int = 256
    wall_time_ms: float | None = None  # never serialized into reports
    digest: str = ""

    def public_dict(self) -> dict:
        d = {"command": self.command, "parameters": self.parameters,
             "version": self.version, "precision": self.precision,
             "digest": self.digest}
        return d


def make_report(command: str, parameters: dict, result, config: Config,
                wall_time_ms: float | None = None) -> dict:
    manifest = RunManifest(command=command, parameters=parameters,
                           precision=config.precision_bits,
                           wall_time_ms=wall_time_ms,
                           digest=payload_digest(result))
    if config.timing and wall_time_ms is not None:
        print(f"[timing] {command}: {wall_time_ms:.1f} ms", file=sys.stderr)
    return {"result": result, "manifest": manifest.public_dict()}


class ResultCache:
    """JSON file cache keyed by (operation, canonical parameters, precision).

    Entries carry the tool version; entries from other versions are ignored.
    Corrupted entries are ignored with a warning.  Writes are atomic
    (temp file + rename).  An unwritable cache directory disables caching
    with a warning instead of failing.
    """

    def __init__(self, path: str | None):
        self.enabled = path is not None
        self.path = Path(path).expanduser() if path else None
        if self.enabled:
            try:
                self.path.mkdir(parents=True, exist_ok=True)
                probe = self.path / ".probe"
                probe.write_text("ok")
                probe.unlink()
            except OSError as exc:
                print(f"warning: cache disabled ({exc})", file=sys.stderr)
                self.enabled = False

    def _key_file(self, operation: str, parameters: dict, precision: int) -> Path:
        key = canonical_json({"op": operation, "params": parameters, "prec": precision})
        return self.path / (hashlib.sha256(key.encode()).hexdigest() + ".json")

    def get(self, operation: str, parameters: dict, precision: int):
        if not self.enabled:
            return None
        f = self._key_file(operation, parameters, precision)
        if not f.exists():
            return None
        try:
            entry = json.loads(f.read_text())
        except (json.JSONDecodeError, OSError) as exc:
            print(f"warning: ignoring corrupted cache entry {f.name} ({exc})",
                  file=sys.stderr)
            return None
        if entry.get("version") != __version__:
            return None
        return entry.get("result")

    def put(self, operation: str, parameters: dict, precision: int, result) -> None:
        if not self.enabled:
            return
        f = self._key_file(operation, parameters, precision)
        entry = {"version": __version__, "op": operation,
                 "params": parameters, "prec": precision, "result": result}
        try:
            fd, tmp = tempfile.mkstemp(dir=self.path, suffix=".tmp")
            with os.fdopen(fd, "w") as handle:
                handle.write(canonical_json(entry))
            os.replace(tmp, f)
        except OSError as exc:
            print(f"warning: cache write failed ({exc})", file=sys.stderr)

    def entries(self) -> list:
        if not self.enabled or not self.path.exists():
            return []
        return sorted(p.name for p in self.path.glob("*.json"))

    def clear(self) -> int:
        n = 0
        if self.enabled and self.path.exists():
            for p in self.path.glob("*.json"):
                p.unlink()
                n += 1
        return n
