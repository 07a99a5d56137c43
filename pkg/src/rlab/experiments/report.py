"""Claim reports, suite results and their CSV / JSON serialisation."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..extension import MODAL_TIME_SIGN
from ..norms import ScalingReport
from ..textio import fmt

VERSION = "0.1.0"


@dataclass
class CheckReport:
    """A claim that is a single comparison rather than a slope fit."""

    claim_id: str
    verdict: str
    value: float
    threshold: float | None = None
    C: float | None = None
    notes: dict = field(default_factory=dict)

    def summary(self) -> dict:
        return {
            "claim": self.claim_id,
            "verdict": self.verdict,
            "kind": "check",
            "value": self.value,
            "threshold": self.threshold,
            "C": self.C,
            "notes": self.notes,
        }


def check(claim_id: str, value: float, threshold: float, mode: str = "le", C: float | None = None,
          rel_error: float = 0.0, **notes) -> CheckReport:
    """Verdict for value <= threshold (mode "le") or value >= threshold ("ge")."""
    ok = value <= threshold if mode == "le" else value >= threshold
    if rel_error > 0.1:
        verdict = "inconclusive"
    else:
        verdict = "holds" if ok and math.isfinite(value) else "violated"
    return CheckReport(claim_id, verdict, float(value), float(threshold), C, dict(notes))


Claim = ScalingReport | CheckReport


@dataclass
class SuiteResult:
    suite: str
    columns: tuple
    rows: list
    claims: list
    meta: dict = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        verdicts = {c.verdict for c in self.claims}
        if "violated" in verdicts:
            return "violated"
        if "inconclusive" in verdicts:
            return "inconclusive"
        return "holds"

    def claim(self, claim_id: str) -> Claim:
        for c in self.claims:
            if c.claim_id == claim_id:
                return c
        raise KeyError(claim_id)


def _clean(x):
    """JSON-safe copy: numpy scalars to Python, non-finite floats to strings, tuples to lists."""
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, np.ndarray):
        return [_clean(v) for v in x.tolist()]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        v = float(x)
        return v if math.isfinite(v) else str(v)
    if isinstance(x, complex):
        return [x.real, x.imag]
    return x


def header_lines(suite: str, seed: int, digest: str) -> list[str]:
    return [f"# rlab {VERSION}", f"# suite={suite} seed={seed} config={digest} time_sign={MODAL_TIME_SIGN:+d}"]


def csv_text(result: SuiteResult, seed: int, digest: str) -> str:
    buf = io.StringIO()
    for line in header_lines(result.suite, seed, digest):
        buf.write(line + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(result.columns)
    for row in result.rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def summary_text(result: SuiteResult, seed: int, digest: str) -> str:
    doc = {
        "suite": result.suite,
        "version": VERSION,
        "seed": seed,
        "config_hash": digest,
        "time_sign": MODAL_TIME_SIGN,
        "verdict": result.verdict,
        "claims": [c.summary() for c in result.claims],
        "meta": result.meta,
    }
    return json.dumps(_clean(doc), indent=2, sort_keys=True) + "\n"


def _atomic_write(path: Path, text: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_outputs(result: SuiteResult, outdir: str | Path, seed: int, digest: str) -> tuple[Path, Path]:
    """Write <suite>.csv and <suite>.summary.json; both texts are built before either file is touched."""
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    csv_body = csv_text(result, seed, digest)
    json_body = summary_text(result, seed, digest)
    csv_path = out / f"{result.suite}.csv"
    json_path = out / f"{result.suite}.summary.json"
    _atomic_write(csv_path, csv_body)
    _atomic_write(json_path, json_body)
    return csv_path, json_path
