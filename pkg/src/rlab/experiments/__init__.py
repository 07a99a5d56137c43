"""Named verification suites. Each suite maps a SuiteConfig to a SuiteResult
holding per-sample rows and a list of claim reports with verdicts."""

from __future__ import annotations

from . import bessel, identities, kernel, operators, restriction, smoothing
from .config import SUITES, SuiteConfig, load_config, parse_config
from .report import CheckReport, SuiteResult, write_outputs

RUNNERS = {
    "bessel": bessel.run,
    "restriction": restriction.run,
    "operators": operators.run,
    "kernel": kernel.run,
    "smoothing": smoothing.run,
    "identities": identities.run,
}


def run_suite(name: str, cfg: SuiteConfig | None = None) -> SuiteResult:
    if name not in RUNNERS:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    return RUNNERS[name](cfg or SuiteConfig())


suite_bessel_regimes = bessel.run
suite_localized_restriction = restriction.run
suite_model_operators = operators.run
suite_kernel_decay = kernel.run
suite_local_smoothing = smoothing.run
suite_identities = identities.run

__all__ = [
    "SUITES", "SuiteConfig", "SuiteResult", "CheckReport", "load_config", "parse_config", "run_suite",
    "write_outputs", "suite_bessel_regimes", "suite_localized_restriction", "suite_model_operators",
    "suite_kernel_decay", "suite_local_smoothing", "suite_identities",
]
