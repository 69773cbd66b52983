from importlib import import_module
from typing import Dict, List

from Shimura.helper.exceptions import UsageError
from Shimura.helper.executor import resize
from Shimura.helper.modal import SUITE_NAMES, SuiteConfig, SuiteReport
from Shimura.helper.report import Suite, write_report
from Shimura.logger import LOGGER

MODULES = {
    "theta": "theta",
    "heisenberg": "heisenberg",
    "shimura-curve": "shimura_curve",
    "shimura-surface": "shimura_surface",
    "canonical-model": "canonical_model",
    "covers": "covers",
    "elliptic": "elliptic",
    "hilbert": "hilbert",
    "k3-chain": "k3_chain",
    "zeta": "zeta",
    "lattice": "lattice",
    "endo": "endo",
}


def load_suite(name: str) -> Suite:
    if name not in MODULES:
        raise UsageError(f"unknown suite {name!r}; choose from {', '.join(SUITE_NAMES)} or all")
    return import_module(f"Shimura.suites.{MODULES[name]}").suite


def suite_names(name: str) -> List[str]:
    if name == "all":
        return list(SUITE_NAMES)
    load_suite(name)
    return [name]


async def run_suite(name: str, config: SuiteConfig, write: bool = True) -> Dict[str, SuiteReport]:
    """Run one suite (or all of them in name order) and write each report."""
    resize(config.workers)
    reports = {}
    for suite_name in suite_names(name):
        report = await load_suite(suite_name).run(config)
        if write:
            await write_report(report, config.out)
        reports[suite_name] = report
    failed = [n for n, r in reports.items() if r.summary.get("failed")]
    LOGGER.info(f"Suites done: {len(reports) - len(failed)} passed, failed: {failed or 'none'}")
    return reports


def exit_status(reports: Dict[str, SuiteReport]) -> int:
    if any(report.budget_exceeded for report in reports.values()):
        return 3
    return 1 if any(report.summary.get("failed") for report in reports.values()) else 0
