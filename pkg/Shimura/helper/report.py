import asyncio
import json
from os import makedirs, path
from time import perf_counter
from traceback import format_exc
from typing import Any, Callable, List, NamedTuple

import aiofiles

from Shimura import __version__
from Shimura.helper.exceptions import ResourceBudgetError, VerificationError
from Shimura.helper.executor import run_blocking
from Shimura.helper.modal import CheckRecord, Outcome, SuiteConfig, SuiteReport
from Shimura.logger import LOGGER


class CheckSpec(NamedTuple):
    id: str
    anchor: str
    func: Callable[[SuiteConfig], Outcome]
    expected: Any = None


class Suite:
    """A named list of checks; each check maps a SuiteConfig to an Outcome."""

    def __init__(self, name: str):
        self.name = name
        self.checks: List[CheckSpec] = []

    def check(self, check_id: str, anchor: str, expected: Any = None):
        """`expected` is the target reported when the check raises before building an Outcome."""
        def register(func):
            self.checks.append(CheckSpec(f"{self.name}.{check_id}", anchor, func, expected))
            return func
        return register

    async def run(self, config: SuiteConfig) -> SuiteReport:
        LOGGER.info(f"Running suite {self.name} with {len(self.checks)} checks")
        started = perf_counter()
        records = await asyncio.gather(*(run_check(spec, config) for spec in self.checks))
        records = sorted(records, key=lambda record: record.id)

        passed = sum(record.status == "pass" for record in records)
        report = SuiteReport(
            suite=self.name,
            version=__version__,
            seed=config.seed,
            checks=records,
            summary={"total": len(records), "passed": passed, "failed": len(records) - passed},
            budget_exceeded=any(record.error and record.error.startswith("ResourceBudgetError") for record in records),
        )
        LOGGER.info(f"Suite {self.name}: {passed}/{len(records)} passed in {perf_counter() - started:.1f}s")
        return report


async def run_check(spec: CheckSpec, config: SuiteConfig) -> CheckRecord:
    started = perf_counter()
    try:
        outcome = await run_blocking(spec.func, config)
        status = "pass" if outcome.passed else "fail"
        record = CheckRecord(
            id=spec.id, anchor=spec.anchor, inputs=outcome.inputs,
            expected=spec.expected if outcome.expected is None else outcome.expected,
            observed=outcome.observed, status=status,
            flags=outcome.flags, standard_fact=outcome.standard_fact,
        )
    except ResourceBudgetError as err:
        record = CheckRecord(id=spec.id, anchor=spec.anchor, status="fail", expected=spec.expected,
                             error=f"ResourceBudgetError: {err}")
    except VerificationError as err:
        record = CheckRecord(id=spec.id, anchor=spec.anchor, status="fail", expected=spec.expected,
                             error=f"{type(err).__name__}: {err}")
    except Exception:
        LOGGER.error(f"Check {spec.id} crashed:\n" + format_exc())
        record = CheckRecord(id=spec.id, anchor=spec.anchor, status="fail", expected=spec.expected,
                             error="crash")

    record.ms = round((perf_counter() - started) * 1000, 1)
    if record.status == "pass":
        LOGGER.info(f"[pass] {spec.id}")
    else:
        LOGGER.warning(f"[fail] {spec.id}: expected {record.expected!r}, observed {record.observed!r} {record.error or ''}")
    return record


def dump_report(report: SuiteReport) -> str:
    return json.dumps(report.model_dump(mode="json"), sort_keys=True, indent=2, ensure_ascii=False)


async def write_report(report: SuiteReport, out_dir: str) -> str:
    makedirs(out_dir, exist_ok=True)
    target = path.join(out_dir, f"{report.suite}.json")
    async with aiofiles.open(target, "w", encoding="utf-8") as handle:
        await handle.write(dump_report(report))
    LOGGER.info(f"Report written to {target}")
    return target
