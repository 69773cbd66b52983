import asyncio
import json
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest
import sympy as sp
from pydantic import ValidationError

from Shimura.__main__ import load_config, main
from Shimura.helper.exceptions import DomainError, ResourceBudgetError, UsageError
from Shimura.helper.modal import SUITE_NAMES, Outcome, SuiteConfig
from Shimura.helper.report import Suite, dump_report
from Shimura.suites import exit_status, load_suite, run_suite, suite_names

toy = Suite("toy")


@toy.check("ok", "always holds")
def ok(config: SuiteConfig) -> Outcome:
    return Outcome(expected=1, observed=1, passed=True, flags=["note"])


@toy.check("domain", "raises a verification error", expected={"degree": 2})
def domain(config: SuiteConfig) -> Outcome:
    raise DomainError("outside the domain")


@toy.check("crash", "raises something else")
def crash(config: SuiteConfig) -> Outcome:
    raise KeyError("boom")


@toy.check("symbolic", "returns sympy and numpy values")
def symbolic(config: SuiteConfig) -> Outcome:
    return Outcome(expected={sp.Integer(5): sp.Rational(1, 3)}, observed=np.array([np.int64(2), np.int64(3)]),
                   passed=bool(np.bool_(True)), inputs={"p": sp.Integer(7), "q": Fraction(9, 1)})


budget = Suite("budget")


@budget.check("scan", "runs out of budget")
def scan(config: SuiteConfig) -> Outcome:
    raise ResourceBudgetError("scan stopped")


def test_flags_override_config_file(tmp_path: Path):
    config_file = tmp_path / "run.env"
    config_file.write_text("SEED=5\nTOL=1e-8\nPRIMES=7,11\n")
    config = load_config(["--config", str(config_file), "--seed", "9"])
    assert config.seed == 9
    assert config.tol == 1e-8
    assert config.primes == [7, 11]


def test_unknown_config_key(tmp_path: Path):
    config_file = tmp_path / "run.env"
    config_file.write_text("COLOUR=blue\n")
    with pytest.raises(UsageError):
        load_config(["--config", str(config_file)])


@pytest.mark.parametrize("argv", [["--suite", "nope"], ["--tol", "2"], ["--workers", "0"]])
def test_bad_usage_exits_with_two(argv):
    assert asyncio.run(main(argv)) == 2


def test_config_validation():
    with pytest.raises(ValidationError):
        SuiteConfig(truncation="sharp")
    assert SuiteConfig(primes="7, 13").primes == [7, 13]


def test_suite_lookup():
    assert suite_names("endo") == ["endo"]
    assert len(suite_names("all")) == 12
    assert load_suite("endo").name == "endo"
    with pytest.raises(UsageError):
        load_suite("nope")


@pytest.mark.parametrize("name", SUITE_NAMES)
def test_every_check_declares_its_target(name: str):
    checks = load_suite(name).checks
    assert checks
    assert [spec.id for spec in checks if spec.expected is None] == []


def test_check_records(suite_config: SuiteConfig):
    report = asyncio.run(toy.run(suite_config))
    records = {record.id: record for record in report.checks}
    assert list(records) == ["toy.crash", "toy.domain", "toy.ok", "toy.symbolic"]
    assert records["toy.ok"].status == "pass" and records["toy.ok"].flags == ["note"]
    assert records["toy.domain"].error == "DomainError: Argument outside the domain! outside the domain"
    assert records["toy.domain"].expected == {"degree": 2}
    assert records["toy.crash"].error == "crash"
    assert report.summary == {"total": 4, "passed": 2, "failed": 2}
    assert not report.budget_exceeded
    assert exit_status({"toy": report}) == 1
    written = json.loads(dump_report(report))
    assert written["suite"] == "toy"
    symbolic_record = next(check for check in written["checks"] if check["id"] == "toy.symbolic")
    assert symbolic_record["expected"] == {"5": "1/3"}
    assert symbolic_record["observed"] == [2, 3]
    assert symbolic_record["inputs"] == {"p": 7, "q": 9}


def test_budget_exit_status(suite_config: SuiteConfig):
    report = asyncio.run(budget.run(suite_config))
    assert report.budget_exceeded
    assert exit_status({"budget": report}) == 3


def test_endo_report_is_written(suite_config: SuiteConfig):
    reports = asyncio.run(run_suite("endo", suite_config))
    written = json.loads((Path(suite_config.out) / "endo.json").read_text(encoding="utf-8"))
    assert written["suite"] == "endo"
    assert written["summary"] == reports["endo"].summary
    assert [check["id"] for check in written["checks"]] == sorted(check["id"] for check in written["checks"])
    assert "endo.hermitian-signature" in {check["id"] for check in written["checks"]}
