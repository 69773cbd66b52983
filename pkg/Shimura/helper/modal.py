from datetime import datetime
from fractions import Fraction
from typing import Any, Dict, List, Optional

import numpy as np
import sympy as sp
from pydantic import BaseModel, Field, field_validator

from Shimura.config import Verify

SUITE_NAMES = (
    "theta", "heisenberg", "shimura-curve", "shimura-surface", "canonical-model",
    "covers", "elliptic", "hilbert", "k3-chain", "zeta", "lattice", "endo",
)


# ---------------------------
# Suite Configuration Schema
# ---------------------------
class SuiteConfig(BaseModel):
    suite: str = "all"
    tol: float = Verify.TOLERANCE
    truncation: str = "gaussian-tail"
    primes: List[int] = Field(default_factory=lambda: list(Verify.PRIMES))
    modular_primes: List[int] = Field(default_factory=lambda: list(Verify.MODULAR_PRIMES))
    seed: int = Verify.SEED
    workers: int = Verify.WORKERS
    out: str = Verify.OUTPUT
    step_budget: int = Verify.STEP_BUDGET
    twist_bound: int = Verify.TWIST_BOUND
    scan_budget: int = Verify.SCAN_BUDGET

    @field_validator("suite")
    @classmethod
    def known_suite(cls, value: str) -> str:
        if value != "all" and value not in SUITE_NAMES:
            raise ValueError(f"unknown suite {value!r}")
        return value

    @field_validator("primes", "modular_primes", mode="before")
    @classmethod
    def split_primes(cls, value):
        if isinstance(value, str):
            return [int(item) for item in value.split(",") if item.strip()]
        return value

    @field_validator("tol")
    @classmethod
    def positive_tol(cls, value: float) -> float:
        if not 0 < value < 1:
            raise ValueError("tolerance must lie in (0, 1)")
        return value

    @field_validator("workers")
    @classmethod
    def positive_workers(cls, value: int) -> int:
        if value < 1:
            raise ValueError("need at least one worker")
        return value

    @field_validator("truncation")
    @classmethod
    def known_truncation(cls, value: str) -> str:
        if value not in ("gaussian-tail", "doubled"):
            raise ValueError(f"unknown truncation policy {value!r}")
        return value


def plain(value: Any) -> Any:
    """JSON-ready copy: sympy and numpy scalars become int, float or str; keys become str."""
    if value is None or isinstance(value, (bool, int, float, str)):
        return value
    if isinstance(value, dict):
        out = {}
        for key, item in value.items():
            out[str(plain(key))] = plain(item)
        return out
    if isinstance(value, (list, tuple)):
        return [plain(item) for item in value]
    if isinstance(value, (set, frozenset)):
        return sorted((plain(item) for item in value), key=str)
    if isinstance(value, np.ndarray):
        return plain(value.tolist())
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, sp.Integer):
        return int(value)
    if isinstance(value, sp.Float):
        return float(value)
    if isinstance(value, sp.Basic):
        return str(value)
    if isinstance(value, Fraction):
        return int(value) if value.denominator == 1 else str(value)
    if isinstance(value, datetime):
        return value
    return str(value)


# ---------------------------
# Check Outcome Schema
# ---------------------------
class Outcome(BaseModel):
    expected: Any = None
    observed: Any = None
    passed: bool
    inputs: Dict[str, Any] = Field(default_factory=dict)
    flags: List[str] = Field(default_factory=list)
    standard_fact: bool = False

    @field_validator("expected", "observed", "inputs", mode="before")
    @classmethod
    def json_ready(cls, value):
        return plain(value)


# ---------------------------
# Check Record Schema
# ---------------------------
class CheckRecord(BaseModel):
    id: str
    anchor: str
    inputs: Dict[str, Any] = Field(default_factory=dict)
    expected: Any = None
    observed: Any = None
    status: str
    ms: float = 0.0
    error: Optional[str] = None
    flags: List[str] = Field(default_factory=list)
    standard_fact: bool = False

    @field_validator("expected", "observed", "inputs", mode="before")
    @classmethod
    def json_ready(cls, value):
        return plain(value)


# ---------------------------
# Suite Report Schema
# ---------------------------
class SuiteReport(BaseModel):
    suite: str
    version: str
    seed: int
    checks: List[CheckRecord] = Field(default_factory=list)
    summary: Dict[str, Any] = Field(default_factory=dict)
    budget_exceeded: bool = False
    generated_on: datetime = Field(default_factory=datetime.utcnow)


# ---------------------------
# Surface Count Schema
# ---------------------------
class SurfaceCountReport(BaseModel):
    q: int
    raw_count: int
    corrections: List[Dict[str, Any]] = Field(default_factory=list)
    resolved_count: int
    algebraic_trace: Optional[int] = None
    transcendental_trace: Optional[int] = None


# ---------------------------
# Trace Table Schema
# ---------------------------
class TraceTableModel(BaseModel):
    label: str
    traces: Dict[str, int] = Field(default_factory=dict)
    bad: List[str] = Field(default_factory=list)
