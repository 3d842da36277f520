"""
filename: reports.py
description: Module for the definitions of the result records produced by certificates,
    Lipschitz checks, recentering and the rounding iteration.
"""

from dataclasses import dataclass
from typing import Literal

import numpy as np
from pydantic import BaseModel, Field

from convex_rounder.models.body import Body

CERTIFICATE_COLUMNS = (
    "kind",
    "value",
    "threshold",
    "pass",
    "samples",
    "min_separation",
    "fd_step",
    "fd_order",
    "seed",
)


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return repr(value)
    return str(value)


class CertificateReport(BaseModel):
    kind: Literal["strict", "smooth"]
    value: float
    threshold: float
    passed: bool = Field(serialization_alias="pass")
    samples: int
    min_separation: float | None = None
    fd_step: float | None = None
    fd_order: int | None = None
    seed: int
    note: str = ""

    def to_csv(self) -> str:
        """Header and a single row; parameters the kind does not use are left empty"""
        document = self.model_dump(by_alias=True)
        row = ",".join(_cell(document[column]) for column in CERTIFICATE_COLUMNS)
        return ",".join(CERTIFICATE_COLUMNS) + "\n" + row + "\n"


class LipschitzWitness(BaseModel):
    kind: Literal["forward", "inverse"]
    delta: float | None = None
    bound_m: float | None = None
    bound_l: float | None = None
    body_distance: float
    energy_distance: float
    observed_ratio: float
    holds: bool


class IterationStep(BaseModel):
    iter: int
    gap: float
    monotone_upper_ok: bool
    monotone_lower_ok: bool
    sandwich_ok: bool
    contraction: float | None = None

    @property
    def ok(self) -> bool:
        return self.monotone_upper_ok and self.monotone_lower_ok and self.sandwich_ok


class IterationTrace(BaseModel):
    steps: list[IterationStep] = []
    converged: bool = False

    @property
    def gaps(self) -> list[float]:
        return [step.gap for step in self.steps]

    @property
    def rate(self) -> float | None:
        """Mean geometric contraction factor of the gap over the recorded steps"""
        gaps = [gap for gap in self.gaps if gap > 0]
        if len(gaps) < 2:
            return None
        return float((gaps[-1] / gaps[0]) ** (1.0 / (len(gaps) - 1)))

    def to_csv(self) -> str:
        lines = ["iter,gap,monotone_upper_ok,monotone_lower_ok,sandwich_ok"]
        for step in self.steps:
            lines.append(
                f"{step.iter},{step.gap!r},{str(step.monotone_upper_ok).lower()},"
                f"{str(step.monotone_lower_ok).lower()},{str(step.sandwich_ok).lower()}"
            )
        return "\n".join(lines) + "\n"


@dataclass(frozen=True, eq=False)
class RecenterResult:
    body: Body
    offset: np.ndarray
    inradius: float


@dataclass(frozen=True, eq=False)
class RoundingResult:
    """
    Outcome of the averaging iteration: the rounded body D, its dual counterpart, the
    strictified inner body A and smoothed outer body C it started from.
    """

    body: Body
    dual_body: Body
    inner: Body
    outer: Body
    trace: IterationTrace
    reg_weight: float
    halvings: int
    inner_outer_distance: float
