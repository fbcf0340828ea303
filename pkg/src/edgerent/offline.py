"""Offline optimum for a fully known trace, and structural checks on its output."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .core import (
    ArrivalTrace,
    Cost,
    CostLedger,
    CostModel,
    DecisionTrace,
    Level,
    evaluate,
    slot_cost,
)

_LEVELS = (Level.LOW, Level.HIGH)


def optimal_offline(
    model: CostModel,
    arrivals: ArrivalTrace,
    initial_level: Level = Level.LOW,
) -> tuple[DecisionTrace, CostLedger]:
    """Minimum-total-cost level schedule, by a two-state dynamic program.

    best(t, level) = serving cost at level + min over prev of
    best(t-1, prev) + switch(prev -> level).  Ties prefer staying at the
    previous level, then prefer LOW, so the returned trace is deterministic;
    any minimizer has the same total.
    """
    cost: dict[Level, Optional[Cost]] = {lvl: None for lvl in _LEVELS}
    cost[initial_level] = 0
    parents: list[dict[Level, Level]] = []
    for x in arrivals:
        new_cost: dict[Level, Optional[Cost]] = {}
        parent: dict[Level, Level] = {}
        for level in _LEVELS:
            serve = model.rent(level) + (x - min(x, model.cap(level)))
            best: Optional[Cost] = None
            best_prev = level
            # Stay option first so exact ties keep the previous level.
            for prev in (level, level.other):
                base = cost[prev]
                if base is None:
                    continue
                candidate = base + model.switch_cost(prev, level) + serve
                if best is None or candidate < best:
                    best = candidate
                    best_prev = prev
            new_cost[level] = best
            parent[level] = best_prev
        cost = new_cost
        parents.append(parent)
    # Final tie goes to LOW.
    last = Level.LOW
    low, high = cost[Level.LOW], cost[Level.HIGH]
    if low is None or (high is not None and high < low):
        last = Level.HIGH
    levels = [last]
    for parent in reversed(parents[1:]):
        levels.append(parent[levels[-1]])
    levels.reverse()
    decisions = DecisionTrace(levels, initial_level)
    return decisions, evaluate(model, arrivals, decisions)


@dataclass(frozen=True)
class DwellViolation:
    level: Level
    start_slot: int
    end_slot: int
    length: int
    required: Fraction


@dataclass(frozen=True)
class DwellReport:
    """Minimum-dwell check over the interior runs of a decision trace.

    A run is interior when it is both entered and left by a switch; leading
    runs at the initial level and the final run are exempt, matching the
    hypotheses under which the minimum-dwell guarantees hold.  A None
    high_required means no interior HIGH run is admissible at all.
    """

    high_required: Optional[Fraction]
    low_required: Fraction
    violations: tuple[DwellViolation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def _dwell_thresholds(model: CostModel) -> tuple[Optional[Fraction], Fraction]:
    # In the degenerate regime with a positive switch cost, no interior HIGH
    # run can be optimal at all; None stands for that unbounded requirement.
    gain_gap = model.delta_kappa - model.delta_c
    w = Fraction(model.w_sum)
    if gain_gap > 0:
        high: Optional[Fraction] = w / Fraction(gain_gap)
    else:
        high = Fraction(0) if w == 0 else None
    low = w / Fraction(model.delta_c)
    return high, low


def verify_dwell_times(model: CostModel, decisions: DecisionTrace) -> DwellReport:
    """Check that every interior run of an offline-optimal trace is long enough.

    Interior HIGH runs must last at least w_sum / (delta_kappa - delta_c)
    slots and interior LOW runs at least w_sum / delta_c slots.  Violations
    are returned, not raised.
    """
    high_req, low_req = _dwell_thresholds(model)
    horizon = decisions.horizon
    violations: list[DwellViolation] = []
    for level, start, end in decisions.runs():
        entered = start > 1 or level is not decisions.initial_level
        left = end < horizon
        if not (entered and left):
            continue
        required = high_req if level is Level.HIGH else low_req
        if required is None:
            required = Fraction(horizon + 1)
        length = end - start + 1
        if Fraction(length) < required:
            violations.append(DwellViolation(level, start, end, length, required))
    return DwellReport(high_req, low_req, tuple(violations))
