"""Cost model and exact per-slot cost accounting for two-level edge rental.

Every quantity here is exact: costs are ints or fractions.Fraction, never
floats, so ledger equality tests and policy-equivalence checks are bit-exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterator, NamedTuple, Sequence, Union

Cost = Union[int, Fraction]


class InvalidModelError(ValueError):
    """Cost-model parameters violate a structural invariant."""


class DegenerateModelError(InvalidModelError):
    """Capacity gain does not exceed rent gain; staying LOW is always optimal."""


class TraceLengthError(ValueError):
    """An arrival trace and a decision trace disagree on horizon."""


class Level(Enum):
    """Edge computation tier rented for one slot."""

    LOW = "L"
    HIGH = "H"

    @property
    def other(self) -> "Level":
        return Level.LOW if self is Level.HIGH else Level.HIGH

    # Ordering (HIGH > LOW) is for reporting only; it carries no cost meaning.
    def __lt__(self, other: object) -> bool:
        if not isinstance(other, Level):
            return NotImplemented
        return _RANK[self] < _RANK[other]

    def __le__(self, other: object) -> bool:
        if not isinstance(other, Level):
            return NotImplemented
        return _RANK[self] <= _RANK[other]

    def __gt__(self, other: object) -> bool:
        if not isinstance(other, Level):
            return NotImplemented
        return _RANK[self] > _RANK[other]

    def __ge__(self, other: object) -> bool:
        if not isinstance(other, Level):
            return NotImplemented
        return _RANK[self] >= _RANK[other]


_RANK = {Level.LOW: 0, Level.HIGH: 1}


def _check_exact(name: str, value: Cost) -> Cost:
    if isinstance(value, bool) or not isinstance(value, (int, Fraction)):
        raise InvalidModelError(
            f"{name} must be an int or Fraction for exact arithmetic, got {value!r}"
        )
    if value < 0:
        raise InvalidModelError(f"{name} must be non-negative, got {value!r}")
    return value


@dataclass(frozen=True)
class CostModel:
    """System constants: rent costs, serving caps, and switch costs.

    Invariants: c_low < c_high, kappa_low < kappa_high, and the non-degenerate
    regime delta_kappa > delta_c.  The degenerate regime (where staying LOW
    always wins) is constructible only with allow_degenerate=True, for
    negative testing.
    """

    c_high: Cost
    c_low: Cost
    kappa_high: int
    kappa_low: int
    w_hl: Cost
    w_lh: Cost
    allow_degenerate: bool = False

    def __post_init__(self) -> None:
        _check_exact("c_high", self.c_high)
        _check_exact("c_low", self.c_low)
        _check_exact("w_hl", self.w_hl)
        _check_exact("w_lh", self.w_lh)
        for name in ("kappa_high", "kappa_low"):
            k = getattr(self, name)
            if isinstance(k, bool) or not isinstance(k, int):
                raise InvalidModelError(f"{name} must be a positive integer, got {k!r}")
            if k <= 0:
                raise InvalidModelError(f"{name} must be a positive integer, got {k!r}")
        if not self.c_low < self.c_high:
            raise InvalidModelError(
                f"rent costs must satisfy c_low < c_high, got {self.c_low} >= {self.c_high}"
            )
        if not self.kappa_low < self.kappa_high:
            raise InvalidModelError(
                "serving caps must satisfy kappa_low < kappa_high, "
                f"got {self.kappa_low} >= {self.kappa_high}"
            )
        if self.delta_kappa <= self.delta_c and not self.allow_degenerate:
            raise DegenerateModelError(
                f"delta_kappa ({self.delta_kappa}) must exceed delta_c ({self.delta_c}); "
                "pass allow_degenerate=True to construct this regime anyway"
            )

    @property
    def delta_c(self) -> Cost:
        return self.c_high - self.c_low

    @property
    def delta_kappa(self) -> int:
        return self.kappa_high - self.kappa_low

    @property
    def w_sum(self) -> Cost:
        return self.w_hl + self.w_lh

    def rent(self, level: Level) -> Cost:
        return self.c_high if level is Level.HIGH else self.c_low

    def cap(self, level: Level) -> int:
        return self.kappa_high if level is Level.HIGH else self.kappa_low

    def switch_cost(self, prev: Level, now: Level) -> Cost:
        if prev is now:
            return 0
        return self.w_lh if now is Level.HIGH else self.w_hl


@dataclass(frozen=True)
class ArrivalTrace:
    """Request counts x_1..x_T; counts[t-1] is the arrivals of slot t."""

    counts: tuple[int, ...]

    def __init__(self, counts: Sequence[int]) -> None:
        counts = tuple(counts)
        if len(counts) < 1:
            raise ValueError("arrival trace needs at least one slot")
        for i, x in enumerate(counts):
            if isinstance(x, bool) or not isinstance(x, int) or x < 0:
                raise ValueError(f"slot {i + 1}: arrivals must be a non-negative int, got {x!r}")
        object.__setattr__(self, "counts", counts)

    @property
    def horizon(self) -> int:
        return len(self.counts)

    def __len__(self) -> int:
        return len(self.counts)

    def __iter__(self) -> Iterator[int]:
        return iter(self.counts)

    def __getitem__(self, index: int) -> int:
        return self.counts[index]


@dataclass(frozen=True)
class DecisionTrace:
    """Levels r_1..r_T plus the level in force before slot 1."""

    levels: tuple[Level, ...]
    initial_level: Level = Level.LOW

    def __init__(self, levels: Sequence[Level], initial_level: Level = Level.LOW) -> None:
        object.__setattr__(self, "levels", tuple(levels))
        object.__setattr__(self, "initial_level", initial_level)

    @property
    def horizon(self) -> int:
        return len(self.levels)

    def __len__(self) -> int:
        return len(self.levels)

    def switch_slots(self) -> tuple[int, ...]:
        """1-based slots t with r_t != r_{t-1} (r_0 = initial_level)."""
        slots = []
        prev = self.initial_level
        for t, level in enumerate(self.levels, start=1):
            if level is not prev:
                slots.append(t)
            prev = level
        return tuple(slots)

    def runs(self) -> tuple[tuple[Level, int, int], ...]:
        """Maximal constant-level runs as (level, first_slot, last_slot), 1-based."""
        out: list[tuple[Level, int, int]] = []
        start = 1
        for t in range(2, len(self.levels) + 1):
            if self.levels[t - 1] is not self.levels[t - 2]:
                out.append((self.levels[start - 1], start, t - 1))
                start = t
        if self.levels:
            out.append((self.levels[start - 1], start, len(self.levels)))
        return tuple(out)


class SlotCost(NamedTuple):
    slot: int
    level: Level
    rent: Cost
    service: Cost
    switch: Cost
    total: Cost


@dataclass(frozen=True)
class CostLedger:
    """Per-slot cost decomposition with exact cumulative totals."""

    slots: tuple[SlotCost, ...]
    rent: Cost
    service: Cost
    switch: Cost

    @property
    def grand_total(self) -> Cost:
        return self.rent + self.service + self.switch


def slot_cost(model: CostModel, x: int, level_now: Level, level_prev: Level) -> tuple[Cost, Cost, Cost]:
    """(rent, service, switch) for one slot served at level_now after level_prev.

    Service cost is one unit per request beyond the tier's cap; the switch
    cost of changing levels between slots t and t+1 is booked in slot t+1.
    """
    if x < 0:
        raise ValueError(f"arrivals must be non-negative, got {x!r}")
    rent = model.rent(level_now)
    service = x - min(x, model.cap(level_now))
    switch = model.switch_cost(level_prev, level_now)
    return rent, service, switch


def evaluate(model: CostModel, arrivals: ArrivalTrace, decisions: DecisionTrace) -> CostLedger:
    """Exact ledger for a decision trace against an arrival trace."""
    if len(arrivals) != len(decisions):
        raise TraceLengthError(
            f"arrival trace has {len(arrivals)} slots but decision trace has {len(decisions)}"
        )
    rows: list[SlotCost] = []
    total_rent: Cost = 0
    total_service: Cost = 0
    total_switch: Cost = 0
    prev = decisions.initial_level
    for t, (x, level) in enumerate(zip(arrivals, decisions.levels), start=1):
        rent, service, switch = slot_cost(model, x, level, prev)
        rows.append(SlotCost(t, level, rent, service, switch, rent + service + switch))
        total_rent += rent
        total_service += service
        total_switch += switch
        prev = level
    return CostLedger(tuple(rows), total_rent, total_service, total_switch)
