"""Online rental policies: hindsight-window switching (BLTN), follow the
perturbed leader (FTPL), static levels, and the statistics-aware online optimum.

A policy is a stateful object driven one slot at a time: ``reset`` fixes the
level in force during slot 1, and each ``step(x_t)`` observes only the current
slot's arrivals and returns the level for slot t+1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .core import ArrivalTrace, Cost, CostLedger, CostModel, DecisionTrace, Level, evaluate


@dataclass(frozen=True)
class PolicyStep:
    """Decision for the next slot plus optional diagnostics.

    Diagnostics never influence cost accounting; they exist for traces and
    explain-mode output only.
    """

    next_level: Level
    delta: Optional[Cost] = None
    triggered: bool = False
    tau: Optional[int] = None
    noise: Optional[float] = None


@dataclass(frozen=True)
class BltnState:
    """Snapshot of the O(1) switcher: level in force, accumulator, last switch slot."""

    current_level: Level
    delta: Cost
    t_switch: int


@dataclass(frozen=True)
class FtplConfig:
    """Perturbation scale and seeding for the perturbed-leader policy.

    ``noise`` selects how the growing perturbation width at slot t is read:
    "var" treats sqrt(t) as the variance (std dev t**0.25, the default),
    "stddev" treats sqrt(t) as the standard deviation.
    """

    gamma: float = 1.0
    noise: str = "var"
    seed: Optional[int] = None

    def __post_init__(self) -> None:
        if self.gamma < 0:
            raise ValueError(f"gamma must be non-negative, got {self.gamma}")
        if self.noise not in ("var", "stddev"):
            raise ValueError(f"noise must be 'var' or 'stddev', got {self.noise!r}")


@dataclass(frozen=True)
class StochasticStats:
    """Arrival moments used by the online optimum and the efficiency bounds.

    nu = E[X], mu_high = E[min(X, kappa_high)], mu_low = E[min(X, kappa_low)].
    """

    nu: float
    mu_high: float
    mu_low: float

    def __post_init__(self) -> None:
        slack = 1e-9 * max(1.0, abs(self.nu))
        if self.mu_low < -slack or self.mu_low > self.mu_high + slack or self.mu_high > self.nu + slack:
            raise ValueError(
                f"stats must satisfy 0 <= mu_low <= mu_high <= nu, got "
                f"nu={self.nu}, mu_high={self.mu_high}, mu_low={self.mu_low}"
            )

    @property
    def delta_mu(self) -> float:
        return self.mu_high - self.mu_low


def perturbation_scale(t: int, noise: str) -> float:
    """Std dev of the slot-t perturbation under the chosen reading of its width."""
    if noise == "var":
        return t ** 0.25
    return math.sqrt(t)


def _gain_high(model: CostModel, x: int) -> Cost:
    # Per-slot cost advantage of HIGH over LOW: extra requests served minus extra rent.
    return min(x, model.kappa_high) - min(x, model.kappa_low) - model.delta_c


class Policy:
    """Base class for causal per-slot decision makers."""

    name = "policy"

    def reset(self, initial_level: Level = Level.LOW) -> Level:
        """Prepare for a fresh trace; returns the level in force during slot 1."""
        raise NotImplementedError

    def step(self, x: int) -> PolicyStep:
        """Observe slot t's arrivals and return the level for slot t+1."""
        raise NotImplementedError


class Bltn(Policy):
    """Hindsight-window switcher with constant work and memory per slot.

    Keeps a clamped accumulator of the idle tier's advantage since the last
    switch; a switch fires when the accumulator strictly exceeds the
    round-trip switch cost, and resets it to zero.
    """

    name = "bltn"

    def __init__(self, model: CostModel) -> None:
        self.model = model
        self.reset(Level.LOW)

    def reset(self, initial_level: Level = Level.LOW) -> Level:
        self.level = initial_level
        self.delta: Cost = 0
        self.t = 0
        self.t_switch = 0
        return initial_level

    @property
    def state(self) -> BltnState:
        return BltnState(self.level, self.delta, self.t_switch)

    def step(self, x: int) -> PolicyStep:
        self.t += 1
        gain = _gain_high(self.model, x)
        inc = gain if self.level is Level.LOW else -gain
        self.delta = max(0, self.delta + inc)
        if self.delta > self.model.w_sum:
            fired = self.delta
            self.level = self.level.other
            self.delta = 0
            self.t_switch = self.t
            return PolicyStep(self.level, delta=fired, triggered=True)
        return PolicyStep(self.level, delta=self.delta)


class BltnNaive(Policy):
    """Reference switcher that rescans every candidate window each slot.

    At slot t it looks for a window [tau, t] with tau past the last switch
    whose accumulated advantage for the idle tier strictly exceeds the
    round-trip switch cost.  Linear work per slot; kept as the independent
    oracle for the O(1) implementation.
    """

    name = "bltn-naive"

    def __init__(self, model: CostModel) -> None:
        self.model = model
        self.reset(Level.LOW)

    def reset(self, initial_level: Level = Level.LOW) -> Level:
        self.level = initial_level
        self.history: list[int] = []
        self.t = 0
        self.t_switch = 0
        return initial_level

    def step(self, x: int) -> PolicyStep:
        self.t += 1
        self.history.append(x)
        model = self.model
        threshold = model.w_sum
        sign = 1 if self.level is Level.LOW else -1
        acc: Cost = 0
        hit: Optional[int] = None
        for tau in range(self.t, self.t_switch, -1):
            acc += sign * _gain_high(model, self.history[tau - 1])
            if acc > threshold:
                hit = tau
                break
        if hit is not None:
            self.level = self.level.other
            self.t_switch = self.t
            return PolicyStep(self.level, delta=acc, triggered=True, tau=hit)
        return PolicyStep(self.level)


class Ftpl(Policy):
    """Follow the perturbed leader over the two static level choices.

    Accumulates the unclamped cumulative cost difference of always-HIGH minus
    always-LOW and picks LOW when its perturbed value is positive.  Exact ties
    (possible only with gamma = 0) go to HIGH.
    """

    name = "ftpl"

    def __init__(self, model: CostModel, config: FtplConfig = FtplConfig()) -> None:
        if config.gamma > 0 and config.seed is None:
            raise ValueError("FtplConfig.seed is required when gamma > 0")
        self.model = model
        self.config = config
        self.reset(Level.LOW)

    def reset(self, initial_level: Level = Level.LOW) -> Level:
        self.level = initial_level
        self.delta: Cost = 0
        self.t = 0
        self.rng = np.random.default_rng(self.config.seed)
        return initial_level

    def step(self, x: int) -> PolicyStep:
        self.t += 1
        self.delta = self.delta - _gain_high(self.model, x)
        # One draw per slot keeps the stream aligned across gamma values.
        draw = float(self.rng.standard_normal()) * perturbation_scale(self.t, self.config.noise)
        if self.config.gamma == 0:
            choose_low = self.delta > 0
        else:
            choose_low = float(self.delta) + self.config.gamma * draw > 0
        self.level = Level.LOW if choose_low else Level.HIGH
        return PolicyStep(self.level, delta=self.delta, noise=draw)


class Static(Policy):
    """Rent the same level every slot, pre-committing from slot 1."""

    def __init__(self, level: Level, name: Optional[str] = None) -> None:
        self.fixed = level
        self.name = name if name is not None else f"static-{level.value.lower()}"
        self.level = level

    def reset(self, initial_level: Level = Level.LOW) -> Level:
        return self.fixed

    def step(self, x: int) -> PolicyStep:
        return PolicyStep(self.fixed)


def static_policy(level: Level) -> Static:
    return Static(level)


def optimal_online(model: CostModel, stats: StochasticStats) -> Static:
    """Statistics-aware online optimum for i.i.d. arrivals: a static level.

    HIGH wins exactly when the expected per-slot cost c_high + nu - mu_high
    beats c_low + nu - mu_low, i.e. when delta_mu > delta_c; ties go to LOW.
    """
    level = Level.HIGH if stats.delta_mu > float(model.delta_c) else Level.LOW
    return Static(level, name="opt-on")


def expected_slot_cost(model: CostModel, stats: StochasticStats, level: Level) -> float:
    """Expected one-slot cost of a static level under the given arrival stats."""
    mu = stats.mu_high if level is Level.HIGH else stats.mu_low
    return float(model.rent(level)) + stats.nu - mu


def _drive(policy: Policy, arrivals: ArrivalTrace, initial_level: Level) -> tuple[list[Level], list[PolicyStep]]:
    level = policy.reset(initial_level)
    levels: list[Level] = []
    steps: list[PolicyStep] = []
    for x in arrivals:
        levels.append(level)
        step = policy.step(x)
        steps.append(step)
        level = step.next_level
    return levels, steps


def run_policy(
    policy: Policy,
    model: CostModel,
    arrivals: ArrivalTrace,
    initial_level: Level = Level.LOW,
) -> tuple[DecisionTrace, CostLedger]:
    """Drive a policy causally over a trace and price the resulting decisions."""
    levels, _ = _drive(policy, arrivals, initial_level)
    decisions = DecisionTrace(levels, initial_level)
    return decisions, evaluate(model, arrivals, decisions)


def diagnose_policy(
    policy: Policy,
    model: CostModel,
    arrivals: ArrivalTrace,
    initial_level: Level = Level.LOW,
) -> tuple[DecisionTrace, CostLedger, list[PolicyStep]]:
    """run_policy plus the per-slot PolicyStep records, for diagnostic output."""
    levels, steps = _drive(policy, arrivals, initial_level)
    decisions = DecisionTrace(levels, initial_level)
    return decisions, evaluate(model, arrivals, decisions), steps
