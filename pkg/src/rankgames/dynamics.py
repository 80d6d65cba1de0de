"""Better/best-response computation, schedulers, and trajectory execution.

A dynamics run repeatedly lets one author switch topics to strictly raise her
own utility, until no author can (a pure Nash equilibrium), a profile repeats
(deterministic schedulers only, certifying an improvement cycle), or the step
budget runs out. Deterministic schedulers pick the improving topic of lowest
index; the seeded random scheduler picks uniformly among improving moves.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass

from .errors import ValidationError
from .model import (
    Game,
    Profile,
    check_profile,
    format_number,
    improves,
    replace_topic,
    utility_vector,
)

BETTER = "better"
BEST = "best"


# ---------- steps and trajectories ----------

@dataclass(frozen=True)
class Step:
    """One improvement step: at step r author `mover` switched from_topic ->
    to_topic, raising her utility from utility_before to utility_after."""

    index: int
    mover: int
    from_topic: int
    to_topic: int
    utility_before: object
    utility_after: object

    def __post_init__(self):
        if self.from_topic == self.to_topic:
            raise ValidationError("a step must change the mover's topic")


@dataclass(frozen=True)
class Trajectory:
    initial: Profile
    steps: tuple[Step, ...]
    terminal: Profile

    def profiles(self) -> list[Profile]:
        """The visited profiles a^0 .. a^T, replaying steps from initial."""
        out = [self.initial]
        for s in self.steps:
            out.append(replace_topic(out[-1], s.mover, s.to_topic))
        return out


# ---------- schedulers ----------

@dataclass(frozen=True)
class RoundRobin:
    """Cycle authors in a fixed order (default 1..n); each visit moves if an
    improving topic exists."""

    order: tuple[int, ...] | None = None


@dataclass(frozen=True)
class FirstDeviator:
    """Always move the lowest-index author who can improve."""


@dataclass(frozen=True)
class RandomOrder:
    """Pick uniformly at random among all improving moves; seeded."""

    seed: int = 0


Scheduler = RoundRobin | FirstDeviator | RandomOrder


# ---------- outcomes ----------

@dataclass(frozen=True)
class ConvergedPNE:
    profile: Profile
    steps_taken: int
    trajectory: Trajectory
    repeat_seen: bool = False


@dataclass(frozen=True)
class RepeatDetected:
    trajectory: Trajectory
    repeated_profile_index: int


@dataclass(frozen=True)
class BudgetExhausted:
    trajectory: Trajectory
    repeat_seen: bool = False


DynamicsOutcome = ConvergedPNE | RepeatDetected | BudgetExhausted


# ---------- response computation ----------

def better_responses(game: Game, a, j: int, margin: float = 0.0) -> dict:
    """Topics j can switch to for a strict gain, mapped to the new utility."""
    a = tuple(a)
    u0 = utility_vector(game, a)[j - 1]
    out = {}
    for t in range(1, game.m + 1):
        if t == a[j - 1]:
            continue
        u1 = utility_vector(game, replace_topic(a, j, t))[j - 1]
        if improves(u0, u1, margin):
            out[t] = u1
    return out


def best_responses(game: Game, a, j: int) -> set[int]:
    """Argmax topics for j against a_{-j}; non-empty, may include a_j."""
    a = tuple(a)
    us = {}
    for t in range(1, game.m + 1):
        b = a if t == a[j - 1] else replace_topic(a, j, t)
        us[t] = utility_vector(game, b)[j - 1]
    top = max(us.values())
    return {t for t, u in us.items() if u == top}


def is_pne(game: Game, a, margin: float = 0.0) -> bool:
    """True iff no author has a better response at a."""
    a = tuple(a)
    for j in range(1, game.n + 1):
        if better_responses(game, a, j, margin):
            return False
    return True


def _move_for(game, a, j, response, margin):
    """The move j would make at a, as (to_topic, u_before, u_after), or None."""
    u0 = utility_vector(game, a)[j - 1]
    if response == BETTER:
        br = better_responses(game, a, j, margin)
        if not br:
            return None
        t = min(br)
        return t, u0, br[t]
    t = min(best_responses(game, a, j))
    if t == a[j - 1]:
        return None
    u1 = utility_vector(game, replace_topic(a, j, t))[j - 1]
    if not improves(u0, u1, margin):
        return None
    return t, u0, u1


# ---------- the run loop ----------

def default_max_steps(game: Game) -> int:
    # a repeat-free path cannot visit more than m^n profiles
    return game.m**game.n * game.n * game.m


def run_dynamics(
    game: Game,
    init,
    sched: Scheduler,
    max_steps: int | None = None,
    response: str = BETTER,
    margin: float = 0.0,
) -> DynamicsOutcome:
    """Run one dynamics from init under the given scheduler.

    Returns ConvergedPNE, RepeatDetected (deterministic schedulers only), or
    BudgetExhausted. Identical inputs give identical outcomes; the random
    scheduler derives all choices from its seed.
    """
    a = check_profile(game, init)
    if max_steps is None:
        max_steps = default_max_steps(game)
    if max_steps <= 0:
        raise ValidationError("max_steps must be positive")
    if response not in (BETTER, BEST):
        raise ValidationError(f"unknown response mode {response!r}")

    if isinstance(sched, RoundRobin):
        order = sched.order if sched.order is not None else tuple(range(1, game.n + 1))
        if sorted(order) != list(range(1, game.n + 1)):
            raise ValidationError("round-robin order must be a permutation of the authors")
    elif not isinstance(sched, (FirstDeviator, RandomOrder)):
        raise ValidationError(f"unknown scheduler {sched!r}")
    deterministic = not isinstance(sched, RandomOrder)
    rng = random.Random(sched.seed) if isinstance(sched, RandomOrder) else None

    init = a
    steps: list[Step] = []
    seen = {a: 0}
    repeat_seen = False
    ptr = 0  # round-robin position
    idle = 0  # consecutive round-robin visits without a move

    while True:
        # pick the mover and her move
        move = None
        if isinstance(sched, FirstDeviator):
            for j in range(1, game.n + 1):
                got = _move_for(game, a, j, response, margin)
                if got is not None:
                    move = (j, *got)
                    break
        elif isinstance(sched, RoundRobin):
            while idle < game.n:
                j = order[ptr]
                ptr = (ptr + 1) % game.n
                got = _move_for(game, a, j, response, margin)
                if got is not None:
                    move = (j, *got)
                    idle = 0
                    break
                idle += 1
        else:
            candidates = []
            for j in range(1, game.n + 1):
                if response == BETTER:
                    u0 = utility_vector(game, a)[j - 1]
                    for t, u1 in sorted(better_responses(game, a, j, margin).items()):
                        candidates.append((j, t, u0, u1))
                else:
                    got = _move_for(game, a, j, response, margin)
                    if got is not None:
                        candidates.append((j, *got))
            if candidates:
                move = candidates[rng.randrange(len(candidates))]

        if move is None:
            t = Trajectory(init, tuple(steps), a)
            return ConvergedPNE(a, len(steps), t, repeat_seen)
        if len(steps) == max_steps:
            return BudgetExhausted(Trajectory(init, tuple(steps), a), repeat_seen)

        j, t, u0, u1 = move
        a2 = replace_topic(a, j, t)
        steps.append(Step(len(steps) + 1, j, a[j - 1], t, u0, u1))
        a = a2
        if a in seen:
            if deterministic:
                # the closed walk between the two visits contains an improvement cycle
                return RepeatDetected(Trajectory(init, tuple(steps), a), seen[a])
            repeat_seen = True
        else:
            seen[a] = len(steps)


# ---------- serialization ----------

def step_to_dict(s: Step) -> dict:
    return {
        "r": s.index,
        "player": s.mover,
        "from": s.from_topic,
        "to": s.to_topic,
        "u_before": format_number(s.utility_before),
        "u_after": format_number(s.utility_after),
    }


def trajectory_to_jsonl(t: Trajectory) -> str:
    """One JSON object per step, newline-delimited."""
    return "".join(json.dumps(step_to_dict(s)) + "\n" for s in t.steps)
