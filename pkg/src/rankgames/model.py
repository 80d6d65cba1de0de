"""Exact model of ranking-mediated author-topic games.

Each of n authors writes a document on one of m topics. A demand distribution
weighs the topics, a quality matrix grades every author on every topic, and a
mediator maps (quality, topic, profile) to each author's probability of being
ranked first. Utility is demand times rank probability (exposure scheme),
additionally times own quality (action scheme).

Demand and quality are exact rationals so that quality ties, which drive the
top-rank tie-splitting, are decided exactly. Scoring mediators evaluate their
score function in floating point; everything else stays rational.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .errors import ValidationError

Profile = tuple[int, ...]

EXPOSURE = "exposure"
ACTION = "action"
SCHEMES = (EXPOSURE, ACTION)


# ---------- rationals ----------

def as_rational(x) -> Fraction:
    """Coerce x to an exact Fraction.

    Strings accept "p/q" and decimal forms ("0.3" becomes 3/10, exactly).
    Floats are reinterpreted through their shortest decimal repr, so a JSON
    0.3 also becomes 3/10 rather than its binary expansion.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise ValidationError(f"not a rational value: {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValidationError(f"not a rational value: {x!r}")
        return Fraction(repr(x))
    if isinstance(x, str):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"cannot parse rational {x!r}") from exc
    raise ValidationError(f"not a rational value: {x!r}")


def format_rational(x: Fraction) -> str:
    """Render a Fraction as a "p/q" string."""
    return f"{x.numerator}/{x.denominator}"


def format_number(x) -> str:
    """Render a utility or residual for serialization: "p/q" or float repr."""
    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, int):
        return str(x)
    return repr(float(x))


def improves(u_old, u_new, margin: float = 0.0) -> bool:
    """True when u_new strictly exceeds u_old beyond the relative margin."""
    return u_new - u_old > margin * max(abs(u_old), abs(u_new))


# ---------- score functions ----------

_SCORE_KINDS = ("constant", "identity", "power", "exponential", "exp_minus_one")


@dataclass(frozen=True)
class ScoreFunction:
    """A non-decreasing, nonnegative score map on [0, 1].

    Kinds: constant (1), identity (x), power (x**p, p > 0),
    exponential (e**(scale*x), scale >= 0), exp_minus_one (e**x - 1).
    """

    kind: str
    param: float | None = None

    def __post_init__(self):
        if self.kind not in _SCORE_KINDS:
            raise ValidationError(f"unknown score function kind {self.kind!r}")
        if self.kind == "power":
            if self.param is None or not self.param > 0:
                raise ValidationError("power score function needs param > 0")
        elif self.kind == "exponential":
            if self.param is None or self.param < 0:
                raise ValidationError("exponential score function needs param >= 0")
        elif self.param is not None:
            raise ValidationError(f"{self.kind} score function takes no param")

    def __call__(self, x: float) -> float:
        if self.kind == "constant":
            return 1.0
        if self.kind == "identity":
            return float(x)
        if self.kind == "power":
            return float(x) ** self.param
        if self.kind == "exponential":
            return math.exp(self.param * float(x))
        return math.exp(float(x)) - 1.0

    @classmethod
    def constant(cls):
        return cls("constant")

    @classmethod
    def identity(cls):
        return cls("identity")

    @classmethod
    def power(cls, p: float):
        return cls("power", float(p))

    @classmethod
    def exponential(cls, scale: float):
        return cls("exponential", float(scale))

    @classmethod
    def exp_minus_one(cls):
        return cls("exp_minus_one")


def is_non_decreasing(f: ScoreFunction, steps: int = 1000, slack: float = 1e-12) -> bool:
    """Check f on an evenly spaced grid over [0, 1]."""
    prev = f(0.0)
    if prev < -slack:
        return False
    for i in range(1, steps + 1):
        cur = f(i / steps)
        if cur < prev - slack:
            return False
        prev = cur
    return True


# ---------- mediators ----------

@dataclass(frozen=True)
class Mediator:
    """Ranking rule: "prp" (top quality wins, ties split), "rand" (uniform
    over writers), or "scoring" (probability proportional to f(quality))."""

    kind: str
    f: ScoreFunction | None = None

    def __post_init__(self):
        if self.kind not in ("prp", "rand", "scoring"):
            raise ValidationError(f"unknown mediator kind {self.kind!r}")
        if self.kind == "scoring" and self.f is None:
            raise ValidationError("scoring mediator needs a score function")
        if self.kind != "scoring" and self.f is not None:
            raise ValidationError(f"{self.kind} mediator carries no score function")

    @classmethod
    def scoring(cls, f: ScoreFunction) -> "Mediator":
        return cls("scoring", f)


PRP = Mediator("prp")
RAND = Mediator("rand")


# ---------- the game ----------

@dataclass(frozen=True)
class Game:
    """Immutable game value: n authors, m topics, demand, quality, mediator,
    utility scheme. All operations over it are pure; _cache only memoizes."""

    n: int
    m: int
    demand: tuple[Fraction, ...]
    quality: tuple[tuple[Fraction, ...], ...]
    mediator: Mediator
    scheme: str
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise ValidationError("need at least one author and one topic")
        if self.scheme not in SCHEMES:
            raise ValidationError(f"unknown utility scheme {self.scheme!r}")
        if len(self.demand) != self.m:
            raise ValidationError("demand length must equal the topic count")
        if any(w < 0 for w in self.demand):
            raise ValidationError("demand weights must be nonnegative")
        if sum(self.demand) != 1:
            raise ValidationError("demand weights must sum to exactly 1")
        if len(self.quality) != self.n or any(len(row) != self.m for row in self.quality):
            raise ValidationError("quality matrix must be n x m")
        if any(q < 0 or q > 1 for row in self.quality for q in row):
            raise ValidationError("quality entries must lie in [0, 1]")


def make_game(demand, quality, mediator: Mediator = PRP, scheme: str = EXPOSURE) -> Game:
    """Build a Game from loosely typed demand/quality values."""
    d = tuple(as_rational(w) for w in demand)
    q = tuple(tuple(as_rational(v) for v in row) for row in quality)
    return Game(n=len(q), m=len(d), demand=d, quality=q, mediator=mediator, scheme=scheme)


def check_profile(game: Game, a) -> Profile:
    a = tuple(a)
    if len(a) != game.n:
        raise ValidationError(f"profile length {len(a)} != author count {game.n}")
    for t in a:
        if not isinstance(t, int) or isinstance(t, bool) or not 1 <= t <= game.m:
            raise ValidationError(f"invalid topic {t!r} in profile")
    return a


def replace_topic(a: Profile, j: int, t: int) -> Profile:
    return a[: j - 1] + (t,) + a[j:]


# ---------- profile indexing ----------

def iter_profiles(n: int, m: int):
    """All profiles in canonical order: author 1 most significant."""
    return product(range(1, m + 1), repeat=n)


def profile_index(a: Profile, m: int) -> int:
    i = 0
    for t in a:
        i = i * m + (t - 1)
    return i


def profile_at(i: int, n: int, m: int) -> Profile:
    out = []
    for _ in range(n):
        out.append(i % m + 1)
        i //= m
    return tuple(reversed(out))


# ---------- core operations ----------

def writers(game: Game, k: int, a: Profile) -> list[int]:
    """Authors whose document is on topic k under profile a (1-based)."""
    return [j for j in range(1, game.n + 1) if a[j - 1] == k]


def top_quality(game: Game, k: int, a: Profile) -> Fraction:
    """Best quality among writers on topic k; 0 when the topic is empty."""
    best = Fraction(0)
    for j in range(1, game.n + 1):
        if a[j - 1] == k and game.quality[j - 1][k - 1] > best:
            best = game.quality[j - 1][k - 1]
    return best


def top_count(game: Game, k: int, a: Profile) -> int:
    """Number of writers on topic k attaining the top quality; 0 when empty."""
    ws = writers(game, k, a)
    if not ws:
        return 0
    best = max(game.quality[j - 1][k - 1] for j in ws)
    return sum(1 for j in ws if game.quality[j - 1][k - 1] == best)


def topic_tables(game: Game, a: Profile) -> tuple[tuple[Fraction, ...], tuple[int, ...]]:
    """Per-topic (top quality, top count) under profile a, memoized."""
    cache = game._cache.setdefault("bh", {})
    got = cache.get(a)
    if got is None:
        got = (
            tuple(top_quality(game, k, a) for k in range(1, game.m + 1)),
            tuple(top_count(game, k, a) for k in range(1, game.m + 1)),
        )
        cache[a] = got
    return got


def rank_probabilities(game: Game, k: int, a: Profile) -> dict:
    """First-rank probability per writer on topic k; empty map if no writers.

    prp: 1/(tie count) for each top-quality writer, 0 for the rest.
    rand: uniform over writers. scoring: f(quality) over the writers' f-sum;
    a zero sum (possible when f(0) = 0 and all writers have quality 0) falls
    back to uniform, an extension of the formula that keeps a distribution.
    """
    ws = writers(game, k, a)
    if not ws:
        return {}
    kind = game.mediator.kind
    if kind == "prp":
        best = max(game.quality[j - 1][k - 1] for j in ws)
        top = [j for j in ws if game.quality[j - 1][k - 1] == best]
        p = Fraction(1, len(top))
        return {j: (p if j in top else Fraction(0)) for j in ws}
    if kind == "rand":
        p = Fraction(1, len(ws))
        return {j: p for j in ws}
    f = game.mediator.f
    scores = {j: f(float(game.quality[j - 1][k - 1])) for j in ws}
    total = sum(scores.values())
    if total == 0:
        u = 1.0 / len(ws)
        return {j: u for j in ws}
    return {j: s / total for j, s in scores.items()}


def utility(game: Game, a, j: int):
    """Author j's utility at profile a. Exact Fraction under prp/rand,
    float under a scoring mediator."""
    a = tuple(a)
    if not 1 <= j <= game.n:
        raise ValidationError(f"invalid author {j}")
    k = a[j - 1]
    r = rank_probabilities(game, k, a)[j]
    u = game.demand[k - 1] * r
    if game.scheme == ACTION:
        u = u * game.quality[j - 1][k - 1]
    return u


def utility_vector(game: Game, a) -> tuple:
    """All n utilities at profile a, memoized per game."""
    a = tuple(a)
    cache = game._cache.setdefault("u", {})
    v = cache.get(a)
    if v is not None:
        return v
    out = [None] * game.n
    for k in set(a):
        for j, r in rank_probabilities(game, k, a).items():
            u = game.demand[k - 1] * r
            if game.scheme == ACTION:
                u = u * game.quality[j - 1][k - 1]
            out[j - 1] = u
    v = tuple(out)
    cache[a] = v
    return v


# ---------- serialization ----------

def score_to_dict(f: ScoreFunction) -> dict:
    d = {"kind": f.kind}
    if f.param is not None:
        d["param"] = f.param
    return d


def score_from_dict(d) -> ScoreFunction:
    if not isinstance(d, dict) or "kind" not in d:
        raise ValidationError("score function document needs a 'kind'")
    param = d.get("param")
    if param is not None and not isinstance(param, (int, float)):
        raise ValidationError("score function 'param' must be a number")
    return ScoreFunction(d["kind"], None if param is None else float(param))


def mediator_to_dict(med: Mediator) -> dict:
    d = {"kind": med.kind}
    if med.f is not None:
        d["f"] = score_to_dict(med.f)
    return d


def mediator_from_dict(d) -> Mediator:
    if not isinstance(d, dict) or "kind" not in d:
        raise ValidationError("mediator document needs a 'kind'")
    f = d.get("f")
    return Mediator(d["kind"], score_from_dict(f) if f is not None else None)


def game_to_dict(game: Game) -> dict:
    return {
        "n": game.n,
        "m": game.m,
        "D": [format_rational(w) for w in game.demand],
        "Q": [[format_rational(q) for q in row] for row in game.quality],
        "mediator": mediator_to_dict(game.mediator),
        "utility": game.scheme,
    }


def game_from_dict(d) -> Game:
    if not isinstance(d, dict):
        raise ValidationError("game document must be a JSON object")
    for key in ("D", "Q", "mediator", "utility"):
        if key not in d:
            raise ValidationError(f"game document is missing {key!r}")
    game = make_game(
        d["D"],
        d["Q"],
        mediator_from_dict(d["mediator"]),
        d["utility"],
    )
    for key, want in (("n", game.n), ("m", game.m)):
        if key in d and d[key] != want:
            raise ValidationError(f"game document {key!r} does not match its data")
    return game
