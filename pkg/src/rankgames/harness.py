"""Reference instances, random game generation, and experiment suites.

Holds the worked 2-author, 3-topic example with its two payoff tables, a
seeded generator of random games with exact rational data, the greedy
topic-assignment equilibrium for square generic exposure games, and a
deterministic batch runner that writes CSV and JSON reports.
"""

from __future__ import annotations

import csv
import io
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .errors import BudgetExceededError, PreconditionError, ValidationError
from .model import (
    EXPOSURE,
    SCHEMES,
    Game,
    Mediator,
    PRP,
    Profile,
    iter_profiles,
    make_game,
    mediator_from_dict,
    mediator_to_dict,
    utility_vector,
)
from .dynamics import FirstDeviator, RoundRobin, ConvergedPNE, run_dynamics
from .analysis import (
    DEFAULT_BUDGET,
    exact_potential_check,
    enumerate_pne,
    improvement_graph,
    longest_improvement_path,
    shortest_cycle,
    _is_acyclic,
)


# ---------- the worked example ----------

def example_game(scheme: str = EXPOSURE) -> Game:
    """Two authors, three topics, top-rank mediator; the running example."""
    demand = ("0.5", "0.3", "0.2")
    quality = (("0.1", "0.4", "0.8"), ("0.9", "0.4", "0.2"))
    return make_game(demand, quality, PRP, scheme)


def example_tables():
    """Both 3x3 payoff tables, rows = author 1's topic, columns = author 2's.

    Returns (exposure, action); each cell is the exact (u1, u2) pair.
    """
    tables = []
    for scheme in SCHEMES:
        game = example_game(scheme)
        tables.append(
            [
                [tuple(utility_vector(game, (r, c))) for c in range(1, 4)]
                for r in range(1, 4)
            ]
        )
    return tables[0], tables[1]


def format_example_tables() -> str:
    """Human-readable rendering of both tables, cells as decimal pairs."""
    exposure, action = example_tables()
    out = io.StringIO()
    for name, table in (("exposure", exposure), ("action", action)):
        print(f"{name} scheme (rows: author 1's topic, columns: author 2's topic)", file=out)
        cells = [
            [f"{float(u1):g},{float(u2):g}" for (u1, u2) in row] for row in table
        ]
        width = max(len(c) for row in cells for c in row)
        header = "      " + "  ".join(f"t{c}".center(width) for c in range(1, 4))
        print(header, file=out)
        for r, row in enumerate(cells, start=1):
            print(f"  t{r}  " + "  ".join(c.center(width) for c in row), file=out)
        print(file=out)
    return out.getvalue().rstrip("\n") + "\n"


# ---------- random games ----------

def generate_random_game(
    seed: int,
    n: int,
    m: int,
    *,
    generic_Q: bool = True,
    sorted_D: bool = True,
    denominator_bound: int = 1000,
    mediator: Mediator = PRP,
    scheme: str = EXPOSURE,
) -> Game:
    """Seeded random game with exact rational data.

    Quality entries are uniform rationals k/denominator_bound in [0, 1],
    drawn pairwise distinct when generic_Q (a small bound with generic_Q
    off makes ties common). Demand weights are normalized positive
    rationals; sorted_D draws them pairwise distinct and sorts them
    non-increasing, so the demand is strictly decreasing.
    """
    if n < 1 or m < 1:
        raise ValidationError("need at least one author and one topic")
    if denominator_bound < 1:
        raise ValidationError("denominator_bound must be positive")
    if generic_Q and n * m > denominator_bound + 1:
        raise ValidationError("denominator_bound too small for distinct quality entries")
    if sorted_D and m > denominator_bound:
        raise ValidationError("denominator_bound too small for distinct demand weights")
    rng = random.Random(seed)
    d = denominator_bound

    if generic_Q:
        numerators = rng.sample(range(d + 1), n * m)
    else:
        numerators = [rng.randint(0, d) for _ in range(n * m)]
    quality = [
        [Fraction(numerators[i * m + k], d) for k in range(m)] for i in range(n)
    ]

    if sorted_D:
        weights = sorted(rng.sample(range(1, d + 1), m), reverse=True)
    else:
        weights = [rng.randint(1, d) for _ in range(m)]
    total = sum(weights)
    demand = [Fraction(w, total) for w in weights]

    return make_game(demand, quality, mediator, scheme)


# ---------- greedy assignment ----------

def greedy_assignment_pne(game: Game) -> Profile:
    """Assign each topic, in order, to the best unassigned author.

    Requires a square (n = m) exposure game under the top-rank mediator with
    strictly decreasing demand and a generic (all-distinct) quality matrix;
    there the result is the game's unique pure Nash equilibrium.
    """
    if game.mediator.kind != "prp":
        raise PreconditionError("greedy assignment needs the top-rank (prp) mediator")
    if game.scheme != EXPOSURE:
        raise PreconditionError("greedy assignment needs the exposure scheme")
    if game.n != game.m:
        raise PreconditionError("greedy assignment needs as many topics as authors")
    if any(a <= b for a, b in zip(game.demand, game.demand[1:])):
        raise PreconditionError("greedy assignment needs strictly decreasing demand")
    entries = [q for row in game.quality for q in row]
    if len(set(entries)) != len(entries):
        raise PreconditionError("greedy assignment needs a generic quality matrix")
    unassigned = set(range(1, game.n + 1))
    choice = {}
    for k in range(1, game.m + 1):
        j = max(unassigned, key=lambda j: game.quality[j - 1][k - 1])
        choice[j] = k
        unassigned.remove(j)
    return tuple(choice[j] for j in range(1, game.n + 1))


# ---------- experiment suite ----------

_CSV_COLUMNS = (
    "seed",
    "n",
    "m",
    "mediator",
    "scheme",
    "fip",
    "pne_count",
    "max_path_len",
    "potential_exists",
    "steps_to_converge",
)

CHECKS = ("fip", "pne", "potential", "dynamics")


@dataclass(frozen=True)
class ExperimentConfig:
    """Deterministic description of a batch run."""

    seed: int
    games: int
    n_range: tuple[int, int]
    m_range: tuple[int, int]
    mediator: Mediator = PRP
    scheme: str = EXPOSURE
    checks: frozenset = frozenset(CHECKS)
    budget: int = DEFAULT_BUDGET
    generic_Q: bool = True
    sorted_D: bool = True
    denominator_bound: int = 1000

    def __post_init__(self):
        if self.games < 0:
            raise ValidationError("games must be nonnegative")
        for name, (lo, hi) in (("n_range", self.n_range), ("m_range", self.m_range)):
            if not 1 <= lo <= hi:
                raise ValidationError(f"{name} must satisfy 1 <= lo <= hi")
        unknown = set(self.checks) - set(CHECKS)
        if unknown:
            raise ValidationError(f"unknown checks: {sorted(unknown)}")
        if self.m_range[1] ** self.n_range[1] > self.budget:
            raise ValidationError("ranges exceed the enumeration budget")


def config_from_dict(d) -> ExperimentConfig:
    if not isinstance(d, dict):
        raise ValidationError("config must be a JSON object")
    try:
        return ExperimentConfig(
            seed=int(d["seed"]),
            games=int(d["games"]),
            n_range=(int(d["n_range"][0]), int(d["n_range"][1])),
            m_range=(int(d["m_range"][0]), int(d["m_range"][1])),
            mediator=mediator_from_dict(d.get("mediator", {"kind": "prp"})),
            scheme=d.get("scheme", EXPOSURE),
            checks=frozenset(d.get("checks", list(CHECKS))),
            budget=int(d.get("budget", DEFAULT_BUDGET)),
            generic_Q=bool(d.get("generic_Q", True)),
            sorted_D=bool(d.get("sorted_D", True)),
            denominator_bound=int(d.get("denominator_bound", 1000)),
        )
    except (KeyError, IndexError, TypeError) as exc:
        raise ValidationError(f"bad experiment config: {exc!r}") from exc


@dataclass
class ExperimentReport:
    """Per-game rows plus aggregate statistics; bit-identical per config."""

    config: ExperimentConfig
    rows: list[dict] = field(default_factory=list)
    aggregate: dict = field(default_factory=dict)

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.DictWriter(out, fieldnames=_CSV_COLUMNS, extrasaction="ignore", lineterminator="\n")
        writer.writeheader()
        for row in self.rows:
            writer.writerow({k: row.get(k, "") for k in _CSV_COLUMNS})
        return out.getvalue()

    def to_json(self) -> str:
        doc = {
            "config": {
                "seed": self.config.seed,
                "games": self.config.games,
                "n_range": list(self.config.n_range),
                "m_range": list(self.config.m_range),
                "mediator": mediator_to_dict(self.config.mediator),
                "scheme": self.config.scheme,
                "checks": sorted(self.config.checks),
                "budget": self.config.budget,
                "generic_Q": self.config.generic_Q,
                "sorted_D": self.config.sorted_D,
                "denominator_bound": self.config.denominator_bound,
                "note": "game distribution is an artifact choice",
            },
            "rows": self.rows,
            "aggregate": self.aggregate,
        }
        return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def run_experiment_suite(config: ExperimentConfig, out_dir=None) -> ExperimentReport:
    """Run the configured checks over seeded random games.

    Per-game budget overruns are recorded in the row, not raised. When
    out_dir is given, writes report.csv and report.json there.
    """
    rng = random.Random(config.seed)
    report = ExperimentReport(config)
    fips = []
    steps_all = []
    potentials = []
    cycles = []
    budget_errors = 0
    for _ in range(config.games):
        game_seed = rng.randrange(2**63)
        n = rng.randint(*config.n_range)
        m = rng.randint(*config.m_range)
        game = generate_random_game(
            game_seed,
            n,
            m,
            generic_Q=config.generic_Q,
            sorted_D=config.sorted_D,
            denominator_bound=config.denominator_bound,
            mediator=config.mediator,
            scheme=config.scheme,
        )
        row = {"seed": game_seed, "n": n, "m": m,
               "mediator": config.mediator.kind, "scheme": config.scheme}
        try:
            if "fip" in config.checks:
                graph = improvement_graph(game, config.budget)
                acyclic = _is_acyclic(graph.adj)
                row["fip"] = acyclic
                fips.append(acyclic)
                if acyclic:
                    row["max_path_len"] = longest_improvement_path(graph)
                else:
                    witness = shortest_cycle(graph)
                    cycles.append([list(p) for p in witness])
            if "pne" in config.checks:
                row["pne_count"] = len(enumerate_pne(game, config.budget))
            if "potential" in config.checks:
                pot = exact_potential_check(game, config.budget)
                row["potential_exists"] = pot.has_exact_potential
                potentials.append(pot.has_exact_potential)
            if "dynamics" in config.checks:
                worst = 0
                converged = True
                for init in iter_profiles(n, m):
                    for sched in (RoundRobin(), FirstDeviator()):
                        outcome = run_dynamics(game, init, sched)
                        if isinstance(outcome, ConvergedPNE):
                            worst = max(worst, outcome.steps_taken)
                        else:
                            converged = False
                row["dynamics_converged"] = converged
                if converged:
                    row["steps_to_converge"] = worst
                    steps_all.append(worst)
        except BudgetExceededError:
            budget_errors += 1
            row["error"] = "budget"
        report.rows.append(row)

    agg = {"games": config.games, "budget_errors": budget_errors}
    if fips:
        agg["fip_rate"] = sum(fips) / len(fips)
    if steps_all:
        agg["mean_steps_to_converge"] = sum(steps_all) / len(steps_all)
        agg["max_steps_to_converge"] = max(steps_all)
    if potentials:
        agg["potential_failure_rate"] = sum(1 for p in potentials if not p) / len(potentials)
    if cycles:
        agg["cycle_witnesses"] = cycles
    report.aggregate = agg

    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.csv").write_text(report.to_csv())
        (out / "report.json").write_text(report.to_json())
    return report
