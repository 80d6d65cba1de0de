"""Exhaustive game analysis over the full profile space.

Builds the directed graph of single-author strict improvements on all m^n
profiles, decides the finite improvement property (acyclicity) with a
shortest-cycle witness, enumerates pure Nash equilibria, measures the longest
improvement path, tests for an exact potential through the four-term
alternating condition on every 2x2 subgame, checks per-step bounds on
recorded trajectories, and reduces uniform-mediator exposure games to
top-rank games with all-ones quality.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    BudgetExceededError,
    CyclicGraphError,
    PreconditionError,
    TrajectoryError,
)
from .model import (
    ACTION,
    EXPOSURE,
    Game,
    Profile,
    format_number,
    improves,
    iter_profiles,
    make_game,
    profile_at,
    profile_index,
    replace_topic,
    topic_tables,
    utility_vector,
)
from .dynamics import Trajectory, better_responses, is_pne

DEFAULT_BUDGET = 10**6


def _check_budget(game: Game, budget: int):
    if game.m**game.n > budget:
        raise BudgetExceededError(
            f"{game.m}^{game.n} profiles exceed the enumeration budget {budget}"
        )


# ---------- improvement graph ----------

@dataclass
class ImprovementGraph:
    """Adjacency over canonically indexed profiles; edge a -> a' when one
    author strictly improves by switching to a'."""

    game: Game
    n_nodes: int
    adj: list[list[int]]
    margin: float = 0.0

    def profile_of(self, i: int) -> Profile:
        return profile_at(i, self.game.n, self.game.m)

    def index_of(self, a) -> int:
        return profile_index(tuple(a), self.game.m)


def improvement_graph(game: Game, budget: int = DEFAULT_BUDGET, margin: float = 0.0) -> ImprovementGraph:
    """The complete single-author strict-improvement graph."""
    _check_budget(game, budget)
    n, m = game.n, game.m
    n_nodes = m**n
    adj: list[list[int]] = []
    for a in iter_profiles(n, m):
        u = utility_vector(game, a)
        out = []
        for j in range(1, n + 1):
            for t in range(1, m + 1):
                if t == a[j - 1]:
                    continue
                b = replace_topic(a, j, t)
                if improves(u[j - 1], utility_vector(game, b)[j - 1], margin):
                    out.append(profile_index(b, m))
        out.sort()
        adj.append(out)
    return ImprovementGraph(game, n_nodes, adj, margin)


def _is_acyclic(adj: list[list[int]]) -> bool:
    n = len(adj)
    indeg = [0] * n
    for out in adj:
        for v in out:
            indeg[v] += 1
    queue = deque(i for i in range(n) if indeg[i] == 0)
    done = 0
    while queue:
        u = queue.popleft()
        done += 1
        for v in adj[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                queue.append(v)
    return done == n


def _strongly_connected_components(adj: list[list[int]]) -> list[list[int]]:
    # iterative Tarjan
    n = len(adj)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, pi = work[-1]
            if pi == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            advanced = False
            while pi < len(adj[v]):
                w = adj[v][pi]
                pi += 1
                if index[w] == -1:
                    work[-1] = (v, pi)
                    work.append((w, 0))
                    advanced = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            if pi >= len(adj[v]):
                if low[v] == index[v]:
                    comp = []
                    while True:
                        w = stack.pop()
                        on_stack[w] = False
                        comp.append(w)
                        if w == v:
                            break
                    comps.append(comp)
                work.pop()
                if work:
                    parent = work[-1][0]
                    low[parent] = min(low[parent], low[v])
    return comps


def shortest_cycle(graph: ImprovementGraph) -> list[Profile] | None:
    """A shortest directed cycle as a closed profile list, or None on a DAG.

    Deterministic: scans cycle start nodes in canonical index order and keeps
    the first cycle of minimal length.
    """
    adj = graph.adj
    comp_of = {}
    for comp in _strongly_connected_components(adj):
        if len(comp) > 1:
            for v in comp:
                comp_of[v] = id(comp)
    if not comp_of:
        return None
    best: list[int] | None = None
    for start in sorted(comp_of):
        if best is not None and len(best) - 1 <= 3:
            break  # strict improvement forbids 2-cycles, so 3 edges is minimal
        dist = {start: 0}
        parent = {}
        queue = deque([start])
        found = None
        while queue and found is None:
            u = queue.popleft()
            if best is not None and dist[u] + 1 >= len(best):
                continue
            for v in adj[u]:
                if comp_of.get(v) != comp_of[start]:
                    continue
                if v == start:
                    found = u
                    break
                if v not in dist:
                    dist[v] = dist[u] + 1
                    parent[v] = u
                    queue.append(v)
        if found is not None:
            cycle = [found]
            while cycle[-1] != start:
                cycle.append(parent[cycle[-1]])
            cycle.reverse()  # start .. found
            cycle.append(start)
            if best is None or len(cycle) < len(best):
                best = cycle
    assert best is not None
    return [graph.profile_of(i) for i in best]


def has_fip(game: Game, budget: int = DEFAULT_BUDGET, margin: float = 0.0):
    """(True, None) when the improvement graph is acyclic, else
    (False, witness) with a shortest improvement cycle, closed."""
    graph = improvement_graph(game, budget, margin)
    if _is_acyclic(graph.adj):
        return True, None
    return False, shortest_cycle(graph)


def enumerate_pne(game: Game, budget: int = DEFAULT_BUDGET, margin: float = 0.0) -> list[Profile]:
    """All pure Nash equilibria, in canonical profile order."""
    _check_budget(game, budget)
    return [a for a in iter_profiles(game.n, game.m) if is_pne(game, a, margin)]


def longest_improvement_path(graph: ImprovementGraph) -> int:
    """Edge count of the longest directed path; requires an acyclic graph."""
    adj = graph.adj
    n = len(adj)
    indeg = [0] * n
    for out in adj:
        for v in out:
            indeg[v] += 1
    queue = deque(i for i in range(n) if indeg[i] == 0)
    topo = []
    while queue:
        u = queue.popleft()
        topo.append(u)
        for v in adj[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                queue.append(v)
    if len(topo) != n:
        raise CyclicGraphError("longest path is undefined on a cyclic graph")
    depth = [0] * n
    best = 0
    for u in topo:
        for v in adj[u]:
            if depth[u] + 1 > depth[v]:
                depth[v] = depth[u] + 1
                if depth[v] > best:
                    best = depth[v]
    return best


# ---------- exact potential ----------

@dataclass(frozen=True)
class PotentialWitness:
    """A 2x2 subgame: two authors, a strategy pair for each, and the fixed
    profile of everyone else (entries at the two authors are placeholders)."""

    authors: tuple[int, int]
    topics_i: tuple[int, int]
    topics_j: tuple[int, int]
    base: Profile


@dataclass(frozen=True)
class PotentialReport:
    has_exact_potential: bool
    worst_residual: object  # max |residual| over all 2x2 subgames
    witness: PotentialWitness | None


def potential_residual(game: Game, i: int, j: int, topics_i, topics_j, base) -> object:
    """Four-term alternating residual of one 2x2 subgame.

    With u = author i's utility, v = author j's, over the four profiles built
    from base by placing (s, t) for (i, j): u(s2,t1) - u(s1,t1) + v(s2,t2)
    - v(s2,t1) + u(s1,t2) - u(s2,t2) + v(s1,t1) - v(s1,t2). Zero for every
    subgame is equivalent to the existence of an exact potential.
    """
    if i == j:
        raise PreconditionError("need two distinct authors")
    s1, s2 = topics_i
    t1, t2 = topics_j
    base = tuple(base)

    def uv(s, t):
        a = replace_topic(replace_topic(base, i, s), j, t)
        vec = utility_vector(game, a)
        return vec[i - 1], vec[j - 1]

    u11, v11 = uv(s1, t1)
    u12, v12 = uv(s1, t2)
    u21, v21 = uv(s2, t1)
    u22, v22 = uv(s2, t2)
    return u21 - u11 + v22 - v21 + u12 - u22 + v11 - v12


def exact_potential_check(game: Game, budget: int = DEFAULT_BUDGET, tol: float = 1e-9) -> PotentialReport:
    """Evaluate the residual on every 2x2 subgame and report the worst.

    Exact zero test under prp/rand; |residual| <= tol under scoring.
    """
    _check_budget(game, budget)
    n, m = game.n, game.m
    exact = game.mediator.kind != "scoring"
    worst = Fraction(0) if exact else 0.0
    witness = None
    others_profiles = list(iter_profiles(max(n - 2, 0), m)) or [()]
    for i in range(1, n):
        for j in range(i + 1, n + 1):
            rest_idx = [r for r in range(1, n + 1) if r not in (i, j)]
            for rest in others_profiles:
                base = [1] * n
                for r, t in zip(rest_idx, rest):
                    base[r - 1] = t
                base = tuple(base)
                for s1 in range(1, m):
                    for s2 in range(s1 + 1, m + 1):
                        for t1 in range(1, m):
                            for t2 in range(t1 + 1, m + 1):
                                res = potential_residual(game, i, j, (s1, s2), (t1, t2), base)
                                if abs(res) > worst:
                                    worst = abs(res)
                                    witness = PotentialWitness((i, j), (s1, s2), (t1, t2), base)
    has = worst == 0 if exact else worst <= tol
    return PotentialReport(has, worst, witness)


# ---------- path invariants ----------

@dataclass(frozen=True)
class PathStatistics:
    """Per-profile top-quality/top-count tables along a trajectory, with the
    per-topic minimum top count and maximum top quality over the whole path."""

    top_quality_rows: tuple[tuple[Fraction, ...], ...]
    top_count_rows: tuple[tuple[int, ...], ...]
    min_top_count: tuple[int, ...]
    max_top_quality: tuple[Fraction, ...]


@dataclass(frozen=True)
class StepCheck:
    index: int
    mover_quality_at_top: bool  # mover's quality reaches the pre-step top
    bound: str  # "pass", "fail", or "n/a" when the mover strictly exceeds the top


@dataclass(frozen=True)
class PathInvariantReport:
    statistics: PathStatistics
    checks: tuple[StepCheck, ...]

    @property
    def failures(self) -> int:
        return sum(
            1
            for c in self.checks
            if not c.mover_quality_at_top or c.bound == "fail"
        )


def path_invariant_report(game: Game, t: Trajectory) -> PathInvariantReport:
    """Check each step of a top-rank-mediator trajectory.

    Per step with target topic k: the mover's quality on k must reach the
    pre-step top quality, and whenever it does not strictly exceed it, the
    post-step utility must obey demand(k)/(min top count + 1), times the path
    maximum of k's top quality under the action scheme.
    """
    if game.mediator.kind != "prp":
        raise PreconditionError("path invariants apply to top-rank (prp) mediated games")
    profiles = _replay(game, t)
    b_rows = []
    h_rows = []
    for a in profiles:
        b, h = topic_tables(game, a)
        b_rows.append(b)
        h_rows.append(h)
    min_h = tuple(min(row[k] for row in h_rows) for k in range(game.m))
    max_b = tuple(max(row[k] for row in b_rows) for k in range(game.m))
    stats = PathStatistics(tuple(b_rows), tuple(h_rows), min_h, max_b)

    checks = []
    for r, s in enumerate(t.steps):
        k = s.to_topic
        q = game.quality[s.mover - 1][k - 1]
        b_before = b_rows[r][k - 1]
        at_top = q >= b_before
        if q > b_before:
            bound = "n/a"
        else:
            cap = game.demand[k - 1] / (min_h[k - 1] + 1)
            if game.scheme == ACTION:
                cap = cap * max_b[k - 1]
            # prp utilities are exact rationals, so the comparison is exact
            u_after = utility_vector(game, profiles[r + 1])[s.mover - 1]
            bound = "pass" if u_after <= cap else "fail"
        checks.append(StepCheck(s.index, at_top, bound))
    return PathInvariantReport(stats, tuple(checks))


def _replay(game: Game, t: Trajectory) -> list[Profile]:
    """Validate a trajectory against the game and return its profile list."""
    a = tuple(t.initial)
    if len(a) != game.n or any(not 1 <= x <= game.m for x in a):
        raise TrajectoryError("initial profile does not fit the game")
    profiles = [a]
    for s in t.steps:
        if not 1 <= s.mover <= game.n:
            raise TrajectoryError(f"step {s.index}: invalid mover {s.mover}")
        if a[s.mover - 1] != s.from_topic:
            raise TrajectoryError(f"step {s.index}: from_topic does not match the profile")
        if not 1 <= s.to_topic <= game.m:
            raise TrajectoryError(f"step {s.index}: invalid topic {s.to_topic}")
        b = replace_topic(a, s.mover, s.to_topic)
        u0 = utility_vector(game, a)[s.mover - 1]
        u1 = utility_vector(game, b)[s.mover - 1]
        if not improves(u0, u1):
            raise TrajectoryError(f"step {s.index}: not a strict improvement in this game")
        if s.utility_before != u0 or s.utility_after != u1:
            raise TrajectoryError(f"step {s.index}: recorded utilities do not match the game")
        a = b
        profiles.append(a)
    if a != tuple(t.terminal):
        raise TrajectoryError("terminal profile does not match the replayed steps")
    return profiles


# ---------- uniform-mediator reduction ----------

def rand_to_prp_reduction(game: Game) -> Game:
    """Rewrite a rand/exposure game as a prp game with all-ones quality.

    Every writer then ties at the top, so the tie split reproduces the
    uniform mediator's probabilities and utilities agree on every profile.
    """
    if game.mediator.kind != "rand":
        raise PreconditionError("reduction applies to the uniform (rand) mediator")
    if game.scheme != EXPOSURE:
        raise PreconditionError("reduction applies to the exposure scheme")
    ones = [[1] * game.m for _ in range(game.n)]
    return make_game(game.demand, ones, scheme=EXPOSURE)


# ---------- report serialization ----------

def analysis_report(
    game: Game,
    budget: int = DEFAULT_BUDGET,
    margin: float = 0.0,
    tol: float = 1e-9,
) -> dict:
    """Full analysis as a JSON-ready dict: fip (+ cycle witness), pne list,
    longest path (acyclic case), and the exact-potential report."""
    graph = improvement_graph(game, budget, margin)
    acyclic = _is_acyclic(graph.adj)
    report: dict = {"fip": acyclic}
    if acyclic:
        report["longest_path"] = longest_improvement_path(graph)
    else:
        report["cycle"] = [list(p) for p in shortest_cycle(graph)]
    report["pne"] = [list(a) for a in enumerate_pne(game, budget, margin)]
    pot = exact_potential_check(game, budget, tol)
    witness = None
    if pot.witness is not None:
        witness = {
            "authors": list(pot.witness.authors),
            "topics_i": list(pot.witness.topics_i),
            "topics_j": list(pot.witness.topics_j),
            "base": list(pot.witness.base),
        }
    report["potential"] = {
        "exists": pot.has_exact_potential,
        "residual": format_number(pot.worst_residual),
        "witness": witness,
    }
    return report
