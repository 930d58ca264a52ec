"""Best-first, cost-ordered, typed-hole top-down search.

Partial programs are expressions with typed holes.  The frontier is a
priority queue keyed by (boundCost, insertion order), where boundCost is
the cost already spent plus an admissible lower bound on the cost of
closing every remaining hole.  Closed programs come off the queue in
nondecreasing cost order; a portfolio runner races configurations.
"""

from __future__ import annotations

import heapq
import multiprocessing
import time
from dataclasses import dataclass
from hashlib import blake2b
from typing import Callable, Iterator

from .ast import (
    Expr,
    Hole,
    K_MKPAIR,
    Lambda,
    MkPair,
    Var,
    fill_leftmost,
    leftmost_hole,
)
from .components import (
    PoolElement,
    build_expansion,
    catalog,
    ground_universe,
    instantiations,
)
from .evalcore import (
    DEFAULT_FUEL,
    compile_expr,
    check_pairs_compiled,
    outcomes_compiled,
)
from .specio import IOSpec, satisfies
from .types import FunT, PairT, Type, is_ground, subterm_types
from .values import outcome_to_str
from .components import BASE_GROUND_TYPES
from .types import type_to_str

DEFAULT_MAX_COST = 20
DEFAULT_MAX_POPS = 2_000_000

# var reference, tuple-of-holes, lambda-with-hole
STRUCTURAL_COSTS = {"var_ref": 1, "tuple": 1, "lambda": 1}

_INF = 10**9


class _Unfillable:
    """No expansion chain can ever close a hole of the queried type."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Unfillable"


UNFILLABLE = _Unfillable()


@dataclass(frozen=True, slots=True)
class Configuration:
    """A weighted subset of pool elements plus search/evaluation limits.

    Structural expansions (variable references, tuples, lambdas) are
    always enabled at cost 1 each.
    """

    elements: tuple[PoolElement, ...]
    max_cost: int = DEFAULT_MAX_COST
    fuel: int = DEFAULT_FUEL

    def __post_init__(self):
        if not self.elements:
            raise ValueError("configuration needs at least one pool element")
        ids = [e.component for e in self.elements]
        if len(set(ids)) != len(ids):
            raise ValueError("pool element component ids must be unique")
        if self.max_cost < 1 or self.fuel < 1:
            raise ValueError("max_cost and fuel must be positive")

    def component_names(self) -> tuple[str, ...]:
        cat = catalog()
        return tuple(cat[e.component].name for e in self.elements)


@dataclass(frozen=True, slots=True)
class Budget:
    max_pops: int = DEFAULT_MAX_POPS
    wall_clock: float | None = None  # seconds


@dataclass(slots=True)
class PartialProgram:
    root: Expr
    spent_cost: int
    bound_cost: int
    seq: int


class SearchResult:
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Solved(SearchResult):
    program: Expr
    pop_count: int
    elapsed: float


@dataclass(frozen=True, slots=True)
class Exhausted(SearchResult):
    pop_count: int


@dataclass(frozen=True, slots=True)
class BudgetExceeded(SearchResult):
    pop_count: int


@dataclass(frozen=True, slots=True)
class ObsKey:
    """128-bit fingerprint of a program's outcomes on a fixed probe set."""

    digest: str


@dataclass(frozen=True, slots=True)
class ConfigStats:
    config_index: int
    kind: str  # solved | exhausted | budget | stopped | invalid
    pops: int
    elapsed_ms: float


def _has_arrow(t: Type) -> bool:
    return any(isinstance(s, FunT) for s in subterm_types(t))


def _close_universe(types_: set[Type]) -> tuple[Type, ...]:
    """Base instantiation types plus all arrow-free ground subterms."""
    universe = set(BASE_GROUND_TYPES)
    for t in types_:
        universe |= subterm_types(t)
    universe = {u for u in universe if is_ground(u) and not _has_arrow(u)}
    return tuple(sorted(universe, key=type_to_str))


def _universe_for(t: Type) -> tuple[Type, ...]:
    return _close_universe({t})


class SearchContext:
    """Per-configuration caches: lower bounds and expansion templates.

    Lower bounds are minimal completion costs over (type, in-scope binder
    types) states, solved by branch-and-bound capped at the configuration's
    max_cost.  The state space is infinite (projections like fst manufacture
    ever-larger dependency types), but every rule costs at least 1, so the
    cap bounds the recursion; any value above max_cost is search-equivalent
    to unfillable because such children are dropped anyway.  Returned values
    at or below the cap are the exact least-fixpoint costs, which makes the
    heuristic consistent: expanding a hole can never decrease boundCost.
    """

    def __init__(self, config: Configuration, ground_types: tuple[Type, ...]):
        self.config = config
        self.ground_types = ground_types
        self.budget = config.max_cost
        self._exact: dict[tuple[Type, frozenset], int] = {}
        self._floor: dict[tuple[Type, frozenset], int] = {}  # proven "min > floor"
        self._rules_memo: dict[tuple[Type, frozenset], list] = {}
        self._templates: dict[Type, list[tuple[Expr, int, tuple[Type, ...]]]] = {}
        self._cands: dict[tuple[Type, tuple], list[tuple[Expr, int, int]]] = {}
        self._seq = 0

    def next_seq(self) -> int:
        self._seq += 1
        return self._seq

    # -- lower bounds ----------------------------------------------------

    def _rules(self, key) -> list[tuple[int, tuple]]:
        hit = self._rules_memo.get(key)
        if hit is not None:
            return hit
        t, scope = key
        rules: list[tuple[int, tuple]] = []
        if t in scope:
            rules.append((STRUCTURAL_COSTS["var_ref"], ()))
        if isinstance(t, PairT):
            rules.append(
                (STRUCTURAL_COSTS["tuple"], ((t.fst, scope), (t.snd, scope)))
            )
        if isinstance(t, FunT):
            rules.append(
                (STRUCTURAL_COSTS["lambda"], ((t.ret, scope | {t.arg}),))
            )
        for elem in self.config.elements:
            for _targs, arg_types in instantiations(elem, t, self.ground_types):
                rules.append((elem.cost, tuple((a, scope) for a in arg_types)))
        self._rules_memo[key] = rules
        return rules

    def lb(self, t: Type, scope: frozenset) -> int:
        """Least completion cost for a hole of type t, or _INF past max_cost.

        Every public query runs at the same cap, so each state has one
        stable value and bound arithmetic stays consistent.
        """
        v = self._bb(t, scope, self.budget)
        return v if v <= self.budget else _INF

    def _bb(self, t: Type, scope: frozenset, budget: int) -> int:
        """Exact minimal derivation cost if <= budget, else budget + 1."""
        if budget < 1:  # every derivation costs at least 1
            return budget + 1
        key = (t, scope)
        v = self._exact.get(key)
        if v is not None:
            return v if v <= budget else budget + 1
        if self._floor.get(key, 0) >= budget:
            return budget + 1
        best = budget + 1
        for cost, deps in self._rules(key):
            if cost >= best:
                continue
            total = cost
            for dep_t, dep_scope in deps:
                allowed = best - 1 - total
                sub = self._bb(dep_t, dep_scope, allowed)
                if sub > allowed:
                    total = best
                    break
                total += sub
            if total < best:
                best = total
        if best <= budget:
            self._exact[key] = best
        elif budget > self._floor.get(key, 0):
            self._floor[key] = budget
        return best

    # -- expansion templates ---------------------------------------------

    def templates(self, t: Type) -> list[tuple[Expr, int, tuple[Type, ...]]]:
        """Scope-independent expansions for a hole of type t.

        Each entry is (replacement fragment, cost, fresh hole types); the
        fresh holes live at the same scope as the hole being filled.
        """
        hit = self._templates.get(t)
        if hit is not None:
            return hit
        cat = catalog()
        out: list[tuple[Expr, int, tuple[Type, ...]]] = []
        for elem in self.config.elements:
            comp = cat[elem.component]
            for type_args, arg_types in instantiations(elem, t, self.ground_types):
                out.append((build_expansion(comp, type_args, arg_types),
                            elem.cost, arg_types))
        self._templates[t] = out
        return out

    # -- fully-resolved expansion candidates -------------------------------

    def candidates(self, t: Type, scope: tuple[Type, ...]
                   ) -> tuple[list[tuple[Expr, int, int]], int]:
        """One hole's fillings plus the hole's own lower bound.

        Fillings are (replacement, cost, lower bound of the fresh holes);
        ones whose fresh holes cannot all be closed are dropped here.  The
        mk_pair pool element and the structural tuple produce the same
        replacement, so only the cheaper of the two survives.  The second
        result equals lb(t, scope): the min over fillings of cost + holes.
        """
        key = (t, scope)
        hit = self._cands.get(key)
        if hit is not None:
            return hit
        scope_key = frozenset(scope)
        out: list[tuple[Expr, int, int]] = []
        for back, bt in enumerate(reversed(scope)):
            if bt == t:
                out.append((Var(back), STRUCTURAL_COSTS["var_ref"], 0))
        pair_elem_cost = None  # mk_pair element's cost when it applies here
        for fragment, cost, arg_types in self.templates(t):
            holes_lb = 0
            for a in arg_types:
                v = self.lb(a, scope_key)
                if v >= _INF:
                    holes_lb = _INF
                    break
                holes_lb += v
            if holes_lb >= _INF:
                continue
            out.append((fragment, cost, holes_lb))
            if isinstance(t, PairT) and fragment.KIND == K_MKPAIR:
                pair_elem_cost = cost
        if isinstance(t, PairT):
            lb_fst = self.lb(t.fst, scope_key)
            lb_snd = self.lb(t.snd, scope_key)
            tuple_cost = STRUCTURAL_COSTS["tuple"]
            if lb_fst < _INF and lb_snd < _INF and (
                pair_elem_cost is None or tuple_cost < pair_elem_cost
            ):
                if pair_elem_cost is not None:
                    out = [c for c in out if c[0].KIND != K_MKPAIR]
                out.append((MkPair(Hole(t.fst), Hole(t.snd)), tuple_cost,
                            lb_fst + lb_snd))
        if isinstance(t, FunT):
            v = self.lb(t.ret, frozenset(scope + (t.arg,)))
            if v < _INF:
                out.append((Lambda(t.arg, Hole(t.ret)),
                            STRUCTURAL_COSTS["lambda"], v))
        hole_lb = min((cost + holes_lb for _r, cost, holes_lb in out),
                      default=_INF)
        entry = (out, hole_lb)
        self._cands[key] = entry
        return entry


def holes_with_scopes(
    e: Expr, scope: tuple[Type, ...] = ()
) -> list[tuple[Type | None, tuple[Type, ...]]]:
    """(hole type, enclosing binder types) for every hole, preorder."""
    from .ast import K_HOLE, K_LAMBDA, children

    if e.KIND == K_HOLE:
        return [(e.hole_type, scope)]
    if e.KIND == K_LAMBDA:
        return holes_with_scopes(e.body, scope + (e.param_type,))
    out = []
    for c in children(e):
        out.extend(holes_with_scopes(c, scope))
    return out


def lower_bound_cost(t: Type, config: Configuration):
    """Least cost to close a hole of type t at top level, or UNFILLABLE."""
    if not is_ground(t):
        raise ValueError(f"type must be ground: {type_to_str(t)}")
    ctx = SearchContext(config, _universe_for(t))
    v = ctx.lb(t, frozenset())
    return UNFILLABLE if v >= _INF else v


def make_partial(root: Expr, spent_cost: int, config: Configuration,
                 ctx: SearchContext | None = None, seq: int = 0) -> PartialProgram:
    """Build a PartialProgram with its boundCost computed from scratch."""
    if ctx is None:
        ctx = _context_for_root(root, config)
    bound = spent_cost
    for t, scope in holes_with_scopes(root):
        if t is None:
            raise ValueError("every hole must carry a type annotation")
        bound += ctx.lb(t, frozenset(scope))
    return PartialProgram(root, spent_cost, min(bound, _INF), seq)


def _expand(ctx: SearchContext, partial: PartialProgram,
            found: tuple[Hole, tuple[Type, ...]]) -> list[PartialProgram]:
    hole, scope = found
    t = hole.hole_type
    if t is None:
        raise ValueError("cannot expand an unannotated hole")
    cands, hole_lb = ctx.candidates(t, scope)
    rest = partial.bound_cost - partial.spent_cost - hole_lb
    max_cost = ctx.config.max_cost
    spent0 = partial.spent_cost
    root = partial.root

    children: list[PartialProgram] = []
    for replacement, cost, holes_lb in cands:
        spent = spent0 + cost
        bound = spent + rest + holes_lb
        if bound > max_cost:
            continue
        children.append(
            PartialProgram(fill_leftmost(root, replacement),
                           spent, bound, ctx.next_seq())
        )
    return children


def expand(partial: PartialProgram, config: Configuration,
           ctx: SearchContext | None = None) -> list[PartialProgram]:
    """Fill the leftmost hole in every legal way, dropping over-budget children."""
    found = leftmost_hole(partial.root)
    if found is None:
        raise ValueError("partial program has no holes")
    if ctx is None:
        return _expand(_context_for_root(partial.root, config), partial, found)
    return _expand(ctx, partial, found)


def _context_for_root(root: Expr, config: Configuration) -> SearchContext:
    types_: set[Type] = set()
    for t, scope in holes_with_scopes(root):
        if t is not None:
            types_.add(t)
        types_.update(scope)
    return SearchContext(config, _close_universe(types_))


def _initial(ctx: SearchContext, root_type: Type) -> PartialProgram | None:
    lb0 = ctx.lb(root_type, frozenset())
    if lb0 >= _INF:
        return None
    if lb0 > ctx.config.max_cost:
        return None
    return PartialProgram(Hole(root_type), 0, lb0, 0)


def _search(root_type: Type, config: Configuration, budget: Budget,
            stop: Callable[[], bool] | None = None) -> Iterator[tuple]:
    """Core loop shared by synthesize and enumerate_closed.

    Yields ("closed", program, spent, pops) for each closed program in
    nondecreasing cost order, then one terminal ("exhausted"|"budget", pops).
    """
    ctx = SearchContext(config, _universe_for(root_type))
    start = _initial(ctx, root_type)
    deadline = None
    if budget.wall_clock is not None:
        deadline = time.perf_counter() + budget.wall_clock
    pops = 0
    last_bound = 0
    max_cost = config.max_cost
    seq = 0
    push = heapq.heappush
    # children are materialized lazily: a heap entry carries the parent's
    # tree and the replacement for its leftmost hole, and the fill happens
    # only if the entry is actually popped
    heap: list[tuple] = []  # (bound, seq, parent root, replacement, spent)
    if start is not None:
        heap.append((start.bound_cost, 0, start.root, None, 0))
    while heap:
        if pops >= budget.max_pops:
            yield ("budget", pops)
            return
        if (pops & 0xFF) == 0:
            if deadline is not None and time.perf_counter() > deadline:
                yield ("budget", pops)
                return
            if stop is not None and stop():
                yield ("budget", pops)
                return
        bound, _seq, parent, replacement, spent = heapq.heappop(heap)
        pops += 1
        assert bound >= last_bound, "popped bounds must be nondecreasing"
        last_bound = bound
        root = parent if replacement is None else fill_leftmost(parent, replacement)
        found = leftmost_hole(root)
        if found is None:
            yield ("closed", root, spent, pops)
            continue
        hole, scope = found
        cands, hole_lb = ctx.candidates(hole.hole_type, scope)
        rest = bound - spent - hole_lb
        for frag, cost, holes_lb in cands:
            child_spent = spent + cost
            child_bound = child_spent + rest + holes_lb
            if child_bound > max_cost:
                continue
            seq += 1
            push(heap, (child_bound, seq, root, frag, child_spent))
    yield ("exhausted", pops)


def synthesize(spec: IOSpec, config: Configuration,
               budget: Budget | None = None,
               stop: Callable[[], bool] | None = None) -> SearchResult:
    """Search for the cheapest program mapping every spec input to its output."""
    if budget is None:
        budget = Budget()
    root_type = FunT(spec.input_type, spec.output_type)
    if lower_bound_cost(root_type, config) is UNFILLABLE:
        raise ValueError("task type is unfillable under this configuration")
    t0 = time.perf_counter()
    pairs = spec.pairs
    fuel = config.fuel
    for event in _search(root_type, config, budget, stop):
        if event[0] == "closed":
            _tag, program, _spent, pops = event
            if check_pairs_compiled(compile_expr(program), pairs, fuel):
                return Solved(program, pops, time.perf_counter() - t0)
        elif event[0] == "exhausted":
            return Exhausted(event[1])
        else:
            return BudgetExceeded(event[1])
    return Exhausted(0)


def enumerate_closed(root_type: Type, config: Configuration,
                     max_programs: int | None = None,
                     budget: Budget | None = None) -> Iterator[tuple[Expr, int]]:
    """Yield (program, cost) for closed programs in nondecreasing cost order."""
    if budget is None:
        budget = Budget()
    emitted = 0
    if max_programs is not None and emitted >= max_programs:
        return
    for event in _search(root_type, config, budget):
        if event[0] != "closed":
            return
        yield (event[1], event[2])
        emitted += 1
        if max_programs is not None and emitted >= max_programs:
            return


def observational_key(program: Expr, probes, fuel: int = DEFAULT_FUEL) -> ObsKey:
    """Stable 128-bit fingerprint of the program's outcomes on the probes."""
    outs = outcomes_compiled(compile_expr(program), list(probes), fuel)
    blob = "\n".join(outcome_to_str(o) for o in outs).encode()
    return ObsKey(blake2b(blob, digest_size=16).hexdigest())


# -- portfolio ------------------------------------------------------------

_WORKER_STOP = None


def _pool_init(event):
    global _WORKER_STOP
    _WORKER_STOP = event


def _portfolio_worker(job):
    idx, spec, config, budget = job
    stop = _WORKER_STOP.is_set if _WORKER_STOP is not None else None
    t0 = time.perf_counter()
    res = synthesize(spec, config, budget, stop=stop)
    ms = (time.perf_counter() - t0) * 1000.0
    if isinstance(res, Solved):
        return (idx, "solved", res.pop_count, res.elapsed * 1000.0, res.program)
    if isinstance(res, Exhausted):
        return (idx, "exhausted", res.pop_count, ms, None)
    return (idx, "budget", res.pop_count, ms, None)


def run_portfolio(spec: IOSpec, configs, budget: Budget | None = None,
                  parallelism: int = 1) -> tuple[SearchResult, list[ConfigStats]]:
    """Race synthesize over the configurations; first verified solve wins.

    Sequential (parallelism=1) execution is fully deterministic.  Every
    returned program is re-verified against the spec before it is
    reported, so a cancellation race can never surface a bad program.
    """
    configs = list(configs)
    if not configs:
        raise ValueError("configs must be non-empty")
    if not isinstance(parallelism, int) or parallelism < 1:
        raise ValueError("parallelism must be a positive integer")
    if budget is None:
        budget = Budget()

    stats: list[ConfigStats] = []
    if parallelism == 1:
        winner: Solved | None = None
        total_pops = 0
        all_exhausted = True
        for i, config in enumerate(configs):
            if winner is not None:
                stats.append(ConfigStats(i, "stopped", 0, 0.0))
                continue
            res = synthesize(spec, config, budget)
            if isinstance(res, Solved):
                total_pops += res.pop_count
                if satisfies(res.program, spec, config.fuel):
                    winner = res
                    stats.append(ConfigStats(i, "solved", res.pop_count,
                                             res.elapsed * 1000.0))
                else:
                    all_exhausted = False
                    stats.append(ConfigStats(i, "invalid", res.pop_count,
                                             res.elapsed * 1000.0))
            elif isinstance(res, Exhausted):
                total_pops += res.pop_count
                stats.append(ConfigStats(i, "exhausted", res.pop_count, 0.0))
            else:
                total_pops += res.pop_count
                all_exhausted = False
                stats.append(ConfigStats(i, "budget", res.pop_count, 0.0))
        if winner is not None:
            return winner, stats
        if all_exhausted:
            return Exhausted(total_pops), stats
        return BudgetExceeded(total_pops), stats

    mp = multiprocessing.get_context("fork")
    event = mp.Event()
    jobs = [(i, spec, config, budget) for i, config in enumerate(configs)]
    rows: dict[int, tuple] = {}
    with mp.Pool(parallelism, initializer=_pool_init, initargs=(event,)) as pool:
        for row in pool.imap_unordered(_portfolio_worker, jobs):
            rows[row[0]] = row
            if row[1] == "solved":
                event.set()
    winner = None
    total_pops = 0
    all_exhausted = True
    for i, config in enumerate(configs):
        idx, kind, pops, ms, program = rows[i]
        total_pops += pops
        if kind == "solved":
            if satisfies(program, spec, config.fuel):
                if winner is None:
                    winner = Solved(program, pops, ms / 1000.0)
            else:
                kind = "invalid"
                all_exhausted = False
        elif kind == "budget":
            kind = "stopped" if event.is_set() else "budget"
            all_exhausted = False
        elif kind != "exhausted":
            all_exhausted = False
        stats.append(ConfigStats(i, kind, pops, ms))
    if winner is not None:
        return winner, stats
    if all_exhausted:
        return Exhausted(total_pops), stats
    return BudgetExceeded(total_pops), stats
