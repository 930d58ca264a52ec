"""Search: cost-ordered enumeration, bounds, budgets, portfolio racing."""
import pytest
from oracles import brute_force_programs

from propsig.ast import Hole
from propsig.printer import print_expr
from propsig.specio import IOSpec, satisfies
from propsig.synth import (
    UNFILLABLE,
    Budget,
    BudgetExceeded,
    Configuration,
    Exhausted,
    Solved,
    enumerate_closed,
    expand,
    holes_with_scopes,
    lower_bound_cost,
    make_partial,
    observational_key,
    run_portfolio,
    synthesize,
)
from propsig.types import BOOL, INT, FunT, ListT, PairT
from conftest import config_named


def test_configuration_validation():
    cfg = config_named("add", "zero")
    with pytest.raises(ValueError):
        Configuration(())
    with pytest.raises(ValueError):
        Configuration(cfg.elements + cfg.elements)
    with pytest.raises(ValueError):
        Configuration(cfg.elements, max_cost=0)
    with pytest.raises(ValueError):
        Configuration(cfg.elements, fuel=0)


def test_lower_bound_basics():
    cfg = config_named("add", "zero")
    assert lower_bound_cost(INT, cfg) == 1          # zero
    assert lower_bound_cost(FunT(INT, INT), cfg) == 2   # \x { x }
    assert lower_bound_cost(PairT(INT, INT), cfg) == 3  # (zero, zero)
    # no list producers in this pool
    assert lower_bound_cost(ListT(INT), cfg) is UNFILLABLE
    assert lower_bound_cost(FunT(ListT(INT), ListT(INT)), cfg) == 2  # identity


def test_lower_bound_requires_ground_type():
    from propsig.types import TypeVar
    with pytest.raises(ValueError):
        lower_bound_cost(TypeVar(0), config_named("add", "zero"))


def test_lower_bound_is_admissible():
    # no enumerated program may cost less than the root's lower bound
    cfg = config_named("zero", "one", "add", max_cost=4)
    root = FunT(INT, INT)
    lb = lower_bound_cost(root, cfg)
    costs = [c for _p, c in enumerate_closed(root, cfg)]
    assert costs and min(costs) == costs[0] >= lb


def test_expand_is_consistent():
    # children never undercut the parent's bound and the tree only grows
    cfg = config_named("zero", "one", "add", "fst", "snd", "mk_pair",
                       max_cost=5)
    frontier = [make_partial(Hole(FunT(PairT(INT, INT), INT)), 0, cfg)]
    seen = 0
    for _ in range(4):
        nxt = []
        for p in frontier:
            if not holes_with_scopes(p.root):
                continue
            for child in expand(p, cfg):
                assert child.bound_cost >= p.bound_cost
                assert child.spent_cost > p.spent_cost
                assert child.bound_cost <= cfg.max_cost
                seen += 1
                nxt.append(child)
        frontier = nxt
    assert seen > 20


def test_enumeration_matches_brute_force():
    cases = [
        (FunT(INT, INT), config_named("zero", "one", "add", max_cost=5)),
        (FunT(PairT(INT, INT), INT),
         config_named("fst", "snd", "mk_pair", "add", max_cost=5)),
    ]
    for root, cfg in cases:
        got = sorted((c, print_expr(p)) for p, c in enumerate_closed(root, cfg))
        want = brute_force_programs(root, cfg, cfg.max_cost)
        assert got == want, print_expr(root) if hasattr(root, "KIND") else root


def test_enumeration_costs_nondecreasing():
    cfg = config_named("zero", "one", "two", "add", "mul", max_cost=6)
    costs = [c for _p, c in enumerate_closed(FunT(INT, INT), cfg)]
    assert costs == sorted(costs)
    assert set(costs) == {2, 4, 6}


def test_synthesize_swap(swap_spec):
    from propsig.parser import parse_expr
    res = synthesize(swap_spec, config_named("fst", "snd", "mk_pair"))
    assert isinstance(res, Solved)
    assert satisfies(res.program, swap_spec)
    assert print_expr(res.program) == \
        print_expr(parse_expr("\\(x:(Int, Int)) { (snd(x), fst(x)) }"))


def test_synthesize_returns_cheapest(square_spec):
    from propsig.parser import parse_expr
    res = synthesize(square_spec, config_named("mul", "add", "one", "two"))
    assert isinstance(res, Solved)
    assert print_expr(res.program) == \
        print_expr(parse_expr("\\(x:Int) { mul(x, x) }"))


def test_synthesize_unfillable_raises():
    # no producer of Bool anywhere in this pool
    spec = IOSpec(INT, BOOL, ((1, True),))
    with pytest.raises(ValueError, match="unfillable"):
        synthesize(spec, config_named("add", "zero"))


def test_synthesize_exhausts_small_space():
    # nothing within cost 4 maps 1 to 99
    spec = IOSpec(INT, INT, ((1, 99),))
    res = synthesize(spec, config_named("zero", "one", "add", max_cost=4))
    assert isinstance(res, Exhausted)
    assert res.pop_count > 0


def test_budget_max_pops():
    spec = IOSpec(INT, INT, ((1, 99),))
    res = synthesize(spec, config_named("zero", "one", "add", "mul"),
                     Budget(max_pops=25))
    assert isinstance(res, BudgetExceeded)
    assert res.pop_count == 25


def test_budget_wall_clock():
    spec = IOSpec(INT, INT, ((1, 99),))
    res = synthesize(spec, config_named("zero", "one", "add", "mul"),
                     Budget(wall_clock=0.0))
    assert isinstance(res, BudgetExceeded)


def test_observational_key_groups_equivalents():
    from propsig.parser import parse_expr
    probes = [-3, 0, 1, 4]
    doubled = observational_key(parse_expr("\\(x:Int) { add(x, x) }"), probes)
    twice = observational_key(parse_expr("\\(x:Int) { mul(x, 2) }"), probes)
    squared = observational_key(parse_expr("\\(x:Int) { mul(x, x) }"), probes)
    assert doubled == twice
    assert doubled != squared
    # runtime errors fingerprint too, instead of raising
    crash = observational_key(parse_expr("\\(x:Int) { div(x, x) }"), probes)
    assert crash != doubled


def test_portfolio_sequential_first_winner(swap_spec):
    configs = [
        config_named("add", "zero"),            # wrong vocabulary
        config_named("fst", "snd", "mk_pair"),  # solves
        config_named("fst", "snd", "mk_pair", "add"),  # never reached
    ]
    res, stats = run_portfolio(swap_spec, configs)
    assert isinstance(res, Solved)
    assert [s.kind for s in stats] == ["exhausted", "solved", "stopped"]
    assert [s.config_index for s in stats] == [0, 1, 2]
    assert stats[1].pops == res.pop_count
    assert stats[2].pops == 0


def test_portfolio_reports_budget(swap_spec):
    configs = [config_named("add", "zero", "mul", "one")]
    res, stats = run_portfolio(swap_spec, configs, Budget(max_pops=10))
    assert isinstance(res, BudgetExceeded)
    assert stats[0].kind == "budget"


def test_portfolio_all_exhausted():
    spec = IOSpec(INT, INT, ((1, 99),))
    configs = [config_named("zero", "one", "add", max_cost=3),
               config_named("zero", "two", "add", max_cost=3)]
    res, stats = run_portfolio(spec, configs)
    assert isinstance(res, Exhausted)
    assert res.pop_count == sum(s.pops for s in stats)
    assert all(s.kind == "exhausted" for s in stats)


def test_portfolio_input_validation(swap_spec):
    with pytest.raises(ValueError):
        run_portfolio(swap_spec, [])
    with pytest.raises(ValueError):
        run_portfolio(swap_spec, [config_named("fst", "snd")], parallelism=0)


def test_portfolio_parallel_matches_sequential(swap_spec):
    configs = [
        config_named("add", "zero", max_cost=6),
        config_named("fst", "snd", "mk_pair"),
    ]
    seq, _ = run_portfolio(swap_spec, configs)
    par, par_stats = run_portfolio(swap_spec, configs, parallelism=2)
    assert isinstance(par, Solved)
    assert print_expr(par.program) == print_expr(seq.program)
    assert len(par_stats) == len(configs)
