"""Independent reference implementations the tests check the package against.

Everything here is written the slow, obvious way on purpose: plain
recursive enumeration with brute-force type-argument assignment instead
of unification, no caching, no priority queue.  If the optimized search
and these agree program-for-program, the clever parts earn their keep.
"""
import itertools

from propsig.ast import (
    Apply,
    BoolLit,
    Fst,
    IntLit,
    Lambda,
    MkPair,
    NilLit,
    Snd,
    Var,
)
from propsig.components import BASE_GROUND_TYPES, catalog
from propsig.printer import print_expr
from propsig.types import FunT, PairT, is_ground, subst_type, subterm_types, type_to_str


def brute_universe(root_type):
    """Base ground types plus arrow-free ground subterms of the target."""
    pool = set(BASE_GROUND_TYPES) | subterm_types(root_type)
    return tuple(sorted(
        (t for t in pool
         if is_ground(t) and not any(isinstance(s, FunT) for s in subterm_types(t))),
        key=type_to_str))


def _node(name, targs, args):
    literal = {"zero": IntLit(0), "one": IntLit(1), "two": IntLit(2),
               "neg_one": IntLit(-1),
               "true": BoolLit(True), "false": BoolLit(False)}.get(name)
    if literal is not None:
        return literal
    if name == "nil":
        return NilLit(targs[0])
    if name == "fst":
        return Fst(args[0])
    if name == "snd":
        return Snd(args[0])
    return Apply(name, targs, args)


def brute_force_programs(root_type, config, max_cost):
    """Every closed program of root_type costing at most max_cost.

    Returns a sorted list of (cost, canonical text) with one entry per
    derivation.  Assumes any mk_pair pool element costs 1, so it fuses
    with the always-on structural pair rule exactly as the search does.
    """
    cat = catalog()
    uni = brute_universe(root_type)
    elems = []
    for e in config.elements:
        comp = cat[e.component]
        if comp.name == "mk_pair":
            assert e.cost == 1, "oracle only models cost-1 mk_pair"
            continue
        elems.append((comp, e.cost))

    def fills(t, scope, budget):
        """Yield (closed expr, cost) for a hole of type t, cost <= budget."""
        if budget < 1:
            return
        for back, bound_type in enumerate(reversed(scope)):
            if bound_type == t:
                yield Var(back), 1
        if isinstance(t, PairT):
            for left, cl in fills(t.fst, scope, budget - 1):
                for right, cr in fills(t.snd, scope, budget - 1 - cl):
                    yield MkPair(left, right), 1 + cl + cr
        if isinstance(t, FunT):
            for body, cb in fills(t.ret, scope + (t.arg,), budget - 1):
                yield Lambda(t.arg, body), 1 + cb
        for comp, cost in elems:
            if cost > budget:
                continue
            sch = comp.scheme
            for assignment in itertools.product(uni, repeat=sch.n_vars):
                binding = dict(enumerate(assignment))
                if subst_type(sch.ret, binding) != t:
                    continue
                params = tuple(subst_type(p, binding) for p in sch.params)

                def arg_lists(idx, left):
                    if idx == len(params):
                        yield (), 0
                        return
                    # later arguments need at least 1 cost each
                    for arg, ca in fills(params[idx], scope,
                                         left - (len(params) - idx - 1)):
                        for rest, cr in arg_lists(idx + 1, left - ca):
                            yield (arg,) + rest, ca + cr

                for args, cargs in arg_lists(0, budget - cost):
                    yield _node(comp.name, assignment, args), cost + cargs

    return sorted((cost, print_expr(prog))
                  for prog, cost in fills(root_type, (), max_cost))
