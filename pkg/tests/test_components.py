"""Component catalog: pinned contents, instantiation, ground universe."""
import pytest

from propsig.components import (
    BASE_GROUND_TYPES,
    PoolElement,
    catalog,
    default_pool_elements,
    ground_universe,
    instantiations,
)
from propsig.types import BOOL, INT, FunT, ListT, PairT, parse_type

CAT = catalog()
ELS = {CAT[e.component].name: e for e in default_pool_elements()}


def test_catalog_is_pinned():
    assert len(CAT) == 57
    names = [c.name for c in CAT]
    assert names[0] == "add" and names[-1] == "find_index"
    assert len(set(names)) == 57
    assert [c.cid for c in CAT] == list(range(57))


def test_higher_order_components_cost_two():
    for c in CAT:
        has_arrow_param = any(isinstance(p, FunT) for p in c.scheme.params)
        assert c.cost == (2 if has_arrow_param else 1), c.name


def test_catalog_hash_stable():
    assert CAT.hash() == catalog().hash()
    assert len(CAT.hash()) == 16


def test_default_pool_covers_catalog():
    els = default_pool_elements()
    assert sorted(e.component for e in els) == list(range(57))
    for e in els:
        assert e.cost == CAT[e.component].cost


def test_pool_element_validates_cost():
    with pytest.raises(ValueError):
        PoolElement(0, 0)


def test_ground_universe_contains_base_and_subterms():
    uni = ground_universe(PairT(ListT(INT), INT), ListT(INT))
    assert set(BASE_GROUND_TYPES) <= set(uni)
    assert PairT(ListT(INT), INT) in uni
    # arrow types never enter the universe
    assert not any(isinstance(t, FunT) for t in uni)


def test_instantiations_monomorphic_component():
    uni = ground_universe(INT, INT)
    insts = instantiations(ELS["add"], INT, uni)
    # no type variables, so exactly one instantiation with empty bindings
    assert insts == [((), (INT, INT))]
    assert instantiations(ELS["add"], BOOL, uni) == []


def test_instantiations_ranges_over_universe():
    uni = ground_universe(ListT(INT), ListT(INT))
    # len : (List<a>) -> Int must instantiate a over every ground type
    insts = instantiations(ELS["len"], INT, uni)
    arg_types = {params[0] for _targs, params in insts}
    assert arg_types == {ListT(t) for t in uni}


def test_instantiations_reject_bindings_outside_universe():
    uni = ground_universe(INT, INT)
    # fst : ((a, b)) -> a; a = Int->Int is not a ground type
    assert instantiations(ELS["fst"], FunT(INT, INT), uni) == []
    # every binding, unification-forced ones included, stays in the universe
    for e in default_pool_elements():
        for targs, params in instantiations(e, INT, uni):
            assert set(targs) <= set(uni), CAT[e.component].name


def test_higher_order_instantiation_keeps_arrow_params():
    uni = ground_universe(ListT(INT), ListT(INT))
    insts = instantiations(ELS["map"], ListT(INT), uni)
    # map : (List<a>, a -> b) -> List<b> with b := Int; a ranges over universe
    assert any(params[1] == FunT(INT, INT) for _targs, params in insts)
    assert all(isinstance(params[1], FunT) for _targs, params in insts)
    assert len(insts) == len(uni)


def test_zip_with_reaches_pair_results():
    t = parse_type("List<(Int, Int)>")
    uni = ground_universe(PairT(ListT(INT), ListT(INT)), t)
    insts = instantiations(ELS["zip_with"], t, uni)
    assert any(params[2].ret == PairT(INT, INT) for _targs, params in insts)


def test_catalog_dump_shape():
    dump = CAT.dump()
    assert len(dump) == 57
    row = dump[0]
    assert row["name"] == "add" and row["cost"] == 1 and "scheme" in row
