import json

import numpy as np
import pytest

from sheetdag import Binary, Call, Constant, Ref, Unary, build_graph, load_graph, parse_formula, recompute_dirty, set_input
from sheetdag.parser import evaluate, references
from utils.errors import CycleError, EvalError, FormulaSyntaxError, NotAnInputCell, UndefinedReference, UnknownFunction


# ==================== PARSER ====================

def test_parse_constant():
    assert parse_formula("3") == Constant(3.0)


def test_parse_precedence():
    ast = parse_formula("capex_wind * a_wind + 2")
    assert ast == Binary("+", Binary("*", Ref("capex_wind"), Ref("a_wind")), Constant(2.0))


def test_trailing_comma_reports_position():
    with pytest.raises(FormulaSyntaxError) as info:
        parse_formula("SUM(a, b,")
    assert info.value.position == 8


def test_unknown_function():
    with pytest.raises(UnknownFunction):
        parse_formula("SQRT(a)")


def test_wrong_arity():
    with pytest.raises(FormulaSyntaxError):
        parse_formula("IF(a, b)")
    with pytest.raises(FormulaSyntaxError):
        parse_formula("SUM()")


def test_power_and_unary_minus():
    # ^ binds tighter than unary minus
    assert parse_formula("-2^2") == Unary("neg", Binary("pow", Constant(2.0), Constant(2.0)))
    assert evaluate(parse_formula("-2^2"), {}.__getitem__) == -4.0
    assert evaluate(parse_formula("2^-1"), {}.__getitem__) == 0.5


def test_functions_evaluate():
    values = {"a": 3.0, "b": -1.0}
    assert evaluate(parse_formula("SUM(a, b, 1)"), values.__getitem__) == 3.0
    assert evaluate(parse_formula("IF(b, a, 0)"), values.__getitem__) == 3.0
    assert evaluate(parse_formula("IF(0, a, 7)"), values.__getitem__) == 7.0
    assert evaluate(parse_formula("CLAMP(a, 0, 2)"), values.__getitem__) == 2.0
    assert evaluate(parse_formula("MAX(0, b)"), values.__getitem__) == 0.0
    assert isinstance(parse_formula("MIN(a, b)"), Binary)
    assert isinstance(parse_formula("SUM(a)"), Call)


def test_references():
    assert references(parse_formula("a + MAX(b, a) * 2")) == {"a", "b"}


def test_negated_literal_is_constant():
    assert parse_formula("-2") == Constant(-2.0)
    assert parse_formula("--2") == Constant(2.0)
    assert parse_formula("-a") == Unary("neg", Ref("a"))
    assert parse_formula("2^-1") == Binary("pow", Constant(2.0), Constant(-1.0))


def test_nesting_limit():
    deep = "(" * 150 + "1" + ")" * 150
    with pytest.raises(FormulaSyntaxError):
        parse_formula(deep)
    shallow = "(" * 50 + "1" + ")" * 50
    assert parse_formula(shallow) == Constant(1.0)


def test_long_chain_evaluates():
    formula = " + ".join(["a"] * 1500)
    assert evaluate(parse_formula(formula), {"a": 1.0}.__getitem__) == 1500.0


def test_if_skips_unchosen_branch():
    assert evaluate(parse_formula("IF(1, 1, 1/0)"), {}.__getitem__) == 1.0
    assert evaluate(parse_formula("IF(0, 1/0, 2)"), {}.__getitem__) == 2.0


@pytest.mark.parametrize("formula", ["(-8) ^ 0.5", "0 ^ -1", "1 / 0"])
def test_evaluation_errors(formula):
    with pytest.raises(EvalError):
        evaluate(parse_formula(formula), {}.__getitem__)


# ==================== GRAPH ====================

def test_build_graph_edges_and_order():
    graph = build_graph({"a": "1", "b": "a+1"})
    assert graph.edges["b"] == ("a",)
    assert graph.topo_order == ["a", "b"]


def test_two_cycle():
    with pytest.raises(CycleError) as info:
        build_graph({"a": "b", "b": "a"})
    assert info.value.cycle == ["a", "b"]


def test_undefined_reference():
    with pytest.raises(UndefinedReference) as info:
        build_graph({"a": "c+1"})
    assert info.value.cell == "c"


def test_set_input_then_recompute():
    graph = build_graph({"a": "2", "b": "a*a"})
    graph.recompute_dirty()
    set_input(graph, "a", 3)
    assert recompute_dirty(graph) == {"a": 3.0, "b": 9.0}


def test_set_input_rejects_formula_and_unknown_cells():
    graph = build_graph({"a": "2", "b": "a*a"})
    with pytest.raises(NotAnInputCell):
        graph.set_input("b", 1.0)
    with pytest.raises(UndefinedReference):
        graph.set_input("z", 1.0)


def test_negative_literal_is_an_input():
    graph = build_graph({"a": "-1", "b": "a * 2"})
    assert graph.recompute_dirty()["b"] == -2.0
    set_input(graph, "a", 3)
    assert recompute_dirty(graph)["b"] == 6.0


def test_long_chain_in_graph():
    graph = build_graph({"a": "1", "b": " + ".join(["a"] * 1500)})
    assert graph.recompute_dirty()["b"] == 1500.0


def test_division_by_zero_names_cell():
    graph = build_graph({"a": "1", "z": "0", "b": "a / z"})
    with pytest.raises(EvalError) as info:
        graph.recompute_dirty()
    assert info.value.kind == EvalError.DIVISION_BY_ZERO
    assert info.value.cell == "b"
    # failed pass commits nothing
    assert graph.values == {}
    assert "a" in graph.dirty


def test_dirty_set_only_reaches_downstream():
    graph = build_graph({"a": "1", "b": "2", "c": "a + 1", "d": "b + 1", "e": "c + d"})
    graph.recompute_dirty()
    assert graph.last_evaluated == 5

    graph.set_input("a", 10)
    values = graph.recompute_dirty()
    assert graph.last_evaluated == 3  # a, c, e
    assert values["e"] == 14.0

    again = graph.recompute_dirty()
    assert again == values
    assert graph.last_evaluated == 0


def test_load_graph(tmp_path):
    path = tmp_path / "sheet.json"
    path.write_text(json.dumps({"x": "4", "y": "x ^ 0.5"}))
    assert load_graph(path).recompute_dirty()["y"] == 2.0


# ==================== INCREMENTAL VS FULL ====================

def _random_sheet(rng, n_cells):
    defs = {}
    for i in range(n_cells):
        name = f"c{i}"
        if i < 2 or rng.random() < 0.3:
            defs[name] = repr(float(rng.integers(0, 50)))
            continue
        refs = [f"c{j}" for j in rng.choice(i, size=min(i, int(rng.integers(1, 4))), replace=False)]
        form = int(rng.integers(0, 4))
        if form == 0:
            defs[name] = f"({' + '.join(refs)}) / {len(refs)}"
        elif form == 1:
            defs[name] = f"({' - '.join(refs)}) / {len(refs)}"
        elif form == 2:
            defs[name] = f"MAX({refs[0]}, {refs[-1]}) - 1"
        else:
            defs[name] = f"IF({refs[0]}, {refs[-1]}, 2) + MIN({refs[0]}, 3)"
    return defs


def _check_random_sheets(n_sheets, seed):
    rng = np.random.default_rng(seed)
    for _ in range(n_sheets):
        defs = _random_sheet(rng, int(rng.integers(2, 201)))
        graph = build_graph(defs)
        graph.recompute_dirty()

        position = {name: i for i, name in enumerate(graph.topo_order)}
        for cell, deps in graph.edges.items():
            assert all(position[d] < position[cell] for d in deps)

        for _ in range(int(rng.integers(1, 6))):
            for cell in rng.choice(graph.inputs, size=min(3, len(graph.inputs)), replace=False):
                value = float(rng.normal(0, 20))
                graph.set_input(str(cell), value)
                defs[str(cell)] = repr(value)
            incremental = graph.recompute_dirty()
            assert incremental == build_graph(defs).recompute_dirty()


def test_incremental_matches_full_recompute():
    _check_random_sheets(60, seed=11)


@pytest.mark.slow
def test_incremental_matches_full_recompute_many_sheets():
    _check_random_sheets(500, seed=12)


def test_random_cycle_rejected():
    defs = {"a": "1", "b": "a + d", "c": "b * 2", "d": "c - 1"}
    with pytest.raises(CycleError) as info:
        build_graph(defs)
    assert set(info.value.cycle) == {"b", "c", "d"}
