from sheetdag.graph import SheetGraph, build_graph, load_graph, recompute_dirty, set_input
from sheetdag.parser import Binary, Call, Constant, FormulaAst, Ref, Unary, evaluate, parse_formula

__all__ = [
    "SheetGraph", "build_graph", "load_graph", "recompute_dirty", "set_input",
    "Binary", "Call", "Constant", "FormulaAst", "Ref", "Unary", "evaluate", "parse_formula",
]
