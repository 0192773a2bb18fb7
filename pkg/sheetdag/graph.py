# File: sheetdag/graph.py
# Dependency graph over named formula cells with dirty-set recomputation

import heapq
import json
import logging
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Set, Tuple, Union

from sheetdag.parser import CELL_NAME, Constant, FormulaAst, Ref, evaluate, parse_formula, walk
from utils.errors import CycleError, EvalError, FormulaSyntaxError, NotAnInputCell, UndefinedReference

logger = logging.getLogger(__name__)


class SheetGraph:
    """Parsed cells, dependency edges, topological order and dirty set.

    Single owner: not safe for concurrent mutation.
    """

    def __init__(self, cells: Dict[str, FormulaAst], edges: Dict[str, Tuple[str, ...]], topo_order: List[str]):
        self.cells = cells
        self.edges = edges
        self.topo_order = topo_order
        self.values: Dict[str, float] = {}
        self.dirty: Set[str] = set(cells)
        self.evaluations = 0
        self.last_evaluated = 0

        self._position = {name: i for i, name in enumerate(topo_order)}
        self.dependents: Dict[str, Tuple[str, ...]] = {name: () for name in cells}
        readers: Dict[str, List[str]] = {name: [] for name in cells}
        for name in topo_order:
            for dep in edges[name]:
                readers[dep].append(name)
        for name, names in readers.items():
            self.dependents[name] = tuple(names)

    def __len__(self) -> int:
        return len(self.cells)

    def is_input(self, cell: str) -> bool:
        return isinstance(self.cells.get(cell), Constant)

    @property
    def inputs(self) -> List[str]:
        return [name for name in self.topo_order if self.is_input(name)]

    def downstream(self, cell: str) -> Set[str]:
        """The cell plus every cell that transitively reads it"""
        seen = {cell}
        stack = [cell]
        while stack:
            for reader in self.dependents[stack.pop()]:
                if reader not in seen:
                    seen.add(reader)
                    stack.append(reader)
        return seen

    def set_input(self, cell: str, value: float) -> None:
        if cell not in self.cells:
            raise UndefinedReference(cell)
        if not self.is_input(cell):
            raise NotAnInputCell(cell)
        self.cells[cell] = Constant(float(value))
        self.dirty |= self.downstream(cell)

    def recompute_dirty(self) -> Dict[str, float]:
        """Evaluate dirty cells in topological order and return all values.

        Results are staged and committed only when every dirty cell evaluated,
        so a failed pass leaves values and the dirty set untouched.
        """
        pending = sorted(self.dirty, key=self._position.__getitem__)
        staged: Dict[str, float] = {}
        values = self.values

        def lookup(name: str) -> float:
            if name in staged:
                return staged[name]
            return values[name]

        for name in pending:
            try:
                staged[name] = evaluate(self.cells[name], lookup)
            except EvalError as e:
                raise EvalError(e.kind, cell=name, detail=e.detail) from None

        self.values.update(staged)
        self.dirty.clear()
        self.evaluations += len(pending)
        self.last_evaluated = len(pending)
        if pending:
            logger.debug(f"Recomputed {len(pending)}/{len(self.cells)} cells")
        return dict(self.values)


def _find_cycle(names: List[str], edges: Mapping[str, Tuple[str, ...]]) -> List[str]:
    """Return one cycle (in traversal order) or an empty list"""
    WHITE, GREY, BLACK = 0, 1, 2
    color = {name: WHITE for name in names}
    for root in names:
        if color[root] != WHITE:
            continue
        path: List[str] = [root]
        iterators = [iter(edges[root])]
        color[root] = GREY
        while iterators:
            child = next(iterators[-1], None)
            if child is None:
                color[path.pop()] = BLACK
                iterators.pop()
                continue
            if color[child] == GREY:
                return path[path.index(child):]
            if color[child] == WHITE:
                color[child] = GREY
                path.append(child)
                iterators.append(iter(edges[child]))
    return []


def build_graph(defs: Mapping[str, Union[str, float, int]]) -> SheetGraph:
    """Parse every cell and link them into an acyclic dependency graph.

    Raises UndefinedReference for a read of a missing cell and CycleError
    listing the cells of one cycle.
    """
    cells: Dict[str, FormulaAst] = {}
    for name, formula in defs.items():
        if not CELL_NAME.match(name):
            raise FormulaSyntaxError(f"Invalid cell name {name!r}", 0, name)
        cells[name] = parse_formula(formula if isinstance(formula, str) else repr(float(formula)))

    names = list(cells)
    edges: Dict[str, Tuple[str, ...]] = {}
    for name in names:
        # first-appearance order keeps cycle reports stable
        refs = [item.name for item in walk(cells[name]) if isinstance(item, Ref)]
        for ref in refs:
            if ref not in cells:
                raise UndefinedReference(ref, referenced_by=name)
        edges[name] = tuple(dict.fromkeys(refs))

    cycle = _find_cycle(names, edges)
    if cycle:
        raise CycleError(cycle)

    # Kahn's algorithm; ties broken by definition order
    index = {name: i for i, name in enumerate(names)}
    remaining = {name: len(edges[name]) for name in names}
    readers: Dict[str, List[str]] = {name: [] for name in names}
    for name in names:
        for dep in edges[name]:
            readers[dep].append(name)
    ready = [index[name] for name in names if remaining[name] == 0]
    heapq.heapify(ready)
    topo_order: List[str] = []
    while ready:
        name = names[heapq.heappop(ready)]
        topo_order.append(name)
        for reader in readers[name]:
            remaining[reader] -= 1
            if remaining[reader] == 0:
                heapq.heappush(ready, index[reader])

    logger.debug(f"Built sheet graph with {len(names)} cells")
    return SheetGraph(cells, edges, topo_order)


def load_graph(path: Union[str, Path]) -> SheetGraph:
    """Build a graph from a JSON object mapping cell name to formula"""
    with open(path, "r", encoding="utf-8") as f:
        defs = json.load(f)
    if not isinstance(defs, dict):
        raise FormulaSyntaxError("Sheet file must hold a JSON object", 0, str(path))
    return build_graph(defs)


def set_input(graph: SheetGraph, cell: str, value: float) -> None:
    graph.set_input(cell, value)


def recompute_dirty(graph: SheetGraph) -> Dict[str, float]:
    return graph.recompute_dirty()
