# File: sheetdag/parser.py
# Formula grammar, AST nodes and the evaluator for a single formula

import math
import re
from dataclasses import dataclass
from typing import Callable, Iterator, List, Mapping, Optional, Set, Tuple, Union

from utils.errors import EvalError, FormulaSyntaxError, UnknownFunction

CELL_NAME = re.compile(r"^[A-Za-z][A-Za-z0-9_]*$")
MAX_NESTING = 100  # parentheses and function calls

# ==================== AST ====================


@dataclass(frozen=True)
class Constant:
    value: float


@dataclass(frozen=True)
class Ref:
    name: str


@dataclass(frozen=True)
class Unary:
    op: str  # only "neg"
    child: "FormulaAst"


@dataclass(frozen=True)
class Binary:
    op: str  # "+", "-", "*", "/", "min", "max", "pow"
    left: "FormulaAst"
    right: "FormulaAst"


@dataclass(frozen=True)
class Call:
    fn: str  # "SUM", "IF", "CLAMP"
    args: Tuple["FormulaAst", ...]


FormulaAst = Union[Constant, Ref, Unary, Binary, Call]

# name -> (min arity, max arity); MIN/MAX parse into Binary nodes
FUNCTIONS = {
    "SUM": (1, None),
    "IF": (3, 3),
    "CLAMP": (3, 3),
    "MIN": (2, 2),
    "MAX": (2, 2),
}

# ==================== TOKENIZER ====================

_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*/^(),])"
    r")"
)


@dataclass(frozen=True)
class Token:
    kind: str  # "number", "name", "op", "end"
    text: str
    position: int


def tokenize(text: str) -> List[Token]:
    tokens: List[Token] = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        match = _TOKEN.match(text, pos)
        if match is None or match.end() == pos:
            stripped = len(text[pos:]) - len(text[pos:].lstrip())
            raise FormulaSyntaxError(f"Unexpected character {text[pos + stripped]!r}", pos + stripped, text)
        kind = match.lastgroup
        start = match.start(kind)
        tokens.append(Token(kind, match.group(kind), start))
        pos = match.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


# ==================== PARSER ====================


class _Parser:
    """Recursive descent: expr > term > unary > power > primary"""

    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.index = 0
        self.depth = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def advance(self) -> Token:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def error(self, message: str, token: Optional[Token] = None) -> FormulaSyntaxError:
        token = token or self.current
        return FormulaSyntaxError(message, token.position, self.text)

    def is_op(self, symbol: str) -> bool:
        return self.current.kind == "op" and self.current.text == symbol

    def expect_op(self, symbol: str) -> Token:
        if not self.is_op(symbol):
            found = self.current.text or "end of input"
            raise self.error(f"Expected '{symbol}' but found '{found}'")
        return self.advance()

    def parse(self) -> FormulaAst:
        node = self.expr()
        if self.current.kind != "end":
            raise self.error(f"Unexpected '{self.current.text}'")
        return node

    def expr(self) -> FormulaAst:
        node = self.term()
        while self.is_op("+") or self.is_op("-"):
            op = self.advance().text
            node = Binary(op, node, self.term())
        return node

    def term(self) -> FormulaAst:
        node = self.unary()
        while self.is_op("*") or self.is_op("/"):
            op = self.advance().text
            node = Binary(op, node, self.unary())
        return node

    def unary(self) -> FormulaAst:
        negate = self.signs()
        return self.signed(negate, self.power())

    def signs(self) -> bool:
        """Consume a run of leading +/- signs; True when they negate"""
        negate = False
        while self.is_op("-") or self.is_op("+"):
            if self.advance().text == "-":
                negate = not negate
        return negate

    @staticmethod
    def signed(negate: bool, node: FormulaAst) -> FormulaAst:
        if not negate:
            return node
        # a negated literal stays a constant (input) cell
        if isinstance(node, Constant):
            return Constant(-node.value)
        return Unary("neg", node)

    def power(self) -> FormulaAst:
        node = self.primary()
        while self.is_op("^"):
            self.advance()
            node = Binary("pow", node, self.exponent())
        return node

    def exponent(self) -> FormulaAst:
        # a signed operand is allowed right after '^' (2^-1)
        negate = False
        while self.is_op("-"):
            self.advance()
            negate = not negate
        return self.signed(negate, self.primary())

    def nested(self, parse: Callable[[], FormulaAst]) -> FormulaAst:
        if self.depth >= MAX_NESTING:
            raise self.error(f"Formula nested deeper than {MAX_NESTING} levels")
        self.depth += 1
        try:
            return parse()
        finally:
            self.depth -= 1

    def primary(self) -> FormulaAst:
        token = self.current
        if token.kind == "number":
            self.advance()
            return Constant(float(token.text))
        if token.kind == "name":
            self.advance()
            if self.is_op("("):
                return self.nested(lambda: self.call(token))
            return Ref(token.text)
        if self.is_op("("):
            self.advance()
            node = self.nested(self.expr)
            self.expect_op(")")
            return node
        if token.kind == "end":
            raise self.error("Unexpected end of input")
        raise self.error(f"Unexpected '{token.text}'")

    def call(self, name_token: Token) -> FormulaAst:
        fn = name_token.text.upper()
        if fn not in FUNCTIONS:
            raise UnknownFunction(name_token.text, name_token.position)
        self.expect_op("(")
        args: List[FormulaAst] = []
        if not self.is_op(")"):
            args.append(self.expr())
            while self.is_op(","):
                comma = self.advance()
                if self.is_op(")") or self.current.kind == "end":
                    raise self.error("Expected expression after ','", comma)
                args.append(self.expr())
        self.expect_op(")")

        low, high = FUNCTIONS[fn]
        if len(args) < low or (high is not None and len(args) > high):
            expected = f"{low}" if low == high else f"at least {low}"
            raise self.error(f"{fn} takes {expected} argument(s), got {len(args)}", name_token)
        if fn in ("MIN", "MAX"):
            return Binary(fn.lower(), args[0], args[1])
        return Call(fn, tuple(args))


def parse_formula(text: str) -> FormulaAst:
    """Parse a cell formula into its AST.

    Precedence: ^ binds tighter than unary minus, which binds tighter than
    * and /, then + and -. Binary operators of equal precedence associate to
    the left (including ^). Function names are case-insensitive.
    """
    if text is None or not str(text).strip():
        raise FormulaSyntaxError("Empty formula", 0, text or "")
    return _Parser(str(text)).parse()


def references(node: FormulaAst) -> Set[str]:
    """Cell names read by a formula"""
    found: Set[str] = set()
    for item in walk(node):
        if isinstance(item, Ref):
            found.add(item.name)
    return found


def walk(node: FormulaAst) -> Iterator[FormulaAst]:
    stack = [node]
    while stack:
        item = stack.pop()
        yield item
        if isinstance(item, Unary):
            stack.append(item.child)
        elif isinstance(item, Binary):
            stack.extend((item.right, item.left))
        elif isinstance(item, Call):
            stack.extend(reversed(item.args))


# ==================== EVALUATION ====================


def _checked(value: float, detail: str) -> float:
    if math.isnan(value) or math.isinf(value):
        raise EvalError(EvalError.DOMAIN_ERROR, detail=f"non-finite result of {detail}")
    return value


def _power(base: float, exponent: float) -> float:
    if base == 0.0 and exponent < 0.0:
        raise EvalError(EvalError.DIVISION_BY_ZERO, detail="zero raised to a negative power")
    if base < 0.0 and not float(exponent).is_integer():
        raise EvalError(EvalError.DOMAIN_ERROR, detail="negative base with fractional exponent")
    try:
        return _checked(math.pow(base, exponent), "pow")
    except OverflowError:
        raise EvalError(EvalError.DOMAIN_ERROR, detail="pow overflow")


def _children(node: FormulaAst) -> Tuple[FormulaAst, ...]:
    if isinstance(node, Unary):
        return (node.child,)
    if isinstance(node, Binary):
        return (node.left, node.right)
    if isinstance(node, Call):
        return node.args
    return ()


def _apply(node: FormulaAst, args: List[float]) -> float:
    if isinstance(node, Unary):
        return -args[0]
    if isinstance(node, Binary):
        left, right = args
        op = node.op
        if op == "+":
            return _checked(left + right, "+")
        if op == "-":
            return _checked(left - right, "-")
        if op == "*":
            return _checked(left * right, "*")
        if op == "/":
            if right == 0.0:
                raise EvalError(EvalError.DIVISION_BY_ZERO, detail="division by zero")
            return _checked(left / right, "/")
        if op == "min":
            return min(left, right)
        if op == "max":
            return max(left, right)
        if op == "pow":
            return _power(left, right)
        raise ValueError(f"Unknown operator {op}")
    if not isinstance(node, Call):
        raise TypeError(f"Not a formula node: {node!r}")
    if node.fn == "SUM":
        total = 0.0
        for value in args:
            total += value
        return _checked(total, "SUM")
    if node.fn == "CLAMP":
        x, lo, hi = args
        return min(max(x, lo), hi)
    raise ValueError(f"Unknown function {node.fn}")


def evaluate(node: FormulaAst, lookup: Callable[[str], float]) -> float:
    """Evaluate a formula; `lookup` resolves referenced cell values.

    Post-order walk on an explicit stack, operands left to right. IF
    evaluates its condition first and then only the chosen branch.
    """
    values: List[float] = []
    stack: List[Tuple[FormulaAst, bool]] = [(node, False)]
    while stack:
        item, expanded = stack.pop()
        if isinstance(item, Constant):
            values.append(item.value)
        elif isinstance(item, Ref):
            values.append(lookup(item.name))
        elif isinstance(item, Call) and item.fn == "IF":
            if not expanded:
                stack.append((item, True))
                stack.append((item.args[0], False))
            else:
                condition = values.pop()
                stack.append((item.args[1] if condition != 0.0 else item.args[2], False))
        elif not expanded:
            stack.append((item, True))
            stack.extend((child, False) for child in reversed(_children(item)))
        else:
            n = len(_children(item))
            args = values[len(values) - n:]
            del values[len(values) - n:]
            values.append(_apply(item, args))
    return values[0]
