"""Lexical and syntactic substrate for the metric computations.

Turns raw Python text into the four intermediate shapes everything else
consumes: a token stream, a tree of decision-counting blocks, raw line
counts, and restricted Halstead operator/operand counts.

The Halstead counting is deliberately narrow: only arithmetic, bitwise,
boolean, comparison, unary and augmented-assignment operators count as
operators, and only their direct operand expressions count as operands.
Calls, plain assignments, subscripts as such, and keywords contribute
nothing. This is the convention the downstream effort numbers are
calibrated against; widening it silently would shift every report.
"""

from __future__ import annotations

import ast
import io
import itertools
import keyword
import tokenize as _std_tokenize
from dataclasses import dataclass, field

from .errors import LexError, ParseError

__all__ = [
    "SourceUnit",
    "Token",
    "Block",
    "BlockTree",
    "RawCounts",
    "OperatorOperandCounts",
    "tokenize",
    "parse_blocks",
    "count_raw",
    "classify_halstead",
]


@dataclass(frozen=True, slots=True)
class SourceUnit:
    """A piece of Python source plus an origin label for messages.

    Text is kept verbatim except that CRLF/CR line endings are unified
    to LF on construction, so every downstream line count sees one
    newline convention.
    """

    text: str
    origin: str = "inline"

    def __post_init__(self) -> None:
        unified = self.text.replace("\r\n", "\n").replace("\r", "\n")
        if unified != self.text:
            object.__setattr__(self, "text", unified)

    @classmethod
    def from_path(cls, path: str) -> "SourceUnit":
        with open(path, "r", encoding="utf-8") as handle:
            return cls(text=handle.read(), origin=path)

    @property
    def line_count(self) -> int:
        # Final line without a trailing newline still counts as a line.
        text = self.text
        return text.count("\n") + (1 if text and not text.endswith("\n") else 0)


@dataclass(frozen=True, slots=True)
class Token:
    kind: str
    lexeme: str
    line: int


@dataclass(frozen=True, slots=True)
class Block:
    """One decision-counting scope: a def, a class, or the module."""

    name: str
    kind: str  # function | method | class | module
    start_line: int
    end_line: int
    decision_points: int


@dataclass(frozen=True, slots=True)
class BlockTree:
    """Blocks in pre-order; the module block is always first."""

    blocks: tuple[Block, ...]

    @property
    def module_block(self) -> Block:
        return self.blocks[0]

    def definition_blocks(self) -> tuple[Block, ...]:
        return tuple(b for b in self.blocks if b.kind != "module")


@dataclass(frozen=True, slots=True)
class RawCounts:
    loc: int
    sloc: int
    comment_lines: int
    blank: int

    @property
    def comment_ratio(self) -> float:
        return self.comment_lines / self.loc if self.loc else 0.0


@dataclass(frozen=True, slots=True)
class OperatorOperandCounts:
    eta1: int  # distinct operators
    eta2: int  # distinct operands
    n1: int  # total operator occurrences
    n2: int  # total operand occurrences


_TOKEN_KINDS = {
    _std_tokenize.OP: "operator-candidate",
    _std_tokenize.NUMBER: "operand-candidate",
    _std_tokenize.STRING: "string",
    _std_tokenize.COMMENT: "comment",
    _std_tokenize.NEWLINE: "newline",
    _std_tokenize.NL: "newline",
    _std_tokenize.INDENT: "indent",
    _std_tokenize.DEDENT: "dedent",
}

# Not part of the source text proper.
_SKIPPED_TYPES = frozenset({_std_tokenize.ENDMARKER, _std_tokenize.ENCODING})


def _raw_tokens(text: str) -> list[_std_tokenize.TokenInfo]:
    """Run the stdlib tokenizer, converting its failure modes to LexError."""
    try:
        tokens = list(_std_tokenize.generate_tokens(io.StringIO(text).readline))
    except _std_tokenize.TokenError as exc:
        # args: (message, (line, col))
        position = exc.args[1] if len(exc.args) > 1 else (1, 0)
        raise LexError(str(exc.args[0]), position[0], position[1]) from exc
    except IndentationError as exc:
        raise LexError(exc.msg or "inconsistent indentation",
                       exc.lineno or 1, (exc.offset or 1) - 1) from exc
    for tok in tokens:
        if tok.type == _std_tokenize.ERRORTOKEN and tok.string.strip():
            raise LexError(f"illegal token {tok.string!r}",
                           tok.start[0], tok.start[1])
    return tokens


def tokenize(unit: SourceUnit) -> list[Token]:
    """Lex a unit into classified tokens.

    Comments and string literals (including f-strings) are single
    tokens. Raises LexError on unterminated strings, illegal
    characters, or inconsistent indentation.
    """
    out: list[Token] = []
    for tok in _raw_tokens(unit.text):
        if tok.type in _SKIPPED_TYPES:
            continue
        if tok.type == _std_tokenize.NAME:
            kind = "keyword" if keyword.iskeyword(tok.string) else "operand-candidate"
        else:
            kind = _TOKEN_KINDS.get(tok.type, "other")
        out.append(Token(kind=kind, lexeme=tok.string, line=tok.start[0]))
    return out


def _parse_module(unit: SourceUnit) -> ast.Module:
    try:
        return ast.parse(unit.text)
    except SyntaxError as exc:
        raise ParseError(exc.msg or "invalid syntax", exc.lineno) from exc
    except ValueError as exc:  # e.g. null bytes in source
        raise ParseError(str(exc)) from exc


_LOOPS = (ast.For, ast.AsyncFor, ast.While)
_DEFS = (ast.FunctionDef, ast.AsyncFunctionDef)


class _BlockCollector:
    """Walks statements, attributing decision points to the innermost block.

    Counted: if/elif, ternary if, for/while, except handlers, assert,
    each and/or (n-1 per boolean chain), and 1 + len(ifs) per
    comprehension clause. with, match, loop-else and try-else add
    nothing. def/class signatures (decorators, argument defaults,
    annotations, base lists) are skipped entirely; lambdas count inside
    the block that contains them.
    """

    def __init__(self) -> None:
        self.blocks: list[tuple[str, str, int, int, int]] = []

    def open_block(self, name: str, kind: str, start: int, end: int,
                   body: list[ast.stmt]) -> None:
        entry = [name, kind, start, end, 0]
        self.blocks.append(entry)  # pre-order: parent before children
        in_class = kind == "class"
        for stmt in body:
            self._tally(stmt, entry, name, in_class)

    def _tally(self, node: ast.AST, entry: list, owner: str, in_class: bool) -> None:
        if isinstance(node, _DEFS):
            child_name = f"{owner}.{node.name}" if owner != "<module>" else node.name
            kind = "method" if in_class else "function"
            self.open_block(child_name, kind, node.lineno,
                            node.end_lineno or node.lineno, node.body)
            return
        if isinstance(node, ast.ClassDef):
            child_name = f"{owner}.{node.name}" if owner != "<module>" else node.name
            self.open_block(child_name, "class", node.lineno,
                            node.end_lineno or node.lineno, node.body)
            return

        if isinstance(node, (ast.If, ast.IfExp)):
            entry[4] += 1
        elif isinstance(node, _LOOPS):
            entry[4] += 1
        elif isinstance(node, ast.ExceptHandler):
            entry[4] += 1
        elif isinstance(node, ast.Assert):
            entry[4] += 1
        elif isinstance(node, ast.BoolOp):
            entry[4] += len(node.values) - 1
        elif isinstance(node, ast.comprehension):
            entry[4] += 1 + len(node.ifs)

        for child in ast.iter_child_nodes(node):
            self._tally(child, entry, owner, in_class)


def parse_blocks(unit: SourceUnit) -> BlockTree:
    """Parse a unit into its block tree with per-block decision points."""
    tree = _parse_module(unit)
    collector = _BlockCollector()
    collector.open_block("<module>", "module", 1, max(1, unit.line_count), tree.body)
    blocks = tuple(Block(name=n, kind=k, start_line=s, end_line=e, decision_points=d)
                   for n, k, s, e, d in collector.blocks)
    return BlockTree(blocks=blocks)


_INSIGNIFICANT = frozenset({
    _std_tokenize.COMMENT, _std_tokenize.NL, _std_tokenize.NEWLINE,
    _std_tokenize.INDENT, _std_tokenize.DEDENT, _std_tokenize.ENDMARKER,
    _std_tokenize.ENCODING,
})


def count_raw(unit: SourceUnit) -> RawCounts:
    """Classify physical lines into sloc / comment / blank.

    Priority per line: lines spanned by code tokens are sloc (a
    trailing comment does not demote them); lines spanned by a bare
    string statement (docstrings included) are comment lines; then
    comment-only lines; then whitespace-only lines are blank. Falls
    back to a whitespace/# scan when the text does not tokenize.
    """
    loc = unit.line_count
    if loc == 0:
        return RawCounts(0, 0, 0, 0)
    lines = unit.text.split("\n")[:loc]

    try:
        tokens = _raw_tokens(unit.text)
    except LexError:
        return _count_raw_fallback(loc, lines)

    code_lines: set[int] = set()
    doc_lines: set[int] = set()
    comment_lines: set[int] = set()
    logical: list[_std_tokenize.TokenInfo] = []

    def flush() -> None:
        if not logical:
            return
        if all(t.type == _std_tokenize.STRING for t in logical):
            target = doc_lines
        else:
            target = code_lines
        for t in logical:
            target.update(range(t.start[0], t.end[0] + 1))
        logical.clear()

    for tok in tokens:
        if tok.type == _std_tokenize.COMMENT:
            comment_lines.add(tok.start[0])
        elif tok.type == _std_tokenize.NEWLINE:
            flush()
        elif tok.type not in _INSIGNIFICANT:
            logical.append(tok)
    flush()

    sloc = comments = blank = 0
    for number, line in enumerate(lines, start=1):
        if number in code_lines:
            sloc += 1
        elif number in doc_lines:
            comments += 1
        elif number in comment_lines:
            comments += 1
        elif not line.strip():
            blank += 1
        else:
            sloc += 1  # e.g. a bare continuation backslash
    return RawCounts(loc=loc, sloc=sloc, comment_lines=comments, blank=blank)


def _count_raw_fallback(loc: int, lines: list[str]) -> RawCounts:
    # Best effort without string awareness; only reached on lexer failure.
    sloc = comments = blank = 0
    for line in lines:
        stripped = line.strip()
        if not stripped:
            blank += 1
        elif stripped.startswith("#"):
            comments += 1
        else:
            sloc += 1
    return RawCounts(loc=loc, sloc=sloc, comment_lines=comments, blank=blank)


@dataclass
class _HalsteadTally:
    """Operator/operand accumulator.

    Operator identity is the operation name alone; operand identity is
    scoped by the name of the innermost enclosing function, so the same
    variable in two functions counts as two distinct operands. Operand
    expressions other than names, constants and attributes are unique
    per occurrence.
    """

    operators: set = field(default_factory=set)
    operands: set = field(default_factory=set)
    n1: int = 0
    n2: int = 0
    _fresh: "itertools.count" = field(default_factory=itertools.count)

    def operator(self, op_node: ast.AST, times: int = 1) -> None:
        self.operators.add(type(op_node).__name__)
        self.n1 += times

    def operand(self, context: str | None, node: ast.expr) -> None:
        if isinstance(node, ast.Name):
            key = (context, "name", node.id)
        elif isinstance(node, ast.Constant):
            key = (context, "const", type(node.value).__name__, repr(node.value))
        elif isinstance(node, ast.Attribute):
            key = (context, "attr", node.attr)
        else:
            key = (context, "expr", next(self._fresh))
        self.operands.add(key)
        self.n2 += 1


def _halstead_walk(node: ast.AST, context: str | None, tally: _HalsteadTally) -> None:
    if isinstance(node, _DEFS):
        for stmt in node.body:  # signature parts are not source of operators
            _halstead_walk(stmt, node.name, tally)
        return

    operands: tuple[ast.expr, ...] = ()
    if isinstance(node, ast.BinOp):
        tally.operator(node.op)
        operands = (node.left, node.right)
    elif isinstance(node, ast.UnaryOp):
        tally.operator(node.op)
        operands = (node.operand,)
    elif isinstance(node, ast.BoolOp):
        tally.operator(node.op)
        operands = tuple(node.values)
    elif isinstance(node, ast.AugAssign):
        tally.operator(node.op)
        operands = (node.target, node.value)
    elif isinstance(node, ast.Compare):
        for op in node.ops:
            tally.operator(op)
        operands = (node.left, *node.comparators)
    for expr in operands:
        tally.operand(context, expr)

    for child in ast.iter_child_nodes(node):
        _halstead_walk(child, context, tally)


def classify_halstead(unit: SourceUnit) -> OperatorOperandCounts:
    """Count restricted Halstead operators and operands for a unit."""
    tree = _parse_module(unit)
    tally = _HalsteadTally()
    for stmt in tree.body:
        _halstead_walk(stmt, None, tally)
    return OperatorOperandCounts(eta1=len(tally.operators), eta2=len(tally.operands),
                                 n1=tally.n1, n2=tally.n2)
