#!/usr/bin/env python3
"""One-shot generator for the oracle differential corpus.

Contains a reference implementation of the metric conventions that is
deliberately written with a different structure from the package
(line-major raw counting, explicit worklist traversals, match-case
dispatch) so that a coding slip in either side shows up as a
differential failure. Ground-truth values are computed here once,
checked against the published bubble-sort anchor numbers, and frozen
into tests/fixtures/oracle/oracle_corpus.jsonl.

Run from the repository root:

    python3 tools/make_oracle_fixtures.py

The output file is committed; tests never import this module.
"""

from __future__ import annotations

import ast
import io
import itertools
import json
import math
import pathlib
import random
import tokenize

OUT_PATH = pathlib.Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "oracle" / "oracle_corpus.jsonl"


# --------------------------------------------------------------------------
# Reference implementation
# --------------------------------------------------------------------------

def ref_loc(text: str) -> int:
    return text.count("\n") + (1 if text and not text.endswith("\n") else 0)


_NOISE = {tokenize.NL, tokenize.INDENT, tokenize.DEDENT,
          tokenize.ENDMARKER, tokenize.ENCODING}


def ref_raw_counts(text: str) -> dict:
    """Line-major classification: strongest claim on a line wins.

    Claims: 3 = code token span, 2 = bare-string-statement span,
    1 = comment token. Unclaimed lines are blank when whitespace-only,
    otherwise sloc (bare continuation backslashes).
    """
    nlines = ref_loc(text)
    if nlines == 0:
        return {"loc": 0, "sloc": 0, "comment_lines": 0, "blank": 0}
    claim = [0] * (nlines + 2)

    groups: list[list] = []
    current: list = []
    for tok in tokenize.generate_tokens(io.StringIO(text).readline):
        if tok.type == tokenize.COMMENT:
            claim[tok.start[0]] = max(claim[tok.start[0]], 1)
        elif tok.type == tokenize.NEWLINE:
            groups.append(current)
            current = []
        elif tok.type not in _NOISE:
            current.append(tok)
    groups.append(current)

    for group in groups:
        if not group:
            continue
        level = 2 if all(t.type == tokenize.STRING for t in group) else 3
        for tok in group:
            for line in range(tok.start[0], tok.end[0] + 1):
                claim[line] = max(claim[line], level)

    lines = text.split("\n")
    sloc = comments = blank = 0
    for number in range(1, nlines + 1):
        level = claim[number]
        if level == 3:
            sloc += 1
        elif level in (1, 2):
            comments += 1
        elif lines[number - 1].strip():
            sloc += 1
        else:
            blank += 1
    return {"loc": nlines, "sloc": sloc, "comment_lines": comments, "blank": blank}


def ref_blocks(text: str) -> list[list]:
    """Pre-order [name, kind, complexity] via an explicit worklist."""
    tree = ast.parse(text)
    blocks: list[list] = [["<module>", "module", 0]]
    work: list = [(stmt, 0, "<module>", False) for stmt in reversed(tree.body)]
    while work:
        node, bidx, owner, in_class = work.pop()
        match node:
            case ast.FunctionDef() | ast.AsyncFunctionDef():
                qual = node.name if owner == "<module>" else f"{owner}.{node.name}"
                blocks.append([qual, "method" if in_class else "function", 0])
                child = len(blocks) - 1
                work.extend((s, child, qual, False) for s in reversed(node.body))
                continue
            case ast.ClassDef():
                qual = node.name if owner == "<module>" else f"{owner}.{node.name}"
                blocks.append([qual, "class", 0])
                child = len(blocks) - 1
                work.extend((s, child, qual, True) for s in reversed(node.body))
                continue
            case ast.If() | ast.IfExp() | ast.For() | ast.AsyncFor() | ast.While() \
                    | ast.ExceptHandler() | ast.Assert():
                blocks[bidx][2] += 1
            case ast.BoolOp(values=values):
                blocks[bidx][2] += len(values) - 1
            case ast.comprehension(ifs=ifs):
                blocks[bidx][2] += 1 + len(ifs)
        work.extend((c, bidx, owner, in_class)
                    for c in reversed(list(ast.iter_child_nodes(node))))
    return [[name, kind, 1 + points] for name, kind, points in blocks]


def ref_halstead_counts(text: str) -> tuple[int, int, int, int]:
    tree = ast.parse(text)
    op_names: set = set()
    operand_keys: set = set()
    total_ops = total_rands = 0
    fresh = itertools.count()
    work: list = [(stmt, None) for stmt in reversed(tree.body)]
    while work:
        node, ctx = work.pop()
        match node:
            case ast.FunctionDef() | ast.AsyncFunctionDef():
                work.extend((s, node.name) for s in reversed(node.body))
                continue
            case ast.BinOp():
                ops, rands = [node.op], [node.left, node.right]
            case ast.UnaryOp():
                ops, rands = [node.op], [node.operand]
            case ast.BoolOp():
                ops, rands = [node.op], list(node.values)
            case ast.AugAssign():
                ops, rands = [node.op], [node.target, node.value]
            case ast.Compare():
                ops, rands = list(node.ops), [node.left, *node.comparators]
            case _:
                ops, rands = [], []
        for op in ops:
            op_names.add(type(op).__name__)
            total_ops += 1
        for expr in rands:
            match expr:
                case ast.Name(id=name):
                    key = (ctx, 0, name)
                case ast.Constant(value=value):
                    key = (ctx, 1, type(value).__name__, repr(value))
                case ast.Attribute(attr=attr):
                    key = (ctx, 2, attr)
                case _:
                    key = (ctx, 3, next(fresh))
            operand_keys.add(key)
            total_rands += 1
        work.extend((c, ctx) for c in reversed(list(ast.iter_child_nodes(node))))
    return len(op_names), len(operand_keys), total_ops, total_rands


def ref_snippet(snippet_id: str, code: str) -> dict:
    raw = ref_raw_counts(code)
    blocks = ref_blocks(code)
    defs = [b for b in blocks if b[1] != "module"]
    if defs:
        snippet_cc = sum(b[2] for b in defs) / len(defs)
    else:
        snippet_cc = float(blocks[0][2])

    eta1, eta2, n1, n2 = ref_halstead_counts(code)
    eta, length = eta1 + eta2, n1 + n2
    if eta == 0 or eta2 == 0:
        volume = difficulty = effort = 0.0
    else:
        volume = length * math.log2(eta)
        difficulty = eta1 / 2.0 * (n2 / eta2)
        effort = difficulty * volume

    ratio = raw["comment_lines"] / raw["loc"] if raw["loc"] else 0.0
    if volume <= 0 or raw["sloc"] <= 0:
        mi = 100.0
    else:
        score = (171.0 - 5.2 * math.log(volume) - 0.23 * snippet_cc
                 - 16.2 * math.log(raw["sloc"])
                 + 50.0 * math.sin(math.sqrt(2.4 * math.radians(100.0 * ratio))))
        mi = min(100.0, max(0.0, score * 100.0 / 171.0))

    return {
        "id": snippet_id, "code": code, **raw,
        "blocks": blocks, "snippet_cc": snippet_cc,
        "eta1": eta1, "eta2": eta2, "n1": n1, "n2": n2,
        "volume": volume, "difficulty": difficulty, "effort": effort,
        "comment_ratio": ratio, "mi": mi,
        "degenerate": raw["sloc"] == 0,
    }


# --------------------------------------------------------------------------
# Corpus
# --------------------------------------------------------------------------

ANCHOR_ORIGINAL = (
    "def bubbleSort(arr): \n"
    "    n = len(arr) \n"
    "    for i in range(n-1):\n"
    "        for j in range(0, n-i-1):\n"
    "            if arr[j] > arr[j+1]:\n"
    "               arr[j],arr[j+1] = arr[j+1],arr[j]"
)

ANCHOR_REFACTORED_COMMENTED = (
    "def bubbleSort(arr):\n"
    "    n = len(arr)\n"
    "    # Using a single loop with the itertools product function\n"
    "    from itertools import product\n"
    "    for i, j in product(range(n-1), range(n-1)):\n"
    "        # Swapping if the current element is greater than the next\n"
    "        if arr[j] > arr[j+1]:\n"
    "            arr[j], arr[j+1] = arr[j+1], arr[j]\n"
)

ANCHOR_REFACTORED_STRIPPED = "\n".join(
    line for line in ANCHOR_REFACTORED_COMMENTED.split("\n")
    if not line.lstrip().startswith("#"))


HANDCRAFTED: list[tuple[str, str]] = [
    ("hc-pass", "pass\n"),
    ("hc-comment-only", "# just a note\n"),
    ("hc-comments-many", "# one\n# two\n# three\n"),
    ("hc-module-docstring", '"""Module doc."""\n'),
    ("hc-docstring-multiline", '"""Doc line one.\n\nDoc line three.\n"""\nx = 1\n'),
    ("hc-blank-only", "   \n\n\t\n"),
    ("hc-expr", "a + b"),
    ("hc-assign-only", "x = f(y)\n"),
    ("hc-call-only", "print('hello')\n"),
    ("hc-fstring-stmt", 'f"{x}"\n'),
    ("hc-fstring-binop", 'label = f"total={a + b}"\n'),
    ("hc-implicit-concat-stmt", "'part one ' 'part two'\n"),
    ("hc-hash-in-string", 'x = "# not a comment"\n'),
    ("hc-string-arg-multiline", 'report("""first\nsecond\n""", end)\n'),
    ("hc-trailing-comment", "total = price * count  # compute\n"),
    ("hc-comment-in-brackets", "xs = (1,\n      # middle\n      2)\n"),
    ("hc-blank-in-brackets", "xs = (1,\n\n      2)\n"),
    ("hc-backslash", "total = 1 + \\\n    2\n"),
    ("hc-semicolons", "x = 1; y = 2; z = x + y\n"),
    ("hc-if", "if a > b:\n    c = 1\n"),
    ("hc-if-else", "if a > b:\n    c = 1\nelse:\n    c = 2\n"),
    ("hc-elif-ladder",
     "if a == 1:\n    r = 'x'\nelif a == 2:\n    r = 'y'\nelif a == 3:\n    r = 'z'\nelse:\n    r = '?'\n"),
    ("hc-nested-if",
     "if a:\n    if b:\n        if c:\n            d = a + b\n"),
    ("hc-for", "for i in range(10):\n    s += i\n"),
    ("hc-for-else", "for i in xs:\n    if i < 0:\n        break\nelse:\n    ok = True\n"),
    ("hc-while", "while n > 0:\n    n -= 1\n"),
    ("hc-while-else", "while n > 0:\n    n //= 2\nelse:\n    done = True\n"),
    ("hc-while-true", "while True:\n    n += 1\n    if n > 9:\n        break\n    continue\n"),
    ("hc-try-except", "try:\n    x = parse(s)\nexcept ValueError:\n    x = None\n"),
    ("hc-try-multi",
     "try:\n    x = parse(s)\nexcept ValueError:\n    x = 0\nexcept (KeyError, TypeError) as exc:\n    x = 1\nelse:\n    x += 1\nfinally:\n    close(s)\n"),
    ("hc-with", "with open(path) as fh:\n    data = fh.read()\n"),
    ("hc-with-multi", "with open(a) as fa, open(b) as fb:\n    merge(fa, fb)\n"),
    ("hc-assert", "assert x > 0\n"),
    ("hc-assert-msg", "assert x > 0, 'must be positive'\n"),
    ("hc-and-chain", "ok = a and b and c\n"),
    ("hc-or-chain", "pick = a or b or c or d\n"),
    ("hc-bool-mixed", "ok = (a and b) or (c and not d)\n"),
    ("hc-ternary", "sign = 1 if x >= 0 else -1\n"),
    ("hc-ternary-nested", "band = 'low' if x < 10 else ('mid' if x < 100 else 'high')\n"),
    ("hc-listcomp", "ys = [i * 2 for i in xs]\n"),
    ("hc-listcomp-if", "ys = [i for i in xs if i % 2 == 0]\n"),
    ("hc-listcomp-multi", "pairs = [(i, j) for i in xs for j in ys if i != j]\n"),
    ("hc-setcomp", "seen = {c.lower() for c in text if c.isalpha()}\n"),
    ("hc-dictcomp", "index = {k: v + 1 for k, v in table.items()}\n"),
    ("hc-genexp", "total = sum(i * i for i in range(100))\n"),
    ("hc-nested-comp", "flat = [x for row in grid for x in row if x > 0]\n"),
    ("hc-lambda", "double = lambda v: v * 2\n"),
    ("hc-lambda-default", "shift = lambda v, d=1 + 2: v + d\n"),
    ("hc-lambda-in-call", "xs.sort(key=lambda p: p[0] - p[1])\n"),
    ("hc-walrus-if", "if (m := len(data)) > 10:\n    trim(data, m)\n"),
    ("hc-walrus-while", "while (chunk := fh.read(64)):\n    out.write(chunk)\n"),
    ("hc-compare-chain", "ok = a < b <= c != d\n"),
    ("hc-is-in", "hit = x is None or y in table\n"),
    ("hc-not-in", "miss = key not in cache and val is not None\n"),
    ("hc-unary", "a = -x\nb = +y\nc = ~z\nd = not flag\n"),
    ("hc-binops-bitwise", "m = (a | b) & (c ^ d)\ns = a << 2\nt = b >> 3\n"),
    ("hc-binops-arith", "q = a / b\nw = a // b\ne = a % b\nr = a ** 2\nv = m @ n\n"),
    ("hc-augassign-all",
     "x += 1\nx -= 2\nx *= 3\nx /= 4\nx //= 5\nx %= 6\nx **= 2\nx |= m\nx &= m\nx ^= m\nx <<= 1\nx >>= 1\n"),
    ("hc-annassign", "rate: float = base * 1.5\n"),
    ("hc-chained-assign", "x = y = z + 1\n"),
    ("hc-starred", "head, *tail = items\n"),
    ("hc-swap", "a, b = b, a\n"),
    ("hc-slices", "head = xs[1:4]\nstep = xs[::2]\nmid = xs[a:b:c]\n"),
    ("hc-attr-operands", "size = self.width * self.height\n"),
    ("hc-attr-chain", "name = record.user.profile.name\n"),
    ("hc-call-kwargs", "run(job, retries=3, *extra, **options)\n"),
    ("hc-global", "def bump():\n    global counter\n    counter += 1\n"),
    ("hc-nonlocal",
     "def outer():\n    total = 0\n    def inner(v):\n        nonlocal total\n        total += v\n    return inner\n"),
    ("hc-del", "del cache[key]\n"),
    ("hc-raise", "if bad:\n    raise ValueError('bad')\n"),
    ("hc-raise-from",
     "try:\n    load()\nexcept OSError as exc:\n    raise RuntimeError('load failed') from exc\n"),
    ("hc-yield", "def gen(n):\n    for i in range(n):\n        yield i * i\n"),
    ("hc-yield-from", "def chained(a, b):\n    yield from a\n    yield from b\n"),
    ("hc-async",
     "async def fetch_all(urls):\n    async with session() as s:\n        async for u in urls:\n            await s.get(u)\n"),
    ("hc-match",
     "match command:\n    case 'start':\n        begin()\n    case 'stop':\n        end()\n    case _:\n        ignore()\n"),
    ("hc-def-one-line", "def f(): return 1\n"),
    ("hc-class-one-line", "class Empty: pass\n"),
    ("hc-if-one-line", "if ready: run()\n"),
    ("hc-for-one-line", "for i in xs: consume(i)\n"),
    ("hc-default-arg-ops", "def pad(text, width=4 + 4):\n    pass\n"),
    ("hc-decorator", "@cache\ndef fib(n):\n    return n if n < 2 else fib(n - 1) + fib(n - 2)\n"),
    ("hc-decorator-args",
     "@retry(times=2 + 1, delay=0.5 * 2)\ndef flaky():\n    return probe()\n"),
    ("hc-decorated-class", "@register\nclass Handler:\n    def handle(self, msg):\n        return msg\n"),
    ("hc-class-base-expr", "class Special(make_base(1 + 2)):\n    pass\n"),
    ("hc-class-keywords", "class Plugin(Base, flag=True):\n    name = 'p'\n"),
    ("hc-class-level-expr", "class Box:\n    area = 3 * 4\n    def get(self):\n        return self.area\n"),
    ("hc-class-docstring", 'class Widget:\n    """A widget."""\n    def ping(self):\n        return 1\n'),
    ("hc-methods",
     "class Stack:\n    def __init__(self):\n        self.items = []\n    def push(self, v):\n        self.items.append(v)\n    def pop(self):\n        if not self.items:\n            raise IndexError\n        return self.items.pop()\n"),
    ("hc-nested-class-in-def",
     "def build():\n    class Local:\n        def get(self):\n            return 1 + 2\n    return Local()\n"),
    ("hc-nested-def",
     "def outer(a):\n    def inner(b):\n        return b * 2\n    return inner(a) + 1\n"),
    ("hc-context-scoping",
     "def first(x):\n    return x + 1\n\ndef second(x):\n    return x + 1\n"),
    ("hc-shared-operator",
     "def add(a, b):\n    return a + b\n\ndef cat(a, b):\n    return a + b\n"),
    ("hc-bool-vs-int", "a = x + 1\nb = y + True\n"),
    ("hc-number-forms", "a = n + 1_000\nb = n + 0x1f\nc = n + 0o17\nd = n + 0b101\ne = n + 1e-3\nz = n + 3j\n"),
    ("hc-bytes-compare", "ok = blob == b'\\x00\\x01'\n"),
    ("hc-none-compare", "if result is not None and result != 0:\n    use(result)\n"),
    ("hc-unicode", "café = 1\nprice = café * 2  # naïve\n"),
    ("hc-string-ops", "banner = '-' * 40\ngreeting = 'hi ' + name\n"),
    ("hc-docstring-func",
     'def area(r):\n    """Circle area.\n\n    Uses the crude approximation.\n    """\n    return 3.14159 * r * r\n'),
    ("hc-bare-string-mid-func",
     "def step():\n    'phase one'\n    x = 1\n    'phase two'\n    return x\n"),
    ("hc-imports", "import os\nimport sys\nfrom pathlib import Path\nfrom math import sqrt as root\n"),
    ("hc-module-level-loop",
     "names = []\nfor row in rows:\n    if row.ok:\n        names.append(row.name)\n"),
    ("hc-dict-literal-ops", "cfg = {'timeout': base * 2, 'retries': tries + 1}\n"),
    ("hc-deep-nesting",
     "def probe(grid):\n    for row in grid:\n        for cell in row:\n            if cell > 0:\n                while cell:\n                    cell -= 1\n                    if cell == 1:\n                        return True\n    return False\n"),
    ("hc-recursive-ternary", "def fib(n):\n    return n if n < 2 else fib(n - 1) + fib(n - 2)\n"),
    ("hc-comment-heavy",
     "# header\n# more header\n\n# section\ndef noop():\n    # inside\n    pass  # trailing\n# footer\n"),
    ("hc-mixed-blank-comment", "x = 1\n\n# note\n\n\ny = x + 1  # trailing\n# end\n"),
]


_STATEMENT_MAKERS = []


def _maker(fn):
    _STATEMENT_MAKERS.append(fn)
    return fn


_NAMES = ["acc", "count", "data", "delta", "items", "key", "left", "level",
          "right", "size", "total", "value"]
_BINOPS = ["+", "-", "*", "//", "%", "**", "|", "&", "^", "<<", ">>", "/"]
_CMPS = ["==", "!=", "<", ">", "<=", ">="]
_AUGS = ["+=", "-=", "*=", "//=", "%="]


def _term(rng: random.Random) -> str:
    pick = rng.random()
    if pick < 0.45:
        return rng.choice(_NAMES)
    if pick < 0.75:
        return str(rng.randint(0, 99))
    return f"{rng.choice(_NAMES)}.{rng.choice(['size', 'min', 'max', 'step'])}"


def _expr(rng: random.Random, depth: int = 0) -> str:
    if depth >= 2 or rng.random() < 0.4:
        return _term(rng)
    return f"{_expr(rng, depth + 1)} {rng.choice(_BINOPS)} {_expr(rng, depth + 1)}"


def _cond(rng: random.Random) -> str:
    base = f"{_term(rng)} {rng.choice(_CMPS)} {_term(rng)}"
    if rng.random() < 0.3:
        return f"{base} {rng.choice(['and', 'or'])} {_term(rng)} {rng.choice(_CMPS)} {_term(rng)}"
    return base


@_maker
def _mk_assign(rng, indent):
    return [f"{indent}{rng.choice(_NAMES)} = {_expr(rng)}"]


@_maker
def _mk_augassign(rng, indent):
    return [f"{indent}{rng.choice(_NAMES)} {rng.choice(_AUGS)} {_expr(rng)}"]


@_maker
def _mk_call(rng, indent):
    return [f"{indent}emit({_term(rng)}, {_expr(rng)})"]


@_maker
def _mk_if(rng, indent):
    lines = [f"{indent}if {_cond(rng)}:", f"{indent}    {rng.choice(_NAMES)} = {_expr(rng)}"]
    if rng.random() < 0.5:
        lines += [f"{indent}else:", f"{indent}    {rng.choice(_NAMES)} = {_term(rng)}"]
    return lines


@_maker
def _mk_for(rng, indent):
    return [f"{indent}for idx in range({rng.randint(2, 40)}):",
            f"{indent}    {rng.choice(_NAMES)} {rng.choice(_AUGS)} idx"]


@_maker
def _mk_while(rng, indent):
    return [f"{indent}while {_cond(rng)}:",
            f"{indent}    {rng.choice(_NAMES)} -= 1"]


@_maker
def _mk_try(rng, indent):
    return [f"{indent}try:",
            f"{indent}    {rng.choice(_NAMES)} = probe({_term(rng)})",
            f"{indent}except ValueError:",
            f"{indent}    {rng.choice(_NAMES)} = {rng.randint(0, 9)}"]


@_maker
def _mk_comp(rng, indent):
    suffix = f" if idx % {rng.randint(2, 5)} == 0" if rng.random() < 0.5 else ""
    return [f"{indent}{rng.choice(_NAMES)} = [idx {rng.choice(_BINOPS)} "
            f"{rng.randint(1, 9)} for idx in source{suffix}]"]


@_maker
def _mk_ternary(rng, indent):
    return [f"{indent}{rng.choice(_NAMES)} = {_term(rng)} if {_cond(rng)} else {_term(rng)}"]


@_maker
def _mk_assert(rng, indent):
    return [f"{indent}assert {_cond(rng)}"]


@_maker
def _mk_comment(rng, indent):
    return [f"{indent}# step {rng.randint(1, 99)}"]


@_maker
def _mk_blank(rng, indent):
    return [""]


def _body(rng: random.Random, indent: str, count: int) -> list[str]:
    lines: list[str] = []
    for _ in range(count):
        lines.extend(rng.choice(_STATEMENT_MAKERS)(rng, indent))
    # a body must hold at least one statement
    if all(not l.strip() or l.strip().startswith("#") for l in lines):
        lines.append(f"{indent}{rng.choice(_NAMES)} = {_expr(rng)}")
    return lines


def generated_snippets(rng: random.Random) -> list[tuple[str, str]]:
    out = []
    for i in range(46):  # module-level only
        out.append((f"gen-mod-{i:03d}", "\n".join(_body(rng, "", rng.randint(2, 7))) + "\n"))
    for i in range(40):  # single function, sometimes with docstring
        name = f"job_{i}"
        lines = [f"def {name}({', '.join(rng.sample(_NAMES, rng.randint(1, 3)))}):"]
        if rng.random() < 0.3:
            lines.append(f'    """Handles {name}."""')
        lines += _body(rng, "    ", rng.randint(2, 6))
        lines.append(f"    return {_expr(rng)}")
        out.append((f"gen-func-{i:03d}", "\n".join(lines) + "\n"))
    for i in range(18):  # several functions per module
        lines: list[str] = []
        for j in range(rng.randint(2, 3)):
            lines.append(f"def stage_{i}_{j}(value):")
            lines += _body(rng, "    ", rng.randint(1, 4))
            lines.append(f"    return value {rng.choice(_BINOPS)} {rng.randint(1, 9)}")
            lines.append("")
        out.append((f"gen-multi-{i:03d}", "\n".join(lines)))
    for i in range(18):  # classes with methods
        lines = [f"class Worker{i}:"]
        if rng.random() < 0.4:
            lines.append(f'    """Worker number {i}."""')
        lines.append("    def __init__(self, seed):")
        lines.append(f"        self.seed = seed {rng.choice(_BINOPS)} {rng.randint(1, 9)}")
        for j in range(rng.randint(1, 2)):
            lines.append(f"    def run_{j}(self, value):")
            lines += _body(rng, "        ", rng.randint(1, 3))
            lines.append(f"        return self.seed {rng.choice(_CMPS)} value")
        out.append((f"gen-class-{i:03d}", "\n".join(lines) + "\n"))
    for i in range(8):  # mixed module: imports, function, module-level code
        lines = ["import math", ""]
        lines.append(f"def helper_{i}(x):")
        lines += _body(rng, "    ", rng.randint(1, 3))
        lines.append(f"    return x {rng.choice(_BINOPS)} math.pi")
        lines.append("")
        lines += _body(rng, "", rng.randint(1, 3))
        out.append((f"gen-mixed-{i:03d}", "\n".join(lines) + "\n"))
    return out


def build_corpus() -> list[tuple[str, str]]:
    rng = random.Random(20260814)
    corpus = [
        ("anchor-bubble-original", ANCHOR_ORIGINAL),
        ("anchor-bubble-refactored", ANCHOR_REFACTORED_STRIPPED),
        ("anchor-bubble-refactored-commented", ANCHOR_REFACTORED_COMMENTED),
    ]
    corpus += HANDCRAFTED
    corpus += generated_snippets(rng)
    ids = [sid for sid, _ in corpus]
    assert len(ids) == len(set(ids)), "duplicate snippet ids"
    return corpus


def check_anchors(rows: dict) -> None:
    """The reference must hit the published bubble-sort numbers."""
    original = rows["anchor-bubble-original"]
    assert original["sloc"] == 6, original
    assert original["snippet_cc"] == 4.0, original
    assert abs(original["effort"] - 209.28) < 0.01, original
    assert abs(original["mi"] - 69.58) < 0.01, original
    refactored = rows["anchor-bubble-refactored"]
    assert refactored["sloc"] == 6, refactored
    assert refactored["snippet_cc"] == 3.0, refactored
    assert abs(refactored["effort"] - 194.40) < 0.01, refactored
    assert abs(refactored["mi"] - 70.49) < 0.01, refactored


def main() -> None:
    corpus = build_corpus()
    rows = {}
    for snippet_id, code in corpus:
        ast.parse(code)  # every corpus snippet must be valid Python
        rows[snippet_id] = ref_snippet(snippet_id, code)
    check_anchors(rows)

    OUT_PATH.parent.mkdir(parents=True, exist_ok=True)
    with open(OUT_PATH, "w", encoding="utf-8") as fh:
        for snippet_id, _ in corpus:
            fh.write(json.dumps(rows[snippet_id], ensure_ascii=False, sort_keys=True))
            fh.write("\n")
    print(f"wrote {len(corpus)} snippets -> {OUT_PATH}")


if __name__ == "__main__":
    main()
