"""Text forms of permutations, bar elements and operad trees.

    permutation   (2 1 3)
    bar element   (2 1 3)*[(1 3 2)/(2 1 3)]     (2 1 3)*[]
                  [(2 1)]      lead omitted: identity
                  []3          arity suffix, needed when nothing else fixes n
    tree          ((2 1)*[] ; (2 1)*[] , #3)
    leaf          #k

In a tree node the j-th child is grafted on the leaf of the vertex labelled
j.  Leaf labels are global.  A bare bar element used as a child is a
corolla whose leaves take the smallest labels not written explicitly, in
planar order.  Sums are written ``t1 + t2 - 3 * t3``.
"""

import json

from . import trees
from .bar import BarElement
from .core import Accumulator, FormalSum, Permutation


class ParseError(ValueError):
    def __init__(self, message, text, pos):
        self.message, self.text, self.pos = message, text, pos
        super().__init__(f"{message} at position {pos}")

    def caret(self):
        return f"{self.text}\n{' ' * self.pos}^ {self.message}"


# ---------------------------------------------------------------- printing


def format_permutation(p):
    return "(" + " ".join(map(str, p)) + ")"


def format_bar(e):
    word = "/".join(format_permutation(s) for s in e.word)
    return f"{format_permutation(e.lead)}*[{word}]"


def format_tree(t):
    """Canonical text of a basis tree; a single vertex prints as a bar element."""
    if t[0] == trees.LEAF:
        if t[1] == 1:
            return "(1)*[]"
        return f"#{t[1]}"
    if all(k[0] == trees.LEAF for k in t[2]):
        return format_bar(BarElement(trees.label_permutation(t), t[1]))
    return _format_nested(t)


def _format_nested(t):
    if t[0] == trees.LEAF:
        return f"#{t[1]}"
    r = len(t[2])
    head = format_bar(BarElement(Permutation.identity(r), t[1]))
    return "(" + head + " ; " + " , ".join(_format_nested(k) for k in t[2]) + ")"


def format_sum(x, fmt=format_tree):
    if not x:
        return "0"
    out = []
    for k, c in x.items():
        body = fmt(k)
        mag = abs(c)
        term = body if mag == 1 else f"{mag} * {body}"
        if not out:
            out.append(term if c > 0 else "-" + term)
        else:
            out.append(("+ " if c > 0 else "- ") + term)
    return " ".join(out)


def tensor_to_json(x):
    """Canonical JSON list of ``[coefficient, [simplex, ...]]``."""
    return json.dumps([[c, [list(s) for s in t]] for t, c in x.items()])


def tensor_to_list(x):
    return [[c, [list(s) for s in t]] for t, c in x.items()]


# ----------------------------------------------------------------- parsing


class _Parser:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def error(self, msg, pos=None):
        raise ParseError(msg, self.text, self.pos if pos is None else pos)

    def ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch):
        if self.peek() != ch:
            found = repr(self.peek()) if self.peek() else "end of input"
            self.error(f"expected {ch!r}, found {found}")
        self.pos += 1

    def integer(self):
        self.ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("expected an integer")
        return int(self.text[start:self.pos])

    def end(self):
        if self.peek():
            self.error("unexpected trailing input")

    def permutation(self):
        start = self.pos
        self.expect("(")
        images = []
        while self.peek().isdigit():
            images.append(self.integer())
        self.expect(")")
        try:
            return Permutation(images)
        except ValueError:
            self.error(f"not a permutation of 1..{len(images)}", start)

    def bar(self):
        self.ws()
        start = self.pos
        lead = None
        if self.peek() == "(":
            lead = self.permutation()
            self.expect("*")
        self.expect("[")
        word = []
        if self.peek() != "]":
            word.append(self.permutation())
            while self.peek() == "/":
                self.pos += 1
                word.append(self.permutation())
        self.expect("]")
        n = None
        if self.pos < len(self.text) and self.text[self.pos].isdigit():
            n = self.integer()
        sizes = {len(s) for s in word} | ({len(lead)} if lead else set()) | ({n} if n else set())
        if len(sizes) > 1:
            self.error("arity mismatch inside bar element", start)
        if not sizes:
            self.error("arity of [] is undetermined; write []n or give a lead", start)
        n = sizes.pop()
        if n < 1:
            self.error("arity must be at least 1", start)
        return BarElement(lead or Permutation.identity(n), tuple(word))

    def node(self):
        """AST: ('leaf', k, pos) | ('bar', e, pos) | ('node', e, kids, pos)."""
        self.ws()
        start = self.pos
        c = self.peek()
        if c == "#":
            self.pos += 1
            k = self.integer()
            if k < 1:
                self.error("leaf labels start at 1", start)
            return ("leaf", k, start)
        if c == "[":
            return ("bar", self.bar(), start)
        if c != "(":
            self.error("expected a tree, bar element or leaf")
        # '(' followed by a digit opens a permutation, otherwise a tree node
        save = self.pos
        self.pos += 1
        if self.peek().isdigit():
            self.pos = save
            return ("bar", self.bar(), start)
        e = self.bar()
        self.expect(";")
        kids = [self.node()]
        while self.peek() == ",":
            self.pos += 1
            kids.append(self.node())
        self.expect(")")
        if len(kids) != e.arity:
            self.error(f"vertex of arity {e.arity} has {len(kids)} children", start)
        return ("node", e, kids, start)


def parse_permutation(text):
    p = _Parser(text)
    out = p.permutation()
    p.end()
    return out


def parse_bar(text):
    p = _Parser(text)
    out = p.bar()
    p.end()
    return out


def _leaf_count(ast):
    if ast[0] == "leaf":
        return 1
    if ast[0] == "bar":
        return ast[1].arity
    return sum(_leaf_count(k) for k in ast[2])


def _explicit(ast, out):
    if ast[0] == "leaf":
        out.append((ast[1], ast[2]))
    elif ast[0] == "node":
        for k in ast[2]:
            _explicit(k, out)


def _build(ast, free):
    if ast[0] == "leaf":
        return trees.leaf(ast[1])
    if ast[0] == "bar":
        e = ast[1]
        return (trees.RAW, e.lead, e.word, tuple(trees.leaf(next(free)) for _ in range(e.arity)))
    e = ast[1]
    return (trees.RAW, e.lead, e.word, tuple(_build(k, free) for k in ast[2]))


def _ast_to_sum(p, ast):
    n = _leaf_count(ast)
    named = []
    _explicit(ast, named)
    seen = set()
    for k, pos in named:
        if k > n:
            p.error(f"leaf label {k} exceeds the arity {n}", pos)
        if k in seen:
            p.error(f"leaf label {k} used twice", pos)
        seen.add(k)
    free = iter(k for k in range(1, n + 1) if k not in seen)
    raw = _build(ast, free)
    r = trees.canonicalize(raw)
    if r is None:
        return FormalSum()
    return FormalSum.basis(r[1], r[0])


def parse_tree(text):
    """Parse one tree expression into a signed basis tree (a FormalSum)."""
    p = _Parser(text)
    ast = p.node()
    p.end()
    return _ast_to_sum(p, ast)


def parse_tree_sum(text):
    """Parse ``[-] [k *] tree (+|- [k *] tree)*``."""
    p = _Parser(text)
    acc = Accumulator()
    sign = 1
    if p.peek() == "-":
        p.pos += 1
        sign = -1
    if p.peek() == "0" and not p.text[p.pos + 1:].strip():
        return FormalSum()
    while True:
        coeff = 1
        if p.peek().isdigit():
            coeff = p.integer()
            p.expect("*")
        ast = p.node()
        acc.add(_ast_to_sum(p, ast), sign * coeff)
        c = p.peek()
        if c == "+":
            sign = 1
        elif c == "-":
            sign = -1
        elif not c:
            break
        else:
            p.error("expected '+', '-' or end of input")
        p.pos += 1
    return acc.result()


def parse_simplex(text):
    """A simplex as a JSON list such as ``[0,1,2]``."""
    try:
        v = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError("simplex must be a JSON list of vertices", text, exc.pos) from None
    if not isinstance(v, list) or not v or not all(isinstance(a, int) for a in v):
        raise ParseError("simplex must be a nonempty JSON list of integers", text, 0)
    return tuple(sorted(v))
