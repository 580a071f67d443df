"""Terms of the signature cyl_n: syntax tree, parser, printer, axiom schemata.

Concrete syntax (whitespace between tokens is optional)::

    term := '0' | '1' | 'd' INT INT | 'x' INT | '-' term
          | 'c' INT '(' term ')' | term '*' term | term '+' term | '(' term ')'

'-' binds tighter than '*', which binds tighter than '+'; both binary
operators associate to the left.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterator

from .errors import IndexBoundsError, TermSyntaxError

NCA = "NCA"
WCA = "WCA"
VARIANTS = (NCA, WCA)


@dataclass(frozen=True)
class Params:
    n: int
    m: int = 0
    variant: str = NCA

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 2:
            raise ValueError(f"dimension must be an integer >= 2, got {self.n!r}")
        if not isinstance(self.m, int) or self.m < 0:
            raise ValueError(f"variable count must be an integer >= 0, got {self.m!r}")
        variant = str(self.variant).upper()
        if variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        object.__setattr__(self, "variant", variant)

    @property
    def generators(self) -> tuple:
        """D_{n,m} in canonical order: all d_ij row by row, then x_0 .. x_{m-1}."""
        diags = tuple(Diag(i, j) for i in range(self.n) for j in range(self.n))
        return diags + tuple(Var(l) for l in range(self.m))

    def with_variant(self, variant):
        return Params(self.n, self.m, variant)


class Term:
    __slots__ = ()

    def __mul__(self, other):
        return And(self, other)

    def __add__(self, other):
        return Or(self, other)

    def __neg__(self):
        return Neg(self)

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True, slots=True)
class Zero(Term):
    pass


@dataclass(frozen=True, slots=True)
class One(Term):
    pass


@dataclass(frozen=True, slots=True)
class Diag(Term):
    i: int
    j: int


@dataclass(frozen=True, slots=True)
class Var(Term):
    l: int


@dataclass(frozen=True, slots=True)
class Neg(Term):
    arg: Term


@dataclass(frozen=True, slots=True)
class Cyl(Term):
    i: int
    arg: Term


@dataclass(frozen=True, slots=True)
class And(Term):
    left: Term
    right: Term


@dataclass(frozen=True, slots=True)
class Or(Term):
    left: Term
    right: Term


ZERO = Zero()
ONE = One()


# -- generators ------------------------------------------------------------

def gen_key(g) -> tuple:
    if isinstance(g, Diag):
        return (0, g.i, g.j)
    if isinstance(g, Var):
        return (1, g.l, 0)
    raise TypeError(f"not a generator: {g!r}")


def gen_name(g) -> str:
    if isinstance(g, Diag):
        return f"d_{g.i}_{g.j}"
    if isinstance(g, Var):
        return f"x_{g.l}"
    raise TypeError(f"not a generator: {g!r}")


_GEN_NAME = re.compile(r"^(?:d_(\d+)_(\d+)|x_(\d+))$")


def parse_gen_name(name: str):
    match = _GEN_NAME.match(name.strip())
    if not match:
        raise ValueError(f"bad generator name {name!r}")
    if match.group(3) is not None:
        return Var(int(match.group(3)))
    return Diag(int(match.group(1)), int(match.group(2)))


def is_generator(t) -> bool:
    return isinstance(t, (Diag, Var))


# -- structural metrics ----------------------------------------------------

def depth(t: Term) -> int:
    """Nesting depth of cylindrifications."""
    if isinstance(t, Cyl):
        return depth(t.arg) + 1
    if isinstance(t, Neg):
        return depth(t.arg)
    if isinstance(t, (And, Or)):
        return max(depth(t.left), depth(t.right))
    return 0


def variables(t: Term) -> frozenset:
    """Indices of the variables occurring in ``t``."""
    if isinstance(t, Var):
        return frozenset((t.l,))
    if isinstance(t, (Neg, Cyl)):
        return variables(t.arg)
    if isinstance(t, (And, Or)):
        return variables(t.left) | variables(t.right)
    return frozenset()


def subterms(t: Term) -> Iterator[Term]:
    yield t
    if isinstance(t, (Neg, Cyl)):
        yield from subterms(t.arg)
    elif isinstance(t, (And, Or)):
        yield from subterms(t.left)
        yield from subterms(t.right)


def check_term(t: Term, p: Params) -> None:
    """Raise IndexBoundsError if some index of ``t`` is out of range for ``p``."""
    for s in subterms(t):
        if isinstance(s, Diag) and not (0 <= s.i < p.n and 0 <= s.j < p.n):
            raise IndexBoundsError(f"diagonal index out of range in {to_text(s)} (n={p.n})")
        if isinstance(s, Cyl) and not 0 <= s.i < p.n:
            raise IndexBoundsError(f"cylindrification index {s.i} out of range (n={p.n})")
        if isinstance(s, Var) and not 0 <= s.l < p.m:
            raise IndexBoundsError(f"variable index {s.l} out of range (m={p.m})")


def conj(terms) -> Term:
    """Left-nested conjunction; the empty conjunction is 1."""
    terms = list(terms)
    if not terms:
        return ONE
    out = terms[0]
    for t in terms[1:]:
        out = And(out, t)
    return out


def disj(terms) -> Term:
    terms = list(terms)
    if not terms:
        return ZERO
    out = terms[0]
    for t in terms[1:]:
        out = Or(out, t)
    return out


# -- printing --------------------------------------------------------------

_PREC_OR, _PREC_AND, _PREC_NEG, _PREC_ATOM = 1, 2, 3, 4


def _prec(t):
    if isinstance(t, Or):
        return _PREC_OR
    if isinstance(t, And):
        return _PREC_AND
    if isinstance(t, Neg):
        return _PREC_NEG
    return _PREC_ATOM


def _tokens(t: Term, need: int) -> list:
    if _prec(t) < need:
        return ["(", *_tokens(t, 0), ")"]
    if isinstance(t, Zero):
        return ["0"]
    if isinstance(t, One):
        return ["1"]
    if isinstance(t, Diag):
        return ["d", str(t.i), str(t.j)]
    if isinstance(t, Var):
        return ["x", str(t.l)]
    if isinstance(t, Neg):
        return ["-", *_tokens(t.arg, _PREC_NEG)]
    if isinstance(t, Cyl):
        return ["c", str(t.i), "(", *_tokens(t.arg, 0), ")"]
    if isinstance(t, And):
        return [*_tokens(t.left, _PREC_AND), "*", *_tokens(t.right, _PREC_NEG)]
    if isinstance(t, Or):
        return [*_tokens(t.left, _PREC_OR), "+", *_tokens(t.right, _PREC_AND)]
    raise TypeError(f"not a term: {t!r}")


def to_text(t: Term) -> str:
    return " ".join(_tokens(t, 0))


# -- parsing ---------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([dxc()*+\-]))")


def _tokenize(text: str) -> list:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if not match:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise TermSyntaxError(f"unexpected character {text[bad]!r}", bad)
        start = match.start(1) if match.group(1) is not None else match.start(2)
        value = int(match.group(1)) if match.group(1) is not None else match.group(2)
        tokens.append((value, start))
        pos = match.end()
    return tokens


class _Parser:
    def __init__(self, text, p):
        self.tokens = _tokenize(text)
        self.end = len(text)
        self.pos = 0
        self.p = p

    def peek(self):
        if self.pos < len(self.tokens):
            return self.tokens[self.pos][0]
        return None

    def where(self):
        if self.pos < len(self.tokens):
            return self.tokens[self.pos][1]
        return self.end

    def take(self):
        if self.pos >= len(self.tokens):
            raise TermSyntaxError("unexpected end of input", self.end)
        tok = self.tokens[self.pos][0]
        self.pos += 1
        return tok

    def expect(self, want):
        at = self.where()
        tok = self.take()
        if tok != want:
            raise TermSyntaxError(f"expected {want!r}, found {tok!r}", at)

    def index(self, bound, what):
        at = self.where()
        tok = self.take()
        if not isinstance(tok, int):
            raise TermSyntaxError(f"expected an index, found {tok!r}", at)
        if bound is not None and tok >= bound:
            raise IndexBoundsError(f"{what} index {tok} out of range at offset {at} (bound {bound})")
        return tok

    def parse(self):
        t = self.sum()
        if self.pos != len(self.tokens):
            raise TermSyntaxError(f"unexpected token {self.peek()!r}", self.where())
        return t

    def sum(self):
        t = self.product()
        while self.peek() == "+":
            self.take()
            t = Or(t, self.product())
        return t

    def product(self):
        t = self.unary()
        while self.peek() == "*":
            self.take()
            t = And(t, self.unary())
        return t

    def unary(self):
        if self.peek() == "-":
            self.take()
            return Neg(self.unary())
        return self.atom()

    def atom(self):
        p = self.p
        at = self.where()
        tok = self.take()
        if tok == 0:
            return ZERO
        if tok == 1:
            return ONE
        if tok == "d":
            i = self.index(p and p.n, "diagonal")
            j = self.index(p and p.n, "diagonal")
            return Diag(i, j)
        if tok == "x":
            return Var(self.index(p and p.m, "variable"))
        if tok == "c":
            i = self.index(p and p.n, "cylindrification")
            self.expect("(")
            t = self.sum()
            self.expect(")")
            return Cyl(i, t)
        if tok == "(":
            t = self.sum()
            self.expect(")")
            return t
        raise TermSyntaxError(f"unexpected token {tok!r}", at)


def parse_term(text: str, p: Params | None = None) -> Term:
    """Parse ``text``; with ``p`` given, indices are bounds-checked."""
    return _Parser(text, p).parse()


# -- axioms ----------------------------------------------------------------

@dataclass(frozen=True)
class Equation:
    """``lhs = rhs``; its variables are read as universally quantified."""

    lhs: Term
    rhs: Term
    schema: str = ""
    indices: tuple = ()

    @property
    def variables(self) -> tuple:
        return tuple(sorted(variables(self.lhs) | variables(self.rhs)))

    @property
    def name(self):
        if not self.indices:
            return self.schema
        return f"{self.schema}[{','.join(map(str, self.indices))}]"

    def __str__(self):
        return f"{to_text(self.lhs)} = {to_text(self.rhs)}"


def leq(a: Term, b: Term, schema="", indices=()) -> Equation:
    """``a <= b`` written as the equation ``a * b = a``."""
    return Equation(And(a, b), a, schema, indices)


def _boolean_axioms():
    x, y, z = Var(0), Var(1), Var(2)
    eqs = [
        (x + y, y + x),
        (x * y, y * x),
        ((x + y) + z, x + (y + z)),
        ((x * y) * z, x * (y * z)),
        (x + (x * y), x),
        (x * (x + y), x),
        (x * (y + z), (x * y) + (x * z)),
        (x + (y * z), (x + y) * (x + z)),
        (x + -x, ONE),
        (x * -x, ZERO),
        (x + ZERO, x),
        (x * ONE, x),
    ]
    return [Equation(lhs, rhs, "C0", (k,)) for k, (lhs, rhs) in enumerate(eqs)]


def _c6(n, diagonal):
    out = []
    for i, j, k in itertools.product(range(n), repeat=3):
        if k in (i, j) or (i == j and not diagonal):
            continue
        out.append(Equation(Diag(i, j), Cyl(k, Diag(i, k) * Diag(k, j)), "C6", (i, j, k)))
    return out


def diagonal_c6_instances(p: Params) -> list:
    """The C6 instances with i = j, d_ii = c_k(d_ik * d_ki) for k != i.

    Not part of the default axiom set; see ``instantiate_axioms``.
    """
    return [eq for eq in _c6(p.n, True) if eq.indices[0] == eq.indices[1]]


def commutativity_instances(p: Params) -> list:
    """C4, c_i c_j x = c_j c_i x, which neither NCA nor WCA assumes."""
    x = Var(0)
    return [
        Equation(Cyl(i, Cyl(j, x)), Cyl(j, Cyl(i, x)), "C4", (i, j))
        for i in range(p.n)
        for j in range(p.n)
        if i < j
    ]


def instantiate_axioms(p: Params, diagonal_c6: bool = False) -> list:
    """Ground instances over all indices < n of the axiom schemata of p.variant.

    Schema variables x, y (and z in the Boolean part) are Var(0), Var(1),
    Var(2) and are quantified over the whole algebra, independently of p.m.
    C6 and WC6 are instantiated for i != j and k not in {i, j}; pass
    ``diagonal_c6=True`` to also include the i = j instances of C6.
    """
    n = p.n
    x, y = Var(0), Var(1)
    eqs = _boolean_axioms()
    for i in range(n):
        eqs.append(Equation(Cyl(i, ZERO), ZERO, "C1", (i,)))
    for i in range(n):
        eqs.append(leq(x, Cyl(i, x), "C2", (i,)))
    for i in range(n):
        eqs.append(Equation(Cyl(i, x * Cyl(i, y)), Cyl(i, x) * Cyl(i, y), "C3", (i,)))
    for i in range(n):
        eqs.append(Equation(Diag(i, i), ONE, "C5", (i,)))
    if p.variant == NCA:
        eqs.extend(_c6(n, diagonal_c6))
    else:
        for i, j, k in itertools.product(range(n), repeat=3):
            if i == j or k in (i, j):
                continue
            idx = (i, j, k)
            eqs.append(leq(Diag(i, k) * Diag(k, j), Diag(i, j), "WC6", idx))
            eqs.append(Equation(Diag(i, j), Diag(j, i), "WC6", idx))
            eqs.append(Equation(Diag(j, i), Cyl(k, Diag(j, i)), "WC6", idx))
    for i in range(n):
        for j in range(n):
            if i != j:
                lhs = Cyl(i, Diag(i, j) * x) * Cyl(i, Diag(i, j) * -x)
                eqs.append(Equation(lhs, ZERO, "C7", (i, j)))
    return eqs
