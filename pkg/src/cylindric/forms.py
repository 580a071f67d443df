"""Normal forms of degree k in a compact, interned representation.

A form of degree k+1 fixes the sign of every generator in D_{n,m} and of
every c_i(sigma) for sigma of degree k.  Only the positive information is
stored: ``color`` is the set of positive generators and ``subs[i]`` the set
of degree-k forms sigma with c_i(sigma) positive.  Everything else occurs
negatively.
"""

from __future__ import annotations

import functools
import itertools
import threading
import weakref

from .errors import BudgetExceeded, DegreeMismatch
from .terms import (
    Cyl,
    Diag,
    Neg,
    Params,
    Var,
    conj,
    gen_key,
    gen_name,
    parse_gen_name,
)

DEFAULT_BUDGET = 10**6

# past this many bits a form count is only described, never computed
_MAX_EXACT_LOG2 = 4096


class NormalForm:
    """An interned normal form; structurally equal forms are identical objects."""

    __slots__ = ("degree", "color", "subs", "sort_key", "__weakref__")

    _table = weakref.WeakValueDictionary()
    _lock = threading.Lock()

    def __new__(cls, degree, color, subs):
        color = frozenset(color)
        subs = tuple(frozenset(s) for s in subs)
        key = (degree, color, subs)
        self = cls._table.get(key)
        if self is not None:
            return self
        self = object.__new__(cls)
        self.degree = degree
        self.color = color
        self.subs = subs
        self.sort_key = (
            degree,
            tuple(sorted(gen_key(g) for g in color)),
            tuple(tuple(sorted(f.sort_key for f in s)) for s in subs),
        )
        with cls._lock:
            return cls._table.setdefault(key, self)

    def __reduce__(self):
        return (NormalForm, (self.degree, self.color, self.subs))

    def __lt__(self, other):
        return self.sort_key < other.sort_key

    @property
    def n(self):
        return len(self.subs)

    def sorted_color(self):
        return sorted(self.color, key=gen_key)

    def sorted_subs(self, i):
        return sorted(self.subs[i], key=lambda f: f.sort_key)

    def size(self) -> int:
        """Number of form occurrences in the compact syntax tree."""
        return 1 + sum(f.size() for s in self.subs for f in s)

    def __repr__(self):
        colors = ",".join(gen_name(g) for g in self.sorted_color())
        if self.degree == 0:
            return f"NF0{{{colors}}}"
        parts = [colors] + [
            f"{i}:[{', '.join(map(repr, self.sorted_subs(i)))}]" for i in range(self.n)
        ]
        return f"NF{self.degree}{{{' | '.join(parts)}}}"


def leaf(color, n: int) -> NormalForm:
    """Degree-0 form with the given positive generators."""
    return NormalForm(0, color, [()] * n)


def diagonal_free(f: NormalForm) -> bool:
    """True when no d_ij with i != j is positive, i.e. f lies below prod -d_ij."""
    return not any(isinstance(g, Diag) and g.i != g.j for g in f.color)


def strip_variables(f: NormalForm) -> NormalForm:
    """The same form with every x_l dropped from every color (recursively)."""
    return _strip(f)


@functools.lru_cache(maxsize=None)
def _strip(f):
    color = [g for g in f.color if not isinstance(g, Var)]
    return NormalForm(f.degree, color, [[_strip(g) for g in s] for s in f.subs])


# -- counting and enumeration ---------------------------------------------

def log2_form_count(p: Params, q: int):
    """log2 |F_q| as an int, or None when even the exponent is unmanageable."""
    base = p.n * p.n + p.m
    e = base
    for _ in range(q):
        if e is None or e > _MAX_EXACT_LOG2:
            return None
        e = base + p.n * (1 << e)
    return e


def form_count(p: Params, q: int):
    """|F_q| exactly, or None when it is astronomically large."""
    e = log2_form_count(p, q)
    if e is None or e > _MAX_EXACT_LOG2:
        return None
    return 1 << e


def describe_form_count(p: Params, q: int) -> str:
    """|F_q| written as a product of powers of two, e.g. '2^5·2^64'."""
    base = p.n * p.n + p.m
    if q == 0:
        return f"2^{base}"
    inner = form_count(p, q - 1)
    if inner is not None and inner.bit_length() <= 64:
        exponent = str(p.n * inner)
    else:
        exponent = f"({p.n}·{describe_form_count(p, q - 1)})"
    return f"2^{base}·2^{exponent}"


def _check_budget(p, q, budget, what):
    count = form_count(p, q)
    if count is None or count > budget:
        size = describe_form_count(p, q)
        raise BudgetExceeded(
            f"{what} needs all of F_{q} with |F_{q}| = {size}, over the budget of {budget}",
            size=size,
            log2_size=log2_form_count(p, q),
        )


def _subsets(items):
    items = list(items)
    for mask in range(1 << len(items)):
        yield [x for b, x in enumerate(items) if mask >> b & 1]


def enumerate_degree0(p: Params, budget: int = DEFAULT_BUDGET) -> list:
    """All 2^(n^2+m) degree-0 forms, ordered by the bitmask over p.generators."""
    _check_budget(p, 0, budget, "degree-0 enumeration")
    return [leaf(color, p.n) for color in _subsets(p.generators)]


def enumerate_forms(p: Params, q: int, budget: int = DEFAULT_BUDGET) -> list:
    """All of F_q.  Only feasible for q = 0 in practice."""
    _check_budget(p, q, budget, f"enumeration of F_{q}")
    if q == 0:
        return enumerate_degree0(p, budget)
    lower = enumerate_forms(p, q - 1, budget)
    colors = list(_subsets(p.generators))
    subsets = list(_subsets(lower))
    return [
        NormalForm(q, color, subs)
        for color in colors
        for subs in itertools.product(subsets, repeat=p.n)
    ]


# -- structural operations -------------------------------------------------

def disjoint(f: NormalForm, g: NormalForm) -> bool:
    """True iff f and g are distinct forms, i.e. f * g = 0 in every BAO."""
    if f.degree != g.degree:
        raise DegreeMismatch(f"cannot compare forms of degree {f.degree} and {g.degree}")
    return f is not g


def reduce_degree(f: NormalForm, h: int) -> NormalForm:
    """The unique degree-h form above f (for f nonzero)."""
    if not 0 <= h <= f.degree:
        raise ValueError(f"target degree {h} outside 0..{f.degree}")
    return _reduce(f, h)


@functools.lru_cache(maxsize=None)
def _reduce(f, h):
    if h == f.degree:
        return f
    if h == 0:
        return leaf(f.color, f.n)
    return NormalForm(h, f.color, [[_reduce(g, h - 1) for g in s] for s in f.subs])


def form_diagnostics(f, p: Params) -> list:
    """Problems with f under p, as readable strings; empty when f is valid."""
    problems = []
    _diagnose(f, p, problems, "root")
    return problems


def _diagnose(f, p, problems, where):
    if not isinstance(f, NormalForm):
        problems.append(f"{where}: not a normal form")
        return
    if not isinstance(f.degree, int) or f.degree < 0:
        problems.append(f"{where}: bad degree {f.degree!r}")
        return
    if f.n != p.n:
        problems.append(f"{where}: {f.n} sub-sets for dimension {p.n}")
    for g in f.color:
        if isinstance(g, Diag):
            if not (0 <= g.i < p.n and 0 <= g.j < p.n):
                problems.append(f"{where}: {gen_name(g)} out of range")
        elif isinstance(g, Var):
            if not 0 <= g.l < p.m:
                problems.append(f"{where}: {gen_name(g)} out of range")
        else:
            problems.append(f"{where}: {g!r} is not a generator")
    for i, s in enumerate(f.subs):
        if f.degree == 0 and s:
            problems.append(f"{where}: degree-0 form with nonempty subs[{i}]")
        for g in s:
            if isinstance(g, NormalForm) and g.degree != f.degree - 1:
                problems.append(
                    f"{where}: subs[{i}] member of degree {g.degree} in a degree-{f.degree} form"
                )
            else:
                _diagnose(g, p, problems, f"{where}.{i}")


def validate_form(f, p: Params) -> bool:
    return not form_diagnostics(f, p)


def form_to_term(f: NormalForm, p: Params, budget: int = DEFAULT_BUDGET):
    """Spell f out as a literal conjunction, negative conjuncts included."""
    literals = [g if g in f.color else Neg(g) for g in p.generators]
    if f.degree > 0:
        lower = enumerate_forms(p, f.degree - 1, budget)
        for i in range(p.n):
            for sigma in lower:
                lit = Cyl(i, form_to_term(sigma, p, budget))
                literals.append(lit if sigma in f.subs[i] else Neg(lit))
    return conj(literals)


# -- file representation ---------------------------------------------------

def form_to_dict(f: NormalForm) -> dict:
    return {
        "degree": f.degree,
        "color": [gen_name(g) for g in f.sorted_color()],
        "subs": [[form_to_dict(g) for g in f.sorted_subs(i)] for i in range(f.n)],
    }


def form_from_dict(d: dict, p: Params | None = None) -> NormalForm:
    try:
        degree = int(d["degree"])
        color = [parse_gen_name(name) for name in d["color"]]
        subs = [[form_from_dict(g, p) for g in s] for s in d["subs"]]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed form record: {exc}") from exc
    if p is not None and len(subs) != p.n:
        raise ValueError(f"form has {len(subs)} directions, expected {p.n}")
    return NormalForm(degree, color, subs)
