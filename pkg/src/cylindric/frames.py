"""Finite atom structures <S, T_i, E_ij>, their complex algebras, and point forms."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

from .errors import BudgetExceeded
from .forms import NormalForm
from .terms import (
    NCA,
    And,
    Cyl,
    Diag,
    Equation,
    Neg,
    One,
    Or,
    Var,
    Zero,
    gen_name,
)

DEFAULT_MAX_NODES = 16

# the axiom family each frame condition corresponds to
AXIOM_OF = {"AS1": "C2/C3", "AS2": "C5", "AS3": "C6", "AS4": "WC6", "AS5": "C7"}


@dataclass(frozen=True)
class AtomStructure:
    """A model of type cat_n.  No condition is assumed; see check_conditions."""

    nodes: tuple
    T: tuple
    E: tuple

    def __post_init__(self):
        nodes = tuple(self.nodes)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "T", tuple(frozenset(map(tuple, r)) for r in self.T))
        object.__setattr__(self, "E", tuple(tuple(frozenset(c) for c in row) for row in self.E))
        n = len(self.T)
        if n < 2 or len(self.E) != n or any(len(row) != n for row in self.E):
            raise ValueError("T needs n >= 2 relations and E an n x n array")
        members = set(nodes)
        if len(members) != len(nodes):
            raise ValueError("duplicate nodes")
        for i, rel in enumerate(self.T):
            for a, b in rel:
                if a not in members or b not in members:
                    raise ValueError(f"T_{i} pair {(a, b)} leaves the node set")
        for i, row in enumerate(self.E):
            for j, cell in enumerate(row):
                if not cell <= members:
                    raise ValueError(f"E_{i}{j} leaves the node set")

    @property
    def n(self):
        return len(self.T)

    def __len__(self):
        return len(self.nodes)

    @cached_property
    def successors(self) -> tuple:
        """successors[i][v] = nodes w with (v, w) in T_i, in node order."""
        out = []
        for rel in self.T:
            table = {v: [] for v in self.nodes}
            for a, b in rel:
                table[a].append(b)
            order = {v: k for k, v in enumerate(self.nodes)}
            out.append({v: tuple(sorted(ws, key=order.__getitem__)) for v, ws in table.items()})
        return tuple(out)

    def image(self, i: int, X) -> frozenset:
        """T_i^* X = {y : some x in X has (x, y) in T_i}."""
        succ = self.successors[i]
        return frozenset(y for x in X for y in succ[x])

    def reflexive_closure(self) -> "AtomStructure":
        loops = {(v, v) for v in self.nodes}
        return AtomStructure(self.nodes, [rel | loops for rel in self.T], self.E)


def empty_valuation(m: int) -> tuple:
    return tuple(frozenset() for _ in range(m))


# -- frame conditions ------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    condition: str
    clause: str
    witness: tuple = ()

    def __str__(self):
        where = f" at {self.witness}" if self.witness else ""
        return f"{self.condition} ({AXIOM_OF[self.condition]}): {self.clause}{where}"


@dataclass(frozen=True)
class ConditionReport:
    variant: str
    checked: tuple
    violations: tuple = field(default=())

    @property
    def passed(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.passed

    def failed(self) -> tuple:
        return tuple(dict.fromkeys(v.condition for v in self.violations))

    def passes(self, condition) -> bool:
        return condition in self.checked and condition not in self.failed()


class _Stop(Exception):
    pass


def _ordered_pairs(n):
    return [(i, j) for i in range(n) for j in range(n) if i != j]


def check_conditions(s: AtomStructure, variant: str = NCA, diagonal_c6: bool = False,
                     first_only: bool = False) -> ConditionReport:
    """Evaluate AS1, AS2, AS5 and, by variant, AS3 (NCA) or AS4 (WCA).

    AS3 and AS4 range over i != j and k not in {i, j}, matching the axiom
    instances of terms.instantiate_axioms; ``diagonal_c6`` adds the i = j
    clauses of AS3 to mirror the optional diagonal C6 instances.
    """
    variant = variant.upper()
    n = s.n
    S = frozenset(s.nodes)
    succ = s.successors
    E = s.E
    found = []

    def bad(cond, clause, witness=()):
        found.append(Violation(cond, clause, tuple(witness)))
        if first_only:
            raise _Stop

    checked = ["AS1", "AS2", "AS3" if variant == NCA else "AS4", "AS5"]
    try:
        for i in range(n):
            nbrs = {v: frozenset(succ[i][v]) for v in s.nodes}
            for v in s.nodes:
                if v not in nbrs[v]:
                    bad("AS1", f"T_{i} reflexive", (v,))
                    continue
                for w in nbrs[v]:
                    if v not in nbrs[w]:
                        bad("AS1", f"T_{i} symmetric", (v, w))
                    elif nbrs[w] != nbrs[v]:
                        u = next(iter(nbrs[w] - nbrs[v]), None)
                        if u is not None:
                            bad("AS1", f"T_{i} transitive", (v, w, u))
        for i in range(n):
            missing = S - E[i][i]
            if missing:
                bad("AS2", f"E_{i}{i} = S", sorted(missing, key=s.nodes.index)[:1])
        if variant == NCA:
            for i, j, k in itertools.product(range(n), repeat=3):
                if k in (i, j) or (i == j and not diagonal_c6):
                    continue
                rhs = s.image(k, E[i][k] & E[k][j])
                if rhs != E[i][j]:
                    odd = sorted(rhs ^ E[i][j], key=s.nodes.index)[0]
                    bad("AS3", f"E_{i}{j} = T_{k}*(E_{i}{k} & E_{k}{j})", (odd,))
        else:
            for i, j in _ordered_pairs(n):
                ks = [k for k in range(n) if k not in (i, j)]
                if ks and E[i][j] != E[j][i]:
                    odd = sorted(E[i][j] ^ E[j][i], key=s.nodes.index)[0]
                    bad("AS4", f"E_{i}{j} = E_{j}{i}", (odd,))
                for k in ks:
                    extra = (E[i][k] & E[k][j]) - E[i][j]
                    if extra:
                        bad("AS4", f"E_{i}{k} & E_{k}{j} <= E_{i}{j}",
                            sorted(extra, key=s.nodes.index)[:1])
                    closed = s.image(k, E[i][j])
                    if closed != E[i][j]:
                        odd = sorted(closed ^ E[i][j], key=s.nodes.index)[0]
                        bad("AS4", f"E_{i}{j} = T_{k}*E_{i}{j}", (odd,))
        for i, j in _ordered_pairs(n):
            cell = E[i][j]
            for v in cell:
                for w in succ[i][v]:
                    if w != v and w in cell:
                        bad("AS5", f"T_{i} & E_{i}{j}^2 <= Id", (v, w))
    except _Stop:
        pass
    return ConditionReport(variant, tuple(checked), tuple(found))


def conditions_hold(s: AtomStructure, variant: str = NCA, diagonal_c6: bool = False) -> bool:
    return check_conditions(s, variant, diagonal_c6, first_only=True).passed


# -- complex algebras ------------------------------------------------------

class FiniteAlgebra:
    """Cm(S): all subsets of S as bitmasks, with T_i^* tables and constants E_ij."""

    def __init__(self, s: AtomStructure):
        self.structure = s
        self.index = {v: k for k, v in enumerate(s.nodes)}
        self.size = len(s.nodes)
        self.top = (1 << self.size) - 1
        self.diag = [[self.from_set(c) for c in row] for row in s.E]
        self.cyl = [self._table(i) for i in range(s.n)]

    def _table(self, i):
        s = self.structure
        unit = [self.from_set(s.successors[i][v]) for v in s.nodes]
        table = [0] * (1 << self.size)
        for mask in range(1, 1 << self.size):
            low = mask & -mask
            table[mask] = table[mask ^ low] | unit[low.bit_length() - 1]
        return table

    @property
    def n(self):
        return self.structure.n

    def __len__(self):
        return 1 << self.size

    def elements(self):
        return range(1 << self.size)

    def from_set(self, X) -> int:
        mask = 0
        for v in X:
            mask |= 1 << self.index[v]
        return mask

    def to_set(self, mask: int) -> frozenset:
        return frozenset(v for v, k in self.index.items() if mask >> k & 1)

    def evaluate(self, t, env) -> int:
        """Value of term t; env maps variable index -> bitmask."""
        if isinstance(t, Var):
            return env[t.l]
        if isinstance(t, Diag):
            return self.diag[t.i][t.j]
        if isinstance(t, And):
            return self.evaluate(t.left, env) & self.evaluate(t.right, env)
        if isinstance(t, Or):
            return self.evaluate(t.left, env) | self.evaluate(t.right, env)
        if isinstance(t, Neg):
            return self.top & ~self.evaluate(t.arg, env)
        if isinstance(t, Cyl):
            return self.cyl[t.i][self.evaluate(t.arg, env)]
        if isinstance(t, Zero):
            return 0
        if isinstance(t, One):
            return self.top
        raise TypeError(f"not a term: {t!r}")

    def valuation_env(self, e) -> dict:
        return {l: self.from_set(X) for l, X in enumerate(e)}


def complex_algebra(s: AtomStructure, max_nodes: int = DEFAULT_MAX_NODES) -> FiniteAlgebra:
    if len(s.nodes) > max_nodes:
        raise BudgetExceeded(
            f"complex algebra of {len(s.nodes)} nodes exceeds the bound of {max_nodes}",
            size=f"2^{len(s.nodes)}",
            log2_size=len(s.nodes),
        )
    return FiniteAlgebra(s)


def check_equation_bruteforce(a: FiniteAlgebra, eq: Equation, budget: int = 10**7) -> bool:
    """True iff eq holds for every assignment of algebra elements to its variables."""
    names = eq.variables
    total = len(a) ** len(names)
    if total > budget:
        raise BudgetExceeded(
            f"{total} assignments for {eq.name} exceed the budget of {budget}", size=str(total)
        )
    for values in itertools.product(a.elements(), repeat=len(names)):
        env = dict(zip(names, values))
        if a.evaluate(eq.lhs, env) != a.evaluate(eq.rhs, env):
            return False
    return True


def find_assignment_refuting(a: FiniteAlgebra, eq: Equation):
    """First assignment (variable -> subset) on which eq fails, or None."""
    names = eq.variables
    for values in itertools.product(a.elements(), repeat=len(names)):
        env = dict(zip(names, values))
        if a.evaluate(eq.lhs, env) != a.evaluate(eq.rhs, env):
            return {l: a.to_set(v) for l, v in env.items()}
    return None


def satisfies_term(s: AtomStructure, e, v, t) -> bool:
    """Whether node v lies in the value of t in Cm(s) under valuation e."""
    a = FiniteAlgebra(s)
    return bool(a.evaluate(t, a.valuation_env(e)) >> a.index[v] & 1)


# -- point forms -----------------------------------------------------------

class PointForms:
    """Memoized point forms of one structure under one valuation.

    Not thread-safe; use one instance per caller.
    """

    def __init__(self, s: AtomStructure, e):
        self.structure = s
        self.valuation = tuple(e)
        self._memo = {}
        self._colors = {}

    def color(self, v) -> frozenset:
        c = self._colors.get(v)
        if c is None:
            s = self.structure
            c = frozenset(
                [Diag(i, j) for i in range(s.n) for j in range(s.n) if v in s.E[i][j]]
                + [Var(l) for l, X in enumerate(self.valuation) if v in X]
            )
            self._colors[v] = c
        return c

    def __call__(self, v, h: int) -> NormalForm:
        key = (v, h)
        f = self._memo.get(key)
        if f is None:
            if h < 0:
                raise ValueError("degree must be >= 0")
            s = self.structure
            if h == 0:
                subs = [()] * s.n
            else:
                subs = [[self(w, h - 1) for w in s.successors[i][v]] for i in range(s.n)]
            f = NormalForm(h, self.color(v), subs)
            self._memo[key] = f
        return f


def point_form(s: AtomStructure, e, v, h: int) -> NormalForm:
    """The unique degree-h form that node v satisfies in Cm(s) under e."""
    return PointForms(s, e)(v, h)


def models(s: AtomStructure, e, v, f: NormalForm) -> bool:
    return point_form(s, e, v, f.degree) is f


# -- file formats ----------------------------------------------------------

def structure_to_dict(s: AtomStructure, name=str) -> dict:
    order = {v: k for k, v in enumerate(s.nodes)}
    return {
        "nodes": [name(v) for v in s.nodes],
        "T": [
            [[name(a), name(b)] for a, b in sorted(rel, key=lambda p: (order[p[0]], order[p[1]]))]
            for rel in s.T
        ],
        "E": [[[name(v) for v in s.nodes if v in cell] for cell in row] for row in s.E],
    }


def structure_from_dict(d: dict) -> AtomStructure:
    try:
        nodes = [str(v) for v in d["nodes"]]
        T = [[(str(a), str(b)) for a, b in rel] for rel in d["T"]]
        E = [[[str(v) for v in cell] for cell in row] for row in d["E"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed structure record: {exc}") from exc
    return AtomStructure(nodes, T, E)


def valuation_to_dict(e, name=str) -> dict:
    return {f"x_{l}": sorted(name(v) for v in X) for l, X in enumerate(e)}


EDGE_STYLES = ("dashed", "dotted", "solid", "bold", "tapered")


def structure_to_dot(s: AtomStructure, e=(), name=str, ranks=None, labels=None) -> str:
    """Graphviz source: one undirected edge per T_i class pair, style per i.

    ``ranks`` optionally maps node -> band (drawn as same-rank clusters);
    ``labels`` optionally maps node -> extra text.
    """
    lines = ["graph S {", "  node [shape=circle];"]
    for v in s.nodes:
        tags = [f"d{i}{j}" for i in range(s.n) for j in range(s.n) if i != j and v in s.E[i][j]]
        tags += [f"x{l}" for l, X in enumerate(e) if v in X]
        text = name(v)
        if labels and v in labels:
            text += f"\\n{labels[v]}"
        if tags:
            text += "\\n" + " ".join(tags)
        lines.append(f'  "{name(v)}" [label="{text}"];')
    if ranks:
        bands = {}
        for v, r in ranks.items():
            bands.setdefault(r, []).append(v)
        for r in sorted(bands):
            members = " ".join(f'"{name(v)}";' for v in bands[r])
            lines.append(f"  {{ rank=same; {members} }}")
    order = {v: k for k, v in enumerate(s.nodes)}
    for i, rel in enumerate(s.T):
        style = EDGE_STYLES[i % len(EDGE_STYLES)]
        for a, b in sorted(rel, key=lambda p: (order[p[0]], order[p[1]])):
            if order[a] < order[b]:
                lines.append(f'  "{name(a)}" -- "{name(b)}" [style={style}, label="T{i}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def describe_color(color) -> str:
    return "{" + ", ".join(sorted(map(gen_name, color))) + "}"

