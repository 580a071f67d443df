"""Finite witness structures for normal forms, and the satisfiability decision.

For a form tau of degree k the construction grows a tree of cliques: the
root u carries tau, and every labeled node v of level l < k receives, for
each direction i it was not itself reached through, fresh children labeled
by the members of sub_i(L(v)) that survive the diagonal filter.  v and its
i-children form one T_i class.  For NCA, representable nodes of level k are
padded with the closure of a representation tuple (the S_{-1} part) so that
AS3 can hold.  tau is nonzero in the free algebra iff the resulting
structure meets the frame conditions and every labeled node realizes its
label.
"""

from __future__ import annotations

import functools
import itertools
import json
from dataclasses import dataclass, field

from .errors import PreconditionError
from .forms import NormalForm, form_diagnostics, form_to_dict
from .frames import (
    AXIOM_OF,
    AtomStructure,
    ConditionReport,
    PointForms,
    check_conditions,
    structure_to_dict,
    structure_to_dot,
    valuation_to_dict,
)
from .terms import NCA, Diag, Params, Var


# -- representation tuples -------------------------------------------------

def apply_c(f: tuple, i: int, j: int, k: int) -> tuple:
    """C_k^{i,j} f: copy f(i) into position k when k is not in {i, j} and f(i) = f(j)."""
    if k in (i, j) or f[i] != f[j]:
        return f
    return f[:k] + (f[i],) + f[k + 1:]


def rep_closure(seeds) -> frozenset:
    """Least set containing ``seeds`` and closed under every C_k^{i,j}."""
    seeds = [tuple(f) for f in seeds]
    if not seeds:
        raise ValueError("rep_closure needs at least one seed")
    n = len(seeds[0])
    ops = [(i, j, k) for i, j, k in itertools.product(range(n), repeat=3) if k not in (i, j)]
    seen = set(seeds)
    todo = list(seeds)
    while todo:
        f = todo.pop()
        for i, j, k in ops:
            g = apply_c(f, i, j, k)
            if g not in seen:
                seen.add(g)
                todo.append(g)
    return frozenset(seen)


def equiv_except(g: tuple, h: tuple, i: int) -> bool:
    """g ==_i h: the tuples agree everywhere except possibly at i."""
    return all(a == b for k, (a, b) in enumerate(zip(g, h)) if k != i)


def is_representable(f: NormalForm, points=None):
    """A tuple realizing the diagonal pattern of f with at most n-1 points, or None.

    Position i and j carry the same point iff d_ij is in color(f).  Points
    are taken from ``points`` (default 'a', 'b', ...) in order of first use.
    """
    n = f.n
    same = [[Diag(i, j) in f.color for j in range(n)] for i in range(n)]
    for i in range(n):
        if not same[i][i]:
            return None
        for j in range(n):
            if same[i][j] != same[j][i]:
                return None
            for k in range(n):
                if same[i][j] and same[j][k] and not same[i][k]:
                    return None
    if points is None:
        points = [chr(ord("a") + k) for k in range(n)]
    cls = []
    out = []
    for i in range(n):
        for c, rep in enumerate(cls):
            if same[i][rep]:
                out.append(points[c])
                break
        else:
            cls.append(i)
            out.append(points[len(cls) - 1])
    if len(cls) > n - 1:
        return None
    return tuple(out)


# -- the construction ------------------------------------------------------

@dataclass(frozen=True, eq=False)
class WitnessStructure:
    """The structure built for ``tau`` together with its bookkeeping.

    levels[v] is v's level (-1 for representation tuples), labels[v] its
    form, arrival[v] the direction through which v was created (None for
    the root), children[(v, i)] the nodes created for v in direction i,
    reps[v] the representation tuple of a tuple node or representable leaf.
    """

    tau: NormalForm
    params: Params
    base: AtomStructure
    root: int
    levels: dict
    labels: dict
    arrival: dict
    children: dict
    reps: dict
    valuation: tuple
    filtered: dict = field(default_factory=dict)

    @property
    def degree(self):
        return self.tau.degree

    def level(self, l: int) -> tuple:
        return tuple(v for v in self.base.nodes if self.levels[v] == l)

    def direction_class(self, l: int, i: int) -> tuple:
        """S_l^i: level-l nodes created through direction i (the root counts for all i)."""
        return tuple(
            v for v in self.level(l) if self.arrival[v] is None or self.arrival[v] == i
        )

    @property
    def tuple_nodes(self) -> tuple:
        return self.level(-1)

    @property
    def labeled_nodes(self) -> tuple:
        return tuple(v for v in self.base.nodes if v in self.labels)


def _filter_passes(sigma, label, i, n):
    # sigma is dropped when some d_im, m != i, is positive in both forms
    return not any(
        Diag(i, m) in sigma.color and Diag(i, m) in label.color for m in range(n) if m != i
    )


def build_witness(tau: NormalForm, p: Params, use_filter: bool = True) -> WitnessStructure:
    """Build the finite structure for tau.

    Nodes are consecutive integers, the root is 0.  ``use_filter=False``
    keeps the sub_i members the diagonal filter would drop (for testing the
    filter; the decision procedure always filters).
    """
    problems = form_diagnostics(tau, p)
    if problems:
        raise PreconditionError("invalid form: " + "; ".join(problems))
    n, k = p.n, tau.degree
    counter = itertools.count()
    root = next(counter)
    levels = {root: 0}
    labels = {root: tau}
    arrival = {root: None}
    children = {}
    filtered = {}
    cliques = [[] for _ in range(n)]

    frontier = [root]
    for l in range(k):
        nxt = []
        for v in frontier:
            label = labels[v]
            for i in range(n):
                if arrival[v] == i:
                    continue
                kids = []
                for sigma in label.sorted_subs(i):
                    if use_filter and not _filter_passes(sigma, label, i, n):
                        filtered.setdefault((v, i), []).append(sigma)
                        continue
                    w = next(counter)
                    levels[w] = l + 1
                    labels[w] = sigma
                    arrival[w] = i
                    kids.append(w)
                children[(v, i)] = tuple(kids)
                cliques[i].append((v, *kids))
                nxt.extend(kids)
        frontier = nxt

    reps = {}
    if p.variant == NCA:
        for v in frontier:
            f_v = is_representable(labels[v], points=[f"p{v}.{c}" for c in range(n)])
            if f_v is None:
                continue
            reps[v] = f_v
            added = sorted(rep_closure([f_v]) - {f_v})
            ids = {}
            for g in added:
                w = next(counter)
                ids[g] = w
                levels[w] = -1
                reps[w] = g
            for i in range(n):
                members = list(added)
                if arrival[v] != i:
                    members.append(f_v)
                # ==_i is an equivalence, so its classes are cliques
                blocks = {}
                for g in members:
                    blocks.setdefault(g[:i] + g[i + 1:], []).append(g)
                for block in blocks.values():
                    cliques[i].append(tuple(v if g == f_v else ids[g] for g in block))

    nodes = sorted(levels, key=lambda v: (levels[v] == -1, v))
    T = []
    for i in range(n):
        rel = {(v, v) for v in nodes}
        for clique in cliques[i]:
            rel.update(itertools.product(clique, repeat=2))
        T.append(rel)
    E = [
        [
            {v for v in nodes if (Diag(i, j) in labels[v].color if v in labels
                                  else reps[v][i] == reps[v][j])}
            for j in range(n)
        ]
        for i in range(n)
    ]
    valuation = tuple(
        frozenset(v for v in nodes if v in labels and Var(l) in labels[v].color)
        for l in range(p.m)
    )
    return WitnessStructure(
        tau=tau,
        params=p,
        base=AtomStructure(nodes, T, E),
        root=root,
        levels=levels,
        labels=labels,
        arrival=arrival,
        children=children,
        reps=reps,
        valuation=valuation,
        filtered={key: tuple(v) for key, v in filtered.items()},
    )


# -- the decision ----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SatCertificate:
    satisfiable: bool
    witness: WitnessStructure
    conditions: ConditionReport
    label_failures: tuple
    reason: str

    def __str__(self):
        return self.reason


def verify_witness(w: WitnessStructure, diagonal_c6: bool = False) -> SatCertificate:
    report = check_conditions(w.base, w.params.variant, diagonal_c6)
    pf = PointForms(w.base, w.valuation)
    failures = tuple(v for v in w.labeled_nodes if pf(v, w.labels[v].degree) is not w.labels[v])
    if not report.passed:
        first = report.violations[0]
        where = _node_name(w, first.witness[0]) if first.witness else "?"
        reason = f"unsatisfiable: {first.condition}/{AXIOM_OF[first.condition]} violation at {where}"
    elif failures:
        reason = f"unsatisfiable: {_node_name(w, failures[0])} does not realize its label"
    else:
        reason = "satisfiable"
    return SatCertificate(report.passed and not failures, w, report, failures, reason)


def _node_name(w, v):
    if v == w.root:
        return "root"
    if w.levels.get(v) == -1:
        return f"tuple node {v}"
    return f"node {v}"


def is_satisfiable(tau: NormalForm, p: Params, diagonal_c6: bool = False):
    """Decide whether tau is nonzero in the free algebra of p.variant.

    Returns ``(answer, certificate)``; the certificate carries the witness and
    the first failing condition or node.
    """
    cert = _decide(tau, p, diagonal_c6)
    return cert.satisfiable, cert


@functools.lru_cache(maxsize=4096)
def _decide(tau, p, diagonal_c6):
    return verify_witness(build_witness(tau, p), diagonal_c6)


# -- export ----------------------------------------------------------------

def witness_to_dict(w: WitnessStructure) -> dict:
    forms = {}

    def ref(f):
        key = forms.setdefault(f, f"F{len(forms)}")
        return key

    labels = {str(v): ref(f) for v, f in w.labels.items()}
    out = structure_to_dict(w.base)
    out.update(
        {
            "root": str(w.root),
            "levels": {str(v): l for v, l in w.levels.items()},
            "labels": labels,
            "reps": {str(v): list(t) for v, t in w.reps.items()},
            "valuation": valuation_to_dict(w.valuation),
            "forms": {key: form_to_dict(f) for f, key in forms.items()},
        }
    )
    return out


def witness_to_json(w: WitnessStructure) -> str:
    return json.dumps(witness_to_dict(w), indent=2)


def witness_to_dot(w: WitnessStructure) -> str:
    labels = {}
    for v in w.base.nodes:
        if v in w.labels:
            labels[v] = f"deg {w.labels[v].degree}"
        else:
            labels[v] = "(" + ",".join(w.reps[v]) + ")"
    return structure_to_dot(w.base, w.valuation, ranks=w.levels, labels=labels)
