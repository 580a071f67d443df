"""Brute-force ground truth over small atom structures.

Nothing here consults the witness construction: structures are enumerated
blindly (T_i as set partitions, E_ij as subsets, E_ii = S) and filtered by
the frame conditions, and forms are checked by reading point forms off
every node under every valuation.
"""

from __future__ import annotations

import itertools
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .errors import BudgetExceeded
from .forms import NormalForm, strip_variables
from .frames import (
    AtomStructure,
    FiniteAlgebra,
    PointForms,
    conditions_hold,
    find_assignment_refuting,
)
from .terms import And, Cyl, Diag, Equation, Neg, One, Or, Params, Var, Zero, commutativity_instances

DEFAULT_STEP_BUDGET = 5 * 10**6


class StepBudgetExceeded(BudgetExceeded):
    def __init__(self, message, steps, reached_size):
        super().__init__(message, size=str(steps))
        self.steps = steps
        self.reached_size = reached_size


@dataclass(frozen=True)
class SearchSpace:
    p: Params
    max_nodes: int
    step_budget: int = DEFAULT_STEP_BUDGET
    diagonal_c6: bool = False


@dataclass(frozen=True)
class Realization:
    structure: AtomStructure
    valuation: tuple
    node: object


# -- enumeration -----------------------------------------------------------

def set_partitions(s: int):
    """All partitions of range(s) as tuples of blocks (restricted growth order)."""
    if s == 0:
        yield ()
        return

    def grow(k, blocks):
        if k == s:
            yield tuple(tuple(b) for b in blocks)
            return
        for b in blocks:
            b.append(k)
            yield from grow(k + 1, blocks)
            b.pop()
        blocks.append([k])
        yield from grow(k + 1, blocks)
        blocks.pop()

    yield from grow(0, [])


def _integer_partitions(s, largest=None):
    if s == 0:
        yield ()
        return
    largest = s if largest is None else largest
    for first in range(min(s, largest), 0, -1):
        for rest in _integer_partitions(s - first, first):
            yield (first, *rest)


def canonical_partitions(s: int):
    """One partition of range(s) per block-size multiset, blocks contiguous.

    Every structure is isomorphic to one whose T_0 has this shape.
    """
    for sizes in _integer_partitions(s):
        blocks, start = [], 0
        for size in sizes:
            blocks.append(tuple(range(start, start + size)))
            start += size
        yield tuple(blocks)


def _pairs(blocks):
    return frozenset(pair for b in blocks for pair in itertools.product(b, repeat=2))


def _sparse_subsets(blocks):
    # subsets meeting each block at most once; AS5 admits nothing else
    return [
        frozenset(x for x in choice if x is not None)
        for choice in itertools.product(*[(None, *b) for b in blocks])
    ]


def enumerate_structures(sp: SearchSpace, shard=None):
    """Every AS-valid structure with at most sp.max_nodes nodes, up to renaming.

    Duplicates up to isomorphism may occur; none are missing.  ``shard`` is
    an optional (index, count) pair selecting every count-th T_0 shape.
    """
    p = sp.p
    n = p.n
    steps = 0
    shape = 0
    for s in range(1, sp.max_nodes + 1):
        nodes = tuple(range(s))
        full = frozenset(nodes)
        partitions = [(blocks, _pairs(blocks), _sparse_subsets(blocks)) for blocks in set_partitions(s)]
        for b0 in canonical_partitions(s):
            shape += 1
            if shard is not None and (shape - 1) % shard[1] != shard[0]:
                continue
            first = (b0, _pairs(b0), _sparse_subsets(b0))
            for rest in itertools.product(partitions, repeat=n - 1):
                parts = (first, *rest)
                T = [part[1] for part in parts]
                off = [(i, j) for i in range(n) for j in range(n) if i != j]
                for cells in itertools.product(*[parts[i][2] for i, _ in off]):
                    steps += 1
                    if steps > sp.step_budget:
                        raise StepBudgetExceeded(
                            f"structure search stopped after {sp.step_budget} candidates "
                            f"while enumerating {s}-node structures",
                            steps - 1,
                            s,
                        )
                    E = [[full] * n for _ in range(n)]
                    for (i, j), cell in zip(off, cells):
                        E[i][j] = cell
                    st = AtomStructure(nodes, T, E)
                    if conditions_hold(st, p.variant, sp.diagonal_c6):
                        yield st


def count_structures(sp: SearchSpace) -> int:
    return sum(1 for _ in enumerate_structures(sp))


# -- satisfiability --------------------------------------------------------

def _valuations(nodes, m):
    subsets = [
        frozenset(v for b, v in enumerate(nodes) if mask >> b & 1) for mask in range(1 << len(nodes))
    ]
    return itertools.product(subsets, repeat=m)


def _search(forms, sp, shard=None):
    found = {f: None for f in forms}
    todo = {f: strip_variables(f) for f in forms}
    for st in enumerate_structures(sp, shard):
        bare = PointForms(st, ())
        present = {}
        wanted = {}
        for f, skeleton in todo.items():
            if f.degree not in present:
                present[f.degree] = {bare(v, f.degree) for v in st.nodes}
            if skeleton in present[f.degree]:
                wanted[f] = f.degree
        if not wanted:
            continue
        for e in _valuations(st.nodes, sp.p.m):
            pf = PointForms(st, e)
            for f in list(wanted):
                for v in st.nodes:
                    if pf(v, f.degree) is f:
                        found[f] = Realization(st, e, v)
                        del wanted[f]
                        del todo[f]
                        break
            if not wanted:
                break
        if not todo:
            break
    return found


def _search_shard(args):
    forms, sp, shard = args
    return _search(forms, sp, shard)


def oracle_search(forms, sp: SearchSpace, jobs: int = 1) -> dict:
    """Map each form to a Realization found within the bound, or None."""
    forms = list(dict.fromkeys(forms))
    if jobs <= 1:
        return _search(forms, sp)
    with ProcessPoolExecutor(jobs) as pool:
        parts = list(pool.map(_search_shard, [(forms, sp, (k, jobs)) for k in range(jobs)]))
    return {f: next((r[f] for r in parts if r[f] is not None), None) for f in forms}


def oracle_satisfiable(f: NormalForm, sp: SearchSpace) -> bool:
    """True iff some structure within the bound realizes f.

    False only means "not within sp.max_nodes nodes".
    """
    return oracle_search([f], sp)[f] is not None


def find_counterexample(eq: Equation, sp: SearchSpace):
    """(structure, assignment) on which eq fails, or None within the bound."""
    for st in enumerate_structures(sp):
        refuting = find_assignment_refuting(FiniteAlgebra(st), eq)
        if refuting is not None:
            return st, refuting
    return None


def noncommutativity_certificate(p: Params, max_nodes: int = 3):
    """A structure of p.variant where c_0 c_1 x = c_1 c_0 x fails, or None."""
    eq = commutativity_instances(p)[0]
    return find_counterexample(eq, SearchSpace(p, max_nodes))


# -- random sampling -------------------------------------------------------

def _random_partition(nodes, rng):
    labels = [rng.randrange(len(nodes)) for _ in nodes]
    blocks = {}
    for v, c in zip(nodes, labels):
        blocks.setdefault(c, []).append(v)
    return list(blocks.values())


def random_structure(p: Params, max_nodes: int, rng: random.Random, diagonal_c6=False,
                     tries: int = 100_000) -> AtomStructure:
    """A random AS-valid structure of p.variant (rejection sampling)."""
    for _ in range(tries):
        s = rng.randint(1, max_nodes)
        nodes = tuple(range(s))
        parts = [_random_partition(nodes, rng) for _ in range(p.n)]
        T = [_pairs(b) for b in parts]
        E = [[frozenset(nodes)] * p.n for _ in range(p.n)]
        for i in range(p.n):
            for j in range(p.n):
                if i != j:
                    E[i][j] = frozenset(
                        rng.choice(b) for b in parts[i] if rng.random() < 0.4
                    )
        st = AtomStructure(nodes, T, E)
        if conditions_hold(st, p.variant, diagonal_c6):
            return st
    raise RuntimeError(f"no valid structure found in {tries} tries")


def random_candidate_structure(n: int, max_nodes: int, rng: random.Random) -> AtomStructure:
    """A random structure biased toward, but not restricted to, the valid ones."""
    s = rng.randint(1, max_nodes)
    nodes = tuple(range(s))
    T = []
    for _ in range(n):
        rel = set(_pairs(_random_partition(nodes, rng)))
        if rng.random() < 0.3:
            pair = (rng.choice(nodes), rng.choice(nodes))
            rel.symmetric_difference_update({pair})
        T.append(rel)
    E = []
    for i in range(n):
        row = []
        for j in range(n):
            if i == j and rng.random() < 0.85:
                row.append(frozenset(nodes))
            elif rng.random() < 0.5:
                row.append(frozenset())
            else:
                row.append(frozenset(v for v in nodes if rng.random() < 0.4))
        E.append(row)
    return AtomStructure(nodes, T, E)


def random_valuation(st: AtomStructure, m: int, rng: random.Random) -> tuple:
    return tuple(frozenset(v for v in st.nodes if rng.random() < 0.5) for _ in range(m))


# -- truth tables ----------------------------------------------------------

def boolean_value(t, assignment) -> bool:
    """Value of a cylindrification-free term when each generator is an
    independent Boolean given by ``assignment`` (generator -> bool)."""
    if isinstance(t, (Diag, Var)):
        return assignment[t]
    if isinstance(t, And):
        return boolean_value(t.left, assignment) and boolean_value(t.right, assignment)
    if isinstance(t, Or):
        return boolean_value(t.left, assignment) or boolean_value(t.right, assignment)
    if isinstance(t, Neg):
        return not boolean_value(t.arg, assignment)
    if isinstance(t, One):
        return True
    if isinstance(t, Zero):
        return False
    if isinstance(t, Cyl):
        raise ValueError("truth tables only cover cylindrification-free terms")
    raise TypeError(f"not a term: {t!r}")
