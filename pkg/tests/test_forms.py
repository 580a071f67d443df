import pickle

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cylindric.errors import BudgetExceeded, DegreeMismatch
from cylindric.forms import (
    NormalForm,
    describe_form_count,
    disjoint,
    enumerate_degree0,
    enumerate_forms,
    form_count,
    form_from_dict,
    form_to_dict,
    form_to_term,
    leaf,
    reduce_degree,
    strip_variables,
    validate_form,
)
from cylindric.frames import PointForms
from cylindric.oracle import random_structure, random_valuation
from cylindric.terms import Cyl, Diag, Neg, Params, Var, to_text
from cylindric.witness import is_satisfiable

P = Params(2, 1)
D00, D01, D10, D11, X0 = Diag(0, 0), Diag(0, 1), Diag(1, 0), Diag(1, 1), Var(0)
A0 = leaf([D00, D11], 2)
A1 = leaf([D00, D11, X0], 2)


def test_interning():
    assert leaf([D00, D11], 2) is A0
    assert NormalForm(1, [D00], [[A0], []]) is NormalForm(1, {D00}, ([A0], ()))
    assert pickle.loads(pickle.dumps(A1)) is A1


def test_degree0_counts():
    assert len(enumerate_degree0(P)) == 32
    assert len(enumerate_degree0(Params(3, 1))) == 1024
    assert len(set(enumerate_degree0(P))) == 32


def test_degree0_budget():
    with pytest.raises(BudgetExceeded) as info:
        enumerate_degree0(Params(2, 30))
    assert info.value.size == "2^34"


def test_degree1_enumeration_small():
    # n=2, m=0: 2^4 colors times 2^(2*16) subs choices is far too many,
    # so check the count formula instead and enumerate a budget-sized case
    assert form_count(Params(2, 0), 1) == 2**4 * 2**32
    with pytest.raises(BudgetExceeded):
        enumerate_forms(Params(2, 0), 1)


def test_describe_counts():
    assert describe_form_count(P, 0) == "2^5"
    assert describe_form_count(P, 1) == "2^5·2^64"
    assert describe_form_count(P, 2) == "2^5·2^(2·2^5·2^64)"


def test_disjoint_examples():
    assert disjoint(leaf([D00], 2), leaf([D00, X0], 2))
    assert not disjoint(A0, A0)
    f = NormalForm(1, [D00, D11], [[A0], [A0]])
    g = NormalForm(1, [D00, D11], [[A0, A1], [A0]])
    assert disjoint(f, g)
    with pytest.raises(DegreeMismatch):
        disjoint(A0, f)


def test_reduce_degree_examples():
    f = NormalForm(1, [D00, D11], [[A0, A1], [A0]])
    assert reduce_degree(f, 1) is f
    assert reduce_degree(f, 0) is A0
    with pytest.raises(ValueError):
        reduce_degree(f, 2)
    with pytest.raises(ValueError):
        reduce_degree(f, -1)


def test_reduce_degree_matches_point_forms(rng):
    # reduce_degree(point_form(v, h), h') = point_form(v, h') on random frames
    for _ in range(60):
        s = random_structure(P, 4, rng)
        e = random_valuation(s, 1, rng)
        pf = PointForms(s, e)
        for v in s.nodes:
            top = pf(v, 3)
            for h in range(4):
                assert reduce_degree(top, h) is pf(v, h)
                assert reduce_degree(top, h).color == top.color


def test_reduce_degree_on_witness_nodes():
    tau = NormalForm(1, [D00, D11], [[A0, A1], [A0]])
    ok, cert = is_satisfiable(tau, P)
    assert ok
    w = cert.witness
    pf = PointForms(w.base, w.valuation)
    assert reduce_degree(tau, 0) is pf(w.root, 0)


def test_validate_form():
    assert all(validate_form(f, P) for f in enumerate_degree0(P))
    assert not validate_form(leaf([Var(5)], 2), P)
    assert not validate_form(leaf([Diag(0, 2)], 2), P)
    bad = NormalForm(1, [D00], [[NormalForm(1, [D00], [[], []])], []])
    assert not validate_form(bad, P)
    assert not validate_form(NormalForm(0, [D00], [[A0], []]), P)


def test_form_to_term():
    assert to_text(form_to_term(A0, P)) == "d 0 0 * - d 0 1 * - d 1 0 * d 1 1 * - x 0"
    f = NormalForm(1, [D00, D11], [[A0], [A0]])
    t = form_to_term(f, P)
    literals = []

    def flatten(u):
        if type(u).__name__ == "And":
            flatten(u.left)
            flatten(u.right)
        else:
            literals.append(u)

    flatten(t)
    cyl = [u for u in literals if isinstance(u, Cyl) or (isinstance(u, Neg) and isinstance(u.arg, Cyl))]
    assert len(literals) - len(cyl) == 5
    assert len(cyl) == 64
    assert sum(isinstance(u, Cyl) for u in cyl) == 2


def test_form_to_term_budget():
    f = NormalForm(2, [D00, D11], [[NormalForm(1, [D00, D11], [[A0], [A0]])], []])
    with pytest.raises(BudgetExceeded):
        form_to_term(f, P)


def test_strip_variables():
    f = NormalForm(1, [D00, X0], [[A1], [A0]])
    assert strip_variables(f) is NormalForm(1, [D00], [[A0], [A0]])


def _forms(max_degree):
    base = st.builds(
        lambda c: leaf(c, 2),
        st.sets(st.sampled_from([D00, D01, D10, D11, X0])),
    )
    if max_degree == 0:
        return base
    lower = _forms(max_degree - 1).filter(lambda f: f.degree == 0)
    return st.builds(
        lambda c, s0, s1: NormalForm(1, c, [s0, s1]),
        st.sets(st.sampled_from([D00, D01, D10, D11, X0])),
        st.sets(lower, max_size=3),
        st.sets(lower, max_size=3),
    )


@given(_forms(1))
@settings(max_examples=200)
def test_dict_round_trip(f):
    assert form_from_dict(form_to_dict(f), P) is f


@given(_forms(1))
def test_color_preserved(f):
    assert reduce_degree(f, 0).color == f.color


def test_form_from_dict_rejects_garbage():
    with pytest.raises(ValueError):
        form_from_dict({"degree": 0, "color": ["y_1"], "subs": [[], []]})
    with pytest.raises(ValueError):
        form_from_dict({"color": [], "subs": [[], []]})
    with pytest.raises(ValueError):
        form_from_dict({"degree": 0, "color": [], "subs": [[], [], []]}, P)


def test_c2_necessity(rng):
    # a satisfiable degree-(k+1) form lists its own reduct in every subs_i
    samples = 0
    for _ in range(200):
        s = random_structure(P, 3, rng)
        e = random_valuation(s, 1, rng)
        f = PointForms(s, e)(rng.choice(s.nodes), 1)
        if is_satisfiable(f, P)[0]:
            samples += 1
            assert all(reduce_degree(f, 0) in f.subs[i] for i in range(2))
    assert samples > 50
    f = NormalForm(1, [D00, D11], [[A0], [A1]])
    assert not is_satisfiable(f, P)[0]
