import pytest

from cylindric.errors import PreconditionError
from cylindric.forms import NormalForm, diagonal_free, enumerate_degree0, leaf, reduce_degree
from cylindric.frames import PointForms, check_conditions
from cylindric.splitter import (
    build_chain,
    descend,
    extend_plus,
    nonatomicity_report,
    split_atom,
)
from cylindric.terms import NCA, WCA, Diag, Params, Var
from cylindric.witness import build_witness, is_satisfiable

D00, D01, D10, D11, X0 = Diag(0, 0), Diag(0, 1), Diag(1, 0), Diag(1, 1), Var(0)
A0 = leaf([D00, D11], 2)
B = leaf([D00, D01, D10, D11], 2)
P = Params(2, 1, NCA)


def test_degree0_example():
    r = split_atom(A0, P)
    assert r.sigma is NormalForm(1, [D00, D11], [[A0], [A0]])
    assert r.gamma is NormalForm(1, [D00, D11], [[A0, B], [A0]])
    # the c_0 d_01 bit separates them
    assert not any(D01 in g.color for g in r.sigma.subs[0])
    assert any(D01 in g.color for g in r.gamma.subs[0])
    assert all(r.checks.values())
    assert r.chain.nodes == (r.witness.root,)


def test_precondition_violations():
    with pytest.raises(PreconditionError):
        split_atom(leaf([D00, D01, D11], 2), P)
    with pytest.raises(PreconditionError):
        split_atom(leaf([D11], 2), P)


@pytest.mark.parametrize("variant", [NCA, WCA])
def test_every_degree0_form_below_t_splits(variant):
    p = Params(2, 1, variant)
    taus = [f for f in enumerate_degree0(p) if diagonal_free(f) and is_satisfiable(f, p)[0]]
    assert len(taus) == 2
    for tau in taus:
        r = split_atom(tau, p)
        assert r.sigma is not r.gamma
        assert r.sigma.degree == r.gamma.degree == 1
        assert reduce_degree(r.sigma, 0) is tau and reduce_degree(r.gamma, 0) is tau


@pytest.mark.parametrize("variant", [NCA, WCA])
def test_descent_to_depth_three(variant):
    p = Params(2, 1, variant)
    results = descend(leaf([D00, D11, X0], 2), p, 3)
    assert [r.tau.degree for r in results] == [0, 1, 2]
    for r in results:
        assert all(r.checks.values())
        assert r.sigma is not r.gamma


def test_chain_alternates_and_keeps_color():
    tau = descend(A0, P, 2)[-1].sigma
    w = build_witness(tau, P)
    chain = build_chain(w)
    assert len(chain.nodes) == tau.degree + 1
    assert len({f.color for f in chain.labels}) == 1
    for q in range(tau.degree):
        v, nxt = chain.nodes[q], chain.nodes[q + 1]
        assert w.arrival[nxt] == q % 2
        assert (v, nxt) in w.base.T[q % 2]


def test_extend_plus_attaches_in_one_direction():
    for tau in (A0, descend(A0, P, 1)[0].sigma):
        w = build_witness(tau, P)
        chain = build_chain(w)
        ext = extend_plus(w, chain)
        d = tau.degree % 2
        assert ext.direction == d
        v_k = chain.nodes[-1]
        new = set(ext.added)
        for i in range(2):
            linked = {b for a, b in ext.structure.T[i] if a == v_k} & new
            assert bool(linked) == (i == d)
        assert check_conditions(ext.structure, NCA).passed
        assert ext.point_tuple == ("f0", "f1")


def test_divergence_along_chain():
    r = descend(A0, P, 3)[-1]
    in_s = PointForms(r.witness.base, r.witness.valuation)
    in_plus = PointForms(r.extension.structure, r.witness.valuation)
    k = r.tau.degree
    for q, v in enumerate(r.chain.nodes):
        assert in_s(v, k - q + 1) is not in_plus(v, k - q + 1)


def test_n3_splits():
    for variant in (NCA, WCA):
        report = nonatomicity_report(Params(3, 1, variant), degree_bound=0)
        assert report.entries and not report.failures


def test_report_sampled():
    report = nonatomicity_report(P, degree_bound=1, sample_size=10, seed=3)
    assert report.verified == len(report.entries) == 12
    d = report.to_dict()
    assert d["verified"] == 12 and d["total"] == 12
    assert all("sigma" in e and "gamma" in e for e in d["entries"])
