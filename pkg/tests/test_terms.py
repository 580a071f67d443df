import pytest
from hypothesis import given, settings

from cylindric.errors import IndexBoundsError, TermSyntaxError
from cylindric.terms import (
    NCA,
    WCA,
    And,
    Cyl,
    Diag,
    Equation,
    Neg,
    Or,
    Params,
    Var,
    commutativity_instances,
    depth,
    diagonal_c6_instances,
    instantiate_axioms,
    parse_term,
    to_text,
)

from conftest import term_strategy


def test_parse_examples():
    p = Params(2, 1)
    assert parse_term("d 0 1 * - x 0", p) == And(Diag(0, 1), Neg(Var(0)))
    assert parse_term("c 0 ( x 0 + d 0 0 )") == Cyl(0, Or(Var(0), Diag(0, 0)))


def test_parse_index_out_of_bounds():
    with pytest.raises(IndexBoundsError):
        parse_term("c 2 ( x 0 )", Params(2, 1))
    with pytest.raises(IndexBoundsError):
        parse_term("x 1", Params(2, 1))


@pytest.mark.parametrize("text", ["c 0 x 0 )", "d 0", "x 0 +", "( x 0", "q 1", ""])
def test_parse_syntax_errors(text):
    with pytest.raises(TermSyntaxError):
        parse_term(text)


def test_precedence():
    # * binds tighter than +, - tighter than both
    assert parse_term("x 0 + x 1 * x 2") == Or(Var(0), And(Var(1), Var(2)))
    assert parse_term("- x 0 * x 1") == And(Neg(Var(0)), Var(1))


@given(term_strategy(3, 2, 3))
@settings(max_examples=300)
def test_print_parse_round_trip(t):
    assert parse_term(to_text(t)) == t


def test_depth_examples():
    assert depth(Var(0)) == 0
    assert depth(Cyl(0, And(Var(0), Cyl(1, Var(0))))) == 2
    assert depth(And(Cyl(0, Var(0)), Diag(0, 1))) == 1


@given(term_strategy(2, 1, 2), term_strategy(2, 1, 2))
def test_depth_structure(a, b):
    assert depth(And(a, b)) == max(depth(a), depth(b))
    assert depth(Or(a, b)) == max(depth(a), depth(b))
    assert depth(Neg(a)) == depth(a)
    assert depth(Cyl(1, a)) == depth(a) + 1


def test_params_validation():
    with pytest.raises(ValueError):
        Params(1, 0)
    with pytest.raises(ValueError):
        Params(2, -1)
    with pytest.raises(ValueError):
        Params(2, 0, "CA")
    assert Params(2, 0, "wca").variant == WCA


def _family(eqs, schema):
    return [eq for eq in eqs if eq.schema == schema]


def test_c6_empty_at_n2():
    eqs = instantiate_axioms(Params(2, 0, NCA))
    assert _family(eqs, "C6") == []


def test_diagonal_c6_instances_at_n2():
    p = Params(2, 0, NCA)
    got = {(eq.lhs, eq.rhs) for eq in diagonal_c6_instances(p)}
    assert got == {
        (Diag(0, 0), Cyl(1, And(Diag(0, 1), Diag(1, 0)))),
        (Diag(1, 1), Cyl(0, And(Diag(1, 0), Diag(0, 1)))),
    }
    with_flag = instantiate_axioms(p, diagonal_c6=True)
    assert len(_family(with_flag, "C6")) == 2


def test_c7_at_n2():
    x = Var(0)
    c7 = _family(instantiate_axioms(Params(2, 0)), "C7")
    assert [eq.indices for eq in c7] == [(0, 1), (1, 0)]
    assert c7[0].lhs == And(Cyl(0, And(Diag(0, 1), x)), Cyl(0, And(Diag(0, 1), Neg(x))))


def test_wc6_at_n3():
    wc6 = _family(instantiate_axioms(Params(3, 0, WCA)), "WC6")
    # three equations per (i, j, k) with i != j and k outside {i, j}
    assert len(wc6) == 3 * 6
    by_index = {}
    for eq in wc6:
        by_index.setdefault(eq.indices, []).append(eq)
    eqs = by_index[(0, 1, 2)]
    assert str(eqs[1]) == "d 0 1 = d 1 0"
    assert str(eqs[2]) == "d 1 0 = c 2 ( d 1 0 )"
    assert eqs[0].lhs == And(And(Diag(0, 2), Diag(2, 1)), Diag(0, 1))


def test_c6_at_n3():
    c6 = _family(instantiate_axioms(Params(3, 0, NCA)), "C6")
    assert len(c6) == 6
    assert Equation(Diag(0, 1), Cyl(2, And(Diag(0, 2), Diag(2, 1))), "C6", (0, 1, 2)) in c6


@pytest.mark.parametrize("n", [2, 3])
def test_variants_differ_only_in_c6(n):
    nca = {(eq.schema, eq.indices, eq.lhs, eq.rhs) for eq in instantiate_axioms(Params(n, 0, NCA))}
    wca = {(eq.schema, eq.indices, eq.lhs, eq.rhs) for eq in instantiate_axioms(Params(n, 0, WCA))}
    assert {e[0] for e in nca ^ wca} <= {"C6", "WC6"}


def test_no_commutativity_in_axioms():
    p = Params(3, 0)
    assert not _family(instantiate_axioms(p), "C4")
    assert len(commutativity_instances(p)) == 3
