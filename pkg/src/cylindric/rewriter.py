"""Rewriting terms into sums of normal forms, and the equational decision procedure."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DegreeMismatch
from .forms import DEFAULT_BUDGET, NormalForm, enumerate_forms, form_to_dict, form_from_dict
from .terms import And, Cyl, Diag, Neg, One, Or, Params, Term, Var, Zero, check_term, depth
from .witness import is_satisfiable


@dataclass(frozen=True)
class FormSet:
    degree: int
    members: frozenset

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(self.members))
        for f in self.members:
            if f.degree != self.degree:
                raise DegreeMismatch(
                    f"form of degree {f.degree} in a FormSet of degree {self.degree}"
                )

    @classmethod
    def of(cls, forms):
        """FormSet from an iterable of forms; all of them must share one degree."""
        forms = list(forms)
        degrees = {f.degree for f in forms}
        if len(degrees) > 1:
            raise DegreeMismatch(f"mixed degrees {sorted(degrees)} in one form set")
        return cls(degrees.pop() if degrees else 0, forms)

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(sorted(self.members))

    def __contains__(self, f):
        return f in self.members

    def to_list(self):
        return [form_to_dict(f) for f in self]

    @classmethod
    def from_list(cls, records, p=None):
        return cls.of(form_from_dict(r, p) for r in records)


def eval_on_form(t: Term, f: NormalForm) -> bool:
    """Whether f <= t holds in every BAO of type cyl_n (needs depth(t) <= degree(f))."""
    if depth(t) > f.degree:
        raise DegreeMismatch(f"term of depth {depth(t)} cannot be decided by a degree-{f.degree} form")
    return _eval(t, f)


def _eval(t, f):
    if isinstance(t, (Diag, Var)):
        return t in f.color
    if isinstance(t, And):
        return _eval(t.left, f) and _eval(t.right, f)
    if isinstance(t, Or):
        return _eval(t.left, f) or _eval(t.right, f)
    if isinstance(t, Neg):
        return not _eval(t.arg, f)
    if isinstance(t, Cyl):
        # f fixes the sign of c_i(sigma) for every sigma one degree down,
        # and the arg is a sum of such sigmas
        return any(_eval(t.arg, g) for g in f.subs[t.i])
    if isinstance(t, One):
        return True
    if isinstance(t, Zero):
        return False
    raise TypeError(f"not a term: {t!r}")


def rewrite(t: Term, p: Params, budget: int = DEFAULT_BUDGET) -> FormSet:
    """The forms of degree depth(t) whose sum equals t."""
    check_term(t, p)
    q = depth(t)
    forms = enumerate_forms(p, q, budget)
    return FormSet(q, [f for f in forms if _eval(t, f)])


def decide_zero(t, p: Params, budget: int = DEFAULT_BUDGET) -> bool:
    """True iff t = 0 holds in p.variant; t is a Term or a FormSet."""
    forms = rewrite(t, p, budget) if isinstance(t, Term) else t
    if not isinstance(forms, FormSet):
        forms = FormSet.of(forms)
    return not any(is_satisfiable(f, p)[0] for f in forms)


def symmetric_difference(t1: Term, t2: Term) -> Term:
    return Or(And(t1, Neg(t2)), And(Neg(t1), t2))


def decide_equation(t1: Term, t2: Term, p: Params, budget: int = DEFAULT_BUDGET) -> bool:
    """True iff t1 = t2 holds in p.variant."""
    return decide_zero(symmetric_difference(t1, t2), p, budget)

