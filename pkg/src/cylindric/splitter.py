"""Splitting satisfiable forms below t = prod{-d_ij : i != j} into two disjoint ones.

Given tau of degree k, the witness S for tau contains a chain v_0 .. v_k
descending from the root through alternating directions 0, 1, 0, ...
Padding v_k with representation tuples over fresh points (in the one
direction v_k is free in) gives S_+.  The degree-(k+1) point forms of the
root in S and in S_+ are two distinct, hence disjoint, satisfiable forms
below tau.  Every result is model-checked before it is returned.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .errors import PreconditionError, VerificationFailure
from .forms import NormalForm, diagonal_free, enumerate_degree0, form_to_dict, reduce_degree
from .frames import AtomStructure, PointForms, check_conditions, structure_to_dict
from .oracle import random_structure, random_valuation
from .terms import Params
from .witness import WitnessStructure, is_satisfiable, rep_closure, verify_witness


@dataclass(frozen=True)
class Chain:
    nodes: tuple
    labels: tuple

    def direction(self, q: int) -> int:
        """Direction of the step from v_q to v_{q+1}."""
        return q % 2


@dataclass(frozen=True, eq=False)
class PlusExtension:
    structure: AtomStructure
    added: dict
    direction: int
    point_tuple: tuple


@dataclass(frozen=True, eq=False)
class SplitResult:
    tau: NormalForm
    sigma: NormalForm
    gamma: NormalForm
    witness: WitnessStructure
    extension: PlusExtension
    chain: Chain
    checks: dict = field(default_factory=dict)

    @property
    def certificates(self) -> dict:
        """Where each half is realized: (structure, node) under the witness valuation."""
        return {
            "sigma": (self.witness.base, self.witness.root),
            "gamma": (self.extension.structure, self.witness.root),
        }


def build_chain(w: WitnessStructure) -> Chain:
    tau = w.tau
    if not diagonal_free(tau):
        raise PreconditionError("form is not below t: some d_ij with i != j is positive")
    if not verify_witness(w).satisfiable:
        raise PreconditionError("form is unsatisfiable; there is nothing to split")
    k = tau.degree
    nodes = [w.root]
    for q in range(k):
        v = nodes[-1]
        target = reduce_degree(w.labels[v], k - q - 1)
        step = [c for c in w.children.get((v, q % 2), ()) if w.labels[c] is target]
        if not step:
            raise VerificationFailure(
                f"no direction-{q % 2} child of chain node {v} carries {target!r}",
                {"node": v, "target": target},
            )
        nodes.append(step[0])
    return Chain(tuple(nodes), tuple(w.labels[v] for v in nodes))


def extend_plus(w: WitnessStructure, chain: Chain) -> PlusExtension:
    """S_+: S plus the closure of the point tuple f = (f0, .., f_{n-1}) identified with v_k.

    The closure is seeded with f and with f whose d-th entry is replaced by
    the (1-d)-th, where d = k mod 2.  v_k joins the new part in direction d
    only; in every other direction the new tuples are linked among
    themselves.  New nodes satisfy no variable.
    """
    n = w.params.n
    k = len(chain.nodes) - 1
    d = k % 2
    f = tuple(f"f{i}" for i in range(n))
    seed = f[:d] + (f[1 - d],) + f[d + 1:]
    added_tuples = sorted(rep_closure([f, seed]) - {f})
    v_k = chain.nodes[-1]
    start = max(w.base.nodes) + 1
    ids = {g: start + t for t, g in enumerate(added_tuples)}
    nodes = w.base.nodes + tuple(ids.values())

    T = [set(rel) for rel in w.base.T]
    for i in range(n):
        members = added_tuples + ([f] if i == d else [])
        blocks = {}
        for g in members:
            blocks.setdefault(g[:i] + g[i + 1:], []).append(v_k if g == f else ids[g])
        for block in blocks.values():
            T[i].update((a, b) for a in block for b in block)
        T[i].update((v, v) for v in ids.values())
    E = [
        [set(w.base.E[i][j]) | {ids[g] for g in added_tuples if g[i] == g[j]} for j in range(n)]
        for i in range(n)
    ]
    structure = AtomStructure(nodes, T, E)
    return PlusExtension(structure, {ids[g]: g for g in added_tuples}, d, f)


def split_atom(tau: NormalForm, p: Params) -> SplitResult:
    """Two distinct satisfiable degree-(k+1) forms below tau, verified.

    Raises PreconditionError when tau is not a satisfiable form below t and
    VerificationFailure (with per-check diagnostics) when any property of
    the result fails to check out.
    """
    if not diagonal_free(tau):
        raise PreconditionError("form is not below t: some d_ij with i != j is positive")
    sat, cert = is_satisfiable(tau, p)
    if not sat:
        raise PreconditionError(f"form is unsatisfiable ({cert.reason})")
    w = cert.witness
    chain = build_chain(w)
    ext = extend_plus(w, chain)
    k = tau.degree

    in_s = PointForms(w.base, w.valuation)
    in_plus = PointForms(ext.structure, w.valuation)
    sigma = in_s(w.root, k + 1)
    gamma = in_plus(w.root, k + 1)

    plus_report = check_conditions(ext.structure, p.variant)
    checks = {
        "distinct": sigma is not gamma,
        "sigma_below_tau": reduce_degree(sigma, k) is tau,
        "gamma_below_tau": reduce_degree(gamma, k) is tau,
        "S_conditions": cert.conditions.passed,
        "S_plus_conditions": plus_report.passed,
        "labels_kept_in_S_plus": all(
            in_plus(v, w.labels[v].degree) is w.labels[v] for v in w.labeled_nodes
        ),
        "chain_diverges": all(
            in_s(v, k - q + 1) is not in_plus(v, k - q + 1) for q, v in enumerate(chain.nodes)
        ),
        "sigma_decided_satisfiable": is_satisfiable(sigma, p)[0],
        "gamma_decided_satisfiable": is_satisfiable(gamma, p)[0],
    }
    if not all(checks.values()):
        failed = [name for name, ok in checks.items() if not ok]
        raise VerificationFailure(
            f"split of {tau!r} failed: {', '.join(failed)}",
            {
                "checks": checks,
                "tau": tau,
                "sigma": sigma,
                "gamma": gamma,
                "S_plus_violations": [str(v) for v in plus_report.violations],
            },
        )
    return SplitResult(tau, sigma, gamma, w, ext, chain, checks)


def descend(tau: NormalForm, p: Params, depth: int) -> list:
    """Split tau, then its sigma half, and so on ``depth`` times."""
    results = []
    for _ in range(depth):
        result = split_atom(tau, p)
        results.append(result)
        tau = result.sigma
    return results


# -- aggregate demonstration ----------------------------------------------

def sample_forms_below_t(p: Params, degree: int, count: int, rng: random.Random,
                         max_nodes: int = 4, max_tries: int = 20_000) -> list:
    """Distinct diagonal-free degree-``degree`` forms realized in random structures."""
    seen = {}
    for _ in range(max_tries):
        if len(seen) >= count:
            break
        st = random_structure(p, max_nodes, rng)
        e = random_valuation(st, p.m, rng)
        pf = PointForms(st, e)
        v = rng.choice(st.nodes)
        f = pf(v, degree)
        if diagonal_free(f):
            seen.setdefault(f, None)
    return list(seen)


@dataclass(frozen=True)
class ReportEntry:
    tau: NormalForm
    ok: bool
    sigma: NormalForm | None = None
    gamma: NormalForm | None = None
    detail: str = ""
    result: SplitResult | None = None


@dataclass(frozen=True)
class NonatomicityReport:
    params: Params
    entries: tuple

    @property
    def verified(self) -> int:
        return sum(e.ok for e in self.entries)

    @property
    def failures(self) -> tuple:
        return tuple(e for e in self.entries if not e.ok)

    def to_dict(self, cert_refs=None) -> dict:
        out = []
        for k, e in enumerate(self.entries):
            item = {"tau": form_to_dict(e.tau), "verified": e.ok}
            if e.ok:
                item["sigma"] = form_to_dict(e.sigma)
                item["gamma"] = form_to_dict(e.gamma)
            else:
                item["failure"] = e.detail
            if cert_refs and k in cert_refs:
                item["certificates"] = cert_refs[k]
            out.append(item)
        return {
            "n": self.params.n,
            "m": self.params.m,
            "variant": self.params.variant,
            "verified": self.verified,
            "total": len(self.entries),
            "entries": out,
        }


def _attempt(args):
    tau, p = args
    try:
        r = split_atom(tau, p)
    except (PreconditionError, VerificationFailure) as exc:
        return ReportEntry(tau, False, detail=f"{type(exc).__name__}: {exc}")
    return ReportEntry(tau, True, r.sigma, r.gamma, result=r)


def nonatomicity_report(p: Params, degree_bound: int = 0, sample_size: int = 20,
                        seed: int = 0, jobs: int = 1, max_nodes: int = 4) -> NonatomicityReport:
    """Split every satisfiable degree-0 form below t and ``sample_size``
    sampled ones of each degree 1..degree_bound; failures are kept verbatim."""
    rng = random.Random(seed)
    forms = [f for f in enumerate_degree0(p) if diagonal_free(f) and is_satisfiable(f, p)[0]]
    for degree in range(1, degree_bound + 1):
        forms += sample_forms_below_t(p, degree, sample_size, rng, max_nodes)
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            entries = list(pool.map(_attempt, [(f, p) for f in forms]))
    else:
        entries = [_attempt((f, p)) for f in forms]
    return NonatomicityReport(p, tuple(entries))


def result_certificate_dicts(r: SplitResult) -> dict:
    return {
        "sigma": {"structure": structure_to_dict(r.witness.base), "node": str(r.witness.root)},
        "gamma": {"structure": structure_to_dict(r.extension.structure), "node": str(r.witness.root)},
    }
