"""Command-line interface.

Exit codes: 0 success, 1 usage or validation error, 2 budget exceeded,
3 a split failed verification.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import (
    BudgetExceeded,
    IndexBoundsError,
    PreconditionError,
    TermSyntaxError,
    VerificationFailure,
)
from .forms import DEFAULT_BUDGET, enumerate_degree0, form_from_dict, form_to_dict
from .frames import structure_to_dict, valuation_to_dict
from .oracle import SearchSpace, oracle_search
from .rewriter import decide_equation, rewrite
from .splitter import nonatomicity_report, result_certificate_dicts, split_atom
from .terms import Params, instantiate_axioms, parse_term
from .witness import is_satisfiable, witness_to_dict, witness_to_dot

EXIT_OK, EXIT_USAGE, EXIT_BUDGET, EXIT_VERIFY = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common(sub):
    sub.add_argument("--n", type=int, default=2, help="dimension (>= 2)")
    sub.add_argument("--m", type=int, default=1, help="number of free variables")
    sub.add_argument("--variant", type=str.upper, choices=["NCA", "WCA"], default="NCA")
    sub.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                     help="maximum number of enumerated forms (default 10^6)")
    sub.add_argument("--out", type=Path, help="write the main output here instead of stdout")


def build_parser():
    parser = _Parser(prog="cylindric", description=__doc__.splitlines()[0])
    subs = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = subs.add_parser("forms", help="enumerate the degree-0 normal forms")
    _common(p)

    for name, text in [("sat", "decide satisfiability of a form"),
                       ("witness", "build the witness structure of a form"),
                       ("split", "split a satisfiable form below t")]:
        p = subs.add_parser(name, help=text)
        _common(p)
        p.add_argument("--form", type=Path, required=True, help="form file (JSON)")
        p.add_argument("--dot", type=Path, help="write a Graphviz rendering here")

    p = subs.add_parser("rewrite", help="rewrite a term into a set of normal forms")
    _common(p)
    p.add_argument("term")

    p = subs.add_parser("decide", help="decide an equation between two terms")
    _common(p)
    p.add_argument("lhs")
    p.add_argument("rhs")

    p = subs.add_parser("report", help="split many forms below t and report")
    _common(p)
    p.add_argument("--degree-bound", type=int, default=0)
    p.add_argument("--sample-size", type=int, default=20)
    p.add_argument("--max-nodes", type=int, default=4, help="size of sampled structures")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--certs", type=Path, help="directory for per-form certificate files")

    p = subs.add_parser("axioms", help="list the instantiated axioms")
    _common(p)
    p.add_argument("--diagonal-c6", action="store_true", help="include C6 instances with i = j")

    p = subs.add_parser("oracle", help="search small structures for a model of a form")
    _common(p)
    p.add_argument("--form", type=Path, required=True)
    p.add_argument("--max-nodes", type=int, default=3)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--seed", type=int, default=0, help="unused; accepted for uniformity")
    return parser


def _emit(args, text):
    if args.out:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)


def _load_form(path, p):
    return form_from_dict(json.loads(Path(path).read_text()), p)


def _dumps(obj):
    return json.dumps(obj, indent=2) + "\n"


def cmd_forms(args, p):
    _emit(args, _dumps([form_to_dict(f) for f in enumerate_degree0(p, args.budget)]))


def cmd_sat(args, p):
    ok, cert = is_satisfiable(_load_form(args.form, p), p)
    if args.dot:
        args.dot.write_text(witness_to_dot(cert.witness))
    _emit(args, cert.reason + "\n")


def cmd_witness(args, p):
    ok, cert = is_satisfiable(_load_form(args.form, p), p)
    data = witness_to_dict(cert.witness)
    data["verdict"] = cert.reason
    if args.dot:
        args.dot.write_text(witness_to_dot(cert.witness))
    _emit(args, _dumps(data))


def cmd_rewrite(args, p):
    fs = rewrite(parse_term(args.term, p), p, args.budget)
    _emit(args, _dumps({"degree": fs.degree, "members": fs.to_list()}))


def cmd_decide(args, p):
    equal = decide_equation(parse_term(args.lhs, p), parse_term(args.rhs, p), p, args.budget)
    _emit(args, ("equal" if equal else "not equal") + "\n")


def cmd_split(args, p):
    r = split_atom(_load_form(args.form, p), p)
    if args.dot:
        from .frames import structure_to_dot
        args.dot.write_text(structure_to_dot(r.extension.structure, r.witness.valuation))
    out = {
        "tau": form_to_dict(r.tau),
        "sigma": form_to_dict(r.sigma),
        "gamma": form_to_dict(r.gamma),
        "checks": r.checks,
        "certificates": result_certificate_dicts(r),
        "valuation": valuation_to_dict(r.witness.valuation),
    }
    _emit(args, _dumps(out))


def cmd_report(args, p):
    report = nonatomicity_report(p, args.degree_bound, args.sample_size, args.seed,
                                 args.jobs, args.max_nodes)
    refs = {}
    if args.certs:
        args.certs.mkdir(parents=True, exist_ok=True)
        for k, e in enumerate(report.entries):
            if e.ok:
                path = args.certs / f"split_{k:04d}.json"
                path.write_text(_dumps(result_certificate_dicts(e.result)))
                refs[k] = str(path)
    _emit(args, _dumps(report.to_dict(refs)))
    if report.failures:
        for e in report.failures:
            print(f"failed: {e.tau!r}: {e.detail}", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def cmd_axioms(args, p):
    eqs = instantiate_axioms(p, diagonal_c6=args.diagonal_c6)
    _emit(args, "".join(f"{eq.name}: {eq}\n" for eq in eqs))


def cmd_oracle(args, p):
    f = _load_form(args.form, p)
    found = oracle_search([f], SearchSpace(p, args.max_nodes), jobs=args.jobs)[f]
    if found is None:
        _emit(args, f"no model within {args.max_nodes} nodes\n")
        return EXIT_OK
    data = structure_to_dict(found.structure)
    data["valuation"] = valuation_to_dict(found.valuation)
    data["node"] = str(found.node)
    print(f"satisfiable: model with {len(found.structure)} nodes", file=sys.stderr)
    _emit(args, _dumps(data))
    return EXIT_OK


COMMANDS = {
    "forms": cmd_forms,
    "sat": cmd_sat,
    "witness": cmd_witness,
    "rewrite": cmd_rewrite,
    "decide": cmd_decide,
    "split": cmd_split,
    "report": cmd_report,
    "axioms": cmd_axioms,
    "oracle": cmd_oracle,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # --help exits 0, bad usage exits 1
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        p = Params(args.n, args.m, args.variant)
        return COMMANDS[args.command](args, p) or EXIT_OK
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except VerificationFailure as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        for key, value in exc.diagnostics.items():
            print(f"  {key}: {value}", file=sys.stderr)
        return EXIT_VERIFY
    except (TermSyntaxError, IndexBoundsError, PreconditionError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
