"""Command-line interface.

Exit codes follow one convention everywhere: 0 for success / accept /
true, 1 for reject / false / failed checks, 2 for parse or validation
errors (with a machine-readable error list under --format json).
"""

from __future__ import annotations

import argparse
import json
import sys

from .atoms import Support, SymmetryId, atom_from_json, fresh_atoms, support_to_json
from .automata import (
    automaton_from_json,
    reachable_orbits,
    run,
    validate,
)
from .binding import (
    alpha_eq_terms,
    from_debruijn,
    named_to_json,
    parse_debruijn,
    parse_named,
    show_debruijn,
    show_named,
    to_debruijn,
    debruijn_to_json,
    TermSyntaxError,
)
from .checks import run_all
from .freenom import ext_elem_from_json
from .presentations import (
    AtomPool,
    PoolError,
    default_pool,
    element_count,
    orbit_count,
    presentation_from_json,
    quot_eq,
    supp_of,
)


class CliError(Exception):
    def __init__(self, errors):
        self.errors = errors if isinstance(errors, list) else [str(errors)]
        super().__init__("; ".join(self.errors))


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError([f"{path}: {exc}"])


def _load_word(path: str, sym: SymmetryId) -> list:
    try:
        with open(path) as fh:
            lines = [ln.strip() for ln in fh if ln.strip()]
        return [atom_from_json(ln, sym) for ln in lines]
    except (OSError, ValueError) as exc:
        raise CliError([f"{path}: {exc}"])


def _emit(args, text: str, payload: dict):
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def _pool_of_size(sym: SymmetryId, n: int) -> Support:
    return Support.of(fresh_atoms(sym, Support(), n))


def _cmd_validate(args) -> int:
    ra = automaton_from_json(_load_json(args.automaton))
    report = validate(ra)
    if report.ok:
        _emit(args, "ok", {"command": "validate", "ok": True, "errors": []})
        return 0
    _emit(
        args,
        "\n".join(report.errors),
        {"command": "validate", "ok": False, "errors": list(report.errors)},
    )
    return 2


def _cmd_run(args) -> int:
    ra = automaton_from_json(_load_json(args.automaton))
    report = validate(ra)
    if not report.ok:
        raise CliError(list(report.errors))
    word = _load_word(args.word, ra.sym)
    accepted = run(ra, word)
    _emit(
        args,
        "accept" if accepted else "reject",
        {"command": "run", "accept": accepted, "word": [str(a) for a in word]},
    )
    return 0 if accepted else 1


def _cmd_orbits(args) -> int:
    ra = automaton_from_json(_load_json(args.automaton))
    report = validate(ra)
    if not report.ok:
        raise CliError(list(report.errors))
    default_n = max((len(s) for _, s in ra.locations.items), default=0) + 2
    n = max(args.pool or 0, default_n)
    summary = reachable_orbits(ra, _pool_of_size(ra.sym, n), args.depth)
    text = ", ".join(f"{loc}: {k}" for loc, k in summary.per_location)
    _emit(
        args,
        f"{text} (total {summary.total}, {summary.configs_seen} configurations)",
        {
            "command": "orbits",
            "per_location": summary.as_dict(),
            "total": summary.total,
            "configurations": summary.configs_seen,
            "pool_size": n,
            "depth": args.depth,
        },
    )
    return 0


def _parse_term(src: str):
    try:
        return parse_named(src)
    except TermSyntaxError as exc:
        raise CliError([f"term {src!r}: {exc}"])


def _cmd_lambda(args) -> int:
    if args.lambda_op == "to-db":
        t = _parse_term(args.term)
        db = to_debruijn(t)
        _emit(args, show_debruijn(db), {"command": "lambda.to-db", "term": debruijn_to_json(db)})
        return 0
    if args.lambda_op == "from-db":
        try:
            db = parse_debruijn(args.term)
        except TermSyntaxError as exc:
            raise CliError([f"term {args.term!r}: {exc}"])
        t = from_debruijn(db)
        _emit(args, show_named(t), {"command": "lambda.from-db", "term": named_to_json(t)})
        return 0
    t1, t2 = _parse_term(args.term), _parse_term(args.term2)
    equal = alpha_eq_terms(t1, t2)
    _emit(
        args,
        "alpha-equivalent" if equal else "not alpha-equivalent",
        {"command": "lambda.alpha-eq", "alpha_equivalent": equal},
    )
    return 0 if equal else 1


def _quot_pool(P, reps, requested: int) -> AtomPool:
    pool = default_pool(P, reps)
    atoms = pool.atoms
    while len(atoms) < (requested or 0):
        atoms = atoms.union(Support.of(fresh_atoms(P.sym, atoms, 1)))
    return AtomPool(atoms)


def _cmd_quot(args) -> int:
    P = presentation_from_json(_load_json(args.presentation))
    try:
        if args.quot_op == "count":
            n = args.pool or len(default_pool(P))
            value = element_count(P, AtomPool(_pool_of_size(P.sym, n)))
            _emit(args, str(value), {"command": "quot.count", "count": value, "pool_size": n})
            return 0
        if args.quot_op == "orbits":
            n = args.pool or len(default_pool(P))
            value = orbit_count(P, AtomPool(_pool_of_size(P.sym, n)))
            _emit(args, str(value), {"command": "quot.orbits", "orbits": value, "pool_size": n})
            return 0
        if args.quot_op == "supp":
            e = ext_elem_from_json(json.loads(args.elem), P.sym)
            pool = _quot_pool(P, [e], args.pool)
            s = supp_of(P, e, pool)
            _emit(
                args,
                " ".join(str(a) for a in s) if len(s) else "(empty)",
                {"command": "quot.supp", "support": support_to_json(s)},
            )
            return 0
        e1 = ext_elem_from_json(json.loads(args.elem), P.sym)
        e2 = ext_elem_from_json(json.loads(args.elem2), P.sym)
        pool = _quot_pool(P, [e1, e2], args.pool)
        equal = quot_eq(P, e1, e2, pool)
        _emit(
            args,
            "equal" if equal else "distinct",
            {"command": "quot.eq", "equal": equal, "pool_size": len(pool)},
        )
        return 0 if equal else 1
    except (PoolError, ValueError, KeyError, json.JSONDecodeError) as exc:
        raise CliError([str(exc)])


def _cmd_selfcheck(args) -> int:
    report = run_all(seed=args.seed, budget=args.budget)
    if args.format == "json":
        print(json.dumps(report.to_json(), sort_keys=True))
    else:
        print(report.to_text())
    return 0 if report.ok else 1


def _shared_options(defaults: bool) -> argparse.ArgumentParser:
    # The shared options may appear before or after the subcommand.  The
    # subcommand copies carry a SUPPRESS default so they never clobber a
    # value given up front; real defaults live on the top-level copy only.
    p = argparse.ArgumentParser(add_help=False)
    sup = argparse.SUPPRESS
    p.add_argument("--format", choices=("text", "json"),
                   default="text" if defaults else sup)
    p.add_argument("--seed", type=int, default=0 if defaults else sup)
    p.add_argument("--pool", type=int, default=None if defaults else sup,
                   help="atom pool size override")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _shared_options(defaults=False)
    parser = argparse.ArgumentParser(
        prog="suppsets",
        description="Supported sets, quotient presentations, binding, and register automata.",
        parents=[_shared_options(defaults=True)],
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common],
                       help="check a register automaton's coherence conditions")
    p.add_argument("automaton")
    p.set_defaults(fn=_cmd_validate)

    p = sub.add_parser("run", parents=[common], help="run a register automaton on a data word")
    p.add_argument("automaton")
    p.add_argument("word", help="file with one atom per line")
    p.set_defaults(fn=_cmd_run)

    p = sub.add_parser("orbits", parents=[common],
                       help="count orbits of reachable configurations")
    p.add_argument("automaton")
    p.add_argument("--depth", type=int, default=3)
    p.set_defaults(fn=_cmd_orbits)

    p = sub.add_parser("lambda", help="lambda-term conversions and alpha equivalence")
    lam = p.add_subparsers(dest="lambda_op", required=True)
    q = lam.add_parser("to-db", parents=[common], help="named term to de Bruijn form")
    q.add_argument("term")
    q.set_defaults(fn=_cmd_lambda)
    q = lam.add_parser("from-db", parents=[common], help="de Bruijn form to named term")
    q.add_argument("term")
    q.set_defaults(fn=_cmd_lambda)
    q = lam.add_parser("alpha-eq", parents=[common],
                       help="alpha equivalence of two named terms")
    q.add_argument("term")
    q.add_argument("term2")
    q.set_defaults(fn=_cmd_lambda)

    p = sub.add_parser("quot", help="queries on a presented quotient")
    quo = p.add_subparsers(dest="quot_op", required=True)
    q = quo.add_parser("eq", parents=[common],
                       help="class equality of two extension elements")
    q.add_argument("presentation")
    q.add_argument("elem", help="extension element as inline JSON")
    q.add_argument("elem2", help="extension element as inline JSON")
    q.set_defaults(fn=_cmd_quot)
    q = quo.add_parser("count", parents=[common], help="class count over the pool")
    q.add_argument("presentation")
    q.set_defaults(fn=_cmd_quot)
    q = quo.add_parser("orbits", parents=[common], help="orbit count over the pool")
    q.add_argument("presentation")
    q.set_defaults(fn=_cmd_quot)
    q = quo.add_parser("supp", parents=[common],
                       help="least support of an extension element")
    q.add_argument("presentation")
    q.add_argument("elem", help="extension element as inline JSON")
    q.set_defaults(fn=_cmd_quot)

    p = sub.add_parser("selfcheck", parents=[common], help="run every property suite")
    p.add_argument("--budget", type=int, default=1, help="trial multiplier; 0 runs nothing")
    p.set_defaults(fn=_cmd_selfcheck)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except CliError as exc:
        if args.format == "json":
            print(json.dumps({"command": args.command, "errors": exc.errors}, sort_keys=True))
        else:
            for e in exc.errors:
                print(f"error: {e}", file=sys.stderr)
        return 2
    except (ValueError, KeyError) as exc:
        if args.format == "json":
            print(json.dumps({"command": args.command, "errors": [str(exc)]}, sort_keys=True))
        else:
            print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
