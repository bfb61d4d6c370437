"""Command-line entry point: ``psl2gen <command> ...``.

Exit codes: 0 success, 1 a verification failed, 2 bad usage or input,
3 a capacity budget was exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor

from .errors import CapacityError, DomainError, Psl2Error, UsageError, VerificationError
from .fieldcore import as_prime
from .fpgroups import gluing
from .fpgroups.coxeter import detect_coxeter_subset
from .fpgroups.presentation import LIBRARY, library, load_presentation
from .fpgroups.todd_coxeter import todd_coxeter
from .genseq import (
    DEFAULT_BUDGET,
    enumerate_irredundant_sets,
    iota_with_certificates,
    m_with_certificate,
    replacement_census,
)
from .psl2core import canonicalize, element_order
from .witnesses import (
    build_equal_order_triple,
    build_replacement_witness,
    verify_equal_order_triple,
    verify_replacement_witness,
)

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_CAPACITY = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _prime(text):
    try:
        return as_prime(int(text)).p
    except (ValueError, DomainError) as e:
        raise argparse.ArgumentTypeError(str(e))


def _prime_list(text):
    return [_prime(t) for t in text.split(",") if t.strip()]


def _positive(text):
    v = int(float(text))
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _filter(text):
    if text in ("all", "none"):
        return None
    return tuple(int(t) for t in text.split(","))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--threads", type=_positive, default=1)
    common.add_argument("--max-cosets", type=_positive, default=10**6)
    common.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET)

    ap = _Parser(prog="psl2gen", description="Irredundant generating sets of PSL(2,p).")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("order", parents=[common], help="order of a matrix in PSL(2,p)")
    s.add_argument("p", type=_prime)
    s.add_argument("entries", type=int, nargs=4, metavar="a b c d")

    s = sub.add_parser("mg", parents=[common], help="m(G) for PSL(2,p)")
    s.add_argument("p", type=_prime)
    s.add_argument("--no-shortcut", action="store_true", help="always run the length-4 search")

    s = sub.add_parser("iota", parents=[common], help="element orders in length-n sequences")
    s.add_argument("p", type=_prime)
    s.add_argument("n", type=int, choices=(1, 2, 3, 4))

    s = sub.add_parser("enumerate", parents=[common], help="census of irredundant generating sets")
    s.add_argument("p", type=_prime)
    s.add_argument("--length", type=int, choices=(2, 3, 4), default=4)
    s.add_argument("--filter", type=_filter, default=(2, 3), help="element orders, e.g. 2,3, or 'all'")

    s = sub.add_parser("tables", parents=[common], help="length-4 census for several primes")
    s.add_argument("--primes", type=_prime_list, default=[7, 11, 19, 31])

    s = sub.add_parser("tc", parents=[common], help="Todd-Coxeter enumeration")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--file")
    g.add_argument("--library", choices=sorted(LIBRARY))
    s.add_argument("--strategy", choices=("hlt", "felsch"), default="hlt")

    s = sub.add_parser("glue-sweep", parents=[common], help="sweep glued presentations")
    s.add_argument("--case", type=int, choices=(1, 2, 3), required=True)
    s.add_argument("--resume", metavar="FILE", help="JSON-lines results file, appended and reused")
    s.add_argument("--strategy", choices=("hlt", "felsch"), default="felsch")
    s.add_argument("--first-cap", type=_positive, default=20_000)

    s = sub.add_parser("witness", parents=[common], help="replacement-failure witness, p = 1 mod 8")
    s.add_argument("p", type=_prime)

    s = sub.add_parser("triple", parents=[common], help="triple of elements of order (p-1)/2")
    s.add_argument("p", type=_prime)
    s.add_argument("--x", type=int)

    s = sub.add_parser("replacement", parents=[common], help="replacement property census")
    s.add_argument("p", type=_prime)
    s.add_argument("--length", type=int, choices=(3, 4), default=4)
    s.add_argument("--all-sets", action="store_true")
    return ap


# ------------------------------------------------------------------ commands


def _table_row(args):
    p, budget = args
    return enumerate_irredundant_sets(p, 4, (2, 3), budget=budget, keep_sets=False).to_json()


def cmd_order(a):
    g = canonicalize(a.entries, a.p)
    return {"p": a.p, "element": list(g.entries), "order": element_order(g)}, True


def cmd_mg(a):
    r = m_with_certificate(a.p, shortcut=not a.no_shortcut, budget=a.budget)
    return {"p": a.p, "m": r.m, "method": r.method, "length4_sets": r.length4_sets}, True


def cmd_iota(a):
    r = iota_with_certificates(a.p, a.n, budget=a.budget)
    certs = {str(k): v for k, v in sorted(r.certificates.items())}
    return {"p": a.p, "n": a.n, "orders": r.orders, "certificates": certs}, True


def cmd_enumerate(a):
    r = enumerate_irredundant_sets(a.p, a.length, a.filter, budget=a.budget, keep_sets=False)
    out = r.to_json()
    out["order_filter"] = r.order_filter
    return out, True


def cmd_tables(a):
    jobs = [(p, a.budget) for p in a.primes]
    if a.threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=a.threads) as ex:
            rows = list(ex.map(_table_row, jobs))
    else:
        rows = [_table_row(j) for j in jobs]
    return {"tables": rows}, True


def cmd_tc(a):
    pres = load_presentation(a.file) if a.file else library(a.library)
    res = todd_coxeter(pres, max_cosets=a.max_cosets, strategy=a.strategy)
    if res.finite:
        return {"result": "finite", "order": res.index, "strategy": a.strategy}, True
    cox = detect_coxeter_subset(pres.relators, pres.generator_count)
    return {
        "result": "overflow",
        "reason": res.reason,
        "max_cosets": res.max_cosets,
        "strategy": a.strategy,
        "coxeter": cox.to_list() if cox else None,
    }, True


def cmd_glue_sweep(a):
    caps = tuple(sorted({min(a.first_cap, a.max_cosets), a.max_cosets}))

    def progress(n, total):
        if a.format == "text" and (n % 1000 == 0 or n == total):
            print(f"  {n}/{total}", file=sys.stderr)

    recs = gluing.run_sweep(a.case, a.resume, caps=caps, strategy=a.strategy, progress=progress)
    s = gluing.summarize(a.case, recs)
    out = s.to_json()
    bound = 192 if a.case == 1 else 1344
    out["bound"] = bound
    out["within_bound"] = s.max_order is None or (s.max_order <= bound if a.case == 1 else s.max_order < bound)
    return out, out["within_bound"]


def cmd_witness(a):
    wit = build_replacement_witness(a.p)
    rec = verify_replacement_witness(wit)
    return {"witness": wit.to_json(), "verification": rec.to_json()}, rec.ok


def cmd_triple(a):
    tr = build_equal_order_triple(a.p, a.x)
    rec = verify_equal_order_triple(tr)
    return {"triple": tr.to_json(), "verification": rec.to_json()}, rec.ok


def cmd_replacement(a):
    r = replacement_census(a.p, a.length, a.all_sets, budget=a.budget)
    return r.to_json(), True


COMMANDS = {
    "order": cmd_order,
    "mg": cmd_mg,
    "iota": cmd_iota,
    "enumerate": cmd_enumerate,
    "tables": cmd_tables,
    "tc": cmd_tc,
    "glue-sweep": cmd_glue_sweep,
    "witness": cmd_witness,
    "triple": cmd_triple,
    "replacement": cmd_replacement,
}


# ------------------------------------------------------------------ rendering


def render_json(record) -> str:
    return json.dumps(record, sort_keys=True, separators=(",", ": "), indent=1)


def render_text(record, indent=0) -> str:
    pad = "  " * indent
    lines = []
    for k in sorted(record):
        v = record[k]
        if isinstance(v, dict):
            lines.append(f"{pad}{k}:")
            lines.append(render_text(v, indent + 1))
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            for i, item in enumerate(v):
                lines.append(f"{pad}{k}[{i}]:")
                lines.append(render_text(item, indent + 1))
        else:
            lines.append(f"{pad}{k}: {json.dumps(v)}")
    return "\n".join(lines)


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        a = build_parser().parse_args(argv)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    try:
        record, ok = COMMANDS[a.command](a)
    except CapacityError as e:
        print(f"capacity exceeded (budget {e.budget}): {e}", file=sys.stderr)
        return EXIT_CAPACITY
    except VerificationError as e:
        print(f"verification failed: {e}", file=sys.stderr)
        return EXIT_VERIFY
    except (DomainError, UsageError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except Psl2Error as e:  # pragma: no cover
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    if a.command == "mg" and a.format == "text":
        print(record["m"], file=out)
    else:
        print(render_json(record) if a.format == "json" else render_text(record), file=out)
    return EXIT_OK if ok else EXIT_VERIFY


def main():  # pragma: no cover
    sys.exit(run())


if __name__ == "__main__":  # pragma: no cover
    main()
