"""Command-line interface: ``tqftcount <command> [options]``.

Exit codes: 0 success, 2 usage or parse error, 3 failed mathematical
precondition, 4 resource cap.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction

from . import bordism
from .classalg import algebra
from .correspondence import census_count, default_degree_bound, eigen_census, family_genus_matrix
from .errors import TqftError, UsageError
from .groups import MAX_PRIME, ORDER_CAP, instantiate_family
from .linalg import fraction_str
from .schemes import list_builtins, load_catalog
from .verify import run_suite

log = logging.getLogger("tqftcount")


def _primes(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of integers: {text!r}") from None


def _positive(text):
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("caps must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--family", help="built-in family name or a family defined in --spec")
    common.add_argument("--spec", metavar="FILE", help="JSON family spec or catalog extending the built-ins")
    common.add_argument("-p", "--prime", type=int, help="field size (a prime)")
    common.add_argument("--format", choices=("json", "table"), default="json")
    common.add_argument("--cap-order", type=_positive, default=ORDER_CAP, help="largest group order allowed")
    common.add_argument("--max-prime", type=_positive, default=MAX_PRIME)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="tqftcount", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("group-info", parents=[common], help="order and conjugacy classes")
    cs = sub.add_parser("census", parents=[common], help="character dimensions with multiplicities")
    cs.add_argument("--character-sums", action="store_true",
                    help="also print, per dimension d, the sum of the degree-d characters on each class")

    c = sub.add_parser("count", parents=[common], help="|Hom(pi_1 of a genus-g surface, G)|")
    c.add_argument("-g", "--genus", type=int, required=True)
    c.add_argument("--oracle", action="store_true", help="cross-check by brute-force enumeration")

    m = sub.add_parser("matrix", parents=[common], help="genus matrix over Z[q] by interpolation")
    m.add_argument("--primes", type=_primes, required=True)
    m.add_argument("--validate", type=int, help="held-out prime (default: last of --primes)")
    m.add_argument("--generators", type=lambda s: [x.strip() for x in s.split(",") if x.strip()],
                   help="comma-separated generator names (default: the family's basis)")
    m.add_argument("--bound", type=int, help="degree bound (default 2*(free coordinates)+2)")
    m.add_argument("--jobs", type=_positive, default=1, help="worker processes for per-prime work")

    e = sub.add_parser("eval", parents=[common], help="evaluate a bordism word")
    e.add_argument("word")
    e.add_argument("--cap-tensor", type=_positive, default=bordism.TENSOR_CAP,
                   help="largest k^n tensor dimension")
    e.add_argument("--expand", action="store_true", help="desugar genus and sigma before evaluating")

    v = sub.add_parser("verify", parents=[common], help="run a reproduction suite")
    v.add_argument("--suite", choices=("paper", "axioms", "spans", "all"), default="paper")

    sub.add_parser("catalog", parents=[common], help="list built-in families and generators")
    return parser


def _group(args, default_family=None, default_prime=None):
    catalog = load_catalog(args.spec)
    family = args.family or default_family
    if family is None and args.spec:
        own = list(load_catalog(args.spec).families)
        family = own[-1] if own else None
    if family is None:
        raise UsageError("--family is required")
    p = args.prime if args.prime is not None else default_prime
    if p is None:
        raise UsageError("-p/--prime is required")
    spec = catalog.family(family)
    return instantiate_family(spec, p, max_prime=args.max_prime, order_cap=args.cap_order)


def cmd_group_info(args) -> dict:
    G = _group(args)
    cls = G.classes
    return {
        "group": G.name,
        "order": G.order,
        "classes": cls.count,
        "class_sizes": list(cls.class_sizes),
        "centralizer_orders": list(cls.centralizer_orders),
    }


def cmd_census(args) -> dict:
    G = _group(args)
    census, report = eigen_census(G)
    if not census.burnside_holds():
        raise TqftError("census violates sum N_d d^2 = |G|")
    out = {"group": G.name, "order": G.order, "census": census.to_json(),
           "eigenvalues": [str(x) for x in report.eigenvalues]}
    if args.character_sums:
        out["class_representatives"] = [G.matrices[r].tolist() for r in G.classes.class_reps]
        out["character_sums"] = {str(d): [fraction_str(x) for x in v.values]
                                 for d, v in zip(report.dimensions, report.character_sums())}
    return out


def cmd_count(args) -> dict:
    if args.genus < 0:
        raise UsageError("genus must be non-negative")
    G = _group(args)
    census, _ = eigen_census(G)
    value = census_count(census, args.genus)
    out = {"group": G.name, "genus": args.genus, "value": fraction_str(Fraction(value))}
    if args.genus == 0:
        log.warning("genus 0 evaluates the formula outside the validated regime g >= 1")
    if args.oracle:
        brute = bordism.brute_force_hom_count(G, args.genus)
        out["oracle"] = fraction_str(Fraction(brute))
        if brute != value:
            raise TqftError(f"census count {value} disagrees with brute force {brute}")
    return out


def cmd_matrix(args) -> dict:
    catalog = load_catalog(args.spec)
    if not args.family:
        raise UsageError("--family is required")
    spec = catalog.family(args.family)
    bound = args.bound if args.bound is not None else default_degree_bound(spec.free_coordinates())
    gm = family_genus_matrix(args.family, args.primes, validate=args.validate, names=args.generators,
                             degree_bound=bound, catalog=catalog, jobs=args.jobs)
    return gm.to_json()


def cmd_eval(args) -> dict:
    expr = bordism.parse(args.word)
    G = _group(args, default_family="AGL1", default_prime=3)
    result = bordism.evaluate(expr, G, cap=args.cap_tensor, expand=args.expand)
    out = {"group": G.name, "word": bordism.to_text(expr), "in": result.in_arity, "out": result.out_arity}
    if result.matrix.shape == (1, 1) and result.in_arity == result.out_arity == 0:
        out["value"] = fraction_str(result.scalar)
    else:
        out["matrix"] = [[fraction_str(x) for x in row] for row in result.matrix]
    return out


def cmd_verify(args) -> dict:
    checks = run_suite(args.suite)
    return {"suite": args.suite, "passed": all(c.passed for c in checks),
            "checks": [c.to_json() for c in checks]}


def cmd_catalog(args) -> dict:
    if args.spec:
        cat = load_catalog(args.spec)
        return {name: {"dim": s.dim, "coordinates": list(s.variables)} for name, s in cat.families.items()}
    return list_builtins()


COMMANDS = {
    "group-info": cmd_group_info,
    "census": cmd_census,
    "count": cmd_count,
    "matrix": cmd_matrix,
    "eval": cmd_eval,
    "verify": cmd_verify,
    "catalog": cmd_catalog,
}


def render_table(command: str, out: dict) -> str:
    if command == "census":
        lines = [f"{out['group']}  |G| = {out['order']}", "dim  count"]
        lines += [f"{r['dim']:>3}  {r['count']}" for r in out["census"]]
        return "\n".join(lines)
    if command == "matrix":
        width = max(len(e) for row in out["entries"] for e in row)
        lines = ["labels: " + ", ".join(out["labels"])]
        lines += ["  ".join(e.rjust(width) for e in row) for row in out["entries"]]
        lines.append(f"primes {out['primes']}, validated at {out['validated_at']}")
        return "\n".join(lines)
    if command == "verify":
        lines = [f"{'PASS' if c['passed'] else 'FAIL'}  {c['name']}  ({c['seconds']}s)" for c in out["checks"]]
        return "\n".join(lines)
    if "matrix" in out and command == "eval":
        return "\n".join("  ".join(row) for row in out["matrix"])
    return "\n".join(f"{k}: {v}" for k, v in out.items())


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        out = COMMANDS[args.command](args)
    except TqftError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    if args.format == "table":
        print(render_table(args.command, out))
    else:
        print(json.dumps(out, indent=2))
    if args.command == "verify" and not out["passed"]:
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
