"""Command-line interface: ``cghsat <command> ...``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys

from .cyclic import Cgh
from .patterns import Pattern

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

log = logging.getLogger("cghsat")


class UsageError(Exception):
    pass


def parse_budget(text: str) -> int:
    """Node budget; accepts ``1e8`` style numbers."""
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid budget {text!r}") from None
    if value <= 0 or value != int(value):
        raise argparse.ArgumentTypeError(f"budget must be a positive integer, got {text!r}")
    return int(value)


def parse_pattern(text: str) -> Pattern:
    try:
        return Pattern.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def parse_edge(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.replace(" ", "").split(",") if x)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid edge {text!r}; expected e.g. 0,1,2") from None


def load_config(path: str | None) -> dict:
    if not path:
        return {}
    try:
        import tomllib  # type: ignore[import-not-found]
    except ModuleNotFoundError:
        import tomli as tomllib
    with open(path, "rb") as fh:
        return tomllib.load(fh)


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------


def _table(rows: list[dict], fmt: str) -> str:
    if not rows:
        return ""
    cols = list(rows[0])
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow({k: "" if row[k] is None else row[k] for k in cols})
        return buf.getvalue()
    lines = ["| " + " | ".join(cols) + " |", "|" + "---|" * len(cols)]
    for row in rows:
        lines.append("| " + " | ".join("" if row[k] is None else str(row[k]) for k in cols) + " |")
    return "\n".join(lines) + "\n"


def emit(payload, fmt: str, rows: list[dict] | None = None) -> None:
    if fmt == "json":
        sys.stdout.write(json.dumps(payload, indent=2, default=str) + "\n")
        return
    if rows is None:
        rows = [{k: v for k, v in payload.items() if not isinstance(v, (list, dict))}]
    sys.stdout.write(_table(rows, fmt))


def _read_cgh(args) -> Cgh:
    if args.input:
        text = sys.stdin.read() if args.input == "-" else open(args.input).read()
        return Cgh.from_json(text)
    if args.n is None or not args.edge:
        raise UsageError("give --input FILE or --n with one or more --edge")
    r = len(args.edge[0])
    return Cgh(args.n, r, frozenset(args.edge))


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_sat(args) -> int:
    from .engine import enumerate_minimum_saturated, sat_exact

    rep = sat_exact(args.n, args.pattern, budget=args.budget, threads=args.threads)
    out = rep.to_dict()
    if args.enumerate and rep.exhaustive:
        classes = enumerate_minimum_saturated(args.n, args.pattern, budget=args.budget, value=rep.value)
        out["witnesses"] = [c.to_dict() for c in classes]
        out["classes"] = len(classes)
    if not args.witnesses:
        out.pop("witnesses")
    emit(out, args.format)
    return EXIT_OK if rep.exhaustive else EXIT_BUDGET


def cmd_ex(args) -> int:
    from .engine import ex_exact

    rep = ex_exact(args.n, args.pattern, budget=args.budget)
    out = rep.to_dict()
    if not args.witnesses:
        out.pop("witnesses")
    emit(out, args.format)
    return EXIT_OK if rep.exhaustive else EXIT_BUDGET


def cmd_construct(args) -> int:
    from .constructions import construction_report

    try:
        rep = construction_report(args.name, args.n, r=args.r)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    out = rep.to_dict(include_edges=args.edges)
    if args.format == "json":
        emit(out, "json")
    else:
        flat = {k: v for k, v in out.items() if not isinstance(v, (dict, list))}
        flat.update({f"check: {k}": v for k, v in rep.checks.items()})
        emit(flat, args.format)
    for w in rep.warnings:
        log.warning("%s n=%d: %s", rep.name, rep.n, w)
    if args.verify and not rep.ok:
        return EXIT_CHECK
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import FAIL, WARN, run_suite

    res = run_suite(args.suite, nmax=args.nmax, seed=args.seed, budget=args.budget, threads=args.threads)
    if args.format == "json":
        emit(res.to_dict(), "json")
    elif res.rows:
        emit({}, args.format, res.rows)
    else:
        rows = [{"check": c.name, "status": c.status, "detail": c.detail} for c in res.checks]
        emit({}, args.format, rows)
    for c in res.checks:
        if c.status in (FAIL, WARN):
            log.warning("%s %s %s", c.status, c.name, c.detail)
    if not res.ok:
        return EXIT_CHECK
    return EXIT_BUDGET if res.budget_exhausted else EXIT_OK


def cmd_structural_sat(args) -> int:
    from .m1 import structural_sat_report

    try:
        rep = structural_sat_report(args.n, args.r, search_limit=args.search_limit, seed=args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    emit(rep.to_dict(), args.format)
    return EXIT_OK


def cmd_classify(args) -> int:
    from .patterns import classify_pair, pair_shape

    try:
        F = classify_pair(args.n, args.e, args.f)
        shape = pair_shape(args.n, args.e, args.f)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    out = {
        "n": args.n,
        "e": list(args.e),
        "f": list(args.f),
        "pattern": None if F is None else str(F),
        "shared": shape.shared,
        "alternations": shape.alternations,
        "reading": shape.reading,
    }
    emit(out, args.format)
    return EXIT_OK


def cmd_closure(args) -> int:
    from .engine import NotFreeError, closure

    H = _read_cgh(args)
    try:
        out = closure(H, args.pattern)
    except NotFreeError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_CHECK
    payload = {"pattern": str(args.pattern), "input_size": len(H), "size": len(out), "cgh": out.to_dict()}
    emit(payload, args.format)
    return EXIT_OK


def cmd_extract_tuple(args) -> int:
    from .m1 import ExtractionError, extract_tuple, lambda_rho

    H = _read_cgh(args)
    try:
        C = extract_tuple(H)
    except ExtractionError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_CHECK
    lr = lambda_rho(H)
    emit({"n": H.n, "r": H.r, "tuple": C.to_list(), "lambda": list(lr.lam), "rho": list(lr.rho)}, args.format)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "markdown"), default=argparse.SUPPRESS)
    common.add_argument("--config", metavar="TOML", default=argparse.SUPPRESS, help="defaults for any option")
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS, help="worker processes for sat")
    common.add_argument("--budget", type=parse_budget, default=argparse.SUPPRESS, help="search-node budget, e.g. 1e8")
    common.add_argument("--log-level", default=argparse.SUPPRESS, choices=("DEBUG", "INFO", "WARNING", "ERROR"))

    p = argparse.ArgumentParser(prog="cghsat", description="Saturation numbers of convex geometric hypergraphs.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sat", parents=[common], help="exact saturation number")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--pattern", type=parse_pattern, required=True, help="e.g. M1, S3, G0, M1r:4")
    s.add_argument("--enumerate", action="store_true", help="list every minimum family up to rotation")
    s.add_argument("--witnesses", action="store_true", help="include witness families")
    s.set_defaults(func=cmd_sat)

    s = sub.add_parser("ex", parents=[common], help="exact extremal number")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--pattern", type=parse_pattern, required=True)
    s.add_argument("--witnesses", action="store_true")
    s.set_defaults(func=cmd_ex)

    from .constructions import NAMES

    s = sub.add_parser("construct", parents=[common], help="build and check a named family")
    s.add_argument("name", choices=NAMES + ("m2_construction",))
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--r", type=int, default=3, help="uniformity (star_plus only)")
    s.add_argument("--verify", action="store_true", help="exit 1 when a check fails")
    s.add_argument("--edges", action="store_true", help="include the edge list")
    s.set_defaults(func=cmd_construct)

    from .verify import SUITES

    s = sub.add_parser("verify", parents=[common], help="run a verification suite")
    s.add_argument("suite", choices=SUITES)
    s.add_argument("--nmax", type=int, default=None)
    s.add_argument("--seed", type=int, default=None)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("structural-sat", parents=[common], help="minimum |H(C)| over valid tuples")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--search-limit", type=int, default=20000)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_structural_sat)

    s = sub.add_parser("classify", parents=[common], help="name the pattern formed by two edges")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--e", type=parse_edge, required=True, help="e.g. 0,1,2")
    s.add_argument("--f", type=parse_edge, required=True)
    s.set_defaults(func=cmd_classify)

    for name, func, help_ in (
        ("closure", cmd_closure, "complete a free family to a saturated one"),
        ("extract-tuple", cmd_extract_tuple, "recover the witness tuple of a saturated family"),
    ):
        s = sub.add_parser(name, parents=[common], help=help_)
        s.add_argument("--input", help="cgh JSON file ('-' for stdin)")
        s.add_argument("--n", type=int)
        s.add_argument("--edge", type=parse_edge, action="append", default=[])
        if name == "closure":
            s.add_argument("--pattern", type=parse_pattern, required=True)
        s.set_defaults(func=func)
    return p


DEFAULTS = {"format": "json", "threads": None, "budget": None, "log_level": "WARNING", "config": None}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        config = load_config(getattr(args, "config", None))
    except (OSError, ValueError) as exc:
        sys.stderr.write(f"error: cannot read config: {exc}\n")
        return EXIT_USAGE
    section = {**config.get("cghsat", {}), **config.get(args.command, {})}
    for key, default in DEFAULTS.items():
        if not hasattr(args, key):
            value = section.get(key.replace("_", "-"), section.get(key, default))
            if key == "budget" and value is not None:
                value = parse_budget(str(value))
            setattr(args, key, value)
    logging.basicConfig(level=args.log_level, format="%(levelname)s %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except (UsageError, KeyError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except RuntimeError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
