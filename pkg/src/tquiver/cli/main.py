"""Command-line driver.

Exit codes: 0 when the question was decided, 2 when the answer is Unknown
within the bound, 1 on input or analysis errors, 64 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from .. import build, ideals, loops, xcorr
from ..quiver import DiscreteQuiver, QuiverError, Unsupported, classify, validate
from ..ratspace import PLMapError, fmt_rat, parse_subset
from .format import ParseError, dump, load, parse_complex

EXIT_OK, EXIT_ERROR, EXIT_UNKNOWN, EXIT_USAGE = 0, 1, 2, 64


@dataclass
class Result:
    command: str
    verdict: str
    lines: list[str] = field(default_factory=list)
    witnesses: list[str] = field(default_factory=list)
    sets: list[str] = field(default_factory=list)
    bound: int | None = None
    complete: bool = True
    code: int = EXIT_OK
    details: dict = field(default_factory=dict)

    def payload(self) -> dict:
        out = {
            "command": self.command,
            "verdict": self.verdict,
            "witnesses": self.witnesses,
            "sets": self.sets,
            "bound": self.bound,
            "complete": self.complete,
        }
        if self.details:
            out["details"] = self.details
        return out


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def witness_text(w) -> str:
    if w is None:
        return "-"
    if isinstance(w, tuple):
        if w[0] == "c":
            return f"{w[1]}={fmt_rat(w[2])}"
        if w[0] == "t":
            return f"{w[1]}#{w[2]}"
        return "inf"
    if isinstance(w, (list, tuple)):
        return ", ".join(witness_text(x) for x in w)
    return str(w)


def _status_word(status: str) -> str:
    return {"holds": "HOLDS", "fails": "FAILS", "unknown": "UNKNOWN"}[status]


# -- commands ---------------------------------------------------------------------------------

def cmd_validate(q, args) -> Result:
    rep = validate(q)
    res = Result("validate", "VALID" if rep.ok else "INVALID", rep.lines())
    res.witnesses = [f"{c.name}: {c.witness}" for c in rep.failures() if c.witness]
    if not rep.ok:
        res.code = EXIT_ERROR
    return res


def cmd_classify(q, args) -> Result:
    c = classify(q)
    sets = [str(c.sinks), str(c.fin), str(c.reg)]
    lines = [f"sinks: {sets[0]}", f"fin: {sets[1]}", f"reg: {sets[2]}"]
    return Result("classify", "CLASSIFIED", lines, sets=sets)


def cmd_ideals(q, args) -> Result:
    X = q.vertex_space
    if args.check:
        U, V = (parse_subset(X, t) for t in args.check)
        v = ideals.check_admissible(q, U, V)
        verdict = "ADMISSIBLE" if v.ok else "NOT ADMISSIBLE"
        lines = [verdict + ("" if v.ok else f": {v.detail}, witness {witness_text(v.witness)}")]
        return Result("ideals", verdict, lines, [witness_text(v.witness)] if not v.ok else [], [str(U), str(V)])
    if not isinstance(q, DiscreteQuiver):
        raise Unsupported("enumeration of admissible pairs is implemented for discrete quivers; use --check U V")
    lat = ideals.ideal_lattice(q, args.limit_vertices)
    pairs = [str(p) for p in lat.pairs]
    lines = [f"{len(pairs)} admissible pairs ({lat.order_status})"] + [f"  {i}: {p}" for i, p in enumerate(pairs)]
    covers = lat.covers()
    if covers:
        lines.append("covers: " + " ".join(f"{i}<{j}" for i, j in covers))
    return Result("ideals", f"{len(pairs)} PAIRS", lines, sets=pairs, details={"covers": [list(c) for c in covers]})


def cmd_conditions(q, args) -> Result:
    L = loops.condition_L(q, args.maxlen)
    K = loops.condition_K(q, args.maxlen)
    lines, wits = [], []
    for name, v in (("L", L), ("K", K)):
        line = f"Condition ({name}): {_status_word(v.status)}"
        if v.fails:
            line += f" witness {witness_text(v.witness)}"
            wits.append(f"{name}: {witness_text(v.witness)}")
        elif v.status == "unknown":
            line += f" (bound {v.bound})"
        lines.append(line)
    if "L_inf" in L.extra:
        lines.append(f"L_inf: {L.extra['L_inf']}")
    unknown = "unknown" in (L.status, K.status)
    verdict = f"L={_status_word(L.status)} K={_status_word(K.status)}"
    sets = [str(L.extra["L_inf"])] if "L_inf" in L.extra else []
    return Result("conditions", verdict, lines, wits, sets, args.maxlen, not unknown, EXIT_UNKNOWN if unknown else EXIT_OK)


def cmd_simple(q, args) -> Result:
    s = loops.is_simple(q, args.maxlen, args.depth)
    if s.status == "simple":
        return Result("simple", "SIMPLE", ["SIMPLE"], bound=args.maxlen)
    if s.status == "not simple":
        why = [f"{name}: {witness_text(w)}" for name, w in s.reasons]
        head = "NOT SIMPLE (" + ", ".join(name for name, _ in s.reasons) + ")"
        return Result("simple", "NOT SIMPLE", [head] + [f"  witness {w}" for w in why], why, bound=args.maxlen)
    parts = [f"minimality: {s.minimal.status}", f"Condition (L): {s.condition_L.status}"]
    return Result("simple", "UNKNOWN", ["UNKNOWN (" + ", ".join(parts) + ")"], bound=args.maxlen, complete=False, code=EXIT_UNKNOWN)


def cmd_construct(q, args) -> Result:
    op, arg = args.op, args.arg
    needs = {"quotient", "relative", "product"}
    if op in needs and arg is None:
        raise UsageError(f"construct {op} needs an argument")
    if op not in needs and arg is not None:
        raise UsageError(f"construct {op} takes no argument")
    if op == "tails":
        out = build.add_tails(q)
    elif op == "unitize":
        out = build.unitize(q)
    elif op == "quotient":
        out = ideals.quotient_quiver(q, parse_subset(q.vertex_space, arg))
    elif op == "relative":
        out = ideals.relative_quiver(q, parse_subset(q.vertex_space, arg))
    else:
        out = build.product_with_space(q, parse_complex(arg))
    text = dump(out)
    return Result("construct", op.upper(), text.rstrip("\n").splitlines(), details={"document": text})


def cmd_xcorr(q, args) -> Result:
    if not isinstance(q, DiscreteQuiver):
        raise Unsupported("the correspondence is computed for discrete quivers only")
    rep = xcorr.check_correspondence_axioms(q, args.samples, args.seed)
    mism = xcorr.compact_agrees_with_fin(q)
    lines = rep.lines() + [f"compact left multiplication vs fin: {'PASS' if not mism else 'FAIL ' + ', '.join(mism)}"]
    ok = rep.ok and not mism
    return Result("xcorr", "PASS" if ok else "FAIL", lines, rep.counterexamples + mism, code=EXIT_OK)


def _try(fn):
    try:
        return fn(), None
    except (Unsupported, ValueError) as exc:
        return None, str(exc)


def cmd_report(q, args) -> Result:
    lines, details, sets = [], {}, []
    rep = validate(q)
    details["valid"] = rep.ok
    lines.append(f"valid: {'yes' if rep.ok else 'no'}")
    if not rep.ok:
        lines += ["  " + ln for ln in rep.lines()]
    c = classify(q)
    details["classification"] = c.as_dict()
    for k, v in c.as_dict().items():
        lines.append(f"{k}: {v}")
        sets.append(str(v))
    complete = True
    L, err = _try(lambda: loops.condition_L(q, args.maxlen))
    K, err2 = _try(lambda: loops.condition_K(q, args.maxlen))
    for name, v, e in (("L", L, err), ("K", K, err2)):
        if v is None:
            details[f"condition_{name}"] = {"status": "unsupported", "detail": e}
            lines.append(f"Condition ({name}): UNSUPPORTED ({e})")
            complete = False
            continue
        details[f"condition_{name}"] = {"status": v.status, "witness": witness_text(v.witness) if v.fails else None}
        lines.append(f"Condition ({name}): {_status_word(v.status)}" + (f" witness {witness_text(v.witness)}" if v.fails else ""))
        complete = complete and v.status != "unknown"
    S, err = _try(lambda: loops.is_simple(q, args.maxlen, args.depth))
    if S is None:
        details["simple"] = {"status": "unsupported", "detail": err}
        lines.append(f"simple: UNSUPPORTED ({err})")
        complete = False
    else:
        details["simple"] = {"status": S.status, "minimal": S.minimal.status}
        lines.append(f"simple: {S.status} (minimal: {S.minimal.status})")
        complete = complete and S.status != "unknown"
    if isinstance(q, DiscreteQuiver):
        P, err = _try(lambda: ideals.admissible_pairs(q, args.limit_vertices))
        if P is not None:
            details["admissible_pairs"] = len(P)
            lines.append(f"admissible pairs: {len(P)}")
    code = EXIT_OK if complete else EXIT_UNKNOWN
    return Result("report", "COMPLETE" if complete else "PARTIAL", lines, sets=sets, bound=args.maxlen, complete=complete, code=code, details=details)


COMMANDS = {
    "validate": cmd_validate,
    "classify": cmd_classify,
    "ideals": cmd_ideals,
    "conditions": cmd_conditions,
    "simple": cmd_simple,
    "construct": cmd_construct,
    "xcorr": cmd_xcorr,
    "report": cmd_report,
}


def _common_flags(p, default) -> None:
    def d(value):
        return value if default is None else default

    p.add_argument("--json", action="store_true", default=d(False), help="machine-readable output")
    p.add_argument("--maxlen", type=int, default=d(ideals.DEFAULT_BOUND), help="loop length / iteration bound (default 32)")
    p.add_argument("--limit-vertices", type=int, default=d(20), help="refuse enumeration above this many vertices")


def build_parser() -> argparse.ArgumentParser:
    # flags are accepted before or after the subcommand
    common = _Parser(add_help=False)
    _common_flags(common, argparse.SUPPRESS)
    p = _Parser(prog="tquiver", description="Exact structural analysis of topological quivers.")
    _common_flags(p, None)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in ("validate", "classify", "conditions"):
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("file")
    sp = sub.add_parser("ideals", parents=[common])
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--enumerate", action="store_true", help="list all admissible pairs (default)")
    g.add_argument("--check", nargs=2, metavar=("U", "V"), help="test one pair")
    sp.add_argument("file")
    for name in ("simple", "report"):
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("--depth", type=int, default=3, help="dyadic depth of the PL minimality search")
        sp.add_argument("file")
    sp = sub.add_parser("construct", parents=[common])
    sp.add_argument("op", choices=["tails", "unitize", "quotient", "relative", "product"])
    sp.add_argument("file")
    sp.add_argument("arg", nargs="?", help="U, V or a complex such as 'x [0,1]'")
    sp = sub.add_parser("xcorr", parents=[common])
    sp.add_argument("action", choices=["check"])
    sp.add_argument("file")
    sp.add_argument("--samples", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    return p


def emit(res: Result, as_json: bool, out=None) -> None:
    out = out or sys.stdout
    if as_json:
        out.write(json.dumps(res.payload(), sort_keys=True, indent=2) + "\n")
    else:
        out.write("\n".join(res.lines) + "\n")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.maxlen < 1:
        parser.error("--maxlen must be positive")
    try:
        q = load(args.file)
        res = COMMANDS[args.command](q, args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"tquiver: error: {exc}\n")
        return EXIT_USAGE
    except (ParseError, QuiverError, PLMapError, Unsupported, ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_ERROR
    emit(res, args.json)
    return res.code


__all__ = ["EXIT_ERROR", "EXIT_OK", "EXIT_UNKNOWN", "EXIT_USAGE", "Result", "build_parser", "main", "witness_text"]
