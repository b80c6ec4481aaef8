"""Command line front end.

Exit codes: 0 success (valid, proved, holds, well-formed), 1 negative verdict
(invalid, refuted, fails, ill-formed proof), 2 usage or parse errors, 3 a
broken internal invariant.  `--json` switches any subcommand to a JSON object
tagged with "schema": 1.  Formula arguments may be given as `@path` to read
the formula text from a file.
"""

import argparse
import json
import sys

from . import nd
from .algebra import OP_NAMES, format_table, run_identity_suites
from .errors import InvariantViolation
from .semantics import (
    consequence_countermodel,
    countermodel,
    evaluate,
    valuations,
)
from .syntax import (
    ParseError,
    Signature,
    SignatureError,
    parse,
    render,
    translate,
    variables,
)
from .tableau import Proved, decide, decide_consequence, format_tableau

_SYMBOL_OPS = {
    "~": "neg", "[]": "box", "<>": "dia",
    "&": "and", "|": "or", ">": "succ",
}


def _read_formula_arg(text):
    if text.startswith("@"):
        try:
            with open(text[1:], "r", encoding="utf-8") as fh:
                text = fh.read().strip()
        except OSError as e:
            raise _UsageError(f"cannot read {text[1:]}: {e.strerror}")
    return parse(text)


class _UsageError(Exception):
    pass


def _emit_json(obj):
    obj = {"schema": 1, **obj}
    print(json.dumps(obj, indent=2))


def _format_model(model):
    return " ".join(f"{k}={model[k]}" for k in sorted(model))


# --- subcommand handlers -----------------------------------------------------


def _cmd_parse(args):
    f = _read_formula_arg(args.formula)
    if args.json:
        _emit_json({"formula": render(f), "variables": sorted(variables(f))})
    else:
        print(render(f))
    return 0


def _cmd_table(args):
    name = _SYMBOL_OPS.get(args.connective, args.connective)
    if name not in OP_NAMES:
        raise _UsageError(
            f"unknown connective {args.connective!r}; "
            f"choose from {', '.join(OP_NAMES)} or ~ [] <> & | >"
        )
    if args.json:
        from .algebra import BINARY_OPS, NULLARY_OPS, UNARY_OPS, VALUES

        if name in NULLARY_OPS:
            table = NULLARY_OPS[name]
        elif name in UNARY_OPS:
            table = {v: UNARY_OPS[name][v] for v in VALUES}
        else:
            table = {a: {b: BINARY_OPS[name][(a, b)] for b in VALUES} for a in VALUES}
        _emit_json({"connective": name, "table": table})
    else:
        print(format_table(name), end="")
    return 0


def _parse_assignment(text):
    model = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise _UsageError(f"bad assignment {part!r}; expected name=value")
        name, _, value = part.partition("=")
        name, value = name.strip(), value.strip()
        if value not in ("0", "n", "b", "1"):
            raise _UsageError(f"bad truth value {value!r}; expected 0, n, b or 1")
        model[name] = value
    return model


def _universe(f, vars_option):
    names = sorted(variables(f))
    if vars_option is None:
        return names
    pinned = [v.strip() for v in vars_option.split(",") if v.strip()]
    missing = [n for n in names if n not in pinned]
    if missing:
        raise _UsageError(f"--vars must cover {', '.join(missing)}")
    return pinned


def _cmd_eval(args):
    f = _read_formula_arg(args.formula)
    if args.assign is not None:
        model = _parse_assignment(args.assign)
        missing = sorted(set(variables(f)) - set(model))
        if missing:
            raise _UsageError(f"assignment misses {', '.join(missing)}")
        value = evaluate(f, model)
        if args.json:
            _emit_json({"formula": render(f), "assignment": model, "value": value})
        else:
            print(value)
        return 0
    names = _universe(f, args.vars)
    rows = [(h, evaluate(f, h)) for h in valuations(names)]
    if args.json:
        _emit_json({
            "formula": render(f),
            "variables": names,
            "rows": [{"assignment": h, "value": v} for h, v in rows],
        })
    else:
        for h, v in rows:
            cells = " ".join(f"{n}={h[n]}" for n in names)
            print(f"{cells}  ->  {v}" if cells else v)
    return 0


def _cmd_valid(args):
    f = _read_formula_arg(args.formula)
    model = countermodel(f)
    if model is None:
        if args.json:
            _emit_json({"verdict": "valid"})
        else:
            print("VALID")
        return 0
    if args.json:
        _emit_json({"verdict": "invalid", "countermodel": model})
    else:
        print(f"INVALID  countermodel: {_format_model(model)}")
    return 1


def _cmd_countermodel(args):
    f = _read_formula_arg(args.formula)
    model = countermodel(f)
    if model is None:
        if args.json:
            _emit_json({"verdict": "valid", "countermodel": None})
        else:
            print("VALID")
        return 0
    if args.json:
        _emit_json({"verdict": "invalid", "countermodel": model})
    else:
        print(_format_model(model))
    return 1


def _cmd_consequence(args):
    premises = [_read_formula_arg(t) for t in args.premises]
    conclusion = _read_formula_arg(args.to)
    model = consequence_countermodel(premises, conclusion)
    if model is None:
        if args.json:
            _emit_json({"verdict": "holds"})
        else:
            print("HOLDS")
        return 0
    if args.json:
        _emit_json({"verdict": "fails", "countermodel": model})
    else:
        print(f"FAILS  countermodel: {_format_model(model)}")
    return 1


def _cmd_prove(args):
    f = _read_formula_arg(args.formula)
    system = Signature(args.system)
    verdict = decide(f, system, derived=args.derived)
    tree = format_tableau(verdict.tableau) if args.emit_tableau else None
    if isinstance(verdict, Proved):
        if args.json:
            out = {"verdict": "proved"}
            if tree is not None:
                out["tableau"] = tree
            _emit_json(out)
        else:
            print("PROVED")
            if tree is not None:
                print(tree, end="")
        return 0
    if args.json:
        out = {"verdict": "refuted", "countermodel": verdict.model}
        if tree is not None:
            out["tableau"] = tree
        _emit_json(out)
    else:
        print(f"REFUTED  countermodel: {_format_model(verdict.model)}")
        if tree is not None:
            print(tree, end="")
    return 1


def _cmd_translate(args):
    f = _read_formula_arg(args.formula)
    g = translate(f, Signature(args.to))
    if args.json:
        _emit_json({"formula": render(g)})
    else:
        print(render(g))
    return 0


def _load_proof(path):
    try:
        if path == "-":
            data = sys.stdin.read()
        else:
            with open(path, "r", encoding="utf-8") as fh:
                data = fh.read()
    except OSError as e:
        raise _UsageError(f"cannot read {path}: {e.strerror}")
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as e:
        raise _UsageError(f"bad proof JSON: {e}")
    try:
        return nd.from_json(obj)
    except (ValueError, KeyError, TypeError) as e:
        raise _UsageError(f"bad proof object: {e}")


def _cmd_nd_check(args):
    proof = _load_proof(args.file)
    try:
        judgement = nd.check(proof)
    except (nd.SchemaError, nd.DischargeError) as e:
        if args.json:
            _emit_json({"verdict": "ill-formed", "error": str(e)})
        else:
            print(f"ILL-FORMED  {e}")
        return 1
    opens = sorted(render(f) for f in judgement.open_assumptions)
    normal = nd.is_normal(proof)
    if args.json:
        _emit_json({
            "verdict": "ok",
            "open_assumptions": opens,
            "conclusion": render(judgement.conclusion),
            "normal": normal,
        })
    else:
        context = ", ".join(opens)
        print(f"OK  {context} |- {render(judgement.conclusion)}"
              if context else f"OK  |- {render(judgement.conclusion)}")
        print(f"normal: {'yes' if normal else 'no'}")
    return 0


def _cmd_nd_normalize(args):
    proof = _load_proof(args.file)
    observer = None
    if args.trace:
        def observer(event):
            what = event["formula"] or ""
            label = f" {what}" if what else ""
            print(f"step {event['step']}: {event['kind']}{label} "
                  f"measure={event['measure']}", file=sys.stderr)
    try:
        result = nd.normalize(proof, observer=observer)
    except (nd.SchemaError, nd.DischargeError) as e:
        if args.json:
            _emit_json({"verdict": "ill-formed", "error": str(e)})
        else:
            print(f"ILL-FORMED  {e}")
        return 1
    if args.json:
        _emit_json({"verdict": "ok", "proof": nd.to_json(result)})
    else:
        print(json.dumps(nd.to_json(result), indent=2))
    return 0


def _cmd_identities(args):
    results = list(run_identity_suites())
    failures = [(s, n, r) for s, n, r in results if not r.holds]
    if args.json:
        _emit_json({
            "results": [
                {"suite": s, "name": n, "holds": r.holds, "witness": r.witness}
                for s, n, r in results
            ],
            "all_hold": not failures,
        })
    else:
        for suite, name, result in results:
            mark = "ok" if result.holds else f"FAIL at {result.witness}"
            print(f"{suite}/{name}: {mark}")
        print(f"{len(results) - len(failures)}/{len(results)} identities hold")
    return 0 if not failures else 1


# --- parser and dispatch -------------------------------------------------------


def _add_json(sub):
    sub.add_argument("--json", action="store_true", help="emit a JSON object")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="tml",
        description="Tetravalent modal logic: parsing, tables, validity, "
                    "tableaux and natural deduction.",
    )
    subs = parser.add_subparsers(dest="subcommand", required=True)

    sp = subs.add_parser("parse", help="parse a formula and print it back")
    sp.add_argument("formula")
    _add_json(sp)
    sp.set_defaults(func=_cmd_parse)

    sp = subs.add_parser("table", help="print a connective's operation table")
    sp.add_argument("connective")
    _add_json(sp)
    sp.set_defaults(func=_cmd_table)

    sp = subs.add_parser("eval", help="evaluate a formula")
    sp.add_argument("formula")
    sp.add_argument("--assign", help="valuation, e.g. p=n,q=b")
    sp.add_argument("--vars", help="pin and order the variable universe")
    _add_json(sp)
    sp.set_defaults(func=_cmd_eval)

    sp = subs.add_parser("valid", help="test validity by brute force")
    sp.add_argument("formula")
    _add_json(sp)
    sp.set_defaults(func=_cmd_valid)

    sp = subs.add_parser("countermodel", help="find a non-designating valuation")
    sp.add_argument("formula")
    _add_json(sp)
    sp.set_defaults(func=_cmd_countermodel)

    sp = subs.add_parser("consequence", help="test semantic consequence")
    sp.add_argument("premises", nargs="*")
    sp.add_argument("--to", required=True, help="conclusion formula")
    _add_json(sp)
    sp.set_defaults(func=_cmd_consequence)

    sp = subs.add_parser("prove", help="decide a formula with a signed tableau")
    sp.add_argument("formula")
    sp.add_argument("--system", choices=["succ", "full"], required=True)
    sp.add_argument("--derived", action="store_true",
                    help="use the derived two-premise rules (succ system)")
    sp.add_argument("--emit-tableau", action="store_true",
                    help="print the completed tableau")
    _add_json(sp)
    sp.set_defaults(func=_cmd_prove)

    sp = subs.add_parser("translate", help="rewrite a formula into a signature")
    sp.add_argument("formula")
    sp.add_argument("--to", choices=["succ", "full"], required=True)
    _add_json(sp)
    sp.set_defaults(func=_cmd_translate)

    sp = subs.add_parser("nd-check", help="check a natural deduction proof")
    sp.add_argument("file", help="proof JSON file, or - for stdin")
    _add_json(sp)
    sp.set_defaults(func=_cmd_nd_check)

    sp = subs.add_parser("nd-normalize", help="normalize a natural deduction proof")
    sp.add_argument("file", help="proof JSON file, or - for stdin")
    sp.add_argument("--trace", action="store_true",
                    help="print each conversion and the measure to stderr")
    _add_json(sp)
    sp.set_defaults(func=_cmd_nd_normalize)

    sp = subs.add_parser("identities", help="check the algebra identity suites")
    _add_json(sp)
    sp.set_defaults(func=_cmd_identities)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code in (0, None) else 2
    try:
        return args.func(args)
    except ParseError as e:
        print(str(e), file=sys.stderr)
        return 2
    except (_UsageError, SignatureError) as e:
        print(str(e), file=sys.stderr)
        return 2
    except InvariantViolation as e:
        print(f"invariant violation: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
