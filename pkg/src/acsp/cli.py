"""Command-line entry point.

Subcommands: check-acyclic, count, count-2sat, classify, gadget (verify /
apply), circuit (count / compile).  All output is JSON on stdout with exact
rational strings; identical inputs produce byte-identical output.  Exit
codes: 0 success, 2 rejected input (structured diagnostic), 1 internal
assertion failure.
"""

from __future__ import annotations

import argparse
import sys

from . import engine, frontends, jsonio
from .classify import MODE_NO_XOR, MODE_WITH_XOR, classify_functions
from .core import builtin
from .errors import InputError, InternalCheckError, NotAcyclicError
from .gadgets import build_catalog_gadget, rewrite_instance, verify_realization
from .hypergraph import build_hypergraph, gyo_reduce, join_forest


def _emit(obj) -> None:
    sys.stdout.write(jsonio.canonical_dumps(obj))


def _load_instance(path: str):
    return jsonio.instance_from_json(jsonio.load_json_file(path))


def _cmd_check_acyclic(args) -> int:
    obj = jsonio.load_json_file(args.file)
    if isinstance(obj, dict) and "constraints" in obj:
        h = build_hypergraph(jsonio.instance_from_json(obj))
    else:
        h = jsonio.hypergraph_from_json(obj)
    acyclic, trace = gyo_reduce(h)
    out = {"acyclic": acyclic}
    if args.explain:
        out["trace"] = trace
    _emit(out)
    return 0


def _count_output(result, instance, args):
    out = {"count": result.value.to_pair(), "method": result.method,
           "stats": result.stats}
    if getattr(args, "explain", False):
        _, trace = gyo_reduce(build_hypergraph(instance))
        explain = {"gyo": trace}
        if result.method == "jointree":
            forest = join_forest(instance)
            explain["join_forest"] = {
                "parent": {str(i): p for i, p in sorted(forest.parent.items())},
                "roots": list(forest.roots),
                "total_weight": forest.total_weight,
            }
        out["explain"] = explain
    return out


def _cmd_count(args) -> int:
    instance = _load_instance(args.file)
    result = engine.count(instance, args.method)
    _emit(_count_output(result, instance, args))
    return 0


def _cmd_count_2sat(args) -> int:
    try:
        with open(args.file, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {args.file}: {exc}")
    cnf = frontends.parse_dimacs(text)
    result = frontends.count_2sat(cnf, args.method)
    _emit({"count": result.value.to_pair(), "method": result.method,
           "stats": result.stats})
    return 0


_MODES = {"with-xor": MODE_WITH_XOR, "no-xor": MODE_NO_XOR}


def _cmd_classify(args) -> int:
    named = jsonio.functions_from_json(jsonio.load_json_file(args.file))
    verdict = classify_functions(named, _MODES[args.mode])
    _emit(verdict.to_json())
    return 0


def _cmd_gadget_verify(args) -> int:
    realization = build_catalog_gadget(args.name, args.params)
    report = verify_realization(realization)
    out = {
        "gadget": jsonio.gadget_to_json(realization),
        "verified": report.ok,
        "identity": report.identity_ok,
        "acyclic": report.acyclic,
    }
    if report.counterexample is not None:
        out["counterexample"] = report.counterexample
    _emit(out)
    return 0


def _parse_target(spec: str):
    if ":" in spec and not spec.endswith(".json"):
        name, _, arity = spec.partition(":")
        try:
            return builtin(name, int(arity))
        except ValueError:
            raise InputError(f"bad target spec {spec!r}; use NAME:ARITY or a JSON file")
    return jsonio.function_from_json(jsonio.load_json_file(spec))


def _cmd_gadget_apply(args) -> int:
    params = args.params.split(",") if args.params else []
    realization = build_catalog_gadget(args.gadget, params)
    target = _parse_target(args.target) if args.target else realization.target
    instance = _load_instance(args.file)
    rewritten, scalar = rewrite_instance(instance, target, realization)
    _emit({
        "instance": jsonio.instance_to_json(rewritten),
        "scalar": scalar.to_pair(),
        "occurrences_rewritten":
            sum(1 for c in instance.constraints if c.func == target),
    })
    return 0


def _cmd_circuit_count(args) -> int:
    circuit = frontends.circuit_from_json(jsonio.load_json_file(args.file))
    n = frontends.count_subtrees(circuit, args.input)
    _emit({"subtrees": str(n)})
    return 0


def _cmd_circuit_compile(args) -> int:
    circuit = frontends.circuit_from_json(jsonio.load_json_file(args.file))
    instance, scalar = frontends.compile_circuit(circuit, args.input, args.mode)
    _emit({
        "instance": jsonio.instance_to_json(instance),
        "scalar": scalar.to_pair(),
        "mode": args.mode,
    })
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="acsp",
        description="Exact counting, classification, and gadget verification "
                    "for acyclic Boolean constraint satisfaction.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-acyclic", help="GYO acyclicity test")
    p.add_argument("file")
    p.add_argument("--explain", action="store_true")
    p.set_defaults(handler=_cmd_check_acyclic)

    p = sub.add_parser("count", help="exact weighted count of an instance")
    p.add_argument("file")
    p.add_argument("--method", choices=sorted(engine.METHODS), default="auto")
    p.add_argument("--explain", action="store_true")
    p.set_defaults(handler=_cmd_count)

    p = sub.add_parser("count-2sat", help="model count of an acyclic 2CNF file")
    p.add_argument("file")
    p.add_argument("--method", choices=sorted(engine.METHODS), default="auto")
    p.set_defaults(handler=_cmd_count_2sat)

    p = sub.add_parser("classify", help="complexity verdict for a function set")
    p.add_argument("file")
    p.add_argument("--mode", choices=sorted(_MODES), required=True)
    p.set_defaults(handler=_cmd_classify)

    p = sub.add_parser("gadget", help="gadget catalog operations")
    gsub = p.add_subparsers(dest="gadget_command", required=True)
    g = gsub.add_parser("verify", help="build and exhaustively verify")
    g.add_argument("name")
    g.add_argument("params", nargs="*")
    g.set_defaults(handler=_cmd_gadget_verify)
    g = gsub.add_parser("apply", help="rewrite an instance through a gadget")
    g.add_argument("file")
    g.add_argument("--gadget", required=True)
    g.add_argument("--params", default="")
    g.add_argument("--target", default=None,
                   help="NAME:ARITY builtin or a function JSON file "
                        "(default: the gadget's own target)")
    g.set_defaults(handler=_cmd_gadget_apply)

    p = sub.add_parser("circuit", help="circuit pipeline")
    csub = p.add_subparsers(dest="circuit_command", required=True)
    c = csub.add_parser("count", help="number of accepting subtrees")
    c.add_argument("file")
    c.add_argument("--input", required=True)
    c.set_defaults(handler=_cmd_circuit_count)
    c = csub.add_parser("compile", help="compile to a counting instance")
    c.add_argument("file")
    c.add_argument("--input", required=True)
    c.add_argument("--mode", choices=["direct", "strict"], default="direct")
    c.set_defaults(handler=_cmd_circuit_compile)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except NotAcyclicError as exc:
        _emit({"error": {"type": "input", "message": str(exc),
                         "gyo_trace": exc.trace, **exc.details}})
        return 2
    except InputError as exc:
        _emit({"error": {"type": "input", "message": str(exc), **exc.details}})
        return 2
    except InternalCheckError as exc:
        _emit({"error": {"type": "internal", "message": str(exc), **exc.details}})
        return 1
    except Exception as exc:  # anything else is an internal failure
        _emit({"error": {"type": "internal", "message": f"{type(exc).__name__}: {exc}"}})
        return 1


if __name__ == "__main__":
    sys.exit(main())
