"""JSON forms for functions, instances, hypergraphs and gadgets.

Functions accept three forms: an explicit table, symmetric [a_0..a_k]
notation (expanded on load), or a builtin reference.  Rationals travel as
strings "p/q" or "p" (never floats); complex entries as [re, im] pairs.
Emission is canonical (inline tables, sorted keys) so identical inputs
produce byte-identical outputs, and every emitted object re-parses to an
equal value.
"""

from __future__ import annotations

import json

from .core import Constraint, FuncTable, Instance, SymTable, builtin
from .errors import InputError
from .hypergraph import Hypergraph
from .rational import ComplexRat


def scalar_from_json(entry) -> ComplexRat:
    try:
        return ComplexRat.from_pair(entry)
    except ValueError as exc:
        raise InputError(str(exc))


def function_from_json(obj, name: str | None = None,
                       shared: dict | None = None) -> FuncTable:
    if isinstance(obj, str):
        if shared and obj in shared:
            return shared[obj]
        raise InputError(f"unknown function reference {obj!r}")
    if not isinstance(obj, dict):
        raise InputError(f"function form must be an object, got {type(obj).__name__}")
    if "builtin" in obj:
        if "arity" not in obj:
            raise InputError("builtin function form needs an arity")
        return builtin(obj["builtin"], int(obj["arity"]))
    if "arity" not in obj:
        raise InputError("function form needs an arity")
    arity = int(obj["arity"])
    label = obj.get("name", name)
    if "sym" in obj:
        entries = tuple(scalar_from_json(e) for e in obj["sym"])
        return SymTable(arity, entries).to_table(name=label)
    if "table" in obj:
        entries = tuple(scalar_from_json(e) for e in obj["table"])
        if len(entries) != 1 << arity:
            raise InputError(
                f"table length {len(entries)} does not match arity {arity}"
            )
        return FuncTable(arity, entries, name=label,
                         linked=bool(obj.get("linked", False)))
    raise InputError("function form needs one of: table, sym, builtin")


def function_to_json(f: FuncTable) -> dict:
    out = {"arity": f.arity, "table": [v.to_pair() for v in f.values]}
    if f.name:
        out["name"] = f.name
    if f.linked:
        out["linked"] = True
    return out


def instance_from_json(obj) -> Instance:
    if not isinstance(obj, dict) or "constraints" not in obj:
        raise InputError("instance form needs a constraints list")
    shared = {}
    for key, fobj in (obj.get("functions") or {}).items():
        shared[key] = function_from_json(fobj, name=key)
    constraints = []
    for centry in obj["constraints"]:
        if not isinstance(centry, dict) or "func" not in centry or "vars" not in centry:
            raise InputError("each constraint needs func and vars")
        func = function_from_json(centry["func"], shared=shared)
        cvars = tuple(str(v) for v in centry["vars"])
        constraints.append(Constraint(func, cvars,
                                      linked=bool(centry.get("linked", False))))
    variables = obj.get("variables")
    if variables is not None:
        variables = tuple(str(v) for v in variables)
    try:
        if variables is None:
            seen: dict = {}
            for c in constraints:
                for v in c.vars:
                    seen.setdefault(v, None)
            variables = tuple(seen)
        return Instance(variables, tuple(constraints))
    except InputError:
        raise


def instance_to_json(instance: Instance) -> dict:
    cons = []
    for c in instance.constraints:
        entry = {"func": function_to_json(c.func), "vars": list(c.vars)}
        if c.linked:
            entry["linked"] = True
        cons.append(entry)
    return {"variables": list(instance.variables), "constraints": cons}


def hypergraph_from_json(obj) -> Hypergraph:
    if not isinstance(obj, dict) or "edges" not in obj:
        raise InputError("hypergraph form needs an edges list")
    edges = tuple(frozenset(str(v) for v in e) for e in obj["edges"])
    vertices = obj.get("vertices")
    if vertices is None:
        seen: dict = {}
        for e in edges:
            for v in sorted(e):
                seen.setdefault(v, None)
        vertices = tuple(seen)
    else:
        vertices = tuple(str(v) for v in vertices)
    return Hypergraph(vertices, edges)


def hypergraph_to_json(h: Hypergraph) -> dict:
    return {"vertices": list(h.vertices),
            "edges": [sorted(e) for e in h.edges]}


def functions_from_json(obj) -> list:
    """A classify input: a list of function forms or {"functions": [...]}."""
    if isinstance(obj, dict) and "functions" in obj:
        obj = obj["functions"]
    if not isinstance(obj, list):
        raise InputError("expected a list of function forms")
    out = []
    for i, fobj in enumerate(obj):
        f = function_from_json(fobj)
        out.append((f.name or f"f{i}", f))
    return out


def gadget_to_json(realization) -> dict:
    return {
        "name": realization.name,
        "target": function_to_json(realization.target),
        "x_vars": list(realization.x_vars),
        "aux_vars": list(realization.aux_vars),
        "lambda": realization.lam.to_pair(),
        "constraints": [
            {"func": function_to_json(c.func), "vars": list(c.vars)}
            for c in realization.constraints
        ],
    }


def canonical_dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def load_json_file(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}")
