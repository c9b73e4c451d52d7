"""Problem frontends: acyclic 2CNF counting and the circuit pipeline.

2CNF formulas translate clause-by-clause into binary constraints (OR2 /
Implies / NAND2, units become unary tables) and are counted by the engine;
the reverse translation turns Implies-plus-restricted-unary instances back
into 2CNF.

Circuits are leveled, alternating, semi-unbounded trees (AND fan-in 2,
fan-out 1, negation on inputs only).  count_subtrees is the bottom-up
subtree-counting recurrence.  compile_circuit builds an instance whose
satisfying assignments are in bijection with accepting subtrees: one
membership variable per gate, the root pinned to 1, AND gates tied to their
children by EQ3, OR gates by the relation "the children bits sum to the
gate bit", and false input literals pinned to 0.  Strict mode expands every
relation over the signature {OR3, OR2, XOR, u0, Delta0, Delta1}, tracking
the accumulated scalar.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import Constraint, FuncTable, Instance, builtin, u0
from .engine import CountResult, count
from .errors import InputError, InternalCheckError
from .gadgets import or_gate_realization, or_gate_table
from .hypergraph import instance_acyclic
from .rational import MINUS_ONE, ONE, ZERO

DIRECT_ARITY_CAP = 12


# -- acyclic 2CNF ------------------------------------------------------------

@dataclass(frozen=True)
class CNF2:
    """A 2CNF formula: clauses are pairs of nonzero literals (1-based)."""

    num_vars: int
    clauses: tuple

    def __post_init__(self):
        for cl in self.clauses:
            if len(cl) != 2:
                raise InputError(f"clause {cl} is not binary")
            for lit in cl:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise InputError(f"literal {lit} out of range")


def parse_dimacs(text: str) -> CNF2:
    """DIMACS CNF subset: p cnf header, clauses of one or two literals."""
    header = None
    tokens: list = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            if header is not None:
                raise InputError("duplicate p line")
            parts = line.split()
            if len(parts) != 4 or parts[0] != "p" or parts[1] != "cnf":
                raise InputError(f"malformed p line: {line!r}")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise InputError(f"malformed p line: {line!r}")
            continue
        tokens.extend(line.split())
    if header is None:
        raise InputError("missing p cnf header")
    num_vars, num_clauses = header
    if num_vars < 0 or num_clauses < 0:
        raise InputError("negative counts in p line")

    clauses = []
    current: list = []
    for tok in tokens:
        try:
            lit = int(tok)
        except ValueError:
            raise InputError(f"bad literal token {tok!r}")
        if lit == 0:
            if not current or len(current) > 2:
                raise InputError(
                    f"clause {current} has {len(current)} literals; 1 or 2 allowed"
                )
            if len(current) == 1:
                current = [current[0], current[0]]
            clauses.append(tuple(current))
            current = []
        else:
            if abs(lit) > num_vars:
                raise InputError(f"literal {lit} exceeds variable count {num_vars}")
            current.append(lit)
    if current:
        raise InputError("clause not terminated by 0")
    if len(clauses) != num_clauses:
        raise InputError(
            f"clause count mismatch: header says {num_clauses}, found {len(clauses)}"
        )
    return CNF2(num_vars, tuple(clauses))


def cnf_to_dimacs(cnf: CNF2) -> str:
    lines = [f"p cnf {cnf.num_vars} {len(cnf.clauses)}"]
    for a, b in cnf.clauses:
        lines.append(f"{a} {b} 0")
    return "\n".join(lines) + "\n"


_TAUT = builtin("EQ", 1)  # the constant-true unary


def cnf_to_instance(cnf: CNF2) -> Instance:
    """Clause translation: (x or y) -> OR2, one negation -> Implies,
    two negations -> NAND2; same-variable clauses become unary tables."""
    variables = tuple(f"x{i}" for i in range(1, cnf.num_vars + 1))
    cons = []
    for l1, l2 in cnf.clauses:
        a, b = abs(l1), abs(l2)
        va, vb = f"x{a}", f"x{b}"
        if a == b:
            if l1 > 0 and l2 > 0:
                cons.append(Constraint(builtin("Delta1", 1), (va,)))
            elif l1 < 0 and l2 < 0:
                cons.append(Constraint(builtin("Delta0", 1), (va,)))
            else:
                cons.append(Constraint(_TAUT, (va,)))
        elif l1 > 0 and l2 > 0:
            cons.append(Constraint(builtin("OR", 2), (va, vb)))
        elif l1 < 0 and l2 > 0:
            cons.append(Constraint(builtin("Implies", 2), (va, vb)))
        elif l1 > 0 and l2 < 0:
            cons.append(Constraint(builtin("Implies", 2), (vb, va)))
        else:
            cons.append(Constraint(builtin("NAND", 2), (va, vb)))
    return Instance(variables, tuple(cons))


def count_2sat(cnf: CNF2, method: str = "auto") -> CountResult:
    """Model count of an acyclic 2CNF formula (checked by the engine)."""
    return count(cnf_to_instance(cnf), method)


_OR2 = builtin("OR", 2)
_NAND2 = builtin("NAND", 2)
_IMPLIES = builtin("Implies", 2)


def translate_to_implies(instance: Instance):
    """Rewrite an {OR2, NAND2, Implies} instance over {Implies, u0}.

    Returns (instance', scalar) with scalar * count(instance') = count(instance).
    """
    from .gadgets import nandk_from_implies, ork_from_implies, rewrite_instance

    for c in instance.constraints:
        if c.func not in (_OR2, _NAND2, _IMPLIES):
            raise InputError(
                f"translate_to_implies allows only OR2/NAND2/Implies, got {c.func.label()}"
            )
    out, s1 = rewrite_instance(instance, _OR2, ork_from_implies(2))
    out, s2 = rewrite_instance(out, _NAND2, nandk_from_implies(2))
    return out, s1 * s2


_U_MINUS = {
    (ONE, ZERO): ("neg",),     # [1,0]: a clause forcing the variable to 0
    (ZERO, ONE): ("pos",),
    (ZERO, ZERO): ("pos", "neg"),
    (ONE, ONE): ("taut",),
}


def implies_to_cnf(instance: Instance) -> CNF2:
    """Instances over {Implies} plus the restricted unaries back to 2CNF.

    The output's model count equals count(instance), free variables included.
    """
    index = {v: i + 1 for i, v in enumerate(instance.variables)}
    clauses = []
    for c in instance.constraints:
        f = c.func
        if f == _IMPLIES:
            u, v = (index[x] for x in c.vars)
            clauses.append((-u, v))
        elif f.arity == 1 and f.values in _U_MINUS:
            u = index[c.vars[0]]
            for kind in _U_MINUS[f.values]:
                if kind == "pos":
                    clauses.append((u, u))
                elif kind == "neg":
                    clauses.append((-u, -u))
                else:
                    clauses.append((u, -u))
        else:
            raise InputError(
                f"implies_to_cnf allows Implies and the unaries "
                f"[0,1],[1,0],[0,0],[1,1]; got {f.label()}"
            )
    return CNF2(len(instance.variables), tuple(clauses))


# -- circuits ----------------------------------------------------------------

@dataclass(frozen=True)
class Gate:
    id: int
    level: int
    type: str                 # "AND" | "OR" | "INPUT"
    children: tuple = ()
    input: int | None = None  # 1-based input bit
    negated: bool = False


@dataclass(frozen=True)
class Circuit:
    """A leveled, alternating, semi-unbounded tree circuit."""

    inputs: int
    root: int
    gates: tuple  # Gate records, unique ids

    def gate_map(self) -> dict:
        return {g.id: g for g in self.gates}

    def __post_init__(self):
        by_id = {}
        for g in self.gates:
            if g.id in by_id:
                raise InputError(f"duplicate gate id {g.id}")
            by_id[g.id] = g
        if self.root not in by_id:
            raise InputError(f"root gate {self.root} missing")

        parents: dict = {}
        for g in self.gates:
            if g.type == "INPUT":
                if g.level != 0:
                    raise InputError(f"input gate {g.id} must be at level 0")
                if g.children:
                    raise InputError(f"input gate {g.id} has children")
                if g.input is None or not 1 <= g.input <= self.inputs:
                    raise InputError(f"input gate {g.id} reads bad bit {g.input}")
            elif g.type in ("AND", "OR"):
                if g.level < 1:
                    raise InputError(f"gate {g.id} must be above level 0")
                if g.type == "AND" and len(g.children) != 2:
                    raise InputError(f"AND gate {g.id} must have fan-in 2")
                if g.type == "OR" and not g.children:
                    raise InputError(f"OR gate {g.id} has no children")
                for ch in g.children:
                    if ch not in by_id:
                        raise InputError(f"gate {g.id} references missing child {ch}")
                    if by_id[ch].level != g.level - 1:
                        raise InputError(
                            f"gate {g.id} (level {g.level}) has child {ch} "
                            f"not at level {g.level - 1}"
                        )
                    if ch in parents:
                        raise InputError(f"gate {ch} has fan-out above 1")
                    parents[ch] = g.id
            else:
                raise InputError(f"gate {g.id} has unknown type {g.type!r}")

        if by_id[self.root].level != max(g.level for g in self.gates):
            raise InputError("root must sit at the top level")
        for g in self.gates:
            if g.id != self.root and g.id not in parents:
                raise InputError(f"gate {g.id} is disconnected from the root")
        if self.root in parents:
            raise InputError("root gate has a parent")

        level_types: dict = {}
        for g in self.gates:
            if g.type == "INPUT":
                continue
            if level_types.setdefault(g.level, g.type) != g.type:
                raise InputError(f"mixed gate types at level {g.level}")
        levels = sorted(level_types)
        for a, b in zip(levels, levels[1:]):
            if b == a + 1 and level_types[a] == level_types[b]:
                raise InputError(
                    f"levels {a} and {b} must alternate between AND and OR"
                )


def circuit_from_json(obj) -> Circuit:
    if not isinstance(obj, dict):
        raise InputError("circuit form must be an object")
    for key in ("inputs", "gates", "root"):
        if key not in obj:
            raise InputError(f"circuit form needs {key!r}")
    gates = []
    for gobj in obj["gates"]:
        gates.append(Gate(
            id=int(gobj["id"]),
            level=int(gobj["level"]),
            type=str(gobj["type"]),
            children=tuple(int(c) for c in gobj.get("children", ())),
            input=int(gobj["input"]) if gobj.get("input") is not None else None,
            negated=bool(gobj.get("negated", False)),
        ))
    return Circuit(int(obj["inputs"]), int(obj["root"]), tuple(gates))


def circuit_to_json(circuit: Circuit) -> dict:
    gates = []
    for g in circuit.gates:
        entry = {"id": g.id, "level": g.level, "type": g.type}
        if g.type == "INPUT":
            entry["input"] = g.input
            entry["negated"] = g.negated
        else:
            entry["children"] = list(g.children)
        gates.append(entry)
    return {"inputs": circuit.inputs, "root": circuit.root, "gates": gates}


def parse_input_bits(text: str, n: int) -> tuple:
    if len(text) != n or any(ch not in "01" for ch in text):
        raise InputError(f"input must be {n} bits of 0/1, got {text!r}")
    return tuple(int(ch) for ch in text)


def _literal_value(gate: Gate, x) -> int:
    bit = x[gate.input - 1]
    return bit ^ 1 if gate.negated else bit


def count_subtrees(circuit: Circuit, x) -> int:
    """Accepting subtrees: inputs contribute their literal value, AND gates
    multiply their two children, OR gates sum their children."""
    if isinstance(x, str):
        x = parse_input_bits(x, circuit.inputs)
    if len(x) != circuit.inputs:
        raise InputError("input length does not match the circuit")
    val: dict = {}
    for g in sorted(circuit.gates, key=lambda g: (g.level, g.id)):
        if g.type == "INPUT":
            val[g.id] = _literal_value(g, x)
        elif g.type == "AND":
            val[g.id] = val[g.children[0]] * val[g.children[1]]
        else:
            val[g.id] = sum(val[ch] for ch in g.children)
    return val[circuit.root]


_EQ3 = builtin("EQ", 3)
_XOR2 = builtin("XOR", 2)


def compile_circuit(circuit: Circuit, x, mode: str = "direct"):
    """Compile (circuit, input) to an instance counting accepting subtrees.

    Returns (instance, scalar) with scalar * count(instance) equal to
    count_subtrees(circuit, x).  Direct mode materializes gate relations as
    truth tables; strict mode expands them over
    {OR3, OR2, XOR, u0, Delta0, Delta1}.
    """
    if mode not in ("direct", "strict"):
        raise InputError(f"unknown compile mode {mode!r}")
    if isinstance(x, str):
        x = parse_input_bits(x, circuit.inputs)
    if len(x) != circuit.inputs:
        raise InputError("input length does not match the circuit")

    gvar = {g.id: f"g{g.id}" for g in circuit.gates}
    variables = [gvar[g.id] for g in sorted(circuit.gates, key=lambda g: g.id)]
    cons = [Constraint(builtin("Delta1", 1), (gvar[circuit.root],))]
    scalar = ONE

    for g in sorted(circuit.gates, key=lambda g: g.id):
        if g.type == "INPUT":
            if not _literal_value(g, x):
                cons.append(Constraint(builtin("Delta0", 1), (gvar[g.id],)))
        elif g.type == "AND":
            trip = (gvar[g.id], gvar[g.children[0]], gvar[g.children[1]])
            if mode == "direct":
                cons.append(Constraint(_EQ3, trip))
            else:
                for t, ch in ((f"_a{g.id}_t1", trip[1]), (f"_a{g.id}_t2", trip[2])):
                    variables.append(t)
                    cons.append(Constraint(_XOR2, (trip[0], t)))
                    cons.append(Constraint(_XOR2, (t, ch)))
        else:
            m = len(g.children)
            wired = (gvar[g.id],) + tuple(gvar[ch] for ch in g.children)
            if mode == "direct":
                if m + 1 > DIRECT_ARITY_CAP:
                    raise InputError(
                        f"OR gate {g.id} fan-in {m} exceeds the direct-mode "
                        f"relation cap {DIRECT_ARITY_CAP}; use strict mode"
                    )
                cons.append(Constraint(or_gate_table(m), wired))
            else:
                tmpl = or_gate_realization(m)
                sub = dict(zip(tmpl.x_vars, wired))
                for a in tmpl.aux_vars:
                    fresh = f"_o{g.id}_{a}"
                    variables.append(fresh)
                    sub[a] = fresh
                for tc in tmpl.constraints:
                    cons.append(Constraint(tc.func, tuple(sub[v] for v in tc.vars)))
                scalar = scalar * tmpl.lam

    instance = Instance(tuple(variables), tuple(cons))
    ok, trace = instance_acyclic(instance)
    if not ok:
        raise InternalCheckError("compiled instance is not acyclic (compiler bug)",
                                 trace=trace)
    return instance, scalar
