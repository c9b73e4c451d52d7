"""Gadget realizations: mechanically verified acyclic constructions.

A realization states that a target function equals lambda times the sum,
over all assignments of its auxiliary variables, of the product of its base
constraints, and that the base constraint hypergraph is acyclic.  Both
halves are checked by exhaustive enumeration in verify_realization; every
catalog constructor is expected to pass it.

rewrite_instance substitutes a verified realization for every occurrence of
its target inside an instance and returns the accumulated scalar, with the
contract  count(I) = scalar * count(I').
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .core import (Constraint, FuncTable, Instance, builtin, index_tuple,
                   make_instance, u0, u1)
from .classify import is_degenerate, is_nowhere_zero
from .errors import InputError, InternalCheckError, NotAcyclicError
from .hypergraph import Hypergraph, gyo_reduce, instance_acyclic
from .rational import ComplexRat, MINUS_ONE, ONE, ZERO, cr

VERIFY_LIMIT = 20


@dataclass(frozen=True)
class GadgetRealization:
    """target(x) = lam * sum over aux assignments of the base product."""

    target: FuncTable
    x_vars: tuple
    aux_vars: tuple
    constraints: tuple
    lam: ComplexRat
    name: str | None = None

    def variables(self) -> tuple:
        return self.x_vars + self.aux_vars

    def base_hypergraph(self) -> Hypergraph:
        edges = tuple(c.var_set() for c in self.constraints)
        return Hypergraph(self.variables(), edges, tuple(range(len(edges))))


@dataclass
class VerifyReport:
    ok: bool
    identity_ok: bool
    acyclic: bool
    counterexample: dict | None = None
    gyo_trace: list = field(default_factory=list)

    def reason(self) -> str | None:
        if self.ok:
            return None
        if not self.identity_ok:
            return "defining identity fails"
        return "gadget hypergraph is not acyclic"


def _check_not_linked(realization: GadgetRealization, allow_linked: bool):
    if allow_linked:
        return
    flagged = []
    if realization.target.linked:
        flagged.append("target")
    for c in realization.constraints:
        if c.func.linked:
            flagged.append(c.func.label())
    if flagged:
        raise InputError(
            "realization uses linked tables (refused unless overridden): "
            + ", ".join(flagged)
        )


def verify_realization(realization: GadgetRealization,
                       limit: int = VERIFY_LIMIT,
                       allow_linked: bool = False) -> VerifyReport:
    """Exhaustively check the defining identity and the acyclicity."""
    _check_not_linked(realization, allow_linked)
    k = len(realization.x_vars)
    m = len(realization.aux_vars)
    if realization.target.arity != k:
        raise InputError("target arity does not match the x-variable list")
    if k + m > limit:
        raise InputError(
            f"verification refused: {k}+{m} variables exceeds limit {limit}",
            limit=limit,
        )

    acyclic, trace = gyo_reduce(realization.base_hypergraph())

    n = k + m
    order = realization.variables()
    pos = {v: n - 1 - i for i, v in enumerate(order)}
    compiled = []
    for c in realization.constraints:
        ka = c.func.arity
        shifts = tuple((pos[v], ka - 1 - t) for t, v in enumerate(c.vars))
        compiled.append((c.func.values, shifts))

    totals = [ZERO] * (1 << k)
    for bits in range(1 << n):
        w = None
        for vals, shifts in compiled:
            idx = 0
            for gp, sh in shifts:
                idx |= ((bits >> gp) & 1) << sh
            v = vals[idx]
            if not v:
                w = False
                break
            w = v if w is None else w * v
        if w is None:
            totals[bits >> m] = totals[bits >> m] + ONE
        elif w is not False:
            totals[bits >> m] = totals[bits >> m] + w

    identity_ok = True
    counterexample = None
    for xidx in range(1 << k):
        got = realization.lam * totals[xidx]
        want = realization.target.values[xidx]
        if got != want:
            identity_ok = False
            bits = index_tuple(xidx, k)
            counterexample = {
                "assignment": dict(zip(realization.x_vars, bits)),
                "expected": want.to_pair(),
                "got": got.to_pair(),
            }
            break

    return VerifyReport(identity_ok and acyclic, identity_ok, acyclic,
                        counterexample, trace)


# -- catalog ---------------------------------------------------------------

def _xvars(k):
    return tuple(f"x{i}" for i in range(1, k + 1))


def eq3_from_eq2() -> GadgetRealization:
    x = _xvars(3)
    eq2 = builtin("EQ", 2)
    cons = (Constraint(eq2, (x[0], x[1])), Constraint(eq2, (x[1], x[2])))
    return GadgetRealization(builtin("EQ", 3), x, (), cons, ONE, "G_EQ3FromEQ2")


def andk_from_eqk(k: int) -> GadgetRealization:
    if k < 2:
        raise InputError("G_ANDkFromEQk needs k >= 2")
    x = _xvars(k)
    cons = (Constraint(builtin("EQ", k), x),
            Constraint(builtin("Delta1", 1), (x[0],)))
    return GadgetRealization(builtin("AND", k), x, (), cons, ONE, "G_ANDkFromEQk")


def implies_from_or_xor() -> GadgetRealization:
    x = _xvars(2)
    cons = (Constraint(builtin("OR", 2), ("z", x[1])),
            Constraint(builtin("XOR", 2), (x[0], "z")))
    return GadgetRealization(builtin("Implies", 2), x, ("z",), cons, ONE,
                             "G_ImpliesFromORXOR")


def eq2_from_implies() -> GadgetRealization:
    x = _xvars(2)
    imp = builtin("Implies", 2)
    cons = (Constraint(imp, (x[0], x[1])), Constraint(imp, (x[1], x[0])))
    return GadgetRealization(builtin("EQ", 2), x, (), cons, ONE, "G_EQ2FromImplies")


def or2_from_nand2() -> GadgetRealization:
    x = _xvars(2)
    nand = builtin("NAND", 2)
    cons = (Constraint(nand, (x[0], "z")), Constraint(nand, (x[1], "z")),
            Constraint(u0(), ("z",)))
    return GadgetRealization(builtin("OR", 2), x, ("z",), cons, ONE,
                             "G_OR2FromNAND2")


def nand2_from_or2() -> GadgetRealization:
    x = _xvars(2)
    orr = builtin("OR", 2)
    cons = (Constraint(orr, (x[0], "z")), Constraint(orr, (x[1], "z")),
            Constraint(u0(), ("z",)))
    return GadgetRealization(builtin("NAND", 2), x, ("z",), cons, MINUS_ONE,
                             "G_NAND2FromOR2")


def ork_from_implies(k: int) -> GadgetRealization:
    if k < 2:
        raise InputError("G_ORkFromImplies needs k >= 2")
    x = _xvars(k)
    imp = builtin("Implies", 2)
    cons = tuple(Constraint(imp, (xi, "w")) for xi in x) + (Constraint(u0(), ("w",)),)
    return GadgetRealization(builtin("OR", k), x, ("w",), cons, MINUS_ONE,
                             "G_ORkFromImplies")


def nandk_from_implies(k: int) -> GadgetRealization:
    if k < 2:
        raise InputError("G_NANDkFromImplies needs k >= 2")
    x = _xvars(k)
    imp = builtin("Implies", 2)
    cons = tuple(Constraint(imp, ("w", xi)) for xi in x) + (Constraint(u0(), ("w",)),)
    return GadgetRealization(builtin("NAND", k), x, ("w",), cons, ONE,
                             "G_NANDkFromImplies")


def ork_via_or2_xor(k: int) -> GadgetRealization:
    return transitive_compose(ork_from_implies(k), implies_from_or_xor())


def nandk_via_or2_xor(k: int) -> GadgetRealization:
    return transitive_compose(nandk_from_implies(k), implies_from_or_xor())


def _binary_table(v00, v01, v10, v11, name="f") -> FuncTable:
    return FuncTable(2, (v00, v01, v10, v11), name=name)


def or2_from_f(a: ComplexRat, b: ComplexRat) -> GadgetRealization:
    """OR2 from f=(1,a,0,b): two f's joined on an auxiliary plus unaries."""
    if not a or not b:
        raise InputError("G_OR2FromF requires ab != 0 (a and b nonzero)")
    f = _binary_table(ONE, a, ZERO, b)
    u = FuncTable(1, (b / a, ONE), name="u")
    up = FuncTable(1, (-(a * a), ONE), name="u'")
    x = _xvars(2)
    cons = (Constraint(f, (x[0], "z")), Constraint(f, (x[1], "z")),
            Constraint(u, (x[0],)), Constraint(u, (x[1],)),
            Constraint(up, ("z",)))
    lam = ONE / (b * b)
    return GadgetRealization(builtin("OR", 2), x, ("z",), cons, lam, "G_OR2FromF")


def nand2_from_f(a: ComplexRat, b: ComplexRat) -> GadgetRealization:
    """NAND2 from f=(0,a,b,1)."""
    if not a or not b:
        raise InputError("G_NAND2FromF requires ab != 0 (a and b nonzero)")
    f = _binary_table(ZERO, a, b, ONE)
    u = FuncTable(1, (ONE, a), name="u")
    up = FuncTable(1, (MINUS_ONE / (b * b), ONE), name="u'")
    x = _xvars(2)
    cons = (Constraint(f, (x[0], "z")), Constraint(f, (x[1], "z")),
            Constraint(u, (x[0],)), Constraint(u, (x[1],)),
            Constraint(up, ("z",)))
    lam = ONE / (a * a)
    return GadgetRealization(builtin("NAND", 2), x, ("z",), cons, lam,
                             "G_NAND2FromF")


def nand2_from_nz(a: ComplexRat, b: ComplexRat, c: ComplexRat) -> GadgetRealization:
    """NAND2 from a nowhere-zero f=(1,a,b,c) with ab != +-c.

    Two joined copies of h(x,y) = sum_z f(x,z)f(y,z)v(z) (each inlined) feed
    the (0,a',a',1)-shaped gadget; the scalars collect into lambda.
    """
    if not (a and b and c):
        raise InputError("G_NAND2FromNZ requires abc != 0")
    ab = a * b
    if ab == c:
        raise InputError("G_NAND2FromNZ requires ab != c (got ab == c)")
    if ab == -c:
        raise InputError("G_NAND2FromNZ requires ab != -c (got ab == -c)")
    f = _binary_table(ONE, a, b, c)
    xhat = a / (ab + c)
    v = FuncTable(1, (a * a, MINUS_ONE), name="v")
    u = FuncTable(1, (ONE, xhat), name="u")
    up = FuncTable(1, (MINUS_ONE / (xhat * xhat), ONE), name="u'")
    x = _xvars(2)
    cons = (
        Constraint(f, (x[0], "z1")), Constraint(f, ("w", "z1")),
        Constraint(v, ("z1",)),
        Constraint(f, (x[1], "z2")), Constraint(f, ("w", "z2")),
        Constraint(v, ("z2",)),
        Constraint(u, (x[0],)), Constraint(u, (x[1],)),
        Constraint(up, ("w",)),
    )
    spread = ab * ab - c * c
    lam = ONE / (xhat * xhat * spread * spread)
    return GadgetRealization(builtin("NAND", 2), x, ("w", "z1", "z2"), cons, lam,
                             "G_NAND2FromNZ")


def nz_intermediate(a: ComplexRat, b: ComplexRat, c: ComplexRat) -> FuncTable:
    """h(x,y) = sum_z f(x,z)f(y,z)v(z) for f=(1,a,b,c), v=[a^2,-1];
    equals (ab-c) * (0, a, a, ab+c)."""
    f = _binary_table(ONE, a, b, c)
    v = (a * a, MINUS_ONE)
    vals = []
    for xb in (0, 1):
        for yb in (0, 1):
            acc = ZERO
            for zb in (0, 1):
                acc = acc + f.value((xb, zb)) * f.value((yb, zb)) * v[zb]
            vals.append(acc)
    return FuncTable(2, tuple(vals), name="h")


def nand2_from_anti_dg(a: ComplexRat, b: ComplexRat) -> GadgetRealization:
    """NAND2 from f=(1,a,b,-ab) with ab != 0.

    A path of three f's with interior and boundary unaries; this shape is
    needed because any single-auxiliary pairing of two copies of f keeps the
    (1,1) entry proportional to the (0,0) entry and can never reach a
    NAND-shaped table.
    """
    if not a or not b:
        raise InputError("G_NAND2FromAntiDG requires ab != 0")
    ab = a * b
    f = _binary_table(ONE, a, b, -ab)
    half = cr(Fraction(1, 2))
    uz = FuncTable(1, (cr(Fraction(3, 2)), half / ab), name="uz")
    uw = FuncTable(1, (cr(2), ONE / ab), name="uw")
    wx = FuncTable(1, (ONE, cr(Fraction(5, 4)) / b), name="wx")
    wy = FuncTable(1, (cr(Fraction(1, 5)), (ONE / cr(3)) / a), name="wy")
    x = _xvars(2)
    cons = (
        Constraint(f, (x[0], "z")), Constraint(f, ("z", "w")),
        Constraint(f, ("w", x[1])),
        Constraint(uz, ("z",)), Constraint(uw, ("w",)),
        Constraint(wx, (x[0],)), Constraint(wy, (x[1],)),
    )
    return GadgetRealization(builtin("NAND", 2), x, ("z", "w"), cons, ONE,
                             "G_NAND2FromAntiDG")


def _sum_wheel_constraints(g: str, c1: str, c2: str, fresh) -> tuple:
    """Constraints realizing the relation [g = c1 + c2] (exactly-one step)
    over {OR3, OR2, XOR, u0}, with an acyclic hypergraph and scalar 1.

    The relation's value tensor has tensor rank 3, so no tree-shaped gadget
    over this signature can express it (every OR3 splits into two product
    tensors).  What does work is a *wheel*: a central OR3(p,q,r) weighted by
    u0(r), surrounded by three OR3s each sharing a pair of the central
    variables, with g, c1, c2 attached through short OR2/XOR/u0 chains.  The
    chains realize the integer transfer matrices

        g:  u0 . XOR . OR2 . u0  =  [[1,-1],[0,1]]
        c1:            OR2 . u0  =  [[0,-1],[1,-1]]
        c2:  XOR . OR2 . OR2 . u0  =  [[1,-2],[1,-1]]

    whose column-0 / row-sum pairs make the wheel's expansion collapse to
    exactly [g = c1 + c2]; the chain signs cancel.  The containment rule
    removes the satellite OR3s once the chains are reduced, so the whole
    hypergraph is acyclic.
    """
    p, q, r = fresh("p"), fresh("q"), fresh("r")
    gp, tg = fresh("gp"), fresh("tg")
    cp1 = fresh("cp1")
    cp2, t1, t2 = fresh("cp2"), fresh("t1"), fresh("t2")
    or2 = builtin("OR", 2)
    or3 = builtin("OR", 3)
    xor = builtin("XOR", 2)
    un0 = u0()
    return (
        # central triple
        Constraint(or3, (p, q, r)), Constraint(un0, (r,)),
        # g branch
        Constraint(or3, (p, q, gp)),
        Constraint(un0, (g,)),
        Constraint(xor, (g, tg)), Constraint(or2, (tg, gp)),
        Constraint(un0, (gp,)),
        # c1 branch
        Constraint(or3, (q, r, cp1)),
        Constraint(or2, (c1, cp1)), Constraint(un0, (cp1,)),
        # c2 branch
        Constraint(or3, (r, p, cp2)),
        Constraint(xor, (c2, t1)), Constraint(or2, (t1, t2)),
        Constraint(or2, (t2, cp2)), Constraint(un0, (cp2,)),
    )


def or_gate_table(m: int) -> FuncTable:
    """Relation on (g, c_1..c_m): the children bits sum to the gate bit."""
    vals = []
    for idx in range(1 << (m + 1)):
        bits = index_tuple(idx, m + 1)
        vals.append(ONE if sum(bits[1:]) == bits[0] else ZERO)
    return FuncTable(m + 1, tuple(vals), name=f"ORGATE_{m}")


def _make_fresh(aux: list):
    counter = [0]

    def fresh(base):
        counter[0] += 1
        name = f"{base}{counter[0]}"
        aux.append(name)
        return name

    return fresh


def or_gate_realization(m: int) -> GadgetRealization:
    """The OR-gate relation [children sum to the gate bit] over the strict
    signature {OR3, OR2, XOR, u0, Delta0, Delta1}; lambda = 1.

    Fan-in 1 is a binary equality (XOR pair); larger fan-ins chain sum
    wheels through running-sum variables.
    """
    if m < 1:
        raise InputError("or gate needs at least one child")
    g = "x1"
    cvars = tuple(f"x{i + 2}" for i in range(m))
    aux: list = []
    fresh = _make_fresh(aux)
    xor = builtin("XOR", 2)
    cons = []
    if m == 1:
        t = fresh("t")
        cons = [Constraint(xor, (g, t)), Constraint(xor, (t, cvars[0]))]
    else:
        acc = cvars[0]
        for i in range(1, m):
            out = g if i == m - 1 else fresh("s")
            cons.extend(_sum_wheel_constraints(out, acc, cvars[i], fresh))
            acc = out
    return GadgetRealization(or_gate_table(m), (g,) + cvars, tuple(aux),
                             tuple(cons), ONE, f"ORGATE_{m}")


def one_chain(k: int) -> GadgetRealization:
    """ONE_k over {OR3, OR2, XOR, u0, Delta0, Delta1}.

    ONE_1 is Delta1 and ONE_2 is XOR; for k >= 3 the first k-1 inputs feed a
    chain of sum wheels and the final input must complement the running sum
    (an XOR), which keeps the realization small enough to verify
    exhaustively at small k.
    """
    if k < 1:
        raise InputError("G_ONE needs k >= 1")
    x = _xvars(k)
    if k == 1:
        cons = (Constraint(builtin("Delta1", 1), (x[0],)),)
        return GadgetRealization(builtin("ONE", 1), x, (), cons, ONE, "G_ONE")
    xor = builtin("XOR", 2)
    if k == 2:
        cons = (Constraint(xor, (x[0], x[1])),)
        return GadgetRealization(builtin("ONE", 2), x, (), cons, ONE, "G_ONE")
    aux: list = []
    fresh = _make_fresh(aux)
    cons = []
    acc = x[0]
    for i in range(1, k - 1):
        out = fresh("s")
        cons.extend(_sum_wheel_constraints(out, acc, x[i], fresh))
        acc = out
    cons.append(Constraint(xor, (acc, x[k - 1])))
    return GadgetRealization(builtin("ONE", k), x, tuple(aux), tuple(cons),
                             ONE, "G_ONE")


def f_or_gate() -> GadgetRealization:
    vals = []
    for idx in range(8):
        xb, yb, zb = index_tuple(idx, 3)
        vals.append(ONE if (xb | yb) == zb else ZERO)
    target = FuncTable(3, tuple(vals), name="F_OR")
    x = _xvars(3)
    cons = (
        Constraint(builtin("OR", 3), (x[0], x[1], "w")),
        Constraint(builtin("NAND", 2), (x[2], "w")),
        Constraint(u1(), (x[2],)),
        Constraint(u0(), ("w",)),
    )
    return GadgetRealization(target, x, ("w",), cons, ONE, "G_FOR")


def f_and_gate() -> GadgetRealization:
    vals = []
    for idx in range(8):
        xb, yb, zb = index_tuple(idx, 3)
        vals.append(ONE if (xb & yb) == zb else ZERO)
    target = FuncTable(3, tuple(vals), name="F_AND")
    x = _xvars(3)
    cons = (
        Constraint(builtin("NAND", 3), (x[0], x[1], "w")),
        Constraint(builtin("OR", 2), (x[2], "w")),
        Constraint(u0(), (x[2],)),
        Constraint(u0(), ("w",)),
    )
    return GadgetRealization(target, x, ("w",), cons, MINUS_ONE, "G_FAND")


def f_not_gate() -> GadgetRealization:
    x = _xvars(2)
    cons = (Constraint(builtin("XOR", 2), (x[0], x[1])),)
    target = FuncTable(2, builtin("XOR", 2).values, name="F_NOT")
    return GadgetRealization(target, x, (), cons, ONE, "G_FNOT")


def xor_triangle() -> GadgetRealization:
    """The OR2/OR2/OR2/u1 expression for XOR whose hypergraph is a triangle.

    The identity holds but the realization must be rejected: its hypergraph
    is cyclic.
    """
    x = _xvars(2)
    orr = builtin("OR", 2)
    cons = (Constraint(orr, (x[0], "z")), Constraint(orr, (x[1], "z")),
            Constraint(orr, (x[0], x[1])), Constraint(u1(), ("z",)))
    return GadgetRealization(builtin("XOR", 2), x, ("z",), cons, ONE,
                             "XOR_triangle")


CATALOG = {
    "G_EQ3FromEQ2": (eq3_from_eq2, ()),
    "G_ANDkFromEQk": (andk_from_eqk, ("k",)),
    "G_ImpliesFromORXOR": (implies_from_or_xor, ()),
    "G_EQ2FromImplies": (eq2_from_implies, ()),
    "G_OR2FromNAND2": (or2_from_nand2, ()),
    "G_NAND2FromOR2": (nand2_from_or2, ()),
    "G_ORkFromImplies": (ork_from_implies, ("k",)),
    "G_NANDkFromImplies": (nandk_from_implies, ("k",)),
    "G_ORkViaOR2XOR": (ork_via_or2_xor, ("k",)),
    "G_NANDkViaOR2XOR": (nandk_via_or2_xor, ("k",)),
    "G_OR2FromF": (or2_from_f, ("a", "b")),
    "G_NAND2FromF": (nand2_from_f, ("a", "b")),
    "G_NAND2FromNZ": (nand2_from_nz, ("a", "b", "c")),
    "G_NAND2FromAntiDG": (nand2_from_anti_dg, ("a", "b")),
    "G_ONE": (one_chain, ("k",)),
    "G_FOR": (f_or_gate, ()),
    "G_FAND": (f_and_gate, ()),
    "G_FNOT": (f_not_gate, ()),
}


def parse_param(text: str) -> ComplexRat:
    """Parse a scalar parameter: "3/2" (real) or "re:im" (complex)."""
    if ":" in text:
        re_s, im_s = text.split(":", 1)
        return ComplexRat(Fraction(re_s), Fraction(im_s))
    return ComplexRat.parse(text)


def build_catalog_gadget(name: str, params=()) -> GadgetRealization:
    if name not in CATALOG:
        raise InputError(f"unknown gadget {name!r}; known: {', '.join(sorted(CATALOG))}")
    builder, spec = CATALOG[name]
    if len(params) != len(spec):
        raise InputError(
            f"gadget {name} expects parameters ({', '.join(spec)}), got {len(params)}"
        )
    args = []
    for label, raw in zip(spec, params):
        if label == "k":
            try:
                args.append(int(raw))
            except (TypeError, ValueError):
                raise InputError(f"gadget {name}: parameter k must be an integer")
        else:
            args.append(raw if isinstance(raw, ComplexRat) else parse_param(str(raw)))
    return builder(*args)


# -- composition and instance rewriting ------------------------------------

def transitive_compose(outer: GadgetRealization, inner: GadgetRealization,
                       verify: bool = True,
                       limit: int = VERIFY_LIMIT) -> GadgetRealization:
    """Substitute inner's realization for every base occurrence of its target.

    lambda multiplies as outer.lam * inner.lam^occurrences; the result is
    re-verified (identity and acyclicity) and a failure is a hard error.
    """
    hits = [i for i, c in enumerate(outer.constraints) if c.func == inner.target]
    if not hits:
        raise InputError("outer realization never mentions the inner target")

    aux = list(outer.aux_vars)
    cons = []
    occ = 0
    taken = set(outer.x_vars) | set(outer.aux_vars)
    for i, c in enumerate(outer.constraints):
        if i not in hits:
            cons.append(c)
            continue
        sub = dict(zip(inner.x_vars, c.vars))
        for a in inner.aux_vars:
            fresh = f"{a}.{occ}"
            while fresh in taken:
                fresh = "_" + fresh
            taken.add(fresh)
            aux.append(fresh)
            sub[a] = fresh
        for ic in inner.constraints:
            cons.append(Constraint(ic.func, tuple(sub[v] for v in ic.vars),
                                   linked=ic.linked))
        occ += 1

    lam = outer.lam * (inner.lam ** occ)
    name = f"{outer.name or 'outer'}+{inner.name or 'inner'}"
    combined = GadgetRealization(outer.target, outer.x_vars, tuple(aux),
                                 tuple(cons), lam, name)
    if verify and len(combined.variables()) <= limit:
        report = verify_realization(combined, limit=limit)
        if not report.ok:
            raise InternalCheckError(
                f"composition {name} is unsound: {report.reason()}",
                counterexample=report.counterexample,
            )
    return combined


def rewrite_instance(instance: Instance, func: FuncTable,
                     realization: GadgetRealization,
                     allow_linked: bool = False):
    """Replace every constraint using ``func`` by the realization's base.

    Returns (new instance, scalar) with count(I) = scalar * count(I').  The
    output's acyclicity is re-verified; a violation raises NotAcyclicError
    carrying both GYO traces.
    """
    _check_not_linked(realization, allow_linked)
    if realization.target != func:
        raise InputError("realization target does not match the function to rewrite")
    ok_in, trace_in = instance_acyclic(instance)
    if not ok_in:
        raise NotAcyclicError("input instance is not acyclic", trace=trace_in)

    hits = [i for i, c in enumerate(instance.constraints) if c.func == func]
    if not hits:
        return instance, ONE

    taken = set(instance.variables)
    variables = list(instance.variables)
    cons = []
    occ = 0
    for i, c in enumerate(instance.constraints):
        if i not in hits:
            cons.append(c)
            continue
        sub = dict(zip(realization.x_vars, c.vars))
        for a in realization.aux_vars:
            fresh = f"_r{occ}_{a}"
            while fresh in taken:
                fresh = "_" + fresh
            taken.add(fresh)
            variables.append(fresh)
            sub[a] = fresh
        for rc in realization.constraints:
            cons.append(Constraint(rc.func, tuple(sub[v] for v in rc.vars),
                                   linked=rc.linked))
        occ += 1

    out = Instance(tuple(variables), tuple(cons))
    ok_out, trace_out = instance_acyclic(out)
    if not ok_out:
        raise NotAcyclicError(
            "rewritten instance is not acyclic",
            trace=trace_out, input_trace=trace_in,
        )
    return out, realization.lam ** occ


# -- the binary pinning search ---------------------------------------------

@dataclass(frozen=True)
class PinSearchResult:
    pins: dict        # 1-based position -> pinned bit
    pair: tuple       # the two surviving positions, in output order
    lam: ComplexRat
    table: FuncTable  # the normalized binary table (1, x, y, z)


def lemma_form_ok(table: FuncTable) -> bool:
    """(1, x, y, z) with xyz != 0 and xy != z."""
    if table.arity != 2:
        return False
    v = table.values
    return (v[0] == ONE and bool(v[1]) and bool(v[2]) and bool(v[3])
            and v[1] * v[2] != v[3])


def pin_search_binary(f: FuncTable):
    """Search pinnings of all but two coordinates for a normalized table
    of the form (1, x, y, z) with xyz != 0 and xy != z.

    Preconditions: f nowhere zero, not degenerate, arity >= 2.  Under them
    such a pinning exists; None is returned only if the search is exhausted
    (which the tests treat as a failure).
    """
    if f.arity < 2:
        raise InputError("pin search needs arity >= 2")
    if not is_nowhere_zero(f):
        raise InputError("pin search requires a nowhere-zero table")
    if is_degenerate(f):
        raise InputError("pin search requires a non-degenerate table")
    k = f.arity
    positions = list(range(1, k + 1))
    from itertools import product as iproduct

    for i in positions:
        for j in positions:
            if i == j:
                continue
            others = [p for p in positions if p not in (i, j)]
            for pinning in iproduct((0, 1), repeat=len(others)):
                assign = dict(zip(others, pinning))
                vals = []
                for b1 in (0, 1):
                    for b2 in (0, 1):
                        assign[i] = b1
                        assign[j] = b2
                        vals.append(f.value(tuple(assign[p] for p in positions)))
                lam = ONE / vals[0]
                table = FuncTable(2, tuple(lam * v for v in vals))
                if lemma_form_ok(table):
                    pins = dict(zip(others, pinning))
                    return PinSearchResult(pins, (i, j), lam, table)
    return None
