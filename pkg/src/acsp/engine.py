"""Exact computation of the weighted count of an instance.

count(I) sums, over all assignments of the variables, the product of the
constraint values.  Three routes:

  * count_brute    - reference oracle, enumerates all 2^|Var| assignments;
  * count_join_tree - bottom-up dynamic programming over the join forest,
    sound for every acyclic instance;
  * count_ed_path  - fast two-branch propagation when every constraint is
    EQ2, XOR, unary or a scalar.

Variables appearing in no constraint double the count; forest components
multiply.  All three agree exactly wherever their preconditions overlap.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import FuncTable, Instance, builtin, index_tuple, tuple_index
from .errors import InputError, NotAcyclicError
from .hypergraph import join_forest, require_acyclic
from .rational import ComplexRat, ONE, TWO, ZERO

BRUTE_VAR_LIMIT = 24
DP_ARITY_CAP = 16

_EQ2 = builtin("EQ", 2).values
_XOR = builtin("XOR", 2).values


@dataclass
class CountResult:
    value: ComplexRat
    method: str
    stats: dict = field(default_factory=dict)


def count_brute(instance: Instance, limit: int = BRUTE_VAR_LIMIT) -> CountResult:
    """The defining sum, evaluated verbatim over every global assignment."""
    n = len(instance.variables)
    if n > limit:
        raise InputError(
            f"brute-force refused: {n} variables exceeds limit {limit}",
            variables=n, limit=limit,
        )
    pos = {v: n - 1 - i for i, v in enumerate(instance.variables)}
    compiled = []
    for c in instance.constraints:
        k = c.func.arity
        shifts = tuple((pos[v], k - 1 - t) for t, v in enumerate(c.vars))
        compiled.append((c.func.values, shifts))

    total = ZERO
    for bits in range(1 << n):
        w = None  # None stands for the empty product 1
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
            total = total + ONE
        elif w is not False:
            total = total + w
    return CountResult(total, "brute", {"assignments": 1 << n})


def count_join_tree(instance: Instance, arity_cap: int = DP_ARITY_CAP) -> CountResult:
    """Join-forest dynamic program; exact on every acyclic instance.

    Each node carries a table over the local assignments of its variable
    set; a child's table is marginalized onto the shared variables before
    multiplying into the parent.  Zero entries are kept (they are summands,
    not filters).
    """
    forest = join_forest(instance)  # raises NotAcyclicError / connectivity errors
    cons = instance.constraints
    var_lists = [sorted(c.var_set()) for c in cons]
    for vs in var_lists:
        if len(vs) > arity_cap:
            raise InputError(
                f"constraint scope {len(vs)} exceeds DP cap {arity_cap}",
                cap=arity_cap,
            )
    children = forest.children()

    nodes_visited = 0
    max_table = 0

    def local_values(i):
        """Table of f_i over assignments of its variable set, child-adjusted."""
        nonlocal nodes_visited, max_table
        vs = var_lists[i]
        kv = len(vs)
        vpos = {v: kv - 1 - t for t, v in enumerate(vs)}
        func = cons[i].func
        shifts = tuple((vpos[v], func.arity - 1 - t) for t, v in enumerate(cons[i].vars))

        margs = []
        for ch in children[i]:
            child_table = tables[ch]
            shared = [v for v in var_lists[ch] if v in vpos]
            ch_vs = var_lists[ch]
            ch_pos = {v: len(ch_vs) - 1 - t for t, v in enumerate(ch_vs)}
            marg: dict = {}
            for idx, val in enumerate(child_table):
                key = tuple((idx >> ch_pos[v]) & 1 for v in shared)
                marg[key] = marg.get(key, ZERO) + val
            margs.append((tuple(shared), marg))

        table = []
        for idx in range(1 << kv):
            fidx = 0
            for gp, sh in shifts:
                fidx |= ((idx >> gp) & 1) << sh
            val = func.values[fidx]
            for shared, marg in margs:
                if not val:
                    break
                key = tuple((idx >> vpos[v]) & 1 for v in shared)
                val = val * marg[key]
            table.append(val)
        nodes_visited += 1 << kv
        max_table = max(max_table, 1 << kv)
        return table

    tables: dict = {}
    total = ONE
    for root in forest.roots:
        # iterative post-order over the tree
        stack = [(root, False)]
        while stack:
            node, done = stack.pop()
            if done:
                tables[node] = local_values(node)
                continue
            stack.append((node, True))
            for ch in children[node]:
                stack.append((ch, False))
        tree_total = ZERO
        for val in tables[root]:
            tree_total = tree_total + val
        total = total * tree_total

    for _ in instance.free_variables():
        total = total * TWO
    return CountResult(total, "jointree",
                       {"nodes": nodes_visited, "max_table": max_table,
                        "trees": len(forest.roots)})


def ed_path_applicable(instance: Instance) -> bool:
    """True when every constraint is EQ2, XOR, unary, or a scalar."""
    for c in instance.constraints:
        f = c.func
        if f.arity <= 1:
            continue
        if f.arity == 2 and (f.values == _EQ2 or f.values == _XOR):
            continue
        return False
    return True


def count_ed_path(instance: Instance) -> CountResult:
    """Two-branch propagation along EQ2/XOR edges, one tree at a time.

    Picking the root's value determines every variable in its tree, so each
    tree contributes the sum of two branch weights; trees multiply.
    """
    for c in instance.constraints:
        f = c.func
        if f.arity > 2 or (f.arity == 2 and f.values != _EQ2 and f.values != _XOR):
            raise InputError(
                f"constraint {f.label()} is not EQ2/XOR/unary; use the join-tree route"
            )
    require_acyclic(instance)

    scalars = ONE
    adj: dict = {v: [] for v in instance.variables}
    unaries: dict = {v: [] for v in instance.variables}
    binaries: dict = {v: [] for v in instance.variables}
    for c in instance.constraints:
        f = c.func
        if f.arity == 0:
            scalars = scalars * f.values[0]
        elif f.arity == 1:
            unaries[c.vars[0]].append(f)
        else:
            a, b = c.vars
            adj[a].append((b, f))
            adj[b].append((a, f))
            binaries[a].append(c)

    seen: set = set()
    total = scalars
    steps = 0
    for start in instance.variables:
        if start in seen:
            continue
        # collect the component and a propagation order
        comp = [start]
        seen.add(start)
        order = [(start, None, None)]
        qi = 0
        while qi < len(order):
            v, _, _ = order[qi]
            qi += 1
            for w, f in adj[v]:
                if w not in seen:
                    seen.add(w)
                    comp.append(w)
                    order.append((w, v, f))

        comp_total = ZERO
        for root_val in (0, 1):
            assign = {}
            for v, src, f in order:
                if src is None:
                    assign[v] = root_val
                elif f.values == _EQ2:
                    assign[v] = assign[src]
                else:
                    assign[v] = 1 - assign[src]
            w = ONE
            ok = True
            for v in comp:
                for f in unaries[v]:
                    val = f.values[assign[v]]
                    if not val:
                        ok = False
                        break
                    w = w * val
                if not ok:
                    break
                for c in binaries[v]:
                    if not c.func.value((assign[c.vars[0]], assign[c.vars[1]])):
                        ok = False
                        break
                if not ok:
                    break
            steps += len(comp)
            if ok:
                comp_total = comp_total + w
        total = total * comp_total
    return CountResult(total, "ed", {"nodes": steps})


def count_auto(instance: Instance) -> CountResult:
    """ED propagation when applicable, otherwise the join-tree DP."""
    if ed_path_applicable(instance):
        return count_ed_path(instance)
    return count_join_tree(instance)


METHODS = {
    "auto": count_auto,
    "brute": count_brute,
    "jointree": count_join_tree,
    "ed": count_ed_path,
}


def count(instance: Instance, method: str = "auto") -> CountResult:
    try:
        fn = METHODS[method]
    except KeyError:
        raise InputError(f"unknown method {method!r}; choose from {sorted(METHODS)}")
    return fn(instance)


def witness_chain(instance: Instance):
    """Extract pairwise-agreeing nonzero local assignments along the forest.

    Returns a list of (constraint index, {var: bit}) or None when the count
    is zero.  Whenever the count is nonzero such a chain exists: pick a
    nonzero root entry, then recursively a child entry that agrees on the
    shared variables and has a nonzero subtree weight.
    """
    forest = join_forest(instance)
    cons = instance.constraints
    var_lists = [sorted(c.var_set()) for c in cons]
    children = forest.children()

    tables: dict = {}

    def fill(node):
        for ch in children[node]:
            fill(ch)
        vs = var_lists[node]
        kv = len(vs)
        vpos = {v: kv - 1 - t for t, v in enumerate(vs)}
        func = cons[node].func
        table = []
        for idx in range(1 << kv):
            bits = {v: (idx >> vpos[v]) & 1 for v in vs}
            val = func.value(tuple(bits[v] for v in cons[node].vars))
            for ch in children[node]:
                if not val:
                    break
                acc = ZERO
                for cidx, cval in enumerate(tables[ch]):
                    cbits = index_tuple(cidx, len(var_lists[ch]))
                    cassign = dict(zip(var_lists[ch], cbits))
                    if all(cassign[v] == bits[v] for v in cassign if v in bits):
                        acc = acc + cval
                val = val * acc
            table.append(val)
        tables[node] = table

    out = []
    for root in forest.roots:
        fill(root)
        hit = next((i for i, v in enumerate(tables[root]) if v), None)
        if hit is None:
            return None
        stack = [(root, hit)]
        while stack:
            node, idx = stack.pop()
            vs = var_lists[node]
            assign = dict(zip(vs, index_tuple(idx, len(vs))))
            out.append((node, assign))
            for ch in children[node]:
                cvs = var_lists[ch]
                pick = None
                for cidx, cval in enumerate(tables[ch]):
                    if not cval:
                        continue
                    cassign = dict(zip(cvs, index_tuple(cidx, len(cvs))))
                    if all(cassign[v] == assign[v] for v in cassign if v in assign):
                        pick = cidx
                        break
                if pick is None:
                    return None
                stack.append((ch, pick))
    out.sort()
    return out
