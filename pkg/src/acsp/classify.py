"""Membership predicates for constraint functions and the complexity verdicts.

Tiers (for a finite function set F, with unary constraints always free):

  * with free XOR:  F inside the equality/disequality tier -> Tractable_FLC,
    otherwise SharpLOGCFL_Hard;
  * without free XOR: the same tractable tier, then Acyc2SAT_Hard when every
    function is a product of unaries and implications, otherwise
    SharpLOGCFL_Hard.

The predicates:

  * is_nowhere_zero  - no zero entries;
  * is_degenerate    - a product of unary functions (rank-1 value tensor);
  * is_eq_xor_product - a product of unaries, binary equalities and binary
    disequalities (the tractable tier);
  * is_implication_product - a product of unaries and implications,
    operationalized as min/max-closed support plus the lattice identity
    f(x)f(y) = f(x AND y)f(x OR y) on the support.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .core import FuncTable, index_tuple
from .errors import InputError, InternalCheckError
from .rational import ComplexRat, ONE, ZERO


@dataclass(frozen=True)
class Support:
    """The set of inputs where a function is nonzero."""

    arity: int
    tuples: frozenset

    def masks(self):
        """Support points as bit-ints (table indices double as bitmasks)."""
        return sorted(idx for idx in self.tuples_as_indices())

    def tuples_as_indices(self):
        k = self.arity
        out = set()
        for t in self.tuples:
            idx = 0
            for b in t:
                idx = (idx << 1) | b
            out.add(idx)
        return out


def support(f: FuncTable) -> Support:
    k = f.arity
    tuples = frozenset(index_tuple(i, k) for i, v in enumerate(f.values) if v)
    return Support(k, tuples)


def _support_indices(f: FuncTable) -> list:
    return [i for i, v in enumerate(f.values) if v]


def is_nowhere_zero(f: FuncTable) -> bool:
    return all(f.values)


def is_degenerate(f: FuncTable) -> bool:
    """True iff f is a product of unary functions.

    Checked as: every mode flattening of the value tensor has rank <= 1.
    """
    k = f.arity
    if k <= 1:
        return True
    if f.is_zero():
        return True
    for mode in range(1, k + 1):
        sh = k - mode
        r0 = [v for i, v in enumerate(f.values) if not ((i >> sh) & 1)]
        r1 = [v for i, v in enumerate(f.values) if (i >> sh) & 1]
        if not any(r0) or not any(r1):
            continue
        ratio = None
        for a, b in zip(r0, r1):
            if not a and not b:
                continue
            if not a or not b:
                return False
            q = b / a
            if ratio is None:
                ratio = q
            elif q != ratio:
                return False
    return True


def unary_factors(f: FuncTable):
    """Extract unary factors with product exactly f, or None if not degenerate.

    The round trip is verified before returning.
    """
    k = f.arity
    if k == 0:
        return []
    if f.is_zero():
        zero = FuncTable(1, (ZERO, ZERO))
        rest = FuncTable(1, (ONE, ONE))
        return [zero] + [rest] * (k - 1)
    anchor = next(i for i, v in enumerate(f.values) if v)
    abits = index_tuple(anchor, k)
    scale = f.values[anchor]
    factors = []
    for pos in range(k):
        pair = []
        for b in (0, 1):
            xbits = list(abits)
            xbits[pos] = b
            pair.append(f.value(tuple(xbits)))
        factors.append(pair)
    # normalize so the product over the anchor point equals f at the anchor
    denom = scale ** (k - 1)
    factors[0] = [v / denom for v in factors[0]]
    tables = [FuncTable(1, tuple(pair)) for pair in factors]
    for idx in range(1 << k):
        bits = index_tuple(idx, k)
        prod = ONE
        for pos, b in enumerate(bits):
            prod = prod * tables[pos].values[b]
        if prod != f.values[idx]:
            return None
    return tables


def _signed_components(sup: list, k: int):
    """Group coordinates related (equal or complementary) on every support point.

    Returns (rep, parity): rep[i] is the smallest coordinate of i's component
    and parity[i] the bit offset of coordinate i relative to it.
    """
    bit = lambda idx, pos: (idx >> (k - 1 - pos)) & 1
    adj: dict = {i: [] for i in range(k)}
    for i in range(k):
        for j in range(i + 1, k):
            eq_all = all(bit(x, i) == bit(x, j) for x in sup)
            ne_all = all(bit(x, i) != bit(x, j) for x in sup)
            if eq_all or ne_all:
                rel = 0 if eq_all else 1
                adj[i].append((j, rel))
                adj[j].append((i, rel))
    rep = [-1] * k
    par = [0] * k
    for s in range(k):
        if rep[s] != -1:
            continue
        rep[s] = s
        par[s] = 0
        queue = [s]
        while queue:
            v = queue.pop(0)
            for w, rel in adj[v]:
                if rep[w] == -1:
                    rep[w] = s
                    par[w] = par[v] ^ rel
                    queue.append(w)
                elif rep[w] != s or (par[w] ^ par[v]) != rel:
                    raise InternalCheckError(
                        "inconsistent pair relations on a nonempty support"
                    )
    return rep, par


def is_eq_xor_product(f: FuncTable) -> bool:
    """True iff f is a product of unaries, binary equalities, and XORs.

    Procedure: empty support passes (a zero unary factor realizes f); else
    coordinates equal or unequal on the whole support are linked into signed
    components, the support must collapse to a full product over component
    representatives, and the collapsed tensor must be degenerate.
    """
    sup = _support_indices(f)
    if not sup:
        return True
    k = f.arity
    if k == 0:
        return True
    rep, par = _signed_components(sup, k)
    reps = sorted(set(rep))
    m = len(reps)
    rpos = {r: t for t, r in enumerate(reps)}

    collapsed = set()
    for x in sup:
        y = 0
        for r in reps:
            y = (y << 1) | ((x >> (k - 1 - r)) & 1)
        collapsed.add(y)
    projs = [set() for _ in range(m)]
    for y in collapsed:
        for t in range(m):
            projs[t].add((y >> (m - 1 - t)) & 1)
    count = 1
    for p in projs:
        count *= len(p)
    if len(collapsed) != count:
        return False

    g_vals = []
    for y in range(1 << m):
        ybits = index_tuple(y, m)
        xbits = [0] * k
        for i in range(k):
            xbits[i] = ybits[rpos[rep[i]]] ^ par[i]
        g_vals.append(f.value(tuple(xbits)))
    return is_degenerate(FuncTable(m, tuple(g_vals)))


def has_implication_closed_support(f: FuncTable) -> bool:
    """Support closed under coordinatewise min and max."""
    sup = _support_indices(f)
    sset = set(sup)
    for a in sup:
        for b in sup:
            if (a & b) not in sset or (a | b) not in sset:
                return False
    return True


def is_implication_product(f: FuncTable) -> bool:
    """True iff f is a product of unary functions and implications."""
    if not has_implication_closed_support(f):
        return False
    sup = _support_indices(f)
    vals = f.values
    for i, a in enumerate(sup):
        for b in sup[i + 1:]:
            lo, hi = a & b, a | b
            if lo == a or lo == b:
                continue  # comparable pair, identity is trivial
            if vals[a] * vals[b] != vals[lo] * vals[hi]:
                return False
    return True


TIER_TRACTABLE = "Tractable_FLC"
TIER_2SAT = "Acyc2SAT_Hard"
TIER_SHARP = "SharpLOGCFL_Hard"

MODE_WITH_XOR = "WithXOR"
MODE_NO_XOR = "NoXOR"


@dataclass(frozen=True)
class Verdict:
    tier: str
    mode: str
    memberships: tuple   # one dict per function
    witness_not_ed: str | None = None
    witness_not_im: str | None = None

    def to_json(self) -> dict:
        out = {
            "tier": self.tier,
            "mode": self.mode,
            "functions": list(self.memberships),
        }
        if self.witness_not_ed is not None:
            out["witness_not_ed"] = self.witness_not_ed
        if self.witness_not_im is not None:
            out["witness_not_im"] = self.witness_not_im
        return out


def membership(f: FuncTable, name: str | None = None) -> dict:
    return {
        "name": name if name is not None else f.label(),
        "arity": f.arity,
        "nowhere_zero": is_nowhere_zero(f),
        "degenerate": is_degenerate(f),
        "eq_xor_product": is_eq_xor_product(f),
        "implication_support": has_implication_closed_support(f),
        "implication_product": is_implication_product(f),
    }


def classify_functions(funcs, mode: str = MODE_NO_XOR) -> Verdict:
    """Classify a finite set of functions per the dichotomy/trichotomy.

    ``funcs`` is a sequence of FuncTable (optionally (name, FuncTable)
    pairs).  The empty set is tractable.
    """
    if mode not in (MODE_WITH_XOR, MODE_NO_XOR):
        raise InputError(f"unknown mode {mode!r}")
    named = []
    for i, f in enumerate(funcs):
        if isinstance(f, tuple):
            named.append(f)
        else:
            named.append((f.name or f"f{i}", f))
    mems = tuple(membership(f, name) for name, f in named)

    not_ed = next((m["name"] for m in mems if not m["eq_xor_product"]), None)
    if not_ed is None:
        return Verdict(TIER_TRACTABLE, mode, mems)
    if mode == MODE_NO_XOR:
        not_im = next((m["name"] for m in mems if not m["implication_product"]), None)
        if not_im is None:
            return Verdict(TIER_2SAT, mode, mems, witness_not_ed=not_ed)
        return Verdict(TIER_SHARP, mode, mems,
                       witness_not_ed=not_ed, witness_not_im=not_im)
    return Verdict(TIER_SHARP, mode, mems, witness_not_ed=not_ed)
