"""Constraint-function tables, instances, and the five table operations.

A k-ary constraint function is stored as its 2^k output values in
lexicographic input order, so a binary table reads (f(00), f(01), f(10),
f(11)).  Symmetric functions can be written [a_0, ..., a_k] where a_i is the
value on inputs of Hamming weight i.  All values are exact ComplexRat.

Everything here is immutable after construction and safe to share.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .errors import InputError
from .rational import ComplexRat, MINUS_ONE, ONE, ZERO


@dataclass(frozen=True)
class FuncTable:
    """A constraint function: arity k plus 2^k values in lexicographic order.

    ``linked`` marks tables produced by the linking operation; the gadget
    machinery refuses them unless explicitly overridden.
    """

    arity: int
    values: tuple
    name: str | None = field(default=None, compare=False)
    linked: bool = field(default=False, compare=False)

    def __post_init__(self):
        if self.arity < 0:
            raise InputError(f"negative arity {self.arity}")
        if len(self.values) != 1 << self.arity:
            raise InputError(
                f"table length {len(self.values)} does not match arity {self.arity}"
            )
        for v in self.values:
            if not isinstance(v, ComplexRat):
                raise InputError(f"table entry {v!r} is not a ComplexRat")

    def value(self, bits) -> ComplexRat:
        """Value on an input tuple of bits (length = arity)."""
        return self.values[tuple_index(bits)]

    def support_mask(self) -> int:
        """Bitmask over table indices with a 1 where the value is nonzero."""
        mask = 0
        for idx, v in enumerate(self.values):
            if v:
                mask |= 1 << idx
        return mask

    def is_zero(self) -> bool:
        return not any(self.values)

    def scaled(self, lam: ComplexRat) -> "FuncTable":
        return FuncTable(self.arity, tuple(lam * v for v in self.values),
                         name=self.name, linked=self.linked)

    def label(self) -> str:
        return self.name if self.name else f"<{self.arity}-ary>"

    def __repr__(self):
        vals = ",".join(repr(v) for v in self.values)
        return f"FuncTable({self.label()}: {vals})"


@dataclass(frozen=True)
class SymTable:
    """Symmetric-notation table: value a_i on every input of weight i."""

    arity: int
    by_weight: tuple

    def __post_init__(self):
        if len(self.by_weight) != self.arity + 1:
            raise InputError(
                f"symmetric table needs {self.arity + 1} entries, got {len(self.by_weight)}"
            )

    def to_table(self, name: str | None = None) -> FuncTable:
        vals = tuple(self.by_weight[bin(idx).count("1")]
                     for idx in range(1 << self.arity))
        return FuncTable(self.arity, vals, name=name)

    @staticmethod
    def from_table(f: FuncTable) -> "SymTable | None":
        """Recover the [a_0..a_k] form, or None if f is not symmetric."""
        by_weight: list = [None] * (f.arity + 1)
        for idx, v in enumerate(f.values):
            w = bin(idx).count("1")
            if by_weight[w] is None:
                by_weight[w] = v
            elif by_weight[w] != v:
                return None
        return SymTable(f.arity, tuple(by_weight))


def tuple_index(bits) -> int:
    """Lexicographic index of a bit tuple (first variable is most significant)."""
    idx = 0
    for b in bits:
        idx = (idx << 1) | b
    return idx


def index_tuple(idx: int, k: int) -> tuple:
    return tuple((idx >> (k - 1 - p)) & 1 for p in range(k))


@dataclass(frozen=True)
class Constraint:
    """A function applied to a tuple of variable identifiers.

    Repeated identifiers are only legal for explicitly linked constraints.
    """

    func: FuncTable
    vars: tuple
    linked: bool = field(default=False, compare=False)

    def __post_init__(self):
        if len(self.vars) != self.func.arity:
            raise InputError(
                f"constraint on {self.vars} does not match arity {self.func.arity}"
            )
        if len(set(self.vars)) != len(self.vars) and not self.linked:
            raise InputError(
                f"repeated variables in {self.vars}; only linking may produce this",
                vars=list(self.vars),
            )

    def var_set(self) -> frozenset:
        return frozenset(self.vars)


@dataclass(frozen=True)
class Instance:
    """A variable set plus a sequence of constraints; count() is defined over it."""

    variables: tuple
    constraints: tuple

    def __post_init__(self):
        declared = set(self.variables)
        if len(declared) != len(self.variables):
            raise InputError("duplicate variable identifiers in instance")
        for c in self.constraints:
            for v in c.vars:
                if v not in declared:
                    raise InputError(f"constraint mentions undeclared variable {v!r}")

    def used_variables(self) -> set:
        used = set()
        for c in self.constraints:
            used.update(c.vars)
        return used

    def free_variables(self) -> list:
        """Variables in no constraint; each doubles the count."""
        used = self.used_variables()
        return [v for v in self.variables if v not in used]


def make_instance(constraints, variables=None) -> Instance:
    """Build an Instance, inferring the variable list (first mention order)."""
    constraints = tuple(constraints)
    if variables is None:
        seen: dict = {}
        for c in constraints:
            for v in c.vars:
                seen.setdefault(v, None)
        variables = tuple(seen)
    else:
        variables = tuple(variables)
    return Instance(variables, constraints)


# Standard function catalog.

_VARIADIC = {"EQ", "NEQ", "OR", "AND", "NAND", "ONE"}
_FIXED = {"XOR": 2, "Implies": 2, "RImplies": 2, "Delta0": 1, "Delta1": 1}
BUILTIN_NAMES = sorted(_VARIADIC | set(_FIXED))


def builtin(name: str, k: int) -> FuncTable:
    """The standard catalog: EQ/NEQ/OR/AND/NAND/ONE of any arity >= 1,
    XOR/Implies/RImplies at arity 2, Delta0/Delta1 at arity 1."""
    if name in _FIXED:
        if k != _FIXED[name]:
            raise InputError(f"builtin {name} has arity {_FIXED[name]}, not {k}")
    elif name in _VARIADIC:
        if k < 1:
            raise InputError(f"builtin {name} needs arity >= 1, not {k}")
    else:
        raise InputError(f"unknown builtin {name!r}; known: {', '.join(BUILTIN_NAMES)}")

    if name == "XOR":
        vals = (ZERO, ONE, ONE, ZERO)
    elif name == "Implies":
        vals = (ONE, ONE, ZERO, ONE)
    elif name == "RImplies":
        vals = (ONE, ZERO, ONE, ONE)
    elif name == "Delta0":
        vals = (ONE, ZERO)
    elif name == "Delta1":
        vals = (ZERO, ONE)
    else:
        vals = tuple(_variadic_value(name, index_tuple(i, k)) for i in range(1 << k))
    label = name if name in _FIXED else f"{name}_{k}"
    return FuncTable(k, vals, name=label)


def _variadic_value(name: str, bits) -> ComplexRat:
    w = sum(bits)
    k = len(bits)
    if name == "EQ":
        hit = w == 0 or w == k
    elif name == "NEQ":
        hit = not (w == 0 or w == k)
    elif name == "OR":
        hit = w >= 1
    elif name == "AND":
        hit = w == k
    elif name == "NAND":
        hit = w < k
    elif name == "ONE":
        hit = w == 1
    else:  # pragma: no cover - guarded by builtin()
        raise InputError(f"unknown builtin {name}")
    return ONE if hit else ZERO


def u0() -> FuncTable:
    """The unary [1, -1]."""
    return FuncTable(1, (ONE, MINUS_ONE), name="u0")


def u1() -> FuncTable:
    """The unary [-1, 1]."""
    return FuncTable(1, (MINUS_ONE, ONE), name="u1")


# The five function-level operations.  Positions are 1-based to match the
# tuple notation used throughout.

def _check_pos(f: FuncTable, i: int):
    if not 1 <= i <= f.arity:
        raise InputError(f"position {i} out of range for arity {f.arity}")


def pin(f: FuncTable, i: int, c: int) -> FuncTable:
    """Fix variable i to bit c; arity drops by one."""
    _check_pos(f, i)
    if c not in (0, 1):
        raise InputError(f"pin value must be a bit, got {c!r}")
    k = f.arity
    sh = k - i
    vals = tuple(f.values[idx] for idx in range(1 << k) if (idx >> sh) & 1 == c)
    return FuncTable(k - 1, vals, linked=f.linked)


def project(f: FuncTable, i: int) -> FuncTable:
    """Sum variable i out; arity drops by one."""
    p0 = pin(f, i, 0)
    p1 = pin(f, i, 1)
    vals = tuple(a + b for a, b in zip(p0.values, p1.values))
    return FuncTable(f.arity - 1, vals, linked=f.linked)


def normalize(f: FuncTable, lam: ComplexRat) -> FuncTable:
    """Entrywise scaling by a nonzero constant."""
    if not lam:
        raise InputError("normalization constant must be nonzero")
    return f.scaled(lam)


def expand(f: FuncTable, i: int) -> FuncTable:
    """Insert a fresh ignored variable directly after position i."""
    _check_pos(f, i)
    k = f.arity
    sh = k - i  # bit position of the inserted variable in the new index
    mask = (1 << sh) - 1
    vals = tuple(f.values[((idx >> (sh + 1)) << sh) | (idx & mask)]
                 for idx in range(1 << (k + 1)))
    return FuncTable(k + 1, vals, linked=f.linked)


def link(f: FuncTable, i: int, j: int) -> FuncTable:
    """Identify variable i with variable j (diagonal restriction).

    The result is flagged: linking does not in general preserve the acyclic
    constructibility the gadget module certifies, so gadget entry points
    refuse flagged tables unless overridden.
    """
    _check_pos(f, i)
    _check_pos(f, j)
    if i == j:
        raise InputError("link needs two distinct positions")
    k = f.arity
    rest = [p for p in range(1, k + 1) if p != i]
    vals = []
    for bits in product((0, 1), repeat=k - 1):
        assign = dict(zip(rest, bits))
        assign[i] = assign[j]
        vals.append(f.values[tuple_index(tuple(assign[p] for p in range(1, k + 1)))])
    return FuncTable(k - 1, tuple(vals), linked=True)
