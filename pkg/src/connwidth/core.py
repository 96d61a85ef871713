"""Finite connectivity systems: a ground set plus a symmetric submodular oracle.

Subsets of the ground set are plain ``int`` bitmasks (bit ``i`` set means the
``i``-th label is a member).  Masks compare extensionally for free, and the
canonical order used for every deterministic listing is
``(popcount, sorted member indices)``, see :func:`subset_key`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

MAX_GROUND = 16       # single-subset sweeps walk 2**n masks
MAX_PAIRWISE = 10     # pairwise sweeps walk 4**n ordered pairs
MAX_WITNESSES = 32


class InputError(ValueError):
    """Malformed input: unknown element, bad file, ground-set mismatch."""


class CapacityError(RuntimeError):
    """An exhaustive routine was asked to go past its documented cap."""


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def members(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def subset_key(mask: int) -> tuple:
    return (popcount(mask), tuple(members(mask)))


def canonical_subsets(n: int) -> list[int]:
    return sorted(range(1 << n), key=subset_key)


def submasks(mask: int):
    """All submasks of ``mask``, including ``mask`` and 0."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def check_cap(n: int, cap: int, what: str) -> None:
    if n > cap:
        raise CapacityError(f"{what}: |X| = {n} exceeds the cap of {cap}")


@dataclass(frozen=True)
class GroundSet:
    labels: tuple[str, ...]

    def __post_init__(self):
        labels = tuple(str(x) for x in self.labels)
        object.__setattr__(self, "labels", labels)
        if len(set(labels)) != len(labels):
            dup = sorted({x for x in labels if labels.count(x) > 1})
            raise InputError(f"duplicate ground-set labels: {dup}")
        check_cap(len(labels), MAX_GROUND, "ground set")

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def full(self) -> int:
        return (1 << len(self.labels)) - 1

    def index(self, label: str) -> int:
        try:
            return self.labels.index(str(label))
        except ValueError:
            raise InputError(f"element {label!r} is not in the ground set") from None

    def mask(self, labels: Iterable[str]) -> int:
        m = 0
        for x in labels:
            m |= 1 << self.index(x)
        return m

    def names(self, mask: int) -> list[str]:
        return [self.labels[i] for i in members(mask)]

    def complement(self, mask: int) -> int:
        return self.full & ~mask

    def validate(self, mask: int) -> int:
        if not isinstance(mask, (int, np.integer)) or mask < 0 or mask & ~self.full:
            raise InputError(f"set {mask!r} is not a subset of the ground set")
        return int(mask)


# ---------------------------------------------------------------- functions


def gf2_rank(rows: Iterable[int]) -> int:
    """Rank over GF(2) of rows packed as ints; the empty matrix has rank 0."""
    basis: dict[int, int] = {}
    for r in rows:
        while r:
            top = r.bit_length() - 1
            if top not in basis:
                basis[top] = r
                break
            r ^= basis[top]
    return len(basis)


@dataclass(frozen=True)
class GraphCut:
    """Ground set = edges; f(A) counts vertices touching both A and X\\A."""

    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]
    labels: tuple[str, ...] | None = None
    kind = "graph-cut"

    def ground(self) -> GroundSet:
        if self.labels is not None:
            if len(self.labels) != len(self.edges):
                raise InputError("labels: expected one label per edge")
            return GroundSet(tuple(self.labels))
        return GroundSet(tuple(f"{u}-{v}" for u, v in self.edges))

    def oracle(self, ground: GroundSet) -> Callable[[int], int]:
        incident = {v: 0 for v in self.vertices}
        for i, (u, v) in enumerate(self.edges):
            incident[u] |= 1 << i
            incident[v] |= 1 << i
        masks = [m for m in incident.values() if m]
        full = ground.full

        def f(a: int) -> int:
            rest = full & ~a
            return sum(1 for m in masks if m & a and m & rest)

        return f

    def to_json(self) -> dict:
        out = {"type": self.kind, "vertices": list(self.vertices),
               "edges": [list(e) for e in self.edges]}
        if self.labels is not None:
            out["labels"] = list(self.labels)
        return out


@dataclass(frozen=True)
class WeightedGraphCut:
    """Ground set = vertices; f(A) is the weight of edges leaving A."""

    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]
    weights: tuple[int, ...]
    kind = "weighted-graph-cut"

    def ground(self) -> GroundSet:
        return GroundSet(tuple(self.vertices))

    def oracle(self, ground: GroundSet) -> Callable[[int], int]:
        pairs = [(1 << ground.index(u), 1 << ground.index(v), w)
                 for (u, v), w in zip(self.edges, self.weights)]

        def f(a: int) -> int:
            return sum(w for bu, bv, w in pairs if bool(a & bu) != bool(a & bv))

        return f

    def to_json(self) -> dict:
        return {"type": self.kind, "vertices": list(self.vertices),
                "edges": [list(e) for e in self.edges], "weights": list(self.weights)}


@dataclass(frozen=True)
class CutRank:
    """Ground set = vertices; f(A) = GF(2) rank of the A x (X\\A) submatrix."""

    adjacency: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...] | None = None
    kind = "cut-rank"

    def ground(self) -> GroundSet:
        n = len(self.adjacency)
        return GroundSet(tuple(self.labels) if self.labels is not None
                         else tuple(f"v{i}" for i in range(n)))

    def oracle(self, ground: GroundSet) -> Callable[[int], int]:
        rows = [sum(bit << j for j, bit in enumerate(row)) for row in self.adjacency]
        full = ground.full

        def f(a: int) -> int:
            cols = full & ~a
            return gf2_rank(rows[i] & cols for i in members(a))

        return f

    def to_json(self) -> dict:
        out = {"type": self.kind, "adjacency": [list(r) for r in self.adjacency]}
        if self.labels is not None:
            out["labels"] = list(self.labels)
        return out


@dataclass(frozen=True)
class Table:
    """Explicit value for every subset, indexed by mask."""

    elements: tuple[str, ...]
    values: tuple[int, ...]
    kind = "table"

    def __post_init__(self):
        if len(self.values) != 1 << len(self.elements):
            raise InputError(f"table needs {1 << len(self.elements)} values, "
                             f"got {len(self.values)}")

    def ground(self) -> GroundSet:
        return GroundSet(tuple(self.elements))

    def oracle(self, ground: GroundSet) -> Callable[[int], int]:
        return self.values.__getitem__

    def to_json(self) -> dict:
        g = GroundSet(self.elements)
        return {"type": self.kind, "elements": list(self.elements),
                "values": [{"set": g.names(m), "f": self.values[m]}
                           for m in canonical_subsets(len(self.elements))]}

    @classmethod
    def from_entries(cls, elements: Sequence[str], entries: Iterable[tuple[int, int]]):
        """Build from ``(mask, value)`` pairs, inferring missing values by symmetry.

        A subset may be listed at most once.  A missing subset takes its
        complement's value; if both are missing the table is incomplete.
        """
        n = len(elements)
        full = (1 << n) - 1
        given: dict[int, int] = {}
        for m, v in entries:
            if m in given and given[m] != v:
                raise InputError(f"table: subset {GroundSet(tuple(elements)).names(m)} "
                                 f"given twice with different values")
            given[m] = v
        values = []
        for m in range(1 << n):
            if m in given:
                values.append(given[m])
            elif full & ~m in given:
                values.append(given[full & ~m])
            else:
                names = GroundSet(tuple(elements)).names(m)
                raise InputError(f"table: no value for {names} or its complement")
        return cls(tuple(elements), tuple(values))


FunctionSpec = GraphCut | WeightedGraphCut | CutRank | Table


# ------------------------------------------------------------------ system


@dataclass
class ConnectivitySystem:
    """The pair (X, f).  Immutable apart from the evaluation memo.

    The memo is a plain dict: writes are idempotent (a key always maps to the
    same value), so concurrent readers and racing writers are harmless.
    """

    spec: FunctionSpec
    name: str = ""
    seed: int | None = None
    ground: GroundSet = field(init=False)
    _f: Callable[[int], int] = field(init=False, repr=False)
    _cache: dict = field(init=False, repr=False, default_factory=dict)
    _table: list | None = field(init=False, repr=False, default=None)

    def __post_init__(self):
        self.ground = self.spec.ground()
        self._f = self.spec.oracle(self.ground)

    @property
    def n(self) -> int:
        return self.ground.size

    def evaluate(self, a) -> int:
        """f(A) for a mask or an iterable of labels."""
        if not isinstance(a, (int, np.integer)):
            a = self.ground.mask(a)
        a = self.ground.validate(a)
        try:
            return self._cache[a]
        except KeyError:
            v = int(self._f(a))
            if v < 0:
                raise InputError(f"f({self.ground.names(a)}) = {v} is negative")
            self._cache[a] = v
            return v

    def clear_cache(self) -> None:
        self._cache.clear()
        self._table = None

    def values(self) -> list[int]:
        """f on every mask, indexed by mask."""
        if self._table is None:
            self._table = [self.evaluate(m) for m in range(1 << self.n)]
        return self._table

    def max_value(self) -> int:
        return max(self.values())

    def to_json(self) -> dict:
        out = self.spec.to_json()
        if self.name:
            out["name"] = self.name
        if self.seed is not None:
            out["seed"] = self.seed
        return out


def is_k_efficient(system: ConnectivitySystem, a, k: int) -> bool:
    return system.evaluate(a) <= k


def enumerate_k_efficient(system: ConnectivitySystem, k: int) -> list[int]:
    check_cap(system.n, MAX_GROUND, "enumerate_k_efficient")
    vals = system.values()
    return [m for m in canonical_subsets(system.n) if vals[m] <= k]


# ------------------------------------------------------------ verification


@dataclass
class AxiomEntry:
    axiom: str
    passed: bool
    witnesses: list = field(default_factory=list)
    violations: int = 0

    def to_json(self) -> dict:
        return {"id": self.axiom, "pass": self.passed,
                "violations": self.violations, "witnesses": self.witnesses}


@dataclass
class AxiomReport:
    entries: list[AxiomEntry]

    @property
    def overall(self) -> bool:
        return all(e.passed for e in self.entries)

    def __getitem__(self, axiom: str) -> AxiomEntry:
        for e in self.entries:
            if e.axiom == axiom:
                return e
        raise KeyError(axiom)

    def failed(self) -> list[str]:
        return [e.axiom for e in self.entries if not e.passed]

    def to_json(self) -> dict:
        return {"axioms": [e.to_json() for e in self.entries], "overall": self.overall}


class _Collector:
    def __init__(self, axiom: str):
        self.entry = AxiomEntry(axiom, True)

    def add(self, witness) -> None:
        self.entry.passed = False
        self.entry.violations += 1
        if len(self.entry.witnesses) < MAX_WITNESSES:
            self.entry.witnesses.append(witness)


def _table_array(system: ConnectivitySystem, cap: int, what: str) -> np.ndarray:
    check_cap(system.n, cap, what)
    return np.asarray(system.values(), dtype=np.int64)


def verify_symmetry(system: ConnectivitySystem) -> AxiomReport:
    v = _table_array(system, MAX_GROUND, "verify_symmetry")
    g = system.ground
    col = _Collector("symmetry")
    for a in canonical_subsets(g.size):
        c = g.complement(a)
        if v[a] != v[c]:
            col.add({"set": g.names(a), "f": int(v[a]), "f_complement": int(v[c])})
    return AxiomReport([col.entry])


def _pairwise(system, what, rhs_sets):
    """Check f(A) + f(B) >= f(P) + f(Q) over all ordered pairs."""
    v = _table_array(system, MAX_PAIRWISE, what)
    g = system.ground
    idx = np.arange(1 << g.size, dtype=np.int64)
    col = _Collector(what)
    for a in range(1 << g.size):
        p, q = rhs_sets(a, idx, g.full)
        lhs = v[a] + v
        rhs = v[p] + v[q]
        for b in np.nonzero(lhs < rhs)[0]:
            b = int(b)
            col.add({"A": g.names(a), "B": g.names(b),
                     "f_A": int(v[a]), "f_B": int(v[b]),
                     "rhs_sets": [g.names(int(p[b])), g.names(int(q[b]))],
                     "rhs": [int(v[p[b]]), int(v[q[b]])]})
    return col.entry


def verify_submodularity(system: ConnectivitySystem) -> AxiomReport:
    entry = _pairwise(system, "submodularity", lambda a, idx, full: (a & idx, a | idx))
    return AxiomReport([entry])


def verify_lemma2(system: ConnectivitySystem) -> AxiomReport:
    """Both consequences: f(A) >= f(empty) = f(X), and posimodularity."""
    v = _table_array(system, MAX_PAIRWISE, "verify_lemma2")
    g = system.ground
    low = _Collector("lemma2-minimum")
    if v[0] != v[g.full]:
        low.add({"set": [], "f": int(v[0]), "f_X": int(v[g.full])})
    for a in canonical_subsets(g.size):
        if v[a] < v[0]:
            low.add({"set": g.names(a), "f": int(v[a]), "f_empty": int(v[0])})
    posi = _pairwise(system, "lemma2-posimodular",
                     lambda a, idx, full: (a & ~idx & full, idx & ~a))
    return AxiomReport([low.entry, posi])


def verify_all(system: ConnectivitySystem) -> AxiomReport:
    entries = []
    for check in (verify_symmetry, verify_submodularity, verify_lemma2):
        entries.extend(check(system).entries)
    return AxiomReport(entries)
