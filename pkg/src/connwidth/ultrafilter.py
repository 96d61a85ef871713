"""Weak ultrafilters of order k+1 on a connectivity system.

Axiom ids
---------
FB   every member has f(A) <= k
FH   A in W, A a proper subset of B, f(B) <= k  =>  B in W
WIS  A, B in W, f(A & B) <= k  =>  A & B nonempty
FW   the empty set is not a member
FE   A in W or X-A in W, for every k-efficient A (conditional) or every A
FP   no singletons
FS   A, B in W, f(A & B) <= k  =>  A & B in W
TX   exactly one of A, X-A for every k-efficient A (tangles)
T3   any three members, repeats allowed, share an element (tangles)
F1-F4  the classical filter axioms on the full power set
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .core import (MAX_GROUND, AxiomEntry, AxiomReport, CapacityError,
                   ConnectivitySystem, GroundSet, InputError, _Collector,
                   canonical_subsets, check_cap, popcount, subset_key, submasks)

FE_MODES = ("conditional", "unconditional")
AXIOM_SETS = ("weak-ultrafilter", "ultrafilter-fs", "tangle", "classical")
MAX_SEARCH = 12
MAX_BRUTE_UNIVERSE = 16
MAX_SOLUTIONS = 200_000


@dataclass(frozen=True)
class SearchConfig:
    fe_mode: str = "conditional"
    require_fp: bool = False
    axiom_set: str = "weak-ultrafilter"

    def __post_init__(self):
        if self.fe_mode not in FE_MODES:
            raise InputError(f"unknown fe_mode {self.fe_mode!r}")
        if self.axiom_set not in AXIOM_SETS:
            raise InputError(f"unknown axiom set {self.axiom_set!r}")

    def axioms(self) -> list[str]:
        if self.axiom_set == "classical":
            return ["F1", "F2", "F3", "F4"]
        if self.axiom_set == "tangle":
            return ["FB", "TX", "T3", "FW"]
        out = ["FB", "FH", "WIS", "FW", "FE"]
        if self.axiom_set == "ultrafilter-fs":
            out.append("FS")
        if self.require_fp:
            out.append("FP")
        return out

    def to_json(self, k: int | None = None) -> dict:
        out = {"fe_mode": self.fe_mode, "require_fp": self.require_fp,
               "axiom_set": self.axiom_set}
        if k is not None:
            out["order_k"] = k
        return out


@dataclass(frozen=True)
class SetFamily:
    ground: GroundSet
    members: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        ms = frozenset(int(m) for m in self.members)
        for m in ms:
            self.ground.validate(m)
        object.__setattr__(self, "members", ms)

    @classmethod
    def from_labels(cls, ground: GroundSet, sets: Iterable[Iterable[str]]) -> "SetFamily":
        masks = []
        for i, s in enumerate(sets):
            if isinstance(s, str) or not isinstance(s, (list, tuple, set, frozenset)):
                raise InputError(f"key 'members' index {i}: expected a list of labels")
            masks.append(ground.mask(s))
        if len(set(masks)) != len(masks):
            raise InputError("family has duplicate members")
        return cls(ground, frozenset(masks))

    @classmethod
    def from_json(cls, ground: GroundSet, obj) -> "SetFamily":
        if not isinstance(obj, dict) or not isinstance(obj.get("members"), list):
            raise InputError("family: expected {\"members\": [[labels], ...]}")
        return cls.from_labels(ground, obj["members"])

    def __contains__(self, mask) -> bool:
        return mask in self.members

    def __len__(self) -> int:
        return len(self.members)

    def sorted(self) -> list[int]:
        return sorted(self.members, key=subset_key)

    def key(self) -> tuple:
        return tuple(subset_key(m) for m in self.sorted())

    def to_json(self) -> dict:
        return {"members": [self.ground.names(m) for m in self.sorted()]}


def principal_family(system: ConnectivitySystem, k: int, x0: int = 0) -> SetFamily:
    """All k-efficient sets containing element ``x0``."""
    vals = system.values()
    return SetFamily(system.ground,
                     frozenset(m for m in range(1 << system.n) if vals[m] <= k and m >> x0 & 1))


def is_exclusive(family: SetFamily) -> bool:
    full = family.ground.full
    return not any((full & ~m) in family.members for m in family.members if m != full & ~m)


# ---------------------------------------------------------------- checking


def _check_one(axiom, fam, ground, vals, k, fe_mode) -> AxiomEntry:
    full = ground.full
    W = fam.members
    order = fam.sorted()
    names = ground.names
    col = _Collector(axiom)
    if axiom == "FB":
        for a in order:
            if vals[a] > k:
                col.add({"set": names(a), "f": vals[a]})
    elif axiom in ("FH", "F2"):
        for a in order:
            for sub in submasks(full & ~a):
                b = a | sub
                if sub and b not in W and (axiom == "F2" or vals[b] <= k):
                    col.add({"A": names(a), "B": names(b)})
    elif axiom in ("WIS", "FS", "F1"):
        for a in order:
            for b in order:
                c = a & b
                if axiom != "F1" and vals[c] > k:
                    continue
                if axiom == "WIS" and c == 0 or axiom != "WIS" and c not in W:
                    col.add({"A": names(a), "B": names(b), "intersection": names(c)})
    elif axiom in ("FW", "F3"):
        if 0 in W:
            col.add({"set": []})
    elif axiom in ("FE", "F4", "TX"):
        everything = axiom == "F4" or (axiom == "FE" and fe_mode == "unconditional")
        reported = set()
        for a in canonical_subsets(ground.size):
            c = full & ~a
            if c in reported or not (everything or vals[a] <= k):
                continue
            if axiom == "TX":
                bad = (a in W) == (c in W) or (a in W and vals[a] > k)
            else:
                bad = a not in W and c not in W
            if bad:
                reported.add(a)
                col.add({"set": names(a), "complement": names(c)})
    elif axiom == "FP":
        for a in order:
            if popcount(a) == 1:
                col.add({"set": names(a)})
    elif axiom == "T3":
        # has_sub[m]: some member is a subset of m
        has_sub = [False] * (1 << ground.size)
        for a in W:
            has_sub[a] = True
        for i in range(ground.size):
            bit = 1 << i
            for m in range(1 << ground.size):
                if m & bit and has_sub[m ^ bit]:
                    has_sub[m] = True
        for i, a in enumerate(order):
            for b in order[i:]:
                d = a & b
                if has_sub[full & ~d]:
                    c = next(c for c in order if not c & d)
                    col.add({"sets": [names(a), names(b), names(c)]})
    else:
        raise InputError(f"unknown axiom id {axiom!r}")
    return col.entry


def check_axiom(family: SetFamily, system: ConnectivitySystem, k: int, axiom: str,
                fe_mode: str = "conditional") -> AxiomEntry:
    if family.ground != system.ground:
        raise InputError("family and system have different ground sets")
    check_cap(system.n, MAX_GROUND, "check_axiom")
    if fe_mode not in FE_MODES:
        raise InputError(f"unknown fe_mode {fe_mode!r}")
    return _check_one(axiom, family, system.ground, system.values(), k, fe_mode)


def is_weak_ultrafilter(family: SetFamily, system: ConnectivitySystem, k: int,
                        config: SearchConfig = SearchConfig()) -> AxiomReport:
    return AxiomReport([check_axiom(family, system, k, ax, config.fe_mode)
                        for ax in config.axioms()])


def check_classical(family: SetFamily, ground: GroundSet, ultra: bool = True) -> AxiomReport:
    check_cap(ground.size, MAX_GROUND, "check_classical")
    if family.ground != ground:
        raise InputError("family is over a different ground set")
    zeros = [0] * (1 << ground.size)
    axioms = ["F1", "F2", "F3"] + (["F4"] if ultra else [])
    return AxiomReport([_check_one(ax, family, ground, zeros, 0, "conditional")
                        for ax in axioms])


def certificate(family: SetFamily | None, system: ConnectivitySystem, k: int,
                config: SearchConfig) -> dict:
    out = {"order": k + 1, "config": config.to_json(k)}
    if family is None:
        out.update(family=None, axioms=[], overall=False)
        return out
    report = is_weak_ultrafilter(family, system, k, config)
    out["family"] = family.to_json()["members"]
    out.update(report.to_json())
    return out


# ------------------------------------------------------------------ search


class _Solver:
    """Backtracking over membership of k-efficient sets with unit propagation.

    Every variable is a k-efficient set; sets outside the universe are
    implicitly absent.  Propagation rules are all consequences of the chosen
    axioms, so pruning never loses a solution; each leaf is re-checked anyway.
    """

    def __init__(self, system: ConnectivitySystem, k: int, config: SearchConfig):
        n = system.n
        check_cap(n, MAX_SEARCH, "weak-ultrafilter search")
        self.system, self.k, self.config = system, k, config
        self.full = full = system.ground.full
        vals = system.values()
        classical = config.axiom_set == "classical"
        self.universe = set(range(1 << n)) if classical else {
            m for m in range(1 << n) if vals[m] <= k}
        U = self.universe
        self.upward = True
        self.disjoint = classical or config.axiom_set == "tangle" or vals[0] <= k
        self.intersect = config.axiom_set in ("ultrafilter-fs", "classical")
        self.triple = config.axiom_set == "tangle"
        self.value: dict[int, bool] = {}
        self.trail: list[int] = []
        self.trues: list[int] = []
        self.ok = True

        units = [(0, False)]
        if config.require_fp and config.axiom_set in ("weak-ultrafilter", "ultrafilter-fs"):
            units += [(1 << i, False) for i in range(n)]
        unconditional = classical or config.fe_mode == "unconditional" and not self.triple
        scope = range(1 << n) if unconditional else sorted(U)
        for a in scope:
            c = full & ~a
            if a not in U and c not in U:
                self.ok = False
            elif c not in U:
                units.append((a, True))
        for m, v in units:
            if self.ok and not self._assign(m, v):
                self.ok = False

        # complementary pairs, lowest f first, then canonical order
        order = sorted(U, key=lambda m: (vals[m], subset_key(min(m, full & ~m, key=subset_key)),
                                         0 if m & 1 else 1))
        self.order = order

    def _assign(self, mask: int, val: bool) -> bool:
        U = self.universe
        full = self.full
        queue = [(mask, val)]
        while queue:
            m, v = queue.pop()
            if m not in U:
                if v:
                    return False
                continue
            cur = self.value.get(m)
            if cur is not None:
                if cur != v:
                    return False
                continue
            self.value[m] = v
            self.trail.append(m)
            comp = full & ~m
            value = self.value
            if v:
                if self.triple:
                    queue.append((comp, False))
                if self.disjoint and not self._forbid(comp, queue):
                    return False
                if self.upward:
                    for s in submasks(comp):
                        b = m | s
                        if s and b in U and value.get(b) is not True:
                            queue.append((b, True))
                if self.intersect:
                    queue.extend((m & b, True) for b in self.trues if m & b in U)
                if self.triple:
                    # only inclusion-minimal pairwise intersections matter
                    ds = sorted({m & b for b in self.trues}, key=popcount)
                    kept: list[int] = []
                    for d in ds:
                        if any(e & d == e for e in kept):
                            continue
                        kept.append(d)
                        if not self._forbid(full & ~d, queue):
                            return False
                self.trues.append(m)
            else:
                queue.append((comp, True))
                for s in submasks(m):
                    if s != m and s in U and value.get(s) is not False:
                        queue.append((s, False))
        return True

    def _forbid(self, region: int, queue: list) -> bool:
        """Queue every universe set inside ``region`` as absent."""
        U, value = self.universe, self.value
        for c in submasks(region):
            if c in U:
                cur = value.get(c)
                if cur is None:
                    queue.append((c, False))
                elif cur:
                    return False
        return True

    def _undo(self, mark: int, tmark: int) -> None:
        while len(self.trail) > mark:
            del self.value[self.trail.pop()]
        del self.trues[tmark:]

    def solutions(self) -> Iterator[SetFamily]:
        if not self.ok:
            return
        limit = sys.getrecursionlimit()
        sys.setrecursionlimit(max(limit, 4 * len(self.order) + 1000))
        try:
            yield from self._solve(0)
        finally:
            sys.setrecursionlimit(limit)

    def _solve(self, pos: int) -> Iterator[SetFamily]:
        while pos < len(self.order) and self.order[pos] in self.value:
            pos += 1
        if pos == len(self.order):
            fam = SetFamily(self.system.ground, frozenset(self.trues))
            if is_weak_ultrafilter(fam, self.system, self.k, self.config).overall:
                yield fam
            return
        var = self.order[pos]
        for v in (True, False):
            mark, tmark = len(self.trail), len(self.trues)
            if self._assign(var, v):
                yield from self._solve(pos + 1)
            self._undo(mark, tmark)


def search(system: ConnectivitySystem, k: int,
           config: SearchConfig = SearchConfig()) -> SetFamily | None:
    """A family satisfying the configured axioms at order k+1, or None."""
    full = system.ground.full
    vals = system.values()
    if (config.fe_mode == "unconditional" and config.axiom_set in ("weak-ultrafilter",
                                                                  "ultrafilter-fs")
            and any(vals[a] > k and vals[full & ~a] > k for a in range(1 << system.n))):
        return None
    return next(_Solver(system, k, config).solutions(), None)


@dataclass
class Enumeration:
    families: list[SetFamily]
    total: int


def enumerate_families(system: ConnectivitySystem, k: int,
                       config: SearchConfig = SearchConfig(),
                       limit: int | None = None) -> Enumeration:
    """Every satisfying family in canonical order, truncated to ``limit``."""
    found = []
    for fam in _Solver(system, k, config).solutions():
        found.append(fam)
        if len(found) > MAX_SOLUTIONS:
            raise CapacityError(f"more than {MAX_SOLUTIONS} satisfying families")
    found.sort(key=SetFamily.key)
    return Enumeration(found if limit is None else found[:limit], len(found))


def brute_force_enumerate(system: ConnectivitySystem, k: int,
                          config: SearchConfig = SearchConfig()) -> list[SetFamily]:
    """Definitional oracle: test every family drawn from the candidate universe."""
    check_cap(system.n, MAX_GROUND, "brute_force_enumerate")
    vals = system.values()
    if config.axiom_set == "classical":
        universe = canonical_subsets(system.n)
    else:
        universe = [m for m in canonical_subsets(system.n) if vals[m] <= k]
    if len(universe) > MAX_BRUTE_UNIVERSE:
        raise CapacityError(f"brute force over {len(universe)} candidate sets "
                            f"(cap {MAX_BRUTE_UNIVERSE})")
    out = []
    for bits in range(1 << len(universe)):
        fam = SetFamily(system.ground,
                        frozenset(m for i, m in enumerate(universe) if bits >> i & 1))
        if is_weak_ultrafilter(fam, system, k, config).overall:
            out.append(fam)
    out.sort(key=SetFamily.key)
    return out


def search_tangle(system: ConnectivitySystem, k: int) -> SetFamily | None:
    return search(system, k, SearchConfig(axiom_set="tangle"))


@dataclass
class OrderScan:
    order: int | None
    exists: dict[int, bool]


def max_order(system: ConnectivitySystem, config: SearchConfig = SearchConfig()) -> OrderScan:
    """Existence for every k in [0, max f]; ``order`` is the largest k+1 found."""
    exists = {k: search(system, k, config) is not None
              for k in range(system.max_value() + 1)}
    best = max((k for k, ok in exists.items() if ok), default=None)
    return OrderScan(None if best is None else best + 1, exists)
