"""Machine checks of the branch-width / weak-ultrafilter duality claims.

Two claims are audited per (instance, k, reading of the axioms):

* theorem6 -- a weak ultrafilter of order k+1 forces branch-width <= k;
* theorem7 -- branch-width exactly k+1 rules out a weak ultrafilter of order k+1.

Violations under a reading are findings, not errors: they are recorded and
serialised so they can be re-checked from disk.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from pathlib import Path

from .core import (ConnectivitySystem, CutRank, GraphCut, InputError, Table,
                   WeightedGraphCut)
from .decomposition import DecompositionTree, exact_branchwidth, tree_to_json
from .instances import dumps
from .ultrafilter import FE_MODES, SearchConfig, SetFamily, certificate, search


def dual_ideal(family: SetFamily, system: ConnectivitySystem | None = None) -> SetFamily:
    """Complement every member: {A : X-A in W}."""
    if system is not None and family.ground != system.ground:
        raise InputError("family and system have different ground sets")
    full = family.ground.full
    return SetFamily(family.ground, frozenset(full & ~m for m in family.members))


@dataclass
class TheoremVerdict:
    theorem: str
    instance: str
    k: int
    config: SearchConfig
    wuf_exists: bool
    family: SetFamily | None
    branchwidth: int
    tree: DecompositionTree
    hypothesis_met: bool = True
    consistent: bool = True
    violated_claim: str | None = None

    def to_json(self) -> dict:
        return {
            "theorem": self.theorem,
            "instance": self.instance,
            "k": self.k,
            "config": self.config.to_json(self.k),
            "wuf_exists": self.wuf_exists,
            "family": None if self.family is None else self.family.to_json()["members"],
            "branchwidth": self.branchwidth,
            "hypothesis_met": self.hypothesis_met,
            "consistent": self.consistent,
            "violated_claim": self.violated_claim,
        }


class DualityChecker:
    """Caches branch-width and searches for one instance across many cells."""

    def __init__(self, system: ConnectivitySystem):
        self.system = system
        self._bw: tuple[int, DecompositionTree] | None = None
        self._found: dict = {}

    def branchwidth(self) -> tuple[int, DecompositionTree]:
        if self._bw is None:
            self._bw = exact_branchwidth(self.system)
        return self._bw

    def find(self, k: int, config: SearchConfig) -> SetFamily | None:
        key = (k, config)
        if key not in self._found:
            self._found[key] = search(self.system, k, config)
        return self._found[key]

    def theorem6(self, k: int, config: SearchConfig) -> TheoremVerdict:
        bw, tree = self.branchwidth()
        fam = self.find(k, config)
        bad = fam is not None and bw > k
        return TheoremVerdict("theorem6", self.system.name, k, config, fam is not None, fam,
                              bw, tree, True, not bad, "theorem6" if bad else None)

    def theorem7(self, k: int, config: SearchConfig) -> TheoremVerdict:
        bw, tree = self.branchwidth()
        fam = self.find(k, config)
        met = bw == k + 1
        bad = met and fam is not None
        return TheoremVerdict("theorem7", self.system.name, k, config, fam is not None, fam,
                              bw, tree, met, not bad, "theorem7" if bad else None)


def check_theorem6(system, k, config=SearchConfig()) -> TheoremVerdict:
    return DualityChecker(system).theorem6(k, config)


def check_theorem7(system, k, config=SearchConfig()) -> TheoremVerdict:
    return DualityChecker(system).theorem7(k, config)


def matrix_configs() -> list[SearchConfig]:
    return [SearchConfig(mode, fp) for mode in FE_MODES for fp in (False, True)]


@dataclass
class MatrixCell:
    k: int
    config: SearchConfig
    theorem6: TheoremVerdict
    theorem7: TheoremVerdict


def run_matrix(system: ConnectivitySystem, configs=None) -> list[MatrixCell]:
    """Both verdicts for every k in [0, max f] and every reading."""
    checker = DualityChecker(system)
    cells = []
    for config in configs or matrix_configs():
        for k in range(system.max_value() + 1):
            cells.append(MatrixCell(k, config, checker.theorem6(k, config),
                                    checker.theorem7(k, config)))
    return cells


def coherent(cells: list[MatrixCell]) -> bool:
    """A theorem6 violation implies theorem7 fails (or is vacuous) at k = bw - 1."""
    by_key = {(c.config, c.k): c for c in cells}
    for c in cells:
        if c.theorem6.consistent:
            continue
        other = by_key.get((c.config, c.theorem6.branchwidth - 1))
        if other is not None and other.theorem7.hypothesis_met and other.theorem7.consistent:
            return False
    return True


def matrix_to_json(system: ConnectivitySystem, cells: list[MatrixCell]) -> dict:
    bw, _ = exact_branchwidth(system)
    return {
        "instance": system.name,
        "branchwidth": bw,
        "max_f": system.max_value(),
        "cells": [{"k": c.k, "fe_mode": c.config.fe_mode, "require_fp": c.config.require_fp,
                   "wuf_exists": c.theorem6.wuf_exists,
                   "theorem6_consistent": c.theorem6.consistent,
                   "theorem7_hypothesis_met": c.theorem7.hypothesis_met,
                   "theorem7_consistent": c.theorem7.consistent} for c in cells],
    }


# -------------------------------------------------------------- generators

GENERATOR_KINDS = ("random-graph-cut", "random-weighted-graph-cut", "random-cut-rank",
                   "random-weighted-table")


@dataclass(frozen=True)
class GeneratorConfig:
    kind: str
    vertices: int
    edges: int | None = None
    density: float = 0.5
    seed: int = 0
    count: int = 1

    def __post_init__(self):
        if self.kind not in GENERATOR_KINDS:
            raise InputError(f"unknown generator kind {self.kind!r}")
        if self.vertices < 1:
            raise InputError("vertices must be at least 1")
        if self.count < 0:
            raise InputError("count must be non-negative")
        pairs = self.vertices * (self.vertices - 1) // 2
        if self.edges is not None and not 0 <= self.edges <= pairs:
            raise InputError(f"edges must lie in [0, {pairs}] for {self.vertices} vertices")
        if not 0.0 <= self.density <= 1.0:
            raise InputError("density must lie in [0, 1]")


def _random_edges(rng: random.Random, n: int, m: int | None, density: float):
    pairs = list(itertools.combinations(range(n), 2))
    if m is None:
        return [p for p in pairs if rng.random() < density]
    rng.shuffle(pairs)
    return sorted(pairs[:m])


def generate_one(config: GeneratorConfig, index: int) -> ConnectivitySystem:
    seed = config.seed + index
    rng = random.Random(f"{config.kind}:{config.vertices}:{config.edges}:"
                        f"{config.density}:{seed}")
    n = config.vertices
    names = tuple(f"v{i}" for i in range(n))
    edges = _random_edges(rng, n, config.edges, config.density)
    named = tuple((names[u], names[v]) for u, v in edges)
    if config.kind == "random-graph-cut":
        spec = GraphCut(names, named)
    elif config.kind in ("random-weighted-graph-cut", "random-weighted-table"):
        weights = tuple(rng.randint(1, 4) for _ in named)
        spec = WeightedGraphCut(names, named, weights)
        if config.kind == "random-weighted-table":
            tmp = ConnectivitySystem(spec)
            spec = Table(names, tuple(tmp.values()))
    else:
        adj = [[0] * n for _ in range(n)]
        for u, v in edges:
            adj[u][v] = adj[v][u] = 1
        spec = CutRank(tuple(tuple(r) for r in adj))
    return ConnectivitySystem(spec, name=f"{config.kind}-n{n}-s{seed}", seed=seed)


def generate(config: GeneratorConfig) -> list[ConnectivitySystem]:
    """Deterministic corpus: instance i is drawn from seed ``config.seed + i``."""
    return [generate_one(config, i) for i in range(config.count)]


# -------------------------------------------------------------------- fuzz


@dataclass
class FuzzSummary:
    corpus_size: int
    cells: dict = field(default_factory=dict)
    findings: list = field(default_factory=list)
    findings_dir: str | None = None

    @property
    def all_consistent(self) -> bool:
        return not self.findings

    def to_json(self) -> dict:
        cells = []
        for (mode, fp, k), (t6, t7) in sorted(self.cells.items()):
            cells.append({"fe_mode": mode, "require_fp": fp, "k": k,
                          "theorem6_violations": t6, "theorem7_violations": t7})
        return {"corpus_size": self.corpus_size, "cells": cells,
                "findings": len(self.findings), "findings_dir": self.findings_dir,
                "status": "all-consistent" if self.all_consistent else "violations-recorded"}


def write_finding(root: Path, system: ConnectivitySystem, verdict: TheoremVerdict) -> Path:
    """One directory per finding: instance, family, decomposition, verdict."""
    cfg = verdict.config
    name = (f"{system.name}__k{verdict.k}__{cfg.fe_mode}__fp{int(cfg.require_fp)}"
            f"__{verdict.theorem}")
    d = Path(root) / name
    d.mkdir(parents=True, exist_ok=True)
    (d / "instance.json").write_text(dumps(system.to_json()), encoding="utf-8")
    (d / "family.json").write_text(
        dumps(certificate(verdict.family, system, verdict.k, cfg)), encoding="utf-8")
    (d / "decomposition.json").write_text(
        dumps(tree_to_json(verdict.tree, system)), encoding="utf-8")
    (d / "verdict.json").write_text(
        dumps({**verdict.to_json(), "seed": system.seed}), encoding="utf-8")
    return d


def _matrix_worker(args):
    from .instances import system_from_json
    obj, configs = args
    return run_matrix(system_from_json(obj), configs)


def fuzz(corpus: list[ConnectivitySystem], configs=None, out_dir=None,
         jobs: int = 1) -> FuzzSummary:
    """Run the matrix over a corpus, counting and (optionally) saving violations.

    With ``jobs > 1`` instances are evaluated in worker processes; results are
    consumed in corpus order, so the summary does not depend on ``jobs``.
    """
    summary = FuzzSummary(len(corpus), findings_dir=None if out_dir is None else str(out_dir))
    if jobs > 1 and len(corpus) > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(jobs) as pool:
            matrices = list(pool.map(_matrix_worker,
                                     [(s.to_json(), configs) for s in corpus]))
    else:
        matrices = (run_matrix(s, configs) for s in corpus)
    for system, cells in zip(corpus, matrices):
        for cell in cells:
            key = (cell.config.fe_mode, cell.config.require_fp, cell.k)
            t6, t7 = summary.cells.get(key, (0, 0))
            t6 += not cell.theorem6.consistent
            t7 += not cell.theorem7.consistent
            summary.cells[key] = (t6, t7)
            for verdict in (cell.theorem6, cell.theorem7):
                if verdict.consistent:
                    continue
                path = None
                if out_dir is not None:
                    path = str(write_finding(Path(out_dir), system, verdict))
                summary.findings.append((system.name, verdict, path))
    return summary


def reverify_finding(directory) -> dict:
    """Recompute a saved verdict purely from the files in its directory."""
    from .decomposition import tree_from_json, width_of_tree
    from .instances import load_json, system_from_json
    from .ultrafilter import is_weak_ultrafilter

    d = Path(directory)
    system = system_from_json(load_json(d / "instance.json"))
    verdict = load_json(d / "verdict.json")
    cert = load_json(d / "family.json")
    cfg = verdict["config"]
    config = SearchConfig(cfg["fe_mode"], cfg["require_fp"], cfg["axiom_set"])
    k = verdict["k"]
    exists = cert["family"] is not None and is_weak_ultrafilter(
        SetFamily.from_labels(system.ground, cert["family"]), system, k, config).overall
    tree = tree_from_json(load_json(d / "decomposition.json"), system.ground)
    bw = width_of_tree(tree, system).width
    if verdict["theorem"] == "theorem6":
        consistent = not (exists and bw > k)
    else:
        consistent = not (bw == k + 1 and exists)
    return {"wuf_exists": exists, "branchwidth": bw, "consistent": consistent,
            "matches": (exists, bw, consistent) == (verdict["wuf_exists"],
                                                    verdict["branchwidth"],
                                                    verdict["consistent"])}
