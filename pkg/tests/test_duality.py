import json

import pytest

from connwidth.core import InputError, verify_lemma2, verify_submodularity, verify_symmetry
from connwidth.decomposition import exact_branchwidth
from connwidth.duality import (GeneratorConfig, check_theorem6, check_theorem7, coherent,
                               fuzz, generate, matrix_configs, reverify_finding, run_matrix)
from connwidth.ultrafilter import SearchConfig

from conftest import triangle_system

UNC = SearchConfig("unconditional")
COND = SearchConfig("conditional")


def test_theorem6_examples(triangle):
    v = check_theorem6(triangle, 1, UNC)
    assert (v.wuf_exists, v.branchwidth, v.consistent) == (False, 2, True)
    v = check_theorem6(triangle, 2, UNC)
    assert (v.wuf_exists, v.branchwidth, v.consistent) == (True, 2, True)
    v = check_theorem6(triangle, 1, COND)
    assert v.wuf_exists and v.branchwidth == 2 and v.violated_claim == "theorem6"
    assert v.family.members == frozenset({7})


def test_theorem7_examples(triangle):
    v = check_theorem7(triangle, 1, UNC)
    assert v.hypothesis_met and v.consistent and not v.wuf_exists
    for cfg in (UNC, COND):
        v = check_theorem7(triangle, 0, cfg)
        assert not v.hypothesis_met and v.consistent
    v = check_theorem7(triangle, 1, COND)
    assert v.violated_claim == "theorem7"


def test_matrix_shape_and_determinism(triangle):
    cells = run_matrix(triangle)
    assert len(cells) == 12
    assert all(c.theorem6.consistent and c.theorem7.consistent
               for c in cells if c.config.fe_mode == "unconditional")
    again = run_matrix(triangle_system())
    assert [(c.k, c.config, c.theorem6.to_json(), c.theorem7.to_json()) for c in cells] == \
        [(c.k, c.config, c.theorem6.to_json(), c.theorem7.to_json()) for c in again]
    assert coherent(cells)


def test_verdict_flags_follow_definitions():
    corpus = generate(GeneratorConfig("random-cut-rank", 5, seed=4, count=15))
    for s in corpus:
        cells = run_matrix(s)
        assert coherent(cells)
        for c in cells:
            t6, t7 = c.theorem6, c.theorem7
            assert (t6.violated_claim == "theorem6") == (t6.wuf_exists and t6.branchwidth > c.k)
            assert (t7.violated_claim == "theorem7") == (
                t7.branchwidth == c.k + 1 and t7.wuf_exists)


def test_generator_k4_and_determinism():
    for seed in range(5):
        s = generate(GeneratorConfig("random-graph-cut", 4, 6, seed=seed))[0]
        assert len(s.ground.labels) == 6
        assert exact_branchwidth(s)[0] == 3
    cfg = GeneratorConfig("random-weighted-graph-cut", 6, seed=9, count=3)
    assert [s.to_json() for s in generate(cfg)] == [s.to_json() for s in generate(cfg)]


def test_generated_systems_verify():
    cfg = GeneratorConfig("random-weighted-graph-cut", 6, seed=0, count=100)
    for s in generate(cfg):
        assert verify_submodularity(s).overall
    for kind in ("random-graph-cut", "random-cut-rank", "random-weighted-table"):
        for s in generate(GeneratorConfig(kind, 5, seed=3, count=10)):
            assert verify_symmetry(s).overall
            assert verify_submodularity(s).overall
            assert verify_lemma2(s).overall


@pytest.mark.parametrize("kwargs", [dict(kind="nope", vertices=3),
                                    dict(kind="random-graph-cut", vertices=3, edges=4),
                                    dict(kind="random-cut-rank", vertices=0)])
def test_generator_rejects_bad_sizes(kwargs):
    with pytest.raises(InputError):
        GeneratorConfig(**kwargs)


def test_fuzz_unconditional_clean():
    corpus = generate(GeneratorConfig("random-graph-cut", 5, 6, seed=7, count=30))
    summary = fuzz(corpus, [c for c in matrix_configs() if c.fe_mode == "unconditional"])
    assert summary.all_consistent
    assert summary.to_json()["status"] == "all-consistent"


def test_fuzz_records_triangle_finding(tmp_path):
    summary = fuzz([triangle_system()], [COND], tmp_path)
    assert not summary.all_consistent
    dirs = sorted(p.name for p in tmp_path.iterdir())
    assert "triangle__k1__conditional__fp0__theorem6" in dirs
    d = tmp_path / "triangle__k1__conditional__fp0__theorem6"
    assert sorted(p.name for p in d.iterdir()) == [
        "decomposition.json", "family.json", "instance.json", "verdict.json"]
    verdict = json.loads((d / "verdict.json").read_text())
    assert verdict["family"] == [["a-b", "b-c", "c-a"]] and verdict["branchwidth"] == 2
    assert reverify_finding(d)["matches"]


def test_fuzz_empty_corpus():
    summary = fuzz([])
    assert summary.all_consistent and summary.to_json()["cells"] == []


def test_fuzz_jobs_do_not_change_result():
    corpus = generate(GeneratorConfig("random-cut-rank", 5, seed=2, count=4))
    assert fuzz(corpus, jobs=2).to_json() == fuzz(corpus).to_json()
