from fractions import Fraction
from itertools import combinations

import pytest

from tripack.canon import canonical_form
from tripack.graph import (
    add_vertex,
    complement,
    cycle_graph,
    graph_new,
    independent_sets,
    is_triangle_free,
)
from tripack.graph6 import encode
from tripack.lp import nu_star
from tripack.search import (
    Level,
    LevelStats,
    PipelineConfig,
    RunReport,
    _finish,
    all_triangle_free,
    apply_bipartite_deletion,
    brute_force_level,
    extend_level,
    init_level,
    labeled_triangle_free,
    load_level,
    run_pipeline,
    save_level,
)

# triangle-free graphs on n = 1..9 vertices: unlabeled (OEIS A006785) and labeled
UNLABELED = [1, 2, 3, 7, 14, 38, 107, 410, 1897]
LABELED = [1, 1, 2, 7, 41, 388, 5789]

# survivor counts of the default search, frozen from a full run
LEVEL_COUNTS = {6: 19, 7: 30, 8: 44, 9: 145}


def test_triangle_free_class_counts():
    assert [len(all_triangle_free(n)) for n in range(1, 10)] == UNLABELED


def test_labeled_enumeration_matches_filter():
    assert [sum(1 for _ in labeled_triangle_free(n)) for n in range(7)] == LABELED
    for n in range(6):
        pairs = list(combinations(range(n), 2))
        naive = set()
        for mask in range(1 << len(pairs)):
            g = graph_new(n, [pairs[i] for i in range(len(pairs)) if mask >> i & 1])
            if is_triangle_free(g):
                naive.add(g)
        listed = list(labeled_triangle_free(n))
        assert len(listed) == len(set(listed)) and set(listed) == naive


@pytest.mark.parametrize("n, survivors, generated, pruned", [
    (4, 6, 41, 1), (5, 6, 388, 8), (6, 19, 5789, 19),
])
def test_init_level(n, survivors, generated, pruned):
    level = init_level(n)
    assert len(level) == survivors
    assert level.stats.generated == generated and level.stats.pruned_eta == pruned
    assert level.stats.duplicates == generated - UNLABELED[n - 1]
    limit = Fraction(n * (n - 1), 4)
    for g in level.survivors:
        assert is_triangle_free(g)
        assert level.nu[encode(g)] == nu_star(complement(g)) <= limit
    assert level.lines() == sorted(level.lines())
    with pytest.raises(ValueError):
        init_level(9)


def test_extension_with_empty_set_adds_isolated_vertex():
    c5 = cycle_graph(5)
    g = add_vertex(c5, 0)
    assert g.n == 6 and g.degree(5) == 0 and g.num_edges == 5
    parent = init_level(6)
    child = extend_level(parent, PipelineConfig(start_n=6))
    assert child.n == 7 and len(child) == LEVEL_COUNTS[7]
    assert child.stats.generated == sum(
        sum(1 for _ in independent_sets(g)) for g in parent.survivors
    )


def test_bipartite_deletion():
    cfg = PipelineConfig(start_n=5, bipartite_drop_n=6)
    # a level holding C6 (bipartite) and C5 plus an isolated vertex (not bipartite)
    kept = {}
    for g in (cycle_graph(6), add_vertex(cycle_graph(5), 0)):
        key = canonical_form(g)
        kept[key] = nu_star(complement(g))
    level = _finish(6, kept, LevelStats(6))
    assert len(level) == 2
    out = apply_bipartite_deletion(level, cfg)
    assert len(out) == 1 and out.bipartite_dropped
    assert out.stats.pruned_bipartite == 1
    assert out.survivors[0].num_edges == 5
    with pytest.raises(ValueError):
        extend_level(level, cfg)
    with pytest.raises(ValueError):
        apply_bipartite_deletion(init_level(5), cfg)
    # C7 is not bipartite and survives
    c7 = {canonical_form(cycle_graph(7)): nu_star(complement(cycle_graph(7)))}
    assert len(apply_bipartite_deletion(_finish(7, c7, LevelStats(7)),
                                        PipelineConfig(start_n=6, bipartite_drop_n=7))) == 1


@pytest.mark.parametrize("kwargs", [
    dict(start_n=3), dict(start_n=6, bipartite_drop_n=6), dict(max_n=31), dict(workers=0),
])
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        PipelineConfig(**kwargs)


def test_pipeline_matches_oracle():
    levels = {}
    run_pipeline(PipelineConfig(start_n=6, max_n=9), on_level=lambda lv: levels.__setitem__(lv.n, lv))
    assert {n: len(lv) for n, lv in levels.items()} == LEVEL_COUNTS
    for n in range(6, 10):
        oracle = brute_force_level(n)
        assert levels[n].payload() == oracle.payload()
        assert levels[n].nu == oracle.nu


def test_resume_is_deterministic(tmp_path):
    cfg = PipelineConfig(start_n=6, max_n=8, state_dir=tmp_path)
    first = run_pipeline(cfg)
    snapshot = {p.name: p.read_bytes() for p in tmp_path.iterdir()}
    # drop the last level as if the run had been interrupted
    (tmp_path / "level_08.stats").unlink()
    again = run_pipeline(PipelineConfig(start_n=6, max_n=8, state_dir=tmp_path))
    assert set(again.seconds) == {8}
    assert [s.record() for s in again.levels] == [s.record() for s in first.levels]
    assert {p.name: p.read_bytes() for p in tmp_path.iterdir()} == snapshot


def test_resume_rejects_tampering_and_other_configs(tmp_path):
    run_pipeline(PipelineConfig(start_n=6, max_n=7, state_dir=tmp_path))
    loaded = load_level(tmp_path, 7)
    assert isinstance(loaded, Level) and len(loaded) == LEVEL_COUNTS[7]
    assert load_level(tmp_path, 12) is None
    with pytest.raises(ValueError, match="config"):
        run_pipeline(PipelineConfig(start_n=6, max_n=7, bipartite_drop_n=18, state_dir=tmp_path))
    path = tmp_path / "level_07.g6"
    path.write_bytes(path.read_bytes()[:-2] + b"\n")
    with pytest.raises(ValueError, match="checksum"):
        load_level(tmp_path, 7)


def test_save_load_round_trip(tmp_path):
    level = init_level(6)
    save_level(level, tmp_path)
    back = load_level(tmp_path, 6)
    assert back.payload() == level.payload() and back.nu == level.nu
    assert back.stats == level.stats


def test_workers_give_identical_levels():
    cfg1 = PipelineConfig(start_n=6, max_n=8)
    cfg2 = PipelineConfig(start_n=6, max_n=8, workers=2)
    a, b = {}, {}
    run_pipeline(cfg1, on_level=lambda lv: a.__setitem__(lv.n, lv.payload()))
    run_pipeline(cfg2, on_level=lambda lv: b.__setitem__(lv.n, lv.payload()))
    assert a == b


def test_run_report_formats(tmp_path):
    report = run_pipeline(PipelineConfig(start_n=6, max_n=7))
    assert report.counts() == {6: 19, 7: 30}
    assert report.terminal_n is None
    text = report.to_text()
    assert "level n=7" in text and "terminal_n=none" in text
    assert isinstance(RunReport(config={}).to_json(), str)


def test_empty_level_terminates(monkeypatch):
    import tripack.search as search

    real = search.extend_level

    def dying(parent, cfg):
        level = real(parent, cfg)
        return level if level.n < 8 else _finish(level.n, {}, LevelStats(level.n))

    monkeypatch.setattr(search, "extend_level", dying)
    report = run_pipeline(PipelineConfig(start_n=6, max_n=30))
    assert report.terminal_n == 8
    assert report.counts() == {6: 19, 7: 30, 8: 0}
