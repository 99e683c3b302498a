import math
import os
import pathlib

import pytest

import ecodeps

TINY_DIR = pathlib.Path(os.environ.get("ECODEPS_TEST_DATA", pathlib.Path(__file__).parents[1] / "data")) / "tiny"


@pytest.fixture(scope="module")
def tiny():
    return ecodeps.filter(ecodeps.load(str(TINY_DIR)))


def test_load_matches_builtin(tiny):
    builtin = ecodeps.tiny()
    assert (tiny.package_count, tiny.release_count, tiny.dependency_count) == (5, 7, 5)
    assert tiny.releases() == builtin.releases()
    assert tiny.cutoff == "2020-04-01T00:00:00Z"
    assert tiny.ecosystem == "tiny"


def test_snapshot_queries(tiny):
    g = ecodeps.snapshot(tiny, "2020-04-01")
    assert (g.node_count, g.edge_count) == (5, 4)
    assert g.edges() == [("a", "b"), ("c", "a"), ("c", "b"), ("d", "c")]
    assert g.transitive_dependencies("d") == ["a", "b", "c"]
    assert g.transitive_dependents("b") == ["a", "c", "d"]
    assert g.depth("d") == 2
    assert g.top_level() == ["d"]
    assert g.components() == [["a", "b", "c", "d"], ["e"]]
    with pytest.raises(IndexError):
        g.depth("zzz")


def test_indices(tiny):
    g = ecodeps.snapshot(tiny, "2020-04-01")
    assert ecodeps.p_impact_index(g, 50)["value"] == 1
    assert ecodeps.p_impact_index(g, 5)["value"] == 3
    assert ecodeps.reusability_index(g)["value"] == 1
    report = ecodeps.changeability_index(tiny, "2020-03-31")
    assert report["value"] == 1 and report["parameter"] == 30
    assert ecodeps.h_index([5, 3, 2, 1]) == 2


def test_series(tiny):
    growth = ecodeps.growth_series(tiny, "2020-02", "2020-04")
    assert [v for _, v in growth["packages"]] == [3, 4, 5]
    assert [v for _, v in growth["dependencies"]] == [0, 2, 4]
    assert ecodeps.transitive_ratio_series(tiny, "2020-04", "2020-04") == [("2020-04", 1.5)]
    assert [v for _, v in ecodeps.index_series(tiny, "2020-02", "2020-04", "changeability")] == [0, 1, 1]
    assert ecodeps.update_distribution(tiny, "2020-04-01") == {"never": 3, "low": 2, "high": 0, "total": 5}
    with pytest.raises(ValueError):
        ecodeps.growth_series(tiny, "2020-04", "2020-02")


def test_survival_and_statistics(tiny):
    samples = ecodeps.survival_dataset(tiny, split_required=True)
    assert samples["required"] == [(46.0, True)]
    steps = ecodeps.kaplan_meier([(2, False), (4, False), (5, True)])
    assert steps[1] == (2.0, 2 / 3) and steps[2] == (4.0, 1 / 3)
    stat, significant = ecodeps.log_rank([(1, False), (2, False), (3, False)], [(10, False), (20, False), (30, False)], 0.05)
    assert math.isclose(stat, 5.051660516605167) and significant
    assert ecodeps.gini([0, 0, 0, 4]) == 0.75
    assert ecodeps.normalized_gini([0, 0, 0, 4]) == 1.0
    assert ecodeps.lorenz([3, 1], inverted=True) == [(0, 0), (0.5, 0.75), (1, 1)]
    a, b, r2 = ecodeps.fit_linear([0, 1, 2], [0, 1, 4])
    assert math.isclose(r2, 24 / 26)


def test_generate_and_roundtrip(tmp_path):
    d = ecodeps.generate(packages=300, months=6, seed=7)
    digest = ecodeps.write(d, str(tmp_path))
    again = ecodeps.load(str(tmp_path))
    assert again.releases() == d.releases()
    assert len(digest) == 64


def test_parse_errors_surface_as_value_error(tmp_path):
    (tmp_path / "packages.csv").write_text("name\na\n")
    (tmp_path / "releases.csv").write_text("package,version,timestamp\na,1.0,not-a-date\n")
    (tmp_path / "dependencies.csv").write_text("source_package,source_version,target_package,constraint,kind\n")
    with pytest.raises(ValueError, match="releases.csv:2"):
        ecodeps.load(str(tmp_path), cutoff="2020-01-01")
