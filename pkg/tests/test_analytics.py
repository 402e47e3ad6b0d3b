from __future__ import annotations

import json

import pytest

from maintminer.activity import Activity
from maintminer.analytics import (
    aggregate,
    count_tests,
    daily_series,
    detect_homogeneous,
    export_views,
    merge_frequencies,
    per_commit_frequencies,
    profiles_csv,
)
from maintminer.changetypes import ChangeType as CT
from maintminer.distill import ChangeRecord
from maintminer.errors import ArgError

from conftest import classified


def test_worked_per_commit_frequencies():
    records = [
        ChangeRecord("1a2b3c", CT.PARAMETER_INSERT, "file1.java"),
        ChangeRecord("1a2b3c", CT.ADDITIONAL_FUNCTIONALITY, "file3.java"),
        ChangeRecord("1a2b3c", CT.DOC_DELETE, "file2.java"),
        ChangeRecord("1a2b3c", CT.PARAMETER_INSERT, "file1.java"),
        ChangeRecord("1a2b3c", CT.PARAMETER_INSERT, "file1.java"),
        ChangeRecord("1a2b3c", CT.DOC_DELETE, "file2.java"),
    ]
    freq = per_commit_frequencies(records)
    assert freq == {
        "1a2b3c": {
            CT.PARAMETER_INSERT: 3,
            CT.ADDITIONAL_FUNCTIONALITY: 1,
            CT.DOC_DELETE: 2,
        }
    }


def test_empty_frequencies():
    assert per_commit_frequencies([]) == {}


def test_merge_equals_single_pass():
    records = [
        ChangeRecord(f"c{i % 5}", CT.STATEMENT_INSERT if i % 2 else CT.DOC_UPDATE, "A.java")
        for i in range(40)
    ]
    whole = per_commit_frequencies(records)
    merged = merge_frequencies(
        per_commit_frequencies(records[:17]), per_commit_frequencies(records[17:])
    )
    assert whole == merged


def test_aggregate_single_commit():
    commits = [classified("c1", "proj", "a@x", Activity.CORRECTIVE)]
    profiles = aggregate(commits, "developer")
    assert len(profiles) == 1
    assert profiles[0].corrective == 1
    assert profiles[0].total == 1


def test_window_bucketing_matches_hand_assignment():
    base = 1_456_790_400
    day = 86_400
    commits = [
        classified(f"c{i}", "p", "d@x", Activity.ADAPTIVE, base + offset * day)
        for i, offset in enumerate([0, 5, 27, 28, 30, 55, 56, 60, 83, 83])
    ]
    profiles = aggregate(commits, "window", window_days=28, date_range=(base, base + 84 * day))
    by_start = {(p.window_start - base) // day: p.total for p in profiles}
    # day offsets 0,5,27 -> first window; 28,30,55 -> second; 56,60,83,83 -> third
    assert by_start == {0: 3, 28: 3, 56: 4}
    assert all(p.window_days == 28 for p in profiles)


def test_window_requires_positive_and_ordered_range():
    commits = [classified("c", "p", "d@x", Activity.ADAPTIVE)]
    with pytest.raises(ArgError):
        aggregate(commits, "window", window_days=0)
    with pytest.raises(ArgError):
        aggregate(commits, "window", window_days=28, date_range=(100, 50))
    with pytest.raises(ArgError):
        aggregate(commits, "bogus")


def test_developer_identity_split_and_merge():
    commits = [
        classified("c1", "p", "work@x", Activity.CORRECTIVE),
        classified("c2", "p", "home@y", Activity.CORRECTIVE),
    ]
    split = aggregate(commits, "developer")
    assert len(split) == 2
    merged = aggregate(commits, "developer", identity_map={"home@y": "work@x"})
    assert len(merged) == 1
    assert merged[0].corrective == 2


def test_conservation_across_dimensions(synthetic_classified_corpus):
    commits = synthetic_classified_corpus
    totals = {a: sum(1 for c in commits if c.activity is a) for a in Activity}
    for dimension, kwargs in [
        ("developer", {}),
        ("project", {}),
        ("window", {"window_days": 28}),
        ("window", {"window_days": 7}),
    ]:
        profiles = aggregate(commits, dimension, **kwargs)
        for act in Activity:
            assert sum(p.count(act) for p in profiles) == totals[act], dimension


def test_windows_tile_without_overlap(synthetic_classified_corpus):
    profiles = aggregate(synthetic_classified_corpus, "window", window_days=28)
    starts = sorted(p.window_start for p in profiles)
    assert len(set(starts)) == len(starts)
    for s in starts[1:]:
        assert (s - starts[0]) % (28 * 86400) == 0


def test_homogeneous_trivial():
    report = detect_homogeneous([classified("c", "p", "d@x", Activity.CORRECTIVE)])
    row = report.row("p")
    assert row.corrective_only == 1
    assert row.homogeneous_share == 100
    assert row.total_contributors == 1


def test_homogeneous_three_devs():
    commits = [
        classified("c1", "p", "a@x", Activity.CORRECTIVE),
        classified("c2", "p", "a@x", Activity.CORRECTIVE),
        classified("c3", "p", "b@x", Activity.PERFECTIVE),
        classified("c4", "p", "c@x", Activity.CORRECTIVE),
        classified("c5", "p", "c@x", Activity.ADAPTIVE),
    ]
    row = detect_homogeneous(commits).row("p")
    assert (row.corrective_only, row.perfective_only, row.adaptive_only) == (1, 1, 0)
    assert row.homogeneous_share == (100 * 2) // 3 == 66


def test_homogeneous_published_row_shape():
    """A corpus shaped like the Restlet row: 11/3/2 homogeneous of 39."""
    commits = []
    dev = 0
    for count, act in [(11, Activity.CORRECTIVE), (3, Activity.PERFECTIVE), (2, Activity.ADAPTIVE)]:
        for _ in range(count):
            commits.append(classified(f"c{dev}", "restlet", f"d{dev}@x", act))
            dev += 1
    for _ in range(39 - 16):  # heterogeneous remainder
        commits.append(classified(f"c{dev}a", "restlet", f"d{dev}@x", Activity.CORRECTIVE))
        commits.append(classified(f"c{dev}b", "restlet", f"d{dev}@x", Activity.PERFECTIVE))
        dev += 1
    row = detect_homogeneous(commits).row("restlet")
    assert (row.corrective_only, row.perfective_only, row.adaptive_only) == (11, 3, 2)
    assert row.total_contributors == 39
    assert row.homogeneous_share == (100 * 16) // 39 == 41


def test_homogeneous_partition(synthetic_classified_corpus):
    report = detect_homogeneous(synthetic_classified_corpus)
    devs = {}
    for c in synthetic_classified_corpus:
        devs.setdefault((c.project, c.author_email), set()).add(c.activity)
    for row in report.rows:
        contributors = [k for k in devs if k[0] == row.project]
        hetero = sum(1 for k in contributors if len(devs[k]) > 1)
        homo = row.corrective_only + row.perfective_only + row.adaptive_only
        assert homo + hetero == row.total_contributors == len(contributors)


def test_homogeneous_requires_commits():
    with pytest.raises(ArgError):
        detect_homogeneous([])


NO_TESTS = ("src/main/java/App.java", "class App { void run() { go(); } }")
ANNOTATED = (
    "src/test/java/AppTest.java",
    """
    public class AppTest {
        @Test
        public void createsWidget() { check(); }
        @Test
        public void closesCleanly() { check(); }
        @Test
        public void reportsTotals() { check(); }
        private void check() { }
    }
    """,
)
NAMED = (
    "src/test/java/LegacySuite.java",
    """
    public class LegacySuite {
        public void testAlpha() { probe(); }
        public void testBeta() { probe(); }
        private void helper() { }
    }
    """,
)
OUTSIDE = (
    "src/main/java/FooTest.java",
    """
    public class FooTest {
        @Test
        public void stillCounts() { probe(); }
    }
    """,
)
NAMED_OUTSIDE_PLAIN_CLASS = (
    "src/main/java/Runner.java",
    "class Runner { void testDrive() { } }",
)


def test_count_tests_empty_snapshot():
    assert count_tests([NO_TESTS]).test_methods == 0
    assert count_tests([NO_TESTS]).test_classes == 0


def test_count_tests_fixture():
    counts = count_tests([NO_TESTS, ANNOTATED, NAMED])
    assert counts.test_methods == 5
    assert counts.test_classes == 2


def test_count_tests_annotation_counts_anywhere():
    counts = count_tests([OUTSIDE])
    assert counts == count_tests([OUTSIDE])
    assert counts.test_methods == 1
    assert counts.test_classes == 1


def test_count_tests_name_rule_needs_test_context():
    counts = count_tests([NAMED_OUTSIDE_PLAIN_CLASS])
    assert counts.test_methods == 0


def test_count_tests_invariant(synthetic_classified_corpus):
    counts = count_tests([NO_TESTS, ANNOTATED, NAMED, OUTSIDE])
    assert counts.test_methods >= counts.test_classes > 0


def test_count_tests_skips_unparseable():
    counts = count_tests([("Broken.java", "]] nope"), ANNOTATED])
    assert counts.test_methods == 3


def test_export_views_empty(tmp_path):
    paths = export_views([], None, tmp_path / "out")
    csv_text = paths["csv"].read_text()
    assert csv_text.splitlines()[0].startswith("project,")
    assert len(csv_text.splitlines()) == 1
    bundle = json.loads(paths["bundle"].read_text())
    assert bundle["schema_version"] == 1
    assert bundle["profiles"] == []


def test_export_views_cross_format_consistency(tmp_path, synthetic_classified_corpus):
    commits = synthetic_classified_corpus
    profiles = aggregate(commits, "window", window_days=28)
    report = detect_homogeneous(commits)
    paths = export_views(
        profiles, report, tmp_path / "out",
        daily=daily_series(commits), window_days=28,
    )
    bundle = json.loads(paths["bundle"].read_text())
    assert bundle["window_days"] == 28
    csv_lines = paths["csv"].read_text().splitlines()[1:]
    for act, column in [(Activity.CORRECTIVE, 4), (Activity.PERFECTIVE, 5), (Activity.ADAPTIVE, 6)]:
        csv_total = sum(int(line.split(",")[column]) for line in csv_lines)
        json_total = sum(p[act.value] for p in bundle["profiles"])
        daily_total = sum(d[act.value] for d in bundle["daily"])
        assert csv_total == json_total == daily_total


def test_profiles_csv_columns(synthetic_classified_corpus):
    profiles = aggregate(synthetic_classified_corpus, "window", window_days=28)
    header = profiles_csv(profiles).splitlines()[0]
    assert header == "project,developer_email,window_start,window_days,corrective,perfective,adaptive"
