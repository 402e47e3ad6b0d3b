"""Aggregations over change records and classified commits.

Everything here is a pure fold over immutable inputs; partial results
merge by count-sum, so parallel decomposition and a single pass agree
exactly.  Windows anchor at the caller's range start and tile it without
overlap.
"""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .activity import Activity
from .changetypes import ChangeType
from .distill import ChangeRecord
from .errors import ArgError
from .javaparse import JavaParseError, parse_java

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1

CSV_COLUMNS = [
    "project", "developer_email", "window_start", "window_days",
    "corrective", "perfective", "adaptive",
]


@dataclass(frozen=True)
class ClassifiedCommit:
    commit_id: str
    project: str
    author_name: str
    author_email: str
    timestamp: int  # UTC seconds
    activity: Activity


@dataclass
class ActivityProfile:
    corrective: int = 0
    perfective: int = 0
    adaptive: int = 0
    project: Optional[str] = None
    developer_email: Optional[str] = None
    developer_name: Optional[str] = None
    window_start: Optional[int] = None  # UTC seconds
    window_days: Optional[int] = None

    def add(self, activity: Activity) -> None:
        if activity is Activity.CORRECTIVE:
            self.corrective += 1
        elif activity is Activity.PERFECTIVE:
            self.perfective += 1
        else:
            self.adaptive += 1

    @property
    def total(self) -> int:
        return self.corrective + self.perfective + self.adaptive

    def count(self, activity: Activity) -> int:
        return {
            Activity.CORRECTIVE: self.corrective,
            Activity.PERFECTIVE: self.perfective,
            Activity.ADAPTIVE: self.adaptive,
        }[activity]


@dataclass(frozen=True)
class TestCounts:
    test_methods: int
    test_classes: int


@dataclass(frozen=True)
class HomogeneityRow:
    project: str
    corrective_only: int
    perfective_only: int
    adaptive_only: int
    homogeneous_share: int  # truncated percentage
    total_contributors: int


@dataclass(frozen=True)
class HomogeneityReport:
    rows: List[HomogeneityRow]

    def row(self, project: str) -> HomogeneityRow:
        for r in self.rows:
            if r.project == project:
                return r
        raise KeyError(project)


def per_commit_frequencies(
    records: Iterable[ChangeRecord],
) -> Dict[str, Dict[ChangeType, int]]:
    """Change-type counts grouped by commit id."""
    out: Dict[str, Dict[ChangeType, int]] = {}
    for r in records:
        bucket = out.setdefault(r.commit_id, {})
        bucket[r.change_type] = bucket.get(r.change_type, 0) + 1
    return out


def merge_frequencies(
    a: Mapping[str, Mapping[ChangeType, int]],
    b: Mapping[str, Mapping[ChangeType, int]],
) -> Dict[str, Dict[ChangeType, int]]:
    """Count-sum merge; the sanctioned parallel reduction."""
    out: Dict[str, Dict[ChangeType, int]] = {k: dict(v) for k, v in a.items()}
    for commit_id, counts in b.items():
        bucket = out.setdefault(commit_id, {})
        for ct, n in counts.items():
            bucket[ct] = bucket.get(ct, 0) + n
    return out


def aggregate(
    commits: Sequence[ClassifiedCommit],
    dimension: str,
    window_days: Optional[int] = None,
    date_range: Optional[Tuple[int, int]] = None,
    identity_map: Optional[Mapping[str, str]] = None,
) -> List[ActivityProfile]:
    """Profiles per developer, project, or time window.

    Developer keying is (email, project); an optional identity map folds
    alias emails onto a canonical one.  Window bucketing assigns each
    commit to floor((t - range_start) / window).
    """
    if dimension not in {"developer", "project", "window"}:
        raise ArgError(f"unknown dimension: {dimension}")
    if dimension == "window":
        if not window_days or window_days <= 0:
            raise ArgError("window dimension needs window_days > 0")
        if date_range is None:
            if not commits:
                return []
            date_range = (min(c.timestamp for c in commits), max(c.timestamp for c in commits))
        start, end = date_range
        if end < start:
            raise ArgError("inverted date range")

    profiles: Dict[object, ActivityProfile] = {}
    for c in commits:
        email = identity_map.get(c.author_email, c.author_email) if identity_map else c.author_email
        if dimension == "developer":
            key = (email, c.project)
            profile = profiles.setdefault(
                key,
                ActivityProfile(
                    project=c.project, developer_email=email, developer_name=c.author_name
                ),
            )
        elif dimension == "project":
            profile = profiles.setdefault(c.project, ActivityProfile(project=c.project))
        else:
            if not (start <= c.timestamp <= end):
                continue
            bucket = (c.timestamp - start) // (window_days * 86400)
            profile = profiles.setdefault(
                bucket,
                ActivityProfile(
                    window_start=start + int(bucket) * window_days * 86400,
                    window_days=window_days,
                ),
            )
        profile.add(c.activity)
    return [profiles[k] for k in sorted(profiles, key=repr)]


def detect_homogeneous(commits: Sequence[ClassifiedCommit]) -> HomogeneityReport:
    """Per project, developers whose classified commits are all one activity."""
    if not commits:
        raise ArgError("need at least one classified commit")
    activities: Dict[str, Dict[Tuple[str, str], set]] = {}
    for c in commits:
        per_project = activities.setdefault(c.project, {})
        per_project.setdefault((c.author_email, c.project), set()).add(c.activity)
    rows = []
    for project in sorted(activities):
        devs = activities[project]
        only = {Activity.CORRECTIVE: 0, Activity.PERFECTIVE: 0, Activity.ADAPTIVE: 0}
        for seen in devs.values():
            if len(seen) == 1:
                only[next(iter(seen))] += 1
        homogeneous = sum(only.values())
        total = len(devs)
        rows.append(
            HomogeneityRow(
                project=project,
                corrective_only=only[Activity.CORRECTIVE],
                perfective_only=only[Activity.PERFECTIVE],
                adaptive_only=only[Activity.ADAPTIVE],
                homogeneous_share=(100 * homogeneous) // total,
                total_contributors=total,
            )
        )
    return HomogeneityReport(rows=rows)


# -- test counting ---------------------------------------------------------

def _is_test_class_context(path: str, class_name: str) -> bool:
    parts = Path(path).parts
    in_test_tree = any(
        parts[i] == "src" and i + 1 < len(parts) and parts[i + 1] == "test"
        for i in range(len(parts))
    )
    named_like_test = class_name.endswith("Test") or class_name.startswith("Test")
    return in_test_tree or named_like_test


def _has_test_annotation(annotations: List[str]) -> bool:
    return any(a.replace(" ", "").startswith("@Test") for a in annotations)


def count_tests(files: Iterable[Tuple[str, str]]) -> TestCounts:
    """JUnit-convention test methods and classes in a snapshot.

    A method is a test iff annotated @Test, or named test* inside a class
    under a src/test path or named *Test/Test*.
    """
    methods = 0
    classes = 0
    for path, source in files:
        try:
            unit = parse_java(source)
        except JavaParseError as exc:
            log.warning("skipping unparseable file %s: %s", path, exc)
            continue
        for class_path, decl in unit.type_map().items():
            class_name = class_path.split(".")[-1]
            test_context = _is_test_class_context(path, class_name)
            in_class = 0
            for m in decl.methods:
                if _has_test_annotation(m.annotations):
                    in_class += 1
                elif m.name.startswith("test") and test_context:
                    in_class += 1
            methods += in_class
            if in_class:
                classes += 1
    return TestCounts(test_methods=methods, test_classes=classes)


# -- exports ---------------------------------------------------------------

def _iso_date(ts: int) -> str:
    return datetime.fromtimestamp(ts, tz=timezone.utc).strftime("%Y-%m-%d")


def daily_series(commits: Sequence[ClassifiedCommit]) -> List[dict]:
    """Per (project, developer, UTC day) activity counts; the granularity
    the explorer re-buckets from."""
    buckets: Dict[Tuple[str, str, str, str], ActivityProfile] = {}
    for c in commits:
        day = _iso_date(c.timestamp)
        key = (c.project, c.author_email, c.author_name, day)
        profile = buckets.setdefault(key, ActivityProfile())
        profile.add(c.activity)
    out = []
    for (project, email, name, day) in sorted(buckets):
        p = buckets[(project, email, name, day)]
        out.append(
            {
                "project": project,
                "developer_email": email,
                "developer_name": name,
                "date": day,
                "corrective": p.corrective,
                "perfective": p.perfective,
                "adaptive": p.adaptive,
            }
        )
    return out


def profiles_csv(profiles: Sequence[ActivityProfile]) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for p in profiles:
        lines.append(
            ",".join(
                [
                    p.project or "",
                    p.developer_email or "",
                    _iso_date(p.window_start) if p.window_start is not None else "",
                    str(p.window_days) if p.window_days is not None else "",
                    str(p.corrective),
                    str(p.perfective),
                    str(p.adaptive),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def export_views(
    profiles: Sequence[ActivityProfile],
    report: Optional[HomogeneityReport],
    destination,
    daily: Optional[List[dict]] = None,
    keyword_frequencies: Optional[List[Tuple[str, int]]] = None,
    change_frequencies: Optional[List[Tuple[str, int]]] = None,
    window_days: Optional[int] = None,
) -> Dict[str, Path]:
    """Write the offline CSV and the explorer's JSON bundle."""
    dest = Path(destination)
    dest.mkdir(parents=True, exist_ok=True)
    csv_path = dest / "profiles.csv"
    csv_text = profiles_csv(profiles)
    csv_path.write_text(csv_text, encoding="utf-8")

    bundle = {
        "schema_version": SCHEMA_VERSION,
        "window_days": window_days,
        "profiles": [
            {
                "project": p.project,
                "developer_email": p.developer_email,
                "developer_name": p.developer_name,
                "window_start": _iso_date(p.window_start) if p.window_start is not None else None,
                "window_days": p.window_days,
                "corrective": p.corrective,
                "perfective": p.perfective,
                "adaptive": p.adaptive,
            }
            for p in profiles
        ],
        "daily": daily or [],
        "homogeneity": [
            {
                "project": r.project,
                "corrective_only": r.corrective_only,
                "perfective_only": r.perfective_only,
                "adaptive_only": r.adaptive_only,
                "homogeneous_share": r.homogeneous_share,
                "total_contributors": r.total_contributors,
            }
            for r in (report.rows if report else [])
        ],
        "keyword_frequencies": [
            {"stem": s, "count": n} for s, n in (keyword_frequencies or [])
        ],
        "change_type_frequencies": [
            {"change_type": s, "count": n} for s, n in (change_frequencies or [])
        ],
    }
    bundle_path = dest / "bundle.json"
    try:
        bundle_path.write_text(json.dumps(bundle, indent=1), encoding="utf-8")
    except OSError as exc:
        raise ArgError(f"cannot write {bundle_path}: {exc}") from exc
    return {"csv": csv_path, "bundle": bundle_path}
