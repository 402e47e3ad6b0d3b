#!/usr/bin/env python3
"""Maintenance-activity profiles: windows, developers, homogeneity, tests."""

import numpy as np

from maintminer.activity import Activity
from maintminer.analytics import (
    ClassifiedCommit,
    aggregate,
    count_tests,
    detect_homogeneous,
)

rng = np.random.RandomState(11)
base = 1_456_790_400  # 2016-03-01
commits = []
for i in range(300):
    dev = f"dev{rng.randint(6)}@example.org"
    act = [Activity.CORRECTIVE, Activity.PERFECTIVE, Activity.ADAPTIVE][rng.randint(3)]
    if dev == "dev5@example.org":
        act = Activity.CORRECTIVE  # one stubbornly homogeneous profile
    commits.append(
        ClassifiedCommit(
            commit_id=f"c{i:03d}", project="demo", author_name=dev.split("@")[0],
            author_email=dev, timestamp=base + int(rng.randint(0, 170)) * 86_400,
            activity=act,
        )
    )

print("28-day windows:")
for p in aggregate(commits, "window", window_days=28):
    from datetime import datetime, timezone

    start = datetime.fromtimestamp(p.window_start, tz=timezone.utc).date()
    bar = "#" * (p.total // 4)
    print(f"  {start}  c={p.corrective:3} p={p.perfective:3} a={p.adaptive:3}  {bar}")

print("\nper-developer profiles:")
for p in aggregate(commits, "developer"):
    print(f"  {p.developer_email:22} c={p.corrective:3} p={p.perfective:3} a={p.adaptive:3}")

row = detect_homogeneous(commits).row("demo")
print(
    f"\nhomogeneous profiles: corrective-only={row.corrective_only} "
    f"perfective-only={row.perfective_only} adaptive-only={row.adaptive_only} "
    f"-> {row.homogeneous_share}% of {row.total_contributors} contributors"
)

snapshot = [
    ("src/test/java/CartTest.java",
     "public class CartTest { @Test public void addsItems() { } @Test public void clears() { } }"),
    ("src/main/java/Cart.java", "public class Cart { void add() { } }"),
]
counts = count_tests(snapshot)
print(f"\ntest snapshot: {counts.test_methods} test methods in {counts.test_classes} test classes")
