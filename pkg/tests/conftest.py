from __future__ import annotations

import subprocess
from pathlib import Path

import pytest

from maintminer.activity import Activity
from maintminer.analytics import ClassifiedCommit


def run_git(repo: Path, *args, env_extra=None):
    env = {
        "GIT_AUTHOR_NAME": "Dev One",
        "GIT_AUTHOR_EMAIL": "dev1@example.org",
        "GIT_COMMITTER_NAME": "Dev One",
        "GIT_COMMITTER_EMAIL": "dev1@example.org",
        "GIT_AUTHOR_DATE": "2016-03-01T12:00:00+00:00",
        "GIT_COMMITTER_DATE": "2016-03-01T12:00:00+00:00",
        "HOME": str(repo),
    }
    if env_extra:
        env.update(env_extra)
    subprocess.run(
        ["git", "-C", str(repo), *args], check=True, capture_output=True, env=env
    )


def make_repo(path: Path, branch: str = "master") -> Path:
    path.mkdir(parents=True, exist_ok=True)
    subprocess.run(
        ["git", "-C", str(path), "init", "-q", "-b", branch], check=True, capture_output=True
    )
    return path


def commit_files(repo: Path, message: str, files: dict, author=("Dev One", "dev1@example.org"),
                 when="2016-03-01T12:00:00+00:00", delete=()):
    for rel, content in files.items():
        target = repo / rel
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(content, encoding="utf-8")
        run_git(repo, "add", rel)
    for rel in delete:
        run_git(repo, "rm", "-q", rel)
    run_git(
        repo, "commit", "-q", "--allow-empty", "-m", message,
        env_extra={
            "GIT_AUTHOR_NAME": author[0],
            "GIT_AUTHOR_EMAIL": author[1],
            "GIT_COMMITTER_NAME": author[0],
            "GIT_COMMITTER_EMAIL": author[1],
            "GIT_AUTHOR_DATE": when,
            "GIT_COMMITTER_DATE": when,
        },
    )


@pytest.fixture
def three_commit_repo(tmp_path):
    """master branch with three sequential Java-touching commits."""
    repo = make_repo(tmp_path / "fixture-repo")
    commit_files(
        repo, "add greeter",
        {"src/main/java/Greeter.java": "public class Greeter {\n    public void greet() {\n        say(1);\n    }\n}\n"},
        when="2016-03-01T12:00:00+00:00",
    )
    commit_files(
        repo, "fix greeting count",
        {"src/main/java/Greeter.java": "public class Greeter {\n    public void greet() {\n        say(2);\n    }\n}\n"},
        when="2016-03-02T12:00:00+00:00",
    )
    commit_files(
        repo, "add readme",
        {"README.md": "docs only\n"},
        when="2016-03-03T12:00:00+00:00",
    )
    return repo


def classified(commit_id, project, email, activity, ts=1456833600, name=None):
    return ClassifiedCommit(
        commit_id=commit_id, project=project, author_name=name or email.split("@")[0],
        author_email=email, timestamp=ts, activity=activity,
    )


@pytest.fixture
def synthetic_classified_corpus():
    """1000 classified commits across projects/developers/windows."""
    import numpy as np

    rng = np.random.RandomState(7)
    activities = list(Activity)
    base = 1456790400  # 2016-03-01
    commits = []
    for i in range(1000):
        project = f"proj{rng.randint(4)}"
        dev = f"dev{rng.randint(17)}@example.org"
        act = activities[rng.randint(3)]
        ts = base + int(rng.randint(0, 360)) * 86400 + int(rng.randint(0, 86400))
        commits.append(classified(f"c{i:04d}", project, dev, act, ts))
    return commits
