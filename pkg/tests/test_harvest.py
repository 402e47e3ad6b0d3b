from __future__ import annotations

import subprocess

import pytest

from maintminer.errors import BranchNotFound, CommitNotFound, RepoAccessError
from maintminer.harvest import (
    FilePair,
    extract_file_pairs,
    harvest_repository,
    linearize_history,
    read_harvest,
    write_harvest,
)

from conftest import commit_files, make_repo, run_git


def test_file_pair_invariants():
    with pytest.raises(ValueError):
        FilePair("A.java", None, None)
    with pytest.raises(ValueError):
        FilePair("notes.txt", "a", "b")


def test_empty_repository_yields_empty_sequence(tmp_path):
    repo = make_repo(tmp_path / "empty")
    assert linearize_history(repo) == []


def test_unreadable_repo(tmp_path):
    plain = tmp_path / "plain"
    plain.mkdir()
    with pytest.raises(RepoAccessError):
        linearize_history(plain)
    with pytest.raises(RepoAccessError):
        linearize_history(tmp_path / "missing")


def test_branch_not_found(tmp_path):
    repo = make_repo(tmp_path / "other", branch="develop")
    commit_files(repo, "seed", {"A.java": "class A { }\n"})
    with pytest.raises(BranchNotFound):
        linearize_history(repo, ["master", "trunk"])


def test_trunk_fallback(tmp_path):
    repo = make_repo(tmp_path / "svnish", branch="trunk")
    commit_files(repo, "seed", {"A.java": "class A { }\n"})
    records = linearize_history(repo, ["master", "trunk"])
    assert len(records) == 1


def test_three_commits_in_parent_order(three_commit_repo):
    records = linearize_history(three_commit_repo)
    assert len(records) == 3
    # oracle: git's own reverse-chronological log, reversed
    out = subprocess.run(
        ["git", "-C", str(three_commit_repo), "log", "--format=%H", "master"],
        check=True, capture_output=True, text=True,
    ).stdout.split()
    assert [r.commit_id for r in records] == out[::-1]
    assert [r.message for r in records] == ["add greeter", "fix greeting count", "add readme"]
    assert records[0].author_email == "dev1@example.org"


def test_non_java_commit_has_no_pairs(three_commit_repo):
    records = linearize_history(three_commit_repo)
    assert extract_file_pairs(three_commit_repo, records[2].commit_id) == []


def test_added_file_pair(three_commit_repo):
    records = linearize_history(three_commit_repo)
    pairs = extract_file_pairs(three_commit_repo, records[0].commit_id)
    assert len(pairs) == 1
    assert pairs[0].before is None
    assert "class Greeter" in pairs[0].after


def test_modified_pair(three_commit_repo):
    records = linearize_history(three_commit_repo)
    pairs = extract_file_pairs(three_commit_repo, records[1].commit_id)
    assert len(pairs) == 1
    assert "say(1)" in pairs[0].before
    assert "say(2)" in pairs[0].after


def test_modify_and_delete(tmp_path):
    repo = make_repo(tmp_path / "mixed")
    commit_files(repo, "seed", {"A.java": "class A { }\n", "B.java": "class B { }\n"})
    commit_files(
        repo, "modify A drop B", {"A.java": "class A { int x; }\n"}, delete=["B.java"]
    )
    records = linearize_history(repo)
    pairs = {p.path: p for p in extract_file_pairs(repo, records[1].commit_id)}
    assert set(pairs) == {"A.java", "B.java"}
    assert pairs["B.java"].after is None
    assert pairs["A.java"].before == "class A { }\n"


def test_unknown_commit(three_commit_repo):
    with pytest.raises(CommitNotFound):
        extract_file_pairs(three_commit_repo, "0" * 40)


def test_first_parent_skips_side_branch(tmp_path):
    repo = make_repo(tmp_path / "merged")
    commit_files(repo, "base", {"A.java": "class A { }\n"})
    run_git(repo, "checkout", "-q", "-b", "side")
    commit_files(repo, "side work", {"B.java": "class B { }\n"})
    run_git(repo, "checkout", "-q", "master")
    commit_files(repo, "mainline", {"C.java": "class C { }\n"})
    run_git(repo, "merge", "-q", "--no-ff", "-m", "merge side", "side")
    records = linearize_history(repo)
    messages = [r.message for r in records]
    assert "side work" not in messages
    assert messages == ["base", "mainline", "merge side"]
    # the merge commit diffs against its first parent only
    merge_pairs = extract_file_pairs(repo, records[-1].commit_id)
    assert [p.path for p in merge_pairs] == ["B.java"]


def test_binary_java_file_skipped(tmp_path):
    repo = make_repo(tmp_path / "binary")
    (repo / "Bin.java").write_bytes(b"\x00\x01\x02 class?")
    run_git(repo, "add", "Bin.java")
    run_git(repo, "commit", "-q", "-m", "binary blob")
    records = linearize_history(repo)
    assert extract_file_pairs(repo, records[0].commit_id) == []


def test_replay_consistency(three_commit_repo):
    """Applying each commit's pairs to the prior state reproduces the
    Java file set of every revision, and each revision is touched once."""
    state: dict = {}
    for record in harvest_repository(three_commit_repo):
        for pair in record.file_pairs:
            if pair.after is None:
                state.pop(pair.path, None)
            else:
                state[pair.path] = pair.after
        checkout = subprocess.run(
            ["git", "-C", str(three_commit_repo), "ls-tree", "-r", "--name-only",
             record.commit_id],
            check=True, capture_output=True, text=True,
        ).stdout.split()
        java_files = {p for p in checkout if p.endswith(".java")}
        assert set(state) == java_files
        for path in state:
            blob = subprocess.run(
                ["git", "-C", str(three_commit_repo), "show", f"{record.commit_id}:{path}"],
                check=True, capture_output=True, text=True,
            ).stdout
            assert state[path] == blob


def test_harvest_round_trip(three_commit_repo, tmp_path):
    records = harvest_repository(three_commit_repo)
    out = tmp_path / "harvest"
    write_harvest(records, out)
    loaded = read_harvest(out)
    assert loaded == records
