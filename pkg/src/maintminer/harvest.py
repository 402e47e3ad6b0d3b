"""Linearize a git repository's history and extract before/after Java sources.

Traversal is first-parent only, in parent-to-child order, over the first
branch of the caller's preference list that exists.  File contents come
straight from the object store, so whitespace-damaged patches and binary
blobs cannot derail a harvest; renames surface as delete+add.
"""

from __future__ import annotations

import hashlib
import json
import logging
import subprocess
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple

from .errors import BranchNotFound, CommitNotFound, RepoAccessError

log = logging.getLogger(__name__)

DEFAULT_BRANCHES = ("master", "trunk")

_FIELD_SEP = "\x1f"
_RECORD_SEP = "\x1e"


@dataclass(frozen=True)
class FilePair:
    """One touched Java file; a missing side (add/delete) is None."""

    path: str
    before: Optional[str]
    after: Optional[str]

    def __post_init__(self):
        if self.before is None and self.after is None:
            raise ValueError("a file pair needs at least one side")
        if not self.path.endswith(".java"):
            raise ValueError(f"not a Java path: {self.path}")


@dataclass(frozen=True)
class CommitRecord:
    commit_id: str
    author_name: str
    author_email: str
    timestamp: int  # UTC seconds
    message: str
    project: str
    file_pairs: Tuple[FilePair, ...] = ()


def _git(repo_path, *args: str, binary: bool = False) -> bytes:
    proc = subprocess.run(
        ["git", "-C", str(repo_path), *args],
        capture_output=True,
    )
    if proc.returncode != 0:
        raise subprocess.CalledProcessError(
            proc.returncode, proc.args, output=proc.stdout, stderr=proc.stderr
        )
    return proc.stdout if binary else proc.stdout


def _require_repo(repo_path) -> None:
    path = Path(repo_path)
    if not path.is_dir():
        raise RepoAccessError(f"not a directory: {path}")
    try:
        _git(path, "rev-parse", "--git-dir")
    except (subprocess.CalledProcessError, OSError) as exc:
        raise RepoAccessError(f"not a readable git repository: {path}") from exc


def _branch_exists(repo_path, branch: str) -> bool:
    try:
        _git(repo_path, "rev-parse", "--verify", "--quiet", f"refs/heads/{branch}")
        return True
    except subprocess.CalledProcessError:
        return False


def _repo_is_empty(repo_path) -> bool:
    out = _git(repo_path, "rev-list", "--all", "--max-count=1").decode("ascii", "replace")
    return not out.strip()


def linearize_history(
    repo_path,
    branch_preference: Sequence[str] = DEFAULT_BRANCHES,
    project: Optional[str] = None,
) -> List[CommitRecord]:
    """First-parent history of the preferred branch, oldest first.

    File pairs are not populated; use :func:`extract_file_pairs` per
    commit (safe to parallelize, reads only).
    """
    _require_repo(repo_path)
    project = project or Path(repo_path).resolve().name
    branch = next((b for b in branch_preference if _branch_exists(repo_path, b)), None)
    if branch is None:
        if _repo_is_empty(repo_path):
            return []
        raise BranchNotFound(
            f"none of the preferred branches {list(branch_preference)} exist in {repo_path}"
        )
    fmt = _FIELD_SEP.join(["%H", "%an", "%ae", "%ct", "%B"]) + _RECORD_SEP
    raw = _git(
        repo_path, "log", "--first-parent", "--reverse", f"--format={fmt}", branch
    ).decode("utf-8", "replace")
    records = []
    for chunk in raw.split(_RECORD_SEP):
        if not chunk.strip("\n"):
            continue
        commit_id, name, email, ts, message = chunk.lstrip("\n").split(_FIELD_SEP, 4)
        records.append(
            CommitRecord(
                commit_id=commit_id,
                author_name=name,
                author_email=email,
                timestamp=int(ts),
                message=message.rstrip("\n"),
                project=project,
            )
        )
    return records


def _decode_blob(data: bytes, path: str, commit_id: str) -> Optional[str]:
    if b"\x00" in data:
        log.warning("skipping binary blob %s at %s", path, commit_id[:12])
        return None
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError:
        log.warning("falling back to latin-1 for %s at %s", path, commit_id[:12])
        return data.decode("latin-1")


def extract_file_pairs(repo_path, commit_id: str) -> List[FilePair]:
    """Before/after text of every Java file the commit touched."""
    _require_repo(repo_path)
    try:
        _git(repo_path, "cat-file", "-e", f"{commit_id}^{{commit}}")
    except subprocess.CalledProcessError:
        raise CommitNotFound(f"no such commit: {commit_id}")
    raw = _git(
        repo_path,
        "diff-tree", "-r", "--root", "--no-renames", "-m", "--first-parent", "-z",
        "--diff-filter=AMD", commit_id,
    ).decode("utf-8", "replace")
    entries = raw.split("\x00")
    pairs: List[FilePair] = []
    i = 0
    headers = 0
    while i < len(entries):
        meta = entries[i]
        if not meta.startswith(":"):
            # merge commits repeat a header per parent; keep the first block
            if meta.strip():
                headers += 1
                if headers > 1:
                    break
            i += 1
            continue
        _, _, old_sha, new_sha, status = meta[1:].split(" ")
        path = entries[i + 1]
        i += 2
        if not path.endswith(".java"):
            continue
        before = after = None
        ok = True
        if status != "A":
            data = _git(repo_path, "cat-file", "blob", old_sha, binary=True)
            before = _decode_blob(data, path, commit_id)
            ok = ok and before is not None
        if status != "D":
            data = _git(repo_path, "cat-file", "blob", new_sha, binary=True)
            after = _decode_blob(data, path, commit_id)
            ok = ok and after is not None
        if ok:
            pairs.append(FilePair(path=path, before=before, after=after))
    return pairs


def harvest_repository(
    repo_path,
    branch_preference: Sequence[str] = DEFAULT_BRANCHES,
    project: Optional[str] = None,
) -> List[CommitRecord]:
    """Linearize and populate file pairs for every commit."""
    out = []
    for record in linearize_history(repo_path, branch_preference, project):
        pairs = extract_file_pairs(repo_path, record.commit_id)
        out.append(replace(record, file_pairs=tuple(pairs)))
    return out


# -- on-disk format ------------------------------------------------------

def _blob_id(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def write_harvest(records: Iterable[CommitRecord], out_dir) -> Path:
    """JSONL of commit records, file contents in a content-addressed store."""
    out = Path(out_dir)
    blob_dir = out / "blobs"
    blob_dir.mkdir(parents=True, exist_ok=True)

    def store(text: Optional[str]) -> Optional[str]:
        if text is None:
            return None
        digest = _blob_id(text)
        target = blob_dir / digest[:2] / digest[2:]
        if not target.exists():
            target.parent.mkdir(exist_ok=True)
            target.write_text(text, encoding="utf-8")
        return digest

    jsonl = out / "commits.jsonl"
    with jsonl.open("w", encoding="utf-8") as fh:
        for r in records:
            doc = {
                "commit_id": r.commit_id,
                "author_name": r.author_name,
                "author_email": r.author_email,
                "timestamp": r.timestamp,
                "message": r.message,
                "project": r.project,
                "file_pairs": [
                    {"path": p.path, "before": store(p.before), "after": store(p.after)}
                    for p in r.file_pairs
                ],
            }
            fh.write(json.dumps(doc, ensure_ascii=False) + "\n")
    return jsonl


def read_harvest(harvest_dir) -> List[CommitRecord]:
    base = Path(harvest_dir)
    blob_dir = base / "blobs"

    def load(digest: Optional[str]) -> Optional[str]:
        if digest is None:
            return None
        return (blob_dir / digest[:2] / digest[2:]).read_text(encoding="utf-8")

    records = []
    with (base / "commits.jsonl").open(encoding="utf-8") as fh:
        for line in fh:
            doc = json.loads(line)
            pairs = tuple(
                FilePair(path=p["path"], before=load(p["before"]), after=load(p["after"]))
                for p in doc["file_pairs"]
            )
            records.append(
                CommitRecord(
                    commit_id=doc["commit_id"],
                    author_name=doc["author_name"],
                    author_email=doc["author_email"],
                    timestamp=doc["timestamp"],
                    message=doc["message"],
                    project=doc["project"],
                    file_pairs=pairs,
                )
            )
    return records
