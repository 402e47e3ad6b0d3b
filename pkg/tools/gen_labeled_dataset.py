#!/usr/bin/env python3
"""Deterministically regenerate the bundled labeled corpus.

The corpus is synthetic: 1151 commits over 11 projects with 500
corrective, 404 perfective, and 247 adaptive labels, 33,149 fine-grained
changes in total, per-class top-10 stem rankings fixed to the shipped
vocabulary lists, and roughly 28% of messages free of vocabulary stems.
Commit messages and change profiles carry class signal of realistic
strength: keywords are the stronger cue, change types the weaker one.

Usage: python tools/gen_labeled_dataset.py [--out PATH] [--check-only]
"""

from __future__ import annotations

import argparse
import sys
from collections import Counter
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from maintminer.activity import Activity
from maintminer.changetypes import CANONICAL_ORDER, ChangeType
from maintminer.dataset import LabeledCommit, write_labeled_dataset
from maintminer.textfeat import DEFAULT_TOP10, default_vocabulary, normalize_message

SEED = 20160401
TOTAL_CHANGES = 33_149

PROJECTS = [
    "rxjava", "intellij-community", "hbase", "drools", "kotlin", "hadoop",
    "elasticsearch", "restlet", "orientdb", "camel", "spring-framework",
]

CLASS_TOTALS = {Activity.CORRECTIVE: 500, Activity.PERFECTIVE: 404, Activity.ADAPTIVE: 247}

# probability that a message of the class carries no vocabulary stem
PLAIN_SHARE = {Activity.CORRECTIVE: 0.31, Activity.PERFECTIVE: 0.27, Activity.ADAPTIVE: 0.28}

# sampling weight of each vocabulary stem within keyword-bearing messages;
# descending weights pin the per-class top-10 rankings
KEYWORD_WEIGHTS = {
    Activity.CORRECTIVE: {
        "fix": 0.95, "test": 0.24, "issu": 0.22, "use": 0.19, "fail": 0.175,
        "bug": 0.16, "report": 0.14, "set": 0.12, "error": 0.105, "npe": 0.09,
        "remov": 0.048, "support": 0.044, "chang": 0.042, "add": 0.038,
        "method": 0.034, "implement": 0.032, "new": 0.024, "allow": 0.018,
        "improv": 0.016, "refactor": 0.008,
    },
    Activity.PERFECTIVE: {
        "test": 0.46, "remov": 0.36, "use": 0.27, "fix": 0.18, "refactor": 0.165,
        "method": 0.155, "chang": 0.145, "add": 0.135, "improv": 0.125, "new": 0.105,
        "set": 0.046, "support": 0.030, "issu": 0.030, "error": 0.026,
        "implement": 0.026, "fail": 0.024, "report": 0.020, "allow": 0.018,
        "bug": 0.010, "npe": 0.003,
    },
    Activity.ADAPTIVE: {
        "support": 0.54, "add": 0.50, "implement": 0.44, "new": 0.37, "allow": 0.32,
        "use": 0.20, "method": 0.175, "test": 0.15, "set": 0.13, "chang": 0.115,
        "remov": 0.060, "fix": 0.050, "improv": 0.040, "issu": 0.032, "error": 0.020,
        "report": 0.016, "fail": 0.012, "bug": 0.010, "refactor": 0.008, "npe": 0.002,
    },
}

# surface forms per stem; every form stems back onto its key
INFLECTIONS = {
    "fix": ["fix", "fixed", "fixes", "fixing"],
    "test": ["test", "tests", "testing", "tested"],
    "issu": ["issue", "issues"],
    "use": ["use", "used", "uses", "using"],
    "fail": ["failed", "fails", "failing", "fail"],
    "bug": ["bug", "bugs"],
    "report": ["reported", "report", "reports"],
    "set": ["set", "sets", "setting"],
    "error": ["error", "errors"],
    "npe": ["NPE", "npe"],
    "remov": ["remove", "removed", "removes", "removing"],
    "refactor": ["refactor", "refactored", "refactoring"],
    "method": ["method", "methods"],
    "chang": ["change", "changed", "changes", "changing"],
    "add": ["add", "adds"],
    "improv": ["improve", "improved", "improves", "improving"],
    "new": ["new"],
    "implement": ["implement", "implemented", "implements", "implementation"],
    "support": ["support", "supports", "supported", "supporting"],
    "allow": ["allow", "allows", "allowed", "allowing"],
}

# frequent domain chatter that the custom stopword list strips away
DOMAIN_FILLER = [
    "patch", "code", "version", "data", "client", "file", "project", "module",
    "message", "cache", "column", "token", "region", "node", "scan", "common",
    "plugin", "default", "class", "byte", "checksum", "app", "timeline",
]

# long tail of ordinary words; each stays rare so none can crack a top-10
RARE_FILLER = """
stream parser thread pool handler socket buffer index query builder
connection session logger wrapper iterator registry scheduler validator
mapper reducer codec snappy journal segment replica shard lease quota
marshaller listener adapter visitor proxy facade bridge decorator
throttle backoff retry timeout deadlock visibility ordering barrier
fence monitor latch semaphore mutex atomic checkpoint compaction
flush rollover archive restore backup mirror clone template profile
binding descriptor manifest artifact bundle container runtime engine
kernel daemon worker executor dispatcher router gateway channel
frame packet header payload cursor batch chunk page block extent
bucket slot entry record tuple row matrix vector graph tree heap
stack queue deque list array table map grid mesh lattice ring torus
assert verify validate inspect audit trace instrument measure sample
benchmark calibrate profile tune polish tidy simplify streamline
harden stabilize guard shield protect isolate quarantine sandbox
"""

TICKET_PREFIX = {
    "rxjava": "RX", "intellij-community": "IDEA", "hbase": "HBASE",
    "drools": "DROOLS", "kotlin": "KT", "hadoop": "HADOOP",
    "elasticsearch": "ES", "restlet": "RESTLET", "orientdb": "ODB",
    "camel": "CAMEL", "spring-framework": "SPR",
}

_BASE_MIX = {
    "STATEMENT_INSERT": 20.0, "STATEMENT_UPDATE": 14.0, "STATEMENT_DELETE": 10.0,
    "ADDITIONAL_FUNCTIONALITY": 7.0, "CONDITION_EXPRESSION_CHANGE": 4.0,
    "ADDITIONAL_OBJECT_STATE": 3.5, "DOC_UPDATE": 2.5, "COMMENT_INSERT": 2.5,
    "REMOVED_FUNCTIONALITY": 2.2, "PARAMETER_INSERT": 1.8, "COMMENT_UPDATE": 1.5,
    "DOC_INSERT": 1.5, "COMMENT_DELETE": 1.2, "REMOVED_OBJECT_STATE": 1.2,
    "ALTERNATIVE_PART_INSERT": 1.2, "ADDITIONAL_CLASS": 1.0,
    "STATEMENT_PARENT_CHANGE": 1.0, "DOC_DELETE": 1.0,
    "STATEMENT_ORDERING_CHANGE": 0.8, "METHOD_RENAMING": 0.7,
    "ALTERNATIVE_PART_DELETE": 0.5, "ATTRIBUTE_RENAMING": 0.5,
    "PARAMETER_DELETE": 0.5, "PARAMETER_RENAMING": 0.5, "RETURN_TYPE_CHANGE": 0.4,
    "REMOVED_CLASS": 0.4, "ATTRIBUTE_TYPE_CHANGE": 0.4, "PARAMETER_TYPE_CHANGE": 0.35,
    "INCREASING_ACCESSIBILITY_CHANGE": 0.3, "DECREASING_ACCESSIBILITY_CHANGE": 0.25,
    "UNKNOWN": 0.3, "PARENT_CLASS_CHANGE": 0.1, "PARENT_INTERFACE_CHANGE": 0.1,
    "PARENT_INTERFACE_INSERT": 0.1, "COMMENT_MOVE": 0.1,
}

_CLASS_TILTS = {
    Activity.CORRECTIVE: {
        "STATEMENT_UPDATE": 1.8, "CONDITION_EXPRESSION_CHANGE": 2.0,
        "STATEMENT_DELETE": 1.2, "ALTERNATIVE_PART_INSERT": 1.4,
        "ADDITIONAL_FUNCTIONALITY": 0.55, "ADDITIONAL_CLASS": 0.45,
        "DOC_UPDATE": 0.6, "DOC_INSERT": 0.6, "DOC_DELETE": 0.6,
        "COMMENT_INSERT": 0.8, "ADDITIONAL_OBJECT_STATE": 0.7,
    },
    Activity.PERFECTIVE: {
        "DOC_UPDATE": 2.1, "DOC_INSERT": 1.7, "DOC_DELETE": 1.7,
        "COMMENT_INSERT": 1.9, "COMMENT_UPDATE": 1.9, "COMMENT_DELETE": 1.9,
        "REMOVED_FUNCTIONALITY": 1.8, "REMOVED_OBJECT_STATE": 1.7,
        "REMOVED_CLASS": 1.7, "METHOD_RENAMING": 1.8, "ATTRIBUTE_RENAMING": 1.8,
        "STATEMENT_DELETE": 1.45, "STATEMENT_INSERT": 0.7,
        "ADDITIONAL_FUNCTIONALITY": 0.9,
    },
    Activity.ADAPTIVE: {
        "ADDITIONAL_FUNCTIONALITY": 2.9, "ADDITIONAL_CLASS": 2.4,
        "ADDITIONAL_OBJECT_STATE": 1.8, "PARAMETER_INSERT": 1.6,
        "STATEMENT_INSERT": 2.0, "PARENT_INTERFACE_INSERT": 2.0,
        "RETURN_TYPE_CHANGE": 1.2, "STATEMENT_DELETE": 0.7,
        "REMOVED_FUNCTIONALITY": 0.5, "REMOVED_OBJECT_STATE": 0.5,
        "REMOVED_CLASS": 0.5, "DOC_UPDATE": 0.9,
    },
}

# Commit-level profile noise.  Keyword-free commits get cleaner, more
# class-typical change profiles than keyword-bearing ones: that is what
# lets a Combined no-keyword component beat the majority fallback while
# changes-only models stay weak overall.
ALPHA_PLAIN = 15.0
ALPHA_KEYWORDED = 6.5
TILT_POWER_PLAIN = 1.5
TILT_POWER_KEYWORDED = 0.7


def class_mixture(activity: Activity, tilt_power: float) -> np.ndarray:
    weights = []
    tilt = _CLASS_TILTS[activity]
    for ct in CANONICAL_ORDER:
        base = _BASE_MIX.get(ct.name, 0.05)
        weights.append(base * tilt.get(ct.name, 1.0) ** tilt_power)
    w = np.asarray(weights)
    return w / w.sum()


def _rare_filler_pool() -> list[str]:
    vocab = set(default_vocabulary().stems)
    pool = []
    for word in RARE_FILLER.split():
        stems = normalize_message(word)
        if not stems & vocab:
            pool.append(word)
    return pool


def _message(rng, activity: Activity, project: str, rare_pool) -> tuple[str, bool]:
    words: list[str] = []
    if rng.rand() < 0.22:
        words.append(f"[{TICKET_PREFIX[project]}-{rng.randint(100, 9999)}]")
    keyworded = rng.rand() >= PLAIN_SHARE[activity]
    if keyworded:
        stems = list(KEYWORD_WEIGHTS[activity])
        w = np.array([KEYWORD_WEIGHTS[activity][s] for s in stems])
        k = rng.choice([1, 2, 3, 4], p=[0.42, 0.36, 0.17, 0.05])
        picks = rng.choice(len(stems), size=min(k, len(stems)), replace=False, p=w / w.sum())
        for i in picks:
            words.append(INFLECTIONS[stems[i]][rng.randint(len(INFLECTIONS[stems[i]]))])
    n_domain = rng.randint(1, 4)
    words.extend(rng.choice(DOMAIN_FILLER, size=n_domain, replace=False))
    n_rare = rng.randint(1, 4)
    words.extend(rng.choice(rare_pool, size=n_rare, replace=False))
    connectors = ["in", "for", "when", "of", "the", "on", "to", "with"]
    body = []
    for i, word in enumerate(words):
        body.append(word)
        if i + 1 < len(words) and rng.rand() < 0.4:
            body.append(connectors[rng.randint(len(connectors))])
    text = " ".join(body)
    return text[0].upper() + text[1:], keyworded


def _changes(rng, activity: Activity, keyworded: bool, mixtures) -> dict[ChangeType, int]:
    if rng.rand() < 0.02:
        return {}
    total = int(np.clip(rng.lognormal(mean=2.23, sigma=1.5), 1, 800))
    alpha = ALPHA_KEYWORDED if keyworded else ALPHA_PLAIN
    mix = rng.dirichlet(alpha * mixtures[(activity, keyworded)])
    counts = rng.multinomial(total, mix)
    return {ct: int(c) for ct, c in zip(CANONICAL_ORDER, counts) if c}


def _top_stems(data, activity: Activity, k: int = 12):
    freq = Counter()
    for c in data:
        if c.label is activity:
            freq.update(normalize_message(c.message))
    return sorted(freq.items(), key=lambda kv: (-kv[1], kv[0]))[: k], freq


def _repair_rankings(data, rng, rare_pool) -> list:
    """Nudge message stem counts until each class top-10 is exact."""
    vocab = set(default_vocabulary().stems)
    data = list(data)
    for _ in range(400):
        violations = 0
        for activity, wanted in DEFAULT_TOP10.items():
            ranked, freq = _top_stems(data, activity)
            target_counts = [freq[s] for s in wanted]
            # wanted order must hold strictly, and #10 must beat everything else
            needs_boost = []
            for i in range(1, len(wanted)):
                if target_counts[i - 1] <= target_counts[i]:
                    needs_boost.append(wanted[i - 1])
            ceiling = target_counts[-1]
            for stem, count in freq.items():
                if stem in wanted:
                    continue
                if count >= ceiling:
                    if stem in vocab:
                        # push the intruding vocabulary stem back down
                        _strip_stem(data, rng, activity, stem)
                    else:
                        _strip_stem(data, rng, activity, stem)
                    violations += 1
            for stem in needs_boost:
                _boost_stem(data, rng, activity, stem, rare_pool)
                violations += 1
        if violations == 0:
            return data
    raise RuntimeError("ranking repair did not converge")


def _boost_stem(data, rng, activity, stem, rare_pool) -> None:
    surfaces = INFLECTIONS.get(stem, [stem])
    candidates = [
        i for i, c in enumerate(data)
        if c.label is activity and stem not in normalize_message(c.message)
        and (normalize_message(c.message) & set(default_vocabulary().stems))
    ]
    if not candidates:
        candidates = [i for i, c in enumerate(data) if c.label is activity]
    i = candidates[rng.randint(len(candidates))]
    c = data[i]
    data[i] = LabeledCommit(
        c.project, c.commit_id, c.label,
        c.message + " " + surfaces[rng.randint(len(surfaces))], c.change_counts,
    )


def _strip_stem(data, rng, activity, stem) -> None:
    holders = [
        i for i, c in enumerate(data)
        if c.label is activity and stem in normalize_message(c.message)
    ]
    if not holders:
        return
    i = holders[rng.randint(len(holders))]
    c = data[i]
    kept = [w for w in c.message.split() if stem not in normalize_message(w)]
    message = " ".join(kept) if kept else "housekeeping pass"
    data[i] = LabeledCommit(c.project, c.commit_id, c.label, message, c.change_counts)


def _balance_total_changes(data, rng) -> list:
    data = list(data)
    stmt = ChangeType.STATEMENT_INSERT
    current = sum(c.total_changes() for c in data)
    delta = TOTAL_CHANGES - current
    while delta != 0:
        i = rng.randint(len(data))
        c = data[i]
        changes = dict(c.change_counts)
        if delta > 0:
            changes[stmt] = changes.get(stmt, 0) + 1
            delta -= 1
        else:
            if changes.get(stmt, 0) > 0:
                changes[stmt] -= 1
                if changes[stmt] == 0:
                    del changes[stmt]
                delta += 1
            else:
                continue
        data[i] = LabeledCommit(c.project, c.commit_id, c.label, c.message, changes)
    return data


def generate() -> list:
    rng = np.random.RandomState(SEED)
    rare_pool = _rare_filler_pool()
    mixtures = {
        (a, keyworded): class_mixture(a, TILT_POWER_KEYWORDED if keyworded else TILT_POWER_PLAIN)
        for a in Activity
        for keyworded in (False, True)
    }

    labels = []
    for activity, total in CLASS_TOTALS.items():
        labels.extend([activity] * total)
    labels = [labels[i] for i in rng.permutation(len(labels))]

    per_project = np.full(len(PROJECTS), len(labels) // len(PROJECTS))
    per_project[: len(labels) % len(PROJECTS)] += 1

    data = []
    cursor = 0
    for project, quota in zip(PROJECTS, per_project):
        for _ in range(int(quota)):
            activity = labels[cursor]
            commit_id = "".join(rng.choice(list("0123456789abcdef"), size=40))
            message, keyworded = _message(rng, activity, project, rare_pool)
            data.append(
                LabeledCommit(
                    project=project,
                    commit_id=commit_id,
                    label=activity,
                    message=message,
                    change_counts=_changes(rng, activity, keyworded, mixtures),
                )
            )
            cursor += 1

    data = _repair_rankings(data, rng, rare_pool)
    data = _balance_total_changes(data, rng)
    return data


def check(data) -> None:
    from maintminer.dataset import class_counts
    from maintminer.textfeat import has_keywords

    counts = class_counts(data)
    assert len(data) == 1151, len(data)
    assert counts == CLASS_TOTALS, counts
    total = sum(c.total_changes() for c in data)
    assert total == TOTAL_CHANGES, total
    for activity, wanted in DEFAULT_TOP10.items():
        ranked, _ = _top_stems(data, activity, k=10)
        got = tuple(s for s, _ in ranked)
        assert got == wanted, (activity, got, wanted)
    plain = sum(1 for c in data if not has_keywords(normalize_message(c.message)))
    share = plain / len(data)
    assert 0.24 <= share <= 0.32, share
    print(f"corpus OK: {len(data)} commits, {total} changes, "
          f"{100 * share:.1f}% keyword-free messages")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--out",
        default=Path(__file__).resolve().parents[1] / "src/maintminer/data/labeled_commits.csv",
    )
    parser.add_argument("--check-only", action="store_true")
    args = parser.parse_args()
    data = generate()
    check(data)
    if not args.check_only:
        write_labeled_dataset(data, args.out)
        print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
