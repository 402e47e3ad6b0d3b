"""Compare two revisions of a Java file and emit fine-grained change types.

Declaration structure is diffed by matching types on their nesting path,
fields on their name, and methods on name plus parameter shape.  Method
bodies are diffed ChangeDistiller-style: leaf statements match when their
normalized text reaches bigram similarity 0.6, inner nodes when the
matched share of their descendant leaves reaches 0.6; matched-but-changed
leaves become updates, everything unmatched becomes inserts/deletes.

Member bodies of newly added methods and classes are not double-counted:
only the enclosing ADDITIONAL_FUNCTIONALITY / ADDITIONAL_CLASS is
emitted.  A field-initializer edit counts as STATEMENT_UPDATE (the
closest statement-level reading; the taxonomy has no initializer kind).
Import and package clauses are outside the taxonomy and are ignored.
"""

from __future__ import annotations

import bisect
import logging
from collections import Counter
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .changetypes import ChangeType as CT
from .errors import DistillError
from .harvest import CommitRecord
from .javaparse import (
    CompilationUnit,
    FieldDecl,
    JavaParseError,
    MethodDecl,
    Stmt,
    TypeDecl,
    parse_java,
)

log = logging.getLogger(__name__)

SIMILARITY_THRESHOLD = 0.6


@dataclass(frozen=True)
class ChangeRecord:
    commit_id: str
    change_type: CT
    path: str

    def legacy_line(self) -> str:
        return f"{self.commit_id}#{self.change_type.name}#{self.path}"


def bigram_similarity(a: str, b: str) -> float:
    """Dice coefficient over character bigrams."""
    if a == b:
        return 1.0
    ga = {a[i : i + 2] for i in range(len(a) - 1)}
    gb = {b[i : i + 2] for i in range(len(b) - 1)}
    if not ga or not gb:
        return 0.0
    return 2.0 * len(ga & gb) / (len(ga) + len(gb))


# -- statement tree diff -------------------------------------------------

class _Node:
    __slots__ = ("kind", "text", "condition", "parent", "children", "order", "match")

    def __init__(self, stmt: Stmt, parent: Optional["_Node"], order: int):
        self.kind = stmt.kind
        self.text = stmt.text
        self.condition = stmt.condition
        self.parent = parent
        self.children: List[_Node] = []
        self.order = order
        self.match: Optional[_Node] = None

    @property
    def is_composite(self) -> bool:
        return bool(self.children) or self.kind in {
            "if", "else", "while", "do", "for", "switch", "try", "catch",
            "finally", "block", "sync",
        }


def _build_tree(body: Optional[List[Stmt]]) -> Tuple[_Node, List[_Node]]:
    root = _Node(Stmt("block", "<body>"), None, 0)
    flat: List[_Node] = []
    counter = [0]

    def walk(stmts: List[Stmt], parent: _Node):
        for s in stmts:
            counter[0] += 1
            node = _Node(s, parent, counter[0])
            parent.children.append(node)
            flat.append(node)
            if s.children:
                walk(s.children, node)

    walk(body or [], root)
    return root, flat


def _leaves(node: _Node) -> List[_Node]:
    out = []

    def walk(n: _Node):
        for c in n.children:
            if c.is_composite:
                walk(c)
            else:
                out.append(c)

    walk(node)
    return out


def _match_statements(before: List[_Node], after: List[_Node]) -> None:
    """Greedy deterministic matching; sets .match on both sides."""
    before_leaves = [n for n in before if not n.is_composite]
    after_leaves = [n for n in after if not n.is_composite]

    # exact pass: identical kind+text, paired in document order
    pool: Dict[Tuple[str, str], List[_Node]] = {}
    for b in after_leaves:
        pool.setdefault((b.kind, b.text), []).append(b)
    for a in before_leaves:
        bucket = pool.get((a.kind, a.text))
        if bucket:
            b = bucket.pop(0)
            a.match, b.match = b, a

    # similarity pass
    for a in before_leaves:
        if a.match is not None:
            continue
        best, best_sim = None, SIMILARITY_THRESHOLD
        for b in after_leaves:
            if b.match is not None or b.kind != a.kind:
                continue
            sim = bigram_similarity(a.text, b.text)
            if sim > best_sim or (sim == best_sim and best is None and sim > 0):
                if sim >= SIMILARITY_THRESHOLD:
                    best, best_sim = b, sim
        if best is not None:
            a.match, best.match = best, a

    # composites, innermost first
    before_comps = [n for n in before if n.is_composite]
    after_comps = [n for n in after if n.is_composite]
    for a in sorted(before_comps, key=lambda n: -n.order):
        if a.match is not None:
            continue
        best, best_key = None, (-1, -1.0)
        for b in after_comps:
            if b.match is not None or b.kind != a.kind:
                continue
            score = _composite_similarity(a, b)
            if score < SIMILARITY_THRESHOLD:
                continue
            parent_aligned = int(a.parent is not None and a.parent.match is b.parent)
            key = (parent_aligned, score)
            if key > best_key or (key == best_key and best is not None and b.order < best.order):
                best, best_key = b, key
        if best is not None:
            a.match, best.match = best, a


def _composite_similarity(a: _Node, b: _Node) -> float:
    """Similarity of two inner nodes: matched-descendant share, blended
    with condition similarity for conditioned statement kinds."""
    a_desc = _leaves(a)
    b_desc = set(_leaves(b))
    total = len(a_desc) + len(b_desc)
    common = sum(1 for x in a_desc if x.match is not None and x.match in b_desc)
    child_sim = 2.0 * common / total if total else 1.0
    if a.condition is not None and b.condition is not None:
        cond_sim = bigram_similarity(a.condition, b.condition)
        return 0.6 * child_sim + 0.4 * cond_sim
    return child_sim


def _longest_increasing(indices: List[int]) -> set:
    """Indices (by position) that belong to one LIS; others moved."""
    if not indices:
        return set()
    prev = [-1] * len(indices)
    tail_pos: List[int] = []
    for i, v in enumerate(indices):
        j = bisect.bisect_left([indices[p] for p in tail_pos], v)
        if j == len(tail_pos):
            tail_pos.append(i)
        else:
            tail_pos[j] = i
        prev[i] = tail_pos[j - 1] if j > 0 else -1
    keep = set()
    i = tail_pos[-1]
    while i >= 0:
        keep.add(i)
        i = prev[i]
    return keep


def _diff_bodies(before: Optional[List[Stmt]], after: Optional[List[Stmt]], out: Counter) -> None:
    root_a, flat_a = _build_tree(before)
    root_b, flat_b = _build_tree(after)
    root_a.match, root_b.match = root_b, root_a
    _match_statements(flat_a, flat_b)

    for a in flat_a:
        if a.match is None:
            out[CT.ALTERNATIVE_PART_DELETE if a.kind == "else" else CT.STATEMENT_DELETE] += 1
    for b in flat_b:
        if b.match is None:
            out[CT.ALTERNATIVE_PART_INSERT if b.kind == "else" else CT.STATEMENT_INSERT] += 1

    for a in flat_a:
        b = a.match
        if b is None:
            continue
        if a.is_composite or b.is_composite:
            if (a.condition or "") != (b.condition or ""):
                out[CT.CONDITION_EXPRESSION_CHANGE] += 1
        elif a.text != b.text:
            out[CT.STATEMENT_UPDATE] += 1
        parent_match = a.parent.match if a.parent is not None else None
        if parent_match is not b.parent:
            out[CT.STATEMENT_PARENT_CHANGE] += 1

    # ordering: matched children that left the longest stable subsequence
    for a in [root_a, *flat_a]:
        if a.match is None or not a.children:
            continue
        pairs = [
            (child, child.match)
            for child in a.children
            if child.match is not None and child.match.parent is a.match
        ]
        if len(pairs) < 2:
            continue
        positions = [a.match.children.index(m) for _, m in pairs]
        keep = _longest_increasing(positions)
        out[CT.STATEMENT_ORDERING_CHANGE] += len(positions) - len(keep)


# -- declaration-level diff ----------------------------------------------

_ACCESS_RANK = {"private": 0, "protected": 2, "public": 3}


def _access(modifiers: frozenset) -> int:
    for word, rank in _ACCESS_RANK.items():
        if word in modifiers:
            return rank
    return 1  # package-private


def _diff_doc(before: Optional[str], after: Optional[str], out: Counter) -> None:
    if before is None and after is not None:
        out[CT.DOC_INSERT] += 1
    elif before is not None and after is None:
        out[CT.DOC_DELETE] += 1
    elif before is not None and after is not None and before != after:
        out[CT.DOC_UPDATE] += 1


def _diff_accessibility(before: frozenset, after: frozenset, out: Counter) -> None:
    ra, rb = _access(before), _access(after)
    if rb > ra:
        out[CT.INCREASING_ACCESSIBILITY_CHANGE] += 1
    elif rb < ra:
        out[CT.DECREASING_ACCESSIBILITY_CHANGE] += 1


def _diff_final(before: frozenset, after: frozenset, adding: CT, removing: CT, out: Counter) -> None:
    had, has = "final" in before, "final" in after
    if had and not has:
        out[adding] += 1
    elif has and not had:
        out[removing] += 1


def _body_text(m: MethodDecl) -> str:
    _, flat = _build_tree(m.body)
    return "\n".join(n.text for n in flat)


def _diff_params(old: List[Tuple[str, str]], new: List[Tuple[str, str]], out: Counter) -> None:
    if old == new:
        return
    # LCS over exact (type, name) pairs
    n, m = len(old), len(new)
    lcs = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n - 1, -1, -1):
        for j in range(m - 1, -1, -1):
            if old[i] == new[j]:
                lcs[i][j] = lcs[i + 1][j + 1] + 1
            else:
                lcs[i][j] = max(lcs[i + 1][j], lcs[i][j + 1])
    pairs: List[Tuple[int, int]] = []
    i = j = 0
    while i < n and j < m:
        if old[i] == new[j]:
            pairs.append((i, j))
            i += 1
            j += 1
        elif lcs[i + 1][j] >= lcs[i][j + 1]:
            i += 1
        else:
            j += 1
    rest_old = [i for i in range(n) if i not in {p[0] for p in pairs}]
    rest_new = [j for j in range(m) if j not in {p[1] for p in pairs}]

    # same name: type change (or silent motion when types also equal)
    for i in list(rest_old):
        for j in list(rest_new):
            if old[i][1] == new[j][1]:
                if old[i][0] != new[j][0]:
                    out[CT.PARAMETER_TYPE_CHANGE] += 1
                pairs.append((i, j))
                rest_old.remove(i)
                rest_new.remove(j)
                break
    # same type: renaming
    for i in list(rest_old):
        for j in list(rest_new):
            if old[i][0] == new[j][0]:
                out[CT.PARAMETER_RENAMING] += 1
                pairs.append((i, j))
                rest_old.remove(i)
                rest_new.remove(j)
                break
    out[CT.PARAMETER_DELETE] += len(rest_old)
    out[CT.PARAMETER_INSERT] += len(rest_new)

    order = [j for _, j in sorted(pairs)]
    if any(order[k] > order[k + 1] for k in range(len(order) - 1)):
        out[CT.PARAMETER_ORDERING_CHANGE] += 1


def _diff_return_type(old: Optional[str], new: Optional[str], out: Counter) -> None:
    if old == new or old is None or new is None:
        return
    if old == "void":
        out[CT.RETURN_TYPE_INSERT] += 1
    elif new == "void":
        out[CT.RETURN_TYPE_DELETE] += 1
    else:
        out[CT.RETURN_TYPE_CHANGE] += 1


def _diff_comments(before: List[str], after: List[str], out: Counter) -> None:
    remaining = Counter(after)
    unmatched_before = []
    for c in before:
        if remaining[c] > 0:
            remaining[c] -= 1
        else:
            unmatched_before.append(c)
    unmatched_after = list(remaining.elements())
    for a in list(unmatched_before):
        best, best_sim = None, SIMILARITY_THRESHOLD
        for b in unmatched_after:
            sim = bigram_similarity(a, b)
            if sim >= best_sim and (best is None or sim > best_sim):
                best, best_sim = b, sim
        if best is not None:
            out[CT.COMMENT_UPDATE] += 1
            unmatched_before.remove(a)
            unmatched_after.remove(best)
    out[CT.COMMENT_DELETE] += len(unmatched_before)
    out[CT.COMMENT_INSERT] += len(unmatched_after)


def _diff_methods(before: List[MethodDecl], after: List[MethodDecl], out: Counter) -> None:
    matched: List[Tuple[MethodDecl, MethodDecl]] = []
    rest_old = list(before)
    rest_new = list(after)

    # exact signature
    for a in list(rest_old):
        for b in list(rest_new):
            if a.signature == b.signature:
                matched.append((a, b))
                rest_old.remove(a)
                rest_new.remove(b)
                break
    # same name, changed parameters
    for a in list(rest_old):
        candidates = [b for b in rest_new if b.name == a.name]
        if candidates:
            b = max(
                candidates,
                key=lambda b: bigram_similarity(
                    " ".join(t for t, _ in a.params), " ".join(t for t, _ in b.params)
                ),
            )
            matched.append((a, b))
            rest_old.remove(a)
            rest_new.remove(b)
    # renamed method: same parameter types, similar body
    for a in list(rest_old):
        for b in list(rest_new):
            if tuple(t for t, _ in a.params) == tuple(t for t, _ in b.params) and (
                bigram_similarity(_body_text(a), _body_text(b)) >= SIMILARITY_THRESHOLD
                and (a.body or b.body)
            ):
                out[CT.METHOD_RENAMING] += 1
                matched.append((a, b))
                rest_old.remove(a)
                rest_new.remove(b)
                break

    out[CT.REMOVED_FUNCTIONALITY] += len(rest_old)
    out[CT.ADDITIONAL_FUNCTIONALITY] += len(rest_new)

    for a, b in matched:
        _diff_doc(a.javadoc, b.javadoc, out)
        _diff_accessibility(a.modifiers, b.modifiers, out)
        _diff_final(
            a.modifiers, b.modifiers,
            CT.ADDING_METHOD_OVERRIDABILITY, CT.REMOVING_METHOD_OVERRIDABILITY, out,
        )
        _diff_params(a.params, b.params, out)
        _diff_return_type(a.return_type, b.return_type, out)
        _diff_bodies(a.body, b.body, out)
        _diff_comments(a.comments, b.comments, out)


def _diff_fields(before: List[FieldDecl], after: List[FieldDecl], out: Counter) -> None:
    old_by_name = {f.name: f for f in before}
    new_by_name = {f.name: f for f in after}
    rest_old = [f for f in before if f.name not in new_by_name]
    rest_new = [f for f in after if f.name not in old_by_name]

    # renamed field: identical type and initializer
    for a in list(rest_old):
        for b in list(rest_new):
            if a.type == b.type and a.initializer == b.initializer:
                out[CT.ATTRIBUTE_RENAMING] += 1
                rest_old.remove(a)
                rest_new.remove(b)
                break
    out[CT.REMOVED_OBJECT_STATE] += len(rest_old)
    out[CT.ADDITIONAL_OBJECT_STATE] += len(rest_new)

    for name, a in old_by_name.items():
        b = new_by_name.get(name)
        if b is None:
            continue
        if a.type != b.type:
            out[CT.ATTRIBUTE_TYPE_CHANGE] += 1
        _diff_doc(a.javadoc, b.javadoc, out)
        _diff_accessibility(a.modifiers, b.modifiers, out)
        _diff_final(
            a.modifiers, b.modifiers,
            CT.ADDING_ATTRIBUTE_MODIFIABILITY, CT.REMOVING_ATTRIBUTE_MODIFIABILITY, out,
        )
        if a.initializer != b.initializer:
            out[CT.STATEMENT_UPDATE] += 1


def _diff_type_header(a: TypeDecl, b: TypeDecl, out: Counter) -> None:
    _diff_doc(a.javadoc, b.javadoc, out)
    _diff_accessibility(a.modifiers, b.modifiers, out)
    _diff_final(
        a.modifiers, b.modifiers,
        CT.ADDING_CLASS_DERIVABILITY, CT.REMOVING_CLASS_DERIVABILITY, out,
    )
    sa, sb = a.superclass, b.superclass
    if sa != sb:
        if sa is None:
            out[CT.PARENT_CLASS_INSERT] += 1
        elif sb is None:
            out[CT.PARENT_CLASS_DELETE] += 1
        else:
            out[CT.PARENT_CLASS_CHANGE] += 1
    ia, ib = set(a.parent_interfaces), set(b.parent_interfaces)
    gone, came = ia - ib, ib - ia
    if len(gone) == 1 and len(came) == 1:
        out[CT.PARENT_INTERFACE_CHANGE] += 1
    else:
        out[CT.PARENT_INTERFACE_DELETE] += len(gone)
        out[CT.PARENT_INTERFACE_INSERT] += len(came)


def _diff_units(before: CompilationUnit, after: CompilationUnit, out: Counter) -> None:
    old_types = before.type_map()
    new_types = after.type_map()
    rest_old = [p for p in old_types if p not in new_types]
    rest_new = [p for p in new_types if p not in old_types]

    renamed: List[Tuple[str, str]] = []
    for pa in list(rest_old):
        a = old_types[pa]
        for pb in list(rest_new):
            b = new_types[pb]
            same_members = bigram_similarity(
                " ".join(sorted(m.name for m in a.methods) + sorted(f.name for f in a.fields)),
                " ".join(sorted(m.name for m in b.methods) + sorted(f.name for f in b.fields)),
            )
            if a.kind == b.kind and same_members >= SIMILARITY_THRESHOLD and (a.methods or a.fields):
                out[CT.CLASS_RENAMING] += 1
                renamed.append((pa, pb))
                rest_old.remove(pa)
                rest_new.remove(pb)
                break

    # removed/added classes count once; their members carry no extra noise
    out[CT.REMOVED_CLASS] += len(rest_old)
    out[CT.ADDITIONAL_CLASS] += len(rest_new)

    matched = [(p, p) for p in old_types if p in new_types] + renamed
    for pa, pb in matched:
        a, b = old_types[pa], new_types[pb]
        _diff_type_header(a, b, out)
        _diff_fields(a.fields, b.fields, out)
        _diff_methods(a.methods, b.methods, out)


# -- public operations ----------------------------------------------------

def distill(before: Optional[str], after: Optional[str], path: Optional[str] = None) -> Counter:
    """Multiset of change types between two revisions of one Java file."""
    if before is None and after is None:
        raise ValueError("at least one side must be present")
    if before == after:
        return Counter()
    sides = []
    failures = 0
    for text in (before, after):
        try:
            sides.append(parse_java(text))
        except JavaParseError as exc:
            log.warning("parse failure%s: %s", f" in {path}" if path else "", exc)
            sides.append(None)
            failures += 1
    if failures == 2:
        raise DistillError("both sides unparseable", path=path)
    if failures == 1:
        return Counter({CT.UNKNOWN: 1})
    out: Counter = Counter()
    _diff_units(sides[0], sides[1], out)
    return Counter({k: v for k, v in out.items() if v > 0})


def distill_commit(commit: CommitRecord) -> List[ChangeRecord]:
    """Concatenated per-pair changes; per-file failures degrade to UNKNOWN."""
    records: List[ChangeRecord] = []
    for pair in commit.file_pairs:
        try:
            changes = distill(pair.before, pair.after, path=pair.path)
        except DistillError:
            log.warning("distill failed for %s at %s", pair.path, commit.commit_id[:12])
            changes = Counter({CT.UNKNOWN: 1})
        for change_type, count in sorted(changes.items(), key=lambda kv: kv[0].name):
            records.extend(
                ChangeRecord(commit.commit_id, change_type, pair.path) for _ in range(count)
            )
    return records


def write_legacy_pound(records: List[ChangeRecord], fh) -> None:
    """The pound-separated record format: <commitId>#<CHANGE_TYPE>#<path>."""
    for r in records:
        fh.write(r.legacy_line() + "\n")
