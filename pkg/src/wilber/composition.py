"""Composed sequences, their inverse, tree projections and alternation typing.

Ranges are 1-based inclusive ``(lo, hi)`` pairs that tile ``[1, n]`` in
ascending order; component ``j`` lives on keys ``1..(hi_j - lo_j + 1)`` and is
shifted by ``lo_j - 1`` when composed.
"""

from __future__ import annotations

import bisect
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .bounds import alt_for_tree
from .sequences import AccessSequence, read_sequence
from .trees import ReferenceTree, TreeNode

Range = tuple[int, int]


class UnclassifiedAlternation(AssertionError):
    """An alternation matched none of the four cases."""

    def __init__(self, node, t_x, t_y, x, y):
        super().__init__(f"alternation at node {node} between t={t_x} (key {x}) and t={t_y} (key {y})")
        self.node, self.t_x, self.t_y, self.x, self.y = node, t_x, t_y, x, y


def validate_ranges(ranges: Sequence[Range], n: int | None = None) -> list[Range]:
    """Check that ``ranges`` tile ``[1, n]`` contiguously and ascending."""
    out = [(int(lo), int(hi)) for lo, hi in ranges]
    if not out:
        raise ValueError("need at least one range")
    expected = 1
    for j, (lo, hi) in enumerate(out, start=1):
        if lo > hi:
            raise ValueError(f"range {j} is empty: ({lo}, {hi})")
        if lo < expected:
            raise ValueError(f"range {j} ({lo}, {hi}) overlaps the previous range")
        if lo > expected:
            raise ValueError(f"gap before range {j}: keys {expected}..{lo - 1} are uncovered")
        expected = hi + 1
    if n is not None and expected - 1 != n:
        raise ValueError(f"ranges cover [1, {expected - 1}] but the universe is [1, {n}]")
    return out


def ranges_of_widths(widths: Sequence[int]) -> list[Range]:
    out = []
    lo = 1
    for w in widths:
        out.append((lo, lo + w - 1))
        lo += w
    return out


def range_index(x: int, ranges: Sequence[Range]) -> int:
    """1-based index of the range containing ``x``."""
    los = [lo for lo, _ in ranges]
    j = bisect.bisect_right(los, x) - 1
    if j < 0 or x > ranges[j][1]:
        raise ValueError(f"key {x} is not covered by any range")
    return j + 1


@dataclass(frozen=True)
class CompositionSpec:
    """A template over ``[l]`` interleaving ``l`` components on ascending ranges."""

    template: AccessSequence
    components: tuple[AccessSequence, ...]
    ranges: tuple[Range, ...]

    def __post_init__(self):
        components = tuple(self.components)
        ranges = tuple(validate_ranges(self.ranges))
        object.__setattr__(self, "components", components)
        object.__setattr__(self, "ranges", ranges)
        l = len(components)
        if len(ranges) != l:
            raise ValueError(f"{l} components but {len(ranges)} ranges")
        if self.template.universe_size != l:
            raise ValueError(
                f"template universe is [1, {self.template.universe_size}], expected [1, {l}]"
            )
        for j, (comp, (lo, hi)) in enumerate(zip(components, ranges), start=1):
            if comp.universe_size != hi - lo + 1:
                raise ValueError(
                    f"component {j} has universe size {comp.universe_size}, range width {hi - lo + 1}"
                )
        counts = self.template.counts()
        for j, comp in enumerate(components, start=1):
            if counts.get(j, 0) != len(comp):
                raise ValueError(
                    f"template holds {counts.get(j, 0)} copies of {j}, component {j} has {len(comp)} accesses"
                )

    @property
    def l(self) -> int:
        return len(self.components)

    @property
    def n(self) -> int:
        return self.ranges[-1][1]

    @property
    def m(self) -> int:
        return len(self.template)


def compose(spec: CompositionSpec) -> AccessSequence:
    """Access ``t`` is the next unread access of component ``template[t]``, shifted."""
    cursor = [0] * (spec.l + 1)
    out = []
    for j in spec.template:
        comp = spec.components[j - 1]
        out.append(comp[cursor[j]] + spec.ranges[j - 1][0] - 1)
        cursor[j] += 1
    return AccessSequence(spec.n, tuple(out))


def decompose(seq: AccessSequence, ranges: Sequence[Range]) -> CompositionSpec:
    ranges = validate_ranges(ranges)
    if ranges[-1][1] < seq.universe_size:
        raise ValueError(f"ranges stop at {ranges[-1][1]}, universe is [1, {seq.universe_size}]")
    template = []
    parts: list[list[int]] = [[] for _ in ranges]
    for x in seq:
        j = range_index(x, ranges)
        template.append(j)
        parts[j - 1].append(x - ranges[j - 1][0] + 1)
    components = tuple(
        AccessSequence(hi - lo + 1, tuple(part)) for part, (lo, hi) in zip(parts, ranges)
    )
    return CompositionSpec(AccessSequence(len(ranges), tuple(template)), components, tuple(ranges))


# -- tree projections --------------------------------------------------------


def project_component_tree(T: ReferenceTree, rng: Range) -> ReferenceTree:
    """The tree over the keys of ``rng`` that keeps the ancestry order of ``T``."""
    lo, hi = rng

    def rec(node):
        if node is None:
            return None
        if lo <= node.key <= hi:
            return TreeNode(node.key, rec(node.left), rec(node.right))
        # a contiguous range can only continue on one side
        return rec(node.right if node.key < lo else node.left)

    out = ReferenceTree(rec(T.root))
    missing = set(range(lo, hi + 1)) - out.keys
    if missing:
        raise ValueError(f"range keys {sorted(missing)} are missing from the tree")
    return out


def project_template_tree(T: ReferenceTree, ranges: Sequence[Range]) -> ReferenceTree:
    """The tree over ``[l]`` placing each range index at the LCA of its range."""
    ranges = validate_ranges(ranges)
    seen: set[int] = set()
    span = T.subtree_range

    def rec(node):
        if node is None:
            return None
        j = range_index(node.key, ranges)
        if j not in seen:
            seen.add(j)
            return TreeNode(j, rec(node.left), rec(node.right))
        lo, hi = ranges[j - 1]
        # at most one side can still hold keys outside range j
        if node.left is not None and span[node.left.key][0] < lo:
            return rec(node.left)
        if node.right is not None and span[node.right.key][1] > hi:
            return rec(node.right)
        return None

    return ReferenceTree(rec(T.root))


# -- alternation cases ------------------------------------------------------


@dataclass
class AlternationTypeCounts:
    type1: int = 0
    type2: int = 0
    type3: int = 0
    type4: int = 0
    unclassified: int = 0

    @property
    def total(self) -> int:
        return self.type1 + self.type2 + self.type3 + self.type4 + self.unclassified


@dataclass(frozen=True)
class Alternation:
    """A preferred-child switch at ``node`` between consecutive subtree accesses."""

    node: int
    t_from: int
    t_to: int
    left_key: int
    right_key: int
    direction: str  # "LR" when the earlier access was in the left subtree


def preferred_child_alternations(seq: AccessSequence, T: ReferenceTree) -> list[Alternation]:
    """Every switch counted by ``alt_for_tree(seq, T)``."""
    out = []
    by_node: dict[int, list[tuple[int, int, str]]] = {}
    for t, x in enumerate(seq, start=1):
        path = T.search_path(x)
        for b, nxt in zip(path, path[1:]):
            by_node.setdefault(b, []).append((t, x, "L" if nxt < b else "R"))
    for b, events in by_node.items():
        for (t0, x0, s0), (t1, x1, s1) in zip(events, events[1:]):
            if s0 != s1:
                if s0 == "L":
                    out.append(Alternation(b, t0, t1, x0, x1, "LR"))
                else:
                    out.append(Alternation(b, t0, t1, x1, x0, "RL"))
    return out


class _TemplateTreeInfo:
    def __init__(self, tree: ReferenceTree):
        self.tree = tree

    def closest_ancestor_below(self, j: int) -> int | None:
        """Largest strict ancestor of ``j`` that is smaller than ``j``."""
        cands = [a for a in self.tree.ancestors(j) if a < j]
        return max(cands) if cands else None

    def closest_ancestor_above(self, j: int) -> int | None:
        cands = [a for a in self.tree.ancestors(j) if a > j]
        return min(cands) if cands else None

    def in_left_subtree(self, x: int, b: int) -> bool:
        node = self.tree.node(b).left
        return node is not None and self.tree.is_descendant(x, node.key)

    def in_right_subtree(self, x: int, b: int) -> bool:
        node = self.tree.node(b).right
        return node is not None and self.tree.is_descendant(x, node.key)


def alternation_type(alt: Alternation, T: ReferenceTree, ranges: Sequence[Range],
                     template_tree: ReferenceTree | None = None) -> int | None:
    """Smallest case number (1-4) the alternation satisfies, or ``None``."""
    b, x, y = alt.node, alt.left_key, alt.right_key
    jb, jx, jy = (range_index(k, ranges) for k in (b, x, y))

    if jx == jb == jy:
        return 1

    ancestors_x = T.ancestors(x)
    highest_x = next((a for a in reversed(ancestors_x)
                      if x < a and range_index(a, ranges) == jx), None)
    if highest_x == b:
        return 2
    ancestors_y = T.ancestors(y)
    highest_y = next((a for a in reversed(ancestors_y)
                      if a < y and range_index(a, ranges) == jy), None)
    if highest_y == b:
        return 2

    if template_tree is None:
        template_tree = project_template_tree(T, ranges)
    info = _TemplateTreeInfo(template_tree)
    lo, hi = ranges[jb - 1]
    span_lo, span_hi = T.subtree_range[b]
    if span_lo <= lo and hi <= span_hi:
        if info.closest_ancestor_below(jb) == jx or info.closest_ancestor_above(jb) == jy:
            return 3

    if jx < jb < jy and info.in_left_subtree(jx, jb) and info.in_right_subtree(jy, jb):
        return 4
    return None


def classify_alternations(seq: AccessSequence, T: ReferenceTree, ranges: Sequence[Range],
                          strict: bool = True) -> AlternationTypeCounts:
    """Count the preferred-child alternations of ``seq`` on ``T`` by case.

    With ``strict`` an alternation matching no case raises
    :class:`UnclassifiedAlternation`; otherwise it is tallied as ``unclassified``.
    """
    ranges = validate_ranges(ranges)
    template_tree = project_template_tree(T, ranges)
    counts = AlternationTypeCounts()
    for alt in preferred_child_alternations(seq, T):
        kind = alternation_type(alt, T, ranges, template_tree)
        if kind is None:
            if strict:
                raise UnclassifiedAlternation(alt.node, alt.t_from, alt.t_to,
                                              alt.left_key, alt.right_key)
            counts.unclassified += 1
        else:
            setattr(counts, f"type{kind}", getattr(counts, f"type{kind}") + 1)
    return counts


def per_tree_decomposition(spec: CompositionSpec, T: ReferenceTree) -> dict[str, int]:
    """Both sides of the per-tree subadditivity inequality for one reference tree."""
    seq = compose(spec)
    template_tree = project_template_tree(T, spec.ranges)
    component_sum = 0
    for comp, (lo, hi) in zip(spec.components, spec.ranges):
        Tj = project_component_tree(T, (lo, hi))
        shifted = AccessSequence(spec.n, tuple(x + lo - 1 for x in comp))
        component_sum += alt_for_tree(shifted, Tj)
    return {
        "alt_tree": alt_for_tree(seq, T),
        "template_alt_tree": alt_for_tree(spec.template, template_tree),
        "component_alt_tree_sum": component_sum,
    }


# -- random instances --------------------------------------------------------


def random_composition(rng: random.Random, l: int, width: int, lengths: Sequence[int],
                       distinct_template: bool = False) -> CompositionSpec:
    """Random components of the given lengths on ``l`` ranges of equal ``width``.

    The template is a uniformly shuffled multiset holding ``lengths[j-1]``
    copies of ``j``.
    """
    if len(lengths) != l:
        raise ValueError("need one length per component")
    components = tuple(
        AccessSequence(width, tuple(rng.randint(1, width) for _ in range(mj))) for mj in lengths
    )
    template = [j for j, mj in enumerate(lengths, start=1) for _ in range(mj)]
    rng.shuffle(template)
    return CompositionSpec(AccessSequence(l, tuple(template)), components,
                           tuple(ranges_of_widths([width] * l)))


# -- file format -------------------------------------------------------------


def read_composition(path: str | Path) -> CompositionSpec:
    """Read a composition file; sequence paths are relative to the file's directory.

    Layout: ``l``, then ``l`` lines ``lo hi``, then the template path, then
    ``l`` component paths.
    """
    path = Path(path)
    lines = [ln.strip() for ln in path.read_text().splitlines() if ln.strip()]
    if not lines:
        raise ValueError(f"{path}: empty composition file")
    try:
        l = int(lines[0])
    except ValueError:
        raise ValueError(f"{path}: line 1: expected the component count") from None
    if len(lines) != 1 + l + 1 + l:
        raise ValueError(f"{path}: expected {2 * l + 2} non-empty lines, found {len(lines)}")
    ranges = []
    for i in range(l):
        parts = lines[1 + i].split()
        if len(parts) != 2:
            raise ValueError(f"{path}: line {i + 2}: expected 'lo hi'")
        ranges.append((int(parts[0]), int(parts[1])))
    base = path.parent
    seqs = [read_sequence(base / p) for p in lines[1 + l:]]
    return CompositionSpec(seqs[0], tuple(seqs[1:]), tuple(ranges))


def format_composition(ranges: Sequence[Range], template_path: str,
                       component_paths: Sequence[str]) -> str:
    lines = [str(len(ranges))]
    lines += [f"{lo} {hi}" for lo, hi in ranges]
    lines.append(template_path)
    lines += list(component_paths)
    return "\n".join(lines) + "\n"


__all__ = [
    "Alternation",
    "AlternationTypeCounts",
    "CompositionSpec",
    "UnclassifiedAlternation",
    "alternation_type",
    "classify_alternations",
    "compose",
    "decompose",
    "per_tree_decomposition",
    "preferred_child_alternations",
    "project_component_tree",
    "project_template_tree",
    "random_composition",
    "range_index",
    "ranges_of_widths",
    "read_composition",
    "validate_ranges",
]
