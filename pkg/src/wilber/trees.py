"""Static binary search trees used as reference trees.

Tree file format::

    count
    key left_line right_line     <- node 1, the root
    ...

``left_line``/``right_line`` are 1-based indices into the node list, 0 when
the child is absent.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterator, Sequence


class TreeFormatError(ValueError):
    pass


@dataclass(frozen=True)
class TreeNode:
    key: int
    left: TreeNode | None = None
    right: TreeNode | None = None


@dataclass(frozen=True, eq=False)
class ReferenceTree:
    """An immutable binary search tree. ``root`` is ``None`` for the empty tree."""

    root: TreeNode | None = None

    def __post_init__(self):
        keys = self.in_order()
        if any(a >= b for a, b in zip(keys, keys[1:])):
            raise ValueError("search property violated")

    def __eq__(self, other) -> bool:
        if not isinstance(other, ReferenceTree):
            return NotImplemented
        return self.shape() == other.shape()

    def __hash__(self) -> int:
        return hash(self.shape())

    def __len__(self) -> int:
        return len(self.in_order())

    def __repr__(self) -> str:
        return f"ReferenceTree({self.shape()!r})"

    def shape(self):
        """Nested ``(key, left, right)`` tuples; ``None`` for empty."""

        def rec(node):
            if node is None:
                return None
            return (node.key, rec(node.left), rec(node.right))

        return rec(self.root)

    def nodes(self) -> Iterator[TreeNode]:
        """Pre-order traversal."""
        stack = [self.root] if self.root else []
        while stack:
            node = stack.pop()
            yield node
            if node.right:
                stack.append(node.right)
            if node.left:
                stack.append(node.left)

    def in_order(self) -> list[int]:
        out: list[int] = []
        stack: list[TreeNode] = []
        node = self.root
        while stack or node:
            while node:
                stack.append(node)
                node = node.left
            node = stack.pop()
            out.append(node.key)
            node = node.right
        return out

    @cached_property
    def keys(self) -> frozenset[int]:
        return frozenset(self.in_order())

    @cached_property
    def parent(self) -> dict[int, int | None]:
        out: dict[int, int | None] = {}
        if self.root:
            out[self.root.key] = None
        for node in self.nodes():
            for child in (node.left, node.right):
                if child:
                    out[child.key] = node.key
        return out

    @cached_property
    def depth(self) -> dict[int, int]:
        """Depth of each key, root at depth 1."""
        out: dict[int, int] = {}
        for node in self.nodes():
            p = self.parent[node.key]
            out[node.key] = 1 if p is None else out[p] + 1
        return out

    @cached_property
    def _by_key(self) -> dict[int, TreeNode]:
        return {node.key: node for node in self.nodes()}

    def node(self, key: int) -> TreeNode:
        return self._by_key[key]

    def subtree(self, key: int) -> ReferenceTree:
        return ReferenceTree(self._by_key[key])

    def ancestors(self, key: int) -> list[int]:
        """Strict ancestors of ``key``, nearest first."""
        out = []
        p = self.parent[key]
        while p is not None:
            out.append(p)
            p = self.parent[p]
        return out

    def is_descendant(self, x: int, b: int) -> bool:
        """``x`` lies in the subtree of ``b`` (``x == b`` counts)."""
        while x is not None:
            if x == b:
                return True
            x = self.parent[x]
        return False

    @cached_property
    def subtree_range(self) -> dict[int, tuple[int, int]]:
        """Smallest and largest key of each node's subtree."""
        out: dict[int, tuple[int, int]] = {}
        for node in reversed(list(self.nodes())):
            lo = out[node.left.key][0] if node.left else node.key
            hi = out[node.right.key][1] if node.right else node.key
            out[node.key] = (lo, hi)
        return out

    def search_path(self, key: int) -> list[int]:
        """Keys visited when searching for ``key`` from the root."""
        path = []
        node = self.root
        while node:
            path.append(node.key)
            if key == node.key:
                return path
            node = node.left if key < node.key else node.right
        raise KeyError(key)

    # -- constructors --------------------------------------------------------

    @classmethod
    def balanced(cls, keys: Sequence[int]) -> ReferenceTree:
        """Midpoint-split tree over ``keys``; the root is the upper median."""
        ks = sorted(set(keys))

        def build(lo, hi):
            if lo > hi:
                return None
            mid = (lo + hi + 1) // 2
            return TreeNode(ks[mid], build(lo, mid - 1), build(mid + 1, hi))

        return cls(build(0, len(ks) - 1))

    @classmethod
    def random(cls, keys: Sequence[int], rng: random.Random) -> ReferenceTree:
        """A random tree: each subtree's root is chosen uniformly from its keys."""
        ks = sorted(set(keys))

        def build(lo, hi):
            if lo > hi:
                return None
            r = rng.randint(lo, hi)
            return TreeNode(ks[r], build(lo, r - 1), build(r + 1, hi))

        return cls(build(0, len(ks) - 1))

    @classmethod
    def chain(cls, keys: Sequence[int]) -> ReferenceTree:
        """Right-leaning path: each key is the right child of the previous one."""
        node = None
        for k in sorted(set(keys), reverse=True):
            node = TreeNode(k, None, node)
        return cls(node)

    @classmethod
    def from_shape(cls, shape) -> ReferenceTree:
        def build(s):
            if s is None:
                return None
            key, left, right = s
            return TreeNode(key, build(left), build(right))

        return cls(build(shape))


def all_trees(keys: Sequence[int]) -> Iterator[ReferenceTree]:
    """Every binary search tree over ``keys`` (Catalan-many)."""
    ks = sorted(set(keys))
    memo: dict[tuple[int, int], list] = {}

    def build(lo, hi):
        if lo > hi:
            return [None]
        if (lo, hi) not in memo:
            out = []
            for r in range(lo, hi + 1):
                for left in build(lo, r - 1):
                    for right in build(r + 1, hi):
                        out.append(TreeNode(ks[r], left, right))
            memo[lo, hi] = out
        return memo[lo, hi]

    for root in build(0, len(ks) - 1):
        yield ReferenceTree(root)


def format_tree(tree: ReferenceTree) -> str:
    nodes = list(tree.nodes())
    index = {node.key: i for i, node in enumerate(nodes, start=1)}
    lines = [str(len(nodes))]
    for node in nodes:
        left = index[node.left.key] if node.left else 0
        right = index[node.right.key] if node.right else 0
        lines.append(f"{node.key} {left} {right}")
    return "\n".join(lines) + "\n"


def parse_tree(text: str) -> ReferenceTree:
    lines = [ln for ln in text.splitlines()]
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise TreeFormatError("line 1: missing node count")
    try:
        count = int(lines[0].strip())
    except ValueError:
        raise TreeFormatError(f"line 1: not an integer: {lines[0]!r}") from None
    if len(lines) - 1 != count:
        raise TreeFormatError(f"header declares {count} nodes, found {len(lines) - 1}")
    if count == 0:
        return ReferenceTree(None)
    rows = []
    for lineno, raw in enumerate(lines[1:], start=2):
        parts = raw.split()
        if len(parts) != 3:
            raise TreeFormatError(f"line {lineno}: expected 'key left right', got {raw!r}")
        try:
            key, left, right = (int(p) for p in parts)
        except ValueError:
            raise TreeFormatError(f"line {lineno}: non-integer field in {raw!r}") from None
        for child in (left, right):
            if not 0 <= child <= count:
                raise TreeFormatError(f"line {lineno}: child index {child} out of range")
        rows.append((key, left, right))

    seen: set[int] = set()

    def build(i, lo, hi):
        if i == 0:
            return None
        if i in seen:
            raise TreeFormatError(f"node on line {i + 1} is referenced twice")
        seen.add(i)
        key, left, right = rows[i - 1]
        if not lo < key < hi:
            raise TreeFormatError(
                f"line {i + 1}: key {key} violates the search property"
            )
        return TreeNode(key, build(left, lo, key), build(right, key, hi))

    root = build(1, float("-inf"), float("inf"))
    if len(seen) != count:
        raise TreeFormatError("some nodes are unreachable from the root")
    return ReferenceTree(root)


def read_tree(path: str | Path) -> ReferenceTree:
    return parse_tree(Path(path).read_text())


def write_tree(tree: ReferenceTree, path: str | Path) -> None:
    Path(path).write_text(format_tree(tree))
