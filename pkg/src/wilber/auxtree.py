"""Auxiliary trees: one preferred path stored in an AVL tree keyed by key.

Each node also carries its depth on the path (relative to its level subtree)
and the minimum and maximum depth found in its AVL subtree. Search, cut by
depth and join are all built from AVL ``split`` and ``join`` and run in
O(log p + 1) node visits for a path of p nodes.

Every visited AVL node and every rotation is charged to a :class:`Meter`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator


@dataclass
class Meter:
    touches: int = 0

    def add(self, k: int = 1) -> None:
        self.touches += k


class AuxNode:
    __slots__ = ("key", "depth", "left", "right", "height", "min_depth", "max_depth")

    def __init__(self, key: int, depth: int):
        self.key = key
        self.depth = depth
        self.left: AuxNode | None = None
        self.right: AuxNode | None = None
        self.height = 1
        self.min_depth = depth
        self.max_depth = depth

    def __repr__(self) -> str:
        return f"AuxNode(key={self.key}, depth={self.depth})"


def _h(t: AuxNode | None) -> int:
    return t.height if t else 0


def _update(t: AuxNode) -> AuxNode:
    lo = hi = t.depth
    hl = hr = 0
    if t.left:
        lo = min(lo, t.left.min_depth)
        hi = max(hi, t.left.max_depth)
        hl = t.left.height
    if t.right:
        lo = min(lo, t.right.min_depth)
        hi = max(hi, t.right.max_depth)
        hr = t.right.height
    t.min_depth, t.max_depth = lo, hi
    t.height = 1 + max(hl, hr)
    return t


def _rotate_left(t: AuxNode, meter: Meter) -> AuxNode:
    meter.add()
    r = t.right
    t.right = r.left
    r.left = _update(t)
    return _update(r)


def _rotate_right(t: AuxNode, meter: Meter) -> AuxNode:
    meter.add()
    l = t.left
    t.left = l.right
    l.right = _update(t)
    return _update(l)


def _join_right(tl: AuxNode, k: AuxNode, tr: AuxNode | None, meter: Meter) -> AuxNode:
    meter.add()
    l, c = tl.left, tl.right
    if _h(c) <= _h(tr) + 1:
        k.left, k.right = c, tr
        _update(k)
        if k.height <= _h(l) + 1:
            tl.right = k
            return _update(tl)
        tl.right = _rotate_right(k, meter)
        _update(tl)
        return _rotate_left(tl, meter)
    tl.right = _join_right(c, k, tr, meter)
    _update(tl)
    if tl.right.height <= _h(l) + 1:
        return tl
    return _rotate_left(tl, meter)


def _join_left(tl: AuxNode | None, k: AuxNode, tr: AuxNode, meter: Meter) -> AuxNode:
    meter.add()
    c, r = tr.left, tr.right
    if _h(c) <= _h(tl) + 1:
        k.left, k.right = tl, c
        _update(k)
        if k.height <= _h(r) + 1:
            tr.left = k
            return _update(tr)
        tr.left = _rotate_left(k, meter)
        _update(tr)
        return _rotate_right(tr, meter)
    tr.left = _join_left(tl, k, c, meter)
    _update(tr)
    if tr.left.height <= _h(r) + 1:
        return tr
    return _rotate_right(tr, meter)


def join3(tl: AuxNode | None, k: AuxNode, tr: AuxNode | None, meter: Meter) -> AuxNode:
    """Join ``tl < k < tr`` (by key) into one AVL tree."""
    if _h(tl) > _h(tr) + 1:
        return _join_right(tl, k, tr, meter)
    if _h(tr) > _h(tl) + 1:
        return _join_left(tl, k, tr, meter)
    k.left, k.right = tl, tr
    return _update(k)


def split(t: AuxNode | None, key: int, meter: Meter):
    """Split into ``(keys < key, node with key or None, keys > key)``."""
    if t is None:
        return None, None, None
    meter.add()
    left, right = t.left, t.right
    t.left = t.right = None
    if key == t.key:
        return left, _update(t), right
    if key < t.key:
        l, mid, r = split(left, key, meter)
        return l, mid, join3(r, t, right, meter)
    l, mid, r = split(right, key, meter)
    return join3(left, t, l, meter), mid, r


def _split_last(t: AuxNode, meter: Meter):
    meter.add()
    if t.right is None:
        left = t.left
        t.left = None
        return left, _update(t)
    rest, last = _split_last(t.right, meter)
    left = t.left
    t.left = t.right = None
    return join3(left, t, rest, meter), last


def join2(tl: AuxNode | None, tr: AuxNode | None, meter: Meter) -> AuxNode | None:
    """Join two trees with every key of ``tl`` below every key of ``tr``."""
    if tl is None:
        return tr
    if tr is None:
        return tl
    rest, last = _split_last(tl, meter)
    return join3(rest, last, tr, meter)


class AuxiliaryTree:
    """One preferred path, stored as an AVL tree ordered by key."""

    __slots__ = ("root",)

    def __init__(self, root: AuxNode | None = None):
        self.root = root

    @classmethod
    def from_path(cls, items: Iterable[tuple[int, int]]) -> AuxiliaryTree:
        """Build from ``(key, depth)`` pairs."""
        ordered = sorted(items)

        def build(lo, hi):
            if lo > hi:
                return None
            mid = (lo + hi) // 2
            node = AuxNode(*ordered[mid])
            node.left = build(lo, mid - 1)
            node.right = build(mid + 1, hi)
            return _update(node)

        return cls(build(0, len(ordered) - 1))

    def __bool__(self) -> bool:
        return self.root is not None

    def __len__(self) -> int:
        return sum(1 for _ in self._nodes())

    def _nodes(self) -> Iterator[AuxNode]:
        stack: list[AuxNode] = []
        node = self.root
        while stack or node:
            while node:
                stack.append(node)
                node = node.left
            node = stack.pop()
            yield node
            node = node.right

    def items(self) -> list[tuple[int, int]]:
        """``(key, depth)`` pairs in key order."""
        return [(n.key, n.depth) for n in self._nodes()]

    def path(self) -> list[tuple[int, int]]:
        """``(key, depth)`` pairs from the top of the path down."""
        return sorted(self.items(), key=lambda kd: kd[1])

    @property
    def min_depth(self) -> int | None:
        return self.root.min_depth if self.root else None

    @property
    def max_depth(self) -> int | None:
        return self.root.max_depth if self.root else None

    def top(self) -> tuple[int, int] | None:
        """The shallowest path node, found through the min-depth augmentation."""
        node = self.root
        while node:
            if node.depth == node.min_depth:
                return node.key, node.depth
            node = node.left if node.left and node.left.min_depth == node.min_depth else node.right
        return None

    def check(self) -> None:
        """Verify key order, AVL balance and the depth augmentation."""

        def rec(t, lo, hi):
            if t is None:
                return 0, None, None
            if not (lo is None or t.key > lo) or not (hi is None or t.key < hi):
                raise AssertionError(f"key order broken at {t.key}")
            hl, mnl, mxl = rec(t.left, lo, t.key)
            hr, mnr, mxr = rec(t.right, t.key, hi)
            if abs(hl - hr) > 1:
                raise AssertionError(f"unbalanced at {t.key}")
            if t.height != 1 + max(hl, hr):
                raise AssertionError(f"stale height at {t.key}")
            mn = min(d for d in (t.depth, mnl, mnr) if d is not None)
            mx = max(d for d in (t.depth, mxl, mxr) if d is not None)
            if (t.min_depth, t.max_depth) != (mn, mx):
                raise AssertionError(f"stale depth range at {t.key}")
            return t.height, mn, mx

        rec(self.root, None, None)


def aux_search(a: AuxiliaryTree, x: int, meter: Meter | None = None):
    """Deepest path node that is an ancestor-or-self of ``x`` in the reference tree.

    That node is the deeper of the predecessor and successor of ``x`` among
    the path keys, both found on one root-to-leaf descent. Returns
    ``((key, depth), touches)``.
    """
    if a.root is None:
        raise ValueError("search in an empty auxiliary tree")
    touches = 0
    pred = succ = None
    node = a.root
    while node:
        touches += 1
        if node.key == x:
            pred = succ = node
            break
        if x < node.key:
            succ = node
            node = node.left
        else:
            pred = node
            node = node.right
    if meter is not None:
        meter.add(touches)
    if pred is None:
        best = succ
    elif succ is None:
        best = pred
    else:
        best = pred if pred.depth >= succ.depth else succ
    return (best.key, best.depth), touches


def _first_deeper(t: AuxNode, d: int, leftmost: bool, meter: Meter) -> int:
    """Key of the leftmost (or rightmost) node whose depth exceeds ``d``."""
    while True:
        meter.add()
        near, far = (t.left, t.right) if leftmost else (t.right, t.left)
        if near is not None and near.max_depth > d:
            t = near
        elif t.depth > d:
            return t.key
        else:
            t = far


def aux_cut_by_depth(a: AuxiliaryTree, d: int, meter: Meter | None = None):
    """Split into ``(top, bottom)``: nodes of depth ``<= d`` and the rest.

    The deeper part of a path is a contiguous key interval, so it is cut out
    with two splits and the outer parts are joined back together. ``a`` is
    consumed.
    """
    meter = meter if meter is not None else Meter()
    if a.root is None:
        raise ValueError("cut of an empty auxiliary tree")
    if not a.root.min_depth <= d <= a.root.max_depth:
        raise ValueError(f"cut depth {d} outside [{a.root.min_depth}, {a.root.max_depth}]")
    root = a.root
    a.root = None
    if root.max_depth <= d:
        return AuxiliaryTree(root), AuxiliaryTree()
    lo = _first_deeper(root, d, True, meter)
    hi = _first_deeper(root, d, False, meter)
    below, lo_node, rest = split(root, lo, meter)
    middle, hi_node, above = split(rest, hi, meter) if lo != hi else (None, None, rest)
    bottom = join3(None, lo_node, middle, meter)
    if hi_node is not None:
        bottom = join3(bottom, hi_node, None, meter)
    top = join2(below, above, meter)
    return AuxiliaryTree(top), AuxiliaryTree(bottom)


def aux_join(top: AuxiliaryTree, bottom: AuxiliaryTree, meter: Meter | None = None) -> AuxiliaryTree:
    """Concatenate ``bottom`` below the deepest node of ``top``.

    ``bottom`` must occupy a key interval containing no key of ``top`` and
    start one level below ``top``'s deepest node. Both inputs are consumed.
    """
    meter = meter if meter is not None else Meter()
    if bottom.root is None:
        out = AuxiliaryTree(top.root)
        top.root = None
        return out
    if top.root is None:
        out = AuxiliaryTree(bottom.root)
        bottom.root = None
        return out
    if bottom.root.min_depth != top.root.max_depth + 1:
        raise ValueError(
            f"bottom starts at depth {bottom.root.min_depth}, top ends at {top.root.max_depth}"
        )
    b_lo = _extreme(bottom.root, True, meter)
    b_hi = _extreme(bottom.root, False, meter)
    below, mid, above = split(top.root, b_lo, meter)
    if mid is not None or (above is not None and _extreme(above, True, meter) < b_hi):
        # put top back together before rejecting
        top.root = join2(join2(below, mid, meter) if mid else below, above, meter)
        raise ValueError("bottom's keys interleave with top's keys")
    top.root = None
    root = join2(join2(below, bottom.root, meter), above, meter)
    bottom.root = None
    return AuxiliaryTree(root)


def _extreme(t: AuxNode, smallest: bool, meter: Meter) -> int:
    while True:
        meter.add()
        nxt = t.left if smallest else t.right
        if nxt is None:
            return t.key
        t = nxt
