"""Wilber's Alternation and Funnel lower bounds.

Every fast routine here has a slow counterpart used as a test oracle:

* ``alt_exact`` (interval DP) against ``alt_bruteforce`` (all trees),
* ``funnel_bound`` (backward staircase scan) against ``funnel_bound_oracle``
  (rectangle-emptiness check for every candidate pair).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .mixing import LEFT, RIGHT, mix_value
from .sequences import AccessSequence, Point, PointSet, geometric_view
from .trees import ReferenceTree, TreeNode, all_trees

BRUTEFORCE_MAX_KEYS = 10


def _as_points(P) -> PointSet:
    if isinstance(P, PointSet):
        return P
    if isinstance(P, AccessSequence):
        return geometric_view(P)
    return PointSet(P)


# -- Alternation bound -------------------------------------------------------


def alt_for_tree(P, T: ReferenceTree) -> int:
    """Alternation bound of ``P`` for the fixed reference tree ``T``.

    At each node the times of the points in its left and right subtrees are
    mixed; points on the node's own key take part in neither side.
    """
    P = _as_points(P)
    times: dict[int, list[int]] = {}
    for p in P:
        times.setdefault(p.x, []).append(p.y)
    missing = set(times) - T.keys
    if missing:
        raise ValueError(f"keys {sorted(missing)} are not in the reference tree")

    total = 0
    # post-order: children are finished before their parent
    below: dict[int, list[int]] = {}
    for node in reversed(list(T.nodes())):
        left = below.pop(node.left.key) if node.left else []
        right = below.pop(node.right.key) if node.right else []
        if left and right:
            total += mix_value(left, right)
        merged = left + right + times.get(node.key, [])
        merged.sort()
        below[node.key] = merged
    return total


def _interval_mix_values(seq_idx: np.ndarray, a: int, b: int, width: int) -> np.ndarray:
    """mixValue at every candidate root ``r`` of the key-index interval ``[a, b)``.

    With the accesses restricted to the interval and consecutive repeats merged
    into one, a root ``r`` sees a switch for each adjacent pair strictly
    straddling ``r`` and for each ``u, r, w`` triple whose ends straddle ``r``
    (dropping ``r`` makes ``u`` and ``w`` adjacent).
    """
    sub = seq_idx[(seq_idx >= a) & (seq_idx < b)]
    out = np.zeros(b - a, dtype=np.int64)
    if sub.size < 2:
        return out
    keep = np.empty(sub.size, dtype=bool)
    keep[0] = True
    np.not_equal(sub[1:], sub[:-1], out=keep[1:])
    c = sub[keep] - a
    if c.size < 2:
        return out
    lo = np.minimum(c[:-1], c[1:])
    hi = np.maximum(c[:-1], c[1:])
    diff = np.zeros(width + 1, dtype=np.int64)
    np.add.at(diff, lo + 1, 1)
    np.add.at(diff, hi, -1)
    out += np.cumsum(diff)[: b - a]
    if c.size >= 3:
        u, v, w = c[:-2], c[1:-1], c[2:]
        straddle = (np.minimum(u, w) < v) & (v < np.maximum(u, w))
        np.add.at(out, v[straddle], 1)
    return out


def alt_exact(P) -> tuple[int, ReferenceTree]:
    """Maximum of ``alt_for_tree`` over all trees on ``P.x``, with a maximizing tree.

    Interval DP over the sorted distinct keys: the root splits an interval into
    two independent sub-intervals and contributes the mixValue of their times.
    Ties go to the smallest root key.
    """
    P = _as_points(P)
    keys = sorted(P.xs)
    K = len(keys)
    if K == 0:
        return 0, ReferenceTree(None)
    index = {k: i for i, k in enumerate(keys)}
    seq_idx = np.fromiter((index[p.x] for p in P), dtype=np.int64, count=len(P))

    # best[a, b] is the value of the half-open key-index interval [a, b)
    best = np.zeros((K + 1, K + 1), dtype=np.int64)
    root = np.zeros((K + 1, K + 1), dtype=np.int64)
    for length in range(1, K + 1):
        for a in range(0, K - length + 1):
            b = a + length
            vals = _interval_mix_values(seq_idx, a, b, length)
            vals += best[a, a:b]
            vals += best[a + 1 : b + 1, b]
            r = int(np.argmax(vals))
            best[a, b] = vals[r]
            root[a, b] = a + r

    def build(a, b):
        if a >= b:
            return None
        r = int(root[a, b])
        return TreeNode(keys[r], build(a, r), build(r + 1, b))

    return int(best[0, K]), ReferenceTree(build(0, K))


def alt_bruteforce(P) -> int:
    """Maximum of ``alt_for_tree`` by enumerating every tree (at most 10 keys)."""
    P = _as_points(P)
    keys = sorted(P.xs)
    if len(keys) > BRUTEFORCE_MAX_KEYS:
        raise ValueError(
            f"brute force is limited to {BRUTEFORCE_MAX_KEYS} distinct keys, got {len(keys)}"
        )
    if not keys:
        return 0
    return max(alt_for_tree(P, T) for T in all_trees(keys))


# -- Funnel bound ------------------------------------------------------------


@dataclass(frozen=True)
class Funnel:
    """Left and right funnel of a query point, each sorted by increasing time."""

    left_points: tuple[Point, ...]
    right_points: tuple[Point, ...]

    def sides(self) -> str:
        """Side of every funnel point, by increasing time."""
        tagged = [(q.y, LEFT) for q in self.left_points]
        tagged += [(q.y, RIGHT) for q in self.right_points]
        return "".join(side for _, side in sorted(tagged))

    def value(self) -> int:
        return mix_value({q.y for q in self.left_points}, {q.y for q in self.right_points})


def funnel_of_point(P, p) -> Funnel:
    """Earlier points ``q`` whose closed rectangle with ``p`` holds no other point.

    Scanning backwards in time, a left point joins the funnel iff it is
    strictly closer to ``p.x`` than every left point seen so far (symmetric on
    the right), and an earlier access to ``p.x`` itself blocks everything older.
    """
    P = _as_points(P)
    p = Point(*p)
    pts = P.points
    pos = next((i for i, q in enumerate(pts) if q == p), None)
    if pos is None:
        raise ValueError(f"{p} is not in the point set")
    left: list[Point] = []
    right: list[Point] = []
    left_front = None
    right_front = None
    for q in reversed(pts[:pos]):
        if q.x == p.x:
            break
        if q.x < p.x:
            if left_front is None or q.x > left_front:
                left.append(q)
                left_front = q.x
        elif right_front is None or q.x < right_front:
            right.append(q)
            right_front = q.x
    return Funnel(tuple(reversed(left)), tuple(reversed(right)))


def funnel_values(P) -> list[int]:
    """``f(P, p)`` for every point, in time order."""
    P = _as_points(P)
    xs = [p.x for p in P]
    out = []
    for i, px in enumerate(xs):
        left_front = right_front = None
        last_side = None
        switches = 0
        for j in range(i - 1, -1, -1):
            x = xs[j]
            if x == px:
                break
            if x < px:
                if left_front is not None and x <= left_front:
                    continue
                left_front = x
                side = LEFT
            else:
                if right_front is not None and x >= right_front:
                    continue
                right_front = x
                side = RIGHT
            if last_side is not None and side != last_side:
                switches += 1
            last_side = side
            # integer keys: nothing older can squeeze in on either side
            if left_front == px - 1 and right_front == px + 1:
                break
        out.append(switches)
    return out


def funnel_bound(P) -> int:
    """Sum of ``f(P, p)`` over all points; O(m) backward scan per point."""
    return sum(funnel_values(P))


def funnel_bound_oracle(P) -> int:
    """Funnel bound by checking rectangle emptiness for every candidate pair."""
    P = _as_points(P)
    pts = P.points
    if len(pts) < 2:
        return 0
    X = np.array([p.x for p in pts])
    Y = np.array([p.y for p in pts])
    total = 0
    for i, p in enumerate(pts):
        cand = np.nonzero((Y < p.y) & (X != p.x))[0]
        if cand.size == 0:
            continue
        qx, qy = X[cand], Y[cand]
        lo = np.minimum(qx, p.x)[:, None]
        hi = np.maximum(qx, p.x)[:, None]
        inside = (X[None, :] >= lo) & (X[None, :] <= hi)
        inside &= (Y[None, :] >= qy[:, None]) & (Y[None, :] <= p.y)
        empty = inside.sum(axis=1) == 2
        left = {int(y) for y, x, e in zip(qy, qx, empty) if e and x < p.x}
        right = {int(y) for y, x, e in zip(qy, qx, empty) if e and x > p.x}
        total += mix_value(left, right)
    return total


def funnel_side_string(P, p) -> str:
    return funnel_of_point(P, p).sides()


# -- reports -----------------------------------------------------------------


@dataclass(frozen=True)
class BoundReport:
    alt_value: int
    funnel_value: int
    m: int
    amortized_alt: Fraction
    amortized_funnel: Fraction
    alt_tree: ReferenceTree | None = None


def bound_report(seq: AccessSequence) -> BoundReport:
    if len(seq) == 0:
        raise ValueError("bound_report needs a non-empty sequence")
    P = geometric_view(seq)
    alt, tree = alt_exact(P)
    funnel = funnel_bound(P)
    m = len(seq)
    return BoundReport(alt, funnel, m, Fraction(alt, m), Fraction(funnel, m), tree)


__all__ = [
    "BoundReport",
    "Funnel",
    "alt_bruteforce",
    "alt_exact",
    "alt_for_tree",
    "bound_report",
    "funnel_bound",
    "funnel_bound_oracle",
    "funnel_of_point",
    "funnel_values",
]
