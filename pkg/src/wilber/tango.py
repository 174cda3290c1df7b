"""A Tango-style BST whose reference tree is cut into levels of height ``k``.

Preferred paths never cross a level boundary. Each path lives in an
:class:`~wilber.auxtree.AuxiliaryTree` with depths stored relative to its
level subtree. An access walks from the top level down: it searches the path
containing the current level root, and every time the search leaves a path
inside the level, the path is cut below the exit node and joined with the
path hanging off the child toward the key.

The reference tree over ``[n]`` (``n`` a power of two) is the perfect tree on
``1..n-1`` with key ``n`` hung below ``n-1``. ``n`` counts toward the last
level.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, log2

from .auxtree import AuxiliaryTree, Meter, aux_cut_by_depth, aux_join, aux_search
from .bounds import alt_for_tree
from .sequences import AccessSequence, is_power_of_two
from .trees import ReferenceTree, TreeNode

LEFT, RIGHT = "L", "R"


class ConsistencyError(AssertionError):
    """Two independent computations of the same quantity disagree."""


class PerfectReferenceTree:
    def __init__(self, n: int):
        if not is_power_of_two(n) or n < 2:
            raise ValueError(f"n must be a power of two >= 2, got {n}")
        self.n = n
        self.log_n = n.bit_length() - 1

        def build(lo, hi):
            if lo > hi:
                return None
            mid = (lo + hi) // 2
            return TreeNode(mid, build(lo, mid - 1), build(mid + 1, hi))

        root = build(1, n - 1)
        if root is None:
            root = TreeNode(n)
        else:
            # hang n below the rightmost node
            def attach(node):
                if node.right is None:
                    return TreeNode(node.key, node.left, TreeNode(n))
                return TreeNode(node.key, node.left, attach(node.right))

            root = attach(root)
        self.tree = ReferenceTree(root)
        self.root = root.key
        self.depth = self.tree.depth
        self.parent = self.tree.parent
        self.left: dict[int, int | None] = {}
        self.right: dict[int, int | None] = {}
        for node in self.tree.nodes():
            self.left[node.key] = node.left.key if node.left else None
            self.right[node.key] = node.right.key if node.right else None

    def child(self, key: int, side: str) -> int | None:
        return self.left[key] if side == LEFT else self.right[key]


@dataclass
class AccessStats:
    key: int
    level_alternations: list[int]
    node_touches: int = 0
    restructure_ops: int = 0
    initializations: int = 0
    level_roots: list[int] = field(default_factory=list)

    @property
    def alternations(self) -> int:
        return sum(self.level_alternations)


@dataclass
class CostReport:
    n: int
    k: int
    m: int
    per_access: list[AccessStats]
    alt_tree: int
    total_alternations: int
    total_touches: int
    total_restructure_ops: int
    budget: float
    measured_constant: float
    max_access_constant: float

    @property
    def amortized_touches(self) -> Fraction:
        return Fraction(self.total_touches, self.m) if self.m else Fraction(0)


def cost_budget(alt: int, m: int, n: int, k: int) -> float:
    """``(Alt_T(X) + m log2(n) / k) * (log2(k) + 1)``."""
    return (alt + m * log2(n) / k) * (log2(k) + 1)


class TangoTreeK:
    def __init__(self, n: int, k: int):
        self.ref = PerfectReferenceTree(n)
        if not 1 <= k <= self.ref.log_n:
            raise ValueError(f"k must lie in [1, {self.ref.log_n}], got {k}")
        self.n = n
        self.k = k
        self.num_levels = ceil(self.ref.log_n / k)
        self.pref: dict[int, str | None] = {key: None for key in range(1, n + 1)}
        # every node starts as its own one-node path
        self.aux_of_top: dict[int, AuxiliaryTree] = {
            key: AuxiliaryTree.from_path([(key, self.rel_depth(key))]) for key in range(1, n + 1)
        }

    @property
    def level_heights(self) -> list[int]:
        """Nominal height of each level; key ``n`` sits one below the last one."""
        heights = [self.k] * (self.num_levels - 1)
        heights.append(self.ref.log_n - self.k * (self.num_levels - 1))
        return heights

    def level(self, key: int) -> int:
        return min(ceil(self.ref.depth[key] / self.k), self.num_levels)

    def rel_depth(self, key: int) -> int:
        return self.ref.depth[key] - (self.level(key) - 1) * self.k

    def level_root(self, key: int) -> int:
        """Root of the level subtree containing ``key``."""
        lvl = self.level(key)
        while True:
            p = self.ref.parent[key]
            if p is None or self.level(p) != lvl:
                return key
            key = p

    def access(self, x: int) -> AccessStats:
        if not 1 <= x <= self.n:
            raise ValueError(f"key {x} outside [1, {self.n}]")
        stats = AccessStats(x, [0] * self.num_levels)
        meter = Meter()
        top = self.ref.root
        stats.level_roots.append(top)
        while True:
            aux = self.aux_of_top[top]
            (e, e_depth), _ = aux_search(aux, x, meter)
            if e == x:
                break
            side = LEFT if x < e else RIGHT
            c = self.ref.child(e, side)
            old = self.pref[e]
            if old == side:
                # the search left the path only because c starts the next level
                top = c
                stats.level_roots.append(top)
                continue
            if old is None:
                stats.initializations += 1
            else:
                stats.level_alternations[self.level(e) - 1] += 1
            self.pref[e] = side
            if self.level(c) != self.level(e):
                top = c
                stats.level_roots.append(top)
                continue
            upper, lower = aux_cut_by_depth(aux, e_depth, meter)
            if lower:
                self.aux_of_top[self.ref.child(e, old)] = lower
            joined = aux_join(upper, self.aux_of_top.pop(c), meter)
            self.aux_of_top[top] = joined
            stats.restructure_ops += 2
        stats.node_touches = meter.touches
        return stats

    def run(self, seq: AccessSequence) -> CostReport:
        """Serve ``seq`` and cross-check the alternation count against ``alt_for_tree``."""
        if seq.universe_size > self.n:
            raise ValueError(f"sequence universe {seq.universe_size} exceeds n={self.n}")
        per_access = [self.access(x) for x in seq]
        total_a = sum(s.alternations for s in per_access)
        alt = alt_for_tree(seq, self.ref.tree)
        if total_a != alt:
            raise ConsistencyError(
                f"alternations counted during accesses ({total_a}) != Alt_T(X) ({alt})"
            )
        m = len(seq)
        touches = sum(s.node_touches for s in per_access)
        budget = cost_budget(alt, m, self.n, self.k)
        per_level = ceil(self.ref.log_n / self.k)
        scale = log2(self.k) + 1
        max_access = max(
            (s.node_touches / ((s.alternations + per_level) * scale) for s in per_access),
            default=0.0,
        )
        return CostReport(
            n=self.n,
            k=self.k,
            m=m,
            per_access=per_access,
            alt_tree=alt,
            total_alternations=total_a,
            total_touches=touches,
            total_restructure_ops=sum(s.restructure_ops for s in per_access),
            budget=budget,
            measured_constant=touches / budget if budget else 0.0,
            max_access_constant=max_access,
        )

    # -- inspection --------------------------------------------------------

    def preferred_paths(self) -> dict[int, list[tuple[int, int]]]:
        """Paths recomputed from the preferred children, keyed by their top node."""
        paths = {}
        for key in range(1, self.n + 1):
            p = self.ref.parent[key]
            is_top = (
                p is None
                or self.level(p) != self.level(key)
                or self.pref[p] is None
                or self.ref.child(p, self.pref[p]) != key
            )
            if not is_top:
                continue
            path = []
            node = key
            while node is not None and self.level(node) == self.level(key):
                path.append((node, self.rel_depth(node)))
                side = self.pref[node]
                node = self.ref.child(node, side) if side else None
            paths[key] = path
        return paths

    def audit(self) -> None:
        """Check that the auxiliary trees hold exactly the preferred-path partition."""
        paths = self.preferred_paths()
        if set(paths) != set(self.aux_of_top):
            raise ConsistencyError(
                f"path tops {sorted(paths)} != auxiliary tree tops {sorted(self.aux_of_top)}"
            )
        covered = []
        for top, path in paths.items():
            aux = self.aux_of_top[top]
            aux.check()
            if aux.path() != path:
                raise ConsistencyError(f"path at {top}: {path} stored as {aux.path()}")
            if aux.top() != path[0]:
                raise ConsistencyError(f"augmented top of path {top} is {aux.top()}")
            covered.extend(k for k, _ in path)
        if sorted(covered) != list(range(1, self.n + 1)):
            raise ConsistencyError("preferred paths do not partition the reference tree")


def tango_run(seq: AccessSequence, k: int, n: int | None = None) -> CostReport:
    n = n if n is not None else seq.universe_size
    return TangoTreeK(n, k).run(seq)
