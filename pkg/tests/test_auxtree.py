import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from wilber.auxtree import (
    AuxiliaryTree,
    Meter,
    aux_cut_by_depth,
    aux_join,
    aux_search,
)
from wilber.trees import ReferenceTree


def random_path(rng, n_keys, length):
    """A root-to-node path in a random tree over 1..n_keys, as (key, depth) pairs."""
    T = ReferenceTree.random(range(1, n_keys + 1), rng)
    target = rng.randint(1, n_keys)
    path = T.search_path(target)[:length]
    return T, [(k, d) for d, k in enumerate(path, start=1)]


def narrowing_path(rng, length):
    """A path of the given length: each key lies on a random side of the previous one."""
    lo, hi = 0, 1 << (2 * length + 2)
    path = []
    for d in range(1, length + 1):
        key = rng.randint(lo + 1, hi - 1)
        path.append((key, d))
        if rng.random() < 0.5:
            hi = key
        else:
            lo = key
    return path


def path_search_oracle(T, path, x):
    """Deepest path node that is an ancestor-or-self of x, by scanning the path."""
    best = None
    for key, depth in path:
        if T.is_descendant(x, key):
            best = (key, depth)
    return best


paths = st.tuples(st.integers(0, 10**9), st.integers(1, 64)).map(
    lambda a: random_path(random.Random(a[0]), a[1], a[1])
)


def test_single_node_search():
    a = AuxiliaryTree.from_path([(5, 1)])
    assert aux_search(a, 5) == ((5, 1), 1)
    assert aux_search(a, 2)[0] == (5, 1)
    with pytest.raises(ValueError):
        aux_search(AuxiliaryTree(), 1)


@settings(max_examples=100, deadline=None)
@given(paths)
def test_search_matches_scan(tp):
    T, path = tp
    a = AuxiliaryTree.from_path(path)
    a.check()
    for x in T.keys:
        (key, depth), touches = aux_search(a, x)
        if any(k == x for k, _ in path):
            assert key == x
        assert (key, depth) == path_search_oracle(T, path, x)
        assert touches <= a.root.height


@settings(max_examples=100, deadline=None)
@given(paths, st.data())
def test_cut_and_join_round_trip(tp, data):
    _, path = tp
    d = data.draw(st.integers(1, len(path)))
    a = AuxiliaryTree.from_path(path)
    top, bottom = aux_cut_by_depth(a, d)
    top.check()
    bottom.check()
    assert top.path() == path[:d]
    assert bottom.path() == path[d:]
    if bottom:
        assert (bottom.min_depth, bottom.max_depth) == (d + 1, len(path))
        assert bottom.top() == path[d]
    assert (top.min_depth, top.max_depth) == (1, d)
    joined = aux_join(top, bottom)
    joined.check()
    assert joined.path() == path
    assert not top and not bottom


def test_cut_at_full_length_leaves_bottom_empty():
    _, path = random_path(random.Random(0), 20, 20)
    top, bottom = aux_cut_by_depth(AuxiliaryTree.from_path(path), len(path))
    assert not bottom and top.path() == path


def test_cut_depth_out_of_range():
    a = AuxiliaryTree.from_path([(2, 1), (1, 2)])
    with pytest.raises(ValueError):
        aux_cut_by_depth(a, 0)
    with pytest.raises(ValueError):
        aux_cut_by_depth(a, 3)


def test_join_with_empty_bottom():
    a = AuxiliaryTree.from_path([(2, 1), (1, 2)])
    out = aux_join(a, AuxiliaryTree())
    assert out.path() == [(2, 1), (1, 2)]


def test_join_rejects_incompatible():
    top = AuxiliaryTree.from_path([(4, 1), (2, 2)])
    with pytest.raises(ValueError, match="depth"):
        aux_join(top, AuxiliaryTree.from_path([(1, 4)]))
    assert top.path() == [(4, 1), (2, 2)]
    with pytest.raises(ValueError, match="interleave"):
        aux_join(top, AuxiliaryTree.from_path([(3, 3), (5, 4)]))
    top.check()
    assert top.path() == [(4, 1), (2, 2)]


def test_operation_cost_is_logarithmic():
    worst = 0.0
    rng = random.Random(11)
    for _ in range(200):
        p = rng.randint(1, 256)
        path = narrowing_path(rng, p)
        d = rng.randint(1, p)
        meter = Meter()
        top, bottom = aux_cut_by_depth(AuxiliaryTree.from_path(path), d, meter)
        aux_join(top, bottom, meter)
        worst = max(worst, meter.touches / (math.log2(p) + 1))
    assert worst <= 16
