import random

import pytest
from hypothesis import given, strategies as st

from wilber.trees import (
    ReferenceTree,
    TreeFormatError,
    TreeNode,
    all_trees,
    format_tree,
    parse_tree,
)

CATALAN = [1, 1, 2, 5, 14, 42, 132, 429]


@pytest.mark.parametrize("k", range(8))
def test_all_trees_counts(k):
    trees = list(all_trees(range(1, k + 1)))
    assert len(trees) == CATALAN[k]
    assert len(set(trees)) == CATALAN[k]
    for T in trees:
        assert T.in_order() == list(range(1, k + 1))


def test_search_property_enforced():
    with pytest.raises(ValueError):
        ReferenceTree(TreeNode(2, TreeNode(3), None))


def test_balanced_and_chain():
    T = ReferenceTree.balanced(range(1, 8))
    assert T.root.key == 4
    assert max(T.depth.values()) == 3
    C = ReferenceTree.chain([1, 2, 3])
    assert C.shape() == (1, None, (2, None, (3, None, None)))


def test_ancestry_helpers():
    T = ReferenceTree.balanced(range(1, 8))
    assert T.ancestors(1) == [2, 4]
    assert T.is_descendant(3, 2) and T.is_descendant(2, 2)
    assert not T.is_descendant(5, 2)
    assert T.search_path(5) == [4, 6, 5]
    assert T.subtree_range[6] == (5, 7)
    assert T.depth[4] == 1


@given(st.integers(0, 20), st.integers(0, 10**6))
def test_format_round_trip(k, seed):
    T = ReferenceTree.random(range(1, k + 1), random.Random(seed))
    assert parse_tree(format_tree(T)) == T


@pytest.mark.parametrize(
    "text",
    [
        "",
        "2\n1 2 0\n",
        "2\n1 2 0\n2 0 0\n",  # 2 as a left child of 1
        "3\n2 2 2\n1 0 0\n3 0 0\n",  # node referenced twice
        "2\n1 0 0\n2 0 0\n",  # node 2 unreachable
        "1\n1 5 0\n",
        "1\na 0 0\n",
    ],
)
def test_parse_tree_rejects(text):
    with pytest.raises(TreeFormatError):
        parse_tree(text)
