import random

import pytest
from hypothesis import given, settings, strategies as st

from wilber.bounds import alt_for_tree
from wilber.composition import (
    CompositionSpec,
    classify_alternations,
    compose,
    decompose,
    format_composition,
    per_tree_decomposition,
    preferred_child_alternations,
    project_component_tree,
    project_template_tree,
    random_composition,
    range_index,
    ranges_of_widths,
    read_composition,
    validate_ranges,
)
from wilber.sequences import AccessSequence, write_sequence
from wilber.trees import ReferenceTree
from wilber.verify import alt_slack, funnel_margin


def seq(n, *xs):
    return AccessSequence(n, xs)


def random_partition(rng, n):
    cuts = sorted(rng.sample(range(1, n), rng.randint(0, n - 1)))
    bounds = [0] + cuts + [n]
    return [(a + 1, b) for a, b in zip(bounds, bounds[1:])]


# -- compose / decompose -----------------------------------------------------


def test_compose_examples():
    spec = CompositionSpec(seq(2, 1, 2, 1, 2), (seq(2, 1, 2), seq(2, 1, 2)), ((1, 2), (3, 4)))
    assert compose(spec).accesses == (1, 3, 2, 4)
    spec = CompositionSpec(seq(2, 2, 1, 1, 2), (seq(2, 2, 1), seq(2, 1, 2)), ((1, 2), (3, 4)))
    assert compose(spec).accesses == (3, 2, 1, 4)
    comp = seq(5, 3, 1, 5, 5)
    assert compose(CompositionSpec(seq(1, 1, 1, 1, 1), (comp,), ((1, 5),))) == comp


def test_decompose_examples():
    spec = decompose(seq(4, 1, 3, 2, 4), [(1, 2), (3, 4)])
    assert spec.template.accesses == (1, 2, 1, 2)
    assert [c.accesses for c in spec.components] == [(1, 2), (1, 2)]
    s = seq(6, 6, 2, 2, 5)
    spec = decompose(s, [(1, 6)])
    assert spec.template.accesses == (1, 1, 1, 1)
    assert spec.components == (s,)


def test_spec_validation():
    with pytest.raises(ValueError, match="copies"):
        CompositionSpec(seq(2, 1, 1), (seq(2, 1), seq(2, 2)), ((1, 2), (3, 4)))
    with pytest.raises(ValueError, match="overlaps"):
        validate_ranges([(1, 3), (3, 4)])
    with pytest.raises(ValueError, match="gap"):
        validate_ranges([(1, 2), (4, 5)])
    with pytest.raises(ValueError):
        decompose(seq(5, 5), [(1, 2), (3, 4)])


def test_range_index():
    assert range_index(3, [(1, 2), (3, 4)]) == 2
    assert range_index(1, [(1, 9)]) == 1
    with pytest.raises(ValueError):
        range_index(5, [(1, 2), (3, 4)])


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**9))
def test_round_trip_and_placement(s):
    rng = random.Random(s)
    l = rng.randint(1, 5)
    spec = random_composition(rng, l, rng.randint(1, 6), [rng.randint(0, 8) for _ in range(l)])
    X = compose(spec)
    assert decompose(X, spec.ranges) == spec
    assert compose(decompose(X, spec.ranges)) == X
    assert [range_index(x, spec.ranges) for x in X] == list(spec.template)


def test_composition_file(tmp_path):
    spec = random_composition(random.Random(3), 3, 4, [2, 5, 1])
    write_sequence(spec.template, tmp_path / "t.txt")
    for j, c in enumerate(spec.components, start=1):
        write_sequence(c, tmp_path / f"c{j}.txt")
    text = format_composition(spec.ranges, "t.txt", ["c1.txt", "c2.txt", "c3.txt"])
    (tmp_path / "spec.txt").write_text(text)
    assert read_composition(tmp_path / "spec.txt") == spec


# -- tree projections ----------------------------------------------------------


def test_component_projection_examples():
    chain = ReferenceTree.chain([1, 2, 3])
    assert project_component_tree(chain, (1, 3)) == chain
    T = ReferenceTree.balanced(range(1, 8))
    assert project_component_tree(T, (1, 3)).shape() == (2, (1, None, None), (3, None, None))


def test_template_projection_examples():
    rng = random.Random(1)
    T = ReferenceTree.random(range(1, 10), rng)
    singles = [(k, k) for k in range(1, 10)]
    assert project_template_tree(T, singles) == T
    assert project_template_tree(T, [(1, 9)]).shape() == (1, None, None)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**9))
def test_projections_preserve_ancestry(s):
    rng = random.Random(s)
    n = rng.randint(1, 32)
    T = ReferenceTree.random(range(1, n + 1), rng)
    ranges = random_partition(rng, n)
    tilde = project_template_tree(T, ranges)
    assert tilde.in_order() == list(range(1, len(ranges) + 1))
    assert project_template_tree(T, ranges) == tilde
    members = {j: range(lo, hi + 1) for j, (lo, hi) in enumerate(ranges, start=1)}
    for j, (lo, hi) in enumerate(ranges, start=1):
        Tj = project_component_tree(T, (lo, hi))
        assert Tj.in_order() == list(range(lo, hi + 1))
        for b in members[j]:
            for x in members[j]:
                if T.is_descendant(x, b):
                    assert Tj.is_descendant(x, b)
    for b in range(1, n + 1):
        jb = range_index(b, ranges)
        for x in range(1, n + 1):
            jx = range_index(x, ranges)
            if (T.is_descendant(x, b)
                    and all(T.is_descendant(y, b) for y in members[jb])
                    and all(T.is_descendant(y, b) for y in members[jx])):
                assert tilde.is_descendant(jx, jb)


# -- alternation classes -------------------------------------------------------


def test_single_component_is_all_type1():
    rng = random.Random(2)
    spec = random_composition(rng, 1, 8, [20])
    T = ReferenceTree.random(range(1, 9), rng)
    counts = classify_alternations(compose(spec), T, spec.ranges)
    assert counts.total == counts.type1 == alt_for_tree(compose(spec), T)


def test_single_key_components_have_no_type1():
    rng = random.Random(4)
    spec = random_composition(rng, 4, 3, [5, 5, 5, 5])
    spec = CompositionSpec(spec.template, tuple(seq(3, *[2] * 5) for _ in range(4)), spec.ranges)
    T = ReferenceTree.random(range(1, 13), rng)
    assert classify_alternations(compose(spec), T, spec.ranges).type1 == 0


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9))
def test_classification_accounts_for_every_alternation(s):
    rng = random.Random(s)
    l = rng.randint(1, 4)
    width = rng.randint(1, 5)
    spec = random_composition(rng, l, width, [rng.randint(1, 12) for _ in range(l)])
    X = compose(spec)
    T = ReferenceTree.random(range(1, spec.n + 1), rng)
    counts = classify_alternations(X, T, spec.ranges)
    parts = per_tree_decomposition(spec, T)
    assert counts.unclassified == 0
    assert counts.total == len(preferred_child_alternations(X, T)) == parts["alt_tree"]
    assert counts.type1 <= parts["component_alt_tree_sum"]
    assert counts.type4 <= parts["template_alt_tree"]
    assert counts.type2 + counts.type3 <= 6 * spec.m


# -- direct-sum inequalities ---------------------------------------------------


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9))
def test_funnel_superadditive(s):
    rng = random.Random(s)
    l = rng.randint(1, 4)
    spec = random_composition(rng, l, rng.randint(1, 4), [rng.randint(1, 16) for _ in range(l)])
    assert funnel_margin(spec) >= 0


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9))
def test_alt_subadditive_equal_lengths(s):
    rng = random.Random(s)
    l = rng.randint(1, 4)
    spec = random_composition(rng, l, rng.randint(1, 4), [rng.randint(1, 16)] * l)
    assert alt_slack(spec) <= 8 * spec.m


def test_ranges_of_widths():
    assert ranges_of_widths([2, 1, 3]) == [(1, 2), (3, 3), (4, 6)]
