"""Mixing strings and switch counts of two disjoint sets of numbers.

A side string is a ``str`` over the alphabet ``"LR"``.
"""

from __future__ import annotations

from typing import Iterable

LEFT = "L"
RIGHT = "R"


def _check_disjoint(left: set, right: set) -> None:
    common = left & right
    if common:
        raise ValueError(f"left and right must be disjoint, both contain {sorted(common)}")


def mix(left: Iterable[int], right: Iterable[int]) -> str:
    """Label the sorted union of ``left`` and ``right`` by origin.

    >>> mix({2, 3, 8}, {1, 5})
    'RLLRL'
    """
    left, right = set(left), set(right)
    _check_disjoint(left, right)
    return "".join(LEFT if v in left else RIGHT for v in sorted(left | right))


def num_switches(s: str) -> int:
    """Number of adjacent positions holding different symbols."""
    bad = set(s) - {LEFT, RIGHT}
    if bad:
        raise ValueError(f"side strings hold only L and R, got {sorted(bad)}")
    return sum(1 for a, b in zip(s, s[1:]) if a != b)


def mix_value(left: Iterable[int], right: Iterable[int]) -> int:
    """``num_switches(mix(left, right))`` by a linear merge of the sorted sets."""
    ls, rs = sorted(set(left)), sorted(set(right))
    i = j = 0
    switches = 0
    last = None
    while i < len(ls) or j < len(rs):
        if j == len(rs) or (i < len(ls) and ls[i] < rs[j]):
            side = LEFT
            i += 1
        elif i == len(ls) or rs[j] < ls[i]:
            side = RIGHT
            j += 1
        else:
            raise ValueError(f"left and right must be disjoint, both contain {ls[i]}")
        if last is not None and side != last:
            switches += 1
        last = side
    return switches


def switches_of_sorted(labels: Iterable) -> int:
    """Count changes between consecutive labels of an already time-ordered stream."""
    switches = 0
    last = None
    for lab in labels:
        if last is not None and lab != last:
            switches += 1
        last = lab
    return switches
