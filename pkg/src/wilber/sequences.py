"""Access sequences, their geometric view, generators and the sequence file format.

File format::

    n m
    key_1
    ...
    key_m

Keys are 1-based integers in ``[1, n]``.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, NamedTuple


class SequenceFormatError(ValueError):
    """Raised when a sequence file cannot be parsed."""


@dataclass(frozen=True)
class AccessSequence:
    """A sequence of key accesses over the universe ``[1, universe_size]``."""

    universe_size: int
    accesses: tuple[int, ...] = ()

    def __post_init__(self):
        if self.universe_size < 1:
            raise ValueError(f"universe_size must be positive, got {self.universe_size}")
        accesses = tuple(int(a) for a in self.accesses)
        for t, key in enumerate(accesses, start=1):
            if not 1 <= key <= self.universe_size:
                raise ValueError(
                    f"access {t} is key {key}, outside [1, {self.universe_size}]"
                )
        object.__setattr__(self, "accesses", accesses)

    def __len__(self) -> int:
        return len(self.accesses)

    def __iter__(self) -> Iterator[int]:
        return iter(self.accesses)

    def __getitem__(self, index):
        return self.accesses[index]

    @property
    def m(self) -> int:
        return len(self.accesses)

    def counts(self) -> Counter:
        return Counter(self.accesses)


class Point(NamedTuple):
    """A point of the geometric view: ``x`` is the key, ``y`` the 1-based time."""

    x: int
    y: int


class PointSet:
    """An immutable point set with pairwise distinct y-coordinates.

    Points are kept sorted by time, which is the order every bound computation
    scans them in.
    """

    __slots__ = ("_points",)

    def __init__(self, points: Iterable[Point | tuple[int, int]] = ()):
        pts = sorted((Point(int(x), int(y)) for x, y in points), key=lambda p: p.y)
        for prev, cur in zip(pts, pts[1:]):
            if prev.y == cur.y:
                raise ValueError(f"duplicate y-coordinate {cur.y}")
        if pts and pts[0].y < 1:
            raise ValueError(f"y-coordinates must be >= 1, got {pts[0].y}")
        self._points = tuple(pts)

    @property
    def points(self) -> tuple[Point, ...]:
        return self._points

    def __len__(self) -> int:
        return len(self._points)

    def __iter__(self) -> Iterator[Point]:
        return iter(self._points)

    def __contains__(self, p) -> bool:
        return Point(*p) in set(self._points)

    def __eq__(self, other) -> bool:
        if isinstance(other, PointSet):
            return self._points == other._points
        try:
            return set(self._points) == {Point(*p) for p in other}
        except TypeError:
            return NotImplemented

    def __hash__(self) -> int:
        return hash(self._points)

    def __repr__(self) -> str:
        return f"PointSet({list(self._points)!r})"

    @property
    def xs(self) -> set[int]:
        return {p.x for p in self._points}

    @property
    def ys(self) -> set[int]:
        return {p.y for p in self._points}


def geometric_view(seq: AccessSequence) -> PointSet:
    """Map access ``t`` to the point ``(X_t, t)``."""
    return PointSet(Point(key, t) for t, key in enumerate(seq.accesses, start=1))


def gen_sequential(n: int) -> AccessSequence:
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    return AccessSequence(n, tuple(range(1, n + 1)))


def is_power_of_two(n: int) -> bool:
    return n >= 1 and n & (n - 1) == 0


def reverse_bits(value: int, bits: int) -> int:
    out = 0
    for _ in range(bits):
        out = (out << 1) | (value & 1)
        value >>= 1
    return out


def gen_bit_reversal(n: int) -> AccessSequence:
    """Access ``t`` is ``1 + reverse_bits(t - 1)`` on ``log2(n)`` bits."""
    if not is_power_of_two(n):
        raise ValueError(f"bit-reversal needs a power of two, got {n}")
    bits = n.bit_length() - 1
    return AccessSequence(n, tuple(1 + reverse_bits(t, bits) for t in range(n)))


def gen_random(n: int, m: int, seed: int) -> AccessSequence:
    """``m`` independent uniform draws from ``[1, n]``, reproducible from ``seed``."""
    if m < 0:
        raise ValueError(f"m must be non-negative, got {m}")
    rng = random.Random(seed)
    return AccessSequence(n, tuple(rng.randint(1, n) for _ in range(m)))


def pad_uniform(seq: AccessSequence) -> AccessSequence:
    """Append accesses so every key of ``[1, n]`` occurs equally often.

    The target count is the largest count of any key in ``seq``. Missing
    occurrences are appended grouped by key, keys in ascending order.
    """
    counts = seq.counts()
    target = max(counts.values(), default=0)
    tail = []
    for key in range(1, seq.universe_size + 1):
        tail.extend([key] * (target - counts.get(key, 0)))
    return AccessSequence(seq.universe_size, seq.accesses + tuple(tail))


def is_uniform(seq: AccessSequence) -> bool:
    counts = seq.counts()
    return len({counts.get(k, 0) for k in range(1, seq.universe_size + 1)}) == 1


def format_sequence(seq: AccessSequence) -> str:
    lines = [f"{seq.universe_size} {len(seq)}"]
    lines.extend(str(key) for key in seq.accesses)
    return "\n".join(lines) + "\n"


def parse_sequence(text: str) -> AccessSequence:
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise SequenceFormatError("line 1: missing header 'n m'")
    header = lines[0].split()
    if len(header) != 2:
        raise SequenceFormatError(f"line 1: expected 'n m', got {lines[0]!r}")
    try:
        n, m = int(header[0]), int(header[1])
    except ValueError:
        raise SequenceFormatError(f"line 1: expected two integers, got {lines[0]!r}") from None
    if n < 1 or m < 0:
        raise SequenceFormatError(f"line 1: need n >= 1 and m >= 0, got n={n} m={m}")
    body = lines[1:]
    if len(body) != m:
        raise SequenceFormatError(f"header declares {m} accesses, found {len(body)}")
    keys = []
    for lineno, raw in enumerate(body, start=2):
        try:
            key = int(raw.strip())
        except ValueError:
            raise SequenceFormatError(f"line {lineno}: not an integer: {raw!r}") from None
        if not 1 <= key <= n:
            raise SequenceFormatError(f"line {lineno}: key {key} outside [1, {n}]")
        keys.append(key)
    return AccessSequence(n, tuple(keys))


def read_sequence(path: str | Path) -> AccessSequence:
    return parse_sequence(Path(path).read_text())


def write_sequence(seq: AccessSequence, path: str | Path) -> None:
    Path(path).write_text(format_sequence(seq))
