"""Recursive hardness amplification of a base access sequence.

``amplify`` at ``R = 1`` is the padded base sequence. Going from ``R`` to
``2R`` composes ``sqrt(n)`` copies of the level-``R`` sequence over
``[sqrt(n)]`` (on consecutive key blocks of width ``sqrt(n)``) using that same
sequence repeated ``sqrt(n)`` times as the template.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Callable, Iterable

from .bounds import alt_exact, funnel_bound
from .composition import CompositionSpec, compose, ranges_of_widths
from .sequences import AccessSequence, gen_bit_reversal, is_power_of_two, pad_uniform

BaseGenerator = Callable[[int], AccessSequence]


def is_double_exponential(n: int, min_r: int = 1) -> bool:
    """``n == 2 ** (2 ** r)`` for some integer ``r >= min_r``."""
    if not is_power_of_two(n) or n < 2:
        return False
    e = n.bit_length() - 1
    return is_power_of_two(e) and e.bit_length() - 1 >= min_r


def leaf_universe(n: int, R: int) -> int:
    """``n ** (1 / R)`` for ``n`` a power of two and ``R`` dividing ``log2 n``."""
    e = n.bit_length() - 1
    return 1 << (e // R)


@dataclass(frozen=True)
class AmplifierConfig:
    n: int
    R: int
    base: BaseGenerator = field(default=gen_bit_reversal)
    min_leaf_universe: int = 16

    def __post_init__(self):
        if not is_double_exponential(self.n):
            raise ValueError(f"n must be 2^(2^r) with r >= 1, got {self.n}")
        if not is_power_of_two(self.R):
            raise ValueError(f"R must be a power of two, got {self.R}")
        e = self.n.bit_length() - 1
        if self.R > e:
            raise ValueError(f"R={self.R} exceeds log2(n)={e}")
        leaf = leaf_universe(self.n, self.R)
        if leaf < self.min_leaf_universe:
            raise ValueError(
                f"n^(1/R) = {leaf} is below min_leaf_universe={self.min_leaf_universe}"
            )


def _amplify(n: int, R: int, base: BaseGenerator, cache: dict) -> AccessSequence:
    if (n, R) in cache:
        return cache[n, R]
    if R == 1:
        seq = base(n)
        if seq.universe_size != n:
            raise ValueError(f"base generator returned universe {seq.universe_size} for n={n}")
        out = pad_uniform(seq)
    else:
        inner = _amplify(isqrt(n), R // 2, base, cache)
        out = compose(level_spec(n, R, inner))
    cache[n, R] = out
    return out


def amplify(cfg: AmplifierConfig) -> AccessSequence:
    return _amplify(cfg.n, cfg.R, cfg.base, {})


def amplification_levels(cfg: AmplifierConfig) -> list[tuple[int, int, AccessSequence]]:
    """``(n', R', sequence)`` for every level of the recursion, top level first."""
    cache: dict = {}
    _amplify(cfg.n, cfg.R, cfg.base, cache)
    out = []
    n, R = cfg.n, cfg.R
    while True:
        out.append((n, R, cache[n, R]))
        if R == 1:
            return out
        n, R = isqrt(n), R // 2


def level_spec(n: int, R: int, inner: AccessSequence) -> CompositionSpec:
    """The composition that builds level ``(n, R)`` from its inner sequence."""
    s = isqrt(n)
    return CompositionSpec(
        template=AccessSequence(s, inner.accesses * s),
        components=(inner,) * s,
        ranges=tuple(ranges_of_widths([s] * s)),
    )


@dataclass(frozen=True)
class AmplificationRow:
    R: int
    m: int
    alt: int
    funnel: int

    @property
    def amortized_alt(self) -> Fraction:
        return Fraction(self.alt, self.m)

    @property
    def amortized_funnel(self) -> Fraction:
        return Fraction(self.funnel, self.m)


def amplification_report(n: int, Rs: Iterable[int], base: BaseGenerator = gen_bit_reversal,
                         min_leaf_universe: int = 16, alt=alt_exact,
                         funnel=funnel_bound) -> list[AmplificationRow]:
    """Exact Alternation and Funnel bounds of the amplified sequence for each ``R``."""
    rows = []
    for R in Rs:
        seq = amplify(AmplifierConfig(n, R, base, min_leaf_universe))
        a, _ = alt(seq)
        rows.append(AmplificationRow(R, len(seq), a, funnel(seq)))
    return rows


BASES: dict[str, BaseGenerator] = {
    "bitrev": gen_bit_reversal,
}
