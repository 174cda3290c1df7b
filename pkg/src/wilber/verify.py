"""Randomized checks of the direct-sum inequalities, the alternation case split
and the Tango alternation identity.

Trial ``i`` draws everything from ``random.Random(seed + i)``, so any failing
instance is reproduced by rerunning that single seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .amplification import AmplifierConfig, amplification_levels, level_spec
from .bounds import alt_exact, alt_for_tree, funnel_bound
from .composition import (
    CompositionSpec,
    classify_alternations,
    compose,
    project_component_tree,
    project_template_tree,
    random_composition,
)
from .sequences import AccessSequence, gen_bit_reversal, gen_random
from .tango import ConsistencyError, TangoTreeK
from .trees import ReferenceTree

ALT_SLACK_C = 8


@dataclass
class VerifyReport:
    what: str
    trials: int = 0
    failures: int = 0
    max_alt_slack_per_m: Fraction | None = None
    min_funnel_margin: int | None = None
    unclassified_alternations: int = 0
    counterexamples: list[dict] = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.failures == 0 and self.unclassified_alternations == 0

    def _fail(self, **info) -> None:
        self.failures += 1
        self.counterexamples.append(info)

    def _funnel_margin(self, margin: int) -> None:
        if self.min_funnel_margin is None or margin < self.min_funnel_margin:
            self.min_funnel_margin = margin

    def _alt_slack(self, slack: Fraction) -> None:
        if self.max_alt_slack_per_m is None or slack > self.max_alt_slack_per_m:
            self.max_alt_slack_per_m = slack


def funnel_margin(spec: CompositionSpec) -> int:
    """``Funnel(X) - Funnel(template) - sum Funnel(component)``; never negative."""
    rhs = funnel_bound(spec.template) + sum(funnel_bound(c) for c in spec.components)
    return funnel_bound(compose(spec)) - rhs


def alt_slack(spec: CompositionSpec) -> int:
    """``Alt(X) - Alt(template) - sum Alt(component)``; at most ``8m`` for equal lengths."""
    rhs = alt_exact(spec.template)[0] + sum(alt_exact(c)[0] for c in spec.components)
    return alt_exact(compose(spec))[0] - rhs


def verify_directsum(trials: int = 100, max_l: int = 4, width: int = 4, max_mj: int = 16,
                     seed: int = 0) -> VerifyReport:
    """Funnel superadditivity (unequal lengths) and Alt subadditivity (equal lengths)."""
    report = VerifyReport("directsum")
    for i in range(trials):
        rng = random.Random(seed + i)
        l = rng.randint(1, max_l)
        spec = random_composition(rng, l, width, [rng.randint(1, max_mj) for _ in range(l)])
        margin = funnel_margin(spec)
        report._funnel_margin(margin)
        if margin < 0:
            report._fail(seed=seed + i, check="funnel", margin=margin)

        mj = rng.randint(1, max_mj)
        spec = random_composition(rng, l, width, [mj] * l)
        slack = alt_slack(spec)
        report._alt_slack(Fraction(slack, spec.m))
        if slack > ALT_SLACK_C * spec.m:
            report._fail(seed=seed + i, check="alt", slack=slack, m=spec.m)
        report.trials += 1
    return report


def verify_amplified_funnel(n: int = 256, Rs=(2, 4, 8), min_leaf_universe: int = 2,
                            report: VerifyReport | None = None) -> VerifyReport:
    """Funnel superadditivity at every composed level of the amplified sequences."""
    report = report or VerifyReport("amplified-funnel")
    for R in Rs:
        cfg = AmplifierConfig(n, R, gen_bit_reversal, min_leaf_universe)
        levels = amplification_levels(cfg)
        for (n_lvl, R_lvl, seq), (_, _, inner) in zip(levels, levels[1:]):
            spec = level_spec(n_lvl, R_lvl, inner)
            if compose(spec) != seq:
                raise ConsistencyError(f"level n={n_lvl} R={R_lvl} does not rebuild")
            margin = funnel_margin(spec)
            report._funnel_margin(margin)
            if margin < 0:
                report._fail(check="amplified-funnel", n=n_lvl, R=R_lvl, margin=margin)
            report.trials += 1
    return report


def verify_case_split(trials: int = 100, max_l: int = 4, width: int = 4, max_mj: int = 16,
                      seed: int = 0) -> VerifyReport:
    """Every alternation on a random tree falls into one of the four cases."""
    report = VerifyReport("case-split")
    totals = {"type1": 0, "type2": 0, "type3": 0, "type4": 0}
    for i in range(trials):
        rng = random.Random(seed + i)
        l = rng.randint(1, max_l)
        spec = random_composition(rng, l, width, [rng.randint(1, max_mj) for _ in range(l)])
        seq = compose(spec)
        T = ReferenceTree.random(range(1, spec.n + 1), rng)
        counts = classify_alternations(seq, T, spec.ranges, strict=False)
        report.unclassified_alternations += counts.unclassified
        for name in totals:
            totals[name] += getattr(counts, name)

        comp_sum = 0
        for comp, (lo, hi) in zip(spec.components, spec.ranges):
            shifted = AccessSequence(spec.n, tuple(x + lo - 1 for x in comp))
            comp_sum += alt_for_tree(shifted, project_component_tree(T, (lo, hi)))
        template_alt = alt_for_tree(spec.template, project_template_tree(T, spec.ranges))
        if counts.unclassified:
            report._fail(seed=seed + i, check="unclassified", count=counts.unclassified)
        if counts.type1 > comp_sum:
            report._fail(seed=seed + i, check="type1", type1=counts.type1, bound=comp_sum)
        if counts.type4 > template_alt:
            report._fail(seed=seed + i, check="type4", type4=counts.type4, bound=template_alt)
        report.trials += 1
    report.extra["type_totals"] = totals
    return report


def verify_tango_identity(trials: int = 50, sizes=(8, 16, 32), m_factor: int = 10,
                          seed: int = 0) -> VerifyReport:
    """Tango's counted alternations equal ``alt_for_tree`` on its reference tree, for every k."""
    report = VerifyReport("tango-identity")
    max_c = 0.0
    max_access_c = 0.0
    for n in sizes:
        log_n = n.bit_length() - 1
        ks = sorted({1, 2, log_n} & set(range(1, log_n + 1)))
        for i in range(trials):
            seq = gen_random(n, m_factor * n, seed + i)
            for k in ks:
                try:
                    cost = TangoTreeK(n, k).run(seq)
                except ConsistencyError as exc:
                    report._fail(seed=seed + i, n=n, k=k, error=str(exc))
                    continue
                max_c = max(max_c, cost.measured_constant)
                max_access_c = max(max_access_c, cost.max_access_constant)
                report.trials += 1
    report.extra["touch_constant"] = max_c
    report.extra["per_access_touch_constant"] = max_access_c
    return report


VERIFIERS = {
    "directsum": verify_directsum,
    "case-split": verify_case_split,
    "tango-identity": verify_tango_identity,
}
