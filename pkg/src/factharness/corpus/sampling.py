"""Stratified temporal sampling of the cleaned, labeled corpus."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .records import ClaimRecord, VerdictLabel


@dataclass(frozen=True)
class SamplingPlan:
    """Per-year quota of (true_count, false_count) plus the draw seed."""

    per_year_quota: dict[int, tuple[int, int]]
    seed: int = 0

    def __post_init__(self) -> None:
        for year, (true_n, false_n) in self.per_year_quota.items():
            if true_n < 0 or false_n < 0:
                raise ValueError(f"negative quota for {year}")


def default_plan(seed: int = 0) -> SamplingPlan:
    """25 true + 25 false per year 2013-2023, then 500 claims for 2024 of
    which 30 are true (the availability ceiling at collection time)."""
    quota: dict[int, tuple[int, int]] = {year: (25, 25) for year in range(2013, 2024)}
    quota[2024] = (30, 470)
    return SamplingPlan(per_year_quota=quota, seed=seed)


@dataclass(frozen=True)
class Shortfall:
    year: int
    label: VerdictLabel
    requested: int
    available: int


@dataclass
class SampleResult:
    records: list[ClaimRecord] = field(default_factory=list)
    shortfalls: list[Shortfall] = field(default_factory=list)


def stratified_sample(records: list[ClaimRecord], plan: SamplingPlan) -> SampleResult:
    """Draw the per-(year, class) quotas uniformly at random under the plan
    seed. Classes with fewer candidates than their quota contribute everything
    they have and the gap is reported, never padded."""
    rng = random.Random(plan.seed)
    result = SampleResult()
    for year in sorted(plan.per_year_quota):
        true_quota, false_quota = plan.per_year_quota[year]
        for label, quota in ((VerdictLabel.TRUE, true_quota), (VerdictLabel.FALSE, false_quota)):
            pool = sorted(
                (
                    r
                    for r in records
                    if r.label is label and r.review_date is not None and r.review_date.year == year
                ),
                key=lambda r: r.id,
            )
            if len(pool) < quota:
                result.shortfalls.append(Shortfall(year, label, quota, len(pool)))
                chosen = pool
            else:
                chosen = rng.sample(pool, quota)
            result.records.extend(sorted(chosen, key=lambda r: r.id))
    return result
