"""Agreement of the enlargement, concurrency and hyperfinite-approximation criteria on one input."""

import logging
from typing import Dict

from umt.entities import Entity, members_of
from umt.reports import CheckReport
from umt.saturation.concurrency import check_concurrent, common_bound
from umt.saturation.enlargement import enlargement_check
from umt.starmap.context import StarMapContext
from umt.superstructure.constructions import big_union, domain, powerset

logger = logging.getLogger(__name__)

PASS, FAIL, SKIPPED = "pass", "fail", "skipped"


def _enlargement(ctx: StarMapContext, family: Entity, report: CheckReport) -> str:
    sub = enlargement_check(ctx, [family])
    report.merge(sub)
    if sub.statistics["precondition_failures"]:
        return SKIPPED
    return sub.verdict


def _concurrency(ctx: StarMapContext, relation: Entity, report: CheckReport) -> str:
    concurrent, blocking = check_concurrent(relation)
    if not concurrent:
        report.statistics["blocking_subset"] = blocking
        return SKIPPED
    standard_domain = members_of(ctx.sigma_image(domain(relation)))
    bound = common_bound(ctx.star(relation), standard_domain)
    report.statistics["common_bound"] = bound
    if standard_domain and bound is None:
        report.fail("starred relation has no common bound over the standard domain", relation=relation)
        return FAIL
    return PASS


def _approximation(ctx: StarMapContext, family: Entity, report: CheckReport) -> str:
    A = big_union(family)
    family_of_subsets = powerset(A)
    if not ctx.in_bound(family_of_subsets):
        report.statistics["approximation_rank"] = family_of_subsets.height
        return SKIPPED
    B = ctx.star(A)
    sigma = set(members_of(ctx.sigma_image(A)))
    report.statistics["approximation"] = B
    ok = sigma <= set(members_of(B)) and B in members_of(ctx.star(family_of_subsets))
    if not ok:
        report.fail("no hyperfinite approximation of the standard image", target=A, approximation=B)
        return FAIL
    return PASS


def check_coherence(ctx: StarMapContext, family: Entity, relation: Entity) -> CheckReport:
    """Run the three criteria over ``family``, ``relation`` and ``⋃family``, and compare verdicts.

    A criterion whose hypothesis fails (no finite intersection property, a
    relation that is not concurrent, a power set past the rank bound) is
    recorded as skipped and takes no part in the agreement.
    """
    report = CheckReport("coherence")
    verdicts: Dict[str, str] = {
        "enlargement": _enlargement(ctx, family, report),
        "concurrency": _concurrency(ctx, relation, report),
        "approximation": _approximation(ctx, family, report),
    }
    report.statistics["verdicts"] = verdicts
    decided = {v for v in verdicts.values() if v != SKIPPED}
    report.statistics["agreement"] = len(decided) <= 1
    if len(decided) > 1:
        report.fail("criteria disagree", verdicts=verdicts)
    logger.info(f"Coherence over {family}: {verdicts}")
    return report