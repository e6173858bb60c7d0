"""Enlargement at finite scale: intersections of standard images, the index-set pipeline, and function extension."""

import logging
from typing import Callable, Iterable, Mapping, Optional, Tuple

from umt.config import resolve
from umt.entities import EMPTY, Entity, HFSet, members_of
from umt.errors import GuardError, PreconditionError, UmtError
from umt.filters.core import SetFamily, extend_to_ultrafilter, has_fip, subsets
from umt.reports import CheckReport
from umt.saturation.hyperfinite import is_hyperfinite, with_numerals
from umt.starmap.context import StarMapContext
from umt.superstructure.constructions import apply, big_intersection, intersection, kuratowski
from umt.superstructure.levels import base_set, enumerate_vn

logger = logging.getLogger(__name__)


def enlargement_check(ctx: StarMapContext, families: Iterable[Entity]) -> CheckReport:
    """``⋂{*A : A ∈ 𝒜}`` is nonempty for every family with the finite intersection property.

    Families without the property are listed under ``precondition_failures``
    and do not fail the report.
    """
    report = CheckReport("enlargement")
    skipped = []
    for family in families:
        sets = members_of(family)
        if not sets or any(A.is_atom for A in sets) or not members_of(big_intersection(family)):
            skipped.append(family)
            continue
        report.count("families")
        common = big_intersection(HFSet(ctx.star(A) for A in sets))
        report.statistics.setdefault("intersections", []).append(common)
        if not members_of(common):
            report.fail("starred family has empty intersection", family=family)
    report.statistics["precondition_failures"] = skipped
    return report


def enlargement_pipeline(
    X: Iterable,
    target: Entity,
    k: int = 1,
    g: Optional[Callable[[Entity], Entity]] = None,
) -> Tuple[Entity, CheckReport]:
    """Index by the subsets of ``V_k(X)``, extend ``{I_a}`` to an ultrafilter and return ``g/U``.

    ``I_a`` is the set of indices containing ``a``, and ``g(a) = a ∩ target``
    unless another ``g`` is given. The result ``A`` is certified to satisfy
    ``σB ⊆ A ⊆ *B`` and to be hyperfinite.

    Raises:
        PreconditionError: If ``target`` is not a subset of ``V_k(X)``
        GuardError: If the index set exceeds ``cap``
    """
    atoms = base_set(X)
    level = sorted(enumerate_vn(atoms, k))
    if target.is_atom or not set(members_of(target)) <= set(level):
        raise PreconditionError(f"Target must be a subset of V_{k}(X)", target)
    if 2 ** len(level) > resolve(None, "cap"):
        raise GuardError(f"V_{k}(X) has {len(level)} members; its power set exceeds the cap")

    index_set = tuple(HFSet(s) for s in subsets(level))
    upsets = [frozenset(b for b in index_set if set(members_of(a)) <= set(members_of(b))) for a in index_set]
    family = SetFamily.of(index_set, upsets)
    report = CheckReport("enlargement-pipeline", statistics={"indices": len(index_set)})
    if not has_fip(family):
        report.fail("index family lacks the finite intersection property")
        return EMPTY, report
    U = extend_to_ultrafilter(family)
    report.statistics["principal_point"] = U.principal_point

    choose = g if g is not None else (lambda a: intersection(a, target))
    ctx = StarMapContext(atoms, k + 1, index_set, U)
    A = ctx.quotient({i: choose(i) for i in index_set})

    sigma = ctx.sigma_image(target)
    starred = ctx.star(target)
    if not set(members_of(sigma)) <= set(members_of(A)):
        report.fail("standard image is not contained in the result", missing=sorted(set(members_of(sigma)) - set(members_of(A))))
    if not set(members_of(A)) <= set(members_of(starred)):
        report.fail("result is not contained in the star of the target", extra=sorted(set(members_of(A)) - set(members_of(starred))))

    companion = StarMapContext.create(
        with_numerals((a.key for a in sorted(atoms)), len(members_of(A))),
        max(3, A.height + 2),
        track_levels=False,
    )
    witness = is_hyperfinite(companion, A)
    report.statistics["size"] = witness.size
    if not witness.certified:
        report.fail("hyperfinite certificate missing", result=A)
    logger.info(f"Enlargement pipeline over {len(index_set)} indices returned a set of size {witness.size}")
    return A, report


def extend_function(ctx: StarMapContext, A: Entity, B: Entity, f: Mapping[Entity, Entity]) -> Entity:
    """Internal ``⁺f : *A -> *B`` with ``⁺f(*a) = f(a)``, as the quotient of ``i ↦ {(a, ρ_a(i))}``.

    ``ρ_a`` takes the standard preimage of ``f(a)`` at the principal point and
    the least member of ``B`` elsewhere.

    Raises:
        PreconditionError: If ``f`` is not total on ``A`` or a value is not in ``*B``
    """
    domain = list(members_of(A))
    if set(f) != set(domain):
        raise PreconditionError("Function must be defined exactly on the members of A")
    targets = set(members_of(ctx.star(B)))
    for a in domain:
        if f[a] not in targets:
            raise PreconditionError("Value is not a member of *B", f[a])
    if not domain:
        return ctx.quotient(ctx.constant(EMPTY))
    filler = min(members_of(B))
    pointwise = {}
    for i in ctx.index_set:
        if i == ctx.point:
            pairs = [kuratowski(a, ctx.pullback(f[a])) for a in domain]
        else:
            pairs = [kuratowski(a, filler) for a in domain]
        pointwise[i] = HFSet(pairs)
    extended = ctx.quotient(pointwise)
    for a in domain:
        if apply(extended, ctx.star(a)) != f[a]:
            raise UmtError(f"Extension disagrees with f at {a}")
    return extended
