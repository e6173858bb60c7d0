"""Hyperfiniteness: an internal bijection from an initial segment of the naturals.

Natural numbers are the atoms ``0``, ``1``, ... of the context's base set.
"""

import logging
from dataclasses import dataclass
from typing import List

from umt.entities import Atom, Entity, HFSet, members_of
from umt.errors import GuardError, PreconditionError, UmtError
from umt.logic.builders import build_psi_hyperfinite
from umt.starmap.context import StarMapContext
from umt.superstructure.constructions import big_union, kuratowski, powerset
from umt.superstructure.evaluation import eval_bounded

logger = logging.getLogger(__name__)


@dataclass
class HyperfiniteWitness:
    """Size, internal bijection, and the set ``B`` with ``A ∈ *P(B)``."""

    size: int
    bijection: Entity
    finite_base: Entity
    certified: bool
    internal_bijection: bool


def numeral(k: int) -> Atom:
    return Atom(str(k))


def numeral_prefix(ctx: StarMapContext) -> List[Atom]:
    """The atoms ``0..m`` of the base set, for the largest such ``m``."""
    prefix = []
    k = 0
    while numeral(k) in ctx.base:
        prefix.append(numeral(k))
        k += 1
    return prefix


def naturals_environment(ctx: StarMapContext, prefix: List[Atom]) -> dict:
    """Stars of ``N``, its power set and its strict order, as used by the hyperfiniteness formula."""
    N = HFSet(prefix)
    LT = HFSet(kuratowski(prefix[i], prefix[j]) for i in range(len(prefix)) for j in range(i + 1, len(prefix)))
    return {"N": ctx.star(N), "PN": ctx.star(powerset(N)), "LT": ctx.star(LT)}


def _standard_base(ctx: StarMapContext, A: Entity) -> Entity:
    try:
        return ctx.pullback(A)
    except PreconditionError:
        pass
    witness = ctx.internal_witness(A)
    if witness is None:
        raise PreconditionError("Set is external", A)
    return big_union(witness)


def is_hyperfinite(ctx: StarMapContext, A: Entity) -> HyperfiniteWitness:
    """List an internal set as ``f: {0..n-1} -> A`` and check the bijection formula.

    Members are listed in entity order. The witness also certifies
    ``A ∈ *P(B)`` for a standard ``B`` when that fits the rank bound.

    Raises:
        PreconditionError: If ``A`` is an atom, external, or longer than the numeral prefix
        GuardError: If the naturals' order exceeds the rank bound
        UmtError: If the bijection fails the formula
    """
    if A.is_atom:
        raise PreconditionError("Atoms are not hyperfinite sets", A)
    B = _standard_base(ctx, A)
    items = list(members_of(A))
    prefix = numeral_prefix(ctx)
    if len(prefix) < len(items) + 1:
        raise PreconditionError(f"Numeral prefix 0..{len(prefix) - 1} is too short for a set of size {len(items)}")
    if ctx.rank_bound < 3:
        raise GuardError("The order on the naturals needs rank bound at least 3")

    starred = [ctx.star(k) for k in prefix]
    f = HFSet(kuratowski(starred[k], a) for k, a in enumerate(items))
    env = {"A": A, "f": f, "n": starred[len(items)], **naturals_environment(ctx, prefix)}
    if not eval_bounded(build_psi_hyperfinite(), env):
        raise UmtError(f"Listing of {A} is not a bijection from an initial segment")

    family = powerset(B)
    certified = ctx.in_bound(family) and A in members_of(ctx.star(family))
    internal = False
    if ctx.in_bound(f):
        try:
            ctx.pullback(f)
            internal = True
        except PreconditionError:
            internal = False
    logger.debug(f"Hyperfinite set of size {len(items)}; certified={certified}")
    return HyperfiniteWitness(len(items), f, B, certified, internal)


def with_numerals(names, count: int) -> List[str]:
    """Atom names plus the numerals ``0..count``."""
    out = [str(n) for n in names]
    return out + [str(k) for k in range(count + 1) if str(k) not in out]
