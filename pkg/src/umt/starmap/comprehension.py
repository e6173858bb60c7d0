"""Star comprehension and the internal definition principle."""

import logging
from typing import Mapping, Optional, Tuple

from umt.entities import Entity, HFSet, members_of
from umt.errors import GuardError, PreconditionError, UmtError
from umt.logic.syntax import Formula, free_variables, is_bounded, star_transform
from umt.starmap.context import StarMapContext
from umt.superstructure.constructions import big_union, powerset
from umt.superstructure.evaluation import eval_bounded

logger = logging.getLogger(__name__)


def _check_formula(f: Formula, var: str, params: Mapping[str, Entity]) -> None:
    if not is_bounded(f):
        raise PreconditionError("Comprehension needs a bounded formula", f)
    extra = free_variables(f) - {var} - set(params)
    if extra:
        raise PreconditionError("Formula has free variables without values", sorted(extra))
    if var in params:
        raise PreconditionError("The comprehension variable cannot be a parameter", var)


def _separate(a: Entity, f: Formula, var: str, params: Mapping[str, Entity]) -> HFSet:
    env = dict(params)
    chosen = []
    for y in members_of(a):
        env[var] = y
        if eval_bounded(f, env):
            chosen.append(y)
    return HFSet(chosen)


def star_comprehension(
    ctx: StarMapContext,
    f: Formula,
    a: Entity,
    params: Optional[Mapping[str, Entity]] = None,
    var: str = "y",
) -> Tuple[Entity, Entity]:
    """``(*{y ∈ a : φ(y, ū)}, {y ∈ *a : φ*(y, *ū)})``; the two must coincide.

    Raises:
        PreconditionError: On an unbounded formula or unassigned free variables
        GuardError: If an argument exceeds the rank bound
        UmtError: If the two sides differ
    """
    params = dict(params or {})
    _check_formula(f, var, params)
    left = ctx.star(_separate(a, f, var, params))
    starred_params = {k: ctx.star(v) for k, v in params.items()}
    right = _separate(ctx.star(a), star_transform(f, ctx.star), var, starred_params)
    if left != right:
        raise UmtError(f"Star comprehension fails: {left} != {right}")
    return left, right


def internal_definition(
    ctx: StarMapContext,
    f: Formula,
    B: Entity,
    params: Optional[Mapping[str, Entity]] = None,
    var: str = "y",
) -> Entity:
    """``{y ∈ B : φ(y, ū)}`` for internal ``B`` and parameters, checked to be internal.

    With ``B ∈ *A`` (or ``B = *T``) the result is a subset of ``*(⋃A)``
    (or ``*T``); ``P`` of that set is registered and the result must lie in
    its star.

    Raises:
        PreconditionError: If ``B`` or a parameter is not internal
        UmtError: If the result is not internal
    """
    params = dict(params or {})
    _check_formula(f, var, params)
    kind = ctx.classify(B)
    if not kind.is_internal:
        raise PreconditionError("Bounding set is not internal", B)
    for name, value in params.items():
        if not ctx.classify(value).is_internal:
            raise PreconditionError(f"Parameter {name} is not internal", value)

    result = _separate(B, f, var, params)
    T = kind.witness if kind.kind == "standard" else big_union(kind.witness)
    family = powerset(T)
    if not ctx.in_bound(family):
        raise GuardError(f"Power set of the defining set has rank {family.height}, above the rank bound")
    ctx.track([family])
    if result not in members_of(ctx.star(family)):
        raise UmtError(f"Defined set {result} is not internal")
    logger.debug(f"Internal definition over {B} gives {result} ({ctx.classify(result).kind})")
    return result
