"""Order reversals induced by a finite type, and realizing a type from a support."""

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, FrozenSet, Mapping, Sequence

from umt.config import resolve
from umt.errors import GuardError, PreconditionError, UmtError
from umt.filters.core import Filter, Index
from umt.logic.syntax import Exists, Formula, conjunction, free_variables
from umt.reports import CheckReport
from umt.semantics.satisfaction import evaluate, satisfies
from umt.semantics.structures import Element
from umt.ultraproduct.products import IndexedFamily, Ultraproduct, build_ultraproduct

logger = logging.getLogger(__name__)


def _check_type(sigma: Sequence[Formula], variable: str) -> None:
    for theta in sigma:
        extra = free_variables(theta) - {variable}
        if extra:
            raise PreconditionError(f"Type formulas may only have {variable} free", sorted(extra))


def _realizers(fam: IndexedFamily, i: Index, theta: FrozenSet[Formula], variable: str):
    s = fam[i]
    return [a for a in s.universe if all(evaluate(s, f, {variable: a}) for f in theta)]


def type_order_reversal(
    fam: IndexedFamily, sigma: Sequence[Formula], variable: str = "x"
) -> Dict[FrozenSet[Formula], FrozenSet[Index]]:
    """``p(Θ) = {i : A_i ⊨ ∃x ⋀Θ}`` for every finite ``Θ ⊆ Σ``.

    Raises:
        PreconditionError: If a formula has a free variable other than ``variable``
        GuardError: If ``Σ`` has more subsets than ``cap``
    """
    sigma = list(dict.fromkeys(sigma))
    _check_type(sigma, variable)
    if 2 ** len(sigma) > resolve(None, "cap"):
        raise GuardError(f"A type of {len(sigma)} formulas has too many finite subsets")
    reversal: Dict[FrozenSet[Formula], FrozenSet[Index]] = {}
    for size in range(len(sigma) + 1):
        for theta in combinations(sigma, size):
            key = frozenset(theta)
            if theta:
                sentence = Exists(variable, conjunction(theta))
                reversal[key] = frozenset(i for i in fam.index_set if evaluate(fam[i], sentence, {}))
            else:
                reversal[key] = frozenset(fam.index_set)
    return reversal


@dataclass
class Realization:
    """An element of the ultraproduct realizing a type, with its verification."""

    ultraproduct: Ultraproduct
    element: Element
    choice: Dict[Index, Element]
    report: CheckReport


def check_support(
    fam: IndexedFamily,
    U: Filter,
    sigma: Sequence[Formula],
    support: Mapping[Index, Sequence[Formula]],
    variable: str = "x",
) -> CheckReport:
    """``i ∈ p(Φ_i)`` for every index and ``{i : θ ∈ Φ_i} ∈ U`` for every ``θ`` of the type."""
    sigma = list(dict.fromkeys(sigma))
    report = CheckReport("type-support")
    if set(support) != set(fam.index_set):
        report.fail("support is not indexed by the index set")
        return report
    for i in fam.index_set:
        phi = frozenset(support[i])
        if not phi <= set(sigma):
            report.fail("support set leaves the type", index=i)
        elif not _realizers(fam, i, phi, variable):
            report.fail("factor does not realize its support set", index=i, formulas=sorted(phi, key=str))
    for theta in sigma:
        indices = frozenset(i for i in fam.index_set if theta in set(support[i]))
        if not U.contains(indices):
            report.fail("formula is supported on a set outside the ultrafilter", formula=theta, indices=sorted(indices, key=str))
    return report


def realize_from_support(
    fam: IndexedFamily,
    U: Filter,
    sigma: Sequence[Formula],
    support: Mapping[Index, Sequence[Formula]],
    variable: str = "x",
) -> Realization:
    """Pick in each factor the first element realizing ``Φ_i``; its class realizes ``Σ``.

    Raises:
        PreconditionError: If ``(Φ_i)`` does not support the type
    """
    _check_type(sigma, variable)
    supported = check_support(fam, U, sigma, support, variable)
    if not supported.passed:
        first = supported.counterexamples[0]
        raise PreconditionError(f"Not a support: {first.detail}", first.witness)
    up = build_ultraproduct(fam, U)
    choice = {i: _realizers(fam, i, frozenset(support[i]), variable)[0] for i in fam.index_set}
    element = up.class_of(choice)
    report = CheckReport("type-realization", statistics={"formulas": len(sigma), "element": element})
    for theta in sigma:
        if not satisfies(up.structure, theta, {variable: element}):
            report.fail("chosen class does not satisfy a formula of the type", formula=theta, element=element)
    if not report.passed:
        raise UmtError(f"Realization check failed for {len(report.counterexamples)} formulas")
    logger.debug(f"Type of {len(sigma)} formulas realized by {element}")
    return Realization(up, element, choice, report)
