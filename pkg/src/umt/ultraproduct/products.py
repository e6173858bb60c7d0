"""Reduced products and ultraproducts of finite structures over finite index sets.

Over a finite index set a filter is determined by its core, and two choice
functions are equivalent exactly when they agree on the core. A class is
therefore named by its values on the core; the canonical representative
takes the first universe element at every other index.
"""

import logging
import re
from dataclasses import dataclass, field
from itertools import product
from typing import Dict, Iterator, Mapping, Optional, Tuple

from umt.config import resolve
from umt.errors import GuardError, PreconditionError
from umt.filters.core import Filter, Index, Ultrafilter
from umt.logic.syntax import Language
from umt.semantics.structures import Element, Structure

logger = logging.getLogger(__name__)

ChoiceFunction = Mapping[Index, Element]

_CLASS_SPECIALS = re.compile(r"([\\,])")


@dataclass(frozen=True)
class IndexedFamily:
    """Structures over one language, indexed by a finite ordered index set."""

    index_set: Tuple[Index, ...]
    structures: Dict[Index, Structure]

    def __post_init__(self):
        index_set = tuple(dict.fromkeys(self.index_set))
        if not index_set:
            raise PreconditionError("Index set must be nonempty")
        if set(index_set) != set(self.structures):
            raise PreconditionError("Structures must be given exactly for the index set")
        languages = {self.structures[i].language for i in index_set}
        if len(languages) != 1:
            raise PreconditionError("Factors must share one language")
        object.__setattr__(self, "index_set", index_set)

    @classmethod
    def power(cls, s: Structure, index_set) -> "IndexedFamily":
        index_set = tuple(index_set)
        return cls(index_set, {i: s for i in index_set})

    @property
    def language(self) -> Language:
        return self.structures[self.index_set[0]].language

    def __getitem__(self, i: Index) -> Structure:
        return self.structures[i]

    def choice_count(self) -> int:
        count = 1
        for i in self.index_set:
            count *= self.structures[i].size
        return count

    def choice_functions(self, limit: Optional[int] = None) -> Iterator[Dict[Index, Element]]:
        """Every choice function in lexicographic order of the factor universes.

        Raises:
            GuardError: If there are more than ``limit`` (default ``cap``)
        """
        limit = resolve(limit, "cap")
        if self.choice_count() > limit:
            raise GuardError(f"{self.choice_count()} choice functions exceed the limit {limit}")
        universes = [self.structures[i].universe for i in self.index_set]
        for values in product(*universes):
            yield dict(zip(self.index_set, values))

    def constant(self, element: Element) -> Dict[Index, Element]:
        return {i: element for i in self.index_set}


def class_id(values) -> str:
    """``<v1,...,vn>`` with backslashes and commas escaped inside each value."""
    return "<" + ",".join(_CLASS_SPECIALS.sub(r"\\\1", str(v)) for v in values) + ">"


@dataclass(frozen=True)
class Ultraproduct:
    """A reduced product together with its class bookkeeping."""

    family: IndexedFamily
    filter: Filter
    structure: Structure
    representatives: Dict[Element, Dict[Index, Element]] = field(repr=False)

    @property
    def is_ultra(self) -> bool:
        return self.filter.is_ultra

    @property
    def core(self) -> Tuple[Index, ...]:
        return self.filter.ordered_core()

    def class_of(self, f: ChoiceFunction) -> Element:
        """Name of the class of a choice function.

        Raises:
            PreconditionError: If ``f`` misses a core index or leaves a factor
        """
        values = []
        for i in self.core:
            if i not in f or f[i] not in set(self.family[i].universe):
                raise PreconditionError("Not a choice function on the core", i)
            values.append(f[i])
        return class_id(values)

    def agreement(self, f: ChoiceFunction, g: ChoiceFunction) -> frozenset:
        return frozenset(i for i in self.family.index_set if f[i] == g[i])

    def equivalent(self, f: ChoiceFunction, g: ChoiceFunction) -> bool:
        return self.filter.contains(self.agreement(f, g))


def build_reduced_product(fam: IndexedFamily, F: Filter) -> Ultraproduct:
    """Quotient of the product of ``fam`` by agreement on a member of ``F``.

    Raises:
        PreconditionError: If ``F`` is over another index set
        GuardError: If the number of classes exceeds ``cap``
    """
    if set(F.index_set) != set(fam.index_set):
        raise PreconditionError("Filter and family have different index sets")
    core = F.ordered_core()
    count = 1
    for i in core:
        count *= fam[i].size
    if count > resolve(None, "cap"):
        raise GuardError(f"Reduced product would have {count} elements")
    if not F.is_ultra:
        logger.warning(f"Building a reduced product over a filter with core of size {len(core)}; it is not an ultraproduct")

    representatives: Dict[Element, Dict[Index, Element]] = {}
    for values in product(*(fam[i].universe for i in core)):
        rep = {i: fam[i].universe[0] for i in fam.index_set}
        rep.update(zip(core, values))
        representatives[class_id(values)] = rep
    universe = tuple(representatives)

    def pointwise_core(args) -> Tuple[Tuple[Element, ...], ...]:
        return tuple(tuple(representatives[a][i] for a in args) for i in core)

    language = fam.language
    relations = {}
    for name, arity in language.relations.items():
        rows = set()
        for args in product(universe, repeat=arity):
            if all(fam[i].holds(name, row) for i, row in zip(core, pointwise_core(args))):
                rows.add(args)
        relations[name] = frozenset(rows)
    functions = {}
    for name, arity in language.functions.items():
        table = {}
        for args in product(universe, repeat=arity):
            table[args] = class_id(fam[i].value(name, row) for i, row in zip(core, pointwise_core(args)))
        functions[name] = table

    structure = Structure(language, universe, relations, functions)
    logger.info(f"Built product over {len(fam.index_set)} factors with core {core}: {len(universe)} classes")
    return Ultraproduct(fam, F, structure, representatives)


def build_ultraproduct(fam: IndexedFamily, U: Filter) -> Ultraproduct:
    """Ultraproduct of ``fam`` by ``U``.

    Raises:
        PreconditionError: If ``U`` is not an ultrafilter or the index sets differ
    """
    if not U.is_ultra:
        raise PreconditionError("Not an ultrafilter; use build_reduced_product", U.ordered_core())
    if not isinstance(U, Ultrafilter):
        U = U.as_ultrafilter()
    return build_reduced_product(fam, U)
