"""Deterministic layered enumeration of formulas up to a depth.

Layer 0 holds the atoms. Layer ``d`` holds ``Not`` of layer ``d-1``, then
``And(f, g)`` for ``f`` before ``g`` in the running list with ``g`` in layer
``d-1``, then one quantifier per variable choice over layer ``d-1``.
"""

import logging
import random
from dataclasses import dataclass
from itertools import product
from math import comb
from typing import Callable, List, Optional, Sequence

from umt.config import get_settings, resolve
from umt.errors import GuardError
from umt.logic.syntax import (
    And,
    Apply,
    BoundedForall,
    Constant,
    Eq,
    Forall,
    Formula,
    Language,
    Mem,
    Not,
    Rel,
    Term,
    Variable,
)

logger = logging.getLogger(__name__)

Quantify = Callable[[Formula], List[Formula]]


def candidate_terms(lang: Language, variables: Sequence[str]) -> List[Term]:
    """Variables, constants, then one application of each function to those."""
    base: List[Term] = [Variable(v) for v in variables] + [Constant(c) for c in lang.constants]
    applied: List[Term] = []
    for name in sorted(lang.functions):
        arity = lang.functions[name]
        if arity == 0:
            continue
        applied.extend(Apply(name, args) for args in product(base, repeat=arity))
    return base + applied


def first_order_atoms(lang: Language, variables: Sequence[str]) -> List[Formula]:
    terms = candidate_terms(lang, variables)
    atoms: List[Formula] = []
    for name in sorted(lang.relations):
        atoms.extend(Rel(name, args) for args in product(terms, repeat=lang.relations[name]))
    atoms.extend(Eq(terms[i], terms[j]) for i in range(len(terms)) for j in range(i, len(terms)))
    return atoms


def membership_atoms(variables: Sequence[str]) -> List[Formula]:
    terms = [Variable(v) for v in variables]
    atoms: List[Formula] = [Mem(x, y) for x in terms for y in terms]
    atoms.extend(Eq(terms[i], terms[j]) for i in range(len(terms)) for j in range(i, len(terms)))
    return atoms


def first_order_quantifiers(variables: Sequence[str]) -> Quantify:
    return lambda f: [Forall(v, f) for v in variables]


def bounded_quantifiers(variables: Sequence[str]) -> Quantify:
    return lambda f: [BoundedForall(v, Variable(w), f) for v in variables for w in variables if w != v]


def layer_sizes(atom_count: int, quantifier_choices: int, depth: int) -> List[int]:
    """Size of each exact-depth layer ``0..depth``."""
    sizes = [atom_count]
    total = atom_count
    previous_total = 0
    for _ in range(depth):
        exact = sizes[-1]
        new = exact + (comb(total, 2) - comb(previous_total, 2)) + quantifier_choices * exact
        sizes.append(new)
        previous_total, total = total, total + new
    return sizes


def _next_layer(layers: List[List[Formula]], quantify: Quantify) -> List[Formula]:
    previous = layers[-1]
    running = [f for layer in layers for f in layer]
    start = len(running) - len(previous)
    out: List[Formula] = [Not(f) for f in previous]
    for j in range(start, len(running)):
        for i in range(j):
            out.append(And(running[i], running[j]))
    for f in previous:
        out.extend(quantify(f))
    return out


def _sample_layer(layers: List[List[Formula]], quantify: Quantify, size: int, rng: random.Random) -> List[Formula]:
    previous = layers[-1]
    running = [f for layer in layers for f in layer]
    start = len(running) - len(previous)
    quantified_per = len(quantify(previous[0])) if previous else 0
    weights = [len(previous), comb(len(running), 2) - comb(start, 2), quantified_per * len(previous)]
    seen = set()
    out: List[Formula] = []
    attempts = 0
    while len(out) < size and attempts < size * 20:
        attempts += 1
        kind = rng.choices(range(3), weights=weights)[0]
        if kind == 0:
            candidate = Not(rng.choice(previous))
        elif kind == 1:
            j = rng.randrange(start, len(running))
            i = rng.randrange(len(running))
            if i == j:
                continue
            lo, hi = min(i, j), max(i, j)
            candidate = And(running[lo], running[hi])
        else:
            candidate = rng.choice(quantify(rng.choice(previous)))
        if candidate not in seen:
            seen.add(candidate)
            out.append(candidate)
    return out


@dataclass
class FormulaPool:
    """Formulas to check, with the sampling decision recorded."""

    formulas: List[Formula]
    depth: int
    total: int
    sampled: bool
    seed: Optional[int] = None

    def __iter__(self):
        return iter(self.formulas)

    def __len__(self) -> int:
        return len(self.formulas)

    def statistics(self) -> dict:
        stats = {"formulas": len(self.formulas), "max_depth": self.depth, "formula_space": self.total, "sampled": self.sampled}
        if self.sampled:
            stats["seed"] = self.seed
        return stats


def _check_depth(max_depth: int) -> None:
    cap = get_settings().depth_cap
    if max_depth < 0:
        raise GuardError("Depth must be non-negative")
    if max_depth > cap:
        raise GuardError(f"Depth {max_depth} exceeds the configured cap {cap}")


def _build(
    atoms: List[Formula],
    quantify: Quantify,
    quantifier_choices: int,
    max_depth: int,
    budget: Optional[int],
    sample_size: Optional[int],
    seed: Optional[int],
) -> FormulaPool:
    _check_depth(max_depth)
    sizes = layer_sizes(len(atoms), quantifier_choices, max_depth)
    total = sum(sizes)
    limit = resolve(budget, "formula_budget")
    layers = [atoms]
    if total <= limit:
        for _ in range(max_depth):
            layers.append(_next_layer(layers, quantify))
        return FormulaPool([f for layer in layers for f in layer], max_depth, total, False)
    lower = sum(sizes[:-1])
    if lower > resolve(None, "cap"):
        raise GuardError(f"{lower} formulas below the top layer exceed the cap")
    for _ in range(max_depth - 1):
        layers.append(_next_layer(layers, quantify))
    used_seed = resolve(seed, "seed")
    rng = random.Random(used_seed)
    top = _sample_layer(layers, quantify, resolve(sample_size, "sample_size"), rng)
    logger.info(f"Formula space of {total} exceeds budget {limit}; sampled {len(top)} of depth {max_depth} (seed {used_seed})")
    return FormulaPool([f for layer in layers for f in layer] + top, max_depth, total, True, used_seed)


def formula_pool(
    lang: Language,
    max_depth: int,
    variables: Sequence[str],
    budget: Optional[int] = None,
    sample_size: Optional[int] = None,
    seed: Optional[int] = None,
) -> FormulaPool:
    """First-order formulas up to ``max_depth``, sampling the top layer above ``budget``."""
    atoms = first_order_atoms(lang, variables)
    return _build(atoms, first_order_quantifiers(variables), len(variables), max_depth, budget, sample_size, seed)


def bounded_formula_pool(
    max_depth: int,
    variables: Sequence[str],
    budget: Optional[int] = None,
    sample_size: Optional[int] = None,
    seed: Optional[int] = None,
) -> FormulaPool:
    """Bounded membership formulas up to ``max_depth`` over ``variables``."""
    atoms = membership_atoms(variables)
    choices = len(variables) * (len(variables) - 1)
    return _build(atoms, bounded_quantifiers(variables), choices, max_depth, budget, sample_size, seed)


def enumerate_formulas(lang: Language, max_depth: int, variables: Sequence[str]) -> List[Formula]:
    """Every formula of depth at most ``max_depth``, duplicate-free, in layer order.

    Raises:
        GuardError: If ``max_depth`` exceeds the configured cap or the list exceeds ``cap``
    """
    atoms = first_order_atoms(lang, variables)
    return _exhaustive(atoms, first_order_quantifiers(variables), len(variables), max_depth)


def enumerate_bounded_formulas(max_depth: int, variables: Sequence[str]) -> List[Formula]:
    atoms = membership_atoms(variables)
    choices = len(variables) * (len(variables) - 1)
    return _exhaustive(atoms, bounded_quantifiers(variables), choices, max_depth)


def _exhaustive(atoms: List[Formula], quantify: Quantify, choices: int, max_depth: int) -> List[Formula]:
    _check_depth(max_depth)
    total = sum(layer_sizes(len(atoms), choices, max_depth))
    if total > resolve(None, "cap"):
        raise GuardError(f"{total} formulas exceed the materialization cap")
    layers = [atoms]
    for _ in range(max_depth):
        layers.append(_next_layer(layers, quantify))
    return [f for layer in layers for f in layer]
