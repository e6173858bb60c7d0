"""Collapse of a well-founded, extensional epsilon-model onto a transitive set."""

import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Mapping, Optional

import networkx as nx

from umt.entities import Atom, Entity, HFSet, members_of
from umt.errors import PreconditionError
from umt.mostowski.model import EpsilonModel, Node, base_violation, is_extensional_over, nu_levels, truncate
from umt.reports import CheckReport
from umt.semantics.embeddings import check_bounded_submodel
from umt.semantics.structures import substructure
from umt.starmap.checks import membership_structure
from umt.superstructure.levels import enumerate_vn

logger = logging.getLogger(__name__)


@dataclass
class CollapseResult:
    """``h`` per node, its image, and the ν-level of every node."""

    h: Dict[Node, Entity]
    image: FrozenSet[Entity]
    levels: Dict[Node, int]
    atoms: Dict[Node, Atom]


def _is_name(node: Node) -> bool:
    return all(ch.isalnum() or ch == "_" for ch in node)


def allocate_atoms(M: EpsilonModel) -> Dict[Node, Atom]:
    """One fresh atom per base member: ``atom_<node>``, or ``atom_<position>`` if node ids are not names."""
    members = M.base_members
    if all(_is_name(a) for a in members):
        return {a: Atom(f"atom_{a}") for a in members}
    return {a: Atom(f"atom_{M.order(a)}") for a in members}


def collapse(M: EpsilonModel) -> CollapseResult:
    """``h(a) = atom`` on the base members and ``h(a) = {h(b) : b E a}`` elsewhere.

    Nodes are visited in topological order, ties broken by carrier order.

    Raises:
        PreconditionError: If BASE fails, ``M`` is not its own truncation, or
            two non-base nodes have the same predecessors (witness: the pair)
    """
    violation = base_violation(M)
    if violation is not None:
        raise PreconditionError("BASE fails: a base member has a member", violation)
    truncated = truncate(M)
    if truncated.carrier != M.carrier:
        dropped = [a for a in M.carrier if a not in set(truncated.carrier)]
        raise PreconditionError("Model is not its own truncation", dropped)
    extensional, pair = is_extensional_over(M)
    if not extensional:
        raise PreconditionError("Model is not extensional over the base", pair)

    atoms = allocate_atoms(M)
    h: Dict[Node, Entity] = {}
    for a in nx.lexicographical_topological_sort(M.graph, key=M.order):
        if a in atoms:
            h[a] = atoms[a]
        else:
            h[a] = HFSet(h[b] for b in M.graph.predecessors(a))
    levels = {a: level for a, level in nu_levels(M).items() if level is not None}
    logger.info(f"Collapsed {len(h)} nodes onto a transitive set")
    return CollapseResult(h, frozenset(h.values()), levels, atoms)


def verify_collapse(M: EpsilonModel, r: CollapseResult, depth: Optional[int] = None) -> CheckReport:
    """Re-check the collapse properties on ``r`` without reusing the construction.

    Checks that base members go to atoms, ``h(X)`` is the set of those atoms,
    the image is transitive, ``h`` is injective and ``b E a ⟺ h(b) ∈ h(a)``.
    With ``depth`` the image is also checked as a bounded submodel of
    ``image ∪ V_1(atoms)``.
    """
    report = CheckReport("collapse")
    Y = M.base_members
    if set(r.h) != set(M.carrier):
        report.fail("map is not total on the carrier", missing=sorted(set(M.carrier) - set(r.h)))
        return report

    for a in Y:
        if not r.h[a].is_atom:
            report.fail("base member is not sent to an atom", node=a, value=r.h[a])
    atom_images = HFSet(r.h[a] for a in Y)
    if r.h[M.base] != atom_images:
        report.fail("base node is not sent to the set of base atoms", value=r.h[M.base], expected=atom_images)

    image = set(r.image)
    if image != set(r.h.values()):
        report.fail("image differs from the values of h", image=r.image)
    for v in sorted(image):
        outside = [m for m in members_of(v) if m not in image]
        if outside:
            report.fail("image is not transitive", value=v, outside=outside)

    seen: Dict[Entity, Node] = {}
    for a in M.carrier:
        v = r.h[a]
        if v in seen:
            report.fail("h is not injective", first=seen[v], second=a, value=v)
        seen.setdefault(v, a)

    for a in M.carrier:
        for b in M.carrier:
            edge = (b, a) in M.edges
            member = r.h[b] in members_of(r.h[a])
            if edge != member:
                report.fail("membership is not preserved", node=a, member=b, edge=edge, image_member=member)

    report.statistics["nodes"] = len(M.carrier)
    if depth is not None and report.passed:
        report.merge(_bounded_check(r, depth), prefix="bounded")
    return report


def _bounded_check(r: CollapseResult, depth: int) -> CheckReport:
    level = enumerate_vn(sorted(r.atoms.values()), 1)
    world, names = membership_structure(set(r.image) | set(level))
    inner = substructure(world, (names[v] for v in r.image))
    return check_bounded_submodel(inner, world, depth)


def rename_atoms(e: Entity, mapping: Mapping[Entity, Entity]) -> Entity:
    """Replace atoms hereditarily through ``mapping`` (unmapped atoms stay)."""
    if e.is_atom:
        return mapping.get(e, e)
    return HFSet(rename_atoms(m, mapping) for m in members_of(e))
