"""Epsilon-models ``(A, E)`` with a distinguished base node, and their truncation.

Edges are stored as a networkx DiGraph with an arc ``b -> a`` for every
``b E a``, so the E-predecessors of a node are its graph predecessors.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

import networkx as nx

from umt.entities import Entity, HFSet, members_of
from umt.errors import PreconditionError
from umt.logic.builders import build_nu
from umt.logic.syntax import relativize_membership
from umt.semantics.satisfaction import evaluate
from umt.semantics.structures import Structure, epsilon_structure
from umt.superstructure.constructions import transitive_closure

logger = logging.getLogger(__name__)

Node = str
Edge = Tuple[Node, Node]


@dataclass(frozen=True)
class EpsilonModel:
    """A finite carrier, the membership edges ``(b, a)`` for ``b E a``, and the base node."""

    carrier: Tuple[Node, ...]
    edges: FrozenSet[Edge]
    base: Node
    graph: nx.DiGraph = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        carrier = tuple(str(n) for n in self.carrier)
        if len(set(carrier)) != len(carrier):
            raise PreconditionError("Carrier nodes must be distinct", carrier)
        edges = frozenset((str(b), str(a)) for b, a in self.edges)
        known = set(carrier)
        for b, a in sorted(edges):
            if b not in known or a not in known:
                raise PreconditionError("Edge leaves the carrier", (b, a))
        if str(self.base) not in known:
            raise PreconditionError("Base node is not in the carrier", self.base)
        graph = nx.DiGraph()
        graph.add_nodes_from(carrier)
        graph.add_edges_from(edges)
        object.__setattr__(self, "carrier", carrier)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "base", str(self.base))
        object.__setattr__(self, "graph", graph)

    def order(self, node: Node) -> int:
        return self.carrier.index(node)

    def predecessors(self, node: Node) -> List[Node]:
        """E-predecessors in carrier order."""
        return sorted(self.graph.predecessors(node), key=self.order)

    @property
    def base_members(self) -> List[Node]:
        """``Y = {a : a E X}``."""
        return self.predecessors(self.base)

    def submodel(self, nodes: Iterable[Node]) -> "EpsilonModel":
        keep = set(nodes)
        return EpsilonModel(
            tuple(n for n in self.carrier if n in keep),
            frozenset((b, a) for b, a in self.edges if b in keep and a in keep),
            self.base,
        )

    def structure(self) -> Structure:
        return epsilon_structure(self.carrier, self.edges)


def check_base(M: EpsilonModel) -> bool:
    """No ``c E b E X``."""
    return base_violation(M) is None


def base_violation(M: EpsilonModel) -> Optional[Edge]:
    for b in M.base_members:
        preds = M.predecessors(b)
        if preds:
            return preds[0], b
    return None


def nu_levels(M: EpsilonModel) -> Dict[Node, Optional[int]]:
    """Least ``n`` with ``ν_n[a, X]`` per node, or None if no ``n`` works.

    ``ν_0`` holds of the base members; a node reaches level ``n + 1`` once all
    its predecessors sit at level ``n`` or lower. Nodes on or above an E-cycle
    never get a level.
    """
    levels: Dict[Node, Optional[int]] = {n: None for n in M.carrier}
    for a in M.base_members:
        levels[a] = 0
    for n in range(1, len(M.carrier) + 1):
        fresh = [
            a
            for a in M.carrier
            if levels[a] is None and all(levels[b] is not None and levels[b] <= n - 1 for b in M.graph.predecessors(a))
        ]
        if not fresh:
            break
        for a in fresh:
            levels[a] = n
    unreached = [a for a, level in levels.items() if level is None]
    if unreached:
        logger.debug(f"Nodes without a level: {unreached}")
    return levels


def nu_holds(M: EpsilonModel, node: Node, n: int) -> bool:
    """Evaluate ``ν_n(y, x)`` at ``y = node``, ``x = X`` in ``M`` read as a first-order structure."""
    formula = relativize_membership(build_nu(n))
    return evaluate(M.structure(), formula, {"y": node, "x": M.base})


def truncate(M: EpsilonModel) -> EpsilonModel:
    """The submodel on the nodes with a ν-level.

    Raises:
        PreconditionError: If BASE fails (witness: the offending ``(c, b)``)
    """
    violation = base_violation(M)
    if violation is not None:
        raise PreconditionError("BASE fails: a base member has a member", violation)
    levels = nu_levels(M)
    kept = [a for a in M.carrier if levels[a] is not None]
    if len(kept) < len(M.carrier):
        try:
            cycle = nx.find_cycle(M.graph)
        except nx.NetworkXNoCycle:
            cycle = []
        logger.info(f"Truncation drops {len(M.carrier) - len(kept)} nodes; cycle: {cycle}")
    return M.submodel(kept)


def is_extensional_over(M: EpsilonModel) -> Tuple[bool, Optional[Tuple[Node, Node]]]:
    """Distinct nodes outside ``Y`` have distinct predecessor sets; otherwise the first clashing pair."""
    exempt = set(M.base_members)
    seen: Dict[FrozenSet[Node], Node] = {}
    for a in M.carrier:
        if a in exempt:
            continue
        preds = frozenset(M.graph.predecessors(a))
        if preds in seen:
            return False, (seen[preds], a)
        seen[preds] = a
    return True, None


def epsilon_model_of(e: Entity) -> Tuple[EpsilonModel, Dict[Entity, Node]]:
    """The membership graph on ``{e} ∪ TC(e)`` with a base node whose members are the atoms.

    Nodes are ``n0, n1, ...`` in entity order. When the set of atoms already
    occurs in the closure its node is the base; otherwise a node ``base`` is added.
    """
    entities = sorted(set(transitive_closure(e).members) | {e})
    names = {x: f"n{k}" for k, x in enumerate(entities)}
    edges = {(names[m], names[x]) for x in entities for m in members_of(x)}
    atoms = HFSet(x for x in entities if x.is_atom)
    carrier = [names[x] for x in entities]
    if atoms in names:
        base = names[atoms]
    else:
        base = "base"
        carrier.append(base)
        edges |= {(names[a], base) for a in members_of(atoms)}
    return EpsilonModel(tuple(carrier), frozenset(edges), base), names
