# Copyright 2024 conflictpack authors.
# See LICENSE file for licensing details.

"""Bipartite matching, König vertex covers and Hall matchings.

Left vertices are conflict objects (arcs or triplets), right vertices are good vertices.
Both sides are kept apart inside networkx graphs by tagging the nodes with ``L`` / ``R``.
"""
import dataclasses
import logging
import typing
from collections.abc import Hashable, Iterable

import networkx as nx
from networkx.algorithms import bipartite

logger = logging.getLogger(__name__)

Left = typing.TypeVar("Left", bound=Hashable)
Edge = tuple[typing.Any, int]

_LEFT = "L"
_RIGHT = "R"


@dataclasses.dataclass(frozen=True)
class BipartiteGraph:
    """A bipartite graph between conflict objects and good vertices.

    Attributes:
        left: the left vertices, in a fixed order.
        right: the right vertices, in a fixed order.
        edges: pairs ``(left vertex, right vertex)``.
    """

    left: tuple[typing.Any, ...]
    right: tuple[int, ...]
    edges: frozenset[Edge]

    def __post_init__(self) -> None:
        """Check that edges join a left vertex to a right vertex.

        Raises:
            ValueError: if an edge has an endpoint outside its side.
        """
        left, right = set(self.left), set(self.right)
        for u, w in self.edges:
            if u not in left or w not in right:
                raise ValueError(f"edge {u!r}-{w!r} is not between left and right")

    def neighbours(self, u: typing.Any) -> set[int]:
        """Return the right neighbours of a left vertex.

        Args:
            u: a left vertex.

        Returns:
            Its neighbours.
        """
        return {w for x, w in self.edges if x == u}

    def to_networkx(self, left: Iterable[typing.Any] | None = None) -> nx.Graph:
        """Build the tagged networkx graph, optionally restricted to some left vertices.

        Args:
            left: the left vertices to keep, all of them when None.

        Returns:
            The graph, nodes added in sorted order for reproducible matchings.
        """
        kept = set(self.left if left is None else left)
        graph = nx.Graph()
        graph.add_nodes_from((_LEFT, u) for u in sorted(kept))
        graph.add_nodes_from((_RIGHT, w) for w in sorted(self.right))
        graph.add_edges_from(
            ((_LEFT, u), (_RIGHT, w)) for u, w in sorted(self.edges) if u in kept
        )
        return graph


@dataclasses.dataclass(frozen=True)
class CoverAndMatching:
    """A maximum matching and a minimum vertex cover of the same size.

    Attributes:
        matching: the matching, as ``(left, right)`` edges.
        d1: the left vertices of the cover.
        d2: the right vertices of the cover.
    """

    matching: frozenset[Edge]
    d1: frozenset[typing.Any]
    d2: frozenset[int]

    @property
    def cover(self) -> frozenset[typing.Any]:
        """Return the cover as tagged ``(side, vertex)`` nodes."""
        return frozenset({(_LEFT, u) for u in self.d1} | {(_RIGHT, w) for w in self.d2})


@dataclasses.dataclass(frozen=True)
class HallViolator:
    """A set of left vertices with fewer right neighbours than members.

    Attributes:
        members: the left vertices.
        neighbours: their right neighbours.
    """

    members: frozenset[typing.Any]
    neighbours: frozenset[int]


def maximum_matching(g: BipartiteGraph) -> frozenset[Edge]:
    """Compute a maximum matching with Hopcroft-Karp.

    Args:
        g: the graph.

    Returns:
        The matching, as ``(left, right)`` edges.
    """
    return _matching_edges(g.to_networkx(), g.left)


def _matching_edges(graph: nx.Graph, left: Iterable[typing.Any]) -> frozenset[Edge]:
    """Run Hopcroft-Karp and keep one entry per matched pair.

    Args:
        graph: the tagged graph.
        left: the left vertices of the graph.

    Returns:
        The matched ``(left, right)`` edges.
    """
    top = [(_LEFT, u) for u in left if graph.has_node((_LEFT, u))]
    mate = bipartite.hopcroft_karp_matching(graph, top_nodes=top)
    return frozenset((node[1], other[1]) for node, other in mate.items() if node[0] == _LEFT)


def minimum_vertex_cover(g: BipartiteGraph, m: frozenset[Edge]) -> CoverAndMatching:
    """Compute a minimum vertex cover from a maximum matching (König's construction).

    Args:
        g: the graph.
        m: a maximum matching of ``g``.

    Returns:
        The cover and the matching.
    """
    graph = g.to_networkx()
    mate: dict[tuple[str, typing.Any], tuple[str, typing.Any]] = {}
    for u, w in m:
        mate[(_LEFT, u)] = (_RIGHT, w)
        mate[(_RIGHT, w)] = (_LEFT, u)
    cover = bipartite.to_vertex_cover(graph, mate, top_nodes=[(_LEFT, u) for u in g.left])
    result = CoverAndMatching(
        matching=m,
        d1=frozenset(node[1] for node in cover if node[0] == _LEFT),
        d2=frozenset(node[1] for node in cover if node[0] == _RIGHT),
    )
    logger.debug(
        "vertex cover of size %d (%d left, %d right)",
        len(result.d1) + len(result.d2),
        len(result.d1),
        len(result.d2),
    )
    return result


def match_into(g: BipartiteGraph, i_prime: Iterable[typing.Any]) -> dict | HallViolator:
    """Match some left vertices into distinct right vertices.

    Args:
        g: the graph.
        i_prime: left vertices to match.

    Returns:
        A mapping from every vertex of ``i_prime`` to a distinct neighbour, or a set of
        vertices of ``i_prime`` violating Hall's condition.
    """
    wanted = sorted(set(i_prime))
    graph = g.to_networkx(wanted)
    matching = dict(_matching_edges(graph, wanted))
    unmatched = [u for u in wanted if u not in matching]
    if not unmatched:
        return matching
    partner = {w: u for u, w in matching.items()}
    members = {unmatched[0]}
    neighbours: set[int] = set()
    frontier = [unmatched[0]]
    while frontier:
        u = frontier.pop()
        for node in graph.neighbors((_LEFT, u)):
            w = node[1]
            if w in neighbours:
                continue
            neighbours.add(w)
            # w is matched, otherwise the matching would not be maximum
            members.add(partner[w])
            frontier.append(partner[w])
    logger.debug("Hall violator of %d vertices with %d neighbours", len(members), len(neighbours))
    return HallViolator(members=frozenset(members), neighbours=frozenset(neighbours))
