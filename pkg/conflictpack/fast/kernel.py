# Copyright 2024 conflictpack authors.
# See LICENSE file for licensing details.

"""Linear vertex kernel for Feedback Arc Set in Tournaments.

The kernel removes vertices in no directed triangle, packs arc-disjoint triangles greedily,
orders the tournament so that backward arcs only join packed vertices, and reverses the
outer backward arcs of a safe partition built from a vertex cover of the certificate graph.
The reduced instance has at most ``4k`` vertices.
"""
import dataclasses
import functools
import itertools
import logging
import typing

from conflictpack.combinatorics import (
    BipartiteGraph,
    HallViolator,
    match_into,
    maximum_matching,
    minimum_vertex_cover,
)
from conflictpack.exceptions import KernelInvariantError, PreconditionError
from conflictpack.instances import (
    KernelReport,
    KernelVerdict,
    Pair,
    ParamInstance,
    ProblemKind,
    RuleApplication,
    Tournament,
    Triple,
    format_arc,
)

logger = logging.getLogger(__name__)

TRIVIAL_NO = ParamInstance(
    kind=ProblemKind.FAST,
    payload=Tournament(vertices=(0, 1, 2), winner={(0, 1): 0, (1, 2): 1, (0, 2): 2}),
    k=0,
)


@dataclasses.dataclass(frozen=True)
class OrderedTournament:
    """A tournament together with an ordering of its vertices.

    Attributes:
        t: the tournament.
        sigma: the vertex ordering.
    """

    t: Tournament
    sigma: tuple[int, ...]

    def __post_init__(self) -> None:
        """Check that sigma orders the vertices of t.

        Raises:
            ValueError: if sigma is not a permutation of the vertices.
        """
        if tuple(sorted(self.sigma)) != self.t.vertices:
            raise ValueError(f"{self.sigma} is not an ordering of {self.t.vertices}")

    @functools.cached_property
    def position(self) -> dict[int, int]:
        """Map every vertex to its index in sigma."""
        return {v: i for i, v in enumerate(self.sigma)}


@dataclasses.dataclass(frozen=True)
class TrianglePacking:
    """A maximal set of arc-disjoint directed triangles.

    Attributes:
        triangles: sorted vertex triples, in packing order.
        covered: the vertices of the triangles.
    """

    triangles: tuple[Triple, ...]
    covered: frozenset[int]

    def __len__(self) -> int:
        """Return the number of triangles."""
        return len(self.triangles)


@dataclasses.dataclass(frozen=True)
class SafePartitionFast:
    """A partition of an ordering into consecutive blocks, safe for Rule 2.

    Attributes:
        parts: the blocks, in ordering order.
        outer_backward: backward arcs ``(tail, head)`` joining two blocks.
        certificates: a distinct good vertex certifying each outer backward arc.
    """

    parts: tuple[tuple[int, ...], ...]
    outer_backward: tuple[Pair, ...]
    certificates: typing.Mapping[Pair, int]


def _is_triangle(t: Tournament, a: int, b: int, c: int) -> bool:
    return t.beats(a, b) == t.beats(b, c) == t.beats(c, a)


def directed_triangles(t: Tournament) -> typing.Iterator[Triple]:
    """Iterate over the directed triangles in lexicographic order.

    Args:
        t: the tournament.

    Yields:
        Sorted vertex triples inducing a directed triangle.
    """
    for a, b, c in itertools.combinations(t.vertices, 3):
        if _is_triangle(t, a, b, c):
            yield (a, b, c)


def is_transitive(t: Tournament) -> tuple[bool, Triple | None]:
    """Tell whether a tournament is acyclic.

    A tournament is acyclic if and only if it has no directed triangle.

    Args:
        t: the tournament.

    Returns:
        True and None if transitive, otherwise False and a directed triangle.
    """
    witness = next(directed_triangles(t), None)
    return witness is None, witness


def rule_irrelevant_vertex(t: Tournament) -> tuple[Tournament, tuple[int, ...]]:
    """Remove every vertex that belongs to no directed triangle, until none is left.

    Args:
        t: the tournament.

    Returns:
        The reduced tournament and the removed vertices, ascending.
    """
    removed: list[int] = []
    while True:
        relevant = {v for triangle in directed_triangles(t) for v in triangle}
        irrelevant = [v for v in t.vertices if v not in relevant]
        if not irrelevant:
            return t, tuple(sorted(removed))
        removed.extend(irrelevant)
        t = t.induced(relevant)


def greedy_triangle_packing(t: Tournament) -> TrianglePacking:
    """Pack arc-disjoint directed triangles greedily in lexicographic order.

    Args:
        t: the tournament.

    Returns:
        A maximal packing.
    """
    used: set[Pair] = set()
    triangles: list[Triple] = []
    for a, b, c in directed_triangles(t):
        pairs = {(a, b), (a, c), (b, c)}
        if used.isdisjoint(pairs):
            used.update(pairs)
            triangles.append((a, b, c))
    covered = frozenset(v for triangle in triangles for v in triangle)
    logger.debug("packed %d triangles covering %d vertices", len(triangles), len(covered))
    return TrianglePacking(triangles=tuple(triangles), covered=covered)


def nice_ordering(t: Tournament, p: TrianglePacking) -> OrderedTournament:
    """Order the vertices so that every backward arc joins two packed vertices.

    The good vertices, those outside the packing, follow the transitive order of the
    tournament they induce. Every packed vertex is inserted at its locus, the unique gap
    between good vertices compatible with all its arcs to good vertices; packed vertices
    sharing a locus are inserted in ascending order.

    Args:
        t: the tournament.
        p: a maximal triangle packing of ``t``.

    Returns:
        The nice ordering.

    Raises:
        KernelInvariantError: if the packing is not maximal.
    """
    good = [v for v in t.vertices if v not in p.covered]
    scores = {v: sum(t.beats(v, u) for u in good if u != v) for v in good}
    good.sort(key=lambda v: -scores[v])
    if sorted(scores.values()) != list(range(len(good))):
        logger.error("good vertices induce a cyclic tournament")
        raise KernelInvariantError("good vertices induce a cyclic tournament")
    slots: list[list[int]] = [[] for _ in range(len(good) + 1)]
    for v in sorted(p.covered):
        beaten_by = [t.beats(g, v) for g in good]
        locus = sum(beaten_by)
        if beaten_by != [True] * locus + [False] * (len(good) - locus):
            logger.error("vertex %d has no locus among good vertices", v)
            raise KernelInvariantError(f"vertex {v} has no locus among good vertices")
        slots[locus].append(v)
    sigma: list[int] = []
    for i, slot in enumerate(slots):
        sigma.extend(slot)
        if i < len(good):
            sigma.append(good[i])
    return OrderedTournament(t=t, sigma=tuple(sigma))


def backward_arcs(ot: OrderedTournament) -> list[Pair]:
    """List the arcs going backward in an ordering.

    Args:
        ot: the ordered tournament.

    Returns:
        Arcs ``(v, u)`` with ``u`` before ``v``, sorted.
    """
    return sorted(
        (v, u) for u, v in itertools.combinations(ot.sigma, 2) if ot.t.beats(v, u)
    )


def certificate_graph(ot: OrderedTournament, p: TrianglePacking) -> BipartiteGraph:
    """Build the bipartite graph between backward arcs and the good vertices they span.

    A good vertex ``w`` placed between the endpoints of a backward arc ``vu`` forms the
    directed triangle ``u -> w -> v -> u``, a certificate of the arc.

    Args:
        ot: a nice ordering.
        p: the packing it was built from.

    Returns:
        The certificate graph.
    """
    arcs = backward_arcs(ot)
    good = tuple(v for v in ot.sigma if v not in p.covered)
    pos = ot.position
    edges = frozenset(
        ((v, u), w) for v, u in arcs for w in good if pos[u] < pos[w] < pos[v]
    )
    return BipartiteGraph(left=tuple(arcs), right=tuple(sorted(good)), edges=edges)


def find_safe_partition(
    ot: OrderedTournament, p: TrianglePacking, k: int
) -> SafePartitionFast | None:
    """Build a safe partition from a minimum vertex cover of the certificate graph.

    Every good vertex outside the cover becomes a singleton block; the maximal runs of
    the remaining vertices form the other blocks.

    Args:
        ot: a nice ordering of a tournament reduced by Rule 1.
        p: the packing the ordering was built from.
        k: the budget.

    Returns:
        The partition, or None when the instance is within ``4k`` vertices or cannot hold
        a solution of size ``k``.

    Raises:
        KernelInvariantError: if the partition fails to be safe.
    """
    if ot.t.n <= 4 * k:
        return None
    graph = certificate_graph(ot, p)
    cover = minimum_vertex_cover(graph, maximum_matching(graph))
    if len(cover.matching) > k:
        # arc-disjoint certificates lower-bound the optimum
        return None
    good_free = [w for w in graph.right if w not in cover.d2]
    if not good_free:
        return None
    singletons = set(good_free)
    parts: list[tuple[int, ...]] = []
    run: list[int] = []
    for v in ot.sigma:
        if v in singletons:
            if run:
                parts.append(tuple(run))
                run = []
            parts.append((v,))
        else:
            run.append(v)
    if run:
        parts.append(tuple(run))
    block = {v: i for i, part in enumerate(parts) for v in part}
    outer = [arc for arc in graph.left if block[arc[0]] != block[arc[1]]]
    logger.debug("safe partition into %d parts, %d outer backward arcs", len(parts), len(outer))
    if not outer:
        logger.error("safe partition without outer backward arcs")
        raise KernelInvariantError("safe partition without outer backward arcs")
    if not set(outer) <= cover.d1:
        logger.error("outer backward arcs escape the vertex cover")
        raise KernelInvariantError("outer backward arcs escape the vertex cover")
    outer_set = set(outer)
    restricted = BipartiteGraph(
        left=tuple(outer),
        right=tuple(good_free),
        edges=frozenset(e for e in graph.edges if e[1] in singletons and e[0] in outer_set),
    )
    matched = match_into(restricted, outer)
    if isinstance(matched, HallViolator):
        logger.error("outer backward arcs %s lack certificates", sorted(matched.members))
        raise KernelInvariantError("outer backward arcs cannot be certified")
    return SafePartitionFast(
        parts=tuple(parts), outer_backward=tuple(outer), certificates=matched
    )


def apply_safe_partition(
    ot: OrderedTournament, sp: SafePartitionFast, k: int
) -> tuple[Tournament, int]:
    """Reverse the outer backward arcs of a safe partition (Rule 2).

    Args:
        ot: the ordered tournament.
        sp: a safe partition of it.
        k: the budget.

    Returns:
        The edited tournament and the decreased budget.
    """
    return ot.t.with_reversed(sp.outer_backward), k - len(sp.outer_backward)


def kernelize_fast(inst: ParamInstance) -> KernelReport:
    """Reduce a FAST instance to at most ``4k`` vertices.

    Args:
        inst: a FAST instance.

    Returns:
        The kernel and its rule trace, or the canonical No-instance.

    Raises:
        PreconditionError: if the instance is not a FAST instance.
    """
    if not isinstance(inst.payload, Tournament):
        raise PreconditionError(f"expected a FAST instance, got {inst.kind.value}")
    t, k = inst.payload, inst.k
    trace: list[RuleApplication] = []
    while True:
        reduced, removed = rule_irrelevant_vertex(t)
        if removed:
            logger.info("RULE1 removed %s", removed)
            trace.append(
                RuleApplication(
                    rule="RULE1", objects=tuple(map(str, removed)), before=t, after=reduced
                )
            )
        t = reduced
        if t.n <= 4 * k:
            break
        packing = greedy_triangle_packing(t)
        if len(packing) > k:
            return KernelReport.answer_no(inst, TRIVIAL_NO, trace, k, "packing-exceeds-budget")
        ordered = nice_ordering(t, packing)
        partition = find_safe_partition(ordered, packing, k)
        if partition is None:
            logger.warning("%d vertices exceed 4k=%d without a safe partition", t.n, 4 * k)
            return KernelReport.answer_no(inst, TRIVIAL_NO, trace, k, "no-safe-partition")
        edited, new_k = apply_safe_partition(ordered, partition, k)
        logger.info("RULE2 reversed %s dk=%d", partition.outer_backward, k - new_k)
        trace.append(
            RuleApplication(
                rule="RULE2",
                objects=tuple(format_arc(arc) for arc in partition.outer_backward),
                dk=k - new_k,
                before=t,
                after=edited,
            )
        )
        t, k = edited, new_k
        if k < 0:
            return KernelReport.answer_no(inst, TRIVIAL_NO, trace, k, "negative-budget")
    return KernelReport(
        original=inst,
        reduced=ParamInstance(kind=ProblemKind.FAST, payload=t.compact(), k=k),
        rule_trace=tuple(trace),
        verdict=KernelVerdict.REDUCED,
    )
