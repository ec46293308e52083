# Copyright 2024 conflictpack authors.
# See LICENSE file for licensing details.

"""Exhaustive solvers computing exact optima of small instances."""
import dataclasses
import itertools
import logging
import math
import typing

from conflictpack.exceptions import OracleLimitError
from conflictpack.instances import (
    BetweennessSet,
    Core,
    DenseTripletSet,
    Tournament,
    Triple,
    format_arc,
    format_betweenness_triplet,
    format_rooted_triplet,
)
from conflictpack.trees import Nested, RootedBinaryTree

logger = logging.getLogger(__name__)

FAST_DP_LIMIT = 20
FAST_PERMUTATION_LIMIT = 9
RTI_LIMIT = 8
BTW_LIMIT = 8


@dataclasses.dataclass(frozen=True)
class ExactResult:
    """An optimal solution.

    Attributes:
        optimum: the minimum number of edits.
        arrangement: an optimal ordering, or an optimal tree for RTI.
        edits: the reversed arcs ``(tail, head)``, or the edited triples with their new
            choice, that make the instance agree with ``arrangement``.
    """

    optimum: int
    arrangement: tuple[int, ...] | RootedBinaryTree
    edits: tuple[typing.Any, ...]

    def witness_lines(self) -> list[str]:
        """Render the witness.

        Returns:
            A ``witness`` line with the arrangement, then one ``edit`` line per edit.
        """
        if isinstance(self.arrangement, RootedBinaryTree):
            rendered = self.arrangement.newick()
            edits = [format_rooted_triplet(t, c) for t, c in self.edits]
        else:
            rendered = " ".join(map(str, self.arrangement))
            if self.edits and len(self.edits[0]) == 2 and isinstance(self.edits[0][0], int):
                edits = [format_arc(arc) for arc in self.edits]
            else:
                edits = [format_betweenness_triplet(t, m) for t, m in self.edits]
        return [f"witness {rendered}", *(f"edit {e}" for e in edits)]


def _check_limit(n: int, limit: int, name: str) -> None:
    if n > limit:
        raise OracleLimitError(f"{name} handles at most {limit} vertices, got {n}")


def _fast_result(t: Tournament, ordering: typing.Sequence[int]) -> ExactResult:
    """Collect the arcs going backward along an ordering.

    Args:
        t: the tournament.
        ordering: an ordering of its vertices.

    Returns:
        The ordering with its backward arcs ``(tail, head)``, sorted.
    """
    position = {v: i for i, v in enumerate(ordering)}
    edits = tuple(sorted(arc for arc in t.arcs() if position[arc[0]] > position[arc[1]]))
    return ExactResult(optimum=len(edits), arrangement=tuple(ordering), edits=edits)


def exact_fast_dp(t: Tournament) -> ExactResult:
    """Solve FAST by dynamic programming over vertex subsets.

    ``cost[S]`` is the least number of backward arcs of an ordering of ``S`` placed
    first; the last vertex ``v`` of such an ordering pays one backward arc per vertex of
    ``S`` it beats.

    Args:
        t: the tournament, at most 20 vertices.

    Returns:
        The optimum with an optimal ordering and its backward arcs.

    Raises:
        OracleLimitError: if the tournament is too large.
    """
    _check_limit(t.n, FAST_DP_LIMIT, "the FAST subset oracle")
    n = t.n
    labels = t.vertices
    beaten = [
        sum(1 << j for j in range(n) if j != i and t.beats(labels[i], labels[j])) for i in range(n)
    ]
    cost = [0] * (1 << n)
    last = [0] * (1 << n)
    for subset in range(1, 1 << n):
        best = math.inf
        for i in range(n):
            if subset >> i & 1:
                rest = subset & ~(1 << i)
                candidate = cost[rest] + (beaten[i] & rest).bit_count()
                if candidate < best:
                    best, last[subset] = candidate, i
        cost[subset] = typing.cast(int, best)
    ordering: list[int] = []
    subset = (1 << n) - 1
    while subset:
        ordering.append(labels[last[subset]])
        subset &= ~(1 << last[subset])
    ordering.reverse()
    logger.debug("FAST optimum %d on %d vertices", cost[(1 << n) - 1], n)
    return _fast_result(t, ordering)


def exact_fast_permutations(t: Tournament) -> ExactResult:
    """Solve FAST by trying every ordering.

    Args:
        t: the tournament, at most 9 vertices.

    Returns:
        The optimum with the first optimal ordering in lexicographic order.

    Raises:
        OracleLimitError: if the tournament is too large.
    """
    _check_limit(t.n, FAST_PERMUTATION_LIMIT, "the FAST permutation oracle")
    arcs = list(t.arcs())
    best: tuple[int, ...] = t.vertices
    best_cost = math.inf
    for ordering in itertools.permutations(t.vertices):
        position = {v: i for i, v in enumerate(ordering)}
        backward = sum(position[tail] > position[head] for tail, head in arcs)
        if backward < best_cost:
            best, best_cost = ordering, backward
    return _fast_result(t, best)


def _subtree_leaves(nested: Nested) -> frozenset[int]:
    if isinstance(nested, int):
        return frozenset((nested,))
    return _subtree_leaves(nested[0]) | _subtree_leaves(nested[1])


def _grafts(nested: Nested, leaf: int) -> typing.Iterator[tuple[Nested, frozenset[int]]]:
    """Insert a leaf on every edge of a nested tree.

    Args:
        nested: the tree.
        leaf: the new leaf.

    Yields:
        The grown tree and the leaves below the edge the new leaf was hung on.
    """
    yield (nested, leaf), _subtree_leaves(nested)
    if isinstance(nested, tuple):
        left, right = nested
        for grown, below in _grafts(left, leaf):
            yield (grown, right), below
        for grown, below in _grafts(right, leaf):
            yield (left, grown), below


def exact_rti_enumerate(r: DenseTripletSet) -> ExactResult:
    """Solve dense RTI by enumerating every binary tree over the leaves.

    Trees are grown by inserting the leaves in ascending order on every edge. Inserting a
    leaf never changes the triplets displayed on earlier leaves, so the count of
    inconsistent triplets of a partial tree only grows and branches reaching the best
    count found so far are cut.

    Args:
        r: the triplet set, at most 8 leaves.

    Returns:
        The optimum with an optimal tree and the triplets it edits.

    Raises:
        OracleLimitError: if the set is too large.
    """
    _check_limit(r.n, RTI_LIMIT, "the RTI oracle")
    leaves = list(r.vertices)
    best: dict[str, typing.Any] = {"cost": math.inf, "tree": None}

    def grow(nested: Nested, placed: list[int], topology: dict[Triple, int], cost: int) -> None:
        if cost >= best["cost"]:
            return
        if len(placed) == len(leaves):
            best.update(cost=cost, tree=nested)
            return
        leaf = leaves[len(placed)]
        for grown, below in _grafts(nested, leaf):
            rep = min(below)
            added: dict[Triple, int] = {}
            extra = 0
            for a, b in itertools.combinations(placed, 2):
                inside = (a in below) + (b in below)
                if inside == 2:
                    isolated = leaf
                elif inside == 1:
                    isolated = b if a in below else a
                else:
                    isolated = topology[_key(rep, a, b)]
                    isolated = leaf if isolated == rep else isolated
                added[_key(leaf, a, b)] = isolated
                extra += r.chosen(leaf, a, b) != isolated
            grow(grown, [*placed, leaf], {**topology, **added}, cost + extra)

    if leaves:
        grow(leaves[0], leaves[:1], {}, 0)
    tree = RootedBinaryTree.from_nested(best["tree"])
    edits = tuple(
        (t, tree.topology(*t)) for t in r.triples() if r.choice[t] != tree.topology(*t)
    )
    logger.debug("RTI optimum %d on %d leaves", len(edits), r.n)
    return ExactResult(optimum=len(edits), arrangement=tree, edits=edits)


def _key(a: int, b: int, c: int) -> Triple:
    return typing.cast(Triple, tuple(sorted((a, b, c))))


def exact_btw_enumerate(b: BetweennessSet) -> ExactResult:
    """Solve dense BTW by enumerating every ordering up to reversal.

    Args:
        b: the betweenness set, at most 8 vertices.

    Returns:
        The optimum with an optimal ordering and the triplets it edits.

    Raises:
        OracleLimitError: if the set is too large.
    """
    _check_limit(b.n, BTW_LIMIT, "the BTW oracle")
    triples = list(b.choice.items())
    best: tuple[int, ...] = b.vertices
    best_cost = math.inf
    for ordering in itertools.permutations(b.vertices):
        if len(ordering) > 1 and ordering[0] > ordering[-1]:
            continue
        position = {v: i for i, v in enumerate(ordering)}
        missed = 0
        for triple, middle in triples:
            low, high = sorted(position[v] for v in triple if v != middle)
            missed += not low < position[middle] < high
            if missed >= best_cost:
                break
        if missed < best_cost:
            best, best_cost = ordering, missed
    position = {v: i for i, v in enumerate(best)}
    edits = []
    for triple, middle in sorted(triples):
        along = sorted(triple, key=position.__getitem__)[1]
        if along != middle:
            edits.append((triple, along))
    return ExactResult(optimum=len(edits), arrangement=best, edits=tuple(edits))


def solve_exact(core: Core) -> ExactResult:
    """Solve any instance core with its exact oracle.

    Args:
        core: the instance core.

    Returns:
        The optimal solution.
    """
    if isinstance(core, Tournament):
        return exact_fast_dp(core)
    if isinstance(core, DenseTripletSet):
        return exact_rti_enumerate(core)
    return exact_btw_enumerate(core)
