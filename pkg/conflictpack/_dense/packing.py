# Copyright 2024 conflictpack authors.
# See LICENSE file for licensing details.

"""Four-vertex conflicts and seed-based conflict packings of dense triple collections.

Rooted triplet sets and betweenness sets both choose one member per triple, and both are
consistent exactly when every 4-subset is. A 4-subset is summarised by its signature: the
local index of the chosen member on each of its four triples, taken in lexicographic
order. A problem is described by the set of signatures of its consistent 4-subsets.
"""
import dataclasses
import itertools
import logging
import typing
from collections.abc import Iterable

from conflictpack.exceptions import PreconditionError
from conflictpack.instances import BetweennessSet, DenseTripletSet

logger = logging.getLogger(__name__)

DenseCore = DenseTripletSet | BetweennessSet
Quad = tuple[int, int, int, int]
Signature = tuple[int, int, int, int]

QUAD_TRIPLES: tuple[tuple[int, int, int], ...] = tuple(itertools.combinations(range(4), 3))


def signature(core: DenseCore, quad: Quad) -> Signature:
    """Return the signature of a sorted 4-subset.

    Args:
        core: the dense collection.
        quad: four vertices in increasing order.

    Returns:
        The local index of the chosen member of each triple of ``quad``.
    """
    return typing.cast(
        Signature,
        tuple(
            quad.index(core.choice[(quad[i], quad[j], quad[h])]) for i, j, h in QUAD_TRIPLES
        ),
    )


def signature_table(arrangements: Iterable[typing.Callable[[int, int, int], int]]) -> frozenset:
    """Collect the signatures of consistent 4-subsets.

    Args:
        arrangements: one choice function per consistent arrangement of ``0..3``.

    Returns:
        The consistent signatures.
    """
    return frozenset(
        tuple(choose(i, j, h) for i, j, h in QUAD_TRIPLES) for choose in arrangements
    )


def sorted_quad(vertices: Iterable[int]) -> Quad:
    """Sort four vertices.

    Args:
        vertices: four vertices.

    Returns:
        The sorted quad.
    """
    return typing.cast(Quad, tuple(sorted(vertices)))


def is_conflict(core: DenseCore, quad: Iterable[int], consistent: frozenset) -> bool:
    """Tell whether a 4-subset induces an inconsistent sub-collection.

    Args:
        core: the dense collection.
        quad: four vertices.
        consistent: the consistent signatures of the problem.

    Returns:
        True if the 4-subset is a conflict.
    """
    return signature(core, sorted_quad(quad)) not in consistent


def is_seed(core: DenseCore, quad: Iterable[int], member: int, consistent: frozenset) -> bool:
    """Tell whether a member of a conflict is a seed.

    ``member`` is a seed when the 4-subset stays a conflict whichever member is chosen
    on the triple formed by the three other vertices.

    Args:
        core: the dense collection.
        quad: a 4-subset that is a conflict.
        member: a vertex of ``quad``.
        consistent: the consistent signatures of the problem.

    Returns:
        True if ``member`` is a seed.

    Raises:
        PreconditionError: if ``quad`` is not a conflict or ``member`` is not in it.
    """
    ordered = sorted_quad(quad)
    if member not in ordered:
        raise PreconditionError(f"{member} is not a member of {ordered}")
    if not is_conflict(core, ordered, consistent):
        raise PreconditionError(f"{ordered} is not a conflict")
    base = list(signature(core, ordered))
    position = QUAD_TRIPLES.index(tuple(i for i in range(4) if ordered[i] != member))
    for local in QUAD_TRIPLES[position]:
        base[position] = local
        if tuple(base) in consistent:
            return False
    return True


def all_conflicts(core: DenseCore, consistent: frozenset) -> list[Quad]:
    """List every 4-subset that is a conflict, in lexicographic order.

    Args:
        core: the dense collection.
        consistent: the consistent signatures of the problem.

    Returns:
        The conflicts.
    """
    return [
        quad
        for quad in itertools.combinations(core.vertices, 4)
        if signature(core, typing.cast(Quad, quad)) not in consistent
    ]


def find_conflict(core: DenseCore, consistent: frozenset) -> Quad | None:
    """Return the lexicographically first conflict.

    Args:
        core: the dense collection.
        consistent: the consistent signatures of the problem.

    Returns:
        The first conflict, None if the collection is consistent.
    """
    for quad in itertools.combinations(core.vertices, 4):
        if signature(core, typing.cast(Quad, quad)) not in consistent:
            return typing.cast(Quad, quad)
    return None


def irrelevant_vertices(core: DenseCore, consistent: frozenset) -> list[int]:
    """List the vertices that belong to no conflict.

    Args:
        core: the dense collection.
        consistent: the consistent signatures of the problem.

    Returns:
        The vertices in no conflict, ascending.
    """
    relevant = {v for quad in all_conflicts(core, consistent) for v in quad}
    return [v for v in core.vertices if v not in relevant]


@dataclasses.dataclass(frozen=True)
class DensePacking:
    """A seed-based conflict packing.

    Every conflict after the first shares at most two vertices with the previous ones, or
    exactly three and its new vertex is a seed. No further conflict can be appended.

    Attributes:
        conflicts: the conflicts, in packing order.
        covered: the vertices of the conflicts.
    """

    conflicts: tuple[Quad, ...]
    covered: frozenset[int]

    def __len__(self) -> int:
        """Return the number of conflicts."""
        return len(self.conflicts)


def seed_packing(core: DenseCore, consistent: frozenset) -> DensePacking:
    """Compute a maximal seed-based conflict packing.

    The conflicts are scanned in lexicographic order, repeatedly until no conflict can be
    appended. A conflict is appended when it shares at most two vertices with the covered
    set, or when it has exactly one new vertex and that vertex is a seed.

    Args:
        core: the dense collection.
        consistent: the consistent signatures of the problem.

    Returns:
        The packing.
    """
    candidates = all_conflicts(core, consistent)
    chosen: list[Quad] = []
    covered: set[int] = set()
    extended = True
    while extended:
        extended = False
        for quad in candidates:
            if quad in chosen:
                continue
            new = [v for v in quad if v not in covered]
            if len(new) >= 2 or (
                len(new) == 1 and is_seed(core, quad, new[0], consistent)
            ):
                chosen.append(quad)
                covered.update(quad)
                extended = True
    logger.debug("seed packing of %d conflicts covering %d vertices", len(chosen), len(covered))
    return DensePacking(conflicts=tuple(chosen), covered=frozenset(covered))


@dataclasses.dataclass(frozen=True)
class Conflict:
    """A 4-vertex conflict reported instead of a consistent arrangement.

    Attributes:
        quad: the four vertices, ascending.
    """

    quad: Quad
