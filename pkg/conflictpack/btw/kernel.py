# Copyright 2024 conflictpack authors.
# See LICENSE file for licensing details.

"""Small-budget solver and linear kernel for Betweenness in Tournaments.

A dense betweenness set is consistent exactly when none of its 4-vertex subsets is a
conflict. With a seed-based conflict packing, the unpacked vertices follow their consistent
ordering and every packed vertex slots into a unique gap, so that inconsistent triplets
only involve packed vertices. When ``k < n/5`` enough vertices stay outside every
inconsistent triplet to turn each of them into the centre of a sunflower of more than
``k`` conflicts, and each one has to be edited along the ordering. Otherwise the instance
already has at most ``5k`` vertices.
"""
import dataclasses
import functools
import itertools
import logging
import typing

from conflictpack._dense import packing
from conflictpack.exceptions import KernelInvariantError, PreconditionError
from conflictpack.instances import (
    BetweennessSet,
    KernelReport,
    KernelVerdict,
    ParamInstance,
    ProblemKind,
    RuleApplication,
    Triple,
    format_betweenness_triplet,
)

logger = logging.getLogger(__name__)


def _middle_by(order: typing.Sequence[int]) -> typing.Callable[[int, int, int], int]:
    position = {v: i for i, v in enumerate(order)}
    return lambda a, b, c: sorted((a, b, c), key=position.__getitem__)[1]


CONSISTENT_QUADS = packing.signature_table(
    _middle_by(order) for order in itertools.permutations(range(4))
)

TRIVIAL_NO = ParamInstance(
    kind=ProblemKind.BTW,
    payload=BetweennessSet(
        vertices=(0, 1, 2, 3),
        choice={(0, 1, 2): 1, (0, 1, 3): 1, (0, 2, 3): 2, (1, 2, 3): 1},
    ),
    k=0,
)


@dataclasses.dataclass(frozen=True)
class OrderedBtw:
    """A betweenness set together with an ordering of its vertices.

    Attributes:
        b: the betweenness set.
        sigma: the vertex ordering.
    """

    b: BetweennessSet
    sigma: tuple[int, ...]

    def __post_init__(self) -> None:
        """Check that sigma orders the vertices of b.

        Raises:
            ValueError: if sigma is not a permutation of the vertices.
        """
        if tuple(sorted(self.sigma)) != self.b.vertices:
            raise ValueError(f"{self.sigma} is not an ordering of {self.b.vertices}")

    @functools.cached_property
    def middle(self) -> typing.Callable[[int, int, int], int]:
        """Return the middle vertex of three vertices along sigma."""
        return _middle_by(self.sigma)


class BtwPacking(packing.DensePacking):
    """A seed-based packing of 4-vertex conflicts."""


def is_conflict4(b: BetweennessSet, quad: typing.Iterable[int]) -> bool:
    """Tell whether four vertices carry inconsistent betweenness triplets.

    Args:
        b: the betweenness set.
        quad: four vertices.

    Returns:
        True if no ordering satisfies the four triplets.
    """
    return packing.is_conflict(b, quad, CONSISTENT_QUADS)


def inconsistent_triplets(ob: OrderedBtw) -> list[Triple]:
    """List the triples whose middle disagrees with the ordering.

    Args:
        ob: the ordered set.

    Returns:
        The sorted triples, in lexicographic order.
    """
    return [t for t in ob.b.triples() if ob.b.choice[t] != ob.middle(*t)]


def _insertion_index(b: BetweennessSet, sigma: typing.Sequence[int], d: int) -> int | None:
    """Find where a vertex goes in an ordering, reading the triplets it forms with anchors.

    The triplet on the first and last vertices tells whether ``d`` goes before, after or
    inside; inside, consecutive pairs are read from the front until ``d`` lies between.

    Args:
        b: the betweenness set.
        sigma: an ordering of at least two vertices.
        d: a vertex outside ``sigma``.

    Returns:
        The index ``d`` is inserted at, None when the anchors disagree.
    """
    first, last = sigma[0], sigma[-1]
    middle = b.chosen(first, last, d)
    if middle == first:
        return 0
    if middle == last:
        return len(sigma)
    for i in range(len(sigma) - 1):
        middle = b.chosen(sigma[i], sigma[i + 1], d)
        if middle == d:
            return i + 1
        if middle != sigma[i + 1]:
            return None
    return None


def _fits_at(b: BetweennessSet, sigma: typing.Sequence[int], d: int, index: int) -> bool:
    """Tell whether inserting a vertex at an index satisfies its triplets with ``sigma``.

    Args:
        b: the betweenness set.
        sigma: an ordering.
        d: a vertex outside ``sigma``.
        index: the insertion index.

    Returns:
        True if every triplet made of ``d`` and two vertices of ``sigma`` is satisfied.
    """
    for i, j in itertools.combinations(range(len(sigma)), 2):
        expected = sigma[i] if index <= i else sigma[j] if index > j else d
        if b.chosen(sigma[i], sigma[j], d) != expected:
            return False
    return True


def consistent_ordering_btw(b: BetweennessSet) -> tuple[int, ...] | packing.Conflict:
    """Compute the ordering satisfying every triplet, or find a conflict.

    Vertices are inserted one at a time. The ordering is oriented so that its first vertex
    is smaller than its last.

    Args:
        b: the betweenness set.

    Returns:
        The ordering when the set is consistent, otherwise a 4-vertex conflict.

    Raises:
        KernelInvariantError: if the set is inconsistent without a 4-vertex conflict.
    """
    vertices = list(b.vertices)
    sigma: list[int] = vertices[:2]
    if len(vertices) >= 3:
        middle = b.choice[(vertices[0], vertices[1], vertices[2])]
        ends = [v for v in vertices[:3] if v != middle]
        sigma = [ends[0], middle, ends[1]]
        for d in vertices[3:]:
            index = _insertion_index(b, sigma, d)
            if index is None:
                break
            sigma.insert(index, d)
    ordered = OrderedBtw(b=b, sigma=tuple(sigma)) if len(sigma) == b.n else None
    if ordered is None or inconsistent_triplets(ordered):
        conflict = packing.find_conflict(b, CONSISTENT_QUADS)
        if conflict is None:
            logger.error("inconsistent betweenness set without a 4-vertex conflict")
            raise KernelInvariantError("inconsistent betweenness set without a conflict")
        return packing.Conflict(quad=conflict)
    if sigma and sigma[0] > sigma[-1]:
        sigma.reverse()
    return tuple(sigma)


def conflict_packing_btw(b: BetweennessSet) -> BtwPacking:
    """Compute a maximal seed-based packing of 4-vertex conflicts.

    Args:
        b: the betweenness set.

    Returns:
        The packing.
    """
    found = packing.seed_packing(b, CONSISTENT_QUADS)
    return BtwPacking(conflicts=found.conflicts, covered=found.covered)


def _order_gap(b: BetweennessSet, bucket: list[int], u: int | None, w: int | None) -> list[int]:
    """Order the packed vertices sharing the gap between two good vertices.

    With a right neighbour ``w``, ``x`` comes first when ``y`` lies between ``x`` and
    ``w``; at the end of the ordering, ``x`` comes first when it lies between ``u`` and
    ``y``.

    Args:
        b: the betweenness set.
        bucket: the packed vertices of the gap.
        u: the good vertex before the gap, if any.
        w: the good vertex after the gap, if any.

    Returns:
        The vertices in order.

    Raises:
        KernelInvariantError: if the precedence is not a strict total order.
    """

    def precedes(x: int, y: int) -> bool:
        if w is not None:
            return b.chosen(x, y, w) == y
        return b.chosen(typing.cast(int, u), x, y) == x

    rank = {x: sum(precedes(y, x) for y in bucket if y != x) for x in bucket}
    total = all(precedes(x, y) != precedes(y, x) for x, y in itertools.combinations(bucket, 2))
    if not total or sorted(rank.values()) != list(range(len(bucket))):
        logger.error("vertices %s are not totally ordered in their gap", bucket)
        raise KernelInvariantError(f"vertices {bucket} are not totally ordered in their gap")
    return sorted(bucket, key=rank.__getitem__)


def _single_good_ordering(b: BetweennessSet, covered: list[int], g: int) -> list[int]:
    """Order the vertices around the only good vertex.

    Two packed vertices lie on the same side of ``g`` unless ``g`` is their middle; the
    side holding the smallest packed vertex goes first.

    Args:
        b: the betweenness set.
        covered: the packed vertices, ascending.
        g: the good vertex.

    Returns:
        The ordering.

    Raises:
        KernelInvariantError: if the sides are not well defined.
    """
    if not covered:
        return [g]
    left = [a for a in covered if a == covered[0] or b.chosen(covered[0], a, g) != g]
    right = [a for a in covered if a not in left]
    crossing = all(b.chosen(x, y, g) == g for x in left for y in right)
    same_side = all(b.chosen(x, y, g) != g for x, y in itertools.combinations(right, 2))
    if not crossing or not same_side:
        logger.error("packed vertices do not split around %d", g)
        raise KernelInvariantError(f"packed vertices do not split around {g}")
    return [*_order_gap(b, left, None, g), g, *_order_gap(b, right, g, None)]


def nice_ordering_btw(b: BetweennessSet, p: BtwPacking) -> OrderedBtw:
    """Slot the packed vertices into the consistent ordering of the good vertices.

    Args:
        b: the betweenness set.
        p: a maximal packing of ``b``.

    Returns:
        An ordering where every inconsistent triplet only involves packed vertices.

    Raises:
        KernelInvariantError: if a packed vertex has no locus, a gap is not totally
            ordered, or an inconsistent triplet involves a good vertex.
    """
    good = sorted(set(b.vertices) - p.covered)
    covered = sorted(p.covered)
    sigma: list[int]
    if not good:
        sigma = covered
    elif len(good) == 1:
        sigma = _single_good_ordering(b, covered, good[0])
    else:
        good_order = consistent_ordering_btw(b.induced(good))
        if isinstance(good_order, packing.Conflict):
            logger.error("good vertices hold the conflict %s", good_order.quad)
            raise KernelInvariantError(f"good vertices hold the conflict {good_order.quad}")
        gaps: dict[int, list[int]] = {}
        for a in covered:
            index = _insertion_index(b, good_order, a)
            if index is None or not _fits_at(b, good_order, a, index):
                logger.error("vertex %d has no locus among good vertices", a)
                raise KernelInvariantError(f"vertex {a} has no locus among good vertices")
            gaps.setdefault(index, []).append(a)
        sigma = []
        for index in range(len(good_order) + 1):
            before = good_order[index - 1] if index > 0 else None
            after = good_order[index] if index < len(good_order) else None
            sigma.extend(_order_gap(b, gaps.get(index, []), before, after))
            if after is not None:
                sigma.append(after)
    ob = OrderedBtw(b=b, sigma=tuple(sigma))
    stray = [t for t in inconsistent_triplets(ob) if not p.covered.issuperset(t)]
    if stray:
        logger.error("inconsistent triplets %s involve good vertices", stray)
        raise KernelInvariantError("inconsistent triplets involve good vertices")
    return ob


def find_simple_sunflower(ob: OrderedBtw, k: int) -> tuple[Triple, tuple[int, ...]] | None:
    """Find an inconsistent triplet together with ``k + 1`` conflicts sharing only it.

    Each petal adds one vertex lying in no inconsistent triplet, so the triplet is the only
    inconsistent one of the petal and the petal is a conflict.

    Args:
        ob: a nice ordering.
        k: the budget.

    Returns:
        The centre and the ``k + 1`` petal vertices, None if the ordering is consistent.

    Raises:
        PreconditionError: if fewer than ``k + 1`` vertices lie in no inconsistent triplet.
        KernelInvariantError: if a petal is not a conflict.
    """
    bad = inconsistent_triplets(ob)
    if not bad:
        return None
    involved = {v for t in bad for v in t}
    outside = [v for v in ob.b.vertices if v not in involved]
    if len(outside) < k + 1:
        raise PreconditionError(
            f"{len(outside)} vertices outside inconsistent triplets, need {k + 1}"
        )
    centre, petals = bad[0], tuple(outside[: k + 1])
    for d in petals:
        if not is_conflict4(ob.b, (*centre, d)):
            logger.error("petal %s + %d is not a conflict", centre, d)
            raise KernelInvariantError(f"petal {centre} + {d} is not a conflict")
    return centre, petals


def _small_k_steps(
    b: BetweennessSet, k: int
) -> tuple[dict[Triple, int] | None, list[RuleApplication]]:
    """Run the small-budget solver, recording each centre edit.

    Args:
        b: the betweenness set.
        k: the budget, below ``n/5``.

    Returns:
        The edition or None for No, and the Rule 5 applications.

    Raises:
        PreconditionError: if ``k`` is not below ``n/5``.
        KernelInvariantError: if the edition does not make the set consistent.
    """
    if not 5 * k < b.n:
        raise PreconditionError(f"the small-budget solver needs k < n/5, got k={k} n={b.n}")
    found = conflict_packing_btw(b)
    if len(found) > k or len(found.covered) > 4 * k:
        logger.info("packing of %d conflicts exceeds budget %d", len(found), k)
        return None, []
    ob = nice_ordering_btw(b, found)
    edition: dict[Triple, int] = {}
    steps: list[RuleApplication] = []
    remaining = k
    while sunflower := find_simple_sunflower(ob, remaining):
        if remaining == 0:
            return None, steps
        centre = sunflower[0]
        edited = ob.b.with_choices({centre: ob.middle(*centre)})
        edition[centre] = ob.middle(*centre)
        logger.info("RULE5 edited %s", centre)
        steps.append(
            RuleApplication(
                rule="RULE5",
                objects=(format_betweenness_triplet(centre, edition[centre]),),
                dk=1,
                before=ob.b,
                after=edited,
            )
        )
        ob = OrderedBtw(b=edited, sigma=ob.sigma)
        remaining -= 1
    if isinstance(consistent_ordering_btw(b.with_choices(edition)), packing.Conflict):
        logger.error("edition %s leaves the set inconsistent", edition)
        raise KernelInvariantError("edition leaves the set inconsistent")
    return edition, steps


def solve_small_k(b: BetweennessSet, k: int) -> dict[Triple, int] | None:
    """Solve an instance whose budget is below a fifth of its vertex count.

    Args:
        b: the betweenness set.
        k: the budget, below ``n/5``.

    Returns:
        The triples to edit with their new middle, or None if no edition of size ``k``
        exists.
    """
    return _small_k_steps(b, k)[0]


def kernelize_btw(inst: ParamInstance) -> KernelReport:
    """Reduce a BTW instance to at most ``5k`` vertices.

    Instances with ``k < n/5`` are solved outright: a Yes-instance becomes the empty
    instance with the unused budget, a No-instance the canonical conflict. Other instances
    are returned unchanged.

    Args:
        inst: a BTW instance.

    Returns:
        The kernel and its rule trace.

    Raises:
        PreconditionError: if the instance is not a BTW instance.
    """
    if not isinstance(inst.payload, BetweennessSet):
        raise PreconditionError(f"expected a BTW instance, got {inst.kind.value}")
    b, k = inst.payload, inst.k
    if not 5 * k < b.n:
        return KernelReport(
            original=inst,
            reduced=ParamInstance(kind=ProblemKind.BTW, payload=b.compact(), k=k),
            rule_trace=(),
            verdict=KernelVerdict.REDUCED,
        )
    edition, steps = _small_k_steps(b, k)
    if edition is None:
        steps.append(RuleApplication(rule="SOLVE", detail="no"))
        return KernelReport.answer_no(
            inst, TRIVIAL_NO, steps, k - sum(step.dk for step in steps), "small-k-solver"
        )
    objects = tuple(format_betweenness_triplet(t, m) for t, m in sorted(edition.items()))
    steps.append(RuleApplication(rule="SOLVE", objects=objects))
    return KernelReport(
        original=inst,
        reduced=ParamInstance(
            kind=ProblemKind.BTW,
            payload=BetweennessSet(vertices=(), choice={}),
            k=k - len(edition),
        ),
        rule_trace=tuple(steps),
        verdict=KernelVerdict.REDUCED,
    )
