# Copyright 2024 conflictpack authors.
# See LICENSE file for licensing details.

"""Linear leaf kernel for dense Rooted Triplet Inconsistency.

A dense triplet set is consistent exactly when none of its 4-leaf subsets is a conflict.
The kernel removes leaves in no conflict, packs conflicts with the seed rule, grafts the
packed leaves onto the tree of the remaining leaves (a nice tree, where every
inconsistent triplet only involves packed leaves), and edits the outer inconsistent
triplets of a tree partition cut along the paths to the free good leaves. The reduced
instance has at most ``5k`` leaves.
"""
import dataclasses
import functools
import itertools
import logging
import typing

import networkx as nx

from conflictpack._dense import packing
from conflictpack.combinatorics import (
    BipartiteGraph,
    HallViolator,
    match_into,
    maximum_matching,
    minimum_vertex_cover,
)
from conflictpack.exceptions import KernelInvariantError, PreconditionError
from conflictpack.instances import (
    DenseTripletSet,
    KernelReport,
    KernelVerdict,
    ParamInstance,
    ProblemKind,
    RuleApplication,
    Triple,
    format_rooted_triplet,
)
from conflictpack.trees import RootedBinaryTree, TreeEditor, all_trees

logger = logging.getLogger(__name__)

CONSISTENT_QUADS = packing.signature_table(tree.topology for tree in all_trees(range(4)))

TRIVIAL_NO = ParamInstance(
    kind=ProblemKind.RTI,
    payload=DenseTripletSet(
        vertices=(0, 1, 2, 3),
        choice={(0, 1, 2): 2, (0, 1, 3): 1, (0, 2, 3): 3, (1, 2, 3): 1},
    ),
    k=0,
)


@dataclasses.dataclass(frozen=True)
class EmbeddedInstance:
    """A dense triplet set together with a tree over the same leaves.

    Attributes:
        r: the triplet set.
        tree: the tree.
    """

    r: DenseTripletSet
    tree: RootedBinaryTree

    def __post_init__(self) -> None:
        """Check that the tree and the set share their leaves.

        Raises:
            ValueError: if the leaf sets differ.
        """
        if self.tree.leaves != frozenset(self.r.vertices):
            raise ValueError("tree and triplet set have different leaves")


class RtiPacking(packing.DensePacking):
    """A seed-based packing of 4-leaf conflicts."""


@dataclasses.dataclass(frozen=True)
class TreePartition:
    """A partition of the leaves into the leaf sets of disjoint subtrees.

    Attributes:
        roots: the subtree roots.
        parts: the leaf set below each root.
    """

    roots: tuple[int, ...]
    parts: tuple[frozenset[int], ...]

    @functools.cached_property
    def block(self) -> dict[int, int]:
        """Map every leaf to the index of its part."""
        return {leaf: i for i, part in enumerate(self.parts) for leaf in part}

    def is_outer(self, triple: typing.Iterable[int]) -> bool:
        """Tell whether a triple meets at least two parts.

        Args:
            triple: leaves.

        Returns:
            True if the leaves are not all in one part.
        """
        return len({self.block[leaf] for leaf in triple}) > 1


def is_conflict4(r: DenseTripletSet, quad: typing.Iterable[int]) -> bool:
    """Tell whether four leaves carry inconsistent triplets.

    Args:
        r: the triplet set.
        quad: four leaves.

    Returns:
        True if no tree displays the four triplets.
    """
    return packing.is_conflict(r, quad, CONSISTENT_QUADS)


def all_conflicts(r: DenseTripletSet) -> list[packing.Quad]:
    """List the 4-leaf conflicts in lexicographic order.

    Args:
        r: the triplet set.

    Returns:
        The conflicts.
    """
    return packing.all_conflicts(r, CONSISTENT_QUADS)


def find_conflict4(r: DenseTripletSet) -> packing.Quad | None:
    """Return the first 4-leaf conflict.

    Args:
        r: the triplet set.

    Returns:
        The conflict, None if the set is consistent.
    """
    return packing.find_conflict(r, CONSISTENT_QUADS)


def is_seed(r: DenseTripletSet, c: typing.Iterable[int], a: int) -> bool:
    """Tell whether a leaf is a seed of a conflict.

    Args:
        r: the triplet set.
        c: a 4-leaf conflict.
        a: a leaf of ``c``.

    Returns:
        True if ``c`` stays a conflict for every triplet on the three other leaves.
    """
    return packing.is_seed(r, c, a, CONSISTENT_QUADS)


def consistent_choice(tree: RootedBinaryTree, triple: Triple) -> int:
    """Return the isolated leaf of the triplet a tree displays on a triple.

    Args:
        tree: the tree.
        triple: three of its leaves.

    Returns:
        The isolated leaf.
    """
    return tree.topology(*triple)


def _build(r: DenseTripletSet, leaves: list[int], editor: TreeEditor) -> int | None:
    """Build the subtree over some leaves, splitting at the root like BUILD does.

    Args:
        r: the triplet set.
        leaves: sorted leaves.
        editor: the editor receiving the subtree.

    Returns:
        The root of the subtree, None if the leaves cannot be split.
    """
    if len(leaves) == 1:
        return leaves[0]
    graph = nx.Graph()
    graph.add_nodes_from(leaves)
    for triple in itertools.combinations(leaves, 3):
        isolated = r.choice[triple]
        graph.add_edge(*(leaf for leaf in triple if leaf != isolated))
    components = sorted(sorted(component) for component in nx.connected_components(graph))
    if len(components) != 2:
        return None
    left = _build(r, components[0], editor)
    right = _build(r, components[1], editor)
    if left is None or right is None:
        return None
    return editor.join(left, right)


def build_tree(r: DenseTripletSet) -> RootedBinaryTree | packing.Conflict:
    """Build the unique tree displaying every triplet, or find a conflict.

    Args:
        r: the triplet set.

    Returns:
        The tree when the set is consistent, otherwise a 4-leaf conflict.

    Raises:
        KernelInvariantError: if the set is inconsistent without a 4-leaf conflict.
    """
    editor = TreeEditor()
    if r.vertices:
        editor.root = _build(r, list(r.vertices), editor)
        if editor.root is None:
            conflict = find_conflict4(r)
            if conflict is None:
                logger.error("inconsistent triplet set without a 4-leaf conflict")
                raise KernelInvariantError("inconsistent triplet set without a 4-leaf conflict")
            return packing.Conflict(quad=conflict)
    return editor.freeze()


def rule_irrelevant_leaf(r: DenseTripletSet) -> tuple[DenseTripletSet, tuple[int, ...]]:
    """Remove every leaf that belongs to no 4-leaf conflict (Rule 3).

    Args:
        r: the triplet set.

    Returns:
        The reduced set and the removed leaves, ascending.
    """
    removed: list[int] = []
    while irrelevant := packing.irrelevant_vertices(r, CONSISTENT_QUADS):
        removed.extend(irrelevant)
        r = r.induced(v for v in r.vertices if v not in irrelevant)
    return r, tuple(sorted(removed))


def conflict_packing_rti(r: DenseTripletSet) -> RtiPacking:
    """Compute a maximal seed-based packing of 4-leaf conflicts.

    Args:
        r: the triplet set.

    Returns:
        The packing.
    """
    found = packing.seed_packing(r, CONSISTENT_QUADS)
    return RtiPacking(conflicts=found.conflicts, covered=found.covered)


def inconsistent_triplets(ei: EmbeddedInstance) -> list[Triple]:
    """List the triples whose triplet disagrees with the tree.

    Args:
        ei: the embedded instance.

    Returns:
        The sorted triples, in lexicographic order.
    """
    return [t for t in ei.r.triples() if ei.r.choice[t] != ei.tree.topology(*t)]


def span_rti(ei: EmbeddedInstance, t: Triple) -> frozenset[int]:
    """Return the leaves below the least common ancestor of a triple.

    Args:
        ei: the embedded instance.
        t: three leaves.

    Returns:
        The span of ``t``.
    """
    return ei.tree.leaves_below(ei.tree.lca(t))


def _fits_above(r: DenseTripletSet, tree: RootedBinaryTree, node: int, leaf: int) -> bool:
    """Tell whether hanging a leaf on the edge above a node agrees with every triplet.

    Only triplets made of ``leaf`` and two leaves of ``tree`` are checked. A leaf
    ``rep`` below ``node`` stands for ``leaf`` on pairs outside the subtree of ``node``.

    Args:
        r: the triplet set.
        tree: a tree over good leaves, consistent with ``r``.
        node: a node of the tree.
        leaf: a packed leaf.

    Returns:
        True if every such triplet is displayed.
    """
    below = tree.leaves_below(node)
    rep = min(below)
    for g1, g2 in itertools.combinations(sorted(tree.leaves), 2):
        inside = (g1 in below) + (g2 in below)
        if inside == 2:
            expected = leaf
        elif inside == 1:
            expected = g2 if g1 in below else g1
        else:
            expected = r.chosen(rep, g1, g2)
            expected = leaf if expected == rep else expected
        if r.chosen(leaf, g1, g2) != expected:
            return False
    return True


def _ordered_classes(r: DenseTripletSet, bucket: list[int], good: list[int]) -> list[list[int]]:
    """Split the leaves sharing a locus into classes ordered from the bottom up.

    ``a`` precedes ``b`` when some good leaf ``c`` has ``ac|b``; leaves preceding neither
    way share a class.

    Args:
        r: the triplet set.
        bucket: packed leaves sharing a locus.
        good: the good leaves.

    Returns:
        The classes, the one nearest the locus node first.

    Raises:
        KernelInvariantError: if the precedence is not a strict weak ordering.
    """
    precedes = {
        (a, b): any(r.chosen(a, b, c) == b for c in good)
        for a, b in itertools.permutations(bucket, 2)
    }
    for a, b in itertools.combinations(bucket, 2):
        if precedes[(a, b)] and precedes[(b, a)]:
            logger.error("leaves %d and %d precede each other", a, b)
            raise KernelInvariantError(f"leaves {a} and {b} precede each other")
    rank = {a: sum(precedes[(b, a)] for b in bucket if b != a) for a in bucket}
    classes: dict[int, list[int]] = {}
    for a in sorted(bucket):
        classes.setdefault(rank[a], []).append(a)
    ordered = [classes[key] for key in sorted(classes)]
    for (i, lower), (j, upper) in itertools.combinations(enumerate(ordered), 2):
        for a, b in itertools.product(lower, upper):
            if not precedes[(a, b)]:
                logger.error("locus classes %d and %d are not ordered", i, j)
                raise KernelInvariantError("precedence on a locus is not a strict weak ordering")
    return ordered


def nice_tree(r: DenseTripletSet, p: RtiPacking) -> EmbeddedInstance:
    """Graft the packed leaves onto the tree of the good leaves.

    Each packed leaf has a unique locus, an edge of the good tree (or the edge above its
    root) where it agrees with every triplet it forms with two good leaves. The edge is
    subdivided once per class of leaves sharing the locus, the class nearest the lower
    end first; a class of several leaves hangs as a left comb in ascending order.

    Args:
        r: the triplet set.
        p: a maximal packing of ``r``.

    Returns:
        The embedded instance.

    Raises:
        KernelInvariantError: if a packed leaf has no unique locus, or an inconsistent
            triplet involves a good leaf.
    """
    good = sorted(set(r.vertices) - p.covered)
    good_tree = build_tree(r.induced(good))
    if not isinstance(good_tree, RootedBinaryTree):
        logger.error("good leaves hold the conflict %s", good_tree)
        raise KernelInvariantError(f"good leaves hold the conflict {good_tree}")
    editor = TreeEditor(good_tree)
    if not good:
        if p.covered:
            editor.root = editor.comb(sorted(p.covered))
        return EmbeddedInstance(r=r, tree=editor.freeze())
    buckets: dict[int, list[int]] = {}
    for leaf in sorted(p.covered):
        loci = [node for node in good_tree.preorder() if _fits_above(r, good_tree, node, leaf)]
        if len(loci) != 1:
            logger.error("leaf %d has %d loci", leaf, len(loci))
            raise KernelInvariantError(f"leaf {leaf} has {len(loci)} loci")
        buckets.setdefault(loci[0], []).append(leaf)
    for node, bucket in buckets.items():
        current = node
        for cls in _ordered_classes(r, bucket, good):
            current = editor.attach_above(current, editor.comb(cls))
    ei = EmbeddedInstance(r=r, tree=editor.freeze())
    logger.debug("nice tree %s", ei.tree.newick())
    stray = [t for t in inconsistent_triplets(ei) if not p.covered.issuperset(t)]
    if stray:
        logger.error("inconsistent triplets %s involve good leaves", stray)
        raise KernelInvariantError("inconsistent triplets involve good leaves")
    return ei


def tree_partition_from_cover(
    ei: EmbeddedInstance, good_free: typing.Iterable[int]
) -> TreePartition:
    """Cut the tree along the paths from the root to some leaves.

    Args:
        ei: the embedded instance.
        good_free: a non-empty set of leaves.

    Returns:
        Singleton parts for the given leaves, and one part per subtree hanging off their
        paths to the root.
    """
    tree = ei.tree
    spine: set[int] = set()
    for leaf in good_free:
        node: int | None = leaf
        while node is not None and node not in spine:
            spine.add(node)
            node = tree.parent.get(node)
    roots: list[int] = []
    for node in tree.preorder():
        if node in spine:
            if node >= 0:
                roots.append(node)
        elif tree.parent.get(node) in spine:
            roots.append(node)
    return TreePartition(
        roots=tuple(roots), parts=tuple(tree.leaves_below(node) for node in roots)
    )


def find_safe_partition_rti(
    ei: EmbeddedInstance, p: RtiPacking, k: int
) -> tuple[TreePartition, tuple[Triple, ...]] | None:
    """Build a safe tree partition from a minimum vertex cover of the certificate graph.

    An inconsistent triplet ``t`` and a good leaf ``a`` in its span form a certificate:
    the four leaves are a conflict.

    Args:
        ei: a nice tree of a triplet set reduced by Rule 3.
        p: the packing the tree was built from.
        k: the budget.

    Returns:
        The partition and its outer inconsistent triplets, or None when the instance is
        within ``5k`` leaves or cannot hold a solution of size ``k``.

    Raises:
        KernelInvariantError: if the partition fails to be safe.
    """
    if ei.r.n <= 5 * k:
        return None
    bad = inconsistent_triplets(ei)
    good = sorted(set(ei.r.vertices) - p.covered)
    edges = frozenset((t, a) for t in bad for a in span_rti(ei, t) if a not in p.covered)
    graph = BipartiteGraph(left=tuple(bad), right=tuple(good), edges=edges)
    cover = minimum_vertex_cover(graph, maximum_matching(graph))
    if len(cover.matching) > k:
        return None
    good_free = [a for a in good if a not in cover.d2]
    if not good_free:
        return None
    partition = tree_partition_from_cover(ei, good_free)
    outer = tuple(t for t in bad if partition.is_outer(t))
    logger.debug(
        "tree partition into %d parts, %d outer inconsistent triplets",
        len(partition.parts),
        len(outer),
    )
    if not outer:
        logger.error("tree partition without outer inconsistent triplets")
        raise KernelInvariantError("tree partition without outer inconsistent triplets")
    if not set(outer) <= cover.d1:
        logger.error("outer inconsistent triplets escape the vertex cover")
        raise KernelInvariantError("outer inconsistent triplets escape the vertex cover")
    free, kept = set(good_free), set(outer)
    restricted = BipartiteGraph(
        left=outer,
        right=tuple(good_free),
        edges=frozenset(e for e in edges if e[0] in kept and e[1] in free),
    )
    matched = match_into(restricted, outer)
    if isinstance(matched, HallViolator):
        logger.error("outer triplets %s lack certificates", sorted(matched.members))
        raise KernelInvariantError("outer inconsistent triplets cannot be certified")
    for t, a in matched.items():
        if not is_conflict4(ei.r, (*t, a)):
            logger.error("certificate %s + %d is not a conflict", t, a)
            raise KernelInvariantError(f"certificate {t} + {a} is not a conflict")
    return partition, outer


def apply_safe_partition_rti(
    ei: EmbeddedInstance, tp: TreePartition, f: typing.Iterable[Triple], k: int
) -> tuple[DenseTripletSet, int]:
    """Edit the outer inconsistent triplets to agree with the tree (Rule 4).

    Args:
        ei: the embedded instance.
        tp: a safe tree partition.
        f: its outer inconsistent triplets.
        k: the budget.

    Returns:
        The edited set and the decreased budget.
    """
    updates = {t: consistent_choice(ei.tree, t) for t in f if tp.is_outer(t)}
    return ei.r.with_choices(updates), k - len(updates)


def kernelize_rti(inst: ParamInstance) -> KernelReport:
    """Reduce a dense RTI instance to at most ``5k`` leaves.

    Args:
        inst: an RTI instance.

    Returns:
        The kernel and its rule trace, or the canonical No-instance.

    Raises:
        PreconditionError: if the instance is not an RTI instance.
    """
    if not isinstance(inst.payload, DenseTripletSet):
        raise PreconditionError(f"expected an RTI instance, got {inst.kind.value}")
    r, k = inst.payload, inst.k
    trace: list[RuleApplication] = []
    while True:
        reduced, removed = rule_irrelevant_leaf(r)
        if removed:
            logger.info("RULE3 removed %s", removed)
            trace.append(
                RuleApplication(
                    rule="RULE3", objects=tuple(map(str, removed)), before=r, after=reduced
                )
            )
        r = reduced
        if r.n <= 5 * k:
            break
        found = conflict_packing_rti(r)
        if len(found) > k:
            return KernelReport.answer_no(inst, TRIVIAL_NO, trace, k, "packing-exceeds-budget")
        ei = nice_tree(r, found)
        safe = find_safe_partition_rti(ei, found, k)
        if safe is None:
            logger.warning("%d leaves exceed 5k=%d without a safe partition", r.n, 5 * k)
            return KernelReport.answer_no(inst, TRIVIAL_NO, trace, k, "no-safe-partition")
        partition, outer = safe
        edited, new_k = apply_safe_partition_rti(ei, partition, outer, k)
        objects = tuple(format_rooted_triplet(t, edited.choice[t]) for t in outer)
        logger.info("RULE4 edited %s dk=%d", objects, k - new_k)
        trace.append(
            RuleApplication(rule="RULE4", objects=objects, dk=k - new_k, before=r, after=edited)
        )
        r, k = edited, new_k
        if k < 0:
            return KernelReport.answer_no(inst, TRIVIAL_NO, trace, k, "negative-budget")
    return KernelReport(
        original=inst,
        reduced=ParamInstance(kind=ProblemKind.RTI, payload=r.compact(), k=k),
        rule_trace=tuple(trace),
        verdict=KernelVerdict.REDUCED,
    )
