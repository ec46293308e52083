# Copyright 2024 conflictpack authors.
# See LICENSE file for licensing details.

"""Leaf-labelled rooted binary trees."""
import dataclasses
import functools
import random
import typing
from collections.abc import Iterable, Mapping

# A nested tree is a leaf label or a pair of nested trees.
Nested = typing.Union[int, tuple["Nested", "Nested"]]


@dataclasses.dataclass(frozen=True)
class RootedBinaryTree:
    """A rooted binary tree whose leaves are labelled by distinct vertex ids.

    Leaves are identified by their non-negative label; internal nodes by negative ints.

    Attributes:
        children: maps every internal node to its two children.
        root: the root node, None for the empty tree.
        leaves: the leaf labels.
    """

    children: Mapping[int, tuple[int, int]]
    root: int | None
    leaves: frozenset[int]

    def __post_init__(self) -> None:
        """Validate the tree shape.

        Raises:
            ValueError: if a node is shared, unreachable or misnumbered.
        """
        if self.root is None:
            if self.children or self.leaves:
                raise ValueError("an empty tree has no nodes")
            return
        seen: set[int] = set()
        stack = [self.root]
        while stack:
            node = stack.pop()
            if node in seen:
                raise ValueError(f"node {node} appears twice")
            seen.add(node)
            if node < 0:
                if node not in self.children:
                    raise ValueError(f"internal node {node} lacks children")
                stack.extend(self.children[node])
            elif node in self.children:
                raise ValueError(f"leaf {node} has children")
        if {v for v in seen if v >= 0} != self.leaves or len(seen) != 2 * len(self.leaves) - 1:
            raise ValueError("tree nodes do not match its leaves")

    @classmethod
    def from_nested(cls, nested: Nested | None) -> "RootedBinaryTree":
        """Build a tree from nested pairs, e.g. ``((0, 1), 2)``.

        Args:
            nested: nested pairs of leaf labels, None for the empty tree.

        Returns:
            The tree.
        """
        editor = TreeEditor()
        if nested is not None:
            editor.root = editor.graft(nested)
        return editor.freeze()

    @functools.cached_property
    def parent(self) -> dict[int, int]:
        """Map every non-root node to its parent."""
        return {child: node for node, pair in self.children.items() for child in pair}

    @functools.cached_property
    def depth(self) -> dict[int, int]:
        """Map every node to its distance from the root."""
        depths: dict[int, int] = {}
        for node in self.preorder():
            depths[node] = depths[self.parent[node]] + 1 if node in self.parent else 0
        return depths

    @functools.cached_property
    def _below(self) -> dict[int, frozenset[int]]:
        below: dict[int, frozenset[int]] = {}
        for node in reversed(self.preorder()):
            if node >= 0:
                below[node] = frozenset((node,))
            else:
                left, right = self.children[node]
                below[node] = below[left] | below[right]
        return below

    def preorder(self) -> list[int]:
        """List the nodes, every node before its descendants (left child first).

        Returns:
            The nodes in preorder.
        """
        order: list[int] = []
        stack = [] if self.root is None else [self.root]
        while stack:
            node = stack.pop()
            order.append(node)
            if node < 0:
                left, right = self.children[node]
                stack.extend((right, left))
        return order

    def leaves_below(self, node: int) -> frozenset[int]:
        """Return the leaves of the subtree rooted at a node.

        Args:
            node: a node of the tree.

        Returns:
            The leaf labels below ``node``.
        """
        return self._below[node]

    def lca(self, nodes: Iterable[int]) -> int:
        """Return the least common ancestor of some nodes.

        Args:
            nodes: a non-empty collection of nodes.

        Returns:
            The least common ancestor.
        """
        iterator = iter(nodes)
        current = next(iterator)
        for other in iterator:
            while self.depth[other] > self.depth[current]:
                other = self.parent[other]
            while self.depth[current] > self.depth[other]:
                current = self.parent[current]
            while current != other:
                current, other = self.parent[current], self.parent[other]
        return current

    def topology(self, a: int, b: int, c: int) -> int:
        """Return the isolated leaf of the triplet displayed on three leaves.

        Args:
            a: a leaf.
            b: a leaf.
            c: a leaf.

        Returns:
            ``c`` when the tree displays ``ab|c``, and so on.
        """
        deepest = max(
            ((self.lca((a, b)), c), (self.lca((a, c)), b), (self.lca((b, c)), a)),
            key=lambda item: self.depth[item[0]],
        )
        return deepest[1]

    def newick(self) -> str:
        """Render the tree in Newick format without branch lengths.

        Returns:
            The Newick string, ``;`` for the empty tree.
        """

        def render(node: int) -> str:
            if node >= 0:
                return str(node)
            left, right = self.children[node]
            return f"({render(left)},{render(right)})"

        return ";" if self.root is None else f"{render(self.root)};"


class TreeEditor:
    """Mutable builder for rooted binary trees.

    Attrs:
        root: the current root, None while the tree is empty.
    """

    def __init__(self, tree: RootedBinaryTree | None = None):
        """Start from a copy of a tree, or from the empty tree.

        Args:
            tree: the tree to edit.
        """
        self._children: dict[int, tuple[int, int]] = dict(tree.children) if tree else {}
        self._parent: dict[int, int] = dict(tree.parent) if tree else {}
        self.root: int | None = tree.root if tree else None
        self._next_id = min(self._children, default=0) - 1

    def join(self, left: int, right: int) -> int:
        """Create a detached internal node over two subtrees.

        Args:
            left: the left child.
            right: the right child.

        Returns:
            The new node.
        """
        node = self._next_id
        self._next_id -= 1
        self._children[node] = (left, right)
        self._parent[left] = node
        self._parent[right] = node
        return node

    def attach_above(self, node: int, subtree: int) -> int:
        """Subdivide the edge above a node and hang a subtree from the new node.

        Args:
            node: an attached node, possibly the root.
            subtree: the root of a detached subtree.

        Returns:
            The new internal node, parent of ``node`` and ``subtree``.
        """
        above = self._parent.get(node)
        middle = self.join(node, subtree)
        if above is None:
            self.root = middle
        else:
            self._parent[middle] = above
            left, right = self._children[above]
            self._children[above] = (middle, right) if left == node else (left, middle)
        return middle

    def comb(self, leaves: Iterable[int]) -> int:
        """Build a detached left comb ``((a, b), c)...`` over leaves in the given order.

        Args:
            leaves: at least one leaf.

        Returns:
            The root of the comb.
        """
        iterator = iter(leaves)
        node = next(iterator)
        for leaf in iterator:
            node = self.join(node, leaf)
        return node

    def graft(self, nested: Nested) -> int:
        """Build a detached subtree from nested pairs.

        Args:
            nested: nested pairs of leaf labels.

        Returns:
            The root of the subtree.
        """
        if isinstance(nested, int):
            return nested
        return self.join(self.graft(nested[0]), self.graft(nested[1]))

    def freeze(self) -> RootedBinaryTree:
        """Return the tree hanging from the current root.

        Returns:
            The immutable tree.
        """
        if self.root is None:
            return RootedBinaryTree(children={}, root=None, leaves=frozenset())
        children: dict[int, tuple[int, int]] = {}
        leaves: set[int] = set()
        stack = [self.root]
        while stack:
            node = stack.pop()
            if node >= 0:
                leaves.add(node)
            else:
                children[node] = self._children[node]
                stack.extend(children[node])
        return RootedBinaryTree(children=children, root=self.root, leaves=frozenset(leaves))


def random_tree(leaves: Iterable[int], rng: random.Random) -> RootedBinaryTree:
    """Draw a binary tree by inserting leaves one by one on uniformly chosen edges.

    The edge above the root counts as an edge.

    Args:
        leaves: the leaf labels.
        rng: the random source.

    Returns:
        The tree.
    """
    editor = TreeEditor()
    nodes: list[int] = []
    for leaf in leaves:
        if editor.root is None:
            editor.root = leaf
        else:
            nodes.append(editor.attach_above(rng.choice(nodes), leaf))
        nodes.append(leaf)
    return editor.freeze()


def all_trees(leaves: Iterable[int]) -> typing.Iterator[RootedBinaryTree]:
    """Enumerate every rooted binary tree over some leaves.

    Trees are produced by inserting each leaf, in the given order, on every edge of the
    trees over the previous leaves, so there are ``(2n - 3)!!`` of them.

    Args:
        leaves: the leaf labels.

    Yields:
        Every tree exactly once.
    """
    order = list(leaves)
    if not order:
        yield RootedBinaryTree(children={}, root=None, leaves=frozenset())
        return
    nested_trees: list[Nested] = [order[0]]
    for leaf in order[1:]:
        nested_trees = [grown for nested in nested_trees for grown in _insertions(nested, leaf)]
    for nested in nested_trees:
        yield RootedBinaryTree.from_nested(nested)


def _insertions(nested: Nested, leaf: int) -> list[Nested]:
    """List the trees obtained by inserting a leaf on every edge of a nested tree.

    Args:
        nested: the tree.
        leaf: the new leaf.

    Returns:
        One tree per edge, the edge above the root first.
    """
    grown: list[Nested] = [(nested, leaf)]
    if isinstance(nested, tuple):
        left, right = nested
        grown.extend((sub, right) for sub in _insertions(left, leaf))
        grown.extend((left, sub) for sub in _insertions(right, leaf))
    return grown
