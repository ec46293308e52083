# Copyright 2024 conflictpack authors.
# See LICENSE file for licensing details.

"""Instance data model, canonical text formats and instance generators.

Three instance cores are supported:

* ``Tournament``: one orientation per unordered pair of vertices (FAST).
* ``DenseTripletSet``: one rooted triplet ``ab|c`` per 3-subset of leaves (RTI).
* ``BetweennessSet``: one middle vertex per 3-subset of vertices (BTW).

Cores keep the labels of the instance they were cut from, so that a kernel can name the
original vertices in its trace. Parsed, generated and written instances are always
compact, that is labelled ``0..n-1``.
"""
from __future__ import annotations

import dataclasses
import enum
import itertools
import logging
import math
import random
import types
import typing
from collections.abc import Iterable, Mapping

from conflictpack.exceptions import InstanceFormatError, PreconditionError
from conflictpack.trees import RootedBinaryTree, random_tree

logger = logging.getLogger(__name__)

Pair = tuple[int, int]
Triple = tuple[int, int, int]


class ProblemKind(str, enum.Enum):
    """Problem handled by an instance.

    Attrs:
        FAST: Feedback Arc Set in Tournaments.
        RTI: Dense Rooted Triplet Inconsistency.
        BTW: Betweenness in Tournaments.
    """

    FAST = "FAST"
    RTI = "RTI"
    BTW = "BTW"


def _check_vertices(vertices: tuple[int, ...]) -> None:
    """Check that vertex labels are strictly increasing non-negative integers.

    Args:
        vertices: the vertex labels.

    Raises:
        PreconditionError: if the labels are not sorted, distinct and non-negative.
    """
    if any(v < 0 for v in vertices) or any(a >= b for a, b in zip(vertices, vertices[1:])):
        raise PreconditionError(
            f"vertex labels must be sorted distinct non-negative ints: {vertices}"
        )


@dataclasses.dataclass(frozen=True)
class Tournament:
    """A tournament: every unordered pair of vertices carries exactly one arc.

    Tournaments are immutable and hashable.

    Attributes:
        vertices: sorted vertex labels.
        winner: read-only map of each pair ``(u, v)`` with ``u < v`` to the tail of its arc.
    """

    vertices: tuple[int, ...]
    winner: Mapping[Pair, int]

    def __post_init__(self) -> None:
        """Validate the completeness of the orientation.

        Raises:
            PreconditionError: if a pair is missing, unknown or oriented outside of itself.
        """
        object.__setattr__(self, "winner", types.MappingProxyType(dict(self.winner)))
        _check_vertices(self.vertices)
        expected = len(self.vertices) * (len(self.vertices) - 1) // 2
        if len(self.winner) != expected:
            raise PreconditionError(f"expected {expected} oriented pairs, got {len(self.winner)}")
        for u, v in itertools.combinations(self.vertices, 2):
            if self.winner.get((u, v)) not in (u, v):
                raise PreconditionError(f"pair {u} {v} is missing or badly oriented")

    def __hash__(self) -> int:
        return hash((self.vertices, frozenset(self.winner.items())))

    @property
    def n(self) -> int:
        """Return the number of vertices."""
        return len(self.vertices)

    def beats(self, u: int, v: int) -> bool:
        """Tell whether the arc between ``u`` and ``v`` goes from ``u`` to ``v``.

        Args:
            u: a vertex.
            v: another vertex.

        Returns:
            True if ``uv`` is an arc.
        """
        return self.winner[(u, v) if u < v else (v, u)] == u

    def arcs(self) -> typing.Iterator[Pair]:
        """Iterate over the arcs as ``(tail, head)`` in lexicographic pair order.

        Yields:
            The arcs of the tournament.
        """
        for u, v in itertools.combinations(self.vertices, 2):
            tail = self.winner[(u, v)]
            yield (tail, v if tail == u else u)

    def induced(self, keep: Iterable[int]) -> "Tournament":
        """Return the subtournament induced by some vertices.

        Args:
            keep: vertices to keep.

        Returns:
            The induced subtournament, labels unchanged.
        """
        kept = tuple(sorted(set(keep)))
        return Tournament(
            vertices=kept,
            winner={pair: self.winner[pair] for pair in itertools.combinations(kept, 2)},
        )

    def with_reversed(self, arcs: Iterable[Pair]) -> "Tournament":
        """Return a copy with some arcs reversed.

        Args:
            arcs: arcs ``(tail, head)`` to reverse.

        Returns:
            The edited tournament.
        """
        winner = dict(self.winner)
        for tail, head in arcs:
            if not self.beats(tail, head):
                raise PreconditionError(f"{tail}->{head} is not an arc")
            winner[(tail, head) if tail < head else (head, tail)] = head
        return Tournament(vertices=self.vertices, winner=winner)

    def compact(self) -> "Tournament":
        """Relabel the vertices ``0..n-1`` preserving their order.

        Returns:
            The relabelled tournament.
        """
        index = {v: i for i, v in enumerate(self.vertices)}
        return Tournament(
            vertices=tuple(range(self.n)),
            winner={(index[u], index[v]): index[w] for (u, v), w in self.winner.items()},
        )

    @classmethod
    def from_ordering(cls, ordering: Iterable[int]) -> "Tournament":
        """Build the transitive tournament of an ordering.

        Args:
            ordering: the vertices, every vertex beating the ones after it.

        Returns:
            The transitive tournament.
        """
        order = list(ordering)
        position = {v: i for i, v in enumerate(order)}
        return cls(
            vertices=tuple(sorted(order)),
            winner={
                (u, v): u if position[u] < position[v] else v
                for u, v in itertools.combinations(sorted(order), 2)
            },
        )


@dataclasses.dataclass(frozen=True)
class _TripleChoiceSet:
    """A dense collection choosing one member of every 3-subset of vertices.

    Attributes:
        vertices: sorted vertex labels.
        choice: read-only map of each sorted triple to its chosen member.
    """

    vertices: tuple[int, ...]
    choice: Mapping[Triple, int]

    def __post_init__(self) -> None:
        """Validate the completeness of the collection.

        Raises:
            PreconditionError: if a triple is missing or its chosen vertex is not a member.
        """
        object.__setattr__(self, "choice", types.MappingProxyType(dict(self.choice)))
        _check_vertices(self.vertices)
        expected = math.comb(len(self.vertices), 3)
        if len(self.choice) != expected:
            raise PreconditionError(f"expected {expected} triples, got {len(self.choice)}")
        for triple in itertools.combinations(self.vertices, 3):
            chosen = self.choice.get(triple)
            if chosen is None:
                raise PreconditionError(f"triple {triple} is missing")
            if chosen not in triple:
                raise PreconditionError(f"member not in subset: {chosen} chosen for {triple}")

    def __hash__(self) -> int:
        return hash((self.vertices, frozenset(self.choice.items())))

    @property
    def n(self) -> int:
        """Return the number of vertices."""
        return len(self.vertices)

    def chosen(self, a: int, b: int, c: int) -> int:
        """Return the vertex chosen on a triple, given in any order.

        Args:
            a: a vertex.
            b: a vertex.
            c: a vertex.

        Returns:
            The chosen member.
        """
        return self.choice[typing.cast(Triple, tuple(sorted((a, b, c))))]

    def triples(self) -> typing.Iterator[Triple]:
        """Iterate over the triples in lexicographic order.

        Yields:
            Every sorted triple.
        """
        yield from itertools.combinations(self.vertices, 3)

    def induced(self, keep: Iterable[int]) -> typing.Self:
        """Return the sub-collection on some vertices.

        Args:
            keep: vertices to keep.

        Returns:
            The induced collection, labels unchanged.
        """
        kept = tuple(sorted(set(keep)))
        return dataclasses.replace(
            self,
            vertices=kept,
            choice={t: self.choice[t] for t in itertools.combinations(kept, 3)},
        )

    def with_choices(self, updates: Mapping[Triple, int]) -> typing.Self:
        """Return a copy where some triples choose another member.

        Args:
            updates: new chosen member per sorted triple.

        Returns:
            The edited collection.
        """
        choice = dict(self.choice)
        choice.update(updates)
        return dataclasses.replace(self, choice=choice)

    def compact(self) -> typing.Self:
        """Relabel the vertices ``0..n-1`` preserving their order.

        Returns:
            The relabelled collection.
        """
        index = {v: i for i, v in enumerate(self.vertices)}
        return dataclasses.replace(
            self,
            vertices=tuple(range(self.n)),
            choice={
                (index[a], index[b], index[c]): index[x] for (a, b, c), x in self.choice.items()
            },
        )


@dataclasses.dataclass(frozen=True, eq=False)
class DenseTripletSet(_TripleChoiceSet):
    """One rooted triplet ``ab|c`` per triple of leaves; ``choice`` holds the isolated leaf."""

    @classmethod
    def from_tree(cls, tree: RootedBinaryTree) -> "DenseTripletSet":
        """Build the dense set of triplets displayed by a tree.

        Args:
            tree: a rooted binary tree.

        Returns:
            The consistent dense triplet set of the tree.
        """
        leaves = tuple(sorted(tree.leaves))
        return cls(
            vertices=leaves,
            choice={t: tree.topology(*t) for t in itertools.combinations(leaves, 3)},
        )


@dataclasses.dataclass(frozen=True, eq=False)
class BetweennessSet(_TripleChoiceSet):
    """One betweenness triplet per triple of vertices; ``choice`` holds the middle vertex."""

    @classmethod
    def from_ordering(cls, ordering: Iterable[int]) -> "BetweennessSet":
        """Build the dense set of betweenness triplets satisfied by an ordering.

        Args:
            ordering: the vertex ordering.

        Returns:
            The consistent betweenness set of the ordering.
        """
        order = list(ordering)
        position = {v: i for i, v in enumerate(order)}
        return cls(
            vertices=tuple(sorted(order)),
            choice={
                t: sorted(t, key=position.__getitem__)[1]
                for t in itertools.combinations(sorted(order), 3)
            },
        )


Core = Tournament | DenseTripletSet | BetweennessSet

_CORE_TYPES: dict[ProblemKind, type] = {
    ProblemKind.FAST: Tournament,
    ProblemKind.RTI: DenseTripletSet,
    ProblemKind.BTW: BetweennessSet,
}


@dataclasses.dataclass(frozen=True)
class ParamInstance:
    """A parameterized instance.

    Attributes:
        kind: the problem.
        payload: the instance core, whose type matches ``kind``.
        k: the edit budget.
    """

    kind: ProblemKind
    payload: Core
    k: int

    def __post_init__(self) -> None:
        """Validate the instance.

        Raises:
            PreconditionError: if the payload does not match the kind or the budget is negative.
        """
        if type(self.payload) is not _CORE_TYPES[self.kind]:
            raise PreconditionError(
                f"{self.kind.value} instance with {type(self.payload).__name__}"
            )
        if self.k < 0:
            raise PreconditionError(f"negative budget {self.k}")


class KernelVerdict(str, enum.Enum):
    """Outcome of a kernelization.

    Attrs:
        REDUCED: the reduced instance is equivalent to the input.
        TRIVIAL_NO: the input is a No-instance; the reduced instance is a canonical one.
    """

    REDUCED = "Reduced"
    TRIVIAL_NO = "TrivialNo"


def format_vertices(vertices: Iterable[int]) -> str:
    """Render a vertex list for trace lines.

    Args:
        vertices: the vertices.

    Returns:
        Comma separated vertices, or ``-`` when empty.
    """
    return ",".join(str(v) for v in vertices) or "-"


def format_arc(arc: Pair) -> str:
    """Render an arc ``(tail, head)`` as ``tail>head``.

    Args:
        arc: the arc.

    Returns:
        The rendered arc.
    """
    return f"{arc[0]}>{arc[1]}"


def format_rooted_triplet(triple: Triple, isolated: int) -> str:
    """Render a rooted triplet as ``a,b|c``.

    Args:
        triple: the leaves.
        isolated: the isolated leaf.

    Returns:
        The rendered triplet.
    """
    a, b = (x for x in sorted(triple) if x != isolated)
    return f"{a},{b}|{isolated}"


def format_betweenness_triplet(triple: Triple, middle: int) -> str:
    """Render a betweenness triplet as ``a-b-c`` with ``b`` the middle.

    Args:
        triple: the vertices.
        middle: the middle vertex.

    Returns:
        The rendered triplet.
    """
    a, c = (x for x in sorted(triple) if x != middle)
    return f"{a}-{middle}-{c}"


@dataclasses.dataclass(frozen=True)
class RuleApplication:
    """One step of a kernelization trace.

    Attributes:
        rule: rule tag, one of ``RULE1``..``RULE5``, ``SOLVE`` or ``NO``.
        objects: rendered objects removed, reversed or edited.
        dk: budget decrease charged by the step.
        detail: the reason of a ``NO`` step, ``no`` for a failed ``SOLVE`` step.
        before: instance core the step was applied to.
        after: instance core the step produced.
    """

    rule: str
    objects: tuple[str, ...] = ()
    dk: int = 0
    detail: str = ""
    before: Core | None = dataclasses.field(default=None, repr=False, compare=False)
    after: Core | None = dataclasses.field(default=None, repr=False, compare=False)

    def trace_line(self) -> str:
        """Render the step as one trace line.

        Returns:
            The trace line.
        """
        # rendered triplets contain commas
        separator = ";" if self.rule in ("RULE4", "RULE5", "SOLVE") else ","
        joined = separator.join(self.objects) or "-"
        match self.rule:
            case "RULE1" | "RULE3":
                return f"{self.rule} removed={joined}"
            case "RULE2":
                return f"RULE2 reversed={joined} dk={self.dk}"
            case "RULE4":
                return f"RULE4 edited={joined} dk={self.dk}"
            case "RULE5":
                return f"RULE5 edited={joined}"
            case "SOLVE":
                return "SOLVE no" if self.detail == "no" else f"SOLVE edition={joined}"
            case _:
                return f"{self.rule} reason={self.detail} dk={self.dk}"


@dataclasses.dataclass(frozen=True)
class KernelReport:
    """Result of a kernelization.

    Attributes:
        original: the input instance.
        reduced: the kernel, or a canonical No-instance.
        rule_trace: the rule applications, in order.
        verdict: whether the kernel is equivalent or the input was found to be No.
    """

    original: ParamInstance
    reduced: ParamInstance
    rule_trace: tuple[RuleApplication, ...]
    verdict: KernelVerdict

    def __post_init__(self) -> None:
        """Check that the trace accounts for the budget change.

        Raises:
            ValueError: if the k deltas do not sum to the budget change.
        """
        if sum(step.dk for step in self.rule_trace) != self.original.k - self.reduced.k:
            raise ValueError("rule trace does not account for the budget change")

    def trace_lines(self) -> list[str]:
        """Render the trace.

        Returns:
            One line per rule application.
        """
        return [step.trace_line() for step in self.rule_trace]

    @classmethod
    def answer_no(
        cls,
        original: ParamInstance,
        canonical: ParamInstance,
        trace: Iterable[RuleApplication],
        k: int,
        reason: str,
    ) -> "KernelReport":
        """Close a trace with a ``NO`` step charging the remaining budget.

        Args:
            original: the input instance.
            canonical: the canonical No-instance of the problem.
            trace: the rule applications so far.
            k: the remaining budget.
            reason: why the instance is a No-instance.

        Returns:
            A TrivialNo report.
        """
        logger.info("NO reason=%s dk=%d", reason, k)
        return cls(
            original=original,
            reduced=canonical,
            rule_trace=(*trace, RuleApplication(rule="NO", dk=k, detail=reason)),
            verdict=KernelVerdict.TRIVIAL_NO,
        )


def _read_ints(tokens: list[str], line_no: int) -> list[int]:
    """Parse the integer tokens of one line.

    Args:
        tokens: the tokens.
        line_no: 1-based line number for error reporting.

    Returns:
        The integers.

    Raises:
        InstanceFormatError: if a token is not a non-negative integer.
    """
    if not all(token.isascii() and token.isdigit() for token in tokens):
        raise InstanceFormatError(f"expected integers, got {' '.join(tokens)!r}", line_no)
    return [int(token) for token in tokens]


def _parse_header(line: str) -> tuple[ProblemKind, int, int]:
    """Parse the ``<KIND> <n> <k>`` header.

    Args:
        line: the first line.

    Returns:
        The kind, vertex count and budget.

    Raises:
        InstanceFormatError: if the header is malformed or the budget negative.
    """
    tokens = line.split(" ")
    if len(tokens) != 3 or tokens[0] not in ProblemKind.__members__:
        raise InstanceFormatError(f"malformed header {line!r}", 1)
    if tokens[2].startswith("-") and tokens[2][1:].isdigit():
        raise InstanceFormatError(f"negative budget {tokens[2]}", 1)
    n, k = _read_ints(tokens[1:], 1)
    return ProblemKind(tokens[0]), n, k


def parse_instance(text: bytes | str) -> ParamInstance:
    """Parse an instance in the canonical text format.

    Args:
        text: the file content.

    Returns:
        The validated instance.

    Raises:
        InstanceFormatError: if the text is malformed or incomplete.
    """
    if isinstance(text, bytes):
        try:
            text = text.decode("ascii")
        except UnicodeDecodeError as exc:
            raise InstanceFormatError("instance files are ASCII") from exc
    lines = text.splitlines()
    if not lines:
        raise InstanceFormatError("malformed header ''", 1)
    kind, n, k = _parse_header(lines[0])
    arity = 2 if kind is ProblemKind.FAST else 3
    entries: dict[tuple[int, ...], tuple[int, ...]] = {}
    for line_no, line in enumerate(lines[1:], start=2):
        tokens = line.split(" ")
        if len(tokens) != arity:
            raise InstanceFormatError(f"expected {arity} vertices, got {line!r}", line_no)
        members = _read_ints(tokens, line_no)
        if any(v >= n for v in members):
            raise InstanceFormatError(f"vertex out of range 0..{n - 1} in {line!r}", line_no)
        if len(set(members)) != arity:
            raise InstanceFormatError(
                f"member not in subset: repeated vertex in {line!r}", line_no
            )
        key = tuple(sorted(members))
        if key in entries:
            noun = "pair" if arity == 2 else "triple"
            raise InstanceFormatError(f"duplicate {noun} {' '.join(map(str, key))}", line_no)
        entries[key] = tuple(members)
    vertices = tuple(range(n))
    for key in itertools.combinations(vertices, arity):
        if key not in entries:
            noun = "pair" if arity == 2 else "triple"
            raise InstanceFormatError(f"missing {noun} {' '.join(map(str, key))}")
    payload: Core
    match kind:
        case ProblemKind.FAST:
            payload = Tournament(
                vertices=vertices,
                winner={typing.cast(Pair, key): arc[0] for key, arc in entries.items()},
            )
        case ProblemKind.RTI:
            payload = DenseTripletSet(
                vertices=vertices,
                choice={typing.cast(Triple, key): line[2] for key, line in entries.items()},
            )
        case ProblemKind.BTW:
            payload = BetweennessSet(
                vertices=vertices,
                choice={typing.cast(Triple, key): line[1] for key, line in entries.items()},
            )
    return ParamInstance(kind=kind, payload=payload, k=k)


def write_instance(inst: ParamInstance) -> bytes:
    """Render an instance in the canonical text format.

    Labels are compacted to ``0..n-1``; pairs and triples are emitted in lexicographic order.

    Args:
        inst: the instance.

    Returns:
        The ASCII file content.
    """
    core = inst.payload.compact()
    lines = [f"{inst.kind.value} {core.n} {inst.k}"]
    if isinstance(core, Tournament):
        lines.extend(f"{tail} {head}" for tail, head in core.arcs())
    elif isinstance(core, DenseTripletSet):
        for triple, isolated in sorted(core.choice.items()):
            a, b = (x for x in triple if x != isolated)
            lines.append(f"{a} {b} {isolated}")
    else:
        for triple, middle in sorted(core.choice.items()):
            a, c = (x for x in triple if x != middle)
            lines.append(f"{a} {middle} {c}")
    return ("\n".join(lines) + "\n").encode("ascii")


def object_count(kind: ProblemKind, n: int) -> int:
    """Return the number of editable objects of an instance.

    Args:
        kind: the problem.
        n: the vertex count.

    Returns:
        ``C(n, 2)`` for FAST, ``C(n, 3)`` otherwise.
    """
    return math.comb(n, 2) if kind is ProblemKind.FAST else math.comb(n, 3)


@dataclasses.dataclass(frozen=True)
class PlantedTruth:
    """Ground truth of a planted instance.

    Attributes:
        kind: the problem.
        arrangement: the consistent ordering (space separated) or tree (Newick).
        perturbed: the rendered objects that were reversed or re-chosen.
    """

    kind: ProblemKind
    arrangement: str
    perturbed: tuple[str, ...]

    def lines(self) -> list[str]:
        """Render the truth sidecar.

        Returns:
            The sidecar lines.
        """
        return [f"truth {self.arrangement}", *(f"perturbed {obj}" for obj in self.perturbed)]


def _check_generator_args(kind: ProblemKind, n: int, k: int) -> None:
    """Validate generator arguments.

    Args:
        kind: the problem.
        n: the vertex count.
        k: the budget.

    Raises:
        PreconditionError: if ``n < 3`` or the budget exceeds the object count.
    """
    if n < 3:
        raise PreconditionError(f"n must be at least 3, got {n}")
    if not 0 <= k <= object_count(kind, n):
        raise PreconditionError(
            f"budget {k} exceeds the {object_count(kind, n)} objects of a {kind.value} instance"
        )


def generate_planted_with_truth(
    kind: ProblemKind, n: int, k: int, seed: int
) -> tuple[ParamInstance, PlantedTruth]:
    """Generate a planted instance whose optimum is at most ``k``, with its ground truth.

    A consistent instance is drawn at random (transitive ordering, binary tree or ordering)
    and exactly ``k`` distinct objects are perturbed.

    Args:
        kind: the problem.
        n: the vertex count.
        k: the number of perturbed objects, also the budget.
        seed: the random seed.

    Returns:
        The instance and its ground truth.
    """
    _check_generator_args(kind, n, k)
    rng = random.Random(seed)
    payload: Core
    perturbed: list[str] = []
    if kind is ProblemKind.FAST:
        ordering = list(range(n))
        rng.shuffle(ordering)
        tournament = Tournament.from_ordering(ordering)
        pairs = rng.sample(list(itertools.combinations(range(n), 2)), k)
        arcs = [(u, v) if tournament.beats(u, v) else (v, u) for u, v in sorted(pairs)]
        payload = tournament.with_reversed(arcs)
        perturbed = [format_arc(arc) for arc in arcs]
        arrangement = " ".join(map(str, ordering))
    elif kind is ProblemKind.RTI:
        tree = random_tree(range(n), rng)
        triplets = DenseTripletSet.from_tree(tree)
        updates = {}
        for triple in sorted(rng.sample(list(triplets.triples()), k)):
            updates[triple] = rng.choice([x for x in triple if x != triplets.choice[triple]])
            perturbed.append(format_rooted_triplet(triple, updates[triple]))
        payload = triplets.with_choices(updates)
        arrangement = tree.newick()
    else:
        ordering = list(range(n))
        rng.shuffle(ordering)
        betweenness = BetweennessSet.from_ordering(ordering)
        updates = {}
        for triple in sorted(rng.sample(list(betweenness.triples()), k)):
            updates[triple] = rng.choice([x for x in triple if x != betweenness.choice[triple]])
            perturbed.append(format_betweenness_triplet(triple, updates[triple]))
        payload = betweenness.with_choices(updates)
        arrangement = " ".join(map(str, ordering))
    logger.debug("planted %s instance n=%d k=%d seed=%d", kind.value, n, k, seed)
    return (
        ParamInstance(kind=kind, payload=payload, k=k),
        PlantedTruth(kind=kind, arrangement=arrangement, perturbed=tuple(perturbed)),
    )


def generate_planted(kind: ProblemKind, n: int, k: int, seed: int) -> ParamInstance:
    """Generate a planted instance whose optimum is at most ``k``.

    Args:
        kind: the problem.
        n: the vertex count.
        k: the number of perturbed objects, also the budget.
        seed: the random seed.

    Returns:
        The instance.
    """
    return generate_planted_with_truth(kind, n, k, seed)[0]


def generate_random(kind: ProblemKind, n: int, k: int, seed: int) -> ParamInstance:
    """Generate a uniformly random instance with budget ``k``.

    Args:
        kind: the problem.
        n: the vertex count.
        k: the budget.
        seed: the random seed.

    Returns:
        The instance.
    """
    _check_generator_args(kind, n, k)
    rng = random.Random(seed)
    vertices = tuple(range(n))
    payload: Core
    if kind is ProblemKind.FAST:
        payload = Tournament(
            vertices=vertices,
            winner={pair: rng.choice(pair) for pair in itertools.combinations(vertices, 2)},
        )
    else:
        choice = {t: rng.choice(t) for t in itertools.combinations(vertices, 3)}
        core_type = DenseTripletSet if kind is ProblemKind.RTI else BetweennessSet
        payload = core_type(vertices=vertices, choice=choice)
    return ParamInstance(kind=kind, payload=payload, k=k)
