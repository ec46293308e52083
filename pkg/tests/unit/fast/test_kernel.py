# Copyright 2024 conflictpack authors.
# See LICENSE file for licensing details.

"""FAST kernel unit tests."""
import pytest

from conflictpack import oracle
from conflictpack.fast.kernel import (
    TRIVIAL_NO,
    backward_arcs,
    certificate_graph,
    directed_triangles,
    find_safe_partition,
    greedy_triangle_packing,
    is_transitive,
    kernelize_fast,
    nice_ordering,
    rule_irrelevant_vertex,
)
from conflictpack.instances import (
    KernelVerdict,
    ParamInstance,
    ProblemKind,
    Tournament,
    generate_planted,
    generate_random,
    parse_instance,
    write_instance,
)

from ..constants import SOURCE_AND_CYCLE_TEXT, TRANSITIVE_4_TEXT


def _tournament(text: str) -> Tournament:
    payload = parse_instance(text).payload
    assert isinstance(payload, Tournament)
    return payload


def _long_reversal() -> Tournament:
    """The transitive tournament on 0..5 with the arc 0 -> 5 reversed."""
    return Tournament.from_ordering(range(6)).with_reversed([(0, 5)])


def test_is_transitive(three_cycle: Tournament, rotational_five: Tournament) -> None:
    """
    arrange: a transitive tournament, the three cycle and the rotational 5-tournament.
    act: test transitivity.
    assert: only the first is transitive; the three cycle is its own witness.
    """
    assert is_transitive(_tournament(TRANSITIVE_4_TEXT)) == (True, None)
    assert is_transitive(three_cycle) == (False, (0, 1, 2))
    assert not is_transitive(rotational_five)[0]


def test_directed_triangles_rotational(rotational_five: Tournament) -> None:
    """
    arrange: the rotational 5-tournament, every vertex of out-degree 2.
    act: list its directed triangles.
    assert: there are C(5,3) - 5 * C(2,2) = 5 of them.
    """
    assert len(list(directed_triangles(rotational_five))) == 5


@pytest.mark.parametrize(
    "text, vertices, removed",
    [
        pytest.param(TRANSITIVE_4_TEXT, (), (0, 1, 2, 3), id="transitive"),
        pytest.param("FAST 3 1\n0 1\n1 2\n2 0\n", (0, 1, 2), (), id="three-cycle"),
        pytest.param(SOURCE_AND_CYCLE_TEXT, (1, 2, 3), (0,), id="source-and-cycle"),
    ],
)
def test_rule_irrelevant_vertex(
    text: str, vertices: tuple[int, ...], removed: tuple[int, ...]
) -> None:
    """
    arrange: a tournament.
    act: remove the vertices in no directed triangle.
    assert: the expected vertices remain.
    """
    reduced, dropped = rule_irrelevant_vertex(_tournament(text))

    assert reduced.vertices == vertices
    assert dropped == removed


def test_greedy_packing(three_cycle: Tournament, rotational_five: Tournament) -> None:
    """
    arrange: a transitive tournament, the three cycle and the rotational 5-tournament.
    act: pack arc-disjoint triangles.
    assert: the packings are maximal, arc-disjoint and below the exact optimum.
    """
    assert len(greedy_triangle_packing(_tournament(TRANSITIVE_4_TEXT))) == 0
    single = greedy_triangle_packing(three_cycle)
    assert single.triangles == ((0, 1, 2),)
    assert single.covered == frozenset({0, 1, 2})

    found = greedy_triangle_packing(rotational_five)

    pairs = [pair for a, b, c in found.triangles for pair in ((a, b), (a, c), (b, c))]
    assert len(pairs) == len(set(pairs))
    assert all(
        {(a, b), (a, c), (b, c)} & set(pairs) for a, b, c in directed_triangles(rotational_five)
    )
    assert len(found) <= oracle.exact_fast_dp(rotational_five).optimum == 3


def test_nice_ordering_transitive() -> None:
    """
    arrange: a transitive tournament with an empty packing.
    act: build the nice ordering.
    assert: it is the transitive order without backward arcs.
    """
    t = _tournament(TRANSITIVE_4_TEXT)

    ordered = nice_ordering(t, greedy_triangle_packing(t))

    assert ordered.sigma == (0, 1, 2, 3)
    assert backward_arcs(ordered) == []
    assert certificate_graph(ordered, greedy_triangle_packing(t)).left == ()


@pytest.mark.parametrize("seed", range(8))
def test_nice_ordering_confines_backward_arcs(seed: int) -> None:
    """
    arrange: a planted instance on 8 vertices with 2 reversed arcs, reduced by Rule 1.
    act: build the nice ordering from a greedy packing.
    assert: every backward arc joins two packed vertices.
    """
    t, _ = rule_irrelevant_vertex(generate_planted(ProblemKind.FAST, 8, 2, seed).payload)
    found = greedy_triangle_packing(t)

    ordered = nice_ordering(t, found)

    assert all(u in found.covered and v in found.covered for u, v in backward_arcs(ordered))


def test_certificate_graph_and_safe_partition() -> None:
    """
    arrange: the transitive order 0..5 with the arc between 0 and 5 reversed.
    act: build the nice ordering, certificate graph and safe partition with k = 1.
    assert: the reversed arc is certified by 2, 3, 4 and is the only outer backward arc.
    """
    t = _long_reversal()
    found = greedy_triangle_packing(t)
    ordered = nice_ordering(t, found)

    graph = certificate_graph(ordered, found)
    partition = find_safe_partition(ordered, found, 1)

    assert found.triangles == ((0, 1, 5),)
    assert ordered.sigma == (0, 1, 2, 3, 4, 5)
    assert graph.left == ((5, 0),)
    assert graph.neighbours((5, 0)) == {2, 3, 4}
    assert partition is not None
    assert partition.outer_backward == ((5, 0),)
    assert partition.parts == ((0, 1), (2,), (3,), (4,), (5,))
    assert partition.certificates[(5, 0)] in {2, 3, 4}


def test_find_safe_partition_size_gate() -> None:
    """
    arrange: a nice ordering of 6 vertices.
    act: look for a safe partition with 4k >= 6.
    assert: none is returned.
    """
    t = _long_reversal()
    found = greedy_triangle_packing(t)

    assert find_safe_partition(nice_ordering(t, found), found, 2) is None


def test_kernelize_transitive() -> None:
    """
    arrange: a transitive tournament.
    act: kernelize it.
    assert: Rule 1 empties it and the kernel keeps the budget.
    """
    report = kernelize_fast(parse_instance(TRANSITIVE_4_TEXT))

    assert report.verdict is KernelVerdict.REDUCED
    assert report.trace_lines() == ["RULE1 removed=0,1,2,3"]
    assert write_instance(report.reduced) == b"FAST 0 1\n"


def test_kernelize_three_cycle_without_budget(three_cycle: Tournament) -> None:
    """
    arrange: the three cycle with k = 0.
    act: kernelize it.
    assert: it is a trivial No-instance.
    """
    report = kernelize_fast(ParamInstance(kind=ProblemKind.FAST, payload=three_cycle, k=0))

    assert report.verdict is KernelVerdict.TRIVIAL_NO
    assert report.reduced == TRIVIAL_NO
    assert report.trace_lines() == ["NO reason=packing-exceeds-budget dk=0"]


def test_kernelize_removes_source() -> None:
    """
    arrange: a source dominating a three cycle, k = 1.
    act: kernelize it.
    assert: the source is removed and the cycle kept, relabelled.
    """
    report = kernelize_fast(parse_instance(SOURCE_AND_CYCLE_TEXT))

    assert report.verdict is KernelVerdict.REDUCED
    assert report.trace_lines() == ["RULE1 removed=0"]
    assert write_instance(report.reduced) == b"FAST 3 1\n0 1\n2 0\n1 2\n"


def test_kernelize_reverses_outer_arc() -> None:
    """
    arrange: the transitive order 0..5 with the arc between 0 and 5 reversed, k = 1.
    act: kernelize it.
    assert: Rule 2 reverses 5 -> 0, then Rule 1 empties the tournament.
    """
    inst = ParamInstance(kind=ProblemKind.FAST, payload=_long_reversal(), k=1)

    report = kernelize_fast(inst)

    assert report.verdict is KernelVerdict.REDUCED
    assert report.trace_lines() == ["RULE2 reversed=5>0 dk=1", "RULE1 removed=0,1,2,3,4,5"]
    assert report.reduced.k == 0
    assert report.reduced.payload.n == 0


@pytest.mark.parametrize("seed", range(5))
def test_kernelize_planted_size(seed: int) -> None:
    """
    arrange: a planted instance on 30 vertices with 4 reversed arcs.
    act: kernelize it.
    assert: the kernel is reduced to at most 4k vertices.
    """
    report = kernelize_fast(generate_planted(ProblemKind.FAST, 30, 4, seed))

    assert report.verdict is KernelVerdict.REDUCED
    assert report.reduced.payload.n <= 4 * report.reduced.k <= 16


@pytest.mark.parametrize(
    "generate",
    [pytest.param(generate_planted, id="planted"), pytest.param(generate_random, id="random")],
)
@pytest.mark.parametrize("seed", range(12))
def test_kernelize_sound(generate, seed: int) -> None:
    """
    arrange: an instance on 9 vertices.
    act: kernelize it and solve both sides exactly.
    assert: the decision is kept and every Rule 2 step splits the optimum.
    """
    inst = generate(ProblemKind.FAST, 9, seed % 4, seed)

    report = kernelize_fast(inst)

    before = oracle.exact_fast_dp(inst.payload).optimum <= inst.k
    after = (
        report.verdict is KernelVerdict.REDUCED
        and oracle.exact_fast_dp(report.reduced.payload).optimum <= report.reduced.k
    )
    assert before == after
    for step in report.rule_trace:
        if step.rule == "RULE2":
            assert oracle.exact_fast_dp(step.before).optimum == step.dk + (
                oracle.exact_fast_dp(step.after).optimum
            )
