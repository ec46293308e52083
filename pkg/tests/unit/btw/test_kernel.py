# Copyright 2024 conflictpack authors.
# See LICENSE file for licensing details.

"""BTW kernel and small-budget solver unit tests."""
import itertools
import typing

import pytest

from conflictpack import oracle
from conflictpack._dense import packing
from conflictpack.btw.kernel import (
    CONSISTENT_QUADS,
    TRIVIAL_NO,
    OrderedBtw,
    conflict_packing_btw,
    consistent_ordering_btw,
    find_simple_sunflower,
    inconsistent_triplets,
    is_conflict4,
    kernelize_btw,
    nice_ordering_btw,
    solve_small_k,
)
from conflictpack.exceptions import PreconditionError
from conflictpack.instances import (
    BetweennessSet,
    KernelVerdict,
    ParamInstance,
    ProblemKind,
    generate_planted,
    generate_planted_with_truth,
    generate_random,
    parse_instance,
)

from ..constants import FLIPPED_BTW_TEXT, ORDERED_BTW_TEXT


def _betweenness(text: str) -> BetweennessSet:
    payload = parse_instance(text).payload
    assert isinstance(payload, BetweennessSet)
    return payload


def _flipped_seven() -> BetweennessSet:
    """The betweenness set of the ordering 0..6 with 0 as the middle of 0 1 2."""
    return BetweennessSet.from_ordering(range(7)).with_choices({(0, 1, 2): 0})


def _editions(b: BetweennessSet, size: int) -> typing.Iterator[dict[tuple[int, int, int], int]]:
    """Yield every edition of at most ``size`` triples, as new middles."""
    moves = [(t, v) for t, middle in sorted(b.choice.items()) for v in t if v != middle]
    for count in range(size + 1):
        for chosen in itertools.combinations(moves, count):
            if len({t for t, _ in chosen}) == count:
                yield dict(chosen)


def test_consistent_signatures() -> None:
    """
    arrange: none.
    act: inspect the signatures of the orderings of 4 vertices.
    assert: the 24 orderings give 12 signatures, one per ordering and its reversal.
    """
    assert len(CONSISTENT_QUADS) == 12


def test_four_vertex_consistency_is_exact() -> None:
    """
    arrange: every dense betweenness set on 4 vertices.
    act: test it for a conflict.
    assert: it is a conflict exactly when no ordering satisfies it.
    """
    satisfied = {
        tuple(sorted(BetweennessSet.from_ordering(order).choice.items()))
        for order in itertools.permutations(range(4))
    }
    triples = list(itertools.combinations(range(4), 3))
    for middles in itertools.product(*triples):
        b = BetweennessSet(vertices=tuple(range(4)), choice=dict(zip(triples, middles)))
        assert is_conflict4(b, range(4)) == (tuple(sorted(b.choice.items())) not in satisfied)


def test_consistent_ordering() -> None:
    """
    arrange: the middles of the ordering 0 1 2 3, and the same set with one middle moved.
    act: look for a consistent ordering.
    assert: the first gives 0 1 2 3, the second the conflict on all four vertices.
    """
    assert consistent_ordering_btw(_betweenness(ORDERED_BTW_TEXT)) == (0, 1, 2, 3)
    assert consistent_ordering_btw(_betweenness(FLIPPED_BTW_TEXT)) == packing.Conflict(
        quad=(0, 1, 2, 3)
    )


@pytest.mark.parametrize("seed", range(6))
def test_consistent_ordering_recovers_truth(seed: int) -> None:
    """
    arrange: the betweenness set of a random ordering of 7 vertices.
    act: look for a consistent ordering.
    assert: the planted ordering is recovered up to reversal.
    """
    inst, truth = generate_planted_with_truth(ProblemKind.BTW, 7, 0, seed)
    assert isinstance(inst.payload, BetweennessSet)
    planted = tuple(int(v) for v in truth.arrangement.split())

    ordering = consistent_ordering_btw(inst.payload)

    assert ordering in (planted, planted[::-1])


def test_consistent_ordering_is_exact_on_five_vertices() -> None:
    """
    arrange: every dense betweenness set on 5 vertices.
    act: look for a consistent ordering.
    assert: one is found exactly when no 4 vertices form a conflict, and it yields the set.
    """
    triples = list(itertools.combinations(range(5), 3))
    quads = list(itertools.combinations(range(5), 4))
    for middles in itertools.product(*triples):
        b = BetweennessSet(vertices=tuple(range(5)), choice=dict(zip(triples, middles)))

        ordering = consistent_ordering_btw(b)

        conflict_free = not any(is_conflict4(b, quad) for quad in quads)
        assert isinstance(ordering, tuple) == conflict_free
        if conflict_free:
            assert BetweennessSet.from_ordering(ordering) == b


def test_single_inconsistent_triplet_is_a_conflict() -> None:
    """
    arrange: every ordering of 4 vertices with the middle of one triple moved.
    act: list the triplets inconsistent with the ordering.
    assert: the moved triple is the only one and the 4 vertices form a conflict.
    """
    for order in itertools.permutations(range(4)):
        b = BetweennessSet.from_ordering(order)
        for triple, middle in b.choice.items():
            for moved in (v for v in triple if v != middle):
                edited = b.with_choices({triple: moved})

                ordered = OrderedBtw(b=edited, sigma=order)

                assert inconsistent_triplets(ordered) == [triple]
                assert is_conflict4(edited, range(4))


def test_conflict_packing() -> None:
    """
    arrange: a consistent set and a single conflict.
    act: pack conflicts.
    assert: the packings are empty and of size one covering four vertices.
    """
    assert len(conflict_packing_btw(_betweenness(ORDERED_BTW_TEXT))) == 0
    single = conflict_packing_btw(_betweenness(FLIPPED_BTW_TEXT))
    assert len(single) == 1
    assert single.covered == frozenset(range(4))


def test_nice_ordering_seven() -> None:
    """
    arrange: the ordering 0..6 with the middle of 0 1 2 moved.
    act: pack conflicts and build the nice ordering.
    assert: 3 is the only other packed vertex and the ordering is 0..6.
    """
    b = _flipped_seven()
    found = conflict_packing_btw(b)

    ordered = nice_ordering_btw(b, found)

    assert found.conflicts == ((0, 1, 2, 3),)
    assert ordered.sigma == tuple(range(7))
    assert inconsistent_triplets(ordered) == [(0, 1, 2)]


@pytest.mark.parametrize("seed", range(8))
def test_nice_ordering_confines_inconsistent_triplets(seed: int) -> None:
    """
    arrange: a planted instance on 9 vertices with 2 perturbed triplets.
    act: build the nice ordering.
    assert: every inconsistent triplet only uses packed vertices.
    """
    b = generate_planted(ProblemKind.BTW, 9, 2, seed).payload
    assert isinstance(b, BetweennessSet)
    found = conflict_packing_btw(b)

    ordered = nice_ordering_btw(b, found)

    assert all(set(t) <= found.covered for t in inconsistent_triplets(ordered))


def test_simple_sunflower() -> None:
    """
    arrange: the ordering 0..6 with one inconsistent triplet 0 1 2.
    act: look for a sunflower of 3 petals, then in the consistent ordering.
    assert: the petals are the first vertices outside the triplet; none is found otherwise.
    """
    b = _flipped_seven()

    found = find_simple_sunflower(OrderedBtw(b=b, sigma=tuple(range(7))), 2)

    assert found == ((0, 1, 2), (3, 4, 5))
    consistent = BetweennessSet.from_ordering(range(7))
    assert find_simple_sunflower(OrderedBtw(b=consistent, sigma=tuple(range(7))), 2) is None


@pytest.mark.parametrize(
    "b, k",
    [
        pytest.param(_flipped_seven(), 1, id="flipped-k1"),
        pytest.param(_flipped_seven(), 2, id="flipped-k2"),
        *(
            pytest.param(generate_planted(ProblemKind.BTW, 8, 1, seed).payload, 1, id=f"8-{seed}")
            for seed in range(4)
        ),
    ],
)
def test_sunflower_centre_is_in_every_small_edition(b: BetweennessSet, k: int) -> None:
    """
    arrange: a nice ordering of a set whose packing fits the budget.
    act: find a sunflower with k + 1 petals.
    assert: every edition of at most k triples making the set consistent edits the centre.
    """
    found = conflict_packing_btw(b)
    assert len(found) <= k
    ordered = nice_ordering_btw(b, found)

    sunflower = find_simple_sunflower(ordered, k)

    if sunflower is None:
        assert not inconsistent_triplets(ordered)
        return
    centre, petals = sunflower
    assert len(petals) == k + 1
    solutions = [
        edition
        for edition in _editions(b, k)
        if not isinstance(consistent_ordering_btw(b.with_choices(edition)), packing.Conflict)
    ]
    assert solutions
    assert all(centre in edition for edition in solutions)


def test_solve_small_k() -> None:
    """
    arrange: a consistent set on 6 vertices and the set with one moved middle on 7.
    act: solve with budgets below n/5.
    assert: the consistent set needs no edit; the other needs its middle moved back.
    """
    assert solve_small_k(BetweennessSet.from_ordering(range(6)), 0) == {}
    assert solve_small_k(_flipped_seven(), 1) == {(0, 1, 2): 1}
    assert solve_small_k(_flipped_seven(), 0) is None


def test_solve_small_k_rejects_large_budget() -> None:
    """
    arrange: a set on 10 vertices.
    act: solve it with k = 2, not below n/5.
    assert: a PreconditionError is raised.
    """
    with pytest.raises(PreconditionError):
        solve_small_k(BetweennessSet.from_ordering(range(10)), 2)


@pytest.mark.parametrize(
    "generate",
    [pytest.param(generate_planted, id="planted"), pytest.param(generate_random, id="random")],
)
@pytest.mark.parametrize("seed", range(10))
def test_solve_small_k_matches_oracle(generate, seed: int) -> None:
    """
    arrange: an instance on 5 to 8 vertices with k below n/5.
    act: solve it with the small-budget solver and exactly.
    assert: both agree and a returned edition makes the set consistent within budget.
    """
    n = 5 + seed % 4
    k = (n - 1) // 5
    b = generate(ProblemKind.BTW, n, k, seed).payload
    assert isinstance(b, BetweennessSet)

    edition = solve_small_k(b, k)

    assert (edition is not None) == (oracle.exact_btw_enumerate(b).optimum <= k)
    if edition is not None:
        assert len(edition) <= k
        assert not isinstance(
            consistent_ordering_btw(b.with_choices(edition)), packing.Conflict
        )


def test_kernelize_gate_keeps_large_budget() -> None:
    """
    arrange: a planted instance with n = 10 and k = 2.
    act: kernelize it.
    assert: it is returned unchanged since n <= 5k.
    """
    inst = generate_planted(ProblemKind.BTW, 10, 2, 4)

    report = kernelize_btw(inst)

    assert report.verdict is KernelVerdict.REDUCED
    assert report.reduced == inst
    assert report.trace_lines() == []


def test_kernelize_solves_small_budget() -> None:
    """
    arrange: the ordering 0..6 with one moved middle, k = 1 then k = 0.
    act: kernelize it.
    assert: with k = 1 the edit is applied and the empty instance remains; with k = 0 it
        is a trivial No-instance.
    """
    yes = kernelize_btw(ParamInstance(kind=ProblemKind.BTW, payload=_flipped_seven(), k=1))
    no = kernelize_btw(ParamInstance(kind=ProblemKind.BTW, payload=_flipped_seven(), k=0))

    assert yes.verdict is KernelVerdict.REDUCED
    assert yes.trace_lines() == ["RULE5 edited=0-1-2", "SOLVE edition=0-1-2"]
    assert yes.reduced.payload.n == 0 and yes.reduced.k == 0
    assert no.verdict is KernelVerdict.TRIVIAL_NO
    assert no.reduced == TRIVIAL_NO
    assert no.trace_lines() == ["SOLVE no", "NO reason=small-k-solver dk=0"]


@pytest.mark.parametrize("seed", range(3))
def test_kernelize_planted_twenty(seed: int) -> None:
    """
    arrange: a planted instance on 20 vertices with 3 perturbed triplets.
    act: kernelize it.
    assert: it is solved outright into the empty instance.
    """
    report = kernelize_btw(generate_planted(ProblemKind.BTW, 20, 3, seed))

    assert report.verdict is KernelVerdict.REDUCED
    assert report.reduced.payload.n == 0
    assert report.trace_lines()[-1].startswith("SOLVE edition=")


@pytest.mark.parametrize("seed", range(10))
def test_kernelize_output_is_bounded_or_trivial(seed: int) -> None:
    """
    arrange: a random instance on 5 to 14 vertices with k from 0 to 3.
    act: kernelize it.
    assert: the output has at most 5k vertices or is the canonical No-instance.
    """
    inst = generate_random(ProblemKind.BTW, 5 + seed, seed % 4, seed)

    report = kernelize_btw(inst)

    if report.verdict is KernelVerdict.TRIVIAL_NO:
        assert report.reduced == TRIVIAL_NO
    else:
        assert report.reduced.payload.n <= 5 * report.reduced.k


def test_trivial_no_is_a_conflict() -> None:
    """
    arrange: none.
    act: solve the canonical No-instance exactly.
    assert: it needs one edit and has budget 0.
    """
    assert isinstance(TRIVIAL_NO.payload, BetweennessSet)
    assert oracle.exact_btw_enumerate(TRIVIAL_NO.payload).optimum == 1
