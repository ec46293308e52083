# Copyright 2024 conflictpack authors.
# See LICENSE file for licensing details.

"""pytest fixtures for the unit tests."""
import pytest

from conflictpack.instances import Tournament, parse_instance

from .constants import THREE_CYCLE_TEXT


@pytest.fixture(name="three_cycle")
def three_cycle_fixture() -> Tournament:
    """The directed triangle 0 -> 1 -> 2 -> 0."""
    return parse_instance(THREE_CYCLE_TEXT).payload  # type: ignore[return-value]


@pytest.fixture(name="rotational_five")
def rotational_five_fixture() -> Tournament:
    """The tournament on 0..4 where i beats i+1 and i+2 mod 5."""
    winner = {}
    for u in range(5):
        for step in (1, 2):
            v = (u + step) % 5
            winner[(min(u, v), max(u, v))] = u
    return Tournament(vertices=tuple(range(5)), winner=winner)
