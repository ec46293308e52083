# Copyright 2024 conflictpack authors.
# See LICENSE file for licensing details.

"""Fixtures for the command line integration tests."""
import pathlib

import pytest
from click.testing import CliRunner

from conflictpack.cli import cli


@pytest.fixture(scope="module", name="verify_trials")
def verify_trials_fixture(pytestconfig: pytest.Config) -> int:
    """Return the number of trials of each verify run."""
    return int(pytestconfig.getoption("--verify-trials"))


@pytest.fixture(name="runner")
def runner_fixture() -> CliRunner:
    """Return a click test runner."""
    return CliRunner()


@pytest.fixture(name="run")
def run_fixture(runner: CliRunner):
    """Return a function invoking the command line with the given arguments."""

    def run(*args: str, stdin: bytes | None = None):
        """Invoke the command line.

        Returns:
            The click result.
        """
        return runner.invoke(cli, [str(arg) for arg in args], input=stdin)

    return run


@pytest.fixture(name="instance_file")
def instance_file_fixture(tmp_path: pathlib.Path):
    """Return a function writing instance text to a temporary file."""

    def write(text: str, name: str = "instance.txt") -> pathlib.Path:
        """Write the instance.

        Returns:
            The file path.
        """
        path = tmp_path / name
        path.write_text(text, encoding="ascii")
        return path

    return write
