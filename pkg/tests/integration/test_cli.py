# Copyright 2024 conflictpack authors.
# See LICENSE file for licensing details.

"""Command line integration tests."""
import pathlib

import pytest

from conflictpack import cli as cli_module
from conflictpack.instances import (
    BetweennessSet,
    ParamInstance,
    ProblemKind,
    Tournament,
    parse_instance,
    write_instance,
)

from ..unit.constants import (
    CATERPILLAR_RTI_TEXT,
    CONFLICT_RTI_TEXT,
    THREE_CYCLE_TEXT,
    TRANSITIVE_4_TEXT,
)


def _text(inst: ParamInstance) -> str:
    return write_instance(inst).decode("ascii")


def test_generate(run, tmp_path: pathlib.Path) -> None:
    """
    arrange: two output files.
    act: generate the same planted FAST instance twice.
    assert: the files are identical, complete, and come with the ground truth.
    """
    first, second = tmp_path / "first.txt", tmp_path / "second.txt"

    for output in (first, second):
        result = run(
            "generate", "--problem", "fast", "--n", 20, "--k", 3, "--seed", 7, "--output", output
        )
        assert result.exit_code == 0

    lines = first.read_text(encoding="ascii").splitlines()
    assert lines[0] == "FAST 20 3"
    assert len(lines) == 1 + 190
    assert first.read_bytes() == second.read_bytes()
    truth = (tmp_path / "first.txt.truth").read_text(encoding="ascii").splitlines()
    assert truth[0].startswith("truth ")
    assert len([line for line in truth if line.startswith("perturbed ")]) == 3


def test_generate_rti_line_count(run, tmp_path: pathlib.Path) -> None:
    """
    arrange: an output file.
    act: generate a planted RTI instance on 8 leaves.
    assert: the file holds a header and one line per triple.
    """
    output = tmp_path / "rti.txt"

    result = run("generate", "--problem", "RTI", "--n", 8, "--k", 2, "--output", output)

    assert result.exit_code == 0
    assert len(output.read_text(encoding="ascii").splitlines()) == 57


@pytest.mark.parametrize(
    "args",
    [
        pytest.param(["--problem", "XYZ", "--n", 5, "--k", 1], id="unknown-problem"),
        pytest.param(["--problem", "FAST", "--k", 1], id="missing-n"),
        pytest.param(["--problem", "FAST", "--n", 4, "--k", 7], id="budget-too-large"),
    ],
)
def test_generate_rejects_bad_options(run, args: list) -> None:
    """
    arrange: invalid generate options.
    act: run generate.
    assert: it exits with status 2.
    """
    assert run("generate", *args).exit_code == 2


def test_kernelize_transitive(run, instance_file, tmp_path: pathlib.Path) -> None:
    """
    arrange: a transitive tournament.
    act: kernelize it.
    assert: the empty kernel is written and the trace holds the Rule 1 step.
    """
    output = tmp_path / "kernel.txt"

    result = run("kernelize", "--input", instance_file(TRANSITIVE_4_TEXT), "--output", output)

    assert result.exit_code == 0
    assert output.read_text(encoding="ascii") == "FAST 0 1\n"
    trace = (tmp_path / "kernel.txt.trace").read_text(encoding="ascii")
    assert trace == "RULE1 removed=0,1,2,3\n"


def test_kernelize_trivial_no(run, tmp_path: pathlib.Path) -> None:
    """
    arrange: the three cycle with k = 0, on standard input.
    act: kernelize it.
    assert: it exits with status 1 and the trace gives the reason.
    """
    output = tmp_path / "kernel.txt"

    result = run("kernelize", "--output", output, stdin=b"FAST 3 0\n0 1\n1 2\n2 0\n")

    assert result.exit_code == 1
    assert parse_instance(output.read_bytes()).k == 0
    trace = (tmp_path / "kernel.txt.trace").read_text(encoding="ascii")
    assert trace.startswith("NO reason=packing-exceeds-budget")


def test_kernelize_exact(run, instance_file, tmp_path: pathlib.Path) -> None:
    """
    arrange: the transitive order 0..5 with the arc between 0 and 5 reversed, k = 1.
    act: kernelize it, checking the kernel with the exact oracle.
    assert: the trace ends with the optima before and after.
    """
    inst = ParamInstance(
        kind=ProblemKind.FAST,
        payload=Tournament.from_ordering(range(6)).with_reversed([(0, 5)]),
        k=1,
    )
    output = tmp_path / "kernel.txt"

    result = run("kernelize", "--input", instance_file(_text(inst)), "--output", output, "--exact")

    assert result.exit_code == 0
    trace = (tmp_path / "kernel.txt.trace").read_text(encoding="ascii").splitlines()
    assert trace[0] == "RULE2 reversed=5>0 dk=1"
    assert trace[-1] == "EXACT before=1 after=0"


def test_generate_then_kernelize(run, tmp_path: pathlib.Path) -> None:
    """
    arrange: a planted FAST instance on 30 vertices with k = 4.
    act: kernelize it.
    assert: the kernel has at most 4k vertices.
    """
    planted, kernel = tmp_path / "planted.txt", tmp_path / "kernel.txt"
    run("generate", "--problem", "FAST", "--n", 30, "--k", 4, "--seed", 1, "--output", planted)

    result = run("kernelize", "--input", planted, "--output", kernel)

    assert result.exit_code == 0
    reduced = parse_instance(kernel.read_bytes())
    assert reduced.payload.n <= 4 * reduced.k


@pytest.mark.parametrize(
    "text, exit_code, first_line",
    [
        pytest.param(THREE_CYCLE_TEXT, 0, "optimum 1", id="three-cycle"),
        pytest.param(CATERPILLAR_RTI_TEXT, 0, "optimum 0", id="consistent-rti"),
        pytest.param(CONFLICT_RTI_TEXT, 1, "optimum 1", id="conflict-rti"),
    ],
)
def test_solve_exact(
    run, instance_file, tmp_path: pathlib.Path, text: str, exit_code: int, first_line: str
) -> None:
    """
    arrange: a small instance.
    act: solve it exactly.
    assert: the optimum and a witness are written; the status tells whether it fits k.
    """
    output = tmp_path / "solution.txt"

    result = run("solve", "--input", instance_file(text), "--output", output)

    assert result.exit_code == exit_code
    lines = output.read_text(encoding="ascii").splitlines()
    assert lines[0] == first_line
    assert lines[1].startswith("witness ")


def test_solve_small_k(run, instance_file, tmp_path: pathlib.Path) -> None:
    """
    arrange: the ordering 0..6 with the middle of 0 1 2 moved, k = 1 then k = 0.
    act: solve it with the small-budget solver.
    assert: the single edit is found with k = 1; with k = 0 the answer is NO.
    """
    flipped = BetweennessSet.from_ordering(range(7)).with_choices({(0, 1, 2): 0})
    output = tmp_path / "solution.txt"

    yes = run(
        "solve",
        "--input",
        instance_file(_text(ParamInstance(kind=ProblemKind.BTW, payload=flipped, k=1))),
        "--output",
        output,
        "--method",
        "small-k",
    )

    assert yes.exit_code == 0
    assert output.read_text(encoding="ascii") == "edition 1\nedit 0-1-2\n"
    no = run(
        "solve",
        "--input",
        instance_file(_text(ParamInstance(kind=ProblemKind.BTW, payload=flipped, k=0))),
        "--output",
        output,
        "--method",
        "small-k",
    )
    assert no.exit_code == 1
    assert output.read_text(encoding="ascii") == "NO\n"


def test_solve_small_k_rejects_fast(run, instance_file) -> None:
    """
    arrange: a FAST instance.
    act: solve it with the small-budget solver.
    assert: it exits with status 2.
    """
    result = run("solve", "--input", instance_file(THREE_CYCLE_TEXT), "--method", "small-k")

    assert result.exit_code == 2


def test_solve_small_k_rejects_large_budget(run, instance_file) -> None:
    """
    arrange: a BTW instance on 10 vertices with k = 2, not below n/5.
    act: solve it with the small-budget solver.
    assert: it exits with status 2 and names the budget.
    """
    ten = BetweennessSet.from_ordering(range(10))
    inst = ParamInstance(kind=ProblemKind.BTW, payload=ten, k=2)

    result = run("solve", "--input", instance_file(_text(inst)), "--method", "small-k")

    assert result.exit_code == 2
    assert "k < n/5" in result.output


def test_unexpected_value_error_is_internal(
    run, instance_file, monkeypatch: pytest.MonkeyPatch
) -> None:
    """
    arrange: a FAST kernel failing with a plain ValueError.
    act: kernelize a FAST instance.
    assert: it exits with status 3, not as an input error.
    """

    def broken(inst: ParamInstance):
        raise ValueError(f"unpacking failed on {inst.kind.value}")

    monkeypatch.setitem(
        cli_module._KERNELS, ProblemKind.FAST, broken  # pylint: disable=protected-access
    )

    result = run("kernelize", "--input", instance_file(TRANSITIVE_4_TEXT))

    assert result.exit_code == 3
    assert "internal error" in result.output


@pytest.mark.parametrize(
    "text",
    [
        pytest.param("FAST 3\n0 1\n", id="short-header"),
        pytest.param("FAST 3 1\n0 1\n1 2\n", id="missing-pair"),
        pytest.param("BTW 4 0\n0 1 5\n", id="vertex-out-of-range"),
    ],
)
def test_malformed_input(run, instance_file, text: str) -> None:
    """
    arrange: a malformed instance file.
    act: kernelize it.
    assert: it exits with status 2.
    """
    assert run("kernelize", "--input", instance_file(text)).exit_code == 2


def test_solve_above_oracle_limit(run, instance_file) -> None:
    """
    arrange: a BTW instance on 9 vertices.
    act: solve it exactly.
    assert: it exits with status 2.
    """
    inst = ParamInstance(kind=ProblemKind.BTW, payload=BetweennessSet.from_ordering(range(9)), k=0)

    assert run("solve", "--input", instance_file(_text(inst))).exit_code == 2


@pytest.mark.parametrize("problem", ["FAST", "RTI", "BTW"])
def test_verify(run, tmp_path: pathlib.Path, verify_trials: int, problem: str) -> None:
    """
    arrange: a number of trials.
    act: run the randomized property checks.
    assert: every check passes and the summary is written.
    """
    output = tmp_path / "verify.txt"

    result = run("verify", "--problem", problem, "--trials", verify_trials, "--output", output)

    assert result.exit_code == 0
    lines = output.read_text(encoding="ascii").splitlines()
    assert " sound, max " in lines[0]
    assert not any(line.startswith("failed") for line in lines)


def test_verify_rejects_zero_trials(run) -> None:
    """
    arrange: none.
    act: run verify with no trial.
    assert: it exits with status 2.
    """
    assert run("verify", "--problem", "FAST", "--trials", 0).exit_code == 2
