# Copyright 2024 conflictpack authors.
# See LICENSE file for licensing details.

"""Command line front end: generate, kernelize, solve and verify instances."""
import contextlib
import logging
import pathlib
import typing

import click

from conflictpack import oracle
from conflictpack.btw.kernel import kernelize_btw, solve_small_k
from conflictpack.config import RunConfig
from conflictpack.exceptions import (
    InstanceFormatError,
    InvalidConfigError,
    KernelInvariantError,
    OracleLimitError,
    PreconditionError,
)
from conflictpack.fast.kernel import kernelize_fast
from conflictpack.instances import (
    BetweennessSet,
    KernelReport,
    KernelVerdict,
    ParamInstance,
    ProblemKind,
    format_betweenness_triplet,
    generate_planted_with_truth,
    parse_instance,
    write_instance,
)
from conflictpack.rti.kernel import kernelize_rti
from conflictpack.verify import run_verification

logger = logging.getLogger(__name__)

EXIT_NO = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3

_KERNELS: dict[ProblemKind, typing.Callable[[ParamInstance], KernelReport]] = {
    ProblemKind.FAST: kernelize_fast,
    ProblemKind.RTI: kernelize_rti,
    ProblemKind.BTW: kernelize_btw,
}


class InputError(click.ClickException):
    """Input the command cannot work on: malformed file, out-of-range request."""

    exit_code = EXIT_USAGE


def _load(command: str, **options: typing.Any) -> RunConfig:
    """Validate the options and set up logging.

    Args:
        command: the sub-command.
        options: the option values.

    Returns:
        The run configuration.

    Raises:
        UsageError: if the options are invalid.
    """
    try:
        config = RunConfig.from_options(command, **options)
    except InvalidConfigError as exc:
        raise click.UsageError(exc.msg) from exc
    logging.basicConfig(
        level=config.log_level, format="%(asctime)s %(levelname)s %(name)s: %(message)s"
    )
    logger.debug("running %s with %s", command, config)
    return config


@contextlib.contextmanager
def _exit_statuses() -> typing.Iterator[None]:
    """Map library errors to exit statuses.

    Yields:
        Control to the command body.

    Raises:
        InputError: if the input is malformed or out of range.
        Exit: with status 3 if a kernel invariant breaks or an unexpected ValueError escapes.
    """
    try:
        yield
    except KernelInvariantError as exc:
        logger.error("kernel invariant broken: %s", exc.msg)
        click.echo(f"Error: internal invariant broken: {exc.msg}", err=True)
        raise click.exceptions.Exit(EXIT_INTERNAL) from exc
    except (InstanceFormatError, OracleLimitError, PreconditionError) as exc:
        raise InputError(exc.msg) from exc
    except ValueError as exc:
        logger.exception("unexpected error")
        click.echo(f"Error: internal error: {exc}", err=True)
        raise click.exceptions.Exit(EXIT_INTERNAL) from exc


def _read(config: RunConfig) -> ParamInstance:
    with click.open_file(str(config.input or "-"), "rb") as source:
        return parse_instance(source.read())


def _emit(config: RunConfig, data: bytes) -> None:
    with click.open_file(str(config.output or "-"), "wb") as target:
        target.write(data)


def _emit_sidecar(config: RunConfig, suffix: str, lines: typing.Iterable[str]) -> None:
    """Write side information next to the output, or to standard error.

    Args:
        config: the run configuration.
        suffix: the sidecar suffix.
        lines: the lines to write.
    """
    text = "".join(f"{line}\n" for line in lines)
    if config.output is None:
        click.echo(text, err=True, nl=False)
        return
    sidecar = config.output.with_name(f"{config.output.name}{suffix}")
    sidecar.write_text(text, encoding="ascii")


def _lines(lines: typing.Iterable[str]) -> bytes:
    return "".join(f"{line}\n" for line in lines).encode("ascii")


@click.group()
def cli() -> None:
    """Kernelize and solve FAST, dense RTI and BTW instances."""


_input_option = click.option(
    "--input", "input_", type=click.Path(path_type=pathlib.Path), help="Instance file."
)
_output_option = click.option(
    "--output", type=click.Path(path_type=pathlib.Path), help="Output file."
)


@cli.command()
@click.option("--problem", help="FAST, RTI or BTW.")
@click.option("--n", type=int, help="Number of vertices.")
@click.option("--k", type=int, help="Number of perturbed objects, also the budget.")
@click.option("--seed", type=int, default=0, show_default=True)
@_output_option
def generate(
    problem: str | None, n: int | None, k: int | None, seed: int, output: pathlib.Path | None
) -> None:
    """Write a planted instance and its ground truth."""
    config = _load("generate", problem=problem, n=n, k=k, seed=seed, output=output)
    with _exit_statuses():
        inst, truth = generate_planted_with_truth(
            typing.cast(ProblemKind, config.kind),
            typing.cast(int, config.n),
            typing.cast(int, config.k),
            config.seed,
        )
    _emit(config, write_instance(inst))
    _emit_sidecar(config, ".truth", truth.lines())


@cli.command()
@_input_option
@_output_option
@click.option("--exact", is_flag=True, help="Check the kernel against the exact oracle.")
def kernelize(input_: pathlib.Path | None, output: pathlib.Path | None, exact: bool) -> None:
    """Reduce an instance and write the kernel with its rule trace."""
    config = _load("kernelize", input=input_, output=output, exact=exact)
    with _exit_statuses():
        inst = _read(config)
        report = _KERNELS[inst.kind](inst)
        trace = report.trace_lines()
        if config.exact:
            before = oracle.solve_exact(inst.payload).optimum
            after = oracle.solve_exact(report.reduced.payload).optimum
            trace.append(f"EXACT before={before} after={after}")
            kept = report.verdict is KernelVerdict.REDUCED and after <= report.reduced.k
            if (before <= inst.k) != kept:
                raise KernelInvariantError(
                    f"kernel changed the answer: optimum {before} before, {after} after"
                )
    _emit(config, write_instance(report.reduced))
    _emit_sidecar(config, ".trace", trace)
    logger.info("%s kernel: %s", inst.kind.value, report.verdict.value)
    if report.verdict is KernelVerdict.TRIVIAL_NO:
        raise click.exceptions.Exit(EXIT_NO)


@cli.command()
@_input_option
@_output_option
@click.option("--method", default="exact", show_default=True, help="exact or small-k.")
def solve(input_: pathlib.Path | None, output: pathlib.Path | None, method: str) -> None:
    """Print the optimum and a witness, or a small-budget BTW edition."""
    config = _load("solve", input=input_, output=output, method=method)
    with _exit_statuses():
        inst = _read(config)
        if config.method == "small-k":
            if not isinstance(inst.payload, BetweennessSet):
                raise click.UsageError("--method small-k only solves BTW instances")
            edition = solve_small_k(inst.payload, inst.k)
            if edition is None:
                _emit(config, _lines(["NO"]))
                raise click.exceptions.Exit(EXIT_NO)
            _emit(
                config,
                _lines(
                    [
                        f"edition {len(edition)}",
                        *(
                            f"edit {format_betweenness_triplet(t, m)}"
                            for t, m in sorted(edition.items())
                        ),
                    ]
                ),
            )
            return
        result = oracle.solve_exact(inst.payload)
    _emit(config, _lines([f"optimum {result.optimum}", *result.witness_lines()]))
    if result.optimum > inst.k:
        raise click.exceptions.Exit(EXIT_NO)


@cli.command()
@click.option("--problem", help="FAST, RTI or BTW.")
@click.option("--trials", type=int, help="Number of seeded trials.")
@click.option("--seed", type=int, default=0, show_default=True)
@_output_option
def verify(
    problem: str | None, trials: int | None, seed: int, output: pathlib.Path | None
) -> None:
    """Run the randomized kernel property checks."""
    config = _load("verify", problem=problem, trials=trials, seed=seed, output=output)
    with _exit_statuses():
        report = run_verification(
            typing.cast(ProblemKind, config.kind), typing.cast(int, config.trials), config.seed
        )
    _emit(config, _lines(report.summary_lines()))
    if not report.ok:
        raise click.exceptions.Exit(EXIT_NO)


def main() -> None:
    """Run the command line."""
    cli()  # pylint: disable=no-value-for-parameter
