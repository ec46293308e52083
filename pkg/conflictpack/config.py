# Copyright 2024 conflictpack authors.
# See LICENSE file for licensing details.

"""Command line run configuration."""
import itertools
import os
import pathlib
import typing

# pydantic is causing this no-name-in-module problem
from pydantic import (  # pylint: disable=no-name-in-module
    BaseModel,
    Field,
    ValidationError,
    field_validator,
    model_validator,
)

from conflictpack.exceptions import InvalidConfigError
from conflictpack.instances import ProblemKind

LOG_LEVEL_ENV = "CONFLICTPACK_LOG_LEVEL"

_REQUIRED: dict[str, tuple[str, ...]] = {
    "generate": ("problem", "n", "k"),
    "kernelize": (),
    "solve": (),
    "verify": ("problem", "trials"),
}


class RunConfig(BaseModel):  # pylint: disable=too-few-public-methods
    """Represent the options of one command line run.

    Attrs:
        command: the sub-command.
        problem: FAST, RTI or BTW, in any case.
        n: vertex count of generated instances.
        k: budget of generated instances.
        seed: random seed.
        trials: number of verification trials.
        input: instance file, standard input when unset.
        output: output file, standard output when unset.
        method: solver used by ``solve``, ``exact`` or ``small-k``.
        exact: whether ``kernelize`` also checks the kernel against the exact oracle.
    """

    command: typing.Literal["generate", "kernelize", "solve", "verify"]
    problem: str | None = Field(default=None, pattern="(?i)^(FAST|RTI|BTW)$")
    n: int | None = Field(default=None, ge=3)
    k: int | None = Field(default=None, ge=0)
    seed: int = 0
    trials: int | None = Field(default=None, ge=1)
    input: pathlib.Path | None = None
    output: pathlib.Path | None = None
    method: str = Field(default="exact", pattern="^(exact|small-k)$")
    exact: bool = False

    @field_validator("problem")
    @staticmethod
    def to_upper(value: str | None) -> str | None:
        """Convert the problem name to uppercase.

        Args:
            value: the input value.

        Returns:
            The problem name in uppercase.
        """
        return value.upper() if value is not None else None

    @model_validator(mode="after")
    def check_required(self) -> "RunConfig":
        """Check that the options needed by the command are set.

        Returns:
            The validated configuration.

        Raises:
            ValueError: if an option needed by the command is missing.
        """
        missing = [name for name in _REQUIRED[self.command] if getattr(self, name) is None]
        if missing:
            flags = " ".join(f"--{name}" for name in missing)
            raise ValueError(f"{self.command} needs {flags}")
        return self

    @property
    def kind(self) -> ProblemKind | None:
        """Return the problem as a ProblemKind."""
        return ProblemKind(self.problem) if self.problem else None

    @property
    def log_level(self) -> str:
        """Get the log level from the environment.

        Returns:
            The level name, ``WARNING`` by default.
        """
        return os.environ.get(LOG_LEVEL_ENV, "WARNING").upper()

    @classmethod
    def from_options(cls, command: str, **options: typing.Any) -> "RunConfig":
        """Validate command line options.

        Args:
            command: the sub-command.
            options: the option values.

        Returns:
            The run configuration.

        Raises:
            InvalidConfigError: if an option is invalid or missing.
        """
        try:
            return cls.model_validate({"command": command, **options})
        except ValidationError as exc:
            error_fields = set(
                itertools.chain.from_iterable(error["loc"] for error in exc.errors())
            )
            error_field_str = " ".join(
                f"--{f}".replace("_", "-") for f in sorted(map(str, error_fields))
            )
            details = "; ".join(
                str(error["msg"]).removeprefix("Value error, ")
                for error in exc.errors()
                if not error["loc"]
            )
            parts = ("invalid configuration:", error_field_str, details)
            message = " ".join(part for part in parts if part)
            raise InvalidConfigError(message) from exc
