# Copyright 2024 conflictpack authors.
# See LICENSE file for licensing details.

"""RTI kernel entrypoint."""

# flake8 complains imported but unused
from .kernel import kernelize_rti  # noqa: disable=F401
