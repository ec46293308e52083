# Copyright 2024 conflictpack authors.
# See LICENSE file for licensing details.

"""FAST kernel entrypoint."""

# flake8 complains imported but unused
from .kernel import kernelize_fast  # noqa: disable=F401
