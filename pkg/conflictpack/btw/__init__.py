# Copyright 2024 conflictpack authors.
# See LICENSE file for licensing details.

"""BTW kernel entrypoint."""

# flake8 complains imported but unused
from .kernel import kernelize_btw  # noqa: disable=F401
