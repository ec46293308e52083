# Copyright 2024 conflictpack authors.
# See LICENSE file for licensing details.

"""Tests module."""
