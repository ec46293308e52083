# Copyright 2024 conflictpack authors.
# See LICENSE file for licensing details.

"""Helpers shared by the dense triple-choice kernels."""
