#!/usr/bin/env python3

# Copyright 2024 conflictpack authors.
# See LICENSE file for licensing details.

"""Conflict Packing kernels for dense ordering and supertree problems."""
