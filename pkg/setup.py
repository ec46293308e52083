# Copyright 2024 conflictpack authors.
# See LICENSE file for licensing details.

import pathlib

from setuptools import find_packages, setup

requirements_txt = pathlib.Path(__file__).parent / "requirements.txt"
requirements = requirements_txt.read_text(encoding="utf-8").splitlines()

setup(
    name="conflictpack",
    version="0.1.0",
    description="Conflict Packing kernels for FAST, dense RTI and Betweenness in Tournaments",
    author="conflictpack authors",
    packages=find_packages(exclude=["tests", "tests.*"]),
    install_requires=requirements,
    entry_points={"console_scripts": ["conflictpack=conflictpack.cli:main"]},
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: Apache Software License",
        "Operating System :: OS Independent",
        "Programming Language :: Python :: 3",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    python_requires=">=3.10",
)
