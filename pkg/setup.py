#!/usr/bin/env python
# -*- coding: utf-8 -*-

import io
import os
import subprocess
import sys
from ast import parse
from os import path

from setuptools import setup

if "READTHEDOCS" in os.environ:
    # When building with readthedocs, install the dependencies too.
    for reqs in ["requirements.txt", "suggestions.txt"]:
        if os.path.isfile(reqs):
            subprocess.check_call([sys.executable, "-m", "pip", "install", "-r", reqs])


# VERSION

with open(path.join("src", "cardsearch", "__init__.py")) as f:
    __version__ = parse(next(filter(lambda line: line.startswith("__version__"), f))).body[0].value.value


def readme_to_long_description():
    """
    Cut the long description before the attribution section of the README.
    """
    long_description = io.open("README.rst", encoding="utf-8").read()
    cut = long_description.index("Attribution & License")
    return str(long_description[:cut])


setup(
    name="cardsearch",
    description="Heuristic-augmented Monte Carlo tree search on a small collectible card game",
    author="The cardsearch developers",
    version=__version__,
    package_dir={"": "src"},
    packages=[
        "cardsearch",
        "cardsearch.game",
        "cardsearch.algorithms",
        "cardsearch.features",
        "cardsearch.nn",
        "cardsearch.tools",
    ],
    package_data={"cardsearch": ["data/*.json"]},
    install_requires=["numpy", "scipy", "pandas>=1.5"],
    extras_require={"plot": ["matplotlib"]},
    entry_points={"console_scripts": ["cardsearch=cardsearch.cli:main"]},
    license="GNU General Public License, version 2 or later",
    long_description=readme_to_long_description(),
)
