# -*- coding: utf-8 -*-
#
# cardsearch documentation build configuration file.
#
# This file is execfile()d with the current directory set to its
# containing dir.

import os
import sys
from ast import parse

with open(os.path.join("..", "src", "cardsearch", "__init__.py")) as f:
    __version__ = parse(next(filter(lambda line: line.startswith("__version__"), f))).body[0].value.value

sys.path.insert(0, os.path.abspath(os.path.join("..", "src")))

# -- General configuration ------------------------------------------------

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.doctest",
    "sphinx.ext.todo",
    "sphinx.ext.coverage",
    "sphinx.ext.mathjax",
    "sphinx.ext.viewcode",
]

templates_path = ["_templates"]
source_suffix = ".rst"
master_doc = "index"

project = "cardsearch"
copyright = "2026, cardsearch developers"
author = "cardsearch developers"

version = __version__
release = __version__

language = "en"
exclude_patterns = ["_build"]
pygments_style = "sphinx"
todo_include_todos = True

# matplotlib is optional
autodoc_mock_imports = ["matplotlib"]

# -- Options for HTML output ----------------------------------------------

html_theme = "alabaster"
html_static_path = []
htmlhelp_basename = "cardsearchdoc"

# -- Options for LaTeX output ---------------------------------------------

latex_documents = [
    (master_doc, "cardsearch.tex", "cardsearch Documentation", author, "manual"),
]

# -- Options for manual page output ---------------------------------------

man_pages = [(master_doc, "cardsearch", "cardsearch Documentation", [author], 1)]

# -- Options for Texinfo output -------------------------------------------

texinfo_documents = [
    (
        master_doc,
        "cardsearch",
        "cardsearch Documentation",
        author,
        "cardsearch",
        "Heuristic-augmented Monte Carlo tree search on a small card game.",
        "Miscellaneous",
    ),
]
