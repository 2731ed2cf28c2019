# -*- coding: utf-8 -*-

# SPDX-FileCopyrightText: 2024 metagee contributors
#
# SPDX-License-Identifier: MIT

import os
import sys

sys.path.insert(0, os.path.abspath(".."))

# -- General configuration ------------------------------------------------

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.intersphinx",
    "sphinx.ext.napoleon",
    "sphinx.ext.todo",
]

intersphinx_mapping = {
    "python": ("https://docs.python.org/3", None),
    "numpy": ("https://numpy.org/doc/stable/", None),
}

source_suffix = ".rst"
master_doc = "index"

project = "metagee"
copyright = "2024 metagee contributors"
author = "metagee contributors"

version = "0.1"
release = "0.1"

exclude_patterns = ["_build", "Thumbs.db", ".DS_Store", ".env"]

# The reST default role (used for this markup: `text`) to use for all
# documents.
default_role = "any"

add_function_parentheses = True
pygments_style = "sphinx"

todo_include_todos = False
todo_emit_warnings = True

napoleon_numpy_docstring = False

# -- Options for HTML output ----------------------------------------------

on_rtd = os.environ.get("READTHEDOCS", None) == "True"

if not on_rtd:  # only import and set the theme if we're building docs locally
    try:
        import sphinx_rtd_theme

        html_theme = "sphinx_rtd_theme"
        html_theme_path = [sphinx_rtd_theme.get_html_theme_path(), "."]
    except ImportError:
        html_theme = "default"
        html_theme_path = ["."]
else:
    html_theme_path = ["."]

htmlhelp_basename = "metageedoc"

# -- Options for manual page output ---------------------------------------

man_pages = [
    (master_doc, "metagee", "metagee Documentation", [author], 1),
]
