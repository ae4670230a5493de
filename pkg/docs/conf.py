# Sphinx configuration for the comdef documentation.
import os
import sys

sys.path.insert(0, os.path.abspath(".."))

from comdef import __version__  # noqa: E402

project = "comdef"
copyright = "2026, comdef developers"
author = "comdef developers"
release = __version__

extensions = ["myst_parser", "numpydoc", "sphinx.ext.autodoc"]
myst_enable_extensions = ["colon_fence"]
numpydoc_show_class_members = False

templates_path = ["_templates"]
exclude_patterns = ["_build", "Thumbs.db", ".DS_Store"]

html_theme = "furo"
html_static_path = ["_static"]
