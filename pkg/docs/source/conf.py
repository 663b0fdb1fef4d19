"""Configure Sphinx documentation builder.

Provides information needed to build docs. Includes HTML theme and other options.
"""

import datetime
import os
import sys

sys.path.insert(0, os.path.abspath("../.."))

import stram  # noqa: E402

# -- Project information ---------------------------------------------------
current_year = datetime.datetime.now().year

project = "stram"
copyright = f"{current_year}, stram developers (BSD-3 License)"
author = "stram developers"

release = stram.__version__
version = stram.__version__

# -- General configuration ---------------------------------------------------
extensions = [
    "sphinx.ext.autosectionlabel",
    "sphinx.ext.autodoc",
    "sphinx.ext.autosummary",
    "sphinx.ext.intersphinx",
    "sphinx.ext.viewcode",
    "myst_parser",
    "numpydoc",
    "sphinx_copybutton",
    "sphinx_design",
]

myst_enable_extensions = ["colon_fence"]
myst_heading_anchors = 2

exclude_patterns = ["_build", "Thumbs.db", ".DS_Store", "**.ipynb_checkpoints"]

language = "en"

source_suffix = {
    ".rst": "restructuredtext",
    ".md": "markdown",
}

master_doc = "index"

pygments_style = "sphinx"

# Member-order follows the source so related helpers stay together.
autodoc_default_options = {
    "members": True,
    "member-order": "bysource",
}

# generate autosummary even if no references
autosummary_generate = True

add_function_parentheses = False

# -- Options for HTML output -------------------------------------------------
html_theme = "pydata_sphinx_theme"

html_theme_options = {
    "logo": {
        "text": "stram",
        "alt_text": "stram",
    },
    "show_nav_level": 1,
    "show_prev_next": False,
    "use_edit_page_button": False,
    "navbar_center": ["navbar-nav"],
    "header_links_before_dropdown": 6,
}

html_context = {
    "doc_path": "docs/source/",
    "default_mode": "light",
}

htmlhelp_basename = "stramdoc"

# -- Options for LaTeX output ------------------------------------------------
latex_documents = [
    (master_doc, "stram.tex", "stram Documentation", "stram developers", "manual"),
]

man_pages = [(master_doc, "stram", "stram Documentation", [author], 1)]

# -- Options for numpydoc extension ------------------------------------------
numpydoc_show_class_members = True
# see https://github.com/numpy/numpydoc/issues/69
numpydoc_class_members_toctree = False

numpydoc_validation_checks = {"all", "GL01", "SA01"}
numpydoc_validation_exclude = [r".\\tests\\.*", r"\.__init__$"]

# -- Options for sphinx-copybutton extension----------------------------------
copybutton_prompt_text = r">>> |\.\.\. |\$ |In \[\d*\]: | {2,5}\.\.\.: | {5,8}: "
copybutton_prompt_is_regexp = True

# -- Options for intersphinx extension ---------------------------------------
intersphinx_mapping = {
    "python": (f"https://docs.python.org/{sys.version_info.major}", None),
    "numpy": ("https://numpy.org/doc/stable/", None),
    "scipy": ("https://docs.scipy.org/doc/scipy/", None),
    "polars": ("https://docs.pola.rs/api/python/stable/", None),
    "joblib": ("https://joblib.readthedocs.io/en/stable/", None),
}
