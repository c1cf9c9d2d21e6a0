#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# sweep_utils documentation build configuration file.
#
# This file is execfile()d with the current directory set to its
# containing dir.

import os
import sys
sys.path.insert(0, os.path.abspath('..'))

import sweep_utils

# -- General configuration ---------------------------------------------

extensions = ['sphinx.ext.autodoc', 'sphinx.ext.viewcode', 'sphinx.ext.mathjax']

# the numerical stack is not needed to render the API pages
autodoc_mock_imports = ['numpy', 'scipy', 'joblib']

templates_path = ['_templates']

source_suffix = '.rst'

master_doc = 'index'

project = u'sweep-utils'
copyright = u"2024, David Paul Cruz"
author = u"David Paul Cruz"

# The short X.Y version.
version = sweep_utils.__version__
# The full version, including alpha/beta/rc tags.
release = sweep_utils.__version__

language = None

exclude_patterns = ['_build', 'Thumbs.db', '.DS_Store']

pygments_style = 'sphinx'

todo_include_todos = False


# -- Options for HTML output -------------------------------------------

html_theme = 'alabaster'

html_static_path = ['_static']


# -- Options for HTMLHelp output ---------------------------------------

htmlhelp_basename = 'sweep_utilsdoc'


# -- Options for LaTeX output ------------------------------------------

latex_elements = {}

latex_documents = [
    (master_doc, 'sweep_utils.tex',
     u'sweep-utils Documentation',
     u'David Paul Cruz', 'manual'),
]


# -- Options for manual page output ------------------------------------

man_pages = [
    (master_doc, 'sweep_utils',
     u'sweep-utils Documentation',
     [author], 1)
]
