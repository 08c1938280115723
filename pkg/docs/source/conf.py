#!/usr/bin/env python3
# -*- coding: utf-8 -*-
#
# logcalc documentation build configuration file

import os
import sys

sys.path.insert(0, os.path.abspath('../..'))

import logcalc  # noqa

# -- General configuration ------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.mathjax',
    'sphinx.ext.viewcode',
]

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = 'logcalc'
copyright = '2026, the logcalc developers'
author = 'the logcalc developers'

version = '.'.join(logcalc.__version__.split('.')[:2])
release = logcalc.__version__

language = 'en'
exclude_patterns = []
pygments_style = 'sphinx'
todo_include_todos = False

# -- Options for HTML output ----------------------------------------------

html_theme = 'sphinx_rtd_theme'
html_static_path = []
htmlhelp_basename = 'logcalcdoc'

# -- Options for manual page output ---------------------------------------

man_pages = [
    (master_doc, 'logcalc', 'logcalc Documentation', [author], 1)
]
