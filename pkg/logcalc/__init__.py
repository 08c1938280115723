# -*- coding: utf-8 -*-
"""Logarithm representations of evolution-family generators and the
Cauchy problems they solve"""

__version__ = '0.1.0'
