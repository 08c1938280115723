#!/usr/bin/env python
# -*- coding: utf-8 -*-

import os
import re
from setuptools import setup, find_packages


def parse_requirements(path):
    """Parse ``requirements.txt`` at ``path``."""
    requirements = []
    with open(path, 'rt') as reqs_f:
        for line in reqs_f:
            line = line.strip()
            if line.startswith('-r'):
                fname = line.split()[1]
                inner_path = os.path.join(
                    os.path.dirname(path), fname)
                requirements += parse_requirements(inner_path)
            elif line != '' and not line.startswith('#'):
                requirements.append(line)
    return requirements


def read_version(path):
    """Read ``__version__`` from ``path`` without importing the package"""
    with open(path, 'rt') as inputf:
        return re.search(
            r"^__version__ = '([^']+)'", inputf.read(), re.M).group(1)


with open('README.rst') as readme_file:
    readme = readme_file.read()

with open('HISTORY.rst') as history_file:
    history = history_file.read()

requirements = parse_requirements('requirements.txt')

test_requirements = parse_requirements('requirements/test.txt')

setup(
    name='logcalc',
    version=read_version(os.path.join('logcalc', '__init__.py')),
    description=(
        'Logarithm representations of evolution families and the Cauchy '
        'problems they solve'),
    long_description=readme + '\n\n' + history,
    packages=find_packages(exclude=['tests']),
    package_dir={
        'logcalc': 'logcalc',
    },
    package_data={
        'logcalc': ['data/*.json', 'data/scenarios/*.json'],
    },
    entry_points={
        'console_scripts': [
            'logcalc = logcalc.__main__:main',
        ]
    },
    include_package_data=True,
    install_requires=requirements,
    license='MIT license',
    zip_safe=False,
    keywords='logcalc evolution-family functional-calculus',
    classifiers=[
        'Development Status :: 2 - Pre-Alpha',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: MIT License',
        'Natural Language :: English',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Topic :: Scientific/Engineering :: Mathematics',
    ],
    python_requires='>=3.9',
    test_suite='tests',
    tests_require=test_requirements
)
