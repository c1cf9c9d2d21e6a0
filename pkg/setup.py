#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""The setup script."""

from setuptools import setup, find_packages

with open('README.md') as readme_file:
    readme = readme_file.read()

with open('HISTORY.rst') as history_file:
    history = history_file.read()

requirements = ['numpy>=1.17', 'scipy>=1.4', 'joblib>=0.14']

setup_requirements = [ ]

test_requirements = [ ]

setup(
    author="David Paul Cruz",
    author_email='davidcruz72@gmail.com',
    classifiers=[
        'Development Status :: 2 - Pre-Alpha',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: MIT License',
        'Natural Language :: English',
        'Programming Language :: Python :: 3.7',
        'Programming Language :: Python :: 3.8',
        'Topic :: Scientific/Engineering :: Bio-Informatics',
    ],
    description="Selective Sweep Utilities",
    install_requires=requirements,
    license="MIT license",
    long_description=readme + '\n\n' + history,
    include_package_data=True,
    package_data={'sweep_utils': ['configs/*.json']},
    keywords='sweep_utils',
    name='sweep_utils',
    packages=find_packages(include=['sweep_utils']),
    python_requires='>=3.7',
    setup_requires=setup_requirements,
    test_suite='tests',
    tests_require=test_requirements,
    version='0.1.0',
    zip_safe=False,
    entry_points={
        "console_scripts":[
            'sweep-utils=sweep_utils.sweep_utils:main',
            'run-sweeps=sweep_utils.run_sweeps:main',
            'get-sweep-spectrum=sweep_utils.get_sweep_spectrum:main',
            'get-sweep-duration=sweep_utils.get_sweep_duration:main',
            'get-ode-fixed-points=sweep_utils.get_ode_fixed_points:main',
            'run-bd-oracles=sweep_utils.run_bd_oracles:main',
        ]
    },
)
