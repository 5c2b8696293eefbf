# -*- coding: utf-8 -*-
# Always prefer setuptools over distutils
from setuptools import setup, find_packages
from codecs import open  # To use a consistent encoding
from os import path

here = path.abspath(path.dirname(__file__))

# Get the long description from the relevant file
with open(path.join(here, 'README.md'), encoding='utf-8') as f:
    long_description = f.read()

setup(
    name='''jjcircuits-floquetmarkov''',

    version='0.1.0',

    description='''Floquet-Markov steady states of a pumped transmon and an inductively shunted transmon coupled to a readout oscillator''',
    long_description=long_description,
    long_description_content_type="text/markdown",

    license='AGPL',

    classifiers=[
        'Development Status :: 3 - Alpha',
        'License :: OSI Approved :: GNU Affero General Public License v3 or later (AGPLv3+)',
        'Programming Language :: Python :: 3',
        'Topic :: Scientific/Engineering :: Physics',
    ],

    keywords='''floquet markov transmon readout steady-state lindblad superconducting-circuits''',

    packages=find_packages(exclude=['contrib', 'docs']),
    namespace_packages=['jjcircuits'],

    install_requires=[
      # dependencies are pinned in ``requirements.txt``
      'attrs',
      'click',
      'click-plugins',
      'cligj',
      'munch',
      'numpy>=1.19',
      'scipy>=1.5',
      'matplotlib>=3.3',
    ],

    include_package_data=True,
    package_data={
        'jjcircuits.floquetmarkov': ['presets/*.json'],
    },

    # Further subcommands plug into the jjfm group through
    # jjcircuits.floquetmarkov.commands
    entry_points='''
        [console_scripts]
        jjfm=jjcircuits.floquetmarkov.plugin:cli
    ''',
)
