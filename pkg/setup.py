#!/usr/bin/env python

from os.path import exists

from setuptools import setup

version = {}
with open("comdef/_version.py") as f:
    exec(f.read(), version)

setup(
    name="comdef",
    version=version["__version__"],
    description="First-order definable sets in finite lattices of commutative semigroup varieties",
    classifiers=[
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: BSD License",
        "Operating System :: OS Independent",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    license="BSD",
    keywords=["lattice", "first-order logic", "semigroup varieties", "universal algebra"],
    packages=["comdef"],
    package_data={"comdef": ["fixtures/*.json"]},
    python_requires=">=3.8",
    long_description_content_type="text/markdown",
    long_description=open("README.md").read() if exists("README.md") else "",
    install_requires=[
        "fsspec>=2021.10.1",
        "numpy>=1.20",
        "networkx>=2.6",
    ],
    extras_require={
        "docs": ["sphinx", "myst-parser", "furo", "numpydoc"],
    },
    tests_require=["pytest", "pytest-mock", "pytest-cov", "hypothesis"],
    zip_safe=False,
    entry_points={
        "console_scripts": [
            "comdef=comdef.cli:run",
        ],
    },
)
