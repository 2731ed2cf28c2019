# SPDX-FileCopyrightText: 2024 metagee contributors
#
# SPDX-License-Identifier: MIT

"""A setuptools based setup module.

See:
https://packaging.python.org/en/latest/distributing.html
"""

from setuptools import setup

# To use a consistent encoding
from codecs import open
from os import path

here = path.abspath(path.dirname(__file__))

# Get the long description from the README file
with open(path.join(here, "README.rst"), encoding="utf-8") as f:
    long_description = f.read()

setup(
    name="metagee",
    use_scm_version=True,
    setup_requires=["setuptools_scm"],
    description="Numerical checks of metallic and Golden Riemannian submanifold geometry.",
    long_description=long_description,
    long_description_content_type="text/x-rst",
    author="metagee contributors",
    install_requires=[
        "numpy",
    ],
    extras_require={
        "test": ["pytest"],
    },
    python_requires=">=3.8",
    license="MIT",
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Mathematics",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
    ],
    keywords="differential geometry metallic structure golden structure slant submanifold "
    "warped product",
    packages=["metagee"],
    package_data={"metagee": ["fixtures/*.json"]},
    entry_points={"console_scripts": ["metagee = metagee.cli:main"]},
)
