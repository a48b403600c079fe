# This file is part of the spherical-catenoid project
#
# Copyright (c) 2026 The spherical-catenoid developers - MIT License
# SPDX-License-Identifier: MIT

import os
import setuptools


def project_path(*sub_paths):
    project_dirpath = os.path.abspath(os.path.dirname(__file__))
    return os.path.join(project_dirpath, *sub_paths)


def read(*sub_paths):
    with open(project_path(*sub_paths), mode="rb") as fh:
        return fh.read().decode("utf-8")


install_requires = [
    line.strip()
    for line in read("requirements", "pypi.txt").splitlines()
    if line.strip() and not line.startswith("#") and not line.startswith("-")
]


long_description = "\n\n".join((read("README.md"), read("CHANGELOG.md")))


# See https://pypi.python.org/pypi?%3Aaction=list_classifiers
classifiers = [
    "Development Status :: 3 - Alpha",
    "Environment :: Console",
    "Intended Audience :: Science/Research",
    "License :: OSI Approved :: MIT License",
    "Operating System :: OS Independent",
    "Programming Language :: Python",
    "Programming Language :: Python :: 3",
    "Programming Language :: Python :: Implementation :: CPython",
    "Topic :: Scientific/Engineering :: Mathematics",
]


setuptools.setup(
    name="spherical-catenoid",
    license="MIT",
    author="The spherical-catenoid developers",
    version="2026.1001",
    keywords="minimal surfaces hyperbolic space free boundary jacobi operator morse index",
    description="Numerical lab for critical spherical catenoids in hyperbolic 3-space.",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=setuptools.find_packages("src/"),
    package_dir={"": "src"},
    install_requires=install_requires,
    entry_points="""
        [console_scripts]
        spherical-catenoid=spherical_catenoid.__main__:main
    """,
    python_requires=">=3.7",
    zip_safe=True,
    classifiers=classifiers,
)
