#!/usr/bin/env python3
"""
Setup script for WristAuth
"""

import re
from pathlib import Path

from setuptools import find_packages, setup

here = Path(__file__).parent
long_description = (here / "README.md").read_text(encoding="utf-8")

# Version lives in the package; importing it would pull in numpy and numba
version = re.search(
    r'^__version__ = "([^"]+)"', (here / "wristauth" / "__init__.py").read_text(encoding="utf-8"), re.M
).group(1)


def read_requirements():
    """Split requirements.txt into runtime pins and pytest tooling"""
    runtime, testing = [], []
    for line in (here / "requirements.txt").read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        (testing if line.startswith("pytest") else runtime).append(line)
    return runtime, testing


install_requires, test_requires = read_requirements()

setup(
    name="wristauth",
    version=version,
    author="WristAuth Team",
    description="Handwriting verification from wrist motion",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=["tests", "tests.*"]),
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Topic :: Scientific/Engineering :: Information Analysis",
        "Topic :: Security",
    ],
    python_requires=">=3.9",
    install_requires=install_requires,
    extras_require={"test": test_requires},
    entry_points={
        "console_scripts": [
            "wristauth=wristauth.utils.cli:main",
        ],
    },
    keywords="biometrics authentication handwriting wearable accelerometer gyroscope dtw",
)
