#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0 OR MIT

import setuptools

setuptools.setup(name="pyshiftbaker",
    version="0.1.0",
    description="Shift operator of modular multiplication as a sum of two quantum baker maps",
    packages=['pyshiftbaker'],
    scripts=['shiftbaker.py'],
    license="Apache 2.0 OR MIT",
    python_requires='>=3.9',
    install_requires=['numpy', 'scipy', 'setuptools'],
    extras_require={'test': ['pytest', 'sympy']},
)
