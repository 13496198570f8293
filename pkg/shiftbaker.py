#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0 OR MIT
# -*- coding: utf-8 -*-

import sys

from pyshiftbaker.cli import main

if __name__ == '__main__':
    sys.exit(main())
