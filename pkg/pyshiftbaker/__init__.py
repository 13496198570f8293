# SPDX-License-Identifier: Apache-2.0 OR MIT
# -*- coding: utf-8 -*-

__license__ = "Apache-2.0 OR MIT"
__copyright__ = "Copyright (c) 2026, pyshiftbaker developers"
__version__ = '0.1.0'
