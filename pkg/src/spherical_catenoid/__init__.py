# This file is part of the spherical-catenoid project
#
# Copyright (c) 2026 The spherical-catenoid developers - MIT License
# SPDX-License-Identifier: MIT

__version__ = "2026.1001"
