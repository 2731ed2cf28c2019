# SPDX-FileCopyrightText: 2024 metagee contributors
#
# SPDX-License-Identifier: MIT

import sys

from .cli import main

sys.exit(main())
