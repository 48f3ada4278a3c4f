"""``python -m weylpath`` runs the batch front-end."""

import sys

from .cli import main

sys.exit(main())
