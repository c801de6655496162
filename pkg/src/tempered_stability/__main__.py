"""Allow ``python -m src.tempered_stability``."""

import sys

from .cli import main

sys.exit(main())
