"""Allow ``python -m kdvlab``."""
import sys

from .cli import main

sys.exit(main())
