import sys

from sctlint.cli import main

sys.exit(main())
