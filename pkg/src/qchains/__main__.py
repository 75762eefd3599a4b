import sys

from qchains.cli import main

sys.exit(main())
