import sys

from coregame.cli import main

sys.exit(main())
