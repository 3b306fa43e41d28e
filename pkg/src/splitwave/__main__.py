import sys

from splitwave.cli import main

sys.exit(main())
