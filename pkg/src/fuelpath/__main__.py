import sys

from fuelpath.cli import main

sys.exit(main())
