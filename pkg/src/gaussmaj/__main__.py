import sys

from gaussmaj.cli import main

sys.exit(main())
