import sys

from medlay.cli import main

sys.exit(main())
