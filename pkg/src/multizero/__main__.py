import sys

from multizero.cli import main

sys.exit(main())
