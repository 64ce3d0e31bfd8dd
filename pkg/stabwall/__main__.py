import sys

from stabwall.cli import main

sys.exit(main())
