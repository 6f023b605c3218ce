import sys

from texbank.cli import main

sys.exit(main())
