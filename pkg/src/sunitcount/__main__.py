import sys

from sunitcount.cli import main

sys.exit(main())
