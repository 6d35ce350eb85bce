import sys

from bipposet.cli import main

sys.exit(main())
