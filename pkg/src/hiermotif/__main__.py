import sys

from hiermotif.cli import main

sys.exit(main())
