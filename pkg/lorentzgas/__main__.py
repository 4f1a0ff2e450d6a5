import sys

from lorentzgas.cli import main

sys.exit(main())
