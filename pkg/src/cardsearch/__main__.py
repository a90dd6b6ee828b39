import sys

from cardsearch.cli import main

sys.exit(main())
