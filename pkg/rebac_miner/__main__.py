import sys

from rebac_miner.interfaces.cli.main import main

sys.exit(main())
