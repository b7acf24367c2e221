import sys

from quotsig.cli import main

sys.exit(main())
