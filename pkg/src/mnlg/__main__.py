import sys

from mnlg.cli import main

sys.exit(main())
