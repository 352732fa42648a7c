import sys
from fourbody.cli import main
sys.exit(main())
