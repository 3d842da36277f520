import sys

from convex_rounder.main import main

sys.exit(main())
