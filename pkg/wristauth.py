#!/usr/bin/env python3
"""
WristAuth command line, runnable from a source checkout

    python wristauth.py synth data/
    python wristauth.py enroll data/users/u01/enroll/*.csv -o u01.profile.yaml
"""

import sys
from pathlib import Path

# Import the package next to this script rather than an installed copy
sys.path.insert(0, str(Path(__file__).resolve().parent))

from wristauth.utils.cli import main  # noqa: E402

if __name__ == "__main__":
    sys.exit(main())
