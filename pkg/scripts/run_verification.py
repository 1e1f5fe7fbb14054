#!/usr/bin/env python3
"""Run the full inequality-sweep verification and write report.json.

Thin wrapper over `caralab verify-lemmas` with the default (full-strength)
configuration; exits 1 if any sweep fails.
"""

import sys

from caralab.cli import main

if __name__ == "__main__":
    out = sys.argv[1] if len(sys.argv) > 1 else "report.json"
    sys.exit(main(["verify-lemmas", "--out", out]))
