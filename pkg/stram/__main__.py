#!/usr/bin/env python3 -u
# copyright: stram developers, BSD-3-Clause License (see LICENSE file)
"""Run ``python -m stram``."""
from stram.cli import main

if __name__ == "__main__":
    raise SystemExit(main())
