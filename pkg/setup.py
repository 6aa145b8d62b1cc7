#!/usr/bin/env python3
"""Root entry point for pip; the package metadata lives in scripts/setup.py."""

import os
import runpy

os.chdir(os.path.dirname(os.path.abspath(__file__)))
runpy.run_path(os.path.join("scripts", "setup.py"), run_name="__main__")
