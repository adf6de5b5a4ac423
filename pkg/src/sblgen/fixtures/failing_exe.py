"""Fake executable that fails: exit code from SBLGEN_FAKE_EXIT (default 3)."""
import os
import sys

print("boom: synthetic failure", file=sys.stderr)
sys.exit(int(os.environ.get("SBLGEN_FAKE_EXIT", "3")))
