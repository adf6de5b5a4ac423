"""Fake executable that hangs: sleeps SBLGEN_FAKE_SLEEP seconds (default 5)."""
import os
import time

time.sleep(float(os.environ.get("SBLGEN_FAKE_SLEEP", "5")))
