"""Shared test constants and path setup."""

import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

# Canonical known-answer key/IV (eight 32-bit key words, four IV words)
# used for the key-dependent cipher's frozen vectors.
KAT_KEY = [681, 884, 35, 345, 203, 50, 912, 358]
KAT_IV = [645, 473, 798, 506]
