import json
import os
import subprocess
import sys

ORACLE = os.path.join(os.path.dirname(__file__), "oracle")


def test_oracle_reproduces_frozen_values():
    out = subprocess.run([sys.executable, os.path.join(ORACLE, "brute_dims.py")],
                         capture_output=True, text=True, check=True).stdout
    with open(os.path.join(ORACLE, "dims.json")) as fh:
        assert json.loads(out) == json.load(fh)
