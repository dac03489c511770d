#!/usr/bin/env python3
"""Run the acceptance suite with the per-criterion pass/fail lines visible."""

import sys

import pytest

if __name__ == "__main__":
    sys.exit(pytest.main(["-v", "-s", "tests/test_acceptance.py", *sys.argv[1:]]))
