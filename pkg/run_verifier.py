#!/usr/bin/env python3
"""
Entry point for the finite-field restriction verifier.

Examples:
    python run_verifier.py verify --q 3,5 --d 2,3 --seed 42
    python run_verifier.py sweep --d 5 --q 3,7,11 --j-rule nonsquares --p auto --class homogeneous --seed 7
    python run_verifier.py exponents --d 2-12 --format csv
    python run_verifier.py subspace --q 3,5 --d 2,3 --brute-force
"""
import sys

from ffharmonic.cli import main

if __name__ == "__main__":
    sys.exit(main())
