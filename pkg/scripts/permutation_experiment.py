#!/usr/bin/env python3
"""Drive the permutation-matrix model over all short words and print the
empirical-vs-predicted trace report as JSON.

Example:
    python scripts/permutation_experiment.py --N 500 --k 3 --trials 20
"""

import argparse
import itertools
import json
import sys

from freeprob import matmodel as mm


def all_words(r, max_len, exponents=(1, -1, 2)):
    """Every word of up to max_len letters over r matrices, adjacent
    letters on distinct matrices."""
    out = []
    for length in range(1, max_len + 1):
        for idxs in itertools.product(range(1, r + 1), repeat=length):
            if any(a == b for a, b in zip(idxs, idxs[1:])):
                continue
            for exps in itertools.product(exponents, repeat=length):
                out.append(tuple(zip(idxs, exps)))
    return out


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--r", type=int, default=2)
    parser.add_argument("--N", type=int, default=500)
    parser.add_argument("--k", type=int, default=2)
    parser.add_argument("--max-word-len", type=int, default=3)
    parser.add_argument("--trials", type=int, default=20)
    parser.add_argument("--seed", type=int, default=42)
    args = parser.parse_args(argv)
    words = all_words(args.r, args.max_word_len)
    report = mm.freeness_experiment(
        args.r, args.N, args.k, words, args.trials, args.seed
    )
    json.dump(report, sys.stdout, sort_keys=True, indent=2)
    print()
    return 0


if __name__ == "__main__":
    sys.exit(main())
