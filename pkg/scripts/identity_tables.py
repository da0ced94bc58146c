#!/usr/bin/env python3
"""Emit the package's headline identities as CSV tables.

Tables:
  counts      k-equal / k-divisible / multichain coincidence
  bessel      moments and cumulants of free Poisson multiplicative powers
  clt         exact cumulant scaling of normalized free additive powers
"""

import argparse
import csv
import sys

from freeprob import incidence as inc
from freeprob import ksym
from freeprob import ncpart as nc
from freeprob import transforms as tr
from freeprob.sequences import RationalSequence, frac_to_str


def table_counts(kmax, nmax):
    rows = [("k", "n", "kequal(k+1,n)", "kdivisible(k,n)", "multichains(k,n)")]
    for k in range(1, kmax + 1):
        for n in range(1, nmax + 1):
            rows.append((
                k, n,
                nc.count_kequal(k + 1, n),
                nc.fuss_catalan_kdivisible(k, n),
                nc.count_multichains(k, n),
            ))
    return rows


def table_bessel(kmax, nmax):
    rows = [("k", "n", "moment", "cumulant")]
    for k in range(1, kmax + 1):
        m = ksym.boxtimes_power_moments(
            tr.free_poisson_moments(k * nmax), k, nmax, route="enumeration"
        )
        c = tr.moments_to_cumulants(m, nmax)
        for n in range(1, nmax + 1):
            rows.append((k, n, frac_to_str(m[n]), frac_to_str(c[n])))
    return rows


def table_clt(k, order):
    alpha = RationalSequence([1] + [2] * (order - 1))
    d = ksym.from_determining_sequence(k, alpha)
    rows = [("n_samples", "i", "scaled_cumulant")]
    for n_samples in (2 ** k, 4 ** k, 8 ** k):
        scaled = ksym.clt_scaled_cumulants(d, n_samples, k * order)
        for i in range(1, k * order + 1):
            rows.append((n_samples, i, frac_to_str(scaled[i])))
    return rows


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("table", choices=["counts", "bessel", "clt"])
    parser.add_argument("--k", type=int, default=3)
    parser.add_argument("--n", type=int, default=6)
    args = parser.parse_args(argv)
    if args.table == "counts":
        rows = table_counts(args.k, args.n)
    elif args.table == "bessel":
        rows = table_bessel(args.k, args.n)
    else:
        rows = table_clt(args.k, args.n)
    writer = csv.writer(sys.stdout)
    writer.writerows(rows)
    return 0


if __name__ == "__main__":
    sys.exit(main())
