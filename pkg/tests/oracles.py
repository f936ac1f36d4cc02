"""Brute-force reference computations, independent of the library code paths."""

import itertools
import math

import numpy as np


def enumerate_win_count_pmf(qs):
    """Exact pmf of the win count by summing over all 2^m outcome sequences."""
    m = len(qs)
    pmf = [0.0] * (m + 1)
    for outcome in itertools.product((0, 1), repeat=m):
        pr = 1.0
        for won, q in zip(outcome, qs):
            pr *= q if won else 1.0 - q
        pmf[sum(outcome)] += pr
    return pmf


def run_count_table(n):
    """counts[w, L]: number of length-n binary sequences with w ones and longest run L."""
    seqs = np.arange(2**n, dtype=np.uint32)
    wins = np.zeros(seqs.size, dtype=np.int64)
    for b in range(n):
        wins += (seqs >> b) & 1
    longest = np.zeros(seqs.size, dtype=np.int64)
    x = seqs.copy()
    # after j rounds of x &= x >> 1, x != 0 iff some run has length > j
    for j in range(n):
        longest[x != 0] = j + 1
        x = x & (x >> 1)
    table = np.zeros((n + 1, n + 1), dtype=np.int64)
    np.add.at(table, (wins, longest), 1)
    return table


def longest_run_at_least_by_enumeration(n, run, q, table=None):
    table = run_count_table(n) if table is None else table
    total = 0.0
    for w in range(n + 1):
        count = int(table[w, run:].sum())
        if count:
            total += count * q**w * (1.0 - q) ** (n - w)
    return total


def binomial_pmf_direct(m, k, q):
    return math.comb(m, k) * q**k * (1.0 - q) ** (m - k)
