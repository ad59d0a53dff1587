"""Micro, macro, and weighted extensions of binary measures.

Each scheme turns a binary measure into a multiclass one by aggregating
the per-class one-vs-all reductions: micro pools the four counts, macro
averages the per-class values, weighted averages them by true class size
(empty true classes are skipped; their weight is zero).
"""

from __future__ import annotations

from fractions import Fraction

from .core import BinaryCounts, ConfusionMatrix, one_vs_all
from .values import Value, scale, value_sum


def micro_counts(C: ConfusionMatrix) -> BinaryCounts:
    """Pooled one-vs-all counts: TP=sum of diagonal, FN=FP=off-diagonal mass,
    TN=(m-2)n + diagonal mass."""
    s = C.diagonal_sum
    miss = C.n - s
    return BinaryCounts(s, miss, miss, (C.m - 2) * C.n + s)


def micro_extend(binary_measure, C: ConfusionMatrix) -> Value:
    return binary_measure(micro_counts(C))


def macro_extend(binary_measure, C: ConfusionMatrix) -> Value:
    vals = [binary_measure(one_vs_all(C, i)) for i in range(C.m)]
    return scale(value_sum(vals), Fraction(1, C.m))


def weighted_extend(binary_measure, C: ConfusionMatrix) -> Value:
    terms = []
    for i in range(C.m):
        ai = C.a[i]
        if ai == 0:
            continue
        terms.append(scale(binary_measure(one_vs_all(C, i)), Fraction(ai, C.n)))
    return value_sum(terms)
