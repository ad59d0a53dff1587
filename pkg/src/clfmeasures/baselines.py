"""Exact expectations of measures under margin-preserving randomization.

The randomization model: the true labeling is fixed with class sizes
``a``; the predicted labeling is drawn uniformly from all labelings with
class sizes ``b``.  Expectations are computed exactly by enumeration,
through either of two independent routes:

* ``matrices``: enumerate confusion matrices compatible with the margins,
  weighting each by the number of predictions that produce it;
* ``labelings``: enumerate the predicted labelings directly.

Both routes must agree; the second is slower and exists to corroborate
the first.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .core import (
    Budget,
    Labeling,
    build_confusion,
    enumerate_confusion_matrices,
    enumerate_labelings,
    multinomial,
)
from .measures import MeasureDescriptor, evaluate
from .values import Value, scale, value_sum

METHODS = ("matrices", "labelings")


def is_unary(sizes: Sequence[int]) -> bool:
    """True if one class holds every element."""
    n = sum(sizes)
    return any(s == n for s in sizes)


def canonical_labeling(sizes: Sequence[int]) -> Labeling:
    """The lexicographically smallest labeling with the given class sizes."""
    labels: list[int] = []
    for cls, s in enumerate(sizes):
        labels.extend([cls] * s)
    return Labeling(tuple(labels), len(sizes))


def exact_baseline_expectation(
    desc: MeasureDescriptor,
    a_sizes: Sequence[int],
    b_sizes: Sequence[int],
    method: str = "matrices",
    budget: Budget | None = None,
) -> Value:
    """Expected value of a measure over uniformly random predictions.

    ``a_sizes``/``b_sizes`` are the true/predicted class size vectors.
    Both-unary margins are rejected: the prediction would be deterministic
    and identical-or-disjoint to the truth, which is outside the scope of
    baseline analysis.
    """
    a_sizes = tuple(a_sizes)
    b_sizes = tuple(b_sizes)
    if len(a_sizes) != len(b_sizes):
        raise ValueError("class size vectors must have equal length")
    n = sum(a_sizes)
    if n <= 0 or sum(b_sizes) != n:
        raise ValueError("class sizes must sum to the same positive total")
    if is_unary(a_sizes) and is_unary(b_sizes):
        raise ValueError(
            "both margins are unary: the expectation degenerates to a single "
            "constant comparison"
        )
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")

    total = multinomial(n, b_sizes)
    if method == "matrices":
        terms = [
            scale(evaluate(desc, C), count)
            for C, count in enumerate_confusion_matrices(a_sizes, b_sizes, budget)
        ]
    else:
        truth = canonical_labeling(a_sizes)
        m = len(a_sizes)
        terms = [
            evaluate(desc, build_confusion(truth, pred))
            for pred in enumerate_labelings(n, m, class_sizes=b_sizes, budget=budget)
        ]
    return scale(value_sum(terms), Fraction(1, total))
