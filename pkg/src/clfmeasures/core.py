"""Labelings, confusion matrices, and exhaustive enumeration primitives.

Conventions used throughout the package:

* classes are 0-based indices ``0..m-1``;
* confusion matrix rows are indexed by the true class, columns by the
  predicted class, so ``entries[i][j]`` counts elements of true class ``i``
  predicted as ``j``;
* row sums ``a`` are the true class sizes, column sums ``b`` the predicted
  class sizes, and ``n`` the total count;
* entries are exact (int or Fraction).  Rational entries arise from
  expected matrices under margin-preserving randomization.

All objects are immutable and all enumeration functions are pure
generators, so they are safe to call concurrently; streams can be
partitioned by the ``prefix`` argument of :func:`enumerate_labelings`.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterator, Sequence


class EnumerationBudgetExceeded(RuntimeError):
    """Raised when an enumeration visits more states than its budget allows."""


DEFAULT_BUDGET_LIMIT = 10**9
BUDGET_ENV_VAR = "MEASURE_AUDIT_BUDGET"


class Budget:
    """Mutable counter limiting the number of enumerated states."""

    def __init__(self, limit: int | None = None):
        if limit is None:
            limit = int(os.environ.get(BUDGET_ENV_VAR, DEFAULT_BUDGET_LIMIT))
        if limit <= 0:
            raise ValueError("budget limit must be positive")
        self.limit = limit
        self.used = 0

    def charge(self, amount: int = 1) -> None:
        self.used += amount
        if self.used > self.limit:
            raise EnumerationBudgetExceeded(
                f"enumeration budget of {self.limit} states exceeded"
            )


@dataclass(frozen=True)
class Labeling:
    """An assignment of n elements to m classes."""

    labels: tuple[int, ...]
    m: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("need at least one class")
        if not self.labels:
            raise ValueError("labeling must be non-empty")
        bad = [x for x in self.labels if not 0 <= x < self.m]
        if bad:
            raise ValueError(f"labels out of range for m={self.m}: {bad[:5]}")

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def n(self) -> int:
        return len(self.labels)

    @cached_property
    def class_sizes(self) -> tuple[int, ...]:
        sizes = [0] * self.m
        for x in self.labels:
            sizes[x] += 1
        return tuple(sizes)


@dataclass(frozen=True)
class ConfusionMatrix:
    """Square matrix of exact per-(true, predicted) class counts."""

    entries: tuple[tuple[int | Fraction, ...], ...]

    def __post_init__(self):
        m = len(self.entries)
        if m < 1 or any(len(row) != m for row in self.entries):
            raise ValueError("entries must form a non-empty square matrix")
        if any(x < 0 for row in self.entries for x in row):
            raise ValueError("entries must be non-negative")
        if sum(x for row in self.entries for x in row) <= 0:
            raise ValueError("matrix total must be positive")

    @property
    def m(self) -> int:
        return len(self.entries)

    @cached_property
    def n(self) -> int | Fraction:
        return sum(x for row in self.entries for x in row)

    @cached_property
    def a(self) -> tuple[int | Fraction, ...]:
        """Row sums: true class sizes."""
        return tuple(sum(row) for row in self.entries)

    @cached_property
    def b(self) -> tuple[int | Fraction, ...]:
        """Column sums: predicted class sizes."""
        return tuple(sum(col) for col in zip(*self.entries))

    @cached_property
    def diagonal_sum(self) -> int | Fraction:
        return sum(self.entries[i][i] for i in range(self.m))

    def is_diagonal(self) -> bool:
        return all(
            self.entries[i][j] == 0
            for i in range(self.m)
            for j in range(self.m)
            if i != j
        )

    def is_zero_diagonal(self) -> bool:
        return all(self.entries[i][i] == 0 for i in range(self.m))

    def __getitem__(self, ij: tuple[int, int]):
        i, j = ij
        return self.entries[i][j]


def confusion_matrix(rows: Sequence[Sequence]) -> ConfusionMatrix:
    """Build a ConfusionMatrix from any nested sequence of exact numbers."""

    def norm(x):
        if isinstance(x, (int, Fraction)):
            return x
        if isinstance(x, float):
            if not x.is_integer():
                raise ValueError(f"non-integer float entry {x}; pass Fractions")
            return int(x)
        if isinstance(x, str):
            return Fraction(x)
        raise TypeError(f"unsupported entry type {type(x).__name__}")

    return ConfusionMatrix(tuple(tuple(norm(x) for x in row) for row in rows))


@dataclass(frozen=True)
class BinaryCounts:
    """The four binary counts (true/false positives and negatives).

    Order is (c11, c10, c01, c00): hits on class 1, misses of class 1,
    false alarms, hits on class 0.  Class 1 plays the positive role.
    """

    c11: int | Fraction
    c10: int | Fraction
    c01: int | Fraction
    c00: int | Fraction

    def __post_init__(self):
        if any(c < 0 for c in (self.c11, self.c10, self.c01, self.c00)):
            raise ValueError("counts must be non-negative")
        if self.n <= 0:
            raise ValueError("total count must be positive")

    @property
    def n(self) -> int | Fraction:
        return self.c11 + self.c10 + self.c01 + self.c00

    @property
    def a1(self) -> int | Fraction:
        return self.c11 + self.c10

    @property
    def a0(self) -> int | Fraction:
        return self.c01 + self.c00

    @property
    def b1(self) -> int | Fraction:
        return self.c11 + self.c01

    @property
    def b0(self) -> int | Fraction:
        return self.c10 + self.c00

    def to_matrix(self) -> ConfusionMatrix:
        return ConfusionMatrix(((self.c00, self.c01), (self.c10, self.c11)))


def binary_counts(C: ConfusionMatrix) -> BinaryCounts:
    """The binary counts of a 2x2 matrix, with class 1 as positive."""
    if C.m != 2:
        raise ValueError(f"expected a 2x2 matrix, got m={C.m}")
    return BinaryCounts(C[1, 1], C[1, 0], C[0, 1], C[0, 0])


def build_confusion(true: Labeling, pred: Labeling) -> ConfusionMatrix:
    """Count joint (true, predicted) class occurrences of two labelings."""
    if true.m != pred.m:
        raise ValueError(f"class count mismatch: {true.m} vs {pred.m}")
    if len(true) != len(pred):
        raise ValueError(f"length mismatch: {len(true)} vs {len(pred)}")
    m = true.m
    cells = [[0] * m for _ in range(m)]
    for t, p in zip(true.labels, pred.labels):
        cells[t][p] += 1
    return ConfusionMatrix(tuple(tuple(row) for row in cells))


def transpose(C: ConfusionMatrix) -> ConfusionMatrix:
    """Swap the roles of the two labelings."""
    return ConfusionMatrix(tuple(zip(*C.entries)))


def permute_classes(C: ConfusionMatrix, perm: Sequence[int]) -> ConfusionMatrix:
    """Relabel both labelings by the same permutation of classes.

    ``perm[i]`` is the old class shown at new index ``i``:
    result[i][j] = entries[perm[i]][perm[j]].
    """
    if sorted(perm) != list(range(C.m)):
        raise ValueError(f"not a permutation of 0..{C.m - 1}: {perm}")
    return ConfusionMatrix(
        tuple(tuple(C.entries[perm[i]][perm[j]] for j in range(C.m)) for i in range(C.m))
    )


def one_vs_all(C: ConfusionMatrix, i: int) -> BinaryCounts:
    """Collapse to the binary problem "class i against the rest"."""
    if not 0 <= i < C.m:
        raise ValueError(f"class index {i} out of range for m={C.m}")
    tp = C[i, i]
    fn = C.a[i] - tp
    fp = C.b[i] - tp
    tn = C.n - C.a[i] - C.b[i] + tp
    return BinaryCounts(tp, fn, fp, tn)


def expected_matrix(a_sizes: Sequence[int], b_sizes: Sequence[int]) -> ConfusionMatrix:
    """Expected confusion matrix when the prediction is a uniformly random
    labeling with class sizes ``b_sizes``: entry (i, j) is a_i * b_j / n."""
    a_sizes = tuple(a_sizes)
    b_sizes = tuple(b_sizes)
    if len(a_sizes) != len(b_sizes):
        raise ValueError("class size vectors must have equal length")
    n = sum(a_sizes)
    if n <= 0 or n != sum(b_sizes):
        raise ValueError("class sizes must be non-negative with equal positive totals")
    return ConfusionMatrix(
        tuple(tuple(Fraction(ai * bj, n) for bj in b_sizes) for ai in a_sizes)
    )


def multinomial(n: int, parts: Sequence[int]) -> int:
    """Number of labelings of n elements with the given class sizes."""
    if sum(parts) != n or any(p < 0 for p in parts):
        raise ValueError("parts must be non-negative and sum to n")
    out = 1
    rest = n
    for p in parts:
        out *= math.comb(rest, p)
        rest -= p
    return out


def compositions(n: int, m: int, min_part: int = 0) -> Iterator[tuple[int, ...]]:
    """All ordered ways to split n into m non-negative parts, lexicographic."""
    if m == 1:
        if n >= min_part:
            yield (n,)
        return
    for first in range(min_part, n - min_part * (m - 1) + 1):
        for rest in compositions(n - first, m - 1, min_part):
            yield (first,) + rest


def enumerate_labelings(
    n: int,
    m: int,
    class_sizes: Sequence[int] | None = None,
    require_all_classes: bool = False,
    prefix: Sequence[int] = (),
    budget: Budget | None = None,
) -> Iterator[Labeling]:
    """All labelings of n elements into m classes, in lexicographic order.

    With ``class_sizes`` only labelings of those exact sizes are produced.
    ``require_all_classes`` keeps only labelings using every class.
    ``prefix`` restricts the stream to labelings starting with it, which
    lets callers partition the space across workers.
    """
    if n < 1 or m < 1:
        raise ValueError("need n >= 1 and m >= 1")
    prefix = tuple(prefix)
    if len(prefix) > n or any(not 0 <= x < m for x in prefix):
        raise ValueError("invalid prefix")
    if class_sizes is not None:
        class_sizes = tuple(class_sizes)
        if len(class_sizes) != m or sum(class_sizes) != n:
            raise ValueError("class sizes must have length m and sum to n")
        remaining = list(class_sizes)
        for x in prefix:
            remaining[x] -= 1
            if remaining[x] < 0:
                return
        if require_all_classes and any(s == 0 for s in class_sizes):
            return

        def rec_sized(partial: list[int]):
            if len(partial) == n:
                if budget is not None:
                    budget.charge()
                yield Labeling(tuple(partial), m)
                return
            for c in range(m):
                if remaining[c] > 0:
                    remaining[c] -= 1
                    partial.append(c)
                    yield from rec_sized(partial)
                    partial.pop()
                    remaining[c] += 1

        yield from rec_sized(list(prefix))
        return

    def rec(partial: list[int], seen: set[int]):
        if len(partial) == n:
            if require_all_classes and len(seen) != m:
                return
            if budget is not None:
                budget.charge()
            yield Labeling(tuple(partial), m)
            return
        # Prune when the remaining slots cannot cover the unseen classes.
        if require_all_classes and m - len(seen) > n - len(partial):
            return
        for c in range(m):
            partial.append(c)
            added = c not in seen
            if added:
                seen.add(c)
            yield from rec(partial, seen)
            if added:
                seen.remove(c)
            partial.pop()

    yield from rec(list(prefix), set(prefix))


def enumerate_confusion_matrices(
    a_sizes: Sequence[int],
    b_sizes: Sequence[int],
    budget: Budget | None = None,
) -> Iterator[tuple[ConfusionMatrix, int]]:
    """All confusion matrices with the given margins, with multiplicities.

    Yields ``(C, count)`` pairs where ``count`` is the number of predicted
    labelings producing ``C`` against a fixed true labeling of sizes
    ``a_sizes``; counts over all matrices of one margin pair sum to
    ``multinomial(n, b_sizes)``.  Matrices appear in row-major
    lexicographic order.
    """
    a_sizes = tuple(a_sizes)
    b_sizes = tuple(b_sizes)
    m = len(a_sizes)
    if m < 1 or len(b_sizes) != m:
        raise ValueError("margin vectors must be non-empty and of equal length")
    n = sum(a_sizes)
    if n != sum(b_sizes) or n <= 0:
        raise ValueError("margins must sum to the same positive total")
    if any(x < 0 for x in a_sizes + b_sizes):
        raise ValueError("margins must be non-negative")

    rows: list[tuple[int, ...]] = []

    def row_fills(total: int, caps: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
        if len(caps) == 1:
            if total <= caps[0]:
                yield (total,)
            return
        for first in range(min(total, caps[0]) + 1):
            for rest in row_fills(total - first, caps[1:]):
                yield (first,) + rest

    def rec(i: int, rem_b: tuple[int, ...], mult: int):
        if i == m:
            if budget is not None:
                budget.charge()
            yield ConfusionMatrix(tuple(rows)), mult
            return
        for row in row_fills(a_sizes[i], rem_b):
            rows.append(row)
            new_rem = tuple(r - x for r, x in zip(rem_b, row))
            yield from rec(i + 1, new_rem, mult * multinomial(a_sizes[i], row))
            rows.pop()

    yield from rec(0, b_sizes, 1)
