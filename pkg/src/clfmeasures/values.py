"""Exact and high-precision arithmetic for measure values.

Measure results are one of three kinds:

* ``fractions.Fraction`` for rational-valued measures,
* :class:`Root` for values of the form ``coeff * radicand**(1/index)``
  (correlation-style measures whose only irrationality is a single root),
* ``mpmath.mpf`` for transcendental values (entropy and arccos based).

Exact kinds compare exactly; once a float/mpf is involved, comparisons
use an epsilon tolerance.  All helpers treat plain ints as Fractions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Union

import mpmath
from mpmath import mp

#: Tolerance used when at least one operand is a float; ties closer than
#: this are treated as equal.
DEFAULT_EPS = 1e-12

#: Working precision (decimal digits) for transcendental evaluations.
WORKING_DPS = 30

ExactValue = Union[int, Fraction, "Root"]
Value = Union[int, Fraction, "Root", float, mpmath.mpf]


def _int_kth_root(x: int, k: int) -> int | None:
    """Exact integer k-th root of x >= 0, or None if x is not a perfect power."""
    if x < 0:
        return None
    if x in (0, 1) or k == 1:
        return x
    # Newton iteration on integers; magnitudes here are small.
    r = 1 << ((x.bit_length() + k - 1) // k)
    while True:
        nr = ((k - 1) * r + x // r ** (k - 1)) // k
        if nr >= r:
            break
        r = nr
    while r ** k > x:
        r -= 1
    return r if r ** k == x else None


@dataclass(frozen=True, eq=False)
class Root:
    """Exact value ``coeff * radicand**(1/index)``.

    ``radicand`` is a positive rational that is not a perfect ``index``-th
    power (construct through :func:`root_value`, which collapses those to
    Fractions).  Comparisons are exact; use :func:`value_cmp` when mixing
    with floats.
    """

    coeff: Fraction
    radicand: Fraction
    index: int

    def __neg__(self) -> "Root":
        return Root(-self.coeff, self.radicand, self.index)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return root_value(self.coeff * other, self.radicand, self.index)
        return NotImplemented

    __rmul__ = __mul__

    def __add__(self, other):
        # Only like terms (same radical) or exact zero can be added while
        # staying exact; anything else must go through value_sum.
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return self
            raise TypeError("cannot add a rational to a root term exactly")
        if isinstance(other, Root):
            if (other.radicand, other.index) == (self.radicand, self.index):
                return root_value(self.coeff + other.coeff, self.radicand, self.index)
            raise TypeError("cannot add unlike root terms exactly")
        return NotImplemented

    __radd__ = __add__

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Root)):
            return exact_cmp(self, other) == 0
        return NotImplemented

    def __lt__(self, other):
        return exact_cmp(self, other) < 0

    def __le__(self, other):
        return exact_cmp(self, other) <= 0

    def __gt__(self, other):
        return exact_cmp(self, other) > 0

    def __ge__(self, other):
        return exact_cmp(self, other) >= 0

    def __float__(self) -> float:
        return float(self.coeff) * float(self.radicand) ** (1.0 / self.index)

    def __repr__(self) -> str:
        return f"Root({self.coeff!r}, {self.radicand!r}, {self.index})"

    def __str__(self) -> str:
        if self.index == 2:
            return f"({self.coeff})*sqrt({self.radicand})"
        return f"({self.coeff})*({self.radicand})^(1/{self.index})"


def root_value(coeff, radicand, index: int) -> ExactValue:
    """Build ``coeff * radicand**(1/index)``, collapsing perfect powers.

    radicand must be >= 0; a zero coeff or radicand collapses to Fraction(0).
    """
    coeff = Fraction(coeff)
    radicand = Fraction(radicand)
    if index < 1:
        raise ValueError(f"root index must be >= 1, got {index}")
    if radicand < 0:
        raise ValueError("radicand must be non-negative")
    if coeff == 0 or radicand == 0:
        return Fraction(0)
    if index == 1:
        return coeff * radicand
    rn = _int_kth_root(radicand.numerator, index)
    rd = _int_kth_root(radicand.denominator, index)
    if rn is not None and rd is not None:
        return coeff * Fraction(rn, rd)
    return Root(coeff, radicand, index)


def _sign(q: Fraction) -> int:
    return (q > 0) - (q < 0)


def _parts(v: ExactValue) -> tuple[Fraction, Fraction, int]:
    if isinstance(v, Root):
        return v.coeff, v.radicand, v.index
    return Fraction(v), Fraction(1), 1


def is_exact(v: Value) -> bool:
    return isinstance(v, (int, Fraction, Root))


def exact_cmp(a: ExactValue, b: ExactValue) -> int:
    """Exact three-way comparison of rational / root values."""
    ca, ra, ka = _parts(a)
    cb, rb, kb = _parts(b)
    sa, sb = _sign(ca), _sign(cb)
    if sa != sb:
        return -1 if sa < sb else 1
    if sa == 0:
        return 0
    # Same sign: compare |a|**L vs |b|**L with L = lcm of the indices.
    big = lcm(ka, kb)
    pa = abs(ca) ** big * ra ** (big // ka)
    pb = abs(cb) ** big * rb ** (big // kb)
    if pa == pb:
        return 0
    return sa if pa > pb else -sa


def to_mpf(v: Value) -> mpmath.mpf:
    """Convert any value kind to mpf at the current mpmath precision."""
    if isinstance(v, mpmath.mpf):
        return v
    if isinstance(v, int):
        return mpmath.mpf(v)
    if isinstance(v, Fraction):
        return mpmath.mpf(v.numerator) / v.denominator
    if isinstance(v, Root):
        return to_mpf(v.coeff) * mpmath.root(to_mpf(v.radicand), v.index)
    return mpmath.mpf(v)


def as_float(v: Value) -> float:
    if isinstance(v, Fraction):
        return v.numerator / v.denominator
    return float(v)


def working_precision():
    """Context with at least WORKING_DPS digits.

    Keeps the ambient precision when a caller has already raised it (the
    derivative probes run at higher precision than the default).
    """
    return mp.workdps(max(mp.dps, WORKING_DPS))


def value_cmp(a: Value, b: Value, eps: float = DEFAULT_EPS) -> int:
    """Three-way comparison; exact when both operands are exact."""
    if is_exact(a) and is_exact(b):
        return exact_cmp(a, b)
    with working_precision():
        d = to_mpf(a) - to_mpf(b)
        if abs(d) <= eps:
            return 0
        return 1 if d > 0 else -1


def values_equal(a: Value, b: Value, eps: float = DEFAULT_EPS) -> bool:
    return value_cmp(a, b, eps) == 0


def negate(v: Value):
    return -v


def value_sum(terms) -> Value:
    """Sum of values, exact whenever the terms allow it.

    Rational terms sum exactly.  Root terms sum exactly when they share one
    radical (the usual case: a family of values over a common margin pair).
    Mixed radicals, or a nonzero rational plus a root, fall back to a
    high-precision float.
    """
    terms = list(terms)
    rational = Fraction(0)
    root_acc: Root | None = None
    exact_ok = True
    for t in terms:
        if isinstance(t, int):
            t = Fraction(t)
        if isinstance(t, Fraction):
            rational += t
        elif isinstance(t, Root):
            if root_acc is None:
                root_acc = t
            elif (t.radicand, t.index) == (root_acc.radicand, root_acc.index):
                combined = root_value(
                    root_acc.coeff + t.coeff, root_acc.radicand, root_acc.index
                )
                if isinstance(combined, Root):
                    root_acc = combined
                else:
                    rational += combined
                    root_acc = None
            else:
                exact_ok = False
                break
        else:
            exact_ok = False
            break
    if exact_ok:
        if root_acc is None:
            return rational
        if rational == 0:
            return root_acc
        # Root plus nonzero rational is irrational; no exact closed form here.
        exact_ok = False
    with working_precision():
        return mpmath.fsum(to_mpf(t) for t in terms)


def scale(v: Value, q) -> Value:
    """Multiply a value by a rational factor, staying exact when possible."""
    q = Fraction(q)
    if isinstance(v, int):
        return Fraction(v) * q
    if isinstance(v, (Fraction, Root)):
        return v * q
    with working_precision():
        return to_mpf(q) * v


def value_str(v: Value) -> str:
    """Compact exact-aware rendering, used by reports."""
    if isinstance(v, int):
        return str(v)
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, Root):
        return str(v)
    return mpmath.nstr(to_mpf(v), 17)
