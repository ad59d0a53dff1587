"""Flatness of binary measures around the independence baseline.

Scale invariance lets every binary measure act on joint rates instead of
counts: with ``p_a``, ``p_b`` the positive rates of the two labelings and
``p_ab`` their joint positive rate, the measure is evaluated on the 2x2
matrix of cell rates with unit mass.  Under margin-preserving
randomization the expected joint rate is ``p_a * p_b``, so the behaviour
of a measure near chance level is its behaviour in ``p_ab`` around that
product point.

:func:`baseline_order` measures how flat that behaviour is.  A measure
has baseline order k when its value at the product point is one constant
for every margin pair and its derivatives in ``p_ab`` of orders 2..k all
vanish there (order 1 is the bare constant-baseline statement; the first
derivative never vanishes for a non-degenerate measure, so it carries no
information).  Derivatives are estimated by central differences with
Richardson extrapolation, evaluated at exact rational abscissae under
high-precision arithmetic; round-off is driven far below the vanishing
threshold, so the verdicts are clean.

:func:`check_gm_normalizer_conditions` verifies the six conditions on a
normalizer s(p_a, p_b) under which s * (p_ab - p_a*p_b) retains the full
chance-correction property set, instantiated for the power-mean
normalizers of the generalized-means family.  Conditions on rational
data are checked exactly; the two bound conditions involving roots use
high-precision floats with an explicit strictness margin.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from mpmath import mp

from .core import ConfusionMatrix
from .measures import evaluate, parse_measure_id
from .values import Value, as_float, root_value, scale, value_cmp, value_sum

ORDER_DPS = 40
DEFAULT_ZERO_TOL = 1e-6
DEFAULT_STRICT_MARGIN = 1e-9
#: Step size as a fraction of the feasible p_ab interval's width.
DEFAULT_H_SCALE = Fraction(1, 10**4)

RatePair = tuple[Fraction, Fraction]


def default_rate_grid(steps: int = 20) -> tuple[RatePair, ...]:
    """All interior margin pairs (k/steps, l/steps), k,l = 1..steps-1."""
    if steps < 2:
        raise ValueError("steps must be at least 2")
    qs = [Fraction(k, steps) for k in range(1, steps)]
    return tuple((pa, pb) for pa in qs for pb in qs)


def feasible_joint_interval(p_a: Fraction, p_b: Fraction) -> tuple[Fraction, Fraction]:
    """Range of joint rates compatible with the margins (Frechet bounds)."""
    lo = max(Fraction(0), p_a + p_b - 1)
    hi = min(p_a, p_b)
    return lo, hi


@dataclass(frozen=True)
class RateTriple:
    """Joint and marginal positive rates of a binary labeling pair."""

    p_ab: Fraction
    p_a: Fraction
    p_b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "p_ab", Fraction(self.p_ab))
        object.__setattr__(self, "p_a", Fraction(self.p_a))
        object.__setattr__(self, "p_b", Fraction(self.p_b))
        if not (0 <= self.p_a <= 1 and 0 <= self.p_b <= 1):
            raise ValueError("margins must lie in [0, 1]")
        lo, hi = feasible_joint_interval(self.p_a, self.p_b)
        if not lo <= self.p_ab <= hi:
            raise ValueError(f"joint rate {self.p_ab} outside [{lo}, {hi}]")

    def matrix(self) -> ConfusionMatrix:
        return rate_matrix(self.p_ab, self.p_a, self.p_b)


def rate_matrix(p_ab, p_a, p_b) -> ConfusionMatrix:
    """The 2x2 matrix of joint rates, unit total, class 1 positive."""
    p_ab, p_a, p_b = Fraction(p_ab), Fraction(p_a), Fraction(p_b)
    if not (0 <= p_a <= 1 and 0 <= p_b <= 1):
        raise ValueError(f"margins must lie in [0, 1], got ({p_a}, {p_b})")
    lo, hi = feasible_joint_interval(p_a, p_b)
    if not lo <= p_ab <= hi:
        raise ValueError(f"joint rate {p_ab} outside feasible range [{lo}, {hi}]")
    return ConfusionMatrix(
        (
            (1 - p_a - p_b + p_ab, p_b - p_ab),
            (p_a - p_ab, p_ab),
        )
    )


def rate_evaluator(measure) -> Callable[[Fraction, Fraction, Fraction], Value]:
    """The measure as a function of (p_ab, p_a, p_b)."""
    desc = parse_measure_id(measure) if isinstance(measure, str) else measure

    def f(p_ab, p_a, p_b) -> Value:
        return evaluate(desc, rate_matrix(p_ab, p_a, p_b))

    return f


# ---------------------------------------------------------------------------
# baseline order

# Central-difference weights per derivative order, on abscissae offset * h.
_STENCILS: dict[int, tuple[tuple[int, Fraction], ...]] = {
    2: ((1, Fraction(1)), (0, Fraction(-2)), (-1, Fraction(1))),
    3: (
        (2, Fraction(1, 2)),
        (1, Fraction(-1)),
        (-1, Fraction(1)),
        (-2, Fraction(-1, 2)),
    ),
    4: (
        (2, Fraction(1)),
        (1, Fraction(-4)),
        (0, Fraction(6)),
        (-1, Fraction(-4)),
        (-2, Fraction(1)),
    ),
}
MAX_PROBE_ORDER = max(_STENCILS)


@dataclass(frozen=True)
class DerivativeProbe:
    """Largest |d^l M / d p_ab^l| estimate over the grid, for one l."""

    order: int
    max_abs: float
    argmax: RatePair
    vanishes: bool

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "max_abs": self.max_abs,
            "argmax": [str(self.argmax[0]), str(self.argmax[1])],
            "vanishes": self.vanishes,
        }


@dataclass(frozen=True)
class BaselineOrderReport:
    """Outcome of the flatness probe for one measure."""

    measure_id: str
    grid_points: int
    baseline_constant: bool
    baseline_value: float
    baseline_spread: float
    probes: tuple[DerivativeProbe, ...]
    order: int
    order_saturated: bool  # every probed derivative vanished; order is a floor

    def to_dict(self) -> dict:
        return {
            "measure": self.measure_id,
            "grid_points": self.grid_points,
            "baseline_constant": self.baseline_constant,
            "baseline_value": self.baseline_value,
            "baseline_spread": self.baseline_spread,
            "order": self.order,
            "order_saturated": self.order_saturated,
            "derivatives": [p.to_dict() for p in self.probes],
        }


def _richardson(coarse: Value, fine: Value) -> Value:
    # Central stencils have an h^2 error series; one extrapolation step
    # cancels the leading term.
    return value_sum([scale(fine, Fraction(4, 3)), scale(coarse, Fraction(-1, 3))])


def _derivative_estimates(
    f, p_a: Fraction, p_b: Fraction, orders: Sequence[int], h_scale: Fraction
) -> dict[int, float]:
    lo, hi = feasible_joint_interval(p_a, p_b)
    if hi <= lo:
        raise ValueError(f"degenerate joint range at margins ({p_a}, {p_b})")
    x0 = p_a * p_b
    h = (hi - lo) * h_scale
    half = h / 2
    reach = 2 * h
    if x0 - reach <= lo or x0 + reach >= hi:
        raise ValueError(
            f"stencil leaves the feasible range at margins ({p_a}, {p_b}); "
            "use a smaller h_scale"
        )
    # One shared table of evaluations at x0 + j*h/2, j = -4..4.
    cache: dict[int, Value] = {}

    def at(j: int) -> Value:
        if j not in cache:
            cache[j] = f(x0 + j * half, p_a, p_b)
        return cache[j]

    out: dict[int, float] = {}
    for l in orders:
        weights = _STENCILS[l]
        coarse = value_sum([scale(at(2 * off), w) for off, w in weights])
        fine = value_sum([scale(at(off), w) for off, w in weights])
        coarse = scale(coarse, Fraction(1) / h**l)
        fine = scale(fine, Fraction(1) / half**l)
        out[l] = abs(as_float(_richardson(coarse, fine)))
    return out


def baseline_order(
    measure,
    l_max: int = 3,
    grid: Sequence[RatePair] | None = None,
    h_scale: Fraction = DEFAULT_H_SCALE,
    zero_tol: float = DEFAULT_ZERO_TOL,
    dps: int = ORDER_DPS,
) -> BaselineOrderReport:
    """Probe the flatness of a binary measure at the independence point.

    Returns a report whose ``order`` is the largest k <= l_max such that
    the baseline value is one constant across the grid and the
    derivative estimates of orders 2..k stay below ``zero_tol`` at every
    grid point.  ``order`` is 0 when even the baseline is not constant.
    """
    desc = parse_measure_id(measure) if isinstance(measure, str) else measure
    if not 1 <= l_max <= MAX_PROBE_ORDER:
        raise ValueError(f"l_max must be in 1..{MAX_PROBE_ORDER}")
    if grid is None:
        grid = default_rate_grid()
    if not grid:
        raise ValueError("empty rate grid")
    for p_a, p_b in grid:
        if not (0 < p_a < 1 and 0 < p_b < 1):
            raise ValueError(f"grid margins must be interior, got ({p_a}, {p_b})")
    f = rate_evaluator(desc)
    orders = range(2, l_max + 1)
    worst: dict[int, tuple[float, RatePair]] = {l: (-1.0, grid[0]) for l in orders}
    base_first: float | None = None
    base_spread = 0.0
    with mp.workdps(dps):
        for p_a, p_b in grid:
            v0 = as_float(f(p_a * p_b, p_a, p_b))
            if base_first is None:
                base_first = v0
            base_spread = max(base_spread, abs(v0 - base_first))
            ests = _derivative_estimates(f, p_a, p_b, orders, h_scale)
            for l, est in ests.items():
                if est > worst[l][0]:
                    worst[l] = (est, (p_a, p_b))
    probes = tuple(
        DerivativeProbe(l, worst[l][0], worst[l][1], worst[l][0] < zero_tol)
        for l in orders
    )
    constant = base_spread < zero_tol
    order = 0
    saturated = False
    if constant:
        order = 1
        for probe in probes:
            if not probe.vanishes:
                break
            order = probe.order
        else:
            saturated = l_max > 1
    return BaselineOrderReport(
        measure_id=desc.measure_id,
        grid_points=len(grid),
        baseline_constant=constant,
        baseline_value=base_first,
        baseline_spread=base_spread,
        probes=probes,
        order=order,
        order_saturated=saturated,
    )


# ---------------------------------------------------------------------------
# normalizer conditions for the chance-corrected family


def _margin_variance(p: Fraction) -> Fraction:
    return p * (1 - p)


def gm_normalizer(r: int) -> Callable[[Fraction, Fraction], Value]:
    """The power-mean normalizer s(p_a, p_b) of the generalized means.

    s is the reciprocal of the r-power mean of the two margin variances
    x = p_a(1-p_a) and y = p_b(1-p_b); the measure itself is
    s * (p_ab - p_a*p_b).  Exact (Fraction or Root) for integer r.
    """
    r = int(r)
    if r == 0:
        raise ValueError("r must be nonzero")

    def s(p_a, p_b) -> Value:
        x = _margin_variance(Fraction(p_a))
        y = _margin_variance(Fraction(p_b))
        if x == 0 or y == 0:
            raise ValueError("normalizer undefined on constant margins")
        if r > 0:
            u = (x**r + y**r) / 2
            if r == 1:
                return 1 / u
            return root_value(1 / u, u ** (r - 1), r)
        k = -r
        v = 2 * x**k * y**k / (x**k + y**k)
        if k == 1:
            return 1 / v
        return root_value(1 / v, v ** (k - 1), k)

    return s


def _power_weights(p_a: Fraction, p_b: Fraction, r: int) -> tuple[Fraction, Fraction]:
    """Weights x^r/(x^r+y^r), y^r/(x^r+y^r) of the two margin variances."""
    x = _margin_variance(p_a)
    y = _margin_variance(p_b)
    xr, yr = x**r, y**r
    return xr / (xr + yr), yr / (xr + yr)


def normalizer_partial_pa(p_a: Fraction, p_b: Fraction, r: int, s_val: Value) -> Value:
    """Closed form of ds/dp_a for the power-mean normalizer.

    The chain rule through the r-power mean gives
    ds/dp_a = s * (2p_a - 1)/x * x^r/(x^r + y^r).
    """
    w_x, _ = _power_weights(p_a, p_b, r)
    factor = (2 * p_a - 1) / _margin_variance(p_a) * w_x
    return scale(s_val, factor) if isinstance(factor, Fraction) else s_val * factor


@dataclass(frozen=True)
class ConditionReport:
    """One normalizer condition checked over the margin grid."""

    condition: int
    description: str
    holds: bool
    checked: int
    equality_points: int
    min_strict_margin: float | None
    failures: tuple[dict, ...]

    def to_dict(self) -> dict:
        return {
            "condition": self.condition,
            "description": self.description,
            "holds": self.holds,
            "checked": self.checked,
            "equality_points": self.equality_points,
            "min_strict_margin": self.min_strict_margin,
            "failures": list(self.failures),
        }


def _point_tag(p_a: Fraction, p_b: Fraction) -> dict:
    return {"p_a": str(p_a), "p_b": str(p_b)}


class _ConditionTally:
    """Accumulates per-point outcomes for one condition."""

    def __init__(self, condition: int, description: str):
        self.condition = condition
        self.description = description
        self.checked = 0
        self.equality_points = 0
        self.min_margin: float | None = None
        self.failures: list[dict] = []

    def _fail(self, p_a, p_b, detail: str, **extra) -> None:
        if len(self.failures) < 5:  # keep the first few; counts say the rest
            self.failures.append({**_point_tag(p_a, p_b), "detail": detail, **extra})

    def exact_equality(self, ok: bool, p_a, p_b, detail: str) -> None:
        self.checked += 1
        if not ok:
            self._fail(p_a, p_b, detail)

    def strict_margin(
        self, margin: float, threshold: float, p_a, p_b, detail: str
    ) -> None:
        self.checked += 1
        if self.min_margin is None or margin < self.min_margin:
            self.min_margin = margin
        if margin <= threshold:
            self._fail(p_a, p_b, detail, margin=margin)

    def bound_with_allowed_equality(self, ok: bool, p_a, p_b, detail: str) -> None:
        self.checked += 1
        self.equality_points += 1
        if not ok:
            self._fail(p_a, p_b, detail)

    def report(self) -> ConditionReport:
        return ConditionReport(
            condition=self.condition,
            description=self.description,
            holds=not self.failures,
            checked=self.checked,
            equality_points=self.equality_points,
            min_strict_margin=self.min_margin,
            failures=tuple(self.failures),
        )


def _minus(v: Value) -> Value:
    return scale(v, Fraction(-1))


def check_gm_normalizer_conditions(
    r: int,
    steps: int = 20,
    strict_margin: float = DEFAULT_STRICT_MARGIN,
    dps: int = ORDER_DPS,
    fd_check: bool = True,
) -> dict:
    """Check the six normalizer conditions for the power-mean family.

    The conditions guarantee that s(p_a, p_b) * (p_ab - p_a*p_b) keeps
    the whole chance-correction property set.  They are checked on the
    interior grid of margin pairs (k/steps, l/steps):

    1. s is invariant under swapping its arguments and under jointly
       complementing them (exact).
    2. s(p, p) = s(p, 1-p) = 1/(p(1-p)) (exact).
    3. s stays below max(1/(p_a p_b), 1/((1-p_a)(1-p_b))); the bound is
       only asserted away from complementary margins, where it is not
       required.  Strict by at least ``strict_margin``.
    4. s stays below max(1/(p_a(1-p_b)), 1/((1-p_a)p_b)) away from equal
       margins, strict by at least ``strict_margin``.
    5. The scaling derivative (p_a d/dp_a + p_b d/dp_b) log s lies in
       its admissible band.  For power means it is the weight-averaged
       combination of the band's upper-edge terms, so it touches the
       edge exactly when the margins are equal; elsewhere the check is
       strict.  Checked in exact rational arithmetic.
    6. The shear derivative ((1-p_a) d/dp_a - p_b d/dp_b) log s lies in
       its band, touching the lower edge exactly on complementary
       margins; elsewhere strict.  Exact rational arithmetic.

    A finite-difference probe of ds/dp_a against its closed form guards
    the rational derivative algebra used by conditions 5 and 6.
    """
    r = int(r)
    if r == 0:
        raise ValueError("r must be nonzero")
    s = gm_normalizer(r)
    qs = [Fraction(k, steps) for k in range(1, steps)]
    grid = default_rate_grid(steps)

    c1 = _ConditionTally(1, "invariant under argument swap and joint complement")
    c2 = _ConditionTally(2, "equals 1/(p(1-p)) on equal and complementary margins")
    c3 = _ConditionTally(3, "below the same-sign product bound (off complements)")
    c4 = _ConditionTally(4, "below the cross-sign product bound (off equals)")
    c5 = _ConditionTally(5, "scaling derivative of log s within its band")
    c6 = _ConditionTally(6, "shear derivative of log s within its band")

    fd_worst = 0.0
    delta = Fraction(1, 10**7)

    with mp.workdps(dps):
        for p in qs:
            target = 1 / _margin_variance(p)
            c2.exact_equality(
                value_cmp(s(p, p), target) == 0, p, p, "s(p, p) != 1/(p(1-p))"
            )
            c2.exact_equality(
                value_cmp(s(p, 1 - p), target) == 0,
                p,
                1 - p,
                "s(p, 1-p) != 1/(p(1-p))",
            )
        for p_a, p_b in grid:
            s_val = s(p_a, p_b)
            c1.exact_equality(
                value_cmp(s_val, s(p_b, p_a)) == 0, p_a, p_b, "swap changes s"
            )
            c1.exact_equality(
                value_cmp(s_val, s(1 - p_a, 1 - p_b)) == 0,
                p_a,
                p_b,
                "joint complement changes s",
            )

            if p_b != 1 - p_a:
                bound3 = max(
                    1 / (p_a * p_b), 1 / ((1 - p_a) * (1 - p_b))
                )
                margin3 = as_float(value_sum([bound3, _minus(s_val)]))
                c3.strict_margin(
                    margin3, strict_margin, p_a, p_b, "same-sign bound violated"
                )
            if p_b != p_a:
                bound4 = max(
                    1 / (p_a * (1 - p_b)), 1 / ((1 - p_a) * p_b)
                )
                margin4 = as_float(value_sum([bound4, _minus(s_val)]))
                c4.strict_margin(
                    margin4, strict_margin, p_a, p_b, "cross-sign bound violated"
                )

            w_x, w_y = _power_weights(p_a, p_b, r)
            edge_a5 = (2 * p_a - 1) / (1 - p_a)
            edge_b5 = (2 * p_b - 1) / (1 - p_b)
            g5 = w_x * edge_a5 + w_y * edge_b5
            lo5 = min(Fraction(-2), -1 - p_a * p_b / ((1 - p_a) * (1 - p_b)))
            hi5 = max(edge_a5, edge_b5)
            if p_a == p_b:
                c5.bound_with_allowed_equality(
                    lo5 <= g5 <= hi5, p_a, p_b, "band violated on equal margins"
                )
            else:
                c5.strict_margin(
                    float(min(g5 - lo5, hi5 - g5)),
                    strict_margin,
                    p_a,
                    p_b,
                    "band not strict off equal margins",
                )

            edge_a6 = 2 - 1 / p_a
            edge_b6 = 2 - 1 / (1 - p_b)
            g6 = w_x * edge_a6 + w_y * edge_b6
            lo6 = min(edge_a6, edge_b6)
            hi6 = max(1 + p_b * (1 - p_a) / (p_a * (1 - p_b)), Fraction(2))
            if p_b == 1 - p_a:
                c6.bound_with_allowed_equality(
                    lo6 <= g6 <= hi6,
                    p_a,
                    p_b,
                    "band violated on complementary margins",
                )
            else:
                c6.strict_margin(
                    float(min(g6 - lo6, hi6 - g6)),
                    strict_margin,
                    p_a,
                    p_b,
                    "band not strict off complementary margins",
                )

            if fd_check:
                closed = normalizer_partial_pa(p_a, p_b, r, s_val)
                fd = scale(
                    value_sum([s(p_a + delta, p_b), _minus(s(p_a - delta, p_b))]),
                    Fraction(1, 2) / delta,
                )
                err = abs(as_float(value_sum([fd, _minus(closed)])))
                rel = err / max(1.0, abs(as_float(closed)))
                fd_worst = max(fd_worst, rel)

    conditions = [t.report() for t in (c1, c2, c3, c4, c5, c6)]
    all_hold = all(c.holds for c in conditions)
    partial = None
    if fd_check:
        partial = {
            "max_rel_error": fd_worst,
            "tolerance": 1e-6,
            "ok": fd_worst < 1e-6,
        }
    return {
        "r": r,
        "grid_steps": steps,
        "strict_margin": strict_margin,
        "conditions": conditions,
        "all_hold": all_hold,
        "partial_check": partial,
        "all_ok": all_hold and (partial is None or partial["ok"]),
    }
