"""Classification performance measures over confusion matrices.

Multiclass-native measures take a :class:`ConfusionMatrix`; binary-only
measures take :class:`BinaryCounts`.  Every measure returns an exact value
(Fraction or Root) except the entropy- and angle-based ones, which return
high-precision floats.

Singular configurations (empty classes, constant labelings) are resolved
so that every measure stays total and chance-level behaviour is preserved:

* ratio terms with an empty class are replaced by their value under
  margin-preserving randomization (``c_ii/a_i -> b_i/n`` and
  ``c_ii/b_i -> a_i/n``);
* correlation-style measures score 0 when exactly one labeling is
  constant, and +1/-1 when both are constant and equal/unequal;
* overlap ratios with empty numerator and denominator score 1;
* entropy terms follow the ``0 * log 0 = 0`` convention, and classes
  absent from both labelings are skipped.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache

import mpmath

from .core import BinaryCounts, ConfusionMatrix, binary_counts, one_vs_all
from .values import Root, Value, root_value, to_mpf, working_precision


class MeasureArityError(ValueError):
    """A binary-only measure was applied to a multiclass matrix."""


class MeasureParseError(ValueError):
    """A measure id string does not follow the grammar."""


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


# ---------------------------------------------------------------------------
# multiclass-native measures


def accuracy(C: ConfusionMatrix) -> Fraction:
    """Fraction of elements on the diagonal."""
    return _frac(C.diagonal_sum) / _frac(C.n)


def balanced_accuracy(C: ConfusionMatrix) -> Fraction:
    """Mean per-true-class recall; empty true classes contribute b_i/n."""
    total = Fraction(0)
    for i in range(C.m):
        if C.a[i]:
            total += _frac(C[i, i]) / _frac(C.a[i])
        else:
            total += _frac(C.b[i]) / _frac(C.n)
    return total / C.m


def symmetric_balanced_accuracy(C: ConfusionMatrix) -> Fraction:
    """Mean of recall and precision terms over all classes.

    Equals the average of balanced accuracy on C and on its transpose.
    """
    total = Fraction(0)
    for i in range(C.m):
        if C.a[i]:
            total += _frac(C[i, i]) / _frac(C.a[i])
        else:
            total += _frac(C.b[i]) / _frac(C.n)
        if C.b[i]:
            total += _frac(C[i, i]) / _frac(C.b[i])
        else:
            total += _frac(C.a[i]) / _frac(C.n)
    return total / (2 * C.m)


def cohens_kappa(C: ConfusionMatrix) -> Fraction:
    """Agreement above chance, normalized by its maximum headroom."""
    n = _frac(C.n)
    chance = sum(_frac(ai) * _frac(bi) for ai, bi in zip(C.a, C.b))
    den = n * n - chance
    if den == 0:
        # Happens only when both labelings are the same constant.
        return Fraction(1)
    return (n * _frac(C.diagonal_sum) - chance) / den


def _constant_class(sizes, n) -> int | None:
    """Index of the class holding all n elements, or None."""
    for i, s in enumerate(sizes):
        if s == n:
            return i
    return None


def matthews_cc(C: ConfusionMatrix) -> Value:
    """Correlation between the two labelings (multiclass generalization).

    Constant labelings make the correlation undefined; those cases resolve
    to 0 (one constant) or to +1/-1 (both constant, equal/unequal).
    """
    n = C.n
    ca = _constant_class(C.a, n)
    cb = _constant_class(C.b, n)
    if ca is not None and cb is not None:
        return Fraction(1) if ca == cb else Fraction(-1)
    if ca is not None or cb is not None:
        return Fraction(0)
    num = _frac(n) * _frac(C.diagonal_sum) - sum(
        _frac(ai) * _frac(bi) for ai, bi in zip(C.a, C.b)
    )
    rad = (_frac(n) ** 2 - sum(_frac(bi) ** 2 for bi in C.b)) * (
        _frac(n) ** 2 - sum(_frac(ai) ** 2 for ai in C.a)
    )
    return root_value(num / rad, rad, 2)


def confusion_entropy(C: ConfusionMatrix) -> mpmath.mpf:
    """Entropy of the misclassification pattern (a dissimilarity).

    Off-diagonal entries are weighted by logarithms of their share of the
    combined class mass, in base 2(m-1).  Classes missing from both
    labelings are skipped.
    """
    m = C.m
    if m < 2:
        raise MeasureArityError("confusion entropy needs at least two classes")
    with working_precision():
        total = mpmath.mpf(0)
        for j in range(m):
            mass = _frac(C.a[j]) + _frac(C.b[j])
            if mass == 0:
                continue
            for i in range(m):
                if i == j:
                    continue
                for c in (C[j, i], C[i, j]):
                    if c:
                        total += to_mpf(c) * mpmath.log(to_mpf(_frac(c) / mass))
        base = 2 * m - 2
        return -total / (2 * to_mpf(_frac(C.n)) * mpmath.log(base))


def _cc_as_mpf(C: ConfusionMatrix) -> mpmath.mpf:
    x = to_mpf(matthews_cc(C))
    # Guard against representation round-off at the extremes.
    return max(mpmath.mpf(-1), min(mpmath.mpf(1), x))


def correlation_distance(C: ConfusionMatrix) -> mpmath.mpf:
    """Angle between the labelings, scaled to [0, 1].  A dissimilarity."""
    with working_precision():
        return mpmath.acos(_cc_as_mpf(C)) / mpmath.pi


def chordal_distance(C: ConfusionMatrix) -> mpmath.mpf:
    """Chord-length transform sqrt(2 * (1 - correlation)), range [0, 2]."""
    with working_precision():
        return mpmath.sqrt(2 * (1 - _cc_as_mpf(C)))


# ---------------------------------------------------------------------------
# binary-only measures


def f_beta(bc: BinaryCounts, beta=Fraction(1)) -> Fraction:
    """Weighted harmonic mean of precision and recall on the positive class."""
    beta = _frac(beta)
    if beta <= 0:
        raise ValueError(f"beta must be positive, got {beta}")
    w = 1 + beta * beta
    num = w * _frac(bc.c11)
    den = num + beta * beta * _frac(bc.c10) + _frac(bc.c01)
    if den == 0:
        # No positives anywhere: perfect agreement on an all-negative set.
        return Fraction(1)
    return num / den


def jaccard(bc: BinaryCounts) -> Fraction:
    """Overlap of the positive sets; empty-vs-empty counts as full overlap."""
    den = _frac(bc.c11) + _frac(bc.c10) + _frac(bc.c01)
    if den == 0:
        return Fraction(1)
    return _frac(bc.c11) / den


def _normalize_r(r):
    """Collapse integral exponents to int so they take the exact path."""
    if isinstance(r, float) and r.is_integer():
        return int(r)
    if isinstance(r, Fraction) and r.denominator == 1:
        return int(r)
    return r


def generalized_means(bc: BinaryCounts, r) -> Value:
    """Covariance-style agreement normalized by a power mean of the two
    margin variances.  ``r`` is the power-mean exponent (nonzero; the
    r -> 0 limit is the correlation coefficient).

    Exact for integer r; other exponents are evaluated in high precision.
    """
    if r == 0:
        raise ValueError("r must be nonzero; the r->0 limit is matthews_cc")
    n = _frac(bc.n)
    x = _frac(bc.a1) * _frac(bc.a0)
    y = _frac(bc.b1) * _frac(bc.b0)
    if x == 0 and y == 0:
        # Both labelings constant: sign of the (dis)agreement.
        return Fraction(1) if (bc.c11 == bc.n or bc.c00 == bc.n) else Fraction(-1)
    if x == 0 or y == 0:
        return Fraction(0)
    num = n * _frac(bc.c11) - _frac(bc.a1) * _frac(bc.b1)
    r = _normalize_r(r)
    if not isinstance(r, int):
        with working_precision():
            rr = to_mpf(r)
            xr, yr = to_mpf(x) ** rr, to_mpf(y) ** rr
            mean = ((xr + yr) / 2) ** (1 / rr)
            return to_mpf(num) / mean
    if r > 0:
        u = (x**r + y**r) / 2
        if r == 1:
            return num / u
        return root_value(num / u, u ** (r - 1), r)
    # Negative r: the power mean is v**(1/s) with v the "harmonic" combination.
    s = -r
    v = 2 * x**s * y**s / (x**s + y**s)
    if s == 1:
        return num / v
    return root_value(num / v, v ** (s - 1), s)


def net_agreement(bc: BinaryCounts) -> Fraction:
    """Agreements minus disagreements.  Unnormalized; audit use only."""
    return _frac(bc.c11) + _frac(bc.c00) - _frac(bc.c10) - _frac(bc.c01)


def any_agreement(bc: BinaryCounts) -> Fraction:
    """Indicator of at least one agreement.  Audit use only."""
    return Fraction(1) if _frac(bc.c11) + _frac(bc.c00) > 0 else Fraction(0)


# ---------------------------------------------------------------------------
# descriptors and the registry

SIMILARITY = "similarity"
DISSIMILARITY = "dissimilarity"

_BASELINE_ZERO = ("const", Fraction(0))
_BASELINE_INV_M = ("inv_m",)


@dataclass(frozen=True)
class MeasureDescriptor:
    """Identity and metadata of one (possibly parametrized) measure.

    ``exact`` says whether values support exact comparison; averaged forms
    of root-valued measures lose exactness because unlike radicals are
    summed numerically.  ``c_max``/``c_min`` are the best/worst attainable
    values where the measure has them; ``baseline`` tags the constant
    expected under margin-preserving randomization (None if not constant).
    """

    measure_id: str
    base: str
    label: str
    arity: str  # "binary" | "multiclass"
    orientation: str  # SIMILARITY | DISSIMILARITY
    exact: bool
    beta: Fraction | None = None
    r: int | float | None = None
    scheme: str | None = None  # None | "micro" | "macro" | "weighted"
    c_max: Value | None = None
    c_min: Value | None = None
    baseline: tuple | None = None
    audit_only: bool = False

    def __str__(self) -> str:
        return self.measure_id


def _base_descriptor(base: str, beta=None, r=None) -> MeasureDescriptor:
    if base == "acc":
        return MeasureDescriptor(
            "acc", "acc", "accuracy", "multiclass", SIMILARITY, True,
            c_max=Fraction(1), c_min=Fraction(0),
        )
    if base == "ba":
        return MeasureDescriptor(
            "ba", "ba", "balanced accuracy", "multiclass", SIMILARITY, True,
            c_max=Fraction(1), c_min=Fraction(0), baseline=_BASELINE_INV_M,
        )
    if base == "sba":
        return MeasureDescriptor(
            "sba", "sba", "symmetric balanced accuracy", "multiclass",
            SIMILARITY, True,
            c_max=Fraction(1), c_min=Fraction(0), baseline=_BASELINE_INV_M,
        )
    if base == "kappa":
        return MeasureDescriptor(
            "kappa", "kappa", "Cohen's kappa", "multiclass", SIMILARITY, True,
            c_max=Fraction(1), baseline=_BASELINE_ZERO,
        )
    if base == "cc":
        return MeasureDescriptor(
            "cc", "cc", "correlation coefficient", "multiclass", SIMILARITY,
            True,
            c_max=Fraction(1), c_min=Fraction(-1), baseline=_BASELINE_ZERO,
        )
    if base == "ce":
        return MeasureDescriptor(
            "ce", "ce", "confusion entropy", "multiclass", DISSIMILARITY,
            False, c_max=Fraction(0),
        )
    if base == "cd":
        return MeasureDescriptor(
            "cd", "cd", "correlation distance", "multiclass", DISSIMILARITY,
            False, c_max=Fraction(0), c_min=Fraction(1),
        )
    if base == "cdprime":
        return MeasureDescriptor(
            "cdprime", "cdprime", "chordal distance", "multiclass",
            DISSIMILARITY, False, c_max=Fraction(0), c_min=Fraction(2),
        )
    if base == "f":
        beta = _frac(Fraction(1) if beta is None else beta)
        if beta <= 0:
            raise MeasureParseError(f"beta must be positive, got {beta}")
        mid = "f:beta=1" if beta == 1 else f"f:beta={beta}"
        label = "F1" if beta == 1 else f"F(beta={beta})"
        return MeasureDescriptor(
            mid, "f", label, "binary", SIMILARITY, True, beta=beta,
            c_max=Fraction(1), c_min=Fraction(0),
        )
    if base == "jaccard":
        return MeasureDescriptor(
            "jaccard", "jaccard", "Jaccard index", "binary", SIMILARITY, True,
            c_max=Fraction(1), c_min=Fraction(0),
        )
    if base == "gm":
        r = _normalize_r(1 if r is None else r)
        if r == 0:
            raise MeasureParseError("gm needs a nonzero r (r->0 limit is cc)")
        return MeasureDescriptor(
            f"gm:r={r}", "gm", f"GM(r={r})", "binary", SIMILARITY,
            isinstance(r, int), r=r,
            c_max=Fraction(1), c_min=Fraction(-1), baseline=_BASELINE_ZERO,
        )
    if base == "netagree":
        return MeasureDescriptor(
            "netagree", "netagree", "net agreement", "binary", SIMILARITY,
            True, audit_only=True,
        )
    if base == "anyagree":
        return MeasureDescriptor(
            "anyagree", "anyagree", "any-agreement indicator", "binary",
            SIMILARITY, True, c_min=Fraction(0), audit_only=True,
        )
    raise MeasureParseError(f"unknown measure {base!r}")


_ROOT_VALUED_BASES = {"cc", "gm"}
SCHEMES = ("micro", "macro", "weighted")


def with_scheme(desc: MeasureDescriptor, scheme: str) -> MeasureDescriptor:
    """Derive the micro/macro/weighted extension of a measure."""
    if scheme not in SCHEMES:
        raise MeasureParseError(f"unknown averaging scheme {scheme!r}")
    if desc.scheme is not None:
        raise MeasureParseError(f"{desc.measure_id} already has a scheme")
    exact = desc.exact
    if scheme in ("macro", "weighted") and desc.base in _ROOT_VALUED_BASES:
        exact = False  # sums of unlike radicals are evaluated numerically
    return replace(
        desc,
        measure_id=f"{desc.measure_id}:{scheme}",
        label=f"{desc.label}, {scheme}",
        arity="multiclass",
        scheme=scheme,
        exact=exact,
        c_max=None,
        c_min=None,
        baseline=None,
    )


def _parse_number(text: str):
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return Fraction(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        raise MeasureParseError(f"cannot parse numeric parameter {text!r}") from None


@lru_cache(maxsize=None)
def parse_measure_id(measure_id: str) -> MeasureDescriptor:
    """Parse ``name[:param=value][:scheme]`` into a descriptor.

    Examples: ``acc``, ``f:beta=2``, ``gm:r=-1:macro``, ``cc:weighted``.
    """
    parts = measure_id.strip().split(":")
    if not parts or not parts[0]:
        raise MeasureParseError(f"empty measure id {measure_id!r}")
    base, params = parts[0].lower(), parts[1:]
    scheme = None
    if params and params[-1].lower() in SCHEMES:
        scheme = params.pop().lower()
    beta = r = None
    for p in params:
        if "=" not in p:
            raise MeasureParseError(f"expected key=value parameter, got {p!r}")
        key, _, raw = p.partition("=")
        key = key.strip().lower()
        val = _parse_number(raw.strip())
        if key == "beta":
            beta = val
        elif key == "r":
            r = val
        else:
            raise MeasureParseError(f"unknown parameter {key!r} for {base!r}")
    if beta is not None and base != "f":
        raise MeasureParseError("beta only applies to f")
    if r is not None and base != "gm":
        raise MeasureParseError("r only applies to gm")
    desc = _base_descriptor(base, beta=beta, r=r)
    if scheme is not None:
        desc = with_scheme(desc, scheme)
    return desc


#: The measures of the main comparison grid, in presentation order.
CANONICAL_IDS = (
    "f:beta=1",
    "jaccard",
    "cc",
    "acc",
    "ba",
    "kappa",
    "ce",
    "sba",
    "gm:r=1",
    "cd",
)

#: Measures entering the order-consistency analysis.
CONSISTENCY_IDS = ("acc", "ba", "f:beta=1", "kappa", "ce", "gm:r=1", "cc", "sba")

#: Unnormalized helper measures used only inside property audits.
AUDIT_ONLY_IDS = ("netagree", "anyagree")


def canonical_descriptors() -> list[MeasureDescriptor]:
    return [parse_measure_id(mid) for mid in CANONICAL_IDS]


# ---------------------------------------------------------------------------
# evaluation


def binary_evaluator(desc: MeasureDescriptor):
    """The measure's binary form as a function of BinaryCounts."""
    base = desc.base
    if base == "f":
        beta = desc.beta

        return lambda bc: f_beta(bc, beta)
    if base == "jaccard":
        return jaccard
    if base == "gm":
        r = desc.r

        return lambda bc: generalized_means(bc, r)
    if base == "netagree":
        return net_agreement
    if base == "anyagree":
        return any_agreement
    native = _NATIVE_EVALUATORS[base]
    return lambda bc: native(bc.to_matrix())


_NATIVE_EVALUATORS = {
    "acc": accuracy,
    "ba": balanced_accuracy,
    "sba": symmetric_balanced_accuracy,
    "kappa": cohens_kappa,
    "cc": matthews_cc,
    "ce": confusion_entropy,
    "cd": correlation_distance,
    "cdprime": chordal_distance,
}


def evaluate(desc: MeasureDescriptor, C: ConfusionMatrix) -> Value:
    """Evaluate a measure described by ``desc`` on a confusion matrix."""
    if desc.scheme is not None:
        from . import averaging

        fn = binary_evaluator(replace(desc, scheme=None))
        if desc.scheme == "micro":
            return averaging.micro_extend(fn, C)
        if desc.scheme == "macro":
            return averaging.macro_extend(fn, C)
        return averaging.weighted_extend(fn, C)
    if desc.arity == "binary":
        if C.m != 2:
            raise MeasureArityError(
                f"{desc.measure_id} is binary-only; use an averaging scheme for m={C.m}"
            )
        return binary_evaluator(desc)(binary_counts(C))
    return _NATIVE_EVALUATORS[desc.base](C)


def oriented(desc: MeasureDescriptor, value: Value) -> Value:
    """Flip dissimilarities so that larger always means better."""
    if desc.orientation == DISSIMILARITY:
        return -value
    return value


def evaluate_oriented(desc: MeasureDescriptor, C: ConfusionMatrix) -> Value:
    return oriented(desc, evaluate(desc, C))
