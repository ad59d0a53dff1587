"""Exhaustive audits of structural properties of measures.

Nine properties are checked by enumeration over bounded spaces of
confusion matrices:

* ``max`` / ``min``: a best (worst) value exists, attained exactly on the
  diagonal (zero-diagonal) matrices;
* ``sym``: invariance under swapping the two labelings (transposition);
* ``csym``: invariance under relabeling the classes (simultaneous row and
  column permutation);
* ``dist``: the measure induces a metric on labelings, checked as
  symmetry + maximal agreement + the triangle inequality of
  ``c_max - M`` over labeling triples;
* ``mon``: resolving one disagreement (moving an element from an
  off-diagonal cell to the diagonal of its row or column) never makes
  the measure strictly worse, provided no row or column of the starting
  matrix holds everything;
* ``smon``: adding a diagonal element or removing an off-diagonal one
  strictly improves the measure, under the side conditions above plus
  the pair not being both diagonal or both zero-diagonal;
* ``cb``: the expectation under margin-preserving randomization is one
  constant, independent of class sizes and of n;
* ``acb``: the measure of the expected confusion matrix is one constant.

The mon/smon asymmetry is deliberate.  Several measures ignore parts of
the matrix (F and Jaccard never look at c_00), so an edit can leave them
flat; under mon a flat step is fine because a chain of improvements
still never ranks a worse matrix above a better one, while smon is
exactly the demand that every single improvement registers.  Ties are
therefore smon violations but not mon violations.

Value-comparison spaces (``max``/``min``/``sym``/``csym``) contain every
matrix whose true labeling uses all m classes (row sums positive);
predictions are unconstrained, so the singularity resolutions are
exercised.  Allowing empty true classes there would contradict the
best-value semantics of recall-style measures, whose empty-class terms
resolve to chance level rather than to perfection.  The mon/smon edit
walks do allow empty classes: their definitions exclude only matrices
with a constant labeling (a row or column sum equal to n), and some
known multiclass violations live on matrices with an unused class.
Edits constrain the starting matrix only; the edited matrix may end up
with a constant labeling, where the resolved value is compared as-is.
The ``dist`` triple space uses all labelings, constants included;
``cb``/``acb`` quantify over all true class sizes and all non-unary
predicted class sizes (``cb_min_col`` optionally demands every class be
predicted at least once, which the averaging-preservation checks use:
a class absent from both labelings makes every one-vs-rest comparison
of that class degenerate, and the agreement-based resolution of that
degenerate sub-problem is deliberately not chance-level).

Verdicts carry replayable witnesses: matrices are rendered as exact
entry strings and values through :func:`clfmeasures.values.value_str`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .baselines import exact_baseline_expectation, is_unary
from .core import (
    Budget,
    ConfusionMatrix,
    Labeling,
    build_confusion,
    compositions,
    expected_matrix,
    permute_classes,
    transpose,
)
from .measures import (
    AUDIT_ONLY_IDS,
    CANONICAL_IDS,
    MeasureDescriptor,
    evaluate,
    oriented,
    parse_measure_id,
    with_scheme,
)
from .values import DEFAULT_EPS, as_float, value_cmp, value_str, value_sum

MAX = "max"
MIN = "min"
SYM = "sym"
CSYM = "csym"
DIST = "dist"
MON = "mon"
SMON = "smon"
CB = "cb"
ACB = "acb"

ALL_PROPERTIES = (MAX, MIN, SYM, CSYM, DIST, MON, SMON, CB, ACB)

SATISFIED = "satisfied"
VIOLATED = "violated"

#: Float slack for the vectorized triangle scan; candidate violations are
#: confirmed in exact or high-precision arithmetic before being reported.
DIST_TOL = 1e-9


def parse_property(name: str) -> str:
    key = name.strip().lower()
    if key not in ALL_PROPERTIES:
        raise ValueError(f"unknown property {name!r}; expected one of {ALL_PROPERTIES}")
    return key


@dataclass(frozen=True)
class AuditSpace:
    """Bounds of one exhaustive audit.

    ``n_max`` bounds the value-comparison spaces, ``mon_n_max`` the edit
    walks, ``dist_n_max`` the labeling-triple space, and ``cb_n_min`` /
    ``cb_n_max`` the margin grid of the baseline properties.  ``min_row``
    is the true-class-size floor of the value-comparison spaces and
    ``cb_min_col`` the predicted-class-size floor of the margin grid,
    both discussed in the module docstring.
    """

    m: int = 2
    n_max: int = 8
    mon_n_max: int | None = None
    dist_n_max: int = 6
    cb_n_min: int = 2
    cb_n_max: int = 8
    min_row: int = 1
    cb_min_col: int = 0

    @property
    def edit_n_max(self) -> int:
        return self.mon_n_max if self.mon_n_max is not None else self.n_max

    def describe(self) -> dict:
        return {
            "m": self.m,
            "n_max": self.n_max,
            "mon_n_max": self.edit_n_max,
            "dist_n_max": self.dist_n_max,
            "cb_n": [self.cb_n_min, self.cb_n_max],
            "min_row": self.min_row,
            "cb_min_col": self.cb_min_col,
        }


BINARY_DEFAULT_SPACE = AuditSpace()
MULTICLASS_DEFAULT_SPACE = AuditSpace(
    m=3, n_max=6, mon_n_max=9, dist_n_max=6, cb_n_min=2, cb_n_max=6
)


def audit_space_policy(desc: MeasureDescriptor, prop: str, m: int = 2) -> AuditSpace:
    """Default audit bounds for one measure/property cell.

    The entropy measure gets a wider binary window for min/mon/smon: its
    known violations at balanced margins need n up to 12.
    """
    space = BINARY_DEFAULT_SPACE if m == 2 else MULTICLASS_DEFAULT_SPACE
    if m == 2 and desc.base == "ce" and prop in (MIN, MON, SMON):
        space = replace(space, n_max=12, mon_n_max=12)
    return space


@dataclass(frozen=True)
class Verdict:
    """Outcome of one property check over one bounded space."""

    measure_id: str
    property: str
    status: str
    space: dict
    witness: dict | None
    checked: int

    @property
    def satisfied(self) -> bool:
        return self.status == SATISFIED

    def to_dict(self) -> dict:
        return {
            "measure": self.measure_id,
            "property": self.property,
            "status": self.status,
            "space": self.space,
            "witness": self.witness,
            "checked": self.checked,
        }


def _fmt_matrix(C: ConfusionMatrix) -> list[list[str]]:
    return [[str(x) for x in row] for row in C.entries]


class _Eval:
    """Per-check memoized evaluator with orientation and comparison."""

    def __init__(self, desc: MeasureDescriptor, eps: float):
        self.desc = desc
        self.eps = eps
        self._memo: dict = {}

    def raw(self, C: ConfusionMatrix):
        v = self._memo.get(C.entries)
        if v is None:
            v = evaluate(self.desc, C)
            self._memo[C.entries] = v
        return v

    def oriented(self, C: ConfusionMatrix):
        return oriented(self.desc, self.raw(C))

    def cmp(self, u, v) -> int:
        return value_cmp(u, v, self.eps)

    def witness(self, kind: str, matrices, **extra) -> dict:
        values = [self.raw(C) for C in matrices]
        return {
            "kind": kind,
            "matrices": [_fmt_matrix(C) for C in matrices],
            "values": [value_str(v) for v in values],
            "value_floats": [as_float(v) for v in values],
            **extra,
        }


@lru_cache(maxsize=4096)
def _space_entries(m: int, n: int, min_row: int) -> tuple:
    """All m x m integer matrices with total n and row sums >= min_row."""
    out = []
    for a in compositions(n, m, min_part=min_row):
        rows_acc: list[tuple[int, ...]] = []

        def rec(i: int):
            if i == m:
                out.append(tuple(rows_acc))
                return
            for row in compositions(a[i], m):
                rows_acc.append(row)
                rec(i + 1)
                rows_acc.pop()

        rec(0)
    return tuple(out)


def _iter_matrices(m: int, n_lo: int, n_hi: int, min_row: int = 1):
    for n in range(max(n_lo, 1), n_hi + 1):
        for entries in _space_entries(m, n, min_row):
            yield ConfusionMatrix(entries)


def _edit(C: ConfusionMatrix, decrement=None, increment=None) -> ConfusionMatrix:
    cells = [list(row) for row in C.entries]
    if decrement is not None:
        i, j = decrement
        cells[i][j] -= 1
    if increment is not None:
        i, j = increment
        cells[i][j] += 1
    return ConfusionMatrix(tuple(tuple(row) for row in cells))


# ---------------------------------------------------------------------------
# extremal agreement


def _check_extremal(ev: _Eval, space: AuditSpace, at_max: bool):
    target = ConfusionMatrix.is_diagonal if at_max else ConfusionMatrix.is_zero_diagonal
    kind = "diagonal" if at_max else "zero_diagonal"
    ref_val = None
    ref_C = None
    checked = 0
    matrices = list(_iter_matrices(space.m, 1, space.n_max, space.min_row))
    for C in matrices:
        if target(C):
            v = ev.oriented(C)
            checked += 1
            if ref_val is None:
                ref_val, ref_C = v, C
            elif ev.cmp(v, ref_val) != 0:
                return VIOLATED, ev.witness(f"{kind}_values_differ", [ref_C, C]), checked
    if ref_C is None:
        raise RuntimeError(f"audit space contains no {kind} matrix")
    for C in matrices:
        if target(C):
            continue
        v = ev.oriented(C)
        checked += 1
        side = ev.cmp(v, ref_val)
        if (side >= 0) if at_max else (side <= 0):
            which = "reaches_max_off_diagonal" if at_max else "reaches_min_off_zero_diagonal"
            return VIOLATED, ev.witness(which, [C, ref_C]), checked
    return SATISFIED, None, checked


# ---------------------------------------------------------------------------
# symmetry


def _check_sym(ev: _Eval, space: AuditSpace):
    checked = 0
    for C in _iter_matrices(space.m, 1, space.n_max, space.min_row):
        Ct = transpose(C)
        checked += 1
        if ev.cmp(ev.oriented(C), ev.oriented(Ct)) != 0:
            return VIOLATED, ev.witness("transpose_differs", [C, Ct]), checked
    return SATISFIED, None, checked


def _check_csym(ev: _Eval, space: AuditSpace):
    perms = [p for p in itertools.permutations(range(space.m)) if p != tuple(range(space.m))]
    checked = 0
    for C in _iter_matrices(space.m, 1, space.n_max, space.min_row):
        for p in perms:
            Cp = permute_classes(C, p)
            checked += 1
            if ev.cmp(ev.oriented(C), ev.oriented(Cp)) != 0:
                w = ev.witness("class_permutation_differs", [C, Cp], permutation=list(p))
                return VIOLATED, w, checked
    return SATISFIED, None, checked


# ---------------------------------------------------------------------------
# monotonicity


def _unary_margin(C: ConfusionMatrix) -> bool:
    return any(x == C.n for x in C.a) or any(x == C.n for x in C.b)


def _check_mon(ev: _Eval, space: AuditSpace):
    # Empty classes are legal start matrices here; only constant
    # labelings are excluded, and only on the unedited side.
    checked = 0
    for C in _iter_matrices(space.m, 2, space.edit_n_max, min_row=0):
        if _unary_margin(C):
            continue
        base = ev.oriented(C)
        m = space.m
        for i in range(m):
            for j in range(m):
                if i == j or C[i, j] < 1:
                    continue
                for t in (i, j):
                    Ct = _edit(C, decrement=(i, j), increment=(t, t))
                    checked += 1
                    if ev.cmp(ev.oriented(Ct), base) < 0:
                        w = ev.witness(
                            "improvement_penalized",
                            [C, Ct],
                            edit={"decrement": [i, j], "increment": [t, t]},
                        )
                        return VIOLATED, w, checked
    return SATISFIED, None, checked


def _check_smon(ev: _Eval, space: AuditSpace):
    checked = 0
    for C in _iter_matrices(space.m, 1, space.edit_n_max, min_row=0):
        if _unary_margin(C):
            continue
        base = ev.oriented(C)
        m = space.m
        if not C.is_diagonal():
            for i in range(m):
                Ct = _edit(C, increment=(i, i))
                checked += 1
                if ev.cmp(ev.oriented(Ct), base) <= 0:
                    w = ev.witness(
                        "extra_agreement_not_rewarded", [C, Ct], edit={"increment": [i, i]}
                    )
                    return VIOLATED, w, checked
        if not C.is_zero_diagonal():
            for i in range(m):
                for j in range(m):
                    if i == j or C[i, j] < 1:
                        continue
                    Ct = _edit(C, decrement=(i, j))
                    checked += 1
                    if ev.cmp(ev.oriented(Ct), base) <= 0:
                        w = ev.witness(
                            "removed_confusion_not_rewarded",
                            [C, Ct],
                            edit={"decrement": [i, j]},
                        )
                        return VIOLATED, w, checked
    return SATISFIED, None, checked


# ---------------------------------------------------------------------------
# baseline properties


def _margin_grid(space: AuditSpace):
    for n in range(space.cb_n_min, space.cb_n_max + 1):
        for a in compositions(n, space.m):
            for b in compositions(n, space.m, min_part=space.cb_min_col):
                if is_unary(b):
                    continue
                yield n, a, b


def _check_constant_over_margins(ev: _Eval, space: AuditSpace, value_of):
    ref = None
    checked = 0
    for n, a, b in _margin_grid(space):
        val = value_of(a, b)
        checked += 1
        if ref is None:
            ref = (n, a, b, val)
        elif ev.cmp(val, ref[3]) != 0:
            witness = {
                "kind": "constant_depends_on_margins",
                "first": {"n": ref[0], "a": list(ref[1]), "b": list(ref[2]),
                          "value": value_str(ref[3]), "value_float": as_float(ref[3])},
                "second": {"n": n, "a": list(a), "b": list(b),
                           "value": value_str(val), "value_float": as_float(val)},
            }
            return VIOLATED, witness, checked
    return SATISFIED, None, checked


def _check_cb(ev: _Eval, space: AuditSpace, budget: Budget | None):
    return _check_constant_over_margins(
        ev,
        space,
        lambda a, b: exact_baseline_expectation(ev.desc, a, b, budget=budget),
    )


def _check_acb(ev: _Eval, space: AuditSpace, budget: Budget | None):
    return _check_constant_over_margins(
        ev,
        space,
        lambda a, b: evaluate(ev.desc, expected_matrix(a, b)),
    )


# ---------------------------------------------------------------------------
# distance


def _labeling_array(m: int, n: int) -> np.ndarray:
    return np.array(list(itertools.product(range(m), repeat=n)), dtype=np.int8)


def _pair_table_index(labels: np.ndarray, m: int):
    """Map every ordered labeling pair to its confusion table.

    Returns (tables, inverse) with ``tables`` the distinct m*m count
    vectors and ``inverse`` of shape (L, L) indexing into them.
    """
    onehot = (labels[:, :, None] == np.arange(m)[None, None, :]).astype(np.float32)
    joint = np.einsum("pki,qkj->pqij", onehot, onehot)
    L = labels.shape[0]
    flat = joint.reshape(L * L, m * m).astype(np.int32)
    tables, inverse = np.unique(flat, axis=0, return_inverse=True)
    return tables, inverse.reshape(L, L)


def _confirm_triangle(ev: _Eval, c_max, la, lb, lc, m: int) -> bool:
    """Exact (or high-precision) confirmation of a float triangle hit."""
    vab = ev.oriented(build_confusion(la, lb))
    vbc = ev.oriented(build_confusion(lb, lc))
    vac = ev.oriented(build_confusion(la, lc))
    # d(A,C) > d(A,B) + d(B,C)  <=>  v_AB + v_BC > v_AC + c_max
    lhs = value_sum([vab, vbc])
    rhs = value_sum([vac, c_max])
    return value_cmp(lhs, rhs, DIST_TOL) > 0


def _check_dist(ev: _Eval, space: AuditSpace, eps: float):
    checked = 0
    for prereq, checker in ((SYM, _check_sym), (MAX, lambda e, s: _check_extremal(e, s, True))):
        status, witness, sub = checker(ev, space)
        checked += sub
        if status == VIOLATED:
            return VIOLATED, {"kind": f"prerequisite_{prereq}_failed", "inner": witness}, checked

    # The oriented best value; diagonal matrices all share it (max holds).
    ref = ConfusionMatrix(
        tuple(
            tuple(1 if i == j else 0 for j in range(space.m)) for i in range(space.m)
        )
    )
    c_max = ev.oriented(ref)
    c_max_f = as_float(c_max)

    for n in range(1, space.dist_n_max + 1):
        labels = _labeling_array(space.m, n)
        L = labels.shape[0]
        tables, inverse = _pair_table_index(labels, space.m)
        vals = np.empty(len(tables), dtype=np.float64)
        for k, tab in enumerate(tables):
            C = ConfusionMatrix(tuple(tuple(int(x) for x in tab[i * space.m:(i + 1) * space.m])
                                      for i in range(space.m)))
            vals[k] = as_float(ev.oriented(C))
        D = c_max_f - vals[inverse]
        checked += L * L

        def labeling(idx: int) -> Labeling:
            return Labeling(tuple(int(x) for x in labels[idx]), space.m)

        # Identity of indiscernibles: distance zero only between equal labelings.
        off = D <= DIST_TOL
        np.fill_diagonal(off, False)
        if off.any():
            p, q = map(int, np.argwhere(off)[0])
            la, lb = labeling(p), labeling(q)
            vab = ev.oriented(build_confusion(la, lb))
            if value_cmp(vab, c_max, DIST_TOL) >= 0:
                w = ev.witness(
                    "distinct_labelings_at_distance_zero",
                    [build_confusion(la, lb)],
                    labelings=[list(la.labels), list(lb.labels)],
                )
                return VIOLATED, w, checked

        for a_idx in range(L):
            # d(A, C) <= d(A, B) + d(B, C) for every middle B, vectorized.
            slack = D[a_idx, None, :] - (D[a_idx, :, None] + D) - DIST_TOL
            checked += L * L
            if not (slack > 0).any():
                continue
            b_idx, c_idx = map(int, np.argwhere(slack > 0)[0])
            la, lb, lc = labeling(a_idx), labeling(b_idx), labeling(c_idx)
            if _confirm_triangle(ev, c_max, la, lb, lc, space.m):
                mats = [
                    build_confusion(la, lc),
                    build_confusion(la, lb),
                    build_confusion(lb, lc),
                ]
                w = ev.witness(
                    "triangle_violation",
                    mats,
                    labelings=[list(x.labels) for x in (la, lb, lc)],
                    n=n,
                )
                return VIOLATED, w, checked
    return SATISFIED, None, checked


# ---------------------------------------------------------------------------
# entry points


def check_property(
    desc: MeasureDescriptor | str,
    prop: str,
    space: AuditSpace | None = None,
    eps: float = DEFAULT_EPS,
    budget: Budget | None = None,
) -> Verdict:
    """Audit one property of one measure over a bounded space.

    A ``satisfied`` verdict means no counterexample exists within the
    space; a ``violated`` verdict carries a replayable witness.
    """
    if isinstance(desc, str):
        desc = parse_measure_id(desc)
    prop = parse_property(prop)
    if space is None:
        space = audit_space_policy(desc, prop, m=2)
    if desc.arity == "binary" and desc.scheme is None and space.m != 2:
        raise ValueError(f"{desc.measure_id} is binary-only; audit it at m=2")
    ev = _Eval(desc, eps)
    if prop == MAX:
        status, witness, checked = _check_extremal(ev, space, at_max=True)
    elif prop == MIN:
        status, witness, checked = _check_extremal(ev, space, at_max=False)
    elif prop == SYM:
        status, witness, checked = _check_sym(ev, space)
    elif prop == CSYM:
        status, witness, checked = _check_csym(ev, space)
    elif prop == MON:
        status, witness, checked = _check_mon(ev, space)
    elif prop == SMON:
        status, witness, checked = _check_smon(ev, space)
    elif prop == CB:
        status, witness, checked = _check_cb(ev, space, budget)
    elif prop == ACB:
        status, witness, checked = _check_acb(ev, space, budget)
    else:
        status, witness, checked = _check_dist(ev, space, eps)
    return Verdict(desc.measure_id, prop, status, space.describe(), witness, checked)


@lru_cache(maxsize=None)
def _default_binary_verdict(measure_id: str, prop: str) -> Verdict:
    desc = parse_measure_id(measure_id)
    return check_property(desc, prop, audit_space_policy(desc, prop, m=2))


def audit_grid(
    measure_ids=CANONICAL_IDS,
    properties=ALL_PROPERTIES,
    m: int = 2,
    space: AuditSpace | None = None,
    eps: float = DEFAULT_EPS,
    jobs: int = 1,
) -> list[Verdict]:
    """Run the full measure-by-property audit grid.

    With the default binary space, verdicts are cached across calls.
    ``jobs`` > 1 distributes cells over a thread pool; results are
    assembled in deterministic order regardless.
    """
    cells = [(mid, prop) for mid in measure_ids for prop in properties]

    def run(cell):
        mid, prop = cell
        if m == 2 and space is None:
            return _default_binary_verdict(mid, prop)
        desc = parse_measure_id(mid)
        sp = space if space is not None else audit_space_policy(desc, prop, m=m)
        return check_property(desc, prop, sp, eps)

    if jobs > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(run, cells))
    return [run(cell) for cell in cells]


# ---------------------------------------------------------------------------
# averaging preservation


def preservation_spaces(prop: str) -> tuple[AuditSpace, ...]:
    """Default multiclass spaces for the preservation checks.

    m=4 is included because some averaged forms only degenerate there:
    the pooled net-agreement count loses its n-dependence exactly at
    m=4, so its strong-monotonicity failure needs a 4-class space.  The
    baseline grids demand every class predicted at least once
    (``cb_min_col=1``): that is the multiclass counterpart of the
    non-unary condition the binary definition puts on the predicted
    class sizes, and it keeps every one-vs-rest sub-problem away from
    the degenerate both-labelings-constant corner whose resolution is
    an agreement value rather than the chance value.
    """
    prop = parse_property(prop)
    if prop == SMON:
        wide = AuditSpace(m=3, n_max=5, mon_n_max=5, dist_n_max=5, cb_n_max=5, cb_min_col=1)
        return (wide, replace(wide, m=4))
    return (
        AuditSpace(m=3, n_max=5, mon_n_max=5, dist_n_max=5, cb_n_max=5, cb_min_col=1),
        AuditSpace(m=4, n_max=4, mon_n_max=4, dist_n_max=4, cb_n_max=4, cb_min_col=1),
    )


PRESERVED = "preserved"
NOT_PRESERVED = "not_preserved"


@dataclass(frozen=True)
class PreservationVerdict:
    """Whether an averaging scheme preserves a property.

    ``not_preserved`` means some binary measure has the property while its
    averaged form violates it; the violating measure and the inner verdict
    are attached.
    """

    scheme: str
    property: str
    status: str
    bases_checked: tuple[str, ...]
    witness_measure: str | None
    inner: Verdict | None

    @property
    def preserved(self) -> bool:
        return self.status == PRESERVED

    def to_dict(self) -> dict:
        return {
            "scheme": self.scheme,
            "property": self.property,
            "status": self.status,
            "bases_checked": list(self.bases_checked),
            "witness_measure": self.witness_measure,
            "inner": self.inner.to_dict() if self.inner else None,
        }


#: Properties for which each synthetic probe joins the preservation pool.
#: The probes exist to make specific negative cells concrete (the net
#: count for strong monotonicity, the agreement indicator for minimal
#: agreement); elsewhere the pool is the public registry.
_PROBE_PROPERTIES = {"netagree": (SMON,), "anyagree": (MIN,)}


def _preservation_bases(prop: str) -> list[MeasureDescriptor]:
    # Probes come first so that the cells they were built for are
    # witnessed by them rather than by whichever registry measure
    # happens to degrade earlier in canonical order.
    ids = [mid for mid in AUDIT_ONLY_IDS if prop in _PROBE_PROPERTIES.get(mid, ())]
    ids += list(CANONICAL_IDS)
    return [
        parse_measure_id(mid)
        for mid in ids
        if _default_binary_verdict(mid, prop).satisfied
    ]


def check_averaging_preservation(
    scheme: str,
    prop: str,
    spaces=None,
    eps: float = DEFAULT_EPS,
) -> PreservationVerdict:
    """Check whether one averaging scheme preserves one property.

    Every registry measure whose binary form has the property is averaged
    and re-audited over the given multiclass spaces; the first violation
    settles the cell.
    """
    prop = parse_property(prop)
    if spaces is None:
        spaces = preservation_spaces(prop)
    bases = _preservation_bases(prop)
    for base in bases:
        averaged = with_scheme(base, scheme)
        for space in spaces:
            verdict = check_property(averaged, prop, space, eps)
            if not verdict.satisfied:
                return PreservationVerdict(
                    scheme,
                    prop,
                    NOT_PRESERVED,
                    tuple(b.measure_id for b in bases),
                    base.measure_id,
                    verdict,
                )
    return PreservationVerdict(
        scheme, prop, PRESERVED, tuple(b.measure_id for b in bases), None, None
    )


# ---------------------------------------------------------------------------
# joint impossibility


def corroborate_impossibility(measure_ids=CANONICAL_IDS) -> dict:
    """Check that no audited measure is simultaneously monotone, a
    distance, and constant-baseline: each one violates at least one of
    the three, with a witness."""
    per_measure = {}
    all_consistent = True
    for mid in measure_ids:
        verdicts = {p: _default_binary_verdict(mid, p) for p in (MON, DIST, CB)}
        has_all = all(v.satisfied for v in verdicts.values())
        if has_all:
            all_consistent = False
        per_measure[mid] = {
            "mon": verdicts[MON].status,
            "dist": verdicts[DIST].status,
            "cb": verdicts[CB].status,
            "violates": [p for p, v in verdicts.items() if not v.satisfied],
            "witnesses": {
                p: v.witness for p, v in verdicts.items() if v.witness is not None
            },
        }
    return {
        "measures": per_measure,
        "no_measure_has_all_three": all_consistent,
    }
