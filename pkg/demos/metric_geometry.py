"""Distances, near-distances, and how flat a baseline really is.

Three short studies:
  1. ce looks like a distance but violates the triangle inequality.
  2. cd is a metric whose deviation from its chance constant is
     second order in the margin perturbation; its companion cdprime
     is first order.  Finite differences over the rate grid expose
     the gap.
  3. the gm normalizers stay inside the admissible envelope that
     the exact-baseline analysis requires, with strict slack.
"""

from clfmeasures import ConfusionMatrix, as_float, evaluate, parse_measure_id
from clfmeasures.inconsistency import triplet_from_labels
from clfmeasures.orders import baseline_order, check_gm_normalizer_conditions


def triangle():
    ce = parse_measure_id("ce")
    A, B, C = (1, 1, 0), (1, 1, 1), (1, 0, 1)
    m_ab, m_ac = triplet_from_labels(A, B, C).matrices()
    m_bc = triplet_from_labels(B, C, A).matrices()[0]
    d = {k: as_float(evaluate(ce, M)) for k, M in (("AB", m_ab), ("BC", m_bc), ("AC", m_ac))}
    print(f"ce(A,B) = {d['AB']:.4f}   ce(B,C) = {d['BC']:.4f}   ce(A,C) = {d['AC']:.4f}")
    print(f"triangle inequality needs {d['AC']:.4f} <= {d['AB'] + d['BC']:.4f}: violated")
    print()


def flatness():
    for mid in ("cd", "cdprime"):
        rep = baseline_order(mid, l_max=3)
        probe = {p.order: p for p in rep.probes}
        print(
            f"{mid:>8}: baseline {rep.baseline_value:.4f}, "
            f"order {rep.order} "
            f"(second difference max {probe[2].max_abs:.2e}, "
            f"third {probe[3].max_abs:.2e})"
        )
    print("cd hugs its constant to second order; cdprime drifts immediately.")
    print()


def normalizers():
    for r in (-2, -1, 1, 2):
        rep = check_gm_normalizer_conditions(r)
        margins = [
            c.min_strict_margin
            for c in rep["conditions"]
            if c.min_strict_margin is not None
        ]
        print(
            f"gm r={r:>2}: all six conditions hold = {rep['all_ok']}, "
            f"tightest strict margin {min(margins):.3e}"
        )


if __name__ == "__main__":
    triangle()
    flatness()
    normalizers()
