"""What a random guesser scores, computed exactly.

For a fixed true labeling and fixed predicted class sizes, the
expectation of a measure over uniformly random predictions is a
rational number this library computes two independent ways: by
enumerating confusion matrices with multinomial weights, and by
enumerating predicted labelings directly.  Measures with the
constant-baseline property pin that expectation regardless of the
margins; accuracy famously does not.
"""

from fractions import Fraction

from clfmeasures import exact_baseline_expectation, parse_measure_id

CASES = [
    ((4, 4), (4, 4)),  # balanced
    ((6, 2), (4, 4)),  # skewed truth
    ((6, 2), (7, 1)),  # skewed both, majority guesser territory
]


def main():
    ids = ("acc", "ba", "kappa", "cc", "sba", "gm:r=2")
    descs = {mid: parse_measure_id(mid) for mid in ids}

    header = "a        b       " + "".join(f"{mid:>9}" for mid in ids)
    print(header)
    for a, b in CASES:
        row = [f"{str(a):<9}{str(b):<8}"]
        for mid in ids:
            e = exact_baseline_expectation(descs[mid], a, b)
            row.append(f"{str(e):>9}")
        print("".join(row))
    print()
    print("acc drifts with the margins; the rest sit at their constant.")
    print()

    # the two enumeration routes must agree term for term
    a, b = (5, 3), (2, 6)
    for mid in ("acc", "cc", "sba"):
        via_matrices = exact_baseline_expectation(descs[mid], a, b, "matrices")
        via_labelings = exact_baseline_expectation(descs[mid], a, b, "labelings")
        assert via_matrices == via_labelings
        print(f"{mid:>4} at a={a}, b={b}: {via_matrices} (both routes)")

    # and the constant really is exact, not a float coincidence
    assert exact_baseline_expectation(descs["cc"], (7, 1), (3, 5)) == 0
    assert exact_baseline_expectation(descs["ba"], (7, 1), (3, 5)) == Fraction(1, 2)


if __name__ == "__main__":
    main()
