"""How measure agreement dissolves as sample size grows.

At n=2 every registry measure ranks predictions identically.  Each
added sample splits the pack a little further until, by n=9, every
pair of measures disagrees on some comparison.  The script prints the
group structure per n and then replays one stored discriminating
triplet to show what a disagreement concretely looks like.
"""

from clfmeasures import as_float, evaluate, parse_measure_id, value_str
from clfmeasures.inconsistency import (
    discriminating_triplet_for,
    indistinguishable_groups,
    relation_sign,
)


def main():
    for n in range(2, 11):
        groups = [g for g in indistinguishable_groups(n) if len(g) > 1]
        label = ", ".join("{" + ", ".join(g) + "}" for g in groups) or "all singletons"
        print(f"n={n:>2}: {label}")
    print()

    # cc and sba hold out the longest; this n=10 triplet splits them
    idx, t = discriminating_triplet_for("cc", "sba")
    C1, C2 = t.matrices()
    print(f"stored triplet #{idx} separating cc from sba:")
    print("truth      :", t.truth.labels)
    print("prediction1:", t.pred1.labels, "->", C1.entries)
    print("prediction2:", t.pred2.labels, "->", C2.entries)
    for mid in ("cc", "sba"):
        desc = parse_measure_id(mid)
        v1, v2 = evaluate(desc, C1), evaluate(desc, C2)
        sign = relation_sign(mid, C1, C2)
        verdict = {1: "prefers prediction1", -1: "prefers prediction2", 0: "tied"}[sign]
        print(
            f"{mid:>3}: {value_str(v1)} ({as_float(v1):.4f}) vs "
            f"{value_str(v2)} ({as_float(v2):.4f})  -> {verdict}"
        )


if __name__ == "__main__":
    main()
