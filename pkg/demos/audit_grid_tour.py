"""Walk the property audit: verdict grids and one witness in detail.

Runs the binary grid for all registry measures, prints it as a mark
table, then zooms in on the one cell people tend to get wrong: ba
under strong monotonicity, where adding a correct prediction can
leave the score exactly flat.
"""

from clfmeasures import ConfusionMatrix, audit_grid, evaluate, parse_measure_id

PROPS = ("max", "min", "sym", "csym", "dist", "mon", "smon", "cb", "acb")


def print_grid(verdicts, title, props=PROPS):
    cells = {(v.measure_id, v.property): v for v in verdicts}
    measures = sorted({v.measure_id for v in verdicts})
    width = max(len(m) for m in measures)
    print(title)
    print(" " * width, " ".join(f"{p:>4}" for p in props))
    for mid in measures:
        marks = ["   +" if cells[(mid, p)].satisfied else "   -" for p in props]
        print(f"{mid:<{width}}", " ".join(m[-4:] for m in marks))
    print()
    return cells


def main():
    cells = print_grid(audit_grid(), "binary grid (+ satisfied, - violated)")

    v = cells[("ba", "smon")]
    w = v.witness
    print("ba / strong monotonicity:", v.status)
    print("  edit:", w["edit"])
    print("  before", w["matrices"][0], "->", w["values"][0])
    print("  after ", w["matrices"][1], "->", w["values"][1])
    print("  the extra correct item changes no recall term, so no strict gain")
    print()

    # the same engine runs any m; cc loses three properties at m=3
    multiclass = audit_grid(
        measure_ids=["cc", "kappa", "sba"], properties=("min", "mon", "smon"), m=3
    )
    print_grid(multiclass, "same cells at m=3", props=("min", "mon", "smon"))

    cc = parse_measure_id("cc")
    z = ConfusionMatrix(((0, 1, 0), (1, 0, 1), (0, 1, 0)))
    print("a zero-diagonal matrix no longer floors cc:", evaluate(cc, z))


if __name__ == "__main__":
    main()
