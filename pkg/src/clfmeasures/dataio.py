"""File formats for labelings and confusion matrices.

Three formats are supported:

* ``labels-csv``: two columns, true label then predicted label, with an
  optional ``true,pred`` header.  Labels are arbitrary strings; the
  alphabet is sorted (numerically when every label parses as an integer,
  lexicographically otherwise) and mapped to 0-based class indices.  The
  mapping travels with the parsed pair so reports can show original
  names.
* ``matrix-json``: a JSON array of array rows.  Entries are integers or
  exact fraction strings like ``"2/3"``; floats are accepted only when
  integral.  A JSON object with a ``"matrix"`` key is also accepted.
* ``matrix-csv``: the same entries as comma-separated rows.

Writers emit exactly what the readers accept, and the round trip is
exact: fractions never pass through binary floating point.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .core import ConfusionMatrix, Labeling, build_confusion

FORMATS = ("labels-csv", "matrix-json", "matrix-csv")


class InputError(ValueError):
    """Malformed or inconsistent input data (CLI exit code 2)."""


@dataclass(frozen=True)
class LabelingPair:
    """A parsed (truth, prediction) pair with its label alphabet."""

    truth: Labeling
    pred: Labeling
    alphabet: tuple[str, ...]

    @property
    def n(self) -> int:
        return len(self.truth)

    @property
    def m(self) -> int:
        return self.truth.m

    def matrix(self) -> ConfusionMatrix:
        return build_confusion(self.truth, self.pred)

    def mapping(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.alphabet)}


def _sorted_alphabet(labels: set[str]) -> tuple[str, ...]:
    try:
        return tuple(sorted(labels, key=int))
    except ValueError:
        return tuple(sorted(labels))


def _read_text(path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def read_labels_csv(path, alphabet: Sequence[str] | None = None) -> LabelingPair:
    """Parse a two-column (true, pred) CSV into an aligned labeling pair.

    With an explicit ``alphabet``, labels outside it are an error and the
    class order follows the declaration; otherwise the alphabet is
    inferred from the data.
    """
    rows = [row for row in csv.reader(_read_text(path).splitlines()) if row]
    if rows and [c.strip().lower() for c in rows[0]] == ["true", "pred"]:
        rows = rows[1:]
    if not rows:
        raise InputError(f"{path}: no data rows")
    pairs = []
    for lineno, row in enumerate(rows, 1):
        if len(row) != 2:
            raise InputError(
                f"{path}: row {lineno} has {len(row)} fields, expected 2 (true,pred)"
            )
        pairs.append((row[0].strip(), row[1].strip()))
    seen = {x for pair in pairs for x in pair}
    if alphabet is None:
        names = _sorted_alphabet(seen)
    else:
        names = tuple(str(x) for x in alphabet)
        if len(set(names)) != len(names):
            raise InputError("alphabet contains duplicate labels")
        unknown = sorted(seen - set(names))
        if unknown:
            raise InputError(f"{path}: labels {unknown} not in the declared alphabet")
    index = {name: i for i, name in enumerate(names)}
    m = len(names)
    truth = Labeling(tuple(index[t] for t, _ in pairs), m)
    pred = Labeling(tuple(index[p] for _, p in pairs), m)
    return LabelingPair(truth, pred, names)


def _parse_entry(raw, where: str):
    if isinstance(raw, bool):
        raise InputError(f"{where}: boolean entry")
    if isinstance(raw, int):
        value = raw
    elif isinstance(raw, float):
        if not raw.is_integer():
            raise InputError(
                f"{where}: non-integer float {raw}; use a fraction string like \"2/3\""
            )
        value = int(raw)
    elif isinstance(raw, str):
        try:
            value = Fraction(raw.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"{where}: cannot parse entry {raw!r}") from exc
        if value.denominator == 1:
            value = int(value)
    else:
        raise InputError(f"{where}: unsupported entry type {type(raw).__name__}")
    if value < 0:
        raise InputError(f"{where}: negative entry {raw}")
    return value


def _matrix_from_rows(rows, source: str) -> ConfusionMatrix:
    if not isinstance(rows, (list, tuple)) or not rows:
        raise InputError(f"{source}: expected a non-empty array of rows")
    m = len(rows)
    entries = []
    for i, row in enumerate(rows):
        if not isinstance(row, (list, tuple)):
            raise InputError(f"{source}: row {i + 1} is not an array")
        if len(row) != m:
            raise InputError(
                f"{source}: row {i + 1} has {len(row)} entries, expected {m} (square)"
            )
        entries.append(
            tuple(_parse_entry(x, f"{source} row {i + 1}") for x in row)
        )
    try:
        return ConfusionMatrix(tuple(entries))
    except ValueError as exc:
        raise InputError(f"{source}: {exc}") from exc


def read_matrix_json(path) -> ConfusionMatrix:
    try:
        doc = json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON: {exc}") from exc
    if isinstance(doc, dict):
        if "matrix" not in doc:
            raise InputError(f"{path}: JSON object lacks a \"matrix\" key")
        doc = doc["matrix"]
    return _matrix_from_rows(doc, str(path))


def read_matrix_csv(path) -> ConfusionMatrix:
    rows = [row for row in csv.reader(_read_text(path).splitlines()) if row]
    return _matrix_from_rows([[c for c in row] for row in rows], str(path))


def parse_inputs(path, fmt: str):
    """Dispatch on the declared format.

    Returns a :class:`LabelingPair` for ``labels-csv`` and a
    :class:`ConfusionMatrix` for the matrix formats.
    """
    if fmt == "labels-csv":
        return read_labels_csv(path)
    if fmt == "matrix-json":
        return read_matrix_json(path)
    if fmt == "matrix-csv":
        return read_matrix_csv(path)
    raise InputError(f"unknown input format {fmt!r}; expected one of {FORMATS}")


def _entry_repr(x) -> int | str:
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else int(x)
    return int(x)


def matrix_to_json(C: ConfusionMatrix) -> str:
    rows = [[_entry_repr(x) for x in row] for row in C.entries]
    return json.dumps(rows, separators=(", ", ": ")) + "\n"


def matrix_to_csv(C: ConfusionMatrix) -> str:
    lines = [",".join(str(_entry_repr(x)) for x in row) for row in C.entries]
    return "\n".join(lines) + "\n"


def write_matrix(C: ConfusionMatrix, path, fmt: str = "matrix-json") -> None:
    if fmt == "matrix-json":
        text = matrix_to_json(C)
    elif fmt == "matrix-csv":
        text = matrix_to_csv(C)
    else:
        raise InputError(f"cannot write format {fmt!r}")
    Path(path).write_text(text, encoding="utf-8")
