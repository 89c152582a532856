"""Problem files: the JSON surface for complexes, pairs, and rep tables.

A document looks like

    {
      "n": 2,
      "facets": ["left", "bottom", "diag"],
      "vertices": [[0, 1], [0, 2], [1, 2]],
      "lambda": [[1, 0], [0, 1], [1, 1]],
      "contractible_faces": true,
      "reps": [{"face": [0], "point": ["1/2", "0/1"]}]
    }

"facets" (names) and "lambda" are optional; the facet count is taken from
whichever of them is present, else from the largest vertex index.  The
serializer is canonical: sorted keys, sorted vertex rows, sorted reps,
rationals always written "p/q", so serialize(parse(serialize(x))) is byte
identical to serialize(x).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .char_pair import CharacteristicFunction, CharacteristicPair
from .errors import ProblemFileError, TorquoError
from .face_complex import Face, FaceComplex
from .lattice import TorusPoint

RepsTable = tuple[tuple[tuple[int, ...], tuple[Fraction, ...]], ...]


@dataclass(frozen=True)
class ProblemFile:
    """Parsed and canonicalized problem document."""

    n: int
    facet_names: tuple[str, ...] | None
    vertices: tuple[tuple[int, ...], ...]
    lambda_rows: tuple[tuple[int, ...], ...] | None
    contractible_faces: bool
    reps: RepsTable | None = None

    @property
    def facet_count(self) -> int:
        if self.facet_names is not None:
            return len(self.facet_names)
        if self.lambda_rows is not None:
            return len(self.lambda_rows)
        return 1 + max(i for vertex in self.vertices for i in vertex)

    def build_complex(self) -> FaceComplex:
        return FaceComplex(self.n, self.facet_count, self.vertices)

    def build_pair(self) -> CharacteristicPair:
        if self.lambda_rows is None:
            raise ProblemFileError('document has no "lambda" matrix')
        return CharacteristicPair(
            self.build_complex(), CharacteristicFunction(self.n, self.lambda_rows)
        )

    def reps_table(self) -> dict[Face, TorusPoint] | None:
        if self.reps is None:
            return None
        return {
            Face(facets): TorusPoint(point) for facets, point in self.reps
        }


def format_rational(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text: object, where: str) -> Fraction:
    if not isinstance(text, str):
        raise ProblemFileError(f"{where}: rationals must be strings like \"1/2\", got {text!r}")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ProblemFileError(f"{where}: cannot read rational {text!r}") from None


def _expect_int(value: Any, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ProblemFileError(f"{where}: expected an integer, got {value!r}")
    return value


_KNOWN_FIELDS = {"n", "facets", "vertices", "lambda", "contractible_faces", "reps"}


def parse_problem(text: str) -> ProblemFile:
    """Parse a problem document, raising with a line/field-path diagnostic."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemFileError(
            f"line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from None
    if not isinstance(data, dict):
        raise ProblemFileError("top level must be a JSON object")
    unknown = sorted(set(data) - _KNOWN_FIELDS)
    if unknown:
        raise ProblemFileError(f"unknown field {unknown[0]!r}")

    if "n" not in data:
        raise ProblemFileError('missing required field "n"')
    n = _expect_int(data["n"], '"n"')
    if n < 1:
        raise ProblemFileError(f'"n" must be >= 1, got {n}')

    if "vertices" not in data:
        raise ProblemFileError('missing required field "vertices"')
    raw_vertices = data["vertices"]
    if not isinstance(raw_vertices, list) or not raw_vertices:
        raise ProblemFileError('"vertices" must be a non-empty list')
    vertices = []
    for i, row in enumerate(raw_vertices):
        if not isinstance(row, list):
            raise ProblemFileError(f'"vertices"[{i}] must be a list')
        vertices.append(tuple(sorted(_expect_int(x, f'"vertices"[{i}]') for x in row)))
    vertices.sort()

    facet_names: tuple[str, ...] | None = None
    if "facets" in data:
        raw_names = data["facets"]
        if not isinstance(raw_names, list) or any(not isinstance(s, str) for s in raw_names):
            raise ProblemFileError('"facets" must be a list of strings')
        facet_names = tuple(raw_names)

    lambda_rows: tuple[tuple[int, ...], ...] | None = None
    if "lambda" in data:
        raw_lambda = data["lambda"]
        if not isinstance(raw_lambda, list) or not raw_lambda:
            raise ProblemFileError('"lambda" must be a non-empty list of rows')
        rows = []
        for i, row in enumerate(raw_lambda):
            if not isinstance(row, list):
                raise ProblemFileError(f'"lambda"[{i}] must be a list')
            if len(row) != n:
                raise ProblemFileError(
                    f'"lambda"[{i}] has length {len(row)}, expected n = {n}'
                )
            rows.append(tuple(_expect_int(x, f'"lambda"[{i}]') for x in row))
        lambda_rows = tuple(rows)

    if facet_names is not None and lambda_rows is not None:
        if len(facet_names) != len(lambda_rows):
            raise ProblemFileError(
                f'"lambda" has {len(lambda_rows)} rows for {len(facet_names)} facets'
            )

    if "contractible_faces" not in data:
        raise ProblemFileError('missing required field "contractible_faces"')
    flag = data["contractible_faces"]
    if not isinstance(flag, bool):
        raise ProblemFileError('"contractible_faces" must be true or false')

    reps: RepsTable | None = None
    if "reps" in data:
        raw_reps = data["reps"]
        if not isinstance(raw_reps, list):
            raise ProblemFileError('"reps" must be a list')
        entries = []
        for i, entry in enumerate(raw_reps):
            if not isinstance(entry, dict) or set(entry) != {"face", "point"}:
                raise ProblemFileError(
                    f'"reps"[{i}] must be an object with "face" and "point"'
                )
            face_raw = entry["face"]
            if not isinstance(face_raw, list):
                raise ProblemFileError(f'"reps"[{i}].face must be a list')
            facets = tuple(
                sorted(_expect_int(x, f'"reps"[{i}].face') for x in face_raw)
            )
            point_raw = entry["point"]
            if not isinstance(point_raw, list) or len(point_raw) != n:
                raise ProblemFileError(
                    f'"reps"[{i}].point must be a list of {n} rationals'
                )
            point = tuple(
                parse_rational(x, f'"reps"[{i}].point[{j}]') % 1
                for j, x in enumerate(point_raw)
            )
            entries.append((facets, point))
        entries.sort(key=lambda e: e[0])
        if len({facets for facets, _ in entries}) != len(entries):
            raise ProblemFileError('"reps" assigns the same face twice')
        reps = tuple(entries)

    problem = ProblemFile(
        n=n,
        facet_names=facet_names,
        vertices=tuple(vertices),
        lambda_rows=lambda_rows,
        contractible_faces=flag,
        reps=reps,
    )
    try:
        problem.build_complex()
    except TorquoError as exc:
        raise ProblemFileError(str(exc)) from None
    if lambda_rows is not None and len(lambda_rows) != problem.facet_count:
        raise ProblemFileError(
            f'"lambda" has {len(lambda_rows)} rows for {problem.facet_count} facets'
        )
    return problem


def serialize_problem(problem: ProblemFile) -> str:
    """Canonical JSON text; a fixpoint of parse followed by serialize."""
    doc: dict[str, Any] = {
        "n": problem.n,
        "vertices": sorted(sorted(v) for v in problem.vertices),
        "contractible_faces": problem.contractible_faces,
    }
    if problem.facet_names is not None:
        doc["facets"] = list(problem.facet_names)
    if problem.lambda_rows is not None:
        doc["lambda"] = [list(row) for row in problem.lambda_rows]
    if problem.reps is not None:
        doc["reps"] = [
            {
                "face": sorted(facets),
                "point": [format_rational(Fraction(x) % 1) for x in point],
            }
            for facets, point in sorted(problem.reps, key=lambda e: tuple(sorted(e[0])))
        ]
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
