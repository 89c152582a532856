"""Characteristic pairs and the canonical model built from them.

A characteristic function assigns an integer vector to each facet; the
pair (complex, function) is valid when the vectors of every face extend
to a basis of the standard lattice.  In that case the canonical model is
the quotient of T^n x X gluing torus factors along the isotropy subtorus
of each face, and points of the model are represented by (torus point,
face, component tag) triples.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import DimensionError, NoSuchFaceError, PreconditionError
from .face_complex import Face, FaceComplex
from .lattice import IntVector, Sublattice, TorusPoint, extends_to_basis, subtorus_contains


@dataclass(frozen=True)
class CharacteristicFunction:
    """Assignment of an integer vector in Z^n to each facet 0..m-1.

    Construction checks shapes only; primitivity of each vector is part of
    validity and surfaces as a violation at the singleton face of the
    offending facet.
    """

    n: int
    vectors: tuple[IntVector, ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise DimensionError("rank n must be >= 1")
        vectors = tuple(tuple(int(x) for x in row) for row in self.vectors)
        if not vectors:
            raise DimensionError("characteristic function needs at least one facet")
        if any(len(row) != self.n for row in vectors):
            raise DimensionError(f"every facet vector must have length {self.n}")
        object.__setattr__(self, "vectors", vectors)

    @property
    def facet_count(self) -> int:
        return len(self.vectors)

    def vector(self, facet: int) -> IntVector:
        if facet < 0 or facet >= len(self.vectors):
            raise DimensionError(f"facet id {facet} out of range")
        return self.vectors[facet]


@dataclass(frozen=True)
class ModelPoint:
    """Point of the canonical model: torus coordinates over a face of X.

    The tag names the connected component of the face interior the point
    sits over; faces of the complexes handled here are connected, so it is
    bookkeeping that must simply agree between compared points.
    """

    t: TorusPoint
    face: Face
    tag: str = ""


@dataclass(frozen=True)
class Stratum:
    """One orbit-type stratum of the canonical model."""

    face: Face
    codim: int
    isotropy_rank: int
    orbit_dim: int


class CharacteristicPair:
    """A face complex together with a characteristic function on its facets."""

    def __init__(self, complex: FaceComplex, char: CharacteristicFunction) -> None:
        if char.n != complex.n:
            raise DimensionError(
                f"characteristic rank {char.n} does not match complex dimension {complex.n}"
            )
        if char.facet_count != complex.m:
            raise DimensionError(
                f"{char.facet_count} facet vectors for {complex.m} facets"
            )
        self.complex = complex
        self.char = char
        self._violation: Face | None = None
        self._validated = False

    @property
    def n(self) -> int:
        return self.complex.n

    def face_vectors(self, face: Face) -> tuple[IntVector, ...]:
        return tuple(self.char.vector(i) for i in face.facets)

    def first_violation(self) -> Face | None:
        """First face, in lex order, whose vectors fail the basis condition."""
        if not self._validated:
            self._violation = next(
                (
                    face
                    for face in self.complex.faces
                    if not extends_to_basis(self.face_vectors(face))
                ),
                None,
            )
            self._validated = True
        return self._violation

    @property
    def is_valid(self) -> bool:
        return self.first_violation() is None

    def require_valid(self) -> None:
        bad = self.first_violation()
        if bad is not None:
            raise PreconditionError(
                f"characteristic function is invalid at face {list(bad.facets)}"
            )

    # -- isotropy and model points -------------------------------------------

    def isotropy_lattice(self, face: Face | Iterable[int]) -> Sublattice:
        """Lattice of the isotropy subtorus of a face: span of its facet vectors.

        Valid pairs give saturated lattices of rank equal to the codimension.
        """
        face = face if isinstance(face, Face) else Face.of(face)
        if not self.complex.has_face(face.facets):
            raise NoSuchFaceError(f"{list(face.facets)} is not a face of the complex")
        return Sublattice.spanned_by(self.n, self.face_vectors(face))

    def points_equal(self, p: ModelPoint, q: ModelPoint) -> bool:
        """Whether two representatives name the same point of the model.

        Points glue exactly along faces: the faces and tags must agree and
        the torus difference must lie on the isotropy subtorus of the face.
        """
        self.require_valid()
        for point in (p, q):
            if point.t.dim != self.n:
                raise DimensionError(
                    f"point has torus dimension {point.t.dim}, expected {self.n}"
                )
            if not self.complex.has_face(point.face.facets):
                raise NoSuchFaceError(
                    f"{list(point.face.facets)} is not a face of the complex"
                )
        if p.face != q.face or p.tag != q.tag:
            return False
        if p.face.is_empty:
            return p.t == q.t
        return subtorus_contains(q.t - p.t, self.isotropy_lattice(p.face))

    # -- global structure ------------------------------------------------------

    def orbit_strata(self) -> list[Stratum]:
        """Orbit-type strata, one per face, sorted by (codim, face).

        Over the open part of a codim-k face the isotropy subtorus has rank
        k, so orbits there have dimension n - k.
        """
        self.require_valid()
        rows = [
            Stratum(
                face=face,
                codim=face.codim,
                isotropy_rank=self.isotropy_lattice(face).rank,
                orbit_dim=self.n - face.codim,
            )
            for face in self.complex.faces
        ]
        rows.sort(key=lambda s: (s.codim, s.face))
        return rows

    def fixed_point_count(self) -> int:
        """Number of torus-fixed points: one per maximal face."""
        self.require_valid()
        return len(self.complex.maximal_faces)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CharacteristicPair):
            return NotImplemented
        return (self.complex, self.char) == (other.complex, other.char)

    def __hash__(self) -> int:
        return hash((self.complex, self.char))

    def __repr__(self) -> str:
        return f"CharacteristicPair(complex={self.complex!r}, char={self.char!r})"


def validate_characteristic(pair: CharacteristicPair) -> Face | None:
    """None for a valid pair, otherwise the lex-first violating face."""
    return pair.first_violation()
