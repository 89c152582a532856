"""Face complexes of nice manifolds with corners.

A complex is described by its facet count m and the facet sets of its
codimension-n faces (the "vertices" of the dual view).  Niceness means
every such maximal face lies in exactly n facets; the complex is the
downward closure of the maximal faces together with the empty face, which
stands for the whole space.  Faces are identified with the sorted tuple of
facet indices containing them, so codimension equals tuple length.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import ComplexInputError, DimensionError, NoSuchFaceError, SimplicityError

FacetId = int


@dataclass(frozen=True, order=True)
class Face:
    """A face, encoded by the strictly increasing tuple of facets containing it."""

    facets: tuple[FacetId, ...]

    def __post_init__(self) -> None:
        facets = tuple(self.facets)
        if any(not isinstance(i, int) or isinstance(i, bool) or i < 0 for i in facets):
            raise ComplexInputError(f"facet ids must be nonnegative integers: {facets!r}")
        if any(a >= b for a, b in zip(facets, facets[1:])):
            raise ComplexInputError(f"facet tuple must be strictly increasing: {facets!r}")
        object.__setattr__(self, "facets", facets)

    @classmethod
    def of(cls, facets: Iterable[FacetId]) -> "Face":
        items = sorted(set(facets))
        return cls(tuple(items))

    @property
    def codim(self) -> int:
        return len(self.facets)

    @property
    def is_empty(self) -> bool:
        return not self.facets

    def __contains__(self, facet: FacetId) -> bool:
        return facet in self.facets

    def is_subface_of(self, other: "Face") -> bool:
        """Reverse inclusion of facet sets: self contains other as a subspace."""
        return set(self.facets) <= set(other.facets)


class FaceComplex:
    """The poset of faces generated by maximal faces of a nice corner structure."""

    def __init__(self, n: int, m: int, maximal_faces: Iterable[Iterable[FacetId]]) -> None:
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            raise ComplexInputError(f"dimension n must be a positive integer, got {n!r}")
        if not isinstance(m, int) or isinstance(m, bool) or m < n:
            raise ComplexInputError(f"facet count m must be an integer >= n, got {m!r}")
        seen: set[tuple[int, ...]] = set()
        maximal: list[Face] = []
        for raw in maximal_faces:
            items = tuple(raw)
            if len(set(items)) != len(items):
                raise ComplexInputError(f"maximal face repeats a facet: {items!r}")
            if len(items) != n:
                raise SimplicityError(
                    f"maximal face {items!r} has {len(items)} facets, expected {n}"
                )
            if any(not isinstance(i, int) or isinstance(i, bool) for i in items):
                raise ComplexInputError(f"facet ids must be integers: {items!r}")
            if any(i < 0 or i >= m for i in items):
                raise ComplexInputError(f"facet id out of range in {items!r} (m={m})")
            key = tuple(sorted(items))
            if key in seen:
                raise ComplexInputError(f"duplicate maximal face {key!r}")
            seen.add(key)
            maximal.append(Face(key))
        if not maximal:
            raise ComplexInputError("complex needs at least one maximal face")
        covered = {i for face in maximal for i in face.facets}
        missing = sorted(set(range(m)) - covered)
        if missing:
            raise ComplexInputError(f"facets {missing} lie on no maximal face")

        faces: set[Face] = {Face(())}
        for face in maximal:
            for k in range(1, n + 1):
                for combo in itertools.combinations(face.facets, k):
                    faces.add(Face(combo))

        self.n = n
        self.m = m
        self.maximal_faces: tuple[Face, ...] = tuple(sorted(maximal))
        self.faces: tuple[Face, ...] = tuple(sorted(faces))
        self._face_set: frozenset[tuple[int, ...]] = frozenset(f.facets for f in faces)
        by_codim: dict[int, list[Face]] = {}
        for face in self.faces:
            by_codim.setdefault(face.codim, []).append(face)
        self._by_codim = {k: tuple(v) for k, v in by_codim.items()}

    # -- queries ------------------------------------------------------------

    def has_face(self, facets: Iterable[FacetId]) -> bool:
        return tuple(sorted(set(facets))) in self._face_set

    def faces_of_codim(self, k: int) -> tuple[Face, ...]:
        if k < 0 or k > self.n:
            raise DimensionError(f"codimension {k} out of range 0..{self.n}")
        return self._by_codim.get(k, ())

    def smallest_face(self, facets: Iterable[FacetId]) -> Face:
        """The face supported on exactly the given facets.

        For a simple corner structure the intersection of the listed facets,
        when nonempty, is the unique face of codimension len(facets) they
        span; a facet set outside the complex has empty intersection.
        """
        key = tuple(sorted(set(facets)))
        if any(i < 0 or i >= self.m for i in key):
            raise NoSuchFaceError(f"facet id out of range in {key!r} (m={self.m})")
        if key not in self._face_set:
            raise NoSuchFaceError(f"facets {key!r} have empty intersection")
        return Face(key)

    def subfaces(self, face: Face) -> Iterator[Face]:
        """All faces containing this one as a subspace (smaller facet sets)."""
        for k in range(face.codim + 1):
            for combo in itertools.combinations(face.facets, k):
                yield Face(combo)

    def covered_by(self, face: Face) -> Iterator[tuple[Face, Face]]:
        """Covering pairs (g, face) with g one facet short of face."""
        for drop in face.facets:
            g = Face(tuple(i for i in face.facets if i != drop))
            yield g, face

    def facet_degree(self, facet: FacetId) -> int:
        """Number of maximal faces through the facet."""
        if facet < 0 or facet >= self.m:
            raise DimensionError(f"facet id {facet} out of range (m={self.m})")
        return sum(1 for face in self.maximal_faces if facet in face.facets)

    # -- structural equality -------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FaceComplex):
            return NotImplemented
        return (self.n, self.m, self.maximal_faces) == (other.n, other.m, other.maximal_faces)

    def __hash__(self) -> int:
        return hash((self.n, self.m, self.maximal_faces))

    def __repr__(self) -> str:
        verts = [list(f.facets) for f in self.maximal_faces]
        return f"FaceComplex(n={self.n}, m={self.m}, maximal_faces={verts})"


def build_complex(n: int, m: int, maximal_faces: Iterable[Iterable[FacetId]]) -> FaceComplex:
    return FaceComplex(n, m, maximal_faces)


def isomorphisms(first: FaceComplex, second: FaceComplex) -> list[tuple[FacetId, ...]]:
    """All facet bijections carrying maximal faces of one complex onto the other.

    Returned as tuples perm with perm[i] the image of facet i, sorted
    lexicographically.  Degree and co-degree tables prune the backtracking;
    the full maximal-face condition is checked before accepting.
    """
    if first.n != second.n or first.m != second.m:
        return []
    if len(first.maximal_faces) != len(second.maximal_faces):
        return []
    m = first.m
    deg1 = [first.facet_degree(i) for i in range(m)]
    deg2 = [second.facet_degree(i) for i in range(m)]
    if sorted(deg1) != sorted(deg2):
        return []

    def pair_table(cx: FaceComplex) -> dict[tuple[int, int], int]:
        table: dict[tuple[int, int], int] = {}
        for face in cx.maximal_faces:
            for a, b in itertools.combinations(face.facets, 2):
                table[a, b] = table.get((a, b), 0) + 1
        return table

    pair1 = pair_table(first)
    pair2 = pair_table(second)
    max2 = {f.facets for f in second.maximal_faces}

    found: list[tuple[FacetId, ...]] = []
    image = [-1] * m
    used = [False] * m

    def place(i: int) -> None:
        if i == m:
            if all(tuple(sorted(image[j] for j in f.facets)) in max2 for f in first.maximal_faces):
                found.append(tuple(image))
            return
        for j in range(m):
            if used[j] or deg1[i] != deg2[j]:
                continue
            ok = True
            for k in range(i):
                a, b = min(i, k), max(i, k)
                c, d = min(j, image[k]), max(j, image[k])
                if pair1.get((a, b), 0) != pair2.get((c, d), 0):
                    ok = False
                    break
            if not ok:
                continue
            image[i] = j
            used[j] = True
            place(i + 1)
            used[j] = False
            image[i] = -1

    place(0)
    return found
