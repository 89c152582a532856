"""Skeletal maps, compatibility with characteristic data, induced maps.

A skeletal map sends faces to faces, never lowers codimension, and is
monotone for the facet-set order, so closures of strata map into closures.
Together with a torus automorphism it induces a map of canonical models
once the characteristic data is compatible: each facet circle must land
inside the isotropy subtorus of the image face.  The straight-line homotopy
slides the induced map by a coherent table of translation lifts, one per
source face.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .char_pair import CharacteristicPair, ModelPoint
from .errors import DimensionError, NoSuchFaceError, PreconditionError
from .face_complex import Face, FaceComplex
from .lattice import (
    IntMatrix,
    Sublattice,
    TorusPoint,
    UnimodularMatrix,
    complete_to_basis,
    lattice_member,
    subtorus_contains,
)


def check_skeletal(
    source: FaceComplex, target: FaceComplex, mapping: Mapping[Face, Face]
) -> Face | None:
    """First face (lex order) at which the mapping fails to be skeletal.

    Skeletal means: defined on every face, image faces exist in the target,
    codimension never drops, and covering pairs stay nested.  A covering
    violation is blamed on the larger face.  Structural problems (missing
    faces, images outside the target) raise; only the two geometric
    conditions are reported as violations.
    """
    for face in source.faces:
        if face not in mapping:
            raise PreconditionError(f"mapping is not defined on face {list(face.facets)}")
        image = mapping[face]
        if not target.has_face(image.facets):
            raise NoSuchFaceError(
                f"image {list(image.facets)} of {list(face.facets)} is not a target face"
            )
    for face in source.faces:
        image = mapping[face]
        if image.codim < face.codim:
            return face
        for sub, _ in _covering_pairs(face):
            if not set(mapping[sub].facets) <= set(image.facets):
                return face
    return None


def _covering_pairs(face: Face) -> Iterable[tuple[Face, Face]]:
    for drop in face.facets:
        yield Face(tuple(i for i in face.facets if i != drop)), face


class SkeletalMap:
    """A validated face-to-face map between two complexes."""

    def __init__(
        self, source: FaceComplex, target: FaceComplex, mapping: Mapping[Face, Face]
    ) -> None:
        bad = check_skeletal(source, target, mapping)
        if bad is not None:
            raise PreconditionError(
                f"mapping is not skeletal at face {list(bad.facets)}"
            )
        self.source = source
        self.target = target
        self._mapping = {face: mapping[face] for face in source.faces}

    def __getitem__(self, face: Face) -> Face:
        try:
            return self._mapping[face]
        except KeyError:
            raise NoSuchFaceError(f"{list(face.facets)} is not a face of the source") from None

    def as_dict(self) -> dict[Face, Face]:
        return dict(self._mapping)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SkeletalMap):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and self._mapping == other._mapping
        )

    def __repr__(self) -> str:
        return f"SkeletalMap({self.source!r} -> {self.target!r})"


def skeletal_from_facet_map(
    source: FaceComplex, target: FaceComplex, images: Sequence[int]
) -> SkeletalMap:
    """Skeletal map induced facet-wise by i -> images[i].

    Every source face must land on an actual target face; facet bijections
    coming from complex isomorphisms always do.
    """
    if len(images) != source.m:
        raise DimensionError(f"need {source.m} facet images, got {len(images)}")
    mapping: dict[Face, Face] = {}
    for face in source.faces:
        key = tuple(sorted(images[i] for i in face.facets))
        if len(set(key)) != len(key) or not target.has_face(key):
            raise NoSuchFaceError(
                f"facet map sends face {list(face.facets)} to non-face {sorted(set(key))}"
            )
        mapping[face] = Face(key)
    return SkeletalMap(source, target, mapping)


def identity_skeletal(cx: FaceComplex) -> SkeletalMap:
    return SkeletalMap(cx, cx, {face: face for face in cx.faces})


@dataclass(frozen=True)
class Morphism:
    """Torus automorphism plus skeletal map; the raw data of an induced map."""

    torus_map: UnimodularMatrix
    face_map: SkeletalMap

    def __post_init__(self) -> None:
        n = self.face_map.source.n
        if self.face_map.target.n != n:
            raise DimensionError("source and target complexes have different dimensions")
        if self.torus_map.nrows != n:
            raise DimensionError(
                f"torus map is {self.torus_map.nrows}x{self.torus_map.ncols}, expected {n}x{n}"
            )


def identity_morphism(cx: FaceComplex) -> Morphism:
    return Morphism(UnimodularMatrix(IntMatrix.identity(cx.n).rows), identity_skeletal(cx))


def compose(outer: Morphism, inner: Morphism) -> Morphism:
    """Composite morphism applying inner first."""
    if inner.face_map.target != outer.face_map.source:
        raise PreconditionError("inner target complex differs from outer source complex")
    torus = UnimodularMatrix((outer.torus_map @ inner.torus_map).rows)
    mapping = {
        face: outer.face_map[inner.face_map[face]] for face in inner.face_map.source.faces
    }
    return Morphism(torus, SkeletalMap(inner.face_map.source, outer.face_map.target, mapping))


# ---------------------------------------------------------------------------
# compatibility


@dataclass(frozen=True)
class CompatibilityViolation:
    """A facet whose circle escapes the image isotropy, with a witness.

    The two model points are equal in the source model but have distinct
    images under the induced-map formula, certifying that no induced map
    exists.
    """

    facet: int
    source_points: tuple[ModelPoint, ModelPoint]


def check_compatibility(
    morphism: Morphism, source: CharacteristicPair, target: CharacteristicPair
) -> CompatibilityViolation | None:
    """None when characteristic data is compatible with the morphism.

    Compatibility at facet i: the torus map sends the facet vector into the
    isotropy lattice of the image face.  With monotonicity this extends to
    every face, which is exactly well-definedness of the induced map.
    """
    if source.complex != morphism.face_map.source:
        raise PreconditionError("source pair does not live on the morphism's source complex")
    if target.complex != morphism.face_map.target:
        raise PreconditionError("target pair does not live on the morphism's target complex")
    source.require_valid()
    target.require_valid()
    n = source.n
    for facet in range(source.complex.m):
        facet_face = Face((facet,))
        image = morphism.face_map[facet_face]
        lattice = target.isotropy_lattice(image)
        moved = morphism.torus_map.mul_vector(source.char.vector(facet))
        if lattice_member(moved, lattice):
            continue
        witness = _escape_witness(source, facet, moved, lattice, n)
        return CompatibilityViolation(facet=facet, source_points=witness)
    return None


def _escape_witness(
    source: CharacteristicPair,
    facet: int,
    moved: tuple[int, ...],
    lattice: Sublattice,
    n: int,
) -> tuple[ModelPoint, ModelPoint]:
    """Equal source points whose induced images differ.

    The moved facet vector has a nonzero coordinate r in the complement
    block of the image isotropy; scaling the facet circle by 1/(2|r|) stays
    on the source isotropy subtorus but shifts the image off the target one
    by exactly one half in that coordinate.
    """
    if lattice.rank == 0:
        complement = moved
        offset = 0
    else:
        completion = complete_to_basis(lattice.basis)
        u_inv = UnimodularMatrix(completion.transpose().rows).inverse()
        complement = u_inv.mul_vector(moved)
        offset = lattice.rank
    r = next(x for x in complement[offset:] if x != 0)
    scale = Fraction(1, 2 * abs(r))
    vector = source.char.vector(facet)
    face = Face((facet,))
    base = ModelPoint(TorusPoint.zero(n), face, "witness")
    shifted = ModelPoint(
        TorusPoint(tuple(scale * x for x in vector)), face, "witness"
    )
    return base, shifted


# ---------------------------------------------------------------------------
# induced maps and the straight-line homotopy


def induced_map_apply(morphism: Morphism, point: ModelPoint) -> ModelPoint:
    """Image of a model point under the induced map (sigma t, phi face)."""
    if point.t.dim != morphism.torus_map.nrows:
        raise DimensionError(
            f"point torus dimension {point.t.dim} does not match {morphism.torus_map.nrows}"
        )
    image_face = morphism.face_map[point.face]
    return ModelPoint(morphism.torus_map.act(point.t), image_face, point.tag)


def check_reps_coherence(
    morphism: Morphism,
    target: CharacteristicPair,
    reps: Mapping[Face, TorusPoint],
) -> tuple[Face, Face] | None:
    """First covering pair (sub, face) whose translation lifts disagree.

    Coherence asks that rep(face) - rep(sub) lie on the isotropy subtorus
    of the image of face, for every covering pair sub < face of the source;
    that is precisely continuity of the straight-line homotopy across
    stratum closures.  Missing table entries raise.
    """
    if target.complex != morphism.face_map.target:
        raise PreconditionError("target pair does not live on the morphism's target complex")
    target.require_valid()
    cx = morphism.face_map.source
    for face in cx.faces:
        if face not in reps:
            raise PreconditionError(f"reps table is missing face {list(face.facets)}")
        if reps[face].dim != target.n:
            raise DimensionError("rep has wrong torus dimension")
    for face in cx.faces:
        if face.is_empty:
            continue
        image = morphism.face_map[face]
        lattice = target.isotropy_lattice(image)
        for sub, _ in _covering_pairs(face):
            diff = reps[face] - reps[sub]
            if not subtorus_contains(diff, lattice):
                return sub, face
    return None


def straight_line_homotopy_apply(
    morphism: Morphism,
    reps: Mapping[Face, TorusPoint],
    point: ModelPoint,
    s: Fraction | int,
) -> ModelPoint:
    """Value at time s of the straight-line homotopy through the induced map.

    The formula is (sigma t + s * rep(face), phi face); at s = 0 it is the
    induced map itself.  The rep table should pass check_reps_coherence for
    the result to be independent of representatives; this function applies
    the formula to the given representative.
    """
    s = Fraction(s)
    if s < 0 or s > 1:
        raise PreconditionError(f"homotopy time {s} outside [0, 1]")
    if point.face not in reps:
        raise PreconditionError(f"reps table is missing face {list(point.face.facets)}")
    start = induced_map_apply(morphism, point)
    translated = start.t + reps[point.face].scaled(s)
    return ModelPoint(translated, start.face, start.tag)
