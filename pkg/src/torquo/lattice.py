"""Exact integer and rational linear algebra over the standard lattice.

Everything here is fraction-free or uses fractions.Fraction; no floats.
The torus T^n is R^n / Z^n, points carry coordinates in [0, 1).  A
sublattice is stored by a row-style Hermite basis so membership tests and
unimodular completions are deterministic.

Conventions:

* matrices act on column vectors: (M @ v)_i = sum_j M[i][j] v[j];
* Hermite form is lower triangular by rows: the pivot of each row is its
  last nonzero entry, pivot columns strictly increase downward, pivots are
  positive, and entries below a pivot (in later rows) are reduced into
  [0, pivot);
* Smith form D = U @ M @ V with U, V unimodular and nonnegative diagonal
  entries in divisibility order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DimensionError, PreconditionError

IntVector = tuple[int, ...]
RationalVector = tuple[Fraction, ...]


def _as_int(x: object) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise DimensionError(f"expected an integer entry, got {x!r}")
    return x


# ---------------------------------------------------------------------------
# matrices


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix, row-major."""

    rows: tuple[IntVector, ...]

    def __post_init__(self) -> None:
        rows = tuple(tuple(_as_int(x) for x in row) for row in self.rows)
        if not rows:
            raise DimensionError("matrix needs at least one row")
        width = len(rows[0])
        if width == 0:
            raise DimensionError("matrix needs at least one column")
        if any(len(row) != width for row in rows):
            raise DimensionError("ragged rows in matrix")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]]) -> "IntMatrix":
        return cls(tuple(tuple(row) for row in rows))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        if n < 1:
            raise DimensionError("identity needs n >= 1")
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0])

    @property
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def row(self, i: int) -> IntVector:
        return self.rows[i]

    def column(self, j: int) -> IntVector:
        return tuple(row[j] for row in self.rows)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(tuple(zip(*self.rows)))

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise DimensionError(
                f"cannot multiply {self.nrows}x{self.ncols} by {other.nrows}x{other.ncols}"
            )
        cols = other.transpose().rows
        return IntMatrix(
            tuple(
                tuple(sum(a * b for a, b in zip(row, col)) for col in cols)
                for row in self.rows
            )
        )

    def mul_vector(self, v: Sequence[int]) -> IntVector:
        if len(v) != self.ncols:
            raise DimensionError(f"vector length {len(v)} does not match {self.ncols} columns")
        return tuple(sum(a * b for a, b in zip(row, v)) for row in self.rows)

    def mul_rational(self, v: Sequence[Fraction]) -> RationalVector:
        if len(v) != self.ncols:
            raise DimensionError(f"vector length {len(v)} does not match {self.ncols} columns")
        return tuple(sum((a * b for a, b in zip(row, v)), start=Fraction(0)) for row in self.rows)

    def det(self) -> int:
        """Determinant by the Bareiss fraction-free elimination."""
        if not self.is_square:
            raise DimensionError("determinant of a non-square matrix")
        n = self.nrows
        a = [list(row) for row in self.rows]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k] != 0:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
                a[i][k] = 0
            prev = a[k][k]
        return sign * a[n - 1][n - 1]


class UnimodularMatrix(IntMatrix):
    """Square integer matrix with determinant +1 or -1."""

    def __post_init__(self) -> None:
        super().__post_init__()
        if not self.is_square:
            raise PreconditionError("unimodular matrix must be square")
        if self.det() not in (1, -1):
            raise PreconditionError("matrix determinant is not +-1")

    def inverse(self) -> "UnimodularMatrix":
        """Exact inverse; integral because the determinant is a unit."""
        n = self.nrows
        aug = [
            [Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
            for i, row in enumerate(self.rows)
        ]
        for col in range(n):
            piv = next(i for i in range(col, n) if aug[i][col] != 0)
            aug[col], aug[piv] = aug[piv], aug[col]
            scale = aug[col][col]
            aug[col] = [x / scale for x in aug[col]]
            for i in range(n):
                if i != col and aug[i][col] != 0:
                    factor = aug[i][col]
                    aug[i] = [x - factor * y for x, y in zip(aug[i], aug[col])]
        rows = tuple(tuple(int(x) for x in row[n:]) for row in aug)
        return UnimodularMatrix(rows)

    def act(self, point: "TorusPoint") -> "TorusPoint":
        """Induced automorphism of the torus."""
        return TorusPoint(self.mul_rational(point.coords))


# ---------------------------------------------------------------------------
# torus points


@dataclass(frozen=True)
class TorusPoint:
    """Point of T^n = R^n / Z^n, coordinates normalized into [0, 1)."""

    coords: RationalVector

    def __post_init__(self) -> None:
        coords = tuple(Fraction(x) % 1 for x in self.coords)
        if not coords:
            raise DimensionError("torus point needs at least one coordinate")
        object.__setattr__(self, "coords", coords)

    @classmethod
    def zero(cls, n: int) -> "TorusPoint":
        return cls((Fraction(0),) * n)

    @property
    def dim(self) -> int:
        return len(self.coords)

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def _check_dim(self, other: "TorusPoint") -> None:
        if self.dim != other.dim:
            raise DimensionError(f"torus dimensions differ: {self.dim} vs {other.dim}")

    def __add__(self, other: "TorusPoint") -> "TorusPoint":
        self._check_dim(other)
        return TorusPoint(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "TorusPoint") -> "TorusPoint":
        self._check_dim(other)
        return TorusPoint(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "TorusPoint":
        return TorusPoint(tuple(-a for a in self.coords))

    def scaled(self, s: Fraction | int) -> "TorusPoint":
        return TorusPoint(tuple(Fraction(s) * a for a in self.coords))


# ---------------------------------------------------------------------------
# Hermite form and sublattices


def hermite_rows(rows: Iterable[Sequence[int]], ambient: int) -> tuple[IntVector, ...]:
    """Row-style lower-triangular Hermite basis of the integer row span.

    Zero rows are dropped; the result is the unique basis in the convention
    documented at module top.
    """
    work = [list(_as_int(x) for x in row) for row in rows]
    for row in work:
        if len(row) != ambient:
            raise DimensionError(f"row length {len(row)} does not match ambient {ambient}")
    collected: list[list[int]] = []
    pivot_cols: list[int] = []
    for col in reversed(range(ambient)):
        live = [i for i, row in enumerate(work) if row[col] != 0]
        if not live:
            continue
        # Euclid on the column until one nonzero entry remains
        while len(live) > 1:
            live.sort(key=lambda i: abs(work[i][col]))
            base = work[live[0]]
            for i in live[1:]:
                q = work[i][col] // base[col]
                work[i] = [a - q * b for a, b in zip(work[i], base)]
            live = [i for i in live if work[i][col] != 0]
        pivot_row = work.pop(live[0])
        if pivot_row[col] < 0:
            pivot_row = [-a for a in pivot_row]
        collected.append(pivot_row)
        pivot_cols.append(col)
    collected.reverse()
    pivot_cols.reverse()
    # reduce entries below each pivot into [0, pivot), rightmost pivot first
    for k in reversed(range(len(collected))):
        col = pivot_cols[k]
        pivot = collected[k][col]
        for j in range(k + 1, len(collected)):
            q = collected[j][col] // pivot
            if q:
                collected[j] = [a - q * b for a, b in zip(collected[j], collected[k])]
    return tuple(tuple(row) for row in collected)


@dataclass(frozen=True)
class Sublattice:
    """Sublattice of Z^ambient, stored by its Hermite row basis."""

    ambient: int
    basis: tuple[IntVector, ...]

    def __post_init__(self) -> None:
        if self.ambient < 1:
            raise DimensionError("ambient dimension must be >= 1")
        object.__setattr__(self, "basis", hermite_rows(self.basis, self.ambient))

    @classmethod
    def spanned_by(cls, ambient: int, rows: Iterable[Sequence[int]]) -> "Sublattice":
        return cls(ambient, tuple(tuple(row) for row in rows))

    @property
    def rank(self) -> int:
        return len(self.basis)

    def member(self, v: Sequence[int]) -> bool:
        """Whether v is an integer combination of the basis rows."""
        if len(v) != self.ambient:
            raise DimensionError(f"vector length {len(v)} does not match ambient {self.ambient}")
        residue = [_as_int(x) for x in v]
        for row in reversed(self.basis):
            col = _last_nonzero(row)
            if residue[col] % row[col]:
                return False
            q = residue[col] // row[col]
            if q:
                residue = [a - q * b for a, b in zip(residue, row)]
        return not any(residue)

    def is_saturated(self) -> bool:
        """Whether the basis extends to a basis of the ambient lattice."""
        return extends_to_basis(self.basis) if self.basis else True


def _last_nonzero(row: Sequence[int]) -> int:
    for j in reversed(range(len(row))):
        if row[j] != 0:
            return j
    raise PreconditionError("zero row has no pivot")


# ---------------------------------------------------------------------------
# Smith form


def smith_normal_form(m: IntMatrix) -> tuple[IntMatrix, UnimodularMatrix, UnimodularMatrix]:
    """Return (D, U, V) with D = U @ m @ V diagonal.

    Diagonal entries are nonnegative and each divides the next.
    """
    nr, nc = m.nrows, m.ncols
    a = [list(row) for row in m.rows]
    u = [[int(i == j) for j in range(nr)] for i in range(nr)]
    v = [[int(i == j) for j in range(nc)] for i in range(nc)]

    def row_op(i: int, k: int, q: int) -> None:  # row i -= q * row k
        a[i] = [x - q * y for x, y in zip(a[i], a[k])]
        u[i] = [x - q * y for x, y in zip(u[i], u[k])]

    def col_op(j: int, k: int, q: int) -> None:  # col j -= q * col k
        for row in a:
            row[j] -= q * row[k]
        for row in v:
            row[j] -= q * row[k]

    def swap_rows(i: int, k: int) -> None:
        a[i], a[k] = a[k], a[i]
        u[i], u[k] = u[k], u[i]

    def swap_cols(j: int, k: int) -> None:
        for row in a:
            row[j], row[k] = row[k], row[j]
        for row in v:
            row[j], row[k] = row[k], row[j]

    def negate_row(i: int) -> None:
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    def min_entry(s: int) -> tuple[int, int] | None:
        best: tuple[int, int] | None = None
        for i in range(s, nr):
            for j in range(s, nc):
                if a[i][j] != 0 and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        return best

    for s in range(min(nr, nc)):
        while True:
            pos = min_entry(s)
            if pos is None:
                break
            swap_rows(s, pos[0])
            swap_cols(s, pos[1])
            reduced = False
            for i in range(s + 1, nr):
                if a[i][s] != 0:
                    row_op(i, s, a[i][s] // a[s][s])
                    reduced = True
            for j in range(s + 1, nc):
                if a[s][j] != 0:
                    col_op(j, s, a[s][j] // a[s][s])
                    reduced = True
            if reduced:
                # remainders may survive; take another pass with a smaller pivot
                if all(a[i][s] == 0 for i in range(s + 1, nr)) and all(
                    a[s][j] == 0 for j in range(s + 1, nc)
                ):
                    pass
                else:
                    continue
            if a[s][s] < 0:
                negate_row(s)
            offender = next(
                (
                    (i, j)
                    for i in range(s + 1, nr)
                    for j in range(s + 1, nc)
                    if a[i][j] % a[s][s]
                ),
                None,
            )
            if offender is None:
                break
            # fold the offending row in so the pivot can shrink to the gcd
            row_op(s, offender[0], -1)
        if all(a[i][j] == 0 for i in range(s, nr) for j in range(s, nc)):
            break

    return (
        IntMatrix(tuple(tuple(row) for row in a)),
        UnimodularMatrix(tuple(tuple(row) for row in u)),
        UnimodularMatrix(tuple(tuple(row) for row in v)),
    )


def invariant_factors(m: IntMatrix) -> tuple[int, ...]:
    d, _, _ = smith_normal_form(m)
    return tuple(d.rows[i][i] for i in range(min(m.nrows, m.ncols)))


# ---------------------------------------------------------------------------
# bases of the ambient lattice


def is_primitive(v: Sequence[int]) -> bool:
    """Whether the integer vector has coordinate gcd 1."""
    return math.gcd(*(abs(_as_int(x)) for x in v)) == 1 if len(v) else False


def extends_to_basis(rows: Sequence[Sequence[int]]) -> bool:
    """Whether the given independent candidate rows extend to a Z-basis.

    True exactly when all Smith invariant factors of the k x n stack equal 1
    (equivalently the k x k minors have gcd 1).  The empty family extends
    trivially.
    """
    k = len(rows)
    if k == 0:
        return True
    n = len(rows[0])
    if any(len(row) != n for row in rows):
        raise DimensionError("ragged rows")
    if k > n:
        return False
    factors = invariant_factors(IntMatrix.from_rows(rows))
    return all(f == 1 for f in factors)


def complete_to_basis(rows: Sequence[Sequence[int]]) -> UnimodularMatrix:
    """Extend rows to a unimodular matrix whose first k rows are the input.

    Precondition: extends_to_basis(rows).  Uses the Smith transforms: with
    U R V = [I | 0], the block matrix diag(U^-1, I) @ V^-1 restricts to R on
    its top rows and has unit determinant.
    """
    k = len(rows)
    if k == 0:
        raise PreconditionError("cannot infer the ambient dimension from no rows")
    n = len(rows[0])
    if not extends_to_basis(rows):
        raise PreconditionError("rows do not extend to a basis of the standard lattice")
    if k == n:
        return UnimodularMatrix(tuple(tuple(row) for row in rows))
    r = IntMatrix.from_rows(rows)
    _, u, v = smith_normal_form(r)
    u_inv = u.inverse()
    v_inv = v.inverse()
    block = [[0] * n for _ in range(n)]
    for i in range(k):
        for j in range(k):
            block[i][j] = u_inv.rows[i][j]
    for i in range(k, n):
        block[i][i] = 1
    result = IntMatrix.from_rows(block) @ v_inv
    return UnimodularMatrix(result.rows)


def lattice_member(v: Sequence[int], lattice: Sublattice) -> bool:
    return lattice.member(v)


def subtorus_contains(point: TorusPoint, lattice: Sublattice) -> bool:
    """Whether the torus point lies on the subtorus generated by the lattice.

    The subtorus of a saturated rank-k sublattice L is the image of
    span_R(L) in T^n; with U = [A | B] a unimodular completion of the basis
    A, membership of t is integrality of the last n - k coordinates of
    U^-1 t.  Rational points may sit on the subtorus without being integer
    combinations of basis directions, so this is genuinely weaker than
    lattice membership of a lift.
    """
    if point.dim != lattice.ambient:
        raise DimensionError(
            f"point dimension {point.dim} does not match ambient {lattice.ambient}"
        )
    if not lattice.is_saturated():
        raise PreconditionError("subtorus membership needs a saturated sublattice")
    k = lattice.rank
    n = lattice.ambient
    if k == n:
        return True
    if k == 0:
        return point.is_zero
    completion = complete_to_basis(lattice.basis)
    u_inv = UnimodularMatrix(completion.transpose().rows).inverse()
    s = u_inv.mul_rational(point.coords)
    return all(x.denominator == 1 for x in s[k:])
