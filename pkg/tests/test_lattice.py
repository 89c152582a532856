"""Exact linear algebra: Smith and Hermite forms, bases, subtori."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import extends_oracle, member_oracle, minor_gcd
from torquo.errors import DimensionError, PreconditionError
from torquo.lattice import (
    IntMatrix,
    Sublattice,
    TorusPoint,
    UnimodularMatrix,
    complete_to_basis,
    extends_to_basis,
    hermite_rows,
    invariant_factors,
    is_primitive,
    lattice_member,
    smith_normal_form,
    subtorus_contains,
)

matrices = st.integers(1, 4).flatmap(
    lambda rows: st.integers(1, 4).flatmap(
        lambda cols: st.lists(
            st.lists(st.integers(-6, 6), min_size=cols, max_size=cols),
            min_size=rows,
            max_size=rows,
        )
    )
)


# ---------------------------------------------------------------------------
# matrices


def test_matrix_validation():
    with pytest.raises(DimensionError):
        IntMatrix(((1, 2), (3,)))
    with pytest.raises(DimensionError):
        IntMatrix(())
    with pytest.raises(DimensionError):
        IntMatrix(((1, Fraction(1, 2)),))


def test_matrix_product_and_det():
    a = IntMatrix.from_rows([[1, 2], [3, 4]])
    b = IntMatrix.from_rows([[0, 1], [1, 0]])
    assert (a @ b).rows == ((2, 1), (4, 3))
    assert a.det() == -2
    assert IntMatrix.identity(3).det() == 1
    assert IntMatrix.from_rows([[2, 0], [0, 3]]).det() == 6
    assert IntMatrix.from_rows([[1, 2], [2, 4]]).det() == 0


def test_unimodular_rejects_non_units():
    with pytest.raises(PreconditionError):
        UnimodularMatrix(((2, 0), (0, 1)))
    with pytest.raises(PreconditionError):
        UnimodularMatrix(((1, 0, 0), (0, 1, 0)))


def test_unimodular_inverse_round_trip():
    rng = random.Random(11)
    for _ in range(60):
        n = rng.randint(1, 4)
        rows = [[int(i == j) for j in range(n)] for i in range(n)]
        for _ in range(8):
            i, k = rng.randrange(n), rng.randrange(n)
            if i != k:
                q = rng.randint(-3, 3)
                rows[i] = [a + q * b for a, b in zip(rows[i], rows[k])]
        u = UnimodularMatrix(tuple(tuple(r) for r in rows))
        assert (u @ u.inverse()).rows == IntMatrix.identity(n).rows
        assert (u.inverse() @ u).rows == IntMatrix.identity(n).rows


# ---------------------------------------------------------------------------
# Smith form


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_snf_transforms_and_divisibility(rows):
    m = IntMatrix.from_rows(rows)
    d, u, v = smith_normal_form(m)
    assert (u @ m @ v).rows == d.rows
    factors = [d.rows[i][i] for i in range(min(m.nrows, m.ncols))]
    assert all(f >= 0 for f in factors)
    for a, b in zip(factors, factors[1:]):
        assert b % a == 0 if a else b == 0
    for i in range(d.nrows):
        for j in range(d.ncols):
            if i != j:
                assert d.rows[i][j] == 0


@settings(max_examples=100, deadline=None)
@given(matrices)
def test_snf_matches_minor_gcds(rows):
    m = IntMatrix.from_rows(rows)
    factors = invariant_factors(m)
    product = 1
    for k, factor in enumerate(factors, start=1):
        product *= factor
        assert product == minor_gcd(rows, k)


def test_snf_worked_examples():
    assert invariant_factors(IntMatrix.from_rows([[2, 0], [0, 3]])) == (1, 6)
    assert invariant_factors(IntMatrix.from_rows([[1, 0], [0, 1]])) == (1, 1)
    assert invariant_factors(IntMatrix.from_rows([[2, 4], [4, 8]])) == (2, 0)
    assert invariant_factors(IntMatrix.from_rows([[6]])) == (6,)


# ---------------------------------------------------------------------------
# Hermite form


def test_hermite_convention():
    # pivot = last nonzero of each row, pivot columns increasing, pivots
    # positive, entries below a pivot reduced into [0, pivot)
    assert hermite_rows([[1, 1], [0, 2]], 2) == ((2, 0), (1, 1))
    assert hermite_rows([[0, 2], [1, 1]], 2) == ((2, 0), (1, 1))
    assert hermite_rows([[-1, -1]], 2) == ((1, 1),)
    assert hermite_rows([], 2) == ()
    assert hermite_rows([[0, 0]], 2) == ()
    assert hermite_rows([[1, 0], [0, 1]], 2) == ((1, 0), (0, 1))


@settings(max_examples=100, deadline=None)
@given(matrices)
def test_hermite_idempotent_and_stable_under_row_shuffles(rows):
    n = len(rows[0])
    first = hermite_rows(rows, n)
    assert hermite_rows(first, n) == first
    assert hermite_rows(list(reversed(rows)), n) == first
    doubled = rows + [[2 * x for x in rows[0]]]
    assert hermite_rows(doubled, n) == first


def test_hermite_preserves_membership():
    rng = random.Random(5)
    for _ in range(80):
        n = rng.randint(1, 4)
        k = rng.randint(1, 3)
        rows = [[rng.randint(-4, 4) for _ in range(n)] for _ in range(k)]
        lattice = Sublattice.spanned_by(n, rows)
        coeffs = [rng.randint(-3, 3) for _ in range(k)]
        combo = [sum(c * row[j] for c, row in zip(coeffs, rows)) for j in range(n)]
        assert lattice.member(combo)


# ---------------------------------------------------------------------------
# basis extension and completion


def test_extends_examples():
    assert extends_to_basis([[1, 0]])
    assert extends_to_basis([[2, 1]])
    assert not extends_to_basis([[2, 0]])
    assert extends_to_basis([])
    assert extends_to_basis([[1, 0], [0, 1]])
    assert not extends_to_basis([[1, 0], [1, 0]])
    assert not extends_to_basis([[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]])


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_extends_matches_minor_oracle(rows):
    if len(rows) <= len(rows[0]):
        assert extends_to_basis(rows) == extends_oracle(rows)


def test_extends_invariant_under_row_operations():
    rng = random.Random(23)
    for _ in range(60):
        n = rng.randint(2, 4)
        k = rng.randint(1, n)
        rows = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(k)]
        before = extends_to_basis(rows)
        i = rng.randrange(k)
        j = rng.randrange(k)
        if i != j:
            q = rng.randint(-3, 3)
            rows[i] = [a + q * b for a, b in zip(rows[i], rows[j])]
        flip = rng.randrange(k)
        rows[flip] = [-x for x in rows[flip]]
        assert extends_to_basis(rows) == before


def test_complete_to_basis_contract():
    rng = random.Random(9)
    done = 0
    while done < 60:
        n = rng.randint(1, 4)
        k = rng.randint(1, n)
        rows = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(k)]
        if not extends_to_basis(rows):
            continue
        w = complete_to_basis(rows)
        assert [list(r) for r in w.rows[:k]] == rows
        assert w.det() in (1, -1)
        done += 1
    with pytest.raises(PreconditionError):
        complete_to_basis([[2, 0]])
    with pytest.raises(PreconditionError):
        complete_to_basis([])


# ---------------------------------------------------------------------------
# membership


def test_lattice_member_examples():
    lattice = Sublattice.spanned_by(2, [[1, 1], [0, 2]])
    assert lattice.basis == ((2, 0), (1, 1))
    assert lattice_member((1, 1), lattice)
    assert lattice_member((3, 1), lattice)
    assert lattice_member((2, 0), lattice)
    assert not lattice_member((1, 0), lattice)
    assert not lattice_member((0, 1), lattice)
    empty = Sublattice.spanned_by(2, [])
    assert lattice_member((0, 0), empty)
    assert not lattice_member((1, 0), empty)
    with pytest.raises(DimensionError):
        lattice_member((1, 0, 0), lattice)


def test_lattice_member_against_oracle():
    rng = random.Random(31)
    for _ in range(300):
        n = rng.randint(1, 4)
        k = rng.randint(0, 3)
        basis = [[rng.randint(-4, 4) for _ in range(n)] for _ in range(k)]
        lattice = Sublattice.spanned_by(n, basis)
        vector = tuple(rng.randint(-8, 8) for _ in range(n))
        assert lattice.member(vector) == member_oracle(vector, basis)


# ---------------------------------------------------------------------------
# subtorus membership


def test_subtorus_examples():
    diagonal = Sublattice.spanned_by(2, [[1, 1]])
    assert subtorus_contains(TorusPoint((Fraction(1, 2), Fraction(1, 2))), diagonal)
    assert not subtorus_contains(TorusPoint((Fraction(1, 2), Fraction(0))), diagonal)
    assert subtorus_contains(TorusPoint((Fraction(1, 3), Fraction(1, 3))), diagonal)
    full = Sublattice.spanned_by(2, [[1, 0], [0, 1]])
    assert subtorus_contains(TorusPoint((Fraction(1, 7), Fraction(5, 9))), full)
    trivial = Sublattice.spanned_by(2, [])
    assert subtorus_contains(TorusPoint.zero(2), trivial)
    assert not subtorus_contains(TorusPoint((Fraction(1, 2), Fraction(0))), trivial)


def test_subtorus_requires_saturated():
    with pytest.raises(PreconditionError):
        subtorus_contains(TorusPoint.zero(2), Sublattice.spanned_by(2, [[2, 0]]))


def test_subtorus_contains_rational_span():
    # rational multiples of basis directions lie on the subtorus even when
    # they are not integer combinations
    rng = random.Random(17)
    checked = 0
    while checked < 100:
        n = rng.randint(1, 4)
        k = rng.randint(0, n)
        rows = [[rng.randint(-4, 4) for _ in range(n)] for _ in range(k)]
        if not extends_to_basis(rows):
            continue
        lattice = Sublattice.spanned_by(n, rows)
        coords = [Fraction(0)] * n
        for row in lattice.basis:
            c = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
            coords = [a + c * b for a, b in zip(coords, row)]
        assert subtorus_contains(TorusPoint(tuple(coords)), lattice)
        checked += 1


def test_subtorus_membership_well_defined_mod_one():
    lattice = Sublattice.spanned_by(2, [[1, 2]])
    p = TorusPoint((Fraction(1, 2), Fraction(1)))
    q = TorusPoint((Fraction(3, 2), Fraction(4)))
    assert subtorus_contains(p, lattice) == subtorus_contains(q, lattice)


# ---------------------------------------------------------------------------
# torus points and primitivity


def test_torus_point_arithmetic():
    p = TorusPoint((Fraction(3, 4), Fraction(1, 2)))
    q = TorusPoint((Fraction(1, 2), Fraction(3, 4)))
    assert (p + q).coords == (Fraction(1, 4), Fraction(1, 4))
    assert (p - q).coords == (Fraction(1, 4), Fraction(3, 4))
    assert (-p).coords == (Fraction(1, 4), Fraction(1, 2))
    assert p.scaled(Fraction(1, 2)).coords == (Fraction(3, 8), Fraction(1, 4))
    assert TorusPoint((Fraction(7, 2), Fraction(-1, 3))).coords == (
        Fraction(1, 2),
        Fraction(2, 3),
    )
    with pytest.raises(DimensionError):
        p + TorusPoint((Fraction(0),))


def test_is_primitive():
    assert is_primitive((1, 0))
    assert is_primitive((2, 3))
    assert is_primitive((-1,))
    assert not is_primitive((2, 4))
    assert not is_primitive((0, 0))
    assert not is_primitive((2,))
