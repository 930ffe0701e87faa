"""Exact linear algebra kernel: ranks, kernels, quotients, block assembly."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from localp2.errors import ScalarModeError, ShapeError
from localp2.linalg import (
    RATIONAL,
    BlockMap,
    Mat,
    PrimeScalars,
    block_diag,
    coords_in_colspace,
    hstack,
    nullspace,
    quotient_projection,
    rank,
    rref,
    vstack,
)

PRIME = PrimeScalars(2**31 + 11)


def _det(m: Mat) -> Fraction:
    # Laplace expansion; only used on tiny matrices as a rank oracle.
    if m.rows == 0:
        return Fraction(1)
    if m.rows == 1:
        return m.data[0][0]
    total = Fraction(0)
    for j in range(m.cols):
        if m.data[0][j]:
            minor = Mat.from_rows(
                [[row[c] for c in range(m.cols) if c != j] for row in m.data[1:]],
                cols=m.cols - 1)
            total += (-1) ** j * m.data[0][j] * _det(minor)
    return total


def _rank_by_minors(m: Mat) -> int:
    for size in range(min(m.rows, m.cols), 0, -1):
        for rows in combinations(range(m.rows), size):
            for cols in combinations(range(m.cols), size):
                sub = Mat.from_rows([[m.data[i][j] for j in cols] for i in rows], cols=size)
                if _det(sub):
                    return size
    return 0


small_matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(
            st.lists(st.integers(-4, 4), min_size=c, max_size=c),
            min_size=r, max_size=r)))


@settings(max_examples=60, deadline=None)
@given(small_matrices)
def test_rank_matches_minor_oracle(rows):
    m = Mat.from_rows(rows)
    assert rank(m) == _rank_by_minors(m)


@settings(max_examples=60, deadline=None)
@given(small_matrices)
def test_rank_transpose_and_prime_agreement(rows):
    m = Mat.from_rows(rows)
    r = rank(m)
    assert rank(m.transpose()) == r
    # Minors of these matrices are far below the modulus, so the mod-p rank
    # cannot drop and must agree exactly.
    assert rank(m, PRIME) == r


@settings(max_examples=60, deadline=None)
@given(small_matrices)
def test_nullspace_annihilates_and_has_complementary_rank(rows):
    m = Mat.from_rows(rows)
    ns = nullspace(m)
    assert ns.rows == m.cols
    assert ns.cols == m.cols - rank(m)
    if ns.cols:
        assert (m @ ns).is_zero()
        assert rank(ns) == ns.cols


def test_rank_of_empty_shapes():
    assert rank(Mat.zeros(0, 5)) == 0
    assert rank(Mat.zeros(5, 0)) == 0
    assert nullspace(Mat.zeros(0, 3)).cols == 3


def test_rank_with_fraction_entries():
    m = Mat.from_rows([[Fraction(1, 2), Fraction(1, 3)], [Fraction(3, 2), Fraction(1, 1)]])
    assert rank(m) == _rank_by_minors(m)
    assert rank(m, PRIME) == rank(m)


def test_rref_solves_and_coords_in_colspace():
    basis = Mat.from_rows([[1, 0], [1, 1], [0, 2]])
    target = Mat.from_rows([[2], [5], [6]])  # 2*b0 + 3*b1
    coords = coords_in_colspace(basis, target)
    assert coords is not None
    assert (basis @ coords) == target
    outside = Mat.from_rows([[0], [0], [1]])
    assert coords_in_colspace(basis, outside) is None


def test_quotient_projection_kills_image_and_has_full_rank():
    m = Mat.from_rows([[1, 0], [0, 1], [1, 1]])
    proj, free = quotient_projection(m)
    assert proj.rows == 1 and len(free) == 1
    assert (proj @ m).is_zero()
    assert rank(proj) == 1


def test_prime_scalars_rejects_small_modulus():
    with pytest.raises(ScalarModeError):
        PrimeScalars(97)


def test_stacking_and_shape_errors():
    a = Mat.from_rows([[1, 2]])
    b = Mat.from_rows([[3, 4]])
    assert hstack([a, b]).cols == 4
    assert vstack([a, b]).rows == 2
    assert block_diag(a, b).data[1][2] == 3
    with pytest.raises(ShapeError):
        a @ a
    with pytest.raises(ShapeError):
        a + Mat.zeros(2, 2)


def test_blockmap_left_right_composition():
    # One block each side: phi -> L @ phi @ R, checked entrywise on a sample.
    left = Mat.from_rows([[1, 2], [0, 1]])
    right = Mat.from_rows([[1, 1], [2, 0]])
    bm = BlockMap([("out", 2, 2)], [("in", 2, 2)])
    bm.add_left("out", "in", left)
    op_left = bm.matrix()
    phi = Mat.from_rows([[1, 0], [3, 4]])
    flat = [x for row in phi.data for x in row]
    image = op_left @ Mat.from_rows([[v] for v in flat], cols=1)
    expected = left @ phi
    assert [x for row in expected.data for x in row] == [r[0] for r in image.data]

    bm = BlockMap([("out", 2, 2)], [("in", 2, 2)])
    bm.add_right("out", "in", right, sign=-1)
    op_right = bm.matrix()
    image = op_right @ Mat.from_rows([[v] for v in flat], cols=1)
    expected = (phi @ right).scale(-1)
    assert [x for row in expected.data for x in row] == [r[0] for r in image.data]
