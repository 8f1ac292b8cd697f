import itertools
import random
from fractions import Fraction

import pytest

from torusdyn.intlinalg import (
    IntMatrix,
    Lattice,
    charpoly,
    evaluate_poly,
    hermite_normal_form,
    index_if_finite,
    lattice_intersection,
    lattice_sum,
    left_kernel_saturated,
    mat_vec,
    minpoly,
    rational_rank,
    right_kernel_matrix,
    saturation,
    smith_normal_form,
    solve_mod,
    solve_rational,
    vec_mat,
)
from torusdyn.polyalg import IntPoly

from conftest import rand_matrix


def test_hnf_examples():
    eye = IntMatrix.identity(3)
    h, u = hermite_normal_form(eye)
    assert h.entries == eye.entries and u.entries == eye.entries
    m = IntMatrix.from_rows([[2, 0], [0, 3]])
    h, u = hermite_normal_form(m)
    assert h.entries == m.entries
    m = IntMatrix.from_rows([[0, 1], [0, 0]])
    h, u = hermite_normal_form(m)
    assert h.to_rows() == [[0, 1], [0, 0]]


def _assert_hnf_canonical(h: IntMatrix):
    pivots = []
    for i in range(h.rows):
        row = h.row(i)
        nz = next((j for j, x in enumerate(row) if x), None)
        if nz is None:
            assert all(not any(h.row(k)) for k in range(i, h.rows))  # zero rows at bottom
            break
        assert row[nz] > 0
        if pivots:
            assert nz > pivots[-1][1]
        for k in range(i):
            assert 0 <= h[k, nz] < row[nz]
        pivots.append((i, nz))


def test_hnf_random_properties():
    rng = random.Random(200)
    for _ in range(150):
        rows, cols = rng.randint(1, 4), rng.randint(1, 4)
        m = IntMatrix.from_rows([[rng.randint(-6, 6) for _ in range(cols)] for _ in range(rows)])
        h, u = hermite_normal_form(m)
        assert (u * m).entries == h.entries
        assert u.det() in (1, -1)
        _assert_hnf_canonical(h)
        h2, _ = hermite_normal_form(h)
        assert h2.entries == h.entries  # idempotent on canonical forms


def test_snf_examples():
    d, u, v = smith_normal_form(IntMatrix.from_rows([[2, 0], [0, 3]]))
    assert d.to_rows() == [[1, 0], [0, 6]]
    z = IntMatrix.zeros(2, 3)
    d, u, v = smith_normal_form(z)
    assert d.is_zero()
    d, _, _ = smith_normal_form(IntMatrix.from_rows([[1, 1], [0, 1]]))
    assert d.to_rows() == [[1, 0], [0, 1]]


def test_snf_random_properties():
    rng = random.Random(201)
    for _ in range(150):
        rows, cols = rng.randint(1, 4), rng.randint(1, 4)
        m = IntMatrix.from_rows([[rng.randint(-8, 8) for _ in range(cols)] for _ in range(rows)])
        d, u, v = smith_normal_form(m)
        assert (u * m * v).entries == d.entries
        assert u.det() in (1, -1) and v.det() in (1, -1)
        diag = [d[i, i] for i in range(min(rows, cols))]
        assert all(x >= 0 for x in diag)
        for a, b in zip(diag, diag[1:]):
            assert b == 0 or (a != 0 and b % a == 0) or (a == 0 and b == 0)
        assert all(d[i, j] == 0 for i in range(rows) for j in range(cols) if i != j)


def test_left_kernel_examples():
    m = IntMatrix.from_rows([[0, 1], [0, 0]])
    assert left_kernel_saturated(m).basis == ((0, 1),)
    assert left_kernel_saturated(IntMatrix.from_rows([[2, 1], [1, 1]])).rank == 0
    assert left_kernel_saturated(IntMatrix.zeros(2, 2)) == Lattice.full(2)


def test_left_kernel_random():
    rng = random.Random(202)
    for _ in range(120):
        rows, cols = rng.randint(1, 4), rng.randint(1, 4)
        m = IntMatrix.from_rows([[rng.randint(-5, 5) for _ in range(cols)] for _ in range(rows)])
        ker = left_kernel_saturated(m)
        for b in ker.basis:
            assert all(x == 0 for x in vec_mat(b, m))
        assert saturation(ker) == ker
        # rank-nullity over Q
        assert ker.rank == rows - rational_rank(m.to_rows())


def test_lattice_ops_examples():
    e1 = Lattice.from_rows(2, [[1, 0]])
    e2 = Lattice.from_rows(2, [[0, 1]])
    assert lattice_sum(e1, e2) == Lattice.full(2)
    assert index_if_finite(lattice_sum(e1, e2)) == 1
    a = Lattice.from_rows(2, [[2, 0]])
    b = Lattice.from_rows(2, [[3, 0]])
    assert lattice_intersection(a, b).basis == ((6, 0),)
    assert index_if_finite(Lattice.from_rows(2, [[2, 0], [0, 3]])) == 6
    assert index_if_finite(e1) is None


def test_lattice_rank_identity():
    rng = random.Random(203)
    for _ in range(120):
        n = rng.randint(1, 4)
        l1 = Lattice.from_rows(n, [[rng.randint(-4, 4) for _ in range(n)] for _ in range(rng.randint(0, n))])
        l2 = Lattice.from_rows(n, [[rng.randint(-4, 4) for _ in range(n)] for _ in range(rng.randint(0, n))])
        s = lattice_sum(l1, l2)
        i = lattice_intersection(l1, l2)
        assert l1.rank + l2.rank == s.rank + i.rank
        for b in i.basis:
            assert l1.contains(b) and l2.contains(b)


def test_lattice_membership_brute():
    lat = Lattice.from_rows(2, [[2, 1], [0, 3]])
    members = {
        tuple(a * r1 + b * r2 for r1, r2 in zip((2, 1), (0, 3)))
        for a in range(-4, 5)
        for b in range(-4, 5)
    }
    for v in itertools.product(range(-6, 7), repeat=2):
        assert lat.contains(v) == (v in members)


def test_saturation():
    assert saturation(Lattice.from_rows(2, [[2, 4]])).basis == ((1, 2),)
    assert saturation(Lattice.from_rows(3, [[2, 0, 0], [0, 6, 0]])).basis == ((1, 0, 0), (0, 1, 0))
    assert saturation(Lattice.zero(3)) == Lattice.zero(3)


def test_charpoly_examples():
    assert charpoly(IntMatrix.identity(2)) == IntPoly.from_coeffs([1, -2, 1])
    assert minpoly(IntMatrix.identity(2)) == IntPoly.from_coeffs([-1, 1])
    m = IntMatrix.from_rows([[2, 1], [1, 1]])
    # 2x2 oracle: x^2 - trace x + det
    assert charpoly(m) == IntPoly.from_coeffs([m.det(), -m.trace(), 1])
    assert minpoly(m) == charpoly(m)
    assert minpoly(IntMatrix.from_rows([[1, 1], [0, 1]])) == IntPoly.from_coeffs([1, -2, 1])


def test_charpoly_against_determinant_oracle():
    rng = random.Random(204)
    for _ in range(80):
        n = rng.randint(1, 4)
        m = rand_matrix(rng, n, 5)
        p = charpoly(m)
        for k in range(n + 1):
            shifted = IntMatrix.from_rows(
                [[(k if i == j else 0) - m[i, j] for j in range(n)] for i in range(n)]
            )
            assert p(k) == shifted.det()


def test_minpoly_properties():
    rng = random.Random(205)
    for _ in range(80):
        n = rng.randint(1, 4)
        m = rand_matrix(rng, n, 4)
        mp = minpoly(m)
        cp = charpoly(m)
        assert evaluate_poly(mp, m).is_zero()
        assert cp.try_divide(mp) is not None
        # minimality oracle: the powers I, A, ..., A^(deg-1) are linearly independent,
        # so no annihilator of smaller degree exists
        powers = [list((m**j).entries) for j in range(mp.degree)]
        assert rational_rank(powers) == mp.degree


def test_minpoly_projector_case():
    # diag blocks with repeated eigenvalues keep minpoly small
    m = IntMatrix.from_rows([[3, 0, 0], [0, 3, 0], [0, 0, 3]])
    assert minpoly(m) == IntPoly.from_coeffs([-3, 1])
    assert charpoly(m) == IntPoly.from_coeffs([-3, 1]) ** 3


def test_solve_rational():
    assert solve_rational(IntMatrix.from_rows([[1]]), [3]) == (Fraction(3),)
    m = IntMatrix.from_rows([[2, 0], [0, 2]]) - IntMatrix.identity(2)
    assert solve_rational(m, [1, 1]) == (Fraction(1), Fraction(1))
    assert solve_rational(IntMatrix.from_rows([[1, 1], [1, 1]]), [1, 2]) is None
    rng = random.Random(206)
    for _ in range(100):
        rows, cols = rng.randint(1, 4), rng.randint(1, 4)
        m = IntMatrix.from_rows([[rng.randint(-4, 4) for _ in range(cols)] for _ in range(rows)])
        x = [Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(cols)]
        b = mat_vec(m, x)
        sol = solve_rational(m, b)
        assert sol is not None
        assert mat_vec(m, sol) == tuple(b)


def test_solve_mod_example_and_brute():
    sol = solve_mod(IntMatrix.from_rows([[2]]), [1], 5)
    assert sol.particular == (3,) and sol.kernel_gens == ()
    rng = random.Random(207)
    for _ in range(60):
        rows, cols = rng.randint(1, 3), rng.randint(1, 3)
        d = rng.choice([2, 3, 4, 5, 6, 8, 9, 12])
        m = IntMatrix.from_rows([[rng.randint(-5, 5) for _ in range(cols)] for _ in range(rows)])
        b = [rng.randint(-5, 5) for _ in range(rows)]
        sol = solve_mod(m, b, d)
        brute = {
            x
            for x in itertools.product(range(d), repeat=cols)
            if all(v % d == bb % d for v, bb in zip(mat_vec(m, x), b))
        }
        if sol is None:
            assert not brute
        else:
            spanned = set()
            coeff_ranges = itertools.product(range(d), repeat=len(sol.kernel_gens))
            for coeffs in coeff_ranges:
                v = list(sol.particular)
                for c, g in zip(coeffs, sol.kernel_gens):
                    v = [(a + c * gg) % d for a, gg in zip(v, g)]
                spanned.add(tuple(v))
            assert spanned == brute


def test_matrix_basics():
    m = IntMatrix.from_rows([[1, 2], [3, 4]])
    assert (m**0).entries == IntMatrix.identity(2).entries
    assert (m**3).entries == (m * m * m).entries
    assert m.transpose().to_rows() == [[1, 3], [2, 4]]
    assert m.det() == -2
    with pytest.raises(ValueError):
        m * IntMatrix.identity(3)
    big = IntMatrix.from_rows([[10**20, 1], [1, 10**20]])
    assert big.det() == 10**40 - 1
