import random
from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from scipy.optimize import linprog

from belltest.dd import extreme_rays
from belltest.errors import CapacityError
from belltest.linalg import int_rank, nullspace, rref, solve
from belltest.simplex import solve_lp


def _random_lp(rng, m, n):
    A = [[rng.randint(-4, 6) for _ in range(n)] for _ in range(m)]
    b = [rng.randint(-5, 10) for _ in range(m)]
    c = [rng.randint(-3, 5) for _ in range(n)]
    return A, b, c


@pytest.mark.parametrize("seed", range(40))
def test_simplex_against_scipy(seed):
    rng = random.Random(seed)
    A, b, c = _random_lp(rng, rng.randint(1, 4), rng.randint(2, 6))
    ours = solve_lp(A, b, c)
    ref = linprog(c, A_eq=A, b_eq=b, bounds=[(0, None)] * len(c), method="highs")
    expected = {0: "optimal", 2: "infeasible", 3: "unbounded"}[ref.status]
    assert ours.status == expected
    if ours.status == "optimal":
        assert abs(float(ours.value) - ref.fun) < 1e-7
        assert all(sum(a * x for a, x in zip(row, ours.x)) == bi for row, bi in zip(A, b))
        # dual feasibility and zero duality gap, exactly
        reduced = [cj - sum(ours.y[i] * A[i][j] for i in range(len(A))) for j, cj in enumerate(c)]
        assert all(r >= 0 for r in reduced)
        assert sum(yi * bi for yi, bi in zip(ours.y, b)) == ours.value
    elif ours.status == "infeasible":
        f = ours.farkas
        assert all(sum(f[i] * A[i][j] for i in range(len(A))) >= 0 for j in range(len(A[0])))
        assert sum(fi * bi for fi, bi in zip(f, b)) < 0
    else:
        r = ours.ray
        assert all(x >= 0 for x in r)
        assert all(sum(a * x for a, x in zip(row, r)) == 0 for row in A)
        assert sum(ci * x for ci, x in zip(c, r)) < 0


def test_simplex_rational_data_and_maximize():
    A = [[Fraction(1, 3), Fraction(2, 7), 1]]
    b = [Fraction(5, 11)]
    res = solve_lp(A, b, [1, 1, 0], maximize=True)
    assert res.status == "optimal"
    assert res.value == Fraction(5, 11) * 7 / 2
    assert sum(a * x for a, x in zip(A[0], res.x)) == b[0]


def test_simplex_degenerate_cycling_example():
    # a classic cycling instance for Dantzig pricing without anti-cycling
    A = [
        [Fraction(1, 2), Fraction(-11, 2), Fraction(-5, 2), 9, 1, 0, 0],
        [Fraction(1, 2), Fraction(-3, 2), Fraction(-1, 2), 1, 0, 1, 0],
        [1, 0, 0, 0, 0, 0, 1],
    ]
    b = [0, 0, 1]
    c = [-10, 57, 9, 24, 0, 0, 0]
    res = solve_lp(A, b, c)
    assert res.status == "optimal"
    assert res.value == -1


def test_rref_and_nullspace():
    rows = [[1, 2, 3], [2, 4, 6], [1, 0, 1]]
    red, piv = rref(rows, 3)
    assert len(piv) == 2
    for v in nullspace(rows, 3):
        assert all(sum(Fraction(a) * x for a, x in zip(r, v)) == 0 for r in rows)
    assert int_rank(rows) == np.linalg.matrix_rank(np.array(rows))


def test_solve():
    assert solve([[2, 1], [1, 3]], [3, 5]) == [Fraction(4, 5), Fraction(7, 5)]
    assert solve([[1, 1], [1, 1]], [1, 2]) is None


def test_extreme_rays_cube():
    # cube [0,1]^3 as the cone {(t, x): 0 <= x_i <= t}
    rows = []
    for i in range(3):
        e = [0, 0, 0, 0]
        e[1 + i] = 1
        rows.append(e)
        f = [1, 0, 0, 0]
        f[1 + i] = -1
        rows.append(f)
    cone = extreme_rays(rows)
    got = sorted(tuple(r) for r in cone.rays)
    assert got == sorted((1,) + p for p in product((0, 1), repeat=3))


def test_extreme_rays_cap():
    rows = []
    for i in range(6):
        e = [0] * 7
        e[1 + i] = 1
        rows.append(e)
        f = [1] + [0] * 6
        f[1 + i] = -1
        rows.append(f)
    with pytest.raises(CapacityError):
        extreme_rays(rows, memory_bound=2000)
