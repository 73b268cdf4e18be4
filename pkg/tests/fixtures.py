"""Shared fixture builders for the test suite (quantum tables, random mixtures, pushes)."""

from __future__ import annotations

import random
from decimal import Decimal, localcontext
from fractions import Fraction
from itertools import combinations

import sympy

from belltest.model import ExperimentClass, ProbabilityTable, SettingsSelection
from belltest.strategies import mixture_table, strategy_count


def sqrt2(max_den: int = 10**13) -> Fraction:
    with localcontext() as ctx:
        ctx.prec = 50
        root = Decimal(2).sqrt()
    return Fraction(root).limit_denominator(max_den)


INV_SQRT2 = 1 / sqrt2()

CHSH_SEL = SettingsSelection(ExperimentClass(1, 1, 2), [(0, 0), (0, 1), (1, 0), (1, 1)])
# correlation E(alpha, beta) at the CHSH-optimal angles; the (1,1) pair is anticorrelated
SINGLET_E = {(0, 0): INV_SQRT2, (0, 1): INV_SQRT2, (1, 0): INV_SQRT2, (1, 1): -INV_SQRT2}


def singlet_block(E: Fraction):
    # outcomes equal with probability (1+E)/2, split evenly
    return [[(1 + E) / 4, (1 - E) / 4], [(1 - E) / 4, (1 + E) / 4]]


def singlet_table() -> ProbabilityTable:
    return ProbabilityTable(CHSH_SEL, [singlet_block(SINGLET_E[p]) for p in CHSH_SEL.pairs])


DET_SEL = SettingsSelection(ExperimentClass(2, 2, 2), [(0, 0), (0, 1), (1, 0), (1, 1)])


def detection_table(eta) -> ProbabilityTable:
    """Two detectors per side, each particle seen with probability ``eta``.

    Outcome 0 is "no detector fired"; outcomes 1 and 2 are the single-detector
    patterns [1,0] and [0,1]; outcome 3 (both fire) never happens.
    """
    eta = Fraction(eta)
    blocks = []
    for pair in DET_SEL.pairs:
        q = singlet_block(SINGLET_E[pair])
        b = [[Fraction(0)] * 4 for _ in range(4)]
        b[0][0] = (1 - eta) ** 2
        for i in range(2):
            b[1 + i][0] = eta * (1 - eta) / 2
            b[0][1 + i] = eta * (1 - eta) / 2
            for j in range(2):
                b[1 + i][1 + j] = eta * eta * q[i][j]
        blocks.append(b)
    return ProbabilityTable(DET_SEL, blocks)


def random_weights(rng: random.Random, exp_class: ExperimentClass, terms: int = 6) -> dict[int, Fraction]:
    total = strategy_count(exp_class)
    raw: dict[int, int] = {}
    for _ in range(rng.randint(1, terms)):
        i = rng.randrange(total)
        raw[i] = raw.get(i, 0) + rng.randint(1, 97)
    s = sum(raw.values())
    return {i: Fraction(w, s) for i, w in raw.items()}


def random_mixture(rng: random.Random, selection: SettingsSelection, terms: int = 6) -> ProbabilityTable:
    return mixture_table(selection, random_weights(rng, selection.exp_class, terms))


def push_outside(hull, facet, point, eps=Fraction(1, 100)):
    """Move ``point`` inside the affine hull until ``facet`` is exceeded by ``eps``.

    The direction is the facet normal expressed in the hull's free
    coordinates, so every equality of the hull keeps holding.
    """
    red, _ = hull.reduce(facet.coeffs, facet.bound)
    zf = [red[j] for j in hull.free]
    origin = hull.lift([0] * len(zf))
    d = [x - o for x, o in zip(hull.lift(zf), origin)]
    gain = facet.value(d)
    assert gain > 0
    t = (facet.bound - facet.value(point) + eps) / gain
    return [p + t * x for p, x in zip(point, d)]


def _fraction_nullspace(rows, ncols):
    """Plain Gauss-Jordan nullspace, kept separate from the package's linalg."""
    m = [[Fraction(x) for x in r] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    basis = []
    for fc in (c for c in range(ncols) if c not in pivots):
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][fc]
        basis.append(v)
    return basis


def brute_force_facets(vertices):
    """Tight vertex sets of all facets, from every 8-subset of the vertices.

    Values of affine functionals on the vertices form the column space of
    ``[V | 1]``.  For each subset a functional vanishing there is unique up
    to scale when the subset is affinely spanning; it is a facet when it
    has one sign on every vertex.
    """
    M = sympy.Matrix([list(v) + [1] for v in vertices])
    basis = M.columnspace()
    B = [[Fraction(int(sympy.fraction(x)[0]), int(sympy.fraction(x)[1])) for x in b] for b in basis]
    k = len(B)
    dim = k - 1
    found = set()
    for subset in combinations(range(len(vertices)), dim):
        rows = [[B[c][i] for c in range(k)] for i in subset]
        ns = _fraction_nullspace(rows, k)
        if len(ns) != 1:
            continue
        y = ns[0]
        s = [sum(y[c] * B[c][i] for c in range(k)) for i in range(len(vertices))]
        if all(x >= 0 for x in s) or all(x <= 0 for x in s):
            found.add(frozenset(i for i, x in enumerate(s) if x == 0))
    return found
