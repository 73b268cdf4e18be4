"""Exact polytope engine for local polytopes.

Facet enumeration runs the double description method on the cone
``{(b, c) : b + c . x >= 0 for every vertex x}`` in a coordinate system
where the polytope is full-dimensional: the affine hull is written as a
reduced row echelon system whose pivot coordinates are dropped.  Facets are
lifted back to the ambient coordinates ``p(a, b | pair k)`` for output.

Each facet has many ambient representatives (add any combination of the
equalities).  The one reported is, in order of preference:

* a single-coordinate bound ``-p_j <= 0`` or ``p_j <= 1`` if the facet is one;
* otherwise the representative supported on the free coordinates only.

Both are then scaled to coprime integers.  No arithmetic here is inexact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Sequence

from .dd import DEFAULT_MEMORY_BOUND, extreme_rays
from .errors import DegenerateInequalityError, DimensionError
from .linalg import dot, int_rank, integerize, nullspace, rref
from .simplex import solve_lp

__all__ = [
    "LinearInequality",
    "HRepresentation",
    "AffineHull",
    "canonicalize",
    "evaluate",
    "affine_hull",
    "hull_of",
    "facet_enumeration",
    "vertex_enumeration",
    "verify_h_representation",
    "VerificationReport",
    "ClauseResult",
    "normalized_violation",
]


@dataclass(frozen=True, order=True)
class LinearInequality:
    """``coeffs . p <= bound`` with coprime integers (also used for equalities)."""

    coeffs: tuple[int, ...]
    bound: int

    def __post_init__(self):
        if not any(self.coeffs):
            raise DegenerateInequalityError("the zero functional is not an inequality")

    @property
    def dimension(self) -> int:
        return len(self.coeffs)

    def value(self, point: Sequence) -> Fraction:
        if len(point) != len(self.coeffs):
            raise DimensionError(f"point of length {len(point)} for dimension {len(self.coeffs)}")
        return Fraction(dot(self.coeffs, point))

    def support(self) -> list[int]:
        return [j for j, c in enumerate(self.coeffs) if c]


def canonicalize(coeffs: Sequence, bound) -> LinearInequality:
    """Scale ``coeffs . p <= bound`` by the positive rational making it coprime-integer."""
    values = [Fraction(c) for c in coeffs]
    if not any(values):
        raise DegenerateInequalityError("the zero functional is not an inequality")
    ints = integerize(values + [Fraction(bound)])
    return LinearInequality(tuple(ints[:-1]), ints[-1])


def evaluate(ineq: LinearInequality, point: Sequence) -> Fraction:
    """Slack ``bound - coeffs . point``; nonnegative iff the point satisfies it."""
    return ineq.bound - ineq.value(point)


def normalized_violation(ineq: LinearInequality, point: Sequence, reference: Sequence) -> Fraction:
    """Violation rescaled so the local bound sits 2 above ``reference``.

    With ``reference`` the uniform table this puts any CHSH facet on the usual
    correlator scale (local bound 2, noise 0), so a violation reads as S - 2.
    """
    gap = evaluate(ineq, reference)
    if gap <= 0:
        raise ValueError("reference point is not strictly inside the inequality")
    return 2 * (-evaluate(ineq, point)) / gap


@dataclass(frozen=True)
class HRepresentation:
    equalities: tuple[LinearInequality, ...]
    facets: tuple[LinearInequality, ...]
    dimension: int

    @property
    def ambient_dimension(self) -> int:
        rows = self.equalities or self.facets
        return len(rows[0].coeffs) if rows else 0

    def __len__(self):
        return len(self.facets)


@dataclass(frozen=True)
class AffineHull:
    """Affine hull of a point set as ``equalities`` in reduced echelon form.

    ``pivots[i]`` is the coordinate solved for by ``equalities[i]``; the
    remaining ``free`` coordinates parametrize the hull.
    """

    ambient: int
    equalities: tuple[LinearInequality, ...]
    pivots: tuple[int, ...]
    free: tuple[int, ...]
    # reduced rows as Fractions: coeffs (pivot coefficient 1) then rhs
    _reduced: tuple[tuple[Fraction, ...], ...] = field(repr=False, compare=False, default=())

    @property
    def dimension(self) -> int:
        return len(self.free)

    def residuals(self, point: Sequence) -> list[Fraction]:
        return [Fraction(e.bound) - e.value(point) for e in self.equalities]

    def contains(self, point: Sequence) -> bool:
        return not any(self.residuals(point))

    def project(self, point: Sequence) -> list:
        return [point[j] for j in self.free]

    def lift(self, free_values: Sequence) -> list[Fraction]:
        x = [Fraction(0)] * self.ambient
        for j, v in zip(self.free, free_values):
            x[j] = Fraction(v)
        for row, pc in zip(self._reduced, self.pivots):
            x[pc] = row[-1] - sum(row[j] * x[j] for j in self.free if row[j])
        return x

    def reduce(self, coeffs: Sequence, bound) -> tuple[list[Fraction], Fraction]:
        """Equivalent functional on the hull with zero pivot coefficients."""
        c = [Fraction(x) for x in coeffs]
        b = Fraction(bound)
        for row, pc in zip(self._reduced, self.pivots):
            f = c[pc]
            if f:
                for j, x in enumerate(row[:-1]):
                    if x:
                        c[j] -= f * x
                b -= f * row[-1]
        return c, b


def _hull_from_equations(rows: Sequence[Sequence], ambient: int) -> AffineHull:
    """Hull ``{x : rows @ (x, -1) = 0}`` given homogeneous equation rows ``(c, -b)``."""
    # prefer late coordinates as pivots so the free ones are low outcomes
    red, pivots = rref(rows, ambient + 1, column_order=range(ambient - 1, -1, -1))
    order = sorted(range(len(red)), key=lambda i: pivots[i])
    reduced = []
    eqs = []
    for i in order:
        row = red[i]
        coeffs, rhs = row[:ambient], -row[ambient]
        reduced.append(tuple(coeffs) + (rhs,))
        eqs.append(canonicalize(coeffs, rhs))
    pivots_sorted = tuple(pivots[i] for i in order)
    pset = set(pivots_sorted)
    free = tuple(j for j in range(ambient) if j not in pset)
    return AffineHull(ambient, tuple(eqs), pivots_sorted, free, tuple(reduced))


def hull_of(vertices: Sequence[Sequence]) -> AffineHull:
    if not vertices:
        raise ValueError("at least one vertex is required")
    n = len(vertices[0])
    if any(len(v) != n for v in vertices):
        raise DimensionError("vertices have different lengths")
    homog = [list(v) + [1] for v in vertices]
    ns = nullspace(homog, n + 1)
    # nullspace vectors are (c, -b) with c . v = b
    return _hull_from_equations(ns, n)


def affine_hull(vertices: Sequence[Sequence]) -> tuple[tuple[LinearInequality, ...], int]:
    hull = hull_of(vertices)
    return hull.equalities, hull.dimension


def _nice_representative(hull: AffineHull, red_coeffs, red_bound, tight: int, vertices) -> LinearInequality:
    """Pick the reported ambient form of a facet (see module docstring)."""
    n = hull.ambient
    for j in range(n):
        zero_mask = 0
        one_mask = 0
        for idx, v in enumerate(vertices):
            if v[j] == 0:
                zero_mask |= 1 << idx
            elif v[j] == 1:
                one_mask |= 1 << idx
        if zero_mask == tight and zero_mask | one_mask == (1 << len(vertices)) - 1:
            coeffs = [0] * n
            coeffs[j] = -1
            return LinearInequality(tuple(coeffs), 0)
    for j in range(n):
        one_mask = 0
        zero_mask = 0
        for idx, v in enumerate(vertices):
            if v[j] == 1:
                one_mask |= 1 << idx
            elif v[j] == 0:
                zero_mask |= 1 << idx
        if one_mask == tight and zero_mask | one_mask == (1 << len(vertices)) - 1:
            coeffs = [0] * n
            coeffs[j] = 1
            return LinearInequality(tuple(coeffs), 1)
    return canonicalize(red_coeffs, red_bound)


def _dedupe_sorted(vertices: Iterable[Sequence]) -> list[tuple]:
    return sorted({tuple(v) for v in vertices})


def facet_enumeration(
    vertices: Sequence[Sequence],
    memory_bound: int = DEFAULT_MEMORY_BOUND,
) -> HRepresentation:
    """Complete irredundant H-representation of ``conv(vertices)``.

    Vertices are deduplicated and inserted in ascending lexicographic order,
    so the result does not depend on the input order.
    """
    pts = _dedupe_sorted(vertices)
    if not pts:
        raise ValueError("at least one vertex is required")
    hull = hull_of(pts)
    d = hull.dimension
    if d == 0:
        return HRepresentation(hull.equalities, (), 0)
    free = hull.free
    rows = [[1] + [int(v[j]) if Fraction(v[j]).denominator == 1 else v[j] for j in free] for v in pts]
    if any(not isinstance(x, int) for row in rows for x in row):
        rows = [integerize(row) for row in rows]
    cone = extreme_rays(rows, memory_bound=memory_bound)
    facets = []
    for ray, tight in zip(cone.rays, cone.zero_sets):
        # ray = (b, c') encodes b + c' . x >= 0, i.e. -c' . x <= b
        red = [Fraction(0)] * hull.ambient
        for j, cj in zip(free, ray[1:]):
            red[j] = Fraction(-cj)
        facets.append(_nice_representative(hull, red, Fraction(ray[0]), tight, pts))
    facets.sort(key=lambda f: (f.coeffs, f.bound))
    return HRepresentation(hull.equalities, tuple(facets), d)


def _hrep_hull(hrep: HRepresentation, ambient: int) -> AffineHull:
    rows = [list(e.coeffs) + [-e.bound] for e in hrep.equalities]
    if not rows:
        return AffineHull(ambient, (), (), tuple(range(ambient)), ())
    red, pivots = rref(rows, ambient + 1, column_order=range(ambient - 1, -1, -1))
    if ambient in pivots:
        raise ValueError("equalities are inconsistent")
    return _hull_from_equations(red, ambient)


@dataclass(frozen=True)
class VertexEnumeration:
    vertices: tuple[tuple[Fraction, ...], ...]
    rays: tuple[tuple[Fraction, ...], ...]

    @property
    def bounded(self) -> bool:
        return not self.rays


def vertex_enumeration(
    hrep: HRepresentation,
    ambient: int | None = None,
    memory_bound: int = DEFAULT_MEMORY_BOUND,
) -> VertexEnumeration:
    """Vertices (and recession rays) of ``{equalities, facets}``.

    Raises ``ValueError`` if the set contains a line.
    """
    if ambient is None:
        ambient = hrep.ambient_dimension
    hull = _hrep_hull(hrep, ambient)
    d = hull.dimension
    if d == 0:
        return VertexEnumeration((tuple(hull.lift([])),), ())
    # cone {(t, x) : t*b - c.x >= 0, t >= 0} in free coordinates
    rows = [[1] + [0] * d]
    for f in hrep.facets:
        c, b = hull.reduce(f.coeffs, f.bound)
        rows.append(integerize([b] + [-c[j] for j in hull.free]))
    cone = extreme_rays(rows, memory_bound=memory_bound)
    verts, rays = set(), set()
    for ray in cone.rays:
        t = ray[0]
        if t > 0:
            verts.add(tuple(hull.lift([Fraction(x, t) for x in ray[1:]])))
        else:
            direction = [Fraction(0)] * ambient
            for j, x in zip(hull.free, ray[1:]):
                direction[j] = Fraction(x)
            # pivot coordinates follow from the homogeneous equalities
            for row, pc in zip(hull._reduced, hull.pivots):
                direction[pc] = -sum(row[j] * direction[j] for j in hull.free if row[j])
            rays.add(tuple(direction))
    return VertexEnumeration(tuple(sorted(verts)), tuple(sorted(rays)))


# ---------------------------------------------------------------- verification


@dataclass(frozen=True)
class ClauseResult:
    name: str
    passed: bool
    failures: tuple[str, ...] = ()
    witness: tuple | None = None
    skipped: bool = False


@dataclass(frozen=True)
class VerificationReport:
    clauses: tuple[ClauseResult, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.clauses)

    def clause(self, name: str) -> ClauseResult:
        return next(c for c in self.clauses if c.name == name)

    def summary(self) -> str:
        parts = []
        for c in self.clauses:
            state = "skipped" if c.skipped else ("pass" if c.passed else "FAIL")
            parts.append(f"{c.name}={state}")
        return ", ".join(parts)


def _check_valid(pts, hrep, hull) -> ClauseResult:
    failures = []
    witness = None
    if hrep.dimension != hull.dimension:
        failures.append(f"declared dimension {hrep.dimension} but vertices span {hull.dimension}")
    for i, e in enumerate(hrep.equalities):
        for v in pts:
            if e.value(v) != e.bound:
                failures.append(f"equality {i} fails at vertex {v}")
                witness = witness or ("equality", i, v)
                break
    for i, f in enumerate(hrep.facets):
        for v in pts:
            if evaluate(f, v) < 0:
                failures.append(f"facet {i} is violated by vertex {v}")
                witness = witness or ("facet", i, v)
                break
    # equalities must cut out exactly the affine hull of the vertices
    if not failures:
        eq_rank = int_rank([list(e.coeffs) + [e.bound] for e in hrep.equalities]) if hrep.equalities else 0
        if eq_rank != len(hull.equalities):
            failures.append(
                f"equalities have rank {eq_rank}, the affine hull needs {len(hull.equalities)}"
            )
    return ClauseResult("valid", not failures, tuple(failures), witness)


def _check_tight(pts, hrep, hull) -> ClauseResult:
    failures = []
    witness = None
    d = hrep.dimension
    for i, f in enumerate(hrep.facets):
        tight = [[1] + [v[j] for j in hull.free] for v in pts if evaluate(f, v) == 0]
        rank = int_rank(tight) if tight else 0
        if rank < d:
            failures.append(f"facet {i} is tight on only {rank} affinely independent vertices (< {d})")
            witness = witness or ("facet", i, rank)
    return ClauseResult("tight", not failures, tuple(failures), witness)


def _check_irredundant(pts, hrep, hull) -> ClauseResult:
    """Facet i is redundant iff c_i . x <= b_i follows from the others.

    By the affine Farkas lemma that holds iff some lambda >= 0 gives
    ``sum lambda_j c_j = c_i`` on the hull and ``sum lambda_j b_j <= b_i``.
    That is an LP feasibility question; when it is infeasible the Farkas
    ray yields a point obeying every other facet but violating facet i.
    """
    failures = []
    witness = None
    reduced = []
    for f in hrep.facets:
        c, b = hull.reduce(f.coeffs, f.bound)
        reduced.append(([c[j] for j in hull.free], b))
    m = len(reduced)
    d = hull.dimension
    for i in range(m):
        others = [j for j in range(m) if j != i]
        A = [[reduced[j][0][k] for j in others] + [0] for k in range(d)]
        A.append([reduced[j][1] for j in others] + [1])
        rhs = list(reduced[i][0]) + [reduced[i][1]]
        res = solve_lp(A, rhs)
        if res.status == "optimal":
            combo = {others[k]: x for k, x in enumerate(res.x[:-1]) if x}
            failures.append(f"facet {i} is implied by facets {sorted(combo)}")
            witness = witness or ("redundant", i, combo)
    return ClauseResult("irredundant", not failures, tuple(failures), witness)


def _check_complete(pts, hrep, hull, memory_bound) -> ClauseResult:
    """The H-polytope must not be larger than conv(vertices)."""
    try:
        enum = vertex_enumeration(hrep, hull.ambient, memory_bound=memory_bound)
    except ValueError as exc:
        return ClauseResult("complete", False, (f"H-polytope is unbounded: {exc}",))
    failures = []
    witness = None
    known = {tuple(Fraction(x) for x in v) for v in pts}
    for r in enum.rays:
        failures.append(f"H-polytope is unbounded along {r}")
        witness = witness or ("ray", r)
    for v in enum.vertices:
        if v not in known:
            failures.append(f"point {tuple(str(x) for x in v)} satisfies the system but is not a vertex of the hull")
            witness = witness or ("point", v)
    return ClauseResult("complete", not failures, tuple(failures), witness)


def verify_h_representation(
    vertices: Sequence[Sequence],
    hrep: HRepresentation,
    check_completeness: bool = True,
    memory_bound: int = DEFAULT_MEMORY_BOUND,
) -> VerificationReport:
    """Check an H-representation against the vertex set it should describe.

    Clauses: ``valid`` (every vertex satisfies everything, equalities span
    the hull), ``tight`` (each facet touches ``dimension`` affinely
    independent vertices), ``irredundant`` (LP: no facet follows from the
    rest), ``complete`` (vertex enumeration of the system returns exactly
    the input vertices).
    """
    pts = _dedupe_sorted(vertices)
    n = len(pts[0])
    for f in hrep.equalities + hrep.facets:
        if len(f.coeffs) != n:
            raise DimensionError(f"inequality of length {len(f.coeffs)} for ambient dimension {n}")
    hull = hull_of(pts)
    valid = _check_valid(pts, hrep, hull)
    clauses = [valid]
    if not valid.passed:
        # later clauses assume the system is valid on the hull
        for name in ("tight", "irredundant", "complete"):
            clauses.append(ClauseResult(name, False, ("not checked: validity failed",), skipped=True))
        return VerificationReport(tuple(clauses))
    clauses.append(_check_tight(pts, hrep, hull))
    clauses.append(_check_irredundant(pts, hrep, hull))
    if check_completeness:
        clauses.append(_check_complete(pts, hrep, hull, memory_bound))
    else:
        clauses.append(ClauseResult("complete", True, (), skipped=True))
    return VerificationReport(tuple(clauses))
