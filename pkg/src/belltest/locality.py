"""Is a probability table a mixture of deterministic local strategies?

The question is an exact LP feasibility problem over the distinct vertices of
the local polytope.  A positive answer comes with strategy weights; a negative
one with an inequality that every vertex satisfies and the table violates.
Both are re-checked in exact arithmetic before they are returned.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .errors import ClassMismatchError, InternalError, RangeError
from .geometry import AffineHull, LinearInequality, canonicalize, evaluate, hull_of
from .model import ProbabilityTable, SettingsSelection, validate_table
from .simplex import solve_lp
from .strategies import (
    DEFAULT_ENUMERATION_CAP,
    VertexSet,
    enumerate_vertices,
    strategy_count,
    strategy_from_index,
    vertex_of,
)

log = logging.getLogger(__name__)

__all__ = [
    "Local",
    "Nonlocal",
    "LocalPolytope",
    "local_polytope",
    "test_locality",
    "test_point",
    "verify_local_model",
    "max_violation",
]


@dataclass(frozen=True)
class Local:
    """The table is reproduced by ``sum_F weights[F] * strategy_F``."""

    weights: dict[int, Fraction]
    slack: Fraction = Fraction(0)

    is_local = True


@dataclass(frozen=True)
class Nonlocal:
    """``certificate`` holds at every vertex and fails at the table.

    ``violation = table_value - local_bound > 0``.  ``kind`` records where the
    inequality came from: ``"equality"`` (the table leaves the affine hull,
    e.g. it signals), ``"farkas"`` (the LP infeasibility ray) or ``"facet"``
    (sharpened by ray shooting from the polytope's barycenter).
    """

    certificate: LinearInequality
    violation: Fraction
    table_value: Fraction
    local_bound: Fraction
    kind: str = "farkas"

    is_local = False


@dataclass(frozen=True)
class LocalPolytope:
    selection: SettingsSelection
    vertex_set: VertexSet
    hull: AffineHull

    @property
    def vertices(self):
        return self.vertex_set.vertices

    def barycenter(self) -> list[Fraction]:
        n = len(self.vertices)
        return [Fraction(sum(col), n) for col in zip(*self.vertices)]


@lru_cache(maxsize=32)
def local_polytope(selection: SettingsSelection, cap: int = DEFAULT_ENUMERATION_CAP) -> LocalPolytope:
    vs = enumerate_vertices(selection, cap=cap)
    return LocalPolytope(selection, vs, hull_of(vs.vertices))


def _nonlocal(ineq: LinearInequality, point, poly: LocalPolytope, kind: str, margin=Fraction(0)) -> Nonlocal:
    for v in poly.vertices:
        if evaluate(ineq, v) < 0:
            raise InternalError(f"{kind} certificate {ineq} fails at vertex {v}")
    value = ineq.value(point)
    if value - ineq.bound <= margin:
        raise InternalError(f"{kind} certificate {ineq} does not separate the table")
    return Nonlocal(ineq, value - ineq.bound, value, Fraction(ineq.bound), kind)


def _weights(poly: LocalPolytope, vertex_weights: Sequence[Fraction]) -> dict[int, Fraction]:
    out = {}
    for j, w in enumerate(vertex_weights):
        if w:
            out[poly.vertex_set.representative(j)] = Fraction(w)
    return dict(sorted(out.items()))


def _lift_free(poly: LocalPolytope, free_coeffs: Sequence) -> list[Fraction]:
    coeffs = [Fraction(0)] * poly.hull.ambient
    for j, c in zip(poly.hull.free, free_coeffs):
        coeffs[j] = Fraction(c)
    return coeffs


def _sharpen(poly: LocalPolytope, point: Sequence[Fraction]) -> LinearInequality | None:
    """Supporting inequality where the segment barycenter -> point leaves the polytope.

    Maximize t with ``q + t (p - q)`` in the polytope; the optimal dual is a
    valid inequality tight at the exit point, generically a facet.
    """
    hull = poly.hull
    q = poly.barycenter()
    qf = hull.project(q)
    df = [x - y for x, y in zip(hull.project(point), qf)]
    if not any(df):
        return None
    verts = [hull.project(v) for v in poly.vertices]
    d = len(qf)
    A = [[v[i] for v in verts] + [-df[i]] for i in range(d)]
    A.append([1] * len(verts) + [0])
    rhs = list(qf) + [1]
    cost = [0] * len(verts) + [1]
    res = solve_lp(A, rhs, cost, maximize=True)
    if res.status != "optimal" or res.value >= 1:
        return None
    y = res.y
    # y_x . v + y_0 >= 0 on every vertex, i.e. -y_x . x <= y_0
    return canonicalize(_lift_free(poly, [-v for v in y[:d]]), y[d])


def test_point(
    selection: SettingsSelection,
    point: Sequence,
    slack=0,
    cap: int = DEFAULT_ENUMERATION_CAP,
    sharpen: bool = True,
):
    """Locality test for a raw point in the flat coordinates of ``selection``.

    Unlike :func:`test_locality` the point need not be a valid table.
    """
    slack = Fraction(slack)
    if slack < 0:
        raise RangeError("slack must be nonnegative")
    point = [Fraction(x) for x in point]
    if len(point) != selection.ambient_dimension:
        raise RangeError(f"point of length {len(point)} for ambient dimension {selection.ambient_dimension}")
    poly = local_polytope(selection, cap)
    if slack:
        return _test_with_slack(poly, point, slack)

    hull = poly.hull
    for eq, r in zip(hull.equalities, hull.residuals(point)):
        if r:
            # the table violates a relation every local model obeys exactly
            ineq = eq if r < 0 else LinearInequality(tuple(-c for c in eq.coeffs), -eq.bound)
            return _nonlocal(ineq, point, poly, "equality")

    verts = [hull.project(v) for v in poly.vertices]
    d = hull.dimension
    A = [[v[i] for v in verts] for i in range(d)]
    A.append([1] * len(verts))
    rhs = hull.project(point) + [1]
    res = solve_lp(A, rhs)
    if res.status == "optimal":
        weights = _weights(poly, res.x)
        if not verify_local_model(weights, selection, point, 0):
            raise InternalError("LP weights do not reproduce the table")
        return Local(weights)

    y = res.farkas
    # y_x . v + y_0 >= 0 on vertices, y_x . p + y_0 < 0
    farkas = canonicalize(_lift_free(poly, [-v for v in y[:d]]), y[d])
    verdict = _nonlocal(farkas, point, poly, "farkas")
    if sharpen:
        facet = _sharpen(poly, point)
        if facet is not None:
            verdict = _nonlocal(facet, point, poly, "facet")
    return verdict


def _test_with_slack(poly: LocalPolytope, point: list[Fraction], slack: Fraction):
    """Feasibility of ``|A w - p| <= slack`` componentwise.

    Written as ``A w - e = p - slack`` with ``0 <= e <= 2 slack``.
    """
    n = len(point)
    verts = poly.vertices
    nv = len(verts)
    A = []
    rhs = []
    for i in range(n):
        row = [v[i] for v in verts] + [0] * (2 * n)
        row[nv + i] = -1
        A.append(row)
        rhs.append(point[i] - slack)
    for i in range(n):
        row = [0] * (nv + 2 * n)
        row[nv + i] = 1
        row[nv + n + i] = 1
        A.append(row)
        rhs.append(2 * slack)
    A.append([1] * nv + [0] * (2 * n))
    rhs.append(1)
    res = solve_lp(A, rhs)
    if res.status == "optimal":
        weights = _weights(poly, res.x[:nv])
        if not verify_local_model(weights, poly.selection, point, slack):
            raise InternalError("LP weights do not reproduce the table within the slack")
        return Local(weights, slack)
    y = res.farkas
    ineq = canonicalize([-v for v in y[:n]], y[2 * n])
    # the Farkas ray guarantees a margin of slack * |coeffs|_1
    margin = slack * sum(abs(c) for c in ineq.coeffs)
    return _nonlocal(ineq, point, poly, "farkas", margin)


def test_locality(table: ProbabilityTable, slack=0, cap: int = DEFAULT_ENUMERATION_CAP, sharpen: bool = True):
    """Decide whether ``table`` has a local model, within L-infinity ``slack``.

    ``slack`` is a plain tolerance on each reproduced probability, not a
    statistical test.  Raises ``ValueError`` if the table is not a valid
    probability table.
    """
    report = validate_table(table)
    if not report.valid:
        raise RangeError("invalid probability table: " + "; ".join(report.problems()))
    return test_point(table.selection, table.vector(), slack, cap=cap, sharpen=sharpen)


def verify_local_model(weights: dict[int, Fraction], selection_or_table, point=None, slack=0) -> bool:
    """Exact check that ``weights`` reproduce a table within ``slack``.

    Call as ``verify_local_model(weights, table, slack=...)`` or with a
    selection and a flat point.
    """
    if isinstance(selection_or_table, ProbabilityTable):
        selection = selection_or_table.selection
        if point is not None and not isinstance(point, (list, tuple)):
            slack, point = point, None
        point = selection_or_table.vector() if point is None else point
    else:
        selection = selection_or_table
    slack = Fraction(slack)
    total = strategy_count(selection.exp_class)
    recon = [Fraction(0)] * selection.ambient_dimension
    acc = Fraction(0)
    for i, w in weights.items():
        if not 0 <= i < total:
            raise RangeError(f"unknown strategy index {i}")
        w = Fraction(w)
        if w < 0:
            return False
        acc += w
        for pos, x in enumerate(vertex_of(strategy_from_index(selection.exp_class, i), selection)):
            if x:
                recon[pos] += w
    if acc != 1:
        return False
    return all(abs(r - Fraction(p)) <= slack for r, p in zip(recon, point))


def max_violation(table: ProbabilityTable | Sequence, inequalities: Sequence[LinearInequality]):
    """Most violated inequality at the table and its (signed) slack.

    A negative slack means violation.  Ties go to the first inequality in
    canonical (coefficient-lexicographic) order.
    """
    if not inequalities:
        raise ValueError("no inequalities given")
    point = table.vector() if isinstance(table, ProbabilityTable) else [Fraction(x) for x in table]
    best = None
    for ineq in sorted(inequalities, key=lambda f: (f.coeffs, f.bound)):
        s = evaluate(ineq, point)
        if best is None or s < best[1]:
            best = (ineq, s)
    return best


def check_class(table: ProbabilityTable, selection: SettingsSelection):
    if table.selection != selection:
        raise ClassMismatchError("table and selection differ")
