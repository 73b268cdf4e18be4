"""Deterministic local strategies and the 0/1 vertices they generate."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import CapacityError, ClassMismatchError, RangeError
from .model import ExperimentClass, ProbabilityTable, SettingsSelection

__all__ = [
    "DEFAULT_ENUMERATION_CAP",
    "DeterministicStrategy",
    "VertexSet",
    "strategy_count",
    "strategy_from_index",
    "strategy_to_index",
    "vertex_of",
    "enumerate_vertices",
    "strategy_distribution",
    "mixture_table",
]

DEFAULT_ENUMERATION_CAP = 2 ** 24


def strategy_count(exp_class: ExperimentClass) -> int:
    # Python ints are unbounded, so this cannot wrap.
    n = exp_class.n_settings
    return exp_class.n_out_a ** n * exp_class.n_out_b ** n


@dataclass(frozen=True)
class DeterministicStrategy:
    """``f_a[alpha]`` is A's outcome for setting alpha, ``f_b[beta]`` likewise for B."""

    exp_class: ExperimentClass
    f_a: tuple[int, ...]
    f_b: tuple[int, ...]

    def __post_init__(self):
        c = self.exp_class
        if len(self.f_a) != c.n_settings or len(self.f_b) != c.n_settings:
            raise RangeError(f"a strategy of class {c} maps {c.n_settings} settings per side")
        if any(not 0 <= a < c.n_out_a for a in self.f_a):
            raise RangeError(f"f_a outputs {self.f_a} outside 0..{c.n_out_a - 1}")
        if any(not 0 <= b < c.n_out_b for b in self.f_b):
            raise RangeError(f"f_b outputs {self.f_b} outside 0..{c.n_out_b - 1}")

    def __call__(self, alpha: int, beta: int) -> tuple[int, int]:
        return self.f_a[alpha], self.f_b[beta]


def strategy_from_index(exp_class: ExperimentClass, i: int) -> DeterministicStrategy:
    """Mixed-radix decoding: digits f_a(0) .. f_a(n-1), f_b(0) .. f_b(n-1), most significant first."""
    total = strategy_count(exp_class)
    if not 0 <= i < total:
        raise RangeError(f"strategy index {i} outside 0..{total - 1}")
    n = exp_class.n_settings
    f_b = [0] * n
    for beta in reversed(range(n)):
        i, f_b[beta] = divmod(i, exp_class.n_out_b)
    f_a = [0] * n
    for alpha in reversed(range(n)):
        i, f_a[alpha] = divmod(i, exp_class.n_out_a)
    return DeterministicStrategy(exp_class, tuple(f_a), tuple(f_b))


def strategy_to_index(strategy: DeterministicStrategy) -> int:
    c = strategy.exp_class
    i = 0
    for a in strategy.f_a:
        i = i * c.n_out_a + a
    for b in strategy.f_b:
        i = i * c.n_out_b + b
    return i


def vertex_of(strategy: DeterministicStrategy, selection: SettingsSelection) -> tuple[int, ...]:
    if strategy.exp_class != selection.exp_class:
        raise ClassMismatchError(
            f"strategy class {strategy.exp_class} vs selection class {selection.exp_class}"
        )
    coords = [0] * selection.ambient_dimension
    for k, (alpha, beta) in enumerate(selection.pairs):
        coords[selection.coordinate(k, strategy.f_a[alpha], strategy.f_b[beta])] = 1
    return tuple(coords)


@dataclass(frozen=True)
class VertexSet:
    """Distinct vertices in ascending lexicographic order.

    ``strategies[j]`` lists, ascending, every strategy index whose vertex is
    ``vertices[j]``.
    """

    selection: SettingsSelection
    vertices: tuple[tuple[int, ...], ...]
    strategies: tuple[tuple[int, ...], ...]

    def __len__(self):
        return len(self.vertices)

    def representative(self, j: int) -> int:
        return self.strategies[j][0]


def enumerate_vertices(selection: SettingsSelection, cap: int = DEFAULT_ENUMERATION_CAP) -> VertexSet:
    c = selection.exp_class
    total = strategy_count(c)
    if cap < 1:
        raise RangeError("the enumeration cap must be positive")
    if total > cap:
        raise CapacityError(
            f"class {c} has {total} deterministic strategies, above the enumeration cap {cap}",
            cap=cap,
        )
    n = c.n_settings
    block = c.block_size
    n_b = c.n_out_b
    # a strategy's vertex depends only on f_a at used alphas and f_b at used betas
    offsets_a = [[k * block + n_b * a for a in range(c.n_out_a)] for k in range(len(selection.pairs))]
    groups: dict[tuple[int, ...], list[int]] = {}
    for i in range(total):
        rest, digits_b = i, [0] * n
        for beta in reversed(range(n)):
            rest, digits_b[beta] = divmod(rest, n_b)
        digits_a = [0] * n
        for alpha in reversed(range(n)):
            rest, digits_a[alpha] = divmod(rest, c.n_out_a)
        ones = tuple(
            offsets_a[k][digits_a[alpha]] + digits_b[beta]
            for k, (alpha, beta) in enumerate(selection.pairs)
        )
        groups.setdefault(ones, []).append(i)
    dim = selection.ambient_dimension
    items = []
    for ones, members in groups.items():
        coords = [0] * dim
        for pos in ones:
            coords[pos] = 1
        items.append((tuple(coords), tuple(members)))
    items.sort()
    return VertexSet(
        selection,
        tuple(v for v, _ in items),
        tuple(m for _, m in items),
    )


def strategy_distribution(strategy: DeterministicStrategy, selection: SettingsSelection) -> ProbabilityTable:
    coords = vertex_of(strategy, selection)
    return ProbabilityTable.from_vector(selection, [Fraction(x) for x in coords])


def mixture_table(selection: SettingsSelection, weights: dict[int, Fraction]) -> ProbabilityTable:
    """Table of the convex combination ``sum_i w_i * strategy_i``."""
    point = [Fraction(0)] * selection.ambient_dimension
    for i, w in weights.items():
        w = Fraction(w)
        for pos, x in enumerate(vertex_of(strategy_from_index(selection.exp_class, i), selection)):
            if x:
                point[pos] += w
    return ProbabilityTable.from_vector(selection, point)
