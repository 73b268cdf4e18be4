"""Experiment classes, setting selections, outcome encoding and probability tables.

Outcomes of a subsystem with ``n`` detectors are the integers ``0 .. 2**n - 1``:
detector ``d`` contributes ``2**d`` when it fires.  Firing lists are always
written in ascending detector order, so ``[1, 0]`` means detector 0 fired.

A joint outcome ``(a, b)`` is stored at ``n_out_b * a + b`` and a table over a
selection of setting pairs is flattened pair by pair in the order the pairs
were given.  That flattened vector is the coordinate system used by every
other module.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ClassMismatchError, EmptyPairError, RangeError

__all__ = [
    "ExperimentClass",
    "SettingsSelection",
    "OutcomePattern",
    "ProbabilityTable",
    "ValidationReport",
    "PairDefects",
    "encode_outcome",
    "decode_outcome",
    "joint_index",
    "table_from_counts",
    "table_from_probabilities",
    "validate_table",
    "parse_rational",
    "format_rational",
]


def parse_rational(text) -> Fraction:
    """Parse ``"3/8"``, ``"0.25"``, ``"1e-3"`` or an int exactly.

    Floats are rejected: their binary value is rarely the number the user
    typed, and an exact test needs the typed number.
    """
    if isinstance(text, bool):
        raise ValueError(f"not a number: {text!r}")
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if isinstance(text, float):
        raise ValueError(f"binary float {text!r} is not accepted; pass a decimal string")
    if not isinstance(text, str):
        raise ValueError(f"not a number: {text!r}")
    s = text.strip()
    if not s:
        raise ValueError("empty number")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"malformed number {text!r}") from exc


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class ExperimentClass:
    """Detector counts of subsystems A and B and the shared number of settings."""

    n_det_a: int
    n_det_b: int
    n_settings: int

    def __post_init__(self):
        for name in ("n_det_a", "n_det_b", "n_settings"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int):
                raise TypeError(f"{name} must be an int, got {value!r}")
            if value < 1:
                raise RangeError(f"{name} must be >= 1, got {value}")

    @property
    def n_out_a(self) -> int:
        return 2 ** self.n_det_a

    @property
    def n_out_b(self) -> int:
        return 2 ** self.n_det_b

    @property
    def block_size(self) -> int:
        """Number of joint outcomes for one setting pair."""
        return self.n_out_a * self.n_out_b

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.n_det_a, self.n_det_b, self.n_settings)

    def __str__(self):
        return f"({self.n_det_a},{self.n_det_b},{self.n_settings})"


@dataclass(frozen=True)
class SettingsSelection:
    """The setting pairs actually run, in a fixed order."""

    exp_class: ExperimentClass
    pairs: tuple[tuple[int, int], ...]

    def __init__(self, exp_class: ExperimentClass, pairs: Iterable[Sequence[int]]):
        pairs = tuple((int(alpha), int(beta)) for alpha, beta in pairs)
        n = exp_class.n_settings
        if not pairs:
            raise RangeError("at least one setting pair is required")
        if len(pairs) > n * n:
            raise RangeError(f"at most {n * n} setting pairs exist for {n} settings")
        for alpha, beta in pairs:
            if not (0 <= alpha < n and 0 <= beta < n):
                raise RangeError(f"setting pair {alpha}:{beta} outside 0..{n - 1}")
        if len(set(pairs)) != len(pairs):
            raise RangeError("setting pairs must be distinct")
        object.__setattr__(self, "exp_class", exp_class)
        object.__setattr__(self, "pairs", pairs)

    @classmethod
    def all_pairs(cls, exp_class: ExperimentClass) -> "SettingsSelection":
        n = exp_class.n_settings
        return cls(exp_class, [(alpha, beta) for alpha in range(n) for beta in range(n)])

    @property
    def ambient_dimension(self) -> int:
        return len(self.pairs) * self.exp_class.block_size

    def coordinate(self, k: int, a: int, b: int) -> int:
        """Flat position of p(a, b | pair k)."""
        if not 0 <= k < len(self.pairs):
            raise RangeError(f"pair index {k} out of range")
        return k * self.exp_class.block_size + joint_index(a, b, self.exp_class)

    def coordinate_labels(self) -> list[tuple[int, int, int, int, int]]:
        """``(k, a, b, alpha, beta)`` for every flat coordinate."""
        c = self.exp_class
        return [
            (k, a, b, alpha, beta)
            for k, (alpha, beta) in enumerate(self.pairs)
            for a in range(c.n_out_a)
            for b in range(c.n_out_b)
        ]


@dataclass(frozen=True)
class OutcomePattern:
    firings: tuple[int, ...]

    def __init__(self, firings: Iterable[int]):
        firings = tuple(int(f) for f in firings)
        if not firings:
            raise RangeError("a subsystem has at least one detector")
        if any(f not in (0, 1) for f in firings):
            raise RangeError(f"firings must be 0/1, got {firings}")
        object.__setattr__(self, "firings", firings)

    def __len__(self):
        return len(self.firings)


def encode_outcome(pattern: OutcomePattern | Sequence[int]) -> int:
    if not isinstance(pattern, OutcomePattern):
        pattern = OutcomePattern(pattern)
    return sum(f << d for d, f in enumerate(pattern.firings))


def decode_outcome(index: int, n_det: int) -> OutcomePattern:
    if n_det < 1:
        raise RangeError(f"n_det must be >= 1, got {n_det}")
    if not 0 <= index < 2 ** n_det:
        raise RangeError(f"outcome {index} outside 0..{2 ** n_det - 1}")
    return OutcomePattern((index >> d) & 1 for d in range(n_det))


def joint_index(a: int, b: int, exp_class: ExperimentClass) -> int:
    if not 0 <= a < exp_class.n_out_a:
        raise RangeError(f"outcome a={a} outside 0..{exp_class.n_out_a - 1}")
    if not 0 <= b < exp_class.n_out_b:
        raise RangeError(f"outcome b={b} outside 0..{exp_class.n_out_b - 1}")
    return exp_class.n_out_b * a + b


@dataclass(frozen=True)
class ProbabilityTable:
    """Conditional probabilities p(a, b | alpha, beta) for each selected pair.

    ``entries[k][a][b]`` belongs to ``selection.pairs[k]``.  Only the shape is
    enforced here; use :func:`validate_table` for range and normalization.
    """

    selection: SettingsSelection
    entries: tuple[tuple[tuple[Fraction, ...], ...], ...]

    def __init__(self, selection: SettingsSelection, entries):
        c = selection.exp_class
        rows = []
        if len(entries) != len(selection.pairs):
            raise RangeError(
                f"expected {len(selection.pairs)} pair blocks, got {len(entries)}"
            )
        for k, block in enumerate(entries):
            if len(block) != c.n_out_a or any(len(row) != c.n_out_b for row in block):
                alpha, beta = selection.pairs[k]
                raise RangeError(
                    f"pair {alpha}:{beta} needs a {c.n_out_a}x{c.n_out_b} array"
                )
            rows.append(tuple(tuple(parse_rational(x) for x in row) for row in block))
        object.__setattr__(self, "selection", selection)
        object.__setattr__(self, "entries", tuple(rows))

    @classmethod
    def from_vector(cls, selection: SettingsSelection, vector: Sequence) -> "ProbabilityTable":
        c = selection.exp_class
        if len(vector) != selection.ambient_dimension:
            raise RangeError(
                f"vector of length {len(vector)} for ambient dimension "
                f"{selection.ambient_dimension}"
            )
        size = c.block_size
        blocks = []
        for k in range(len(selection.pairs)):
            flat = vector[k * size:(k + 1) * size]
            blocks.append([flat[a * c.n_out_b:(a + 1) * c.n_out_b] for a in range(c.n_out_a)])
        return cls(selection, blocks)

    @classmethod
    def uniform(cls, selection: SettingsSelection) -> "ProbabilityTable":
        size = selection.exp_class.block_size
        return cls.from_vector(selection, [Fraction(1, size)] * selection.ambient_dimension)

    def vector(self) -> tuple[Fraction, ...]:
        return tuple(x for block in self.entries for row in block for x in row)

    def pair_block(self, pair: tuple[int, int]):
        return self.entries[self.selection.pairs.index(tuple(pair))]


@dataclass(frozen=True)
class PairDefects:
    pair: tuple[int, int]
    negative: tuple[tuple[int, int], ...]
    above_one: tuple[tuple[int, int], ...]
    residual: Fraction

    @property
    def ok(self) -> bool:
        return not self.negative and not self.above_one and self.residual == 0


@dataclass(frozen=True)
class ValidationReport:
    pairs: tuple[PairDefects, ...]

    @property
    def valid(self) -> bool:
        return all(p.ok for p in self.pairs)

    def problems(self) -> list[str]:
        out = []
        for p in self.pairs:
            tag = f"pair {p.pair[0]}:{p.pair[1]}"
            for a, b in p.negative:
                out.append(f"{tag}: p({a},{b}) is negative")
            for a, b in p.above_one:
                out.append(f"{tag}: p({a},{b}) exceeds 1")
            if p.residual:
                out.append(f"{tag}: sum - 1 = {format_rational(p.residual)}")
        return out


def validate_table(table: ProbabilityTable) -> ValidationReport:
    reports = []
    for pair, block in zip(table.selection.pairs, table.entries):
        negative, above = [], []
        total = Fraction(0)
        for a, row in enumerate(block):
            for b, x in enumerate(row):
                total += x
                if x < 0:
                    negative.append((a, b))
                elif x > 1:
                    above.append((a, b))
        reports.append(PairDefects(pair, tuple(negative), tuple(above), total - 1))
    return ValidationReport(tuple(reports))


def table_from_counts(selection: SettingsSelection, counts) -> ProbabilityTable:
    """Normalize raw event counts pair by pair into exact probabilities."""
    if len(counts) != len(selection.pairs):
        raise RangeError(f"expected counts for {len(selection.pairs)} pairs, got {len(counts)}")
    blocks = []
    for pair, block in zip(selection.pairs, counts):
        ints = []
        for row in block:
            int_row = []
            for x in row:
                if isinstance(x, bool) or not isinstance(x, int) or x < 0:
                    raise RangeError(f"pair {pair[0]}:{pair[1]}: count {x!r} is not a nonnegative integer")
                int_row.append(x)
            ints.append(int_row)
        total = sum(sum(row) for row in ints)
        if total == 0:
            raise EmptyPairError(pair)
        blocks.append([[Fraction(x, total) for x in row] for row in ints])
    return ProbabilityTable(selection, blocks)


def table_from_probabilities(selection: SettingsSelection, probs) -> ProbabilityTable:
    return ProbabilityTable(selection, probs)


def check_same_class(selection: SettingsSelection, exp_class: ExperimentClass):
    if selection.exp_class != exp_class:
        raise ClassMismatchError(
            f"class {exp_class} does not match selection class {selection.exp_class}"
        )
