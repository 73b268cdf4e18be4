"""Data files in, artifacts out.

Data file (UTF-8 JSON)::

    {"class": [2, 2, 2],
     "pairs": [[0, 0], [0, 1], [1, 1]],
     "counts": [ [[..N_b..], ..N_a rows..], ... one block per pair ... ]}

``probs`` may replace ``counts``; probabilities are JSON numbers or strings
such as ``"0.125"`` or ``"1/8"``, all read exactly.  Every scalar keeps its
source position so errors can point at line and column.
"""

from __future__ import annotations

import json
import json.decoder
import json.scanner
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .geometry import HRepresentation, LinearInequality, VerificationReport
from .model import (
    ExperimentClass,
    ProbabilityTable,
    SettingsSelection,
    format_rational,
    parse_rational,
    table_from_counts,
)
from .strategies import VertexSet, strategy_count, strategy_from_index

__all__ = [
    "DataFormatError",
    "DataFile",
    "load_data",
    "loads_data",
    "format_inequality",
    "vertices_artifact",
    "facets_artifact",
    "verdict_artifact",
    "render",
]


class DataFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = f"line {line} column {column}: " if line is not None else ""
        super().__init__(where + message)


class _Located:
    __slots__ = ("value", "pos")

    def __init__(self, value, pos):
        self.value = value
        self.pos = pos

    def __repr__(self):
        return f"_Located({self.value!r}@{self.pos})"


def _located_loads(text: str):
    """``json.loads`` wrapping every scalar in ``_Located`` with its offset."""
    dec = json.JSONDecoder(parse_float=Fraction, parse_int=int)

    def scan(string, idx):
        value, end = base(string, idx)
        if isinstance(value, (list, dict)):
            return value, end
        return _Located(value, idx), end

    dec.parse_array = lambda s_and_end, _scan: json.decoder.JSONArray(s_and_end, scan)
    dec.parse_object = lambda s_and_end, strict, _scan, *rest: json.decoder.JSONObject(
        s_and_end, strict, scan, *rest
    )
    base = json.scanner.py_make_scanner(dec)
    dec.scan_once = scan
    return dec.decode(text)


@dataclass(frozen=True)
class DataFile:
    exp_class: ExperimentClass
    pairs: tuple[tuple[int, int], ...]
    kind: str  # "counts" or "probs"
    blocks: tuple  # per pair, N_a x N_b arrays of int or Fraction

    def table(self, selection: SettingsSelection | None = None) -> ProbabilityTable:
        """Table over ``selection`` (default: the file's own pairs)."""
        if selection is None:
            selection = SettingsSelection(self.exp_class, self.pairs)
        if selection.exp_class != self.exp_class:
            raise DataFormatError(
                f"data file is for class {self.exp_class}, the run declares {selection.exp_class}"
            )
        by_pair = dict(zip(self.pairs, self.blocks))
        for alpha, beta in selection.pairs:
            if (alpha, beta) not in by_pair:
                raise DataFormatError(f"no data for declared setting pair {alpha}:{beta}")
        extra = [p for p in self.pairs if p not in set(selection.pairs)]
        if extra:
            names = ", ".join(f"{a}:{b}" for a, b in extra)
            raise DataFormatError(f"data for undeclared setting pairs {names}")
        blocks = [by_pair[p] for p in selection.pairs]
        if self.kind == "counts":
            return table_from_counts(selection, blocks)
        return ProbabilityTable(selection, blocks)


def _line_col(text: str, pos: int) -> tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


def loads_data(text: str) -> DataFile:
    try:
        doc = _located_loads(text)
    except json.JSONDecodeError as exc:
        raise DataFormatError(exc.msg, exc.lineno, exc.colno) from None

    def fail(msg, node=None):
        if isinstance(node, _Located):
            raise DataFormatError(msg, *_line_col(text, node.pos))
        raise DataFormatError(msg)

    def integer(node, what):
        if not isinstance(node, _Located) or isinstance(node.value, bool) or not isinstance(node.value, int):
            fail(f"{what} must be an integer", node)
        return node.value

    if not isinstance(doc, dict):
        fail("top level must be an object")
    if "class" not in doc:
        fail("missing field 'class'")
    cls = doc["class"]
    if not isinstance(cls, list) or len(cls) != 3:
        fail("'class' must be [n_det_a, n_det_b, n_settings]")
    values = [integer(x, "class entry") for x in cls]
    try:
        exp_class = ExperimentClass(*values)
    except ValueError as exc:
        fail(str(exc), cls[0])

    if "pairs" not in doc or not isinstance(doc["pairs"], list):
        fail("missing list field 'pairs'")
    pairs = []
    for p in doc["pairs"]:
        if not isinstance(p, list) or len(p) != 2:
            fail("each pair must be [alpha, beta]")
        pairs.append((integer(p[0], "setting"), integer(p[1], "setting")))
    try:
        SettingsSelection(exp_class, pairs)
    except ValueError as exc:
        fail(str(exc))

    has_counts, has_probs = "counts" in doc, "probs" in doc
    if has_counts and has_probs:
        fail("give either 'counts' or 'probs', not both")
    if not (has_counts or has_probs):
        fail("missing field 'counts' or 'probs'")
    kind = "counts" if has_counts else "probs"
    data = doc[kind]
    if not isinstance(data, list):
        fail(f"'{kind}' must be a list of per-pair arrays")
    if len(data) < len(pairs):
        missing = pairs[len(data)]
        fail(f"no data for declared setting pair {missing[0]}:{missing[1]}")
    if len(data) > len(pairs):
        fail(f"'{kind}' has {len(data)} blocks for {len(pairs)} pairs")

    blocks = []
    for (alpha, beta), block in zip(pairs, data):
        tag = f"pair {alpha}:{beta}"
        if not isinstance(block, list) or len(block) != exp_class.n_out_a:
            fail(f"{tag}: expected {exp_class.n_out_a} rows")
        rows = []
        for row in block:
            if not isinstance(row, list) or len(row) != exp_class.n_out_b:
                fail(f"{tag}: expected rows of length {exp_class.n_out_b}")
            out = []
            for node in row:
                if kind == "counts":
                    v = integer(node, f"{tag}: count")
                    if v < 0:
                        fail(f"{tag}: count must be nonnegative", node)
                    out.append(v)
                else:
                    raw = node.value if isinstance(node, _Located) else node
                    try:
                        out.append(parse_rational(raw))
                    except ValueError:
                        fail(f"{tag}: malformed number {raw!r}", node)
            rows.append(tuple(out))
        blocks.append(tuple(rows))
    return DataFile(exp_class, tuple(pairs), kind, tuple(blocks))


def load_data(path) -> DataFile:
    with open(path, encoding="utf-8") as fh:
        return loads_data(fh.read())


# ------------------------------------------------------------------ artifacts


def _term_label(selection: SettingsSelection, pos: int) -> str:
    size = selection.exp_class.block_size
    k, j = divmod(pos, size)
    a, b = divmod(j, selection.exp_class.n_out_b)
    alpha, beta = selection.pairs[k]
    return f"p({a},{b}|{alpha},{beta})"


def format_inequality(ineq: LinearInequality, selection: SettingsSelection, relation: str = "≤") -> str:
    """``-p(0,0|0,0) + 2·p(1,1|0,1) ≤ 1`` style, zero terms omitted."""
    parts = []
    for pos, c in enumerate(ineq.coeffs):
        if not c:
            continue
        mag = abs(c)
        term = _term_label(selection, pos) if mag == 1 else f"{mag}·{_term_label(selection, pos)}"
        if not parts:
            parts.append(term if c > 0 else f"-{term}")
        else:
            parts.append(("+ " if c > 0 else "- ") + term)
    return f"{' '.join(parts)} {relation} {ineq.bound}"


def _ineq_json(ineq: LinearInequality, selection, relation="≤") -> dict:
    return {
        "coeffs": list(ineq.coeffs),
        "bound": ineq.bound,
        "text": format_inequality(ineq, selection, relation),
    }


def _header(selection: SettingsSelection) -> dict:
    return {
        "class": list(selection.exp_class.as_tuple()),
        "pairs": [list(p) for p in selection.pairs],
        "ambient_dimension": selection.ambient_dimension,
    }


def _strategy_json(selection: SettingsSelection, i: int) -> dict:
    s = strategy_from_index(selection.exp_class, i)
    return {"strategy": i, "f_a": list(s.f_a), "f_b": list(s.f_b)}


def vertices_artifact(vs: VertexSet) -> dict:
    sel = vs.selection
    doc = _header(sel)
    doc["strategy_count"] = strategy_count(sel.exp_class)
    doc["vertex_count"] = len(vs)
    doc["summary"] = f"{len(vs)} vertices, ambient dimension {sel.ambient_dimension}"
    doc["vertices"] = [
        {"coords": list(v), "strategies": list(s)} for v, s in zip(vs.vertices, vs.strategies)
    ]
    return doc


def facets_artifact(
    selection: SettingsSelection,
    hrep: HRepresentation,
    report: VerificationReport,
    reference: int | None = None,
) -> dict:
    doc = _header(selection)
    doc["dimension"] = hrep.dimension
    doc["equality_count"] = len(hrep.equalities)
    doc["facet_count"] = len(hrep.facets)
    doc["summary"] = (
        f"{len(hrep.facets)} facets, {len(hrep.equalities)} equalities, "
        f"dimension {hrep.dimension}"
    )
    doc["equalities"] = [_ineq_json(e, selection, "=") for e in hrep.equalities]
    doc["facets"] = [_ineq_json(f, selection) for f in hrep.facets]
    doc["verification"] = {
        "passed": report.passed,
        "clauses": {
            c.name: ("skipped" if c.skipped else ("pass" if c.passed else "fail"))
            for c in report.clauses
        },
        "failures": [msg for c in report.clauses for msg in c.failures],
    }
    if reference is not None:
        note = {"published_count": reference, "matches": reference == len(hrep.facets)}
        if reference != len(hrep.facets):
            note["note"] = (
                f"published count {reference} differs from the {len(hrep.facets)} "
                "verified irredundant facets listed here"
            )
        doc["reference"] = note
    return doc


def verdict_artifact(table: ProbabilityTable, verdict, slack: Fraction) -> dict:
    sel = table.selection
    doc = _header(sel)
    doc["slack"] = format_rational(slack)
    if verdict.is_local:
        doc["verdict"] = "local"
        doc["weights"] = [
            dict(_strategy_json(sel, i), weight=format_rational(w)) for i, w in verdict.weights.items()
        ]
    else:
        doc["verdict"] = "nonlocal"
        doc["certificate"] = dict(_ineq_json(verdict.certificate, sel), kind=verdict.kind)
        doc["local_bound"] = format_rational(verdict.local_bound)
        doc["table_value"] = format_rational(verdict.table_value)
        doc["violation"] = format_rational(verdict.violation)
    return doc


def _render_text(doc: dict) -> str:
    lines = [f"class ({','.join(map(str, doc['class']))}), pairs "
             + " ".join(f"{a}:{b}" for a, b in doc["pairs"])]
    if "vertices" in doc:
        lines.append(doc["summary"])
        for i, v in enumerate(doc["vertices"]):
            bits = "".join(map(str, v["coords"]))
            lines.append(f"v{i} {bits} strategies {','.join(map(str, v['strategies']))}")
    elif "facets" in doc:
        lines.append(doc["summary"])
        ver = doc["verification"]
        lines.append("verification: " + ("passed" if ver["passed"] else "FAILED") + " ("
                     + ", ".join(f"{k}={v}" for k, v in ver["clauses"].items()) + ")")
        lines.extend(f"  ! {msg}" for msg in ver["failures"])
        if "reference" in doc and "note" in doc["reference"]:
            lines.append("note: " + doc["reference"]["note"])
        lines.append("equalities:")
        lines.extend("  " + e["text"] for e in doc["equalities"])
        lines.append("facets:")
        lines.extend("  " + f["text"] for f in doc["facets"])
    else:
        lines.append(f"slack {doc['slack']}")
        if doc["verdict"] == "local":
            lines.append("LOCAL: the table is a mixture of deterministic local strategies")
            for w in doc["weights"]:
                lines.append(
                    f"  {w['weight']} x strategy {w['strategy']} "
                    f"(f_a={w['f_a']}, f_b={w['f_b']})"
                )
        else:
            cert = doc["certificate"]
            lines.append("NONLOCAL: violated inequality (" + cert["kind"] + ")")
            lines.append("  " + cert["text"])
            lines.append(f"  table value {doc['table_value']}, local bound {doc['local_bound']}, "
                         f"violation {doc['violation']}")
    return "\n".join(lines) + "\n"


def render(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
    return _render_text(doc)


def dump_json(obj: Any) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False)
