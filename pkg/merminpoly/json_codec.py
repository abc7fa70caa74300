"""
json_codec.py
JSON encoders and decoders for every exchanged value. Rationals travel as
"p/q" strings; decimal or float text is refused.
"""

import json
import os
from fractions import Fraction
from typing import Any, Callable, Dict, List, Mapping, Sequence

from .errors import InputFormatError
from .exactla import format_rational, to_fraction
from .fine import CHSH_ASSIGNMENTS, CHSH_CONTEXTS, ChshDistribution, FineReport, first_violated_chsh
from .lambda2 import SETTING_LETTERS, SETTING_PAIRS, CrossCheckReport, NS232Distribution, PauliCoefficients
from .mermin import OUTCOME_PAIRS, MerminDistribution
from .polytope import HPolytope
from .scenario import (
    BETA_PRESETS,
    CONTEXT_NAMES,
    MEASUREMENT_COUNT,
    MEASUREMENT_LABELS,
    BetaAssignment,
    IncidenceWeight,
)
from .symmetry import G0Element, G1Element, StabilizerReport, derive_pauli_grid

OUTCOME_KEYS = tuple(f"{a}{b}" for a, b in OUTCOME_PAIRS)


def rational(value: Any) -> Fraction:
    try:
        return to_fraction(value)
    except TypeError as e:
        raise InputFormatError(str(e)) from None


def encode_rational(value: Fraction) -> str:
    return format_rational(value)


def dumps(payload: Any) -> str:
    return json.dumps(payload, indent=2, sort_keys=False, ensure_ascii=False)


def load_json(source: str) -> Any:
    """Parse a JSON file, or the text itself when ``source`` is not a path."""
    try:
        if os.path.exists(source):
            with open(source, "r", encoding="utf-8") as f:
                return json.load(f)
        return json.loads(source)
    except json.JSONDecodeError as e:
        raise InputFormatError(f"malformed JSON: {e}") from None


def _require_mapping(data: Any, what: str) -> Mapping:
    if not isinstance(data, Mapping):
        raise InputFormatError(f"{what} must be a JSON object")
    return data


def _table(data: Any, what: str):
    data = _require_mapping(data, what)
    try:
        return tuple(rational(data[k]) for k in OUTCOME_KEYS)
    except KeyError as e:
        raise InputFormatError(f"{what} is missing outcome {e}") from None


def _encode_table(table: Sequence[Fraction]) -> Dict[str, str]:
    return {k: encode_rational(v) for k, v in zip(OUTCOME_KEYS, table)}


# beta and incidence weights ------------------------------------------------------------------


def encode_beta(beta: BetaAssignment) -> Dict[str, int]:
    return beta.as_mapping()


def decode_beta(spec: str) -> BetaAssignment:
    """A preset name, a JSON object {context: bit}, or a file holding one."""
    if spec in BETA_PRESETS:
        return BETA_PRESETS[spec]
    data = _require_mapping(load_json(spec), "beta")
    try:
        return BetaAssignment.from_mapping(data)
    except (KeyError, ValueError) as e:
        raise InputFormatError(f"bad beta: {e}") from None


def encode_weight(w: IncidenceWeight) -> Dict[str, Dict[str, int]]:
    return w.as_mapping()


def decode_weight(data: Any) -> IncidenceWeight:
    try:
        return IncidenceWeight.from_mapping(_require_mapping(data, "incidence weight"))
    except (KeyError, ValueError) as e:
        raise InputFormatError(f"bad incidence weight: {e}") from None


# points and distributions --------------------------------------------------------------------


def encode_point(e: Sequence[Fraction]) -> Dict[str, str]:
    return {label: encode_rational(v) for label, v in zip(MEASUREMENT_LABELS, e)}


def decode_point(data: Any) -> tuple:
    data = _require_mapping(data, "expectation point")
    try:
        return tuple(rational(data[label]) for label in MEASUREMENT_LABELS)
    except KeyError as e:
        raise InputFormatError(f"expectation point is missing {e}") from None


def encode_mermin(p: MerminDistribution) -> Dict[str, Any]:
    return {
        "beta": encode_beta(p.beta),
        "tables": {CONTEXT_NAMES[c]: _encode_table(t) for c, t in enumerate(p.tables)},
    }


def decode_mermin(data: Any) -> MerminDistribution:
    data = _require_mapping(data, "Mermin distribution")
    beta = BetaAssignment.from_mapping(_require_mapping(data.get("beta", {}), "beta"))
    tables = _require_mapping(data.get("tables"), "tables")
    return MerminDistribution(beta, tuple(_table(tables.get(name), name) for name in CONTEXT_NAMES))


def chsh_context_name(i: int, j: int) -> str:
    return f"x{i}y{j}"


def encode_chsh(p: ChshDistribution) -> Dict[str, Dict[str, str]]:
    return {chsh_context_name(i, j): _encode_table(t) for (i, j), t in zip(CHSH_CONTEXTS, p.tables)}


def decode_chsh(data: Any) -> ChshDistribution:
    data = _require_mapping(data, "CHSH distribution")
    return ChshDistribution(tuple(
        _table(data.get(chsh_context_name(i, j)), chsh_context_name(i, j)) for i, j in CHSH_CONTEXTS
    ))


def ns232_context_name(i: int, j: int) -> str:
    return SETTING_LETTERS[i] + SETTING_LETTERS[j]


def encode_ns232(d: NS232Distribution) -> Dict[str, Dict[str, str]]:
    return {ns232_context_name(i, j): _encode_table(t) for (i, j), t in zip(SETTING_PAIRS, d.tables)}


def decode_ns232(data: Any) -> NS232Distribution:
    data = _require_mapping(data, "NS(2,3,2) distribution")
    return NS232Distribution(tuple(
        _table(data.get(ns232_context_name(i, j)), ns232_context_name(i, j)) for i, j in SETTING_PAIRS
    ))


def encode_coefficients(c: PauliCoefficients) -> Dict[str, str]:
    return {label: encode_rational(v) for label, v in c.as_mapping(nonzero_only=True).items()}


def decode_coefficients(data: Any) -> PauliCoefficients:
    data = _require_mapping(data, "Pauli coefficients")
    try:
        return PauliCoefficients.from_mapping({k: rational(v) for k, v in data.items()})
    except ValueError as e:
        raise InputFormatError(str(e)) from None


# polytopes and group elements ------------------------------------------------------------------


def encode_polytope(p: HPolytope) -> Dict[str, Any]:
    labels = p.row_labels or tuple(str(k) for k in range(p.nrows))
    return {
        "dimension": p.dimension,
        "columns": list(p.a.col_labels or ()),
        "rows": [
            {"label": label, "a": [encode_rational(v) for v in a], "b": encode_rational(b)}
            for label, (a, b) in zip(labels, p.inequalities())
        ],
    }


def decode_polytope(data: Any) -> HPolytope:
    data = _require_mapping(data, "polytope")
    rows = data.get("rows")
    if not isinstance(rows, list):
        raise InputFormatError("polytope rows must be a list")
    try:
        ineqs = [([rational(v) for v in row["a"]], rational(row["b"])) for row in rows]
    except (KeyError, TypeError) as e:
        raise InputFormatError(f"bad polytope row: {e}") from None
    labels = [row.get("label", str(k)) for k, row in enumerate(rows)]
    columns = data.get("columns") or None
    return HPolytope.from_inequalities(ineqs, data.get("dimension"), labels, columns)


def encode_g0(g: G0Element) -> Dict[str, Any]:
    return {
        "flip": [MEASUREMENT_LABELS[m] for m in sorted(g.flip)],
        "perm": {CONTEXT_NAMES[c]: CONTEXT_NAMES[t] for c, t in enumerate(g.perm.context_perm)},
    }


def encode_g1(g: G1Element) -> Dict[str, Any]:
    labels = derive_pauli_grid().labels
    return {
        "images": {
            labels[m]: {"to": labels[g.targets[m]], "sign": g.signs[m]} for m in range(MEASUREMENT_COUNT)
        }
    }


# verdicts and reports ---------------------------------------------------------------------------


def assignment_name(s: Mapping[str, int]) -> str:
    return ",".join(f"{var}={bit}" for var, bit in s.items())


def encode_fine_report(r: FineReport) -> Dict[str, Any]:
    return {
        "noncontextual": r.noncontextual,
        "chsh_values": [encode_rational(v) for v in r.chsh_values],
        "chsh_satisfied": r.chsh_satisfied,
        "violated_inequality": first_violated_chsh(r.distribution),
        "interval": {
            "lower": encode_rational(r.interval.lower),
            "upper": encode_rational(r.interval.upper),
            "nonempty": r.interval.nonempty,
        },
        "weights": None if r.weights is None else {
            assignment_name(CHSH_ASSIGNMENTS[k]): encode_rational(w) for k, w in sorted(r.weights.items())
        },
        "extension": None if r.extension is None else encode_mermin(r.extension),
    }


def encode_cross_check(r: CrossCheckReport) -> Dict[str, Any]:
    negative = r.verdict.negative_entry
    return {
        "member": r.member,
        "operator_member": r.operator_member,
        "min_trace": encode_rational(r.min_trace),
        "violating_projector": r.violating_projector,
        "negative_entry": None if negative is None else {
            "context": CONTEXT_NAMES[negative[0]],
            "outcome": f"{negative[1]}{negative[2]}",
            "value": encode_rational(negative[3]),
        },
        "extension": encode_mermin(r.verdict.extension),
    }


def encode_element(g: Any) -> Dict[str, Any]:
    return encode_g1(g) if isinstance(g, G1Element) else encode_g0(g)


def encode_orbits(orbits: Sequence[Sequence[Sequence[Fraction]]], types: Callable[[Sequence[Fraction]], str]) -> List[Dict[str, Any]]:
    return [
        {"size": len(members), "type": types(members[0]), "representative": encode_point(members[0])}
        for members in orbits
    ]


def encode_stabilizer(name: str, report: StabilizerReport) -> Dict[str, Any]:
    dihedral = report.dihedral
    return {
        "vertex": name,
        "point": encode_point(report.point),
        "order": report.order,
        "dihedral": None if dihedral is None else {
            "n": dihedral.n,
            "rotation": encode_element(dihedral.rotation),
            "reflection": encode_element(dihedral.reflection),
        },
        "generators": [encode_element(g) for g in report.group.generators],
    }
