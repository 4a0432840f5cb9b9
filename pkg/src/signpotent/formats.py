"""Text and JSON serialisation of patterns and realizations."""

from __future__ import annotations

import json
from importlib import resources

from .realization import RationalMatrix
from .sign_algebra import SignMatrix

_ALLOWED = set("+-0")
_ALIASES = {"−": "-"}


class FormatError(ValueError):
    pass


def parse_pattern(text: str, generalized: bool = False) -> SignMatrix:
    """Rows are lines over ``+ - 0`` (and ``#`` when ``generalized``).

    Whitespace inside a line is ignored; blank lines are skipped.
    """
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = "".join(_ALIASES.get(ch, ch) for ch in raw if not ch.isspace())
        if not line:
            continue
        for ch in line:
            if ch == "#" and not generalized:
                raise FormatError(f"line {lineno}: '#' needs --generalized")
            if ch not in _ALLOWED and ch != "#":
                raise FormatError(f"line {lineno}: illegal character {ch!r}")
        rows.append(line)
    if not rows:
        raise FormatError("empty pattern")
    if any(len(r) != len(rows[0]) for r in rows):
        raise FormatError("ragged rows")
    if len(rows) != len(rows[0]):
        raise FormatError(f"pattern must be square, got {len(rows)}x{len(rows[0])}")
    return SignMatrix.from_rows(rows)


def format_pattern(A: SignMatrix) -> str:
    return "\n".join(A.text_rows())


def pattern_document(A: SignMatrix, name: str = None) -> dict:
    doc = {"n": A.n, "rows": A.text_rows()}
    if name:
        doc["name"] = name
    return doc


def pattern_from_document(doc: dict, generalized: bool = False) -> SignMatrix:
    if not isinstance(doc, dict) or "rows" not in doc:
        raise FormatError("JSON pattern needs a 'rows' list")
    A = parse_pattern("\n".join(doc["rows"]), generalized)
    if "n" in doc and doc["n"] != A.n:
        raise FormatError(f"declared n={doc['n']} but rows give {A.n}")
    return A


def load_pattern(source: str, generalized: bool = False) -> SignMatrix:
    """Text or JSON pattern, detected by a leading ``{``."""
    if source.lstrip().startswith("{"):
        try:
            doc = json.loads(source)
        except json.JSONDecodeError as exc:
            raise FormatError(f"invalid JSON: {exc}") from exc
        return pattern_from_document(doc, generalized)
    return parse_pattern(source, generalized)


def realization_document(B: RationalMatrix, k: int, verified: bool) -> dict:
    return {"n": B.n, "entries": B.to_strings(), "k": k, "verified": verified}


def realization_from_document(doc: dict) -> tuple:
    """``(B, k)`` from a realization document."""
    try:
        B = RationalMatrix.from_strings(doc["entries"])
        k = int(doc["k"])
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"bad realization document: {exc}") from exc
    if doc.get("n", B.n) != B.n:
        raise FormatError("declared n differs from the entries")
    return B, k


def load_schema() -> dict:
    text = resources.files("signpotent").joinpath("schemas/cli-output.schema.json").read_text()
    return json.loads(text)
