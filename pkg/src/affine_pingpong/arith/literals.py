"""Text and document formats for affine elements.

Text form, one element per line::

    # comment
    1 2 0 1 | 0 0
    1 0 2 1 | 0 1

The ``| tx ty`` part may be omitted for a zero translation.  The document
form is JSON: ``{"elements": ["1 2 0 1 | 0 0", ...]}`` or a list of objects
``{"linear": [[a11, a12], [a21, a22]], "translation": [tx, ty]}``.
"""

from __future__ import annotations

import json
import re

from ..errors import ParseError
from .matrix import AffineElement, Mat2

_INT = re.compile(r"[+-]?\d+")


def _ints(text: str, line: int, offset: int, expected: int) -> list[int]:
    out = []
    pos = 0
    for tok in text.split():
        col = text.index(tok, pos)
        pos = col + len(tok)
        if not _INT.fullmatch(tok):
            raise ParseError(f"expected an integer, got {tok!r}", line, offset + col + 1)
        out.append(int(tok))
    if len(out) != expected:
        raise ParseError(f"expected {expected} integers, got {len(out)}", line, offset + 1)
    return out


def parse_element(text: str, line: int | None = None) -> AffineElement:
    linear_txt, bar, trans_txt = text.partition("|")
    a11, a12, a21, a22 = _ints(linear_txt, line, 0, 4)
    tx, ty = _ints(trans_txt, line, len(linear_txt) + 1, 2) if bar else (0, 0)
    det = a11 * a22 - a12 * a21
    if det != 1:
        raise ParseError(f"linear part has determinant {det}, expected 1", line, 1)
    return AffineElement(Mat2(a11, a12, a21, a22), (tx, ty))


def parse_text(text: str) -> list[AffineElement]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        out.append(parse_element(body, lineno))
    if not out:
        raise ParseError("input contains no elements")
    return out


def _from_object(obj, index: int) -> AffineElement:
    if isinstance(obj, str):
        return parse_element(obj, index)
    try:
        (a11, a12), (a21, a22) = obj["linear"]
        tx, ty = obj.get("translation", (0, 0))
        vals = [a11, a12, a21, a22, tx, ty]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed element object: {exc}", index) from None
    if not all(isinstance(v, int) for v in vals):
        raise ParseError("element entries must be integers", index)
    if a11 * a22 - a12 * a21 != 1:
        raise ParseError("linear part must have determinant 1", index)
    return AffineElement(Mat2(a11, a12, a21, a22), (tx, ty))


def parse_document(text: str) -> list[AffineElement]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    items = data.get("elements") if isinstance(data, dict) else data
    if not isinstance(items, list):
        raise ParseError("document needs an 'elements' list")
    out = [_from_object(obj, i + 1) for i, obj in enumerate(items)]
    if not out:
        raise ParseError("input contains no elements")
    return out


def parse_set(text: str) -> list[AffineElement]:
    """Parse either format, chosen by the first non-blank character."""
    stripped = text.lstrip()
    if stripped.startswith("{") or stripped.startswith("["):
        return parse_document(text)
    return parse_text(text)


def format_set(elements) -> str:
    return "".join(g.to_literal() + "\n" for g in elements)
