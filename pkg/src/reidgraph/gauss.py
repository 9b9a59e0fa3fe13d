"""Classical Gauss codes: parsing, validation, normalization, serialization.

A Gauss code records the crossings met while running once along a knot
diagram, each crossing appearing twice with opposite over/under signs.
The numeric interchange format is whitespace-separated nonzero integers
(negative = under, positive = over); a parenthesized letter form such as
``(-A)(+B)(-A)(+B)`` is accepted on input only.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

OVER = 1
UNDER = -1


class GaussCodeError(ValueError):
    """Base class for malformed Gauss codes."""


class GaussSyntaxError(GaussCodeError):
    """Input text is not in either accepted format."""


class ZeroLabelError(GaussCodeError):
    """A crossing label of 0 appeared (labels must be nonzero)."""


class LabelCountError(GaussCodeError):
    """Some label does not occur exactly twice."""


class PassMismatchError(GaussCodeError):
    """The two occurrences of a label have the same over/under sign."""


_LETTER_TOKEN = re.compile(r"\(\s*([+-]?)\s*([A-Za-z]+)\s*\)")


@dataclass(frozen=True)
class GaussCode:
    """A validated, label-normalized Gauss code.

    ``entries`` is a sequence of (label, sign) pairs with sign ``OVER`` or
    ``UNDER``; labels are 1..n in order of first occurrence.  The empty
    code denotes the trivial zero-crossing diagram.
    """

    entries: tuple[tuple[int, int], ...]

    @property
    def crossings(self) -> int:
        return len(self.entries) // 2

    def __len__(self) -> int:
        return len(self.entries)

    def __str__(self) -> str:
        return serialize_gauss(self)


def _validate_and_normalize(raw: list[tuple[int, int]]) -> GaussCode:
    first_pass: dict[int, int] = {}
    seen_twice: set[int] = set()
    order: list[int] = []
    for label, sign in raw:
        if label == 0:
            raise ZeroLabelError("crossing label 0 is not allowed")
        if label not in first_pass:
            first_pass[label] = sign
            order.append(label)
        elif label in seen_twice:
            raise LabelCountError(f"label {label} occurs more than twice")
        else:
            if first_pass[label] == sign:
                raise PassMismatchError(
                    f"label {label} occurs twice with the same sign"
                )
            seen_twice.add(label)
    missing = [lab for lab in order if lab not in seen_twice]
    if missing:
        raise LabelCountError(f"label {missing[0]} occurs only once")
    relabel = {old: new for new, old in enumerate(order, start=1)}
    return GaussCode(tuple((relabel[lab], sign) for lab, sign in raw))


def parse_gauss(text: str) -> GaussCode:
    """Parse a Gauss code from numeric or parenthesized-letter text.

    Whitespace (including newlines) is insignificant.  Empty input gives
    the empty code.  Raises a GaussCodeError subclass on invalid input.
    """
    stripped = text.strip()
    if not stripped:
        return GaussCode(())
    if "(" in stripped:
        consumed = 0
        raw_letters: list[tuple[str, int]] = []
        for m in _LETTER_TOKEN.finditer(stripped):
            if stripped[consumed : m.start()].strip():
                raise GaussSyntaxError(
                    f"unexpected text {stripped[consumed:m.start()]!r}"
                )
            sign, letter = m.group(1), m.group(2)
            raw_letters.append((letter, UNDER if sign == "-" else OVER))
            consumed = m.end()
        if stripped[consumed:].strip():
            raise GaussSyntaxError(f"unexpected text {stripped[consumed:]!r}")
        numbering: dict[str, int] = {}
        raw = []
        for letter, sign in raw_letters:
            if letter not in numbering:
                numbering[letter] = len(numbering) + 1
            raw.append((numbering[letter], sign))
        return _validate_and_normalize(raw)
    raw = []
    for token in stripped.split():
        try:
            value = int(token)
        except ValueError:
            raise GaussSyntaxError(f"bad token {token!r}") from None
        raw.append((abs(value), UNDER if value < 0 else OVER))
    return _validate_and_normalize(raw)


def serialize_gauss(code: GaussCode) -> str:
    """Render a code as whitespace-separated signed integers."""
    return " ".join(
        str(label) if sign == OVER else str(-label)
        for label, sign in code.entries
    )


def rotate_basepoint(code: GaussCode, k: int) -> GaussCode:
    """Cyclically shift the reading basepoint by k entries and renormalize."""
    if not code.entries:
        return code
    k %= len(code.entries)
    shifted = code.entries[k:] + code.entries[:k]
    return _validate_and_normalize(list(shifted))


def parity_check(code: GaussCode) -> bool:
    """Evenness test: each label encloses an even number of entries.

    A necessary (not sufficient) condition for a code to be realizable as
    a knot diagram; cheap pre-filter before attempting realization.
    """
    position: dict[int, int] = {}
    for i, (label, _) in enumerate(code.entries):
        if label in position:
            if (i - position[label] - 1) % 2 != 0:
                return False
        else:
            position[label] = i
    return True
