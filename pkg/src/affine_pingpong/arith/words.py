from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .matrix import AffineElement

PAIR_ALPHABET = ("a", "a^-1", "b", "b^-1")


def inverse_letter(x: int) -> int:
    """Letters of the pair alphabet are ordered a, a^-1, b, b^-1."""
    return x ^ 1


@dataclass(frozen=True)
class WordPath:
    """A word with its evaluated element.

    ``letters`` index into ``alphabet``; for words in a generating set the
    alphabet is the list of element literals, for words in a pair it is
    :data:`PAIR_ALPHABET`.
    """

    letters: tuple[int, ...]
    evaluated: AffineElement
    alphabet: tuple[str, ...] = PAIR_ALPHABET

    def __len__(self) -> int:
        return len(self.letters)

    @property
    def first(self) -> int:
        return self.letters[0]

    @property
    def last(self) -> int:
        return self.letters[-1]

    def text(self) -> str:
        if not self.letters:
            return "1"
        return " ".join(self.alphabet[i] for i in self.letters)

    def to_json(self) -> dict:
        return {"letters": list(self.letters), "text": self.text(), "element": self.evaluated.to_literal()}


def evaluate(letters: Sequence[int], images: Sequence[AffineElement]) -> AffineElement:
    g = AffineElement.identity()
    for x in letters:
        g = g * images[x]
    return g


def is_reduced(letters: Sequence[int]) -> bool:
    return all(letters[i + 1] != inverse_letter(letters[i]) for i in range(len(letters) - 1))


def reduce_word(letters: Sequence[int]) -> tuple[int, ...]:
    out: list[int] = []
    for x in letters:
        if out and out[-1] == inverse_letter(x):
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def invert_word(letters: Sequence[int]) -> tuple[int, ...]:
    return tuple(inverse_letter(x) for x in reversed(letters))
