"""Reduced words in a finitely generated free group.

Generators are printed a..z and their inverses A..Z; internally a word is a
tuple of signed 1-based generator indices, kept freely reduced at all times.
"""

from __future__ import annotations

from typing import Iterable, Sequence

MAX_PARSE_RANK = 26


class Alphabet:
    """The generating set of the free group F_n."""

    __slots__ = ("n",)

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("free rank must be at least 1")
        self.n = n

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Alphabet) and self.n == other.n

    def __hash__(self) -> int:
        return hash(("Alphabet", self.n))

    def __repr__(self) -> str:
        return f"Alphabet({self.n})"

    def letters(self) -> list["Word"]:
        """The n generators as single-letter words."""
        return [Word(self, (g,)) for g in range(1, self.n + 1)]


def _free_reduce(letters: Iterable[int]) -> tuple[int, ...]:
    out: list[int] = []
    for s in letters:
        if out and out[-1] == -s:
            out.pop()
        else:
            out.append(s)
    return tuple(out)


class Word:
    """A freely reduced word; the constructor reduces its input."""

    __slots__ = ("alphabet", "letters")

    def __init__(self, alphabet: Alphabet, letters: Sequence[int] = ()):
        for s in letters:
            if s == 0 or abs(s) > alphabet.n:
                raise ValueError(f"letter {s} out of range for rank {alphabet.n}")
        self.alphabet = alphabet
        self.letters = _free_reduce(letters)

    @classmethod
    def parse(cls, alphabet: Alphabet, text: str) -> "Word":
        """Parse the text form: a..z generators, A..Z inverses, "1" = empty."""
        if text == "1":
            return cls(alphabet, ())
        if not text or not all(c.isascii() and c.isalpha() for c in text):
            raise ValueError(f"bad word syntax: {text!r}")
        letters = []
        for c in text:
            idx = ord(c.lower()) - ord("a") + 1
            letters.append(idx if c.islower() else -idx)
        return cls(alphabet, letters)

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        if self.alphabet.n > MAX_PARSE_RANK:
            raise ValueError("no text form beyond rank 26")
        return "".join(
            chr(ord("a") + abs(s) - 1) if s > 0 else chr(ord("A") + abs(s) - 1)
            for s in self.letters
        )

    def __repr__(self) -> str:
        return f"Word({self})"

    def __len__(self) -> int:
        return len(self.letters)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Word)
            and self.alphabet == other.alphabet
            and self.letters == other.letters
        )

    def __hash__(self) -> int:
        return hash((self.alphabet, self.letters))

    def __mul__(self, other: "Word") -> "Word":
        if self.alphabet != other.alphabet:
            raise ValueError("alphabet mismatch")
        return Word(self.alphabet, self.letters + other.letters)

    def __invert__(self) -> "Word":
        return Word(self.alphabet, tuple(-s for s in reversed(self.letters)))

    def __pow__(self, k: int) -> "Word":
        base = self if k >= 0 else ~self
        out = Word(self.alphabet)
        for _ in range(abs(k)):
            out = out * base
        return out

    def is_identity(self) -> bool:
        return not self.letters

    def exponent_sum(self, g: int) -> int:
        """Signed number of occurrences of generator g (a homomorphism to Z)."""
        if not 1 <= g <= self.alphabet.n:
            raise ValueError(f"generator {g} out of range")
        return sum(1 if s == g else -1 if s == -g else 0 for s in self.letters)

    def abelianize(self) -> tuple[int, ...]:
        """Image under F_n -> Z^n."""
        vec = [0] * self.alphabet.n
        for s in self.letters:
            vec[abs(s) - 1] += 1 if s > 0 else -1
        return tuple(vec)
