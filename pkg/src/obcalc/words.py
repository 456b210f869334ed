"""Words in free groups and endomorphisms given by generator images.

Generators are single lowercase ASCII letters; the inverse of ``x`` is
written ``X``.  The empty word is rendered ``"1"``.

>>> w = Word("baB")
>>> w * Word("bAB")
Word('bB')

Words are kept freely reduced at all times, so equality of group elements of
the free group is plain string equality.
"""

from __future__ import annotations

import string
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass

__all__ = [
    "AlphabetError",
    "Word",
    "Endomorphism",
    "reduce",
    "invert",
    "concat",
    "cyclic_reduce",
    "apply_endo",
    "compose_endos",
    "exponent_sums",
    "equal_endo",
    "parse_endomorphism",
    "format_endomorphism",
]


class AlphabetError(ValueError):
    """A letter outside the declared alphabet, or two alphabets that differ."""


def _is_inverse_pair(x: str, y: str) -> bool:
    return x != y and x.lower() == y.lower()


def _free_reduce(letters: Iterable[str]) -> str:
    out: list[str] = []
    for c in letters:
        if out and _is_inverse_pair(out[-1], c):
            out.pop()
        else:
            out.append(c)
    return "".join(out)


def _check_letters(s: str, alphabet: Iterable[str] | None = None) -> None:
    allowed = None if alphabet is None else set(alphabet)
    for c in s:
        if c not in string.ascii_letters:
            raise AlphabetError(f"bad letter {c!r} in {s!r}")
        if allowed is not None and c.lower() not in allowed:
            raise AlphabetError(f"letter {c!r} not in alphabet {sorted(allowed)}")


class Word:
    """A freely reduced word.  Immutable and hashable."""

    __slots__ = ("_s",)

    def __init__(self, letters: str | Word = "", alphabet: Iterable[str] | None = None):
        if isinstance(letters, Word):
            s = letters._s
        else:
            s = "" if letters == "1" else letters.replace(" ", "")
            _check_letters(s, alphabet)
            s = _free_reduce(s)
        object.__setattr__(self, "_s", s)

    def __setattr__(self, name, value):
        raise AttributeError("Word is immutable")

    @classmethod
    def _trusted(cls, s: str) -> Word:
        w = object.__new__(cls)
        object.__setattr__(w, "_s", s)
        return w

    @property
    def letters(self) -> str:
        return self._s

    def generators(self) -> set[str]:
        return {c.lower() for c in self._s}

    def __str__(self) -> str:
        return self._s or "1"

    def __repr__(self) -> str:
        return f"Word({str(self)!r})"

    def __len__(self) -> int:
        return len(self._s)

    def __iter__(self):
        return iter(self._s)

    def __bool__(self) -> bool:
        return bool(self._s)

    def __eq__(self, other) -> bool:
        if isinstance(other, Word):
            return self._s == other._s
        if isinstance(other, str):
            return self._s == ("" if other == "1" else other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._s)

    def __mul__(self, other: Word | str) -> Word:
        other = other if isinstance(other, Word) else Word(other)
        a, b = self._s, other._s
        # only the junction can cancel
        i = 0
        while i < len(a) and i < len(b) and _is_inverse_pair(a[-1 - i], b[i]):
            i += 1
        return Word._trusted(a[: len(a) - i] + b[i:])

    def __invert__(self) -> Word:
        return Word._trusted(self._s[::-1].swapcase())

    def __pow__(self, n: int) -> Word:
        base = self if n >= 0 else ~self
        out = Word()
        for _ in range(abs(n)):
            out = out * base
        return out

    def inverse(self) -> Word:
        return ~self

    def is_cyclically_reduced(self) -> bool:
        s = self._s
        return len(s) < 2 or not _is_inverse_pair(s[0], s[-1])

    def rotations(self) -> list[Word]:
        s = self._s
        return [Word._trusted(s[i:] + s[:i]) for i in range(max(len(s), 1))]


def reduce(letters: str | Sequence[tuple[str, int]], alphabet: Iterable[str] | None = None) -> Word:
    """Freely reduce a raw letter sequence.

    ``letters`` is either a string (uppercase = inverse) or a sequence of
    ``(generator, ±1)`` pairs.
    """
    if not isinstance(letters, str):
        parts = []
        for g, e in letters:
            if e not in (1, -1) or len(g) != 1:
                raise AlphabetError(f"bad signed generator {(g, e)!r}")
            parts.append(g.lower() if e == 1 else g.upper())
        letters = "".join(parts)
    return Word(letters, alphabet)


def invert(w: Word) -> Word:
    return ~w


def concat(w1: Word, w2: Word) -> Word:
    return w1 * w2


def cyclic_reduce(w: Word) -> tuple[Word, Word]:
    """Split ``w`` as ``u * core * u^-1`` with ``core`` cyclically reduced.

    Returns ``(core, u)``.
    """
    s = w.letters
    i, j = 0, len(s)
    while j - i >= 2 and _is_inverse_pair(s[i], s[j - 1]):
        i += 1
        j -= 1
    return Word._trusted(s[i:j]), Word._trusted(s[:i])


@dataclass(frozen=True)
class Endomorphism:
    """Endomorphism of the free group on ``alphabet``, fixed by generator images.

    Composition convention everywhere in this package: ``(f ∘ g)(x) = f(g(x))``,
    the right factor acts first.
    """

    alphabet: tuple[str, ...]
    images: tuple[Word, ...]

    def __post_init__(self):
        if len(self.alphabet) != len(self.images):
            raise AlphabetError("one image per generator required")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise AlphabetError(f"repeated generator in {self.alphabet}")
        for g in self.alphabet:
            if len(g) != 1 or g not in string.ascii_lowercase:
                raise AlphabetError(f"bad generator name {g!r}")
        for im in self.images:
            if not im.generators() <= set(self.alphabet):
                raise AlphabetError(f"image {im} leaves alphabet {self.alphabet}")

    @classmethod
    def from_mapping(cls, images: Mapping[str, Word | str], alphabet: Sequence[str] | None = None) -> Endomorphism:
        alphabet = tuple(alphabet) if alphabet is not None else tuple(sorted(images))
        missing = set(alphabet) - set(images)
        if missing:
            raise AlphabetError(f"no image for {sorted(missing)}")
        extra = set(images) - set(alphabet)
        if extra:
            raise AlphabetError(f"images for unknown generators {sorted(extra)}")
        return cls(alphabet, tuple(Word(images[g]) for g in alphabet))

    @classmethod
    def identity(cls, alphabet: Sequence[str]) -> Endomorphism:
        return cls(tuple(alphabet), tuple(Word(g) for g in alphabet))

    @classmethod
    def conjugation(cls, u: Word | str, alphabet: Sequence[str]) -> Endomorphism:
        """The inner automorphism ``x -> u x u^-1``."""
        u = Word(u)
        return cls(tuple(alphabet), tuple(u * Word(g) * ~u for g in alphabet))

    def __getitem__(self, g: str) -> Word:
        return self.images[self.alphabet.index(g)]

    def as_dict(self) -> dict[str, Word]:
        return dict(zip(self.alphabet, self.images))

    def __call__(self, w: Word | str) -> Word:
        return apply_endo(self, Word(w))

    def __matmul__(self, other: Endomorphism) -> Endomorphism:
        return compose_endos(self, other)

    def __pow__(self, n: int) -> Endomorphism:
        if n < 0:
            raise ValueError("negative powers need an inverse; see mcg.CatalogAction")
        out = Endomorphism.identity(self.alphabet)
        for _ in range(n):
            out = compose_endos(out, self)
        return out

    def __str__(self) -> str:
        return "; ".join(f"{g} -> {im}" for g, im in zip(self.alphabet, self.images))


def apply_endo(f: Endomorphism, w: Word) -> Word:
    if not w.generators() <= set(f.alphabet):
        raise AlphabetError(f"{w} is not over {f.alphabet}")
    table = {}
    for g, im in zip(f.alphabet, f.images):
        table[g] = im.letters
        table[g.upper()] = (~im).letters
    return Word._trusted(_free_reduce("".join(table[c] for c in w.letters)))


def _same_alphabet(f: Endomorphism, g: Endomorphism) -> None:
    if f.alphabet != g.alphabet:
        raise AlphabetError(f"alphabets differ: {f.alphabet} vs {g.alphabet}")


def compose_endos(f: Endomorphism, g: Endomorphism) -> Endomorphism:
    """``f ∘ g``: apply ``g`` first."""
    _same_alphabet(f, g)
    return Endomorphism(f.alphabet, tuple(apply_endo(f, im) for im in g.images))


def exponent_sums(w: Word, alphabet: Sequence[str] | None = None) -> dict[str, int]:
    alphabet = sorted(w.generators()) if alphabet is None else list(alphabet)
    sums = {g: 0 for g in alphabet}
    for c in w.letters:
        g = c.lower()
        if g not in sums:
            raise AlphabetError(f"{w} is not over {alphabet}")
        sums[g] += 1 if c == g else -1
    return sums


def equal_endo(f: Endomorphism, g: Endomorphism) -> bool:
    _same_alphabet(f, g)
    return f.images == g.images


def parse_endomorphism(text: str, alphabet: Sequence[str] | None = None) -> Endomorphism:
    """Parse ``x -> word`` lines (``;`` also separates entries)."""
    images: dict[str, Word] = {}
    for raw in text.replace(";", "\n").splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "->" not in line:
            raise ValueError(f"expected 'x -> word', got {raw!r}")
        lhs, rhs = (part.strip() for part in line.split("->", 1))
        if len(lhs) != 1 or lhs not in string.ascii_lowercase:
            raise AlphabetError(f"bad generator {lhs!r}")
        if lhs in images:
            raise ValueError(f"two images for {lhs!r}")
        images[lhs] = Word(rhs)
    return Endomorphism.from_mapping(images, alphabet)


def format_endomorphism(f: Endomorphism) -> str:
    return "".join(f"{g} -> {im}\n" for g, im in zip(f.alphabet, f.images))
