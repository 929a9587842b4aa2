"""Reduced words in a free group and their evaluation under a representation."""

from __future__ import annotations

import re
import string
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from . import core
from .core import ProjectiveElement
from .errors import BallTooLarge, DuplicateLabel, IndexOutOfRange, ParseError

BALL_CAP = 10**6


def reduce(syllables: Iterable[tuple[int, int]]) -> "Word":
    stack: list[list[int]] = []
    for index, exponent in syllables:
        index, exponent = int(index), int(exponent)
        if exponent == 0:
            continue
        if stack and stack[-1][0] == index:
            stack[-1][1] += exponent
            if stack[-1][1] == 0:
                stack.pop()
        else:
            stack.append([index, exponent])
    return Word(tuple((i, e) for i, e in stack))


@dataclass(frozen=True)
class Word:
    """A freely reduced word, as (generator index, nonzero exponent) syllables.

    Use `reduce` to build one from arbitrary syllables.
    """

    syllables: tuple[tuple[int, int], ...] = ()

    def __len__(self):
        return sum(abs(e) for _, e in self.syllables)

    def __bool__(self):
        return bool(self.syllables)

    def __mul__(self, other: "Word") -> "Word":
        return reduce(self.syllables + other.syllables)

    def __invert__(self) -> "Word":
        return Word(tuple((i, -e) for i, e in reversed(self.syllables)))

    def __pow__(self, n: int) -> "Word":
        base = self if n >= 0 else ~self
        return reduce(base.syllables * abs(n))

    def letters(self) -> list[tuple[int, int]]:
        """Expanded letters as (index, +1 or -1)."""
        out = []
        for i, e in self.syllables:
            out.extend([(i, 1 if e > 0 else -1)] * abs(e))
        return out

    def max_index(self) -> int:
        return max((i for i, _ in self.syllables), default=-1)

    def format(self, labels: Optional[Sequence[str]] = None) -> str:
        if not self.syllables:
            return "1"
        if labels is None:
            labels = default_labels(self.max_index() + 1)
        spaced = any(len(lab) != 1 for lab in labels)
        tokens = []
        for i, e in self.syllables:
            lab = labels[i]
            if e == 1:
                tokens.append(lab)
            elif e == -1 and _has_case_inverse(lab, labels):
                tokens.append(lab.upper())
            else:
                tokens.append(f"{lab}^{e}")
        return (" " if spaced else "").join(tokens)

    def __str__(self):
        return self.format()


EMPTY = Word()


def generator(index: int, exponent: int = 1) -> Word:
    return reduce([(index, exponent)])


def default_labels(n: int) -> list[str]:
    if n <= 26:
        return list(string.ascii_lowercase[:n])
    return [f"g{i}" for i in range(n)]


def _has_case_inverse(label, labels):
    return len(label) == 1 and label.islower() and label.upper() not in labels


def parse_word(text: str, labels: Optional[Sequence[str]] = None) -> Word:
    """Parse e.g. "abA", "a b a^-1" or "ab^-1a".

    token = label ('^' signed-integer)?; an uppercase single-letter label
    stands for the inverse of its lowercase form.  "1" or "" is the identity.
    """
    if labels is None:
        labels = default_labels(26)
    text = text.strip()
    if text in ("", "1"):
        return EMPTY
    lookup = {lab: (i, 1) for i, lab in enumerate(labels)}
    for i, lab in enumerate(labels):
        if _has_case_inverse(lab, labels):
            lookup[lab.upper()] = (i, -1)
    alternatives = "|".join(re.escape(k) for k in sorted(lookup, key=len, reverse=True))
    token = re.compile(rf"\s*({alternatives})(?:\s*\^\s*([+-]?\d+))?\s*")
    syllables = []
    pos = 0
    while pos < len(text):
        m = token.match(text, pos)
        if m is None or m.end() == pos:
            raise ParseError(f"cannot parse word {text!r} at position {pos}")
        index, sign = lookup[m.group(1)]
        exp = int(m.group(2)) if m.group(2) is not None else 1
        syllables.append((index, sign * exp))
        pos = m.end()
    return reduce(syllables)


@dataclass(frozen=True)
class Representation:
    """A homomorphism from the free group on n letters, given on generators."""

    generators: tuple[ProjectiveElement, ...]
    labels: Optional[tuple[str, ...]] = None
    _powers: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        if not self.generators:
            raise ValueError("a representation needs at least one generator")
        if self.labels is not None:
            labels = tuple(self.labels)
            if len(labels) != len(self.generators):
                raise ValueError("labels and generators differ in length")
            if len(set(labels)) != len(labels):
                raise DuplicateLabel(f"duplicate labels in {labels}")
            object.__setattr__(self, "labels", labels)

    def __len__(self):
        return len(self.generators)

    @property
    def label_list(self) -> list[str]:
        if self.labels is not None:
            return list(self.labels)
        return default_labels(len(self.generators))

    def conjugated(self, h: ProjectiveElement) -> "Representation":
        """The representation h rho h^-1."""
        return Representation(tuple(core.conjugate(h, g) for g in self.generators), self.labels)

    def power(self, index: int, exponent: int) -> ProjectiveElement:
        key = (index, exponent)
        cached = self._powers.get(key)
        if cached is None:
            cached = core.power(self.generators[index], exponent)
            self._powers[key] = cached
        return cached


def evaluate(rho: Representation, w: Word) -> ProjectiveElement:
    n = len(rho.generators)
    result = core.IDENTITY
    for index, exponent in w.syllables:
        if not 0 <= index < n:
            raise IndexOutOfRange(f"generator index {index} out of range for {n} generators")
        result = core.compose(result, rho.power(index, exponent))
    return result


def ball_size(n_generators: int, radius: int) -> int:
    total, layer = 1, 2 * n_generators
    for _ in range(radius):
        total += layer
        layer *= 2 * n_generators - 1
    return total


def enumerate_ball(n_generators: int, radius: int, cap: int = BALL_CAP) -> list[Word]:
    """All reduced words of length <= radius.

    Ordered by length, then lexicographically with a < a^-1 < b < b^-1 < ...
    """
    if n_generators < 1 or radius < 0:
        raise ValueError("need n_generators >= 1 and radius >= 0")
    count = ball_size(n_generators, radius)
    if count > cap:
        raise BallTooLarge(count, cap)
    alphabet = [(i, s) for i in range(n_generators) for s in (1, -1)]
    out = [EMPTY]
    layer: list[tuple[tuple[int, int], ...]] = [()]
    for _ in range(radius):
        nxt = []
        for letters in layer:
            for letter in alphabet:
                if letters and letters[-1] == (letter[0], -letter[1]):
                    continue
                nxt.append(letters + (letter,))
        layer = nxt
        out.extend(reduce(letters) for letters in layer)
    return out
