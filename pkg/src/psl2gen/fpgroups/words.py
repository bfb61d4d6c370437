"""Words in free groups and the plain-text presentation format.

Format::

    # comment
    gens: a b
    rel: a^2
    rel: (a b)^3 b'

An atom is ``name``, ``name'`` (inverse), ``name^k`` or ``(word)^k`` with
integer k >= 1; a bare ``1`` is the empty word.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from ..errors import DomainError

Letter = tuple[int, int]


@dataclass(frozen=True)
class Word:
    letters: tuple[Letter, ...] = ()

    def __post_init__(self):
        for g, e in self.letters:
            if e not in (1, -1) or g < 0:
                raise DomainError(f"bad letter ({g}, {e})")

    @classmethod
    def of(cls, *items) -> Word:
        """Word.of(0, 1, -2) -> x0 x1 x1^-1 ... using signed 1-based ints."""
        out = []
        for it in items:
            g = abs(it) - 1
            out.append((g, 1 if it > 0 else -1))
        return cls(tuple(out))

    @classmethod
    def from_gens(cls, gens: Iterable[int]) -> Word:
        return cls(tuple((g, 1) for g in gens))

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __mul__(self, other: Word) -> Word:
        return Word(self.letters + other.letters)

    def __pow__(self, k: int) -> Word:
        if k < 0:
            return self.inverse() ** (-k)
        return Word(self.letters * k)

    def inverse(self) -> Word:
        return Word(tuple((g, -e) for g, e in reversed(self.letters)))

    def reduced(self) -> Word:
        out: list[Letter] = []
        for g, e in self.letters:
            if out and out[-1] == (g, -e):
                out.pop()
            else:
                out.append((g, e))
        return Word(tuple(out))

    def cyclically_reduced(self) -> Word:
        ls = list(self.reduced().letters)
        while len(ls) >= 2 and ls[0] == (ls[-1][0], -ls[-1][1]):
            ls = ls[1:-1]
        return Word(tuple(ls))

    def rename(self, mapping: Sequence[int]) -> Word:
        return Word(tuple((mapping[g], e) for g, e in self.letters))

    def max_generator(self) -> int:
        return max((g for g, _ in self.letters), default=-1)

    def columns(self) -> list[int]:
        """Coset-table columns: generator i -> 2i, its inverse -> 2i+1."""
        return [2 * g + (0 if e > 0 else 1) for g, e in self.letters]

    def evaluate(self, images: Sequence, identity, inverse=None):
        """Evaluate in a concrete group given generator images."""
        out = identity
        for g, e in self.letters:
            x = images[g]
            if e < 0:
                x = inverse(x) if inverse is not None else x ** -1
            out = out * x
        return out

    def __repr__(self):
        return f"Word({format_word(self)})"


def format_word(w: Word, names: Sequence[str] | None = None) -> str:
    if not w.letters:
        return "1"
    n = w.max_generator() + 1
    names = names or [f"x{i + 1}" for i in range(n)]
    root, k = _primitive_root(w.letters)
    if k > 1 and len(root) > 1:
        return f"({_format_runs(root, names)})^{k}"
    return _format_runs(w.letters, names)


def _format_runs(letters, names) -> str:
    parts = []
    i = 0
    while i < len(letters):
        j = i
        while j < len(letters) and letters[j] == letters[i]:
            j += 1
        g, e = letters[i]
        run = j - i
        if e > 0:
            parts.append(names[g] if run == 1 else f"{names[g]}^{run}")
        else:
            parts.extend([names[g] + "'"] * run)
        i = j
    return " ".join(parts)


def _primitive_root(letters):
    n = len(letters)
    for d in range(1, n + 1):
        if n % d == 0 and letters == letters[:d] * (n // d):
            return letters[:d], n // d
    return letters, 1


# ------------------------------------------------------------------ parsing


class PresentationSyntaxError(DomainError):
    def __init__(self, message, line, column):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


_TOKEN = re.compile(r"\s*(?:(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<sym>[()'^])|(?P<int>\d+))")


def _tokenize(text: str, line: int, offset: int):
    pos = 0
    toks = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            col = offset + pos + len(text[pos:]) - len(text[pos:].lstrip()) + 1
            raise PresentationSyntaxError(f"unexpected character {text[pos:].lstrip()[:1]!r}", line, col)
        kind = m.lastgroup
        start = m.start(kind)
        toks.append((kind, m.group(kind), offset + start + 1))
        pos = m.end()
    return toks


class _WordParser:
    def __init__(self, toks, gens: dict, line: int, end_col: int):
        self.toks = toks
        self.i = 0
        self.gens = gens
        self.line = line
        self.end_col = end_col

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def error(self, msg, col=None):
        if col is None:
            t = self.peek()
            col = t[2] if t else self.end_col
        raise PresentationSyntaxError(msg, self.line, col)

    def parse_word(self, closing: bool = False) -> list[Letter]:
        letters: list[Letter] = []
        while True:
            t = self.peek()
            if t is None:
                return letters
            if t[0] == "sym" and t[1] == ")":
                if closing:
                    return letters
                self.error("unmatched ')'")
            letters.extend(self.parse_atom())

    def parse_exponent(self) -> int:
        t = self.peek()
        if t and t[0] == "sym" and t[1] == "^":
            self.take()
            n = self.take()
            if n is None or n[0] != "int":
                self.error("expected a positive integer exponent after '^'", n[2] if n else None)
            k = int(n[1])
            if k < 1:
                self.error("exponent must be >= 1", n[2])
            return k
        return 1

    def parse_atom(self) -> list[Letter]:
        t = self.take()
        kind, val, col = t
        if kind == "name":
            if val not in self.gens:
                raise PresentationSyntaxError(f"unknown generator {val!r}", self.line, col)
            letter = (self.gens[val], 1)
            nt = self.peek()
            if nt and nt[0] == "sym" and nt[1] == "'":
                self.take()
                letter = (letter[0], -1)
            return [letter] * self.parse_exponent()
        if kind == "sym" and val == "(":
            inner = self.parse_word(closing=True)
            close = self.take()
            if close is None:
                raise PresentationSyntaxError("unclosed '('", self.line, col)
            k = self.parse_exponent()
            return inner * k
        if kind == "int" and val == "1":
            return []  # the identity, as written by format_word
        raise PresentationSyntaxError(f"unexpected {val!r}", self.line, col)


def parse_word(text: str, gen_names: Sequence[str], line: int = 1, offset: int = 0) -> Word:
    gens = {n: i for i, n in enumerate(gen_names)}
    toks = _tokenize(text, line, offset)
    parser = _WordParser(toks, gens, line, offset + len(text) + 1)
    letters = parser.parse_word()
    if parser.peek() is not None:
        parser.error("trailing input")
    return Word(tuple(letters))
