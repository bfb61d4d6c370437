from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from ..errors import DomainError
from .words import PresentationSyntaxError, Word, format_word, parse_word


@dataclass(frozen=True)
class Presentation:
    generator_count: int
    relators: tuple[Word, ...] = ()
    names: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if not self.names:
            object.__setattr__(self, "names", tuple(f"x{i + 1}" for i in range(self.generator_count)))
        if len(self.names) != self.generator_count:
            raise DomainError("one name per generator")
        for r in self.relators:
            if r.max_generator() >= self.generator_count:
                raise DomainError(f"relator uses generator {r.max_generator()} >= {self.generator_count}")

    def with_relators(self, extra: Sequence[Word]) -> Presentation:
        return Presentation(self.generator_count, self.relators + tuple(extra), self.names)

    def __str__(self):
        return serialize_presentation(self)


def parse_presentation(text: str) -> Presentation:
    names: list[str] | None = None
    rels: list[Word] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        head, sep, body = line.partition(":")
        key = head.strip()
        offset = len(head) + len(sep)
        if not sep or key not in ("gens", "rel"):
            col = len(raw) - len(raw.lstrip()) + 1
            raise PresentationSyntaxError("expected 'gens:' or 'rel:'", lineno, col)
        if key == "gens":
            if names is not None:
                raise PresentationSyntaxError("duplicate 'gens:' line", lineno, 1)
            names = body.split()
            if len(set(names)) != len(names):
                raise PresentationSyntaxError("duplicate generator name", lineno, offset + 1)
            for n in names:
                if not n.replace("_", "a").isalnum() or n[0].isdigit():
                    raise PresentationSyntaxError(f"bad generator name {n!r}", lineno, offset + body.index(n) + 1)
        else:
            if names is None:
                raise PresentationSyntaxError("'rel:' before 'gens:'", lineno, 1)
            rels.append(parse_word(body, names, lineno, offset))
    if names is None:
        raise PresentationSyntaxError("missing 'gens:' line", 1, 1)
    return Presentation(len(names), tuple(rels), tuple(names))


def serialize_presentation(pres: Presentation) -> str:
    lines = ["gens: " + " ".join(pres.names)]
    for r in pres.relators:
        lines.append("rel: " + format_word(r, pres.names))
    return "\n".join(lines) + "\n"


def load_presentation(path) -> Presentation:
    return parse_presentation(Path(path).read_text())


# small library used by tests and the CLI
LIBRARY = {
    "S3": "gens: a b\nrel: a^2\nrel: b^3\nrel: (a b)^2\n",
    "A4": "gens: a b\nrel: a^2\nrel: b^3\nrel: (a b)^3\n",
    "S4": "gens: a b\nrel: a^2\nrel: b^3\nrel: (a b)^4\n",
    "A5": "gens: a b\nrel: a^2\nrel: b^3\nrel: (a b)^5\n",
}


def library(name: str) -> Presentation:
    return parse_presentation(LIBRARY[name])
