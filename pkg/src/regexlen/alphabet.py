"""Finite alphabets.

Characters are addressed by their index in the sorted alphabet so automaton
transition labels can be kept as closed integer intervals.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Alphabet:
    chars: str
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        ordered = "".join(sorted(set(self.chars)))
        if not ordered:
            raise ValueError("alphabet must not be empty")
        object.__setattr__(self, "chars", ordered)
        object.__setattr__(self, "_index", {c: i for i, c in enumerate(ordered)})

    @classmethod
    def ascii_printable(cls) -> "Alphabet":
        return cls("".join(chr(c) for c in range(0x20, 0x7F)))

    @classmethod
    def parse(cls, spec: str) -> "Alphabet":
        """Parse ``ascii-printable`` or ``custom:<chars>``."""
        if spec == "ascii-printable":
            return cls.ascii_printable()
        if spec.startswith("custom:") and len(spec) > len("custom:"):
            return cls(spec[len("custom:"):])
        raise ValueError(f"unknown alphabet spec {spec!r}")

    @property
    def size(self) -> int:
        return len(self.chars)

    def __len__(self):
        return len(self.chars)

    def __contains__(self, c):
        return c in self._index

    def index(self, c: str) -> int:
        try:
            return self._index[c]
        except KeyError:
            raise ValueError(f"character {c!r} is not in the alphabet") from None

    def char(self, i: int) -> str:
        return self.chars[i]

    def first(self) -> str:
        return self.chars[0]
