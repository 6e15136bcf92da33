"""Third-order social norms over binary reputations.

A norm is a rule f(x, a, y) -> {Good, Bad} assigning the dictator a new
reputation from the dictator's current reputation x, the realized action a,
and the recipient's reputation y.  With two reputations and two actions
there are 2^8 = 256 norms.  Each norm is identified by an 8-bit label whose
bits, from most to least significant, are

    f(G,F,G) f(G,U,G) f(B,F,G) f(B,U,G) f(G,F,B) f(G,U,B) f(B,F,B) f(B,U,B)

and written out as a 2x4 matrix ``[b7,b6,b5,b4;b3,b2,b1,b0]`` with the row
for good recipients first.  Example: ``[1,0,1,0;0,1,0,1]`` has label 165.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class Reputation(Enum):
    GOOD = "G"
    BAD = "B"

    @property
    def word(self) -> str:
        return "Good" if self is Reputation.GOOD else "Bad"

    @classmethod
    def parse(cls, text: str) -> "Reputation":
        t = text.strip().upper()
        if t in ("G", "GOOD"):
            return cls.GOOD
        if t in ("B", "BAD"):
            return cls.BAD
        raise ValueError(f"not a reputation: {text!r}")

    def __str__(self) -> str:
        return self.value


class Action(Enum):
    FAIR = "F"
    UNFAIR = "U"

    @property
    def word(self) -> str:
        return "Fair" if self is Action.FAIR else "Unfair"

    @classmethod
    def parse(cls, text: str) -> "Action":
        t = text.strip().upper()
        if t in ("F", "FAIR"):
            return cls.FAIR
        if t in ("U", "UNFAIR"):
            return cls.UNFAIR
        raise ValueError(f"not an action: {text!r}")

    def __str__(self) -> str:
        return self.value


GOOD = Reputation.GOOD
BAD = Reputation.BAD
FAIR = Action.FAIR
UNFAIR = Action.UNFAIR

# Contexts (x, a, y) in label-bit order, most significant first.
BIT_CONTEXTS: tuple[tuple[Reputation, Action, Reputation], ...] = tuple(
    (x, a, y)
    for y in (GOOD, BAD)
    for x in (GOOD, BAD)
    for a in (FAIR, UNFAIR)
)


def bit_index(x: Reputation, a: Action, y: Reputation) -> int:
    """Position of context (x, a, y) in BIT_CONTEXTS (0 = most significant)."""
    return 4 * (y is BAD) + 2 * (x is BAD) + (a is UNFAIR)


def _clean_matrix_text(text: str) -> str:
    s = "".join(ch for ch in text if ch not in "[], \t")
    if ";" in s:
        if s.count(";") != 1 or len(s) != 9 or s[4] != ";":
            raise ValueError(f"malformed norm text: {text!r}")
        s = s.replace(";", "")
    return s


@dataclass(frozen=True)
class SocialNorm:
    """One assessment rule, held as its 8 bits in label order."""

    bits: tuple[int, ...]

    def __post_init__(self):
        if len(self.bits) != 8 or any(b not in (0, 1) for b in self.bits):
            raise ValueError(f"need 8 bits in {{0,1}}, got {self.bits!r}")

    @property
    def label(self) -> int:
        out = 0
        for b in self.bits:
            out = (out << 1) | b
        return out

    @classmethod
    def from_label(cls, label: int) -> "SocialNorm":
        if not 0 <= label <= 255:
            raise ValueError(f"norm label out of range: {label}")
        return cls(tuple((label >> (7 - k)) & 1 for k in range(8)))

    @classmethod
    def parse(cls, text: str) -> "SocialNorm":
        t = text.strip()
        if t.isdigit() and len(t) <= 3:
            return cls.from_label(int(t))
        s = _clean_matrix_text(t)
        if len(s) != 8 or any(ch not in "01" for ch in s):
            raise ValueError(f"malformed norm text: {text!r}")
        return cls(tuple(int(ch) for ch in s))

    def text(self) -> str:
        b = self.bits
        return "[{},{},{},{};{},{},{},{}]".format(*b)

    def assess(self, x: Reputation, a: Action, y: Reputation) -> Reputation:
        """New dictator reputation after acting a on recipient y while being x."""
        return GOOD if self.bits[bit_index(x, a, y)] else BAD

    def __str__(self) -> str:
        return self.text()


_ALL: tuple[SocialNorm, ...] | None = None


def all_norms() -> tuple[SocialNorm, ...]:
    """All 256 norms, ascending by label."""
    global _ALL
    if _ALL is None:
        _ALL = tuple(SocialNorm.from_label(k) for k in range(256))
    return _ALL


@dataclass(frozen=True)
class NormPattern:
    """A norm template with wildcard positions (None = either bit)."""

    entries: tuple[int | None, ...]

    def __post_init__(self):
        if len(self.entries) != 8 or any(e not in (0, 1, None) for e in self.entries):
            raise ValueError(f"need 8 entries in {{0,1,*}}, got {self.entries!r}")

    @classmethod
    def parse(cls, text: str) -> "NormPattern":
        s = _clean_matrix_text(text.strip())
        if len(s) != 8 or any(ch not in "01*" for ch in s):
            raise ValueError(f"malformed pattern text: {text!r}")
        return cls(tuple(None if ch == "*" else int(ch) for ch in s))

    def text(self) -> str:
        e = ["*" if v is None else str(v) for v in self.entries]
        return "[{},{},{},{};{},{},{},{}]".format(*e)

    @property
    def n_wildcards(self) -> int:
        return sum(1 for e in self.entries if e is None)

    def matches(self, norm: SocialNorm) -> bool:
        return all(e is None or e == b for e, b in zip(self.entries, norm.bits))

    def match(self) -> tuple[SocialNorm, ...]:
        """All matching norms, ascending by label."""
        return tuple(n for n in all_norms() if self.matches(n))

    def __str__(self) -> str:
        return self.text()
