"""Order-preserving prefix-exchange tables on the Cantor set."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction


class InvalidTable(ValueError):
    pass


def is_complete_antichain(words) -> bool:
    words = sorted(words)
    if not words:
        return False
    for u, v in zip(words, words[1:]):
        if v.startswith(u):
            return False
    return sum(Fraction(1, 2 ** len(w)) for w in words) == 1


def maximal_refinement(*antichains) -> list[str]:
    """Leaves of the union of the trees whose leaves are the given antichains."""
    words = sorted(set().union(*antichains))
    return [w for w, nxt in zip(words, words[1:] + [None]) if nxt is None or not nxt.startswith(w)]


@dataclass(frozen=True)
class PrefixTable:
    rows: tuple[tuple[str, str], ...]

    def __post_init__(self):
        rows = tuple(sorted(self.rows))
        object.__setattr__(self, "rows", rows)
        doms = [d for d, _ in rows]
        rngs = [r for _, r in rows]
        if not is_complete_antichain(doms):
            raise InvalidTable(f"domain prefixes {doms} are not a complete antichain")
        if not is_complete_antichain(rngs):
            raise InvalidTable(f"range prefixes {rngs} are not a complete antichain")
        if rngs != sorted(rngs):
            raise InvalidTable("range prefixes are not in domain order")

    def __len__(self) -> int:
        return len(self.rows)

    def inverse(self) -> "PrefixTable":
        return PrefixTable(tuple((r, d) for d, r in self.rows))

    def apply_bits(self, bits: str) -> str | None:
        """Image of a finite word that extends some domain prefix, else ``None``."""
        for d, r in self.rows:
            if bits.startswith(d):
                return r + bits[len(d):]
        return None

    def apply(self, seq):
        """Image of an eventually periodic sequence."""
        for d, r in self.rows:
            if seq.startswith(d):
                return seq.drop(len(d)).prepend(r)
        raise AssertionError("complete antichain must cover every sequence")

    def to_json(self) -> str:
        return json.dumps([list(row) for row in self.rows])

    @classmethod
    def from_json(cls, text: str) -> "PrefixTable":
        return cls(tuple(tuple(row) for row in json.loads(text)))


def compose_tables(first: PrefixTable, second: PrefixTable) -> PrefixTable:
    """Table of ``first`` followed by ``second``, by pushing each cylinder through."""
    rows = []
    for d, r in first.rows:
        image = second.apply_bits(r)
        if image is not None:
            rows.append((d, image))
            continue
        # r is a proper prefix of some domain prefixes of `second`
        for d2, r2 in second.rows:
            if d2.startswith(r):
                rows.append((d + d2[len(r):], r2))
    return PrefixTable(tuple(rows))


IDENTITY_TABLE = PrefixTable((("", ""),))
X0_TABLE = PrefixTable((("00", "0"), ("01", "10"), ("1", "11")))
X1_TABLE = PrefixTable((("0", "0"), ("100", "10"), ("101", "110"), ("11", "111")))
