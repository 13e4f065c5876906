"""Thompson's group F as reduced pairs of binary trees.

A tree is recorded by its leaves, each leaf being the binary address of the
path from the root (left edge 0, right edge 1).  Leaves are kept in left to
right order, which for a prefix-free set is lexicographic order.  Pairs are
read domain first: leaf ``i`` of the domain tree is sent to leaf ``i`` of the
range tree.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass

from .prefix import (
    InvalidTable,
    PrefixTable,
    X0_TABLE,
    X1_TABLE,
    is_complete_antichain,
    maximal_refinement,
)
from .words import GroupWord, parse_word


@dataclass(frozen=True)
class BinTree:
    leaves: tuple[str, ...] = ("",)

    def __post_init__(self):
        if not is_complete_antichain(self.leaves) or list(self.leaves) != sorted(self.leaves):
            raise ValueError(f"{self.leaves} are not the leaves of a binary tree")

    @property
    def carets(self) -> int:
        return len(self.leaves) - 1

    def expand(self, i: int) -> "BinTree":
        """Attach a caret to leaf ``i`` (1-based, left to right)."""
        w = self.leaves[i - 1]
        return BinTree(self.leaves[: i - 1] + (w + "0", w + "1") + self.leaves[i:])

    def to_nested(self):
        """``None`` for a leaf, ``(left, right)`` for a caret."""

        def build(prefix, leaves):
            if leaves == [prefix]:
                return None
            k = len(prefix)
            return (
                build(prefix + "0", [w for w in leaves if w[k] == "0"]),
                build(prefix + "1", [w for w in leaves if w[k] == "1"]),
            )

        return build("", list(self.leaves))

    @classmethod
    def from_nested(cls, tree) -> "BinTree":
        leaves = []

        def walk(node, prefix):
            if node is None:
                leaves.append(prefix)
            else:
                walk(node[0], prefix + "0")
                walk(node[1], prefix + "1")

        walk(tree, "")
        return cls(tuple(leaves))

    def to_parens(self) -> str:
        # a leaf is "()", a caret is "(" left right ")"
        def fmt(node):
            return "()" if node is None else f"({fmt(node[0])}{fmt(node[1])})"

        return fmt(self.to_nested())

    @classmethod
    def from_parens(cls, text: str) -> "BinTree":
        text = "".join(text.split())
        pos = 0

        def parse():
            nonlocal pos
            if text[pos : pos + 2] == "()":
                pos += 2
                return None
            if text[pos : pos + 1] != "(":
                raise ValueError(f"malformed tree text at column {pos + 1}")
            pos += 1
            left = parse()
            right = parse()
            if text[pos : pos + 1] != ")":
                raise ValueError(f"malformed tree text at column {pos + 1}")
            pos += 1
            return (left, right)

        tree = parse()
        if pos != len(text):
            raise ValueError(f"trailing characters at column {pos + 1}")
        return cls.from_nested(tree)


@dataclass(frozen=True)
class TreePair:
    domain: BinTree
    range: BinTree

    def __post_init__(self):
        if len(self.domain.leaves) != len(self.range.leaves):
            raise ValueError("trees of a pair need the same number of leaves")

    @classmethod
    def from_leaves(cls, domain, range_) -> "TreePair":
        return cls(BinTree(tuple(domain)), BinTree(tuple(range_)))

    @property
    def carets(self) -> int:
        return self.domain.carets

    def expand(self, i: int) -> "TreePair":
        return TreePair(self.domain.expand(i), self.range.expand(i))

    def inverse(self) -> "TreePair":
        return TreePair(self.range, self.domain)

    def is_reduced(self) -> bool:
        d, r = self.domain.leaves, self.range.leaves
        for i in range(len(d) - 1):
            if _siblings(d[i], d[i + 1]) and _siblings(r[i], r[i + 1]):
                return False
        return True

    def is_identity(self) -> bool:
        return reduce(self).domain.leaves == ("",)

    def __mul__(self, other: "TreePair") -> "TreePair":
        return multiply(self, other)

    def to_dict(self) -> dict:
        return {"domain": self.domain.to_parens(), "range": self.range.to_parens()}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "TreePair":
        data = json.loads(text)
        return cls(BinTree.from_parens(data["domain"]), BinTree.from_parens(data["range"]))


def _siblings(u: str, v: str) -> bool:
    return len(u) == len(v) and len(u) > 0 and u[:-1] == v[:-1] and u[-1] == "0" and v[-1] == "1"


IDENTITY_PAIR = TreePair(BinTree(), BinTree())


def reduce(p: TreePair) -> TreePair:
    """Cancel common carets until none is left.

    A shift-reduce pass: each merge can only enable a new merge with the
    neighbour on the stack or the next incoming leaf.
    """
    stack: list[tuple[str, str]] = []
    for pair in zip(p.domain.leaves, p.range.leaves):
        stack.append(pair)
        while len(stack) >= 2:
            (d0, r0), (d1, r1) = stack[-2], stack[-1]
            if _siblings(d0, d1) and _siblings(r0, r1):
                stack[-2:] = [(d0[:-1], r0[:-1])]
            else:
                break
    return TreePair.from_leaves([d for d, _ in stack], [r for _, r in stack])


def _pull_back(targets: list[str], fine: list[str], images: list[str]) -> list[str]:
    """For each leaf of ``fine``, locate the target leaf it extends and carry the
    extra suffix over to the matching leaf of ``images``."""
    out = []
    j = 0
    for u in fine:
        while not u.startswith(targets[j]):
            j += 1
        out.append(images[j] + u[len(targets[j]):])
    return out


def multiply(p: TreePair, q: TreePair) -> TreePair:
    """Reduced pair of ``pq`` (``p`` acts first).

    Both pairs are expanded until the range tree of ``p`` and the domain tree
    of ``q`` coincide with the union of the two trees.
    """
    common = maximal_refinement(p.range.leaves, q.domain.leaves)
    domain = _pull_back(list(p.range.leaves), common, list(p.domain.leaves))
    range_ = _pull_back(list(q.domain.leaves), common, list(q.range.leaves))
    return reduce(TreePair.from_leaves(domain, range_))


def caret_count(p: TreePair) -> int:
    return reduce(p).carets


def to_prefix_table(p: TreePair) -> PrefixTable:
    return PrefixTable(tuple(zip(p.domain.leaves, p.range.leaves)))


def from_prefix_table(table: PrefixTable) -> TreePair:
    try:
        doms = [d for d, _ in table.rows]
        rngs = [r for _, r in table.rows]
        pair = TreePair.from_leaves(doms, rngs)
    except ValueError as exc:
        raise InvalidTable(str(exc)) from exc
    return reduce(pair)


X0_PAIR = from_prefix_table(X0_TABLE)
X1_PAIR = from_prefix_table(X1_TABLE)

_F_LETTERS = {
    ("x0", 1): X0_PAIR,
    ("x0", -1): X0_PAIR.inverse(),
    ("x1", 1): X1_PAIR,
    ("x1", -1): X1_PAIR.inverse(),
}


def word_to_pair(word: GroupWord | str) -> TreePair:
    if isinstance(word, str):
        word = parse_word(word)
    result = IDENTITY_PAIR
    for letter in word.expanded():
        if letter not in _F_LETTERS:
            raise ValueError(f"{letter[0]} is not a generator of F")
        result = multiply(result, _F_LETTERS[letter])
    return result


def random_tree(rng: random.Random, carets: int) -> BinTree:
    leaves = [""]
    for _ in range(carets):
        i = rng.randrange(len(leaves))
        w = leaves[i]
        leaves[i : i + 1] = [w + "0", w + "1"]
    return BinTree(tuple(leaves))


def random_pair(rng: random.Random, carets: int) -> TreePair:
    """Reduced pair obtained from two random trees with ``carets`` carets."""
    return reduce(TreePair(random_tree(rng, carets), random_tree(rng, carets)))
