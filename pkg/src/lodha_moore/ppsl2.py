"""Exact piecewise projective homeomorphisms of the real line.

A map is stored as a strictly increasing tuple of rational breakpoints and one
integer matrix per linear fractional component.  Every map is kept in
canonical form (normalized matrices, no spurious breakpoints), so equality of
group elements is plain structural equality.

Products follow the right-action convention used throughout the package:
``compose(f, g)`` is the map that applies ``f`` first and then ``g``.
"""

from __future__ import annotations

import json
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, NamedTuple, Sequence


class InvalidMatrix(ValueError):
    pass


class InvalidMap(ValueError):
    pass


class ProjMat(NamedTuple):
    """Integer matrix ``(a b; c d)`` acting as ``t -> (a t + b) / (c t + d)``."""

    a: int
    b: int
    c: int
    d: int

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def __call__(self, t: Fraction) -> Fraction:
        return Fraction(self.a * t + self.b) / (self.c * t + self.d)

    def inverse(self) -> "ProjMat":
        return normalize_mat(self.d, -self.b, -self.c, self.a)

    def then(self, other: "ProjMat") -> "ProjMat":
        """Matrix of ``other(self(t))``, i.e. ``other @ self``."""
        a, b, c, d = self
        p, q, r, s = other
        return normalize_mat(p * a + q * c, p * b + q * d, r * a + s * c, r * b + s * d)

    def is_translation(self) -> bool:
        return self.a == 1 and self.c == 0 and self.d == 1

    def height(self) -> int:
        return max(abs(self.a), abs(self.b), abs(self.c), abs(self.d))


def normalize_mat(a: int, b: int, c: int, d: int) -> ProjMat:
    """Unique representative: entries coprime, and ``a > 0`` or ``a == 0, b > 0``."""
    if a * d - b * c == 0:
        raise InvalidMatrix(f"singular matrix ({a}, {b}, {c}, {d})")
    g = gcd(gcd(a, b), gcd(c, d))
    a, b, c, d = a // g, b // g, c // g, d // g
    if a < 0 or (a == 0 and b < 0):
        a, b, c, d = -a, -b, -c, -d
    return ProjMat(a, b, c, d)


IDENTITY_MAT = ProjMat(1, 0, 0, 1)


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


@dataclass(frozen=True)
class PiecewiseMap:
    breakpoints: tuple[Fraction, ...]
    mats: tuple[ProjMat, ...]
    # images of the breakpoints, cached for inversion and composition
    _images: tuple[Fraction, ...] = field(default=(), compare=False, repr=False, hash=False)

    def __post_init__(self):
        if not self._images and self.breakpoints:
            images = tuple(self.mats[i](s) for i, s in enumerate(self.breakpoints))
            object.__setattr__(self, "_images", images)

    @property
    def images(self) -> tuple[Fraction, ...]:
        return self._images

    def piece_at(self, t: Fraction) -> ProjMat:
        return self.mats[bisect_right(self.breakpoints, t)]

    def __call__(self, t) -> Fraction:
        t = _as_fraction(t)
        return self.piece_at(t)(t)

    def __mul__(self, other: "PiecewiseMap") -> "PiecewiseMap":
        return compose(self, other)

    def __invert__(self) -> "PiecewiseMap":
        return invert(self)

    def __pow__(self, k: int) -> "PiecewiseMap":
        base = self if k >= 0 else invert(self)
        result = IDENTITY
        for _ in range(abs(k)):
            result = compose(result, base)
        return result

    def is_identity(self) -> bool:
        return not self.breakpoints and self.mats[0] == IDENTITY_MAT

    def components(self) -> list[tuple[Fraction | None, Fraction | None, ProjMat]]:
        """``(left, right, matrix)`` per component; ``None`` stands for an infinite end."""
        ends = [None, *self.breakpoints, None]
        return [(ends[i], ends[i + 1], m) for i, m in enumerate(self.mats)]

    def validate(self) -> None:
        _validate(self.breakpoints, self.mats)

    def to_json(self) -> str:
        return json.dumps(to_dict(self), separators=(",", ":"))

    def __str__(self) -> str:
        parts = []
        for left, right, m in self.components():
            lo = "-inf" if left is None else str(left)
            hi = "inf" if right is None else str(right)
            parts.append(f"[{lo}, {hi}]: {format_mat(m)}")
        return "; ".join(parts)


def format_mat(m: ProjMat) -> str:
    def affine(x, y):
        if x == 0:
            return str(y)
        head = "t" if x == 1 else "-t" if x == -1 else f"{x}t"
        if y == 0:
            return head
        return f"{head}{'+' if y > 0 else '-'}{abs(y)}"

    num = affine(m.a, m.b)
    if m.c == 0 and m.d == 1:
        return num
    return f"({num})/({affine(m.c, m.d)})"


def _check_piece(m: ProjMat, left, right, where: str) -> None:
    if m.det <= 0:
        raise InvalidMap(f"component {where} is not increasing (det {m.det})")
    if m.c != 0:
        pole = Fraction(-m.d, m.c)
        if (left is None or left <= pole) and (right is None or pole <= right):
            raise InvalidMap(f"component {where} contains the pole {pole}")


def _validate(bps: Sequence[Fraction], mats: Sequence[ProjMat]) -> None:
    if len(mats) != len(bps) + 1:
        raise InvalidMap(f"{len(bps)} breakpoints need {len(bps) + 1} matrices, got {len(mats)}")
    for s, t in zip(bps, bps[1:]):
        if not s < t:
            raise InvalidMap(f"breakpoints not strictly increasing at {s}, {t}")
    if not mats[0].is_translation():
        raise InvalidMap(f"leftmost component {format_mat(mats[0])} is not an integer translation")
    if not mats[-1].is_translation():
        raise InvalidMap(f"rightmost component {format_mat(mats[-1])} is not an integer translation")
    ends = [None, *bps, None]
    for i, m in enumerate(mats):
        _check_piece(m, ends[i], ends[i + 1], f"#{i} [{ends[i]}, {ends[i + 1]}]")
    for i, s in enumerate(bps):
        if mats[i](s) != mats[i + 1](s):
            raise InvalidMap(f"discontinuity at breakpoint {s}")


def _canonical(bps: Sequence[Fraction], mats: Sequence[ProjMat]) -> PiecewiseMap:
    out_bps: list[Fraction] = []
    out_mats = [mats[0]]
    for s, m in zip(bps, mats[1:]):
        if m != out_mats[-1]:
            out_bps.append(s)
            out_mats.append(m)
    return PiecewiseMap(tuple(out_bps), tuple(out_mats))


def make_map(breakpoints: Iterable, mats: Iterable) -> PiecewiseMap:
    """Validated constructor.  Spurious breakpoints (equal neighbours) are pruned."""
    bps = [_as_fraction(s) for s in breakpoints]
    norm = []
    for m in mats:
        if any(not isinstance(x, int) for x in m):
            raise InvalidMatrix(f"matrix entries must be integers: {tuple(m)}")
        norm.append(normalize_mat(*m))
    _validate(bps, norm)
    return _canonical(bps, norm)


IDENTITY = PiecewiseMap((), (IDENTITY_MAT,))


def translation(k: int) -> PiecewiseMap:
    return PiecewiseMap((), (ProjMat(1, k, 0, 1),))


def compose(f: PiecewiseMap, g: PiecewiseMap) -> PiecewiseMap:
    """The product ``fg``: apply ``f``, then ``g``."""
    if not g.breakpoints and not f.breakpoints:
        return PiecewiseMap((), (f.mats[0].then(g.mats[0]),))
    cuts = set(f.breakpoints)
    cuts.update(_preimage(f, s) for s in g.breakpoints)
    cuts = sorted(cuts)
    images = [f(s) for s in cuts]

    mats = []
    for s, img in zip(cuts, images):
        # component of f and of g just to the left of the cut
        mf = f.mats[bisect_left(f.breakpoints, s)]
        mg = g.mats[bisect_left(g.breakpoints, img)]
        mats.append(mf.then(mg))
    mf = f.mats[-1]
    mg = g.mats[bisect_right(g.breakpoints, images[-1])]
    mats.append(mf.then(mg))
    return _canonical(cuts, mats)


def _preimage(f: PiecewiseMap, y: Fraction) -> Fraction:
    m = f.mats[bisect_left(f.images, y)]
    return m.inverse()(y)


def invert(f: PiecewiseMap) -> PiecewiseMap:
    mats = tuple(m.inverse() for m in f.mats)
    return PiecewiseMap(f.images, mats, f.breakpoints)


def breakpoints(f: PiecewiseMap) -> list[Fraction]:
    return list(f.breakpoints)


def equals(f: PiecewiseMap, g: PiecewiseMap) -> bool:
    return f.breakpoints == g.breakpoints and f.mats == g.mats


def compose_all(maps: Iterable[PiecewiseMap]) -> PiecewiseMap:
    result = IDENTITY
    for m in maps:
        result = compose(result, m)
    return result


def to_dict(f: PiecewiseMap) -> dict:
    return {
        "breakpoints": [f"{s.numerator}/{s.denominator}" for s in f.breakpoints],
        "mats": [[str(x) for x in m] for m in f.mats],
    }


def from_dict(data: dict) -> PiecewiseMap:
    return make_map(
        [Fraction(s) for s in data["breakpoints"]],
        [tuple(int(x) for x in m) for m in data["mats"]],
    )


def from_json(text: str) -> PiecewiseMap:
    return from_dict(json.loads(text))
