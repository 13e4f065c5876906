"""G0 acting on the Cantor set of infinite binary sequences.

Points are eventually periodic sequences ``u v v v ...``; every generator maps
such a point to another one, so evaluation is exact.  The map ``y`` is run as
a two-state transducer (state +1 applies ``y``, state -1 applies ``y^-1``).
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass

from .prefix import X0_TABLE, X1_TABLE, PrefixTable
from .words import CANTOR, GroupWord, parse_word, y_address

_EPSEQ = re.compile(r"([01]*)\(([01]+)\)$")


def _primitive_root(v: str) -> str:
    n = len(v)
    for d in range(1, n + 1):
        if n % d == 0 and v[:d] * (n // d) == v:
            return v[:d]
    return v


@dataclass(frozen=True)
class EpSeq:
    """The sequence ``pre + period + period + ...`` in canonical form."""

    pre: str
    period: str

    def __post_init__(self):
        if not self.period:
            raise ValueError("period must be nonempty")
        if set(self.pre + self.period) - {"0", "1"}:
            raise ValueError("sequences are binary")
        pre, period = self.pre, _primitive_root(self.period)
        while pre and pre[-1] == period[-1]:
            pre, period = pre[:-1], period[-1] + period[:-1]
        object.__setattr__(self, "pre", pre)
        object.__setattr__(self, "period", period)

    @classmethod
    def parse(cls, text: str) -> "EpSeq":
        m = _EPSEQ.match(text.strip())
        if m is None:
            raise ValueError(f"expected pre(period) with binary digits, got {text!r}")
        return cls(m.group(1), m.group(2))

    def __str__(self) -> str:
        return f"{self.pre}({self.period})"

    def bit(self, i: int) -> str:
        if i < len(self.pre):
            return self.pre[i]
        return self.period[(i - len(self.pre)) % len(self.period)]

    def prefix(self, k: int) -> str:
        if k <= len(self.pre):
            return self.pre[:k]
        need = k - len(self.pre)
        reps = -(-need // len(self.period))
        return self.pre + (self.period * reps)[:need]

    def startswith(self, s: str) -> bool:
        return self.prefix(len(s)) == s

    def drop(self, k: int) -> "EpSeq":
        if k <= len(self.pre):
            return EpSeq(self.pre[k:], self.period)
        shift = (k - len(self.pre)) % len(self.period)
        return EpSeq("", self.period[shift:] + self.period[:shift])

    def prepend(self, s: str) -> "EpSeq":
        return EpSeq(s + self.pre, self.period)


# --- the transducer y ------------------------------------------------------


def _y_step(sign: int, read) -> tuple[str, int, int] | None:
    """One rule of ``y`` (sign +1) or ``y^-1`` (sign -1).

    ``read(i)`` returns the i-th pending input bit or ``None`` when it is not
    available.  Returns ``(output, bits consumed, next sign)``.
    """
    first = read(0)
    if first is None:
        return None
    if sign > 0:
        if first == "1":
            return "11", 1, 1
        second = read(1)
        if second is None:
            return None
        return ("0", 2, 1) if second == "0" else ("10", 2, -1)
    if first == "0":
        return "00", 1, -1
    second = read(1)
    if second is None:
        return None
    return ("01", 2, 1) if second == "0" else ("1", 2, -1)


def _apply_y_once(sign: int, s: EpSeq) -> EpSeq:
    lp, lv = len(s.pre), len(s.period)
    pos = written = 0
    out: list[str] = []
    seen: dict[tuple[int, int], int] = {}
    while True:
        key = (sign, pos if pos < lp else lp + (pos - lp) % lv)
        if key in seen:
            # the input from here on is periodic and the state repeats
            cut = seen[key]
            text = "".join(out)
            return EpSeq(text[:cut], text[cut:])
        seen[key] = written
        emitted, used, sign = _y_step(sign, lambda i: s.bit(pos + i))
        out.append(emitted)
        written += len(emitted)
        pos += used


def apply_y(k: int, s: EpSeq) -> EpSeq:
    """``y^k`` applied to ``s``."""
    sign = 1 if k > 0 else -1
    for _ in range(abs(k)):
        s = _apply_y_once(sign, s)
    return s


def _table_for(sym: str, e: int) -> PrefixTable:
    table = X0_TABLE if sym == "x0" else X1_TABLE
    return table if e > 0 else table.inverse()


def _as_word(word) -> GroupWord:
    if isinstance(word, str):
        word = parse_word(word, CANTOR)
    if word.alphabet not in (None, CANTOR):
        raise ValueError(f"expected a word over x0, x1, y_s; got the {word.alphabet} alphabet")
    return word


def apply_letter(sym: str, e: int, s: EpSeq) -> EpSeq:
    if sym in ("x0", "x1"):
        table = _table_for(sym, e)
        for _ in range(abs(e)):
            s = table.apply(s)
        return s
    addr = y_address(sym)
    if not s.startswith(addr):
        return s
    return apply_y(e, s.drop(len(addr))).prepend(addr)


def apply_word(word: GroupWord | str, s: EpSeq) -> EpSeq:
    """Apply the letters of ``word`` from left to right."""
    for sym, e in _as_word(word).letters:
        s = apply_letter(sym, e, s)
    return s


# --- partial evaluation on cylinders ---------------------------------------


class _NeedsDeeper:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "NeedsDeeper"

    def __bool__(self) -> bool:
        return False


NeedsDeeper = _NeedsDeeper()


@dataclass(frozen=True)
class Resolved:
    """On the cylinder of the input prefix, ``prefix + z  ->  output + y^residual(z)``."""

    output: str
    residual: int


def _push_y(sign: int, w: str) -> tuple[str, str, int]:
    """Run ``y^sign`` across ``w`` as far as whole rules go.

    Returns ``(emitted, leftover, state)`` with at most one leftover bit.
    """
    out = []
    pos = 0
    n = len(w)
    while pos < n:
        step = _y_step(sign, lambda i: w[pos + i] if pos + i < n else None)
        if step is None:
            break
        emitted, used, sign = step
        out.append(emitted)
        pos += used
    return "".join(out), w[pos:], sign


_TABLE, _YLETTER = 0, 1
_CHECK, _ON, _OFF = 0, 1, 2


class _Cascade:
    """The word as a chain of streaming transducers, one per letter.

    A table stage buffers input until a domain prefix is complete, then passes
    everything through.  A ``y_s^e`` stage checks the address ``s`` and, on a
    match, feeds the rest through ``|e|`` copies of the ``y`` transducer, each
    holding a sign and at most one buffered bit.
    """

    def __init__(self, word: GroupWord | None = None):
        self.out = ""
        self.stages: list[list] = []
        if word is None:
            return
        for sym, e in word.letters:
            if sym in ("x0", "x1"):
                table = _table_for(sym, e)
                self.stages.extend([_TABLE, table, ""] for _ in range(abs(e)))
            else:
                sign = 1 if e > 0 else -1
                subs = [[sign, ""] for _ in range(abs(e))]
                self.stages.append([_YLETTER, y_address(sym), _CHECK, "", subs])

    def clone(self) -> "_Cascade":
        c = _Cascade()
        c.out = self.out
        c.stages = [
            st[:4] + [[sub[:] for sub in st[4]]] if st[0] == _YLETTER else st[:]
            for st in self.stages
        ]
        return c

    def feed(self, bits: str) -> None:
        for st in self.stages:
            if not bits:
                return
            if st[0] == _TABLE:
                if st[2] is None:
                    continue
                buf = st[2] + bits
                image = st[1].apply_bits(buf)
                if image is None:
                    st[2], bits = buf, ""
                else:
                    st[2], bits = None, image
                continue
            mode = st[2]
            if mode == _OFF:
                continue
            if mode == _CHECK:
                addr = st[1]
                buf = st[3] + bits
                if buf.startswith(addr):
                    st[2], st[3] = _ON, ""
                    bits = addr + self._run_y(st[4], buf[len(addr):])
                elif addr.startswith(buf):
                    st[3], bits = buf, ""
                else:
                    st[2], st[3], bits = _OFF, "", buf
                continue
            bits = self._run_y(st[4], bits)
        self.out += bits

    @staticmethod
    def _run_y(subs: list[list], bits: str) -> str:
        for sub in subs:
            if not bits:
                return ""
            emitted, left, sign = _push_y(sub[0], sub[1] + bits)
            sub[0], sub[1] = sign, left
            bits = emitted
        return bits

    def resolved(self) -> Resolved | None:
        layers = []
        for st in self.stages:
            if st[0] == _TABLE:
                if st[2] is not None:
                    return None
            elif st[2] == _CHECK:
                return None
            elif st[2] == _ON:
                layers.extend(st[4])
        head, rest = _simplify_tail([[sign, buf] for sign, buf in reversed(layers)])
        if any(buf for _, buf in rest) or len({sign for sign, _ in rest}) > 1:
            return None
        return Resolved(self.out + head, sum(sign for sign, _ in rest))


def _simplify_tail(layers: list[list]) -> tuple[str, list[list]]:
    """Normalize ``y^s1(b1 y^s2(b2 ... z))``, given outermost layer first.

    Each layer is pushed across its known bits; ``y^s`` directly over ``y^-s``
    cancels and the inner bits surface one level up.  Returns the bits that
    reach the outside and the remaining layers.
    """
    bits = [""] + [b for _, b in layers]
    signs = [0] + [s for s, _ in layers]
    i = len(bits) - 1
    while i >= 1:
        emitted, left, sign = _push_y(signs[i], bits[i])
        bits[i - 1] += emitted
        bits[i], signs[i] = left, sign
        if not left and i + 1 < len(bits) and signs[i + 1] == -sign:
            bits[i - 1] += bits[i + 1]
            del bits[i : i + 2], signs[i : i + 2]
            # the enclosing layer now sees more bits
            i = min(i, len(bits) - 1)
            continue
        i -= 1
    return bits[0], [[s, b] for s, b in zip(signs[1:], bits[1:])]


def partial_eval(word: GroupWord | str, prefix: str) -> Resolved | _NeedsDeeper:
    """Track the cylinder ``prefix`` through ``word`` without looking at the tail.

    ``NeedsDeeper`` means some letter is still waiting for bits, so the image
    of the cylinder is not yet of the form ``output + y^k(tail)``.
    """
    cascade = _Cascade(_as_word(word))
    cascade.feed(prefix)
    res = cascade.resolved()
    return NeedsDeeper if res is None else res


class NotInF(Exception):
    """Some cylinder is mapped by ``output + y^k(tail)`` with ``k != 0``.

    ``y^k`` for ``k != 0`` restricts to no cylinder as a prefix exchange, so
    the element is not in F.
    """

    def __init__(self, witness: str, resolved: Resolved):
        super().__init__(f"cylinder {witness or 'root'} carries residual y^{resolved.residual}")
        self.witness = witness
        self.resolved = resolved


class DepthExceeded(Exception):
    def __init__(self, max_depth: int, frontier: list[str]):
        super().__init__(f"prefix depth {max_depth} exceeded; deepest frontier {frontier[:4]}")
        self.max_depth = max_depth
        self.frontier = frontier


def to_prefix_table(word: GroupWord | str, max_depth: int = 32) -> PrefixTable:
    """Refine cylinders until each one is a prefix exchange.

    Raises ``NotInF`` with a witness cylinder, or ``DepthExceeded``.
    """
    if max_depth < 1:
        raise ValueError("max_depth must be at least 1")
    root = _Cascade(_as_word(word))
    rows = []
    stuck = []
    stack = [("", root)]
    while stack:
        p, cascade = stack.pop()
        res = cascade.resolved()
        if res is None:
            if len(p) >= max_depth:
                stuck.append(p)
                continue
            one = cascade.clone()
            one.feed("1")
            cascade.feed("0")
            stack.append((p + "1", one))
            stack.append((p + "0", cascade))
            continue
        if res.residual != 0:
            raise NotInF(p, res)
        rows.append((p, res.output))
    if stuck:
        raise DepthExceeded(max_depth, sorted(stuck))
    return PrefixTable(tuple(rows))


# --- the family a_n --------------------------------------------------------

CORE_WORD = parse_word("x0 x1^2 x0^-1 x1^-1 x0 x1^-1 x0^-1")

# conjugators c with y_s = c y_10 c^-1
CONJUGATORS = {
    "010": parse_word("x0 x1"),
    "0111": parse_word("x0 x1 x0^-1 x1 x0^-1"),
    "011": parse_word("x0 x1 x0^-1"),
}

_Y10 = parse_word("y_10")


@dataclass(frozen=True)
class ANWord:
    n: int
    word: GroupWord
    substituted: GroupWord

    @property
    def letter_count(self) -> int:
        return len(self.word)

    @property
    def word_bound(self) -> int:
        return 30 + 4 * self.n


def conjugation_word(addr: str) -> GroupWord:
    c = CONJUGATORS[addr]
    return c * _Y10 * c.inverse()


def build_a_n(n: int) -> ANWord:
    """``y_010^n W y_0111^-n y_010^-n y_011^n`` with ``W`` the 8-letter core word.

    ``substituted`` rewrites each ``y_s`` block through its conjugation by a
    word in ``x0, x1`` and freely reduces; its length is at most ``30 + 4n``.
    """
    if n < 1:
        raise ValueError("n must be positive")
    blocks = [("y_010", n), *CORE_WORD.letters, ("y_0111", -n), ("y_010", -n), ("y_011", n)]
    word = GroupWord.from_letters(blocks, CANTOR)
    sub = GroupWord(CANTOR)
    for sym, e in blocks:
        if sym.startswith("y_"):
            sub = sub * conjugation_word(y_address(sym)) ** e
        else:
            sub = sub * GroupWord.from_letters([(sym, e)], CANTOR)
    return ANWord(n, word, sub)


def a_n_max_depth(n: int) -> int:
    # the reduced domain tree of a_n is a comb of depth 2^n + 3
    return 2**n + 4 * n + 16


def corpus(size: int = 200, seed: int = 20240101) -> list[EpSeq]:
    """Deterministic sample of eventually periodic points, all cylinders of depth 4 hit."""
    rng = random.Random(seed)
    points = []
    for i in range(16):
        points.append(EpSeq(format(i, "04b"), rng.choice(["0", "1", "01", "001", "011"])))
    while len(points) < size:
        pre = "".join(rng.choice("01") for _ in range(rng.randint(0, 10)))
        period = "".join(rng.choice("01") for _ in range(rng.randint(1, 6)))
        points.append(EpSeq(pre, period))
    return points[:size]


def check_conjugations(points: list[EpSeq] | None = None) -> list[tuple[str, EpSeq]]:
    """Points where some ``y_s`` and ``c y_10 c^-1`` disagree; empty when all hold."""
    points = corpus() if points is None else points
    failures = []
    for addr in CONJUGATORS:
        lhs = parse_word(f"y_{addr}")
        rhs = conjugation_word(addr)
        for s in points:
            if apply_word(lhs, s) != apply_word(rhs, s):
                failures.append((addr, s))
    return failures


# --- agreement with the real-line model ------------------------------------

CROSS_MODEL = {
    "a": parse_word("x0"),
    "b": parse_word("x1"),
    "c": parse_word("y_10"),
}


def translate(word: GroupWord) -> GroupWord:
    """Send ``a, b, c`` to ``x0, x1, y_10``."""
    return word.substitute(CROSS_MODEL, CANTOR)


def fixes_points(word: GroupWord, points: list[EpSeq]) -> bool:
    return all(apply_word(word, s) == s for s in points)


def short_trivial_words(limit: int = 100, max_len: int = 12) -> list[GroupWord]:
    """Commutators ``[u, v]`` with ``|u| <= 2``, ``|v| <= 3`` over ``a, b, c`` that are
    trivial on the real line without being freely trivial, found by search."""
    from .words import R_MODEL, eval_R

    levels = [[GroupWord(R_MODEL)]]
    for _ in range(3):
        nxt = []
        for w in levels[-1]:
            for sym in "abc":
                for e in (1, -1):
                    v = w * GroupWord.from_letters([(sym, e)], R_MODEL)
                    if len(v) == len(levels) and v not in nxt:
                        nxt.append(v)
        levels.append(nxt)
    found: list[GroupWord] = []
    seen = set()
    for u in levels[1] + levels[2]:
        for v in levels[1] + levels[2] + levels[3]:
            w = u * v * u.inverse() * v.inverse()
            if not w.letters or len(w) > max_len or w in seen:
                continue
            seen.add(w)
            if eval_R(w).is_identity():
                found.append(w)
                if len(found) == limit:
                    return found
    return found


@dataclass
class CrossCheck:
    words: int
    trivial: int
    moved: int
    discrepancies: list[str]
    # nontrivial words that happen to fix every corpus point (not a failure)
    undetected: int

    @property
    def ok(self) -> bool:
        return not self.discrepancies


def cross_check(n_words: int = 1000, max_len: int = 12, seed: int = 7, points: list[EpSeq] | None = None,
                extra: list[GroupWord] | None = None) -> CrossCheck:
    """Compare triviality on the real line with fixing the corpus in the Cantor model."""
    from .words import R_MODEL, eval_R, random_word

    points = corpus() if points is None else points
    rng = random.Random(seed)
    words = [random_word(rng, rng.randint(0, max_len), "abc", R_MODEL) for _ in range(n_words)]
    words += list(extra or [])
    trivial = moved = undetected = 0
    bad = []
    for w in words:
        is_trivial = eval_R(w).is_identity()
        fixes = fixes_points(translate(w), points)
        trivial += is_trivial
        moved += not fixes
        if is_trivial and not fixes:
            bad.append(str(w))
        elif not is_trivial and fixes:
            undetected += 1
    return CrossCheck(len(words), trivial, moved, bad, undetected)
