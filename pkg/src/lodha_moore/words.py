"""Group words, the real-line model of G0, and the complexity invariants D, M, C."""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Iterable, Mapping

from .ppsl2 import (
    IDENTITY,
    PiecewiseMap,
    compose,
    invert,
    make_map,
    translation,
)

R_MODEL = "R"
CANTOR = "cantor"
BS = "BS"

_TOKEN = re.compile(r"(?P<sym>[A-Za-z][A-Za-z0-9_]*)(?:\^(?P<exp>.*))?$")
_EXPONENT = re.compile(r"[+-]?\d+$")


class WordParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at column {position})")
        self.position = position


class AlphabetMismatch(ValueError):
    pass


def symbol_alphabet(sym: str) -> str | None:
    if sym in ("a", "b", "c"):
        return R_MODEL
    if sym in ("x0", "x1") or sym == "y" or (sym.startswith("y_") and set(sym[2:]) <= {"0", "1"}):
        return CANTOR
    if sym in ("x", "t"):
        return BS
    return None


def y_address(sym: str) -> str:
    """Binary address ``s`` of the letter ``y_s`` (``"y"`` alone is the root)."""
    return "" if sym == "y" else sym[2:]


@dataclass(frozen=True)
class GroupWord:
    alphabet: str | None
    letters: tuple[tuple[str, int], ...] = ()

    @classmethod
    def from_letters(cls, letters: Iterable[tuple[str, int]], alphabet: str | None = None) -> "GroupWord":
        out: list[list] = []
        for sym, e in letters:
            if e == 0:
                continue
            found = symbol_alphabet(sym)
            if found is None:
                raise ValueError(f"unknown symbol {sym!r}")
            if alphabet is None:
                alphabet = found
            elif found != alphabet:
                raise AlphabetMismatch(f"symbol {sym!r} is not in the {alphabet} alphabet")
            if out and out[-1][0] == sym:
                out[-1][1] += e
                if out[-1][1] == 0:
                    out.pop()
            else:
                out.append([sym, e])
        return cls(alphabet, tuple((s, e) for s, e in out))

    def __len__(self) -> int:
        return sum(abs(e) for _, e in self.letters)

    def __mul__(self, other: "GroupWord") -> "GroupWord":
        alphabet = self.alphabet or other.alphabet
        return GroupWord.from_letters(self.letters + other.letters, alphabet)

    def __pow__(self, k: int) -> "GroupWord":
        base = self if k >= 0 else self.inverse()
        return GroupWord.from_letters(base.letters * abs(k), self.alphabet)

    def inverse(self) -> "GroupWord":
        return GroupWord(self.alphabet, tuple((s, -e) for s, e in reversed(self.letters)))

    def expanded(self) -> list[tuple[str, int]]:
        """One ``(symbol, +-1)`` entry per generator instance."""
        return [(s, 1 if e > 0 else -1) for s, e in self.letters for _ in range(abs(e))]

    def substitute(self, table: Mapping[str, "GroupWord"], alphabet: str | None = None) -> "GroupWord":
        letters: list[tuple[str, int]] = []
        for s, e in self.letters:
            image = table[s] if e > 0 else table[s].inverse()
            letters.extend(image.letters * abs(e))
        return GroupWord.from_letters(letters, alphabet)

    def __str__(self) -> str:
        return " ".join(s if e == 1 else f"{s}^{e}" for s, e in self.letters)


def parse_word(text: str, alphabet: str | None = None) -> GroupWord:
    """Parse whitespace separated letters such as ``"b c a^-1 y_10^-3"``.

    Uppercase ``A B C`` denote the inverses of ``a b c``.  Runs of the same
    symbol are merged; a zero exponent is rejected.
    """
    letters = []
    for match in re.finditer(r"\S+", text):
        tok, pos = match.group(), match.start() + 1
        m = _TOKEN.match(tok)
        if m is None:
            raise WordParseError(f"unknown symbol {tok!r}", pos)
        sym, exp = m.group("sym"), m.group("exp")
        sign = 1
        if sym in ("A", "B", "C"):
            sym, sign = sym.lower(), -1
        if sym.startswith("y_") and not set(sym[2:]) <= {"0", "1"}:
            raise WordParseError(f"bad subscript in {tok!r}: expected a binary word", pos)
        found = symbol_alphabet(sym)
        if found is None:
            raise WordParseError(f"unknown symbol {sym!r}", pos)
        if alphabet is not None and found != alphabet:
            raise WordParseError(f"symbol {sym!r} is not in the {alphabet} alphabet", pos)
        alphabet = found
        if exp is None:
            e = 1
        elif _EXPONENT.match(exp):
            e = int(exp)
            if e == 0:
                raise WordParseError(f"zero exponent in {tok!r}", pos)
        else:
            raise WordParseError(f"malformed exponent in {tok!r}", pos + len(sym) + 1)
        letters.append((sym, sign * e))
    return GroupWord.from_letters(letters, alphabet)


def random_word(rng: random.Random, length: int, symbols: Iterable[str], alphabet: str | None = None) -> GroupWord:
    """Uniform letters with exponent +-1, freely reduced (so possibly shorter)."""
    symbols = sorted(symbols)
    letters = [(rng.choice(symbols), rng.choice((1, -1))) for _ in range(length)]
    return GroupWord.from_letters(letters, alphabet)


# --- the real-line model ---------------------------------------------------

GEN_A = translation(1)
GEN_B = make_map(
    [0, Fraction(1, 2), 1],
    [(1, 0, 0, 1), (1, 0, -1, 1), (3, -1, 1, 0), (1, 1, 0, 1)],
)
GEN_C = make_map([0, 1], [(1, 0, 0, 1), (2, 0, 1, 1), (1, 0, 0, 1)])

R_GENERATORS = {"a": GEN_A, "b": GEN_B, "c": GEN_C}

# the generating set S_{G0} = {a^+-1, b^+-1, c^+-1}
S_G0: dict[tuple[str, int], PiecewiseMap] = {}
for _sym, _f in R_GENERATORS.items():
    S_G0[(_sym, 1)] = _f
    S_G0[(_sym, -1)] = invert(_f)


def eval_R(word: GroupWord | str) -> PiecewiseMap:
    """Evaluate a word over ``a, b, c``; letters act left to right."""
    if isinstance(word, str):
        word = parse_word(word, R_MODEL)
    if word.alphabet not in (None, R_MODEL):
        raise AlphabetMismatch(f"expected a word over a, b, c; got the {word.alphabet} alphabet")
    f = IDENTITY
    for letter in word.expanded():
        f = compose(f, S_G0[letter])
    return f


# --- complexity ------------------------------------------------------------

# rational brackets of e^2 = 7.389056...
E2_LOWER = Fraction(7389, 1000)
E2_UPPER = Fraction(73891, 10000)


@dataclass(frozen=True)
class ComplexityReport:
    D: int
    M: int

    @property
    def C(self) -> int:
        return max(self.D, self.M)

    def lower_bound(self, digits: int = 30) -> Decimal:
        """Half the natural log of C, rounded only here."""
        return half_ln(self.C, digits)

    def to_dict(self) -> dict:
        return {"D": self.D, "M": self.M, "C": self.C}


def half_ln(n: int, digits: int = 30) -> Decimal:
    with localcontext() as ctx:
        ctx.prec = digits + 10
        value = Decimal(n).ln() / 2
        ctx.prec = digits
        return +value


def D_of(f: PiecewiseMap) -> int:
    return max((s.denominator for s in f.breakpoints), default=1)


def M_of(f: PiecewiseMap) -> int:
    return max(m.height() for m in f.mats)


def complexity(f: PiecewiseMap) -> ComplexityReport:
    return ComplexityReport(D_of(f), M_of(f))


def C_of(f: PiecewiseMap) -> int:
    return max(D_of(f), M_of(f))


def log_bound_holds(length: int, C: int) -> bool:
    """Exact check of ``length >= (1/2) ln C`` together with ``C <= 6**length``.

    ``e**(2*length) >= C`` is certified from ``E2_LOWER < e**2``.
    """
    if C > 6**length:
        return False
    return C * E2_LOWER.denominator**length <= E2_LOWER.numerator**length


# --- exact balls -----------------------------------------------------------

DEFAULT_BALL_CAP = 6


class CapExceeded(ValueError):
    def __init__(self, message: str, estimate: int):
        super().__init__(message)
        self.estimate = estimate


def ball_size_estimate(radius: int, n_generators: int = 6) -> int:
    """Upper bound on the ball size from the free group on n/2 letters."""
    if radius == 0:
        return 1
    k = n_generators
    return 1 + k * sum((k - 1) ** i for i in range(radius))


def ball(
    radius: int,
    generators: Mapping[object, PiecewiseMap] | None = None,
    cap: int = DEFAULT_BALL_CAP,
) -> dict[PiecewiseMap, int]:
    """Breadth-first ball: canonical map -> exact word length.

    ``generators`` must be closed under inverses; it defaults to S_{G0}.
    """
    if generators is None:
        generators = S_G0
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    if radius > cap:
        est = ball_size_estimate(radius, len(generators))
        raise CapExceeded(f"radius {radius} exceeds the cap {cap} (about {est} elements)", est)
    gens = list(generators.values())
    lengths = {IDENTITY: 0}
    frontier = [IDENTITY]
    for r in range(1, radius + 1):
        nxt = []
        for f in frontier:
            for s in gens:
                h = compose(f, s)
                if h not in lengths:
                    lengths[h] = r
                    nxt.append(h)
        frontier = nxt
    return lengths


def sphere_sizes(lengths: Mapping[PiecewiseMap, int]) -> list[int]:
    sizes = [0] * (max(lengths.values(), default=0) + 1)
    for r in lengths.values():
        sizes[r] += 1
    return sizes


# --- the estimation lemmas -------------------------------------------------


@dataclass
class Inequality:
    name: str
    lhs: int
    rhs: int

    @property
    def ok(self) -> bool:
        return self.lhs <= self.rhs


@dataclass
class LemmaReport:
    inequalities: list[Inequality]
    breakpoint_inclusion: bool

    @property
    def ok(self) -> bool:
        return self.breakpoint_inclusion and all(i.ok for i in self.inequalities)

    def failures(self) -> list[str]:
        bad = [i.name for i in self.inequalities if not i.ok]
        if not self.breakpoint_inclusion:
            bad.append("B(fg) in B(f) u f^-1(B(g))")
        return bad


def _preimage_denominators(f: PiecewiseMap, g: PiecewiseMap) -> list[Inequality]:
    out = []
    Mf = M_of(f)
    f_inv = invert(f)
    for y in g.breakpoints:
        x = f_inv(y)
        out.append(
            Inequality(
                f"den(f^-1({y})) <= 2M(f)max(|p'|,q')",
                x.denominator,
                2 * Mf * max(abs(y.numerator), y.denominator),
            )
        )
    return out


def check_product_bounds(f: PiecewiseMap, g: PiecewiseMap, fg: PiecewiseMap | None = None) -> LemmaReport:
    """The statements valid for an arbitrary second factor ``g``."""
    if fg is None:
        fg = compose(f, g)
    candidates = set(f.breakpoints) | {invert(f)(y) for y in g.breakpoints}
    ineqs = [Inequality("M(fg) <= 2M(f)M(g)", M_of(fg), 2 * M_of(f) * M_of(g))]
    ineqs += _preimage_denominators(f, g)
    return LemmaReport(ineqs, set(fg.breakpoints) <= candidates)


def generator_map(s) -> PiecewiseMap:
    """Accept ``("b", -1)`` or text such as ``"b^-1"`` / ``"B"``."""
    if isinstance(s, str):
        w = parse_word(s, R_MODEL)
        if len(w) != 1:
            raise ValueError(f"{s!r} is not a single generator of S_G0")
        s = w.letters[0]
    return S_G0[tuple(s)]


def check_estimation_lemmas(f: PiecewiseMap, s) -> LemmaReport:
    """Evaluate both sides of every estimate for ``fs`` with ``s`` in S_{G0}."""
    sm = generator_map(s)
    fs = compose(f, sm)
    report = check_product_bounds(f, sm, fs)
    Cf = C_of(f)
    report.inequalities += [
        Inequality("D(fs) <= 4C(f)", D_of(fs), 4 * Cf),
        Inequality("M(fs) <= 6M(f)", M_of(fs), 6 * M_of(f)),
        Inequality("C(fs) <= 6C(f)", C_of(fs), 6 * Cf),
    ]
    return report


@dataclass
class LemmaTally:
    pairs: int = 0
    products: int = 0
    checked: dict[str, int] | None = None
    failed: dict[str, int] | None = None
    examples: list[str] | None = None

    def __post_init__(self):
        self.checked = self.checked or {}
        self.failed = self.failed or {}
        self.examples = self.examples or []

    @property
    def ok(self) -> bool:
        return not any(self.failed.values())

    def add(self, report: LemmaReport, label: str) -> None:
        names = [("den(f^-1(y)) <= 2M(f)max(|p'|,q')" if i.name.startswith("den(") else i.name, i.ok)
                 for i in report.inequalities]
        names.append(("B(fg) in B(f) u f^-1(B(g))", report.breakpoint_inclusion))
        for name, ok in names:
            self.checked[name] = self.checked.get(name, 0) + 1
            self.failed.setdefault(name, 0)
            if not ok:
                self.failed[name] += 1
                if len(self.examples) < 10:
                    self.examples.append(f"{name}: {label}")


def lemma_suite(samples: int, max_len: int = 14, seed: int = 0) -> LemmaTally:
    """Check the estimates on ``samples`` pairs ``(f, s)`` with ``|f| < max_len``.

    The elements ``f`` are prefixes of random walks over S_{G0}, so each step
    costs one composition.  The end points of consecutive walks are also
    multiplied, to exercise the bounds valid for an arbitrary second factor.
    """
    rng = random.Random(seed)
    keys = sorted(S_G0)
    tally = LemmaTally()
    previous: tuple[PiecewiseMap, list] | None = None
    while tally.pairs < samples:
        f, walk = IDENTITY, []
        for _ in range(min(max_len, samples - tally.pairs)):
            s = rng.choice(keys)
            tally.add(check_estimation_lemmas(f, s), str(GroupWord.from_letters(walk + [s], R_MODEL)))
            tally.pairs += 1
            f = compose(f, S_G0[s])
            walk.append(s)
        if previous is not None:
            g, gwalk = previous
            tally.add(check_product_bounds(f, g), f"f = {GroupWord.from_letters(walk, R_MODEL)}, "
                                                  f"g = {GroupWord.from_letters(gwalk, R_MODEL)}")
            tally.products += 1
        previous = (f, walk)
    return tally
