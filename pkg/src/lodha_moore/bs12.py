"""BS(1,2) = <x, t | t x t^-1 = x^2>, abstractly and inside G0 via t -> g1, x -> g2."""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator

from .ppsl2 import IDENTITY, PiecewiseMap, compose, compose_all, invert
from .words import (
    BS,
    E2_UPPER,
    GroupWord,
    C_of,
    D_of,
    M_of,
    eval_R,
    parse_word,
)

G1_WORD = parse_word("b c a^-1 c^-1 a b^-1")
G2_WORD = parse_word("b b a^-1 b^-1 a b^-1")
G1 = eval_R(G1_WORD)
G2 = eval_R(G2_WORD)

# t x t^-1 x^-2 is sent to the identity when letters act left to right;
# the other orientation t^-1 x t x^-2 is not (see tests).
RELATOR_WORD = parse_word("t x t^-1 x^-2")


@dataclass(frozen=True)
class AffineRep:
    """``u -> 2**e * u + q``; words multiply as composed maps, leftmost outermost."""

    e: int = 0
    q: Fraction = Fraction(0)

    def __mul__(self, other: "AffineRep") -> "AffineRep":
        return AffineRep(self.e + other.e, self.q + other.q * Fraction(2) ** self.e)

    def inverse(self) -> "AffineRep":
        scale = Fraction(2) ** -self.e
        return AffineRep(-self.e, -self.q * scale)


_AFFINE = {
    ("x", 1): AffineRep(0, Fraction(1)),
    ("x", -1): AffineRep(0, Fraction(-1)),
    ("t", 1): AffineRep(1, Fraction(0)),
    ("t", -1): AffineRep(-1, Fraction(0)),
}


def _as_bs_word(word) -> GroupWord:
    if isinstance(word, str):
        word = parse_word(word, BS)
    if word.alphabet not in (None, BS):
        raise ValueError(f"expected a word over x, t; got the {word.alphabet} alphabet")
    return word


def affine(word: GroupWord | str) -> AffineRep:
    rep = AffineRep()
    for letter in _as_bs_word(word).expanded():
        rep = rep * _AFFINE[letter]
    return rep


@dataclass(frozen=True)
class BSNormalForm:
    """``t^-m x^N t^n``; N is odd whenever m and n are both positive."""

    m: int
    N: int
    n: int

    def __post_init__(self):
        if self.m < 0 or self.n < 0:
            raise ValueError("m and n are nonnegative")
        if self.m > 0 and self.n > 0 and self.N % 2 == 0:
            raise ValueError(f"{self} is reducible: N must be odd when m, n > 0")

    def word(self) -> GroupWord:
        return GroupWord.from_letters([("t", -self.m), ("x", self.N), ("t", self.n)], BS)

    def __str__(self) -> str:
        return f"t^-{self.m} x^{self.N} t^{self.n}"


def _two_adic_depth(q: Fraction) -> int:
    den = q.denominator
    k = den.bit_length() - 1
    if den != 1 << k:
        raise ValueError(f"{q} is not a dyadic rational")
    return k


def normal_form_of(rep: AffineRep) -> BSNormalForm:
    m = max(0, -rep.e, _two_adic_depth(rep.q))
    N = rep.q * 2**m
    assert N.denominator == 1
    return BSNormalForm(m, int(N), rep.e + m)


def bs_normal_form(word: GroupWord | str) -> BSNormalForm:
    return normal_form_of(affine(word))


# --- the embedding into G0 ---------------------------------------------------

_EMBED = {
    ("t", 1): G1,
    ("t", -1): invert(G1),
    ("x", 1): G2,
    ("x", -1): invert(G2),
}


def embed(word: GroupWord | str) -> PiecewiseMap:
    """Substitute g1 for t and g2 for x; letters act left to right."""
    f = IDENTITY
    for letter in _as_bs_word(word).expanded():
        f = compose(f, _EMBED[letter])
    return f


@lru_cache(maxsize=None)
def g1_power(k: int) -> PiecewiseMap:
    if k == 0:
        return IDENTITY
    step = 1 if k > 0 else -1
    return compose(g1_power(k - step), _EMBED[("t", step)])


@lru_cache(maxsize=None)
def g2_power(k: int) -> PiecewiseMap:
    if k == 0:
        return IDENTITY
    step = 1 if k > 0 else -1
    return compose(g2_power(k - step), _EMBED[("x", step)])


def normal_form_map(nf: BSNormalForm) -> PiecewiseMap:
    """``embed(t^-m x^N t^n)``, from cached powers."""
    return compose_all([g1_power(-nf.m), g2_power(nf.N), g1_power(nf.n)])


def certificate_map(m: int, N: int, n: int) -> PiecewiseMap:
    """The function ``t -> g1^-m(g2^N(g1^n(t)))``, i.e. ``g1^n`` is applied first.

    This is the element ``embed(t^n x^N t^-m)``; its breakpoint witness
    depends on ``n``, the exponent of the factor applied first.
    """
    return compose_all([g1_power(n), g2_power(N), g1_power(-m)])


def bs_ball_words(radius: int) -> Iterator[GroupWord]:
    """All freely reduced words over ``x, t`` of length at most ``radius``."""
    letters = [("x", 1), ("x", -1), ("t", 1), ("t", -1)]

    def extend(prefix: list):
        yield GroupWord.from_letters(prefix, BS)
        if len(prefix) == radius:
            return
        for letter in letters:
            if prefix and prefix[-1] == (letter[0], -letter[1]):
                continue
            prefix.append(letter)
            yield from extend(prefix)
            prefix.pop()

    yield from extend([])


# --- iterate formulas --------------------------------------------------------


@dataclass
class IterateCheck:
    label: str
    k: int
    interval: tuple[Fraction, Fraction]
    expected: tuple[int, int, int, int]
    actual: tuple[int, int, int, int] | None

    @property
    def ok(self) -> bool:
        return self.actual is not None and tuple(self.actual) == tuple(self.expected)


def _piece_on(f: PiecewiseMap, lo: Fraction, hi: Fraction):
    """The matrix of ``f`` on ``[lo, hi]`` if that interval lies in one component."""
    if any(lo < s < hi for s in f.breakpoints):
        return None
    return f.piece_at((lo + hi) / 2)


def _norm(a, b, c, d):
    from .ppsl2 import normalize_mat

    return tuple(normalize_mat(a, b, c, d))


def check_iterates(n_max: int, N_max: int) -> list[IterateCheck]:
    """Compare exact powers of g1, g2 with the closed forms for their iterates."""
    if n_max < 0 or N_max < 1:
        raise ValueError("bounds must be positive")
    half, one = Fraction(1, 2), Fraction(1)
    out = []
    for n in range(n_max + 1):
        p = 2**n
        out.append(
            IterateCheck("g1^n on [0,1/2]", n, (Fraction(0), half),
                         _norm(p, 0, 2 * (p - 1), 1), _piece_on(g1_power(n), Fraction(0), half))
        )
        out.append(
            IterateCheck("g1^-n on [1/2,1]", n, (half, one),
                         _norm(2 * p - 1, 1 - p, 2 * p - 2, 2 - p), _piece_on(g1_power(-n), half, one))
        )
    for N in range(1, N_max + 1):
        f = g2_power(N)
        lo, mid, hi = Fraction(0), Fraction(1, N + 2), Fraction(1, N + 1)
        out.append(IterateCheck("g2^N on [0,1/(N+2)]", N, (lo, mid), _norm(1, 0, -N, 1), _piece_on(f, lo, mid)))
        out.append(
            IterateCheck("g2^N on [1/(N+2),1/(N+1)]", N, (mid, hi),
                         _norm(N + 3, -1, N + 4, -1), _piece_on(f, mid, hi))
        )
    return out


# --- certificates ------------------------------------------------------------


def witness_point(N: int, k: int) -> Fraction:
    if N > 0:
        return Fraction(1, N * 2**k + 2)
    M = -N
    return Fraction(M * 2**k + 1, M * 2**k + 2)


@dataclass
class Certificate:
    m: int
    N: int
    n: int
    kind: str
    witness: Fraction | None
    witness_in_B: bool
    D: int
    M: int
    C: int
    D_inv: int
    M_inv: int
    C_inv: int
    bound: int

    @property
    def ok(self) -> bool:
        if self.kind == "g1-power":
            return self.C >= self.bound
        return self.witness_in_B and self.D >= self.bound


def breakpoint_certificate(m: int, N: int, n: int) -> Certificate:
    """Check the breakpoint witness and ``D(g) >= |N| 2^n + 2`` for ``certificate_map``.

    With ``N == 0`` the element is a power of g1 and the check becomes
    ``C(g1^k) >= 2^|k|``.
    """
    if m < 0 or n < 0:
        raise ValueError("m and n are nonnegative")
    g = certificate_map(m, N, n)
    g_inv = invert(g)
    if N == 0:
        k = n - m
        witness, in_b, bound, kind = None, False, 2 ** abs(k), "g1-power"
    else:
        witness = witness_point(N, n)
        in_b = witness in g.breakpoints
        bound, kind = abs(N) * 2**n + 2, "breakpoint"
    return Certificate(
        m, N, n, kind, witness, in_b,
        D_of(g), M_of(g), C_of(g), D_of(g_inv), M_of(g_inv), C_of(g_inv), bound,
    )


# --- the undistortion table --------------------------------------------------


def _ln_decimal(x: int, digits: int) -> Decimal:
    with localcontext() as ctx:
        ctx.prec = digits + 10
        return Decimal(x).ln()


def _round(value: Decimal, digits: int) -> Decimal:
    with localcontext() as ctx:
        ctx.prec = digits
        return +value


def chain_holds(C: int, C_inv: int, N: int, m: int, n: int) -> bool:
    """Exact check of ``(ln C + ln C_inv)/4 >= (ln|N| + m + n)/6``.

    Equivalent to ``(C C_inv)^3 >= N^2 e^(2(m+n))``; ``E2_UPPER > e^2`` makes
    the integer comparison below sufficient.
    """
    k = m + n
    lhs = (C * C_inv) ** 3 * E2_UPPER.denominator**k
    rhs = N * N * E2_UPPER.numerator**k
    return lhs >= rhs


@dataclass
class UndistortionRow:
    cert: Certificate
    lhs: Decimal
    rhs: Decimal
    ok: bool

    CSV_HEADER = (
        "m", "N", "n", "D", "M", "C", "D_inv", "M_inv", "C_inv",
        "lhs_quarter_log_sum", "rhs_sixth_sum",
    )

    def csv_row(self) -> list[str]:
        c = self.cert
        return [
            str(v) for v in (c.m, c.N, c.n, c.D, c.M, c.C, c.D_inv, c.M_inv, c.C_inv)
        ] + [str(self.lhs), str(self.rhs)]


def undistortion_row(m: int, N: int, n: int, digits: int = 30) -> UndistortionRow:
    if N == 0:
        raise ValueError("rows need N != 0")
    cert = breakpoint_certificate(m, N, n)
    with localcontext() as ctx:
        ctx.prec = digits + 10
        lhs = (_ln_decimal(cert.C, digits) + _ln_decimal(cert.C_inv, digits)) / 4
        rhs = (_ln_decimal(abs(N), digits) + m + n) / 6
    ok = chain_holds(cert.C, cert.C_inv, N, m, n)
    return UndistortionRow(cert, _round(lhs, digits), _round(rhs, digits), ok)


def undistortion_table(grid: Iterable[tuple[int, int, int]]) -> list[UndistortionRow]:
    return [undistortion_row(m, N, n) for m, N, n in grid if N != 0]


def grid(m_range: range, N_range: Iterable[int], n_range: range) -> list[tuple[int, int, int]]:
    return [(m, N, n) for m in m_range for N in N_range if N != 0 for n in n_range]


@dataclass
class BallCheck:
    radius: int
    words: int
    normal_forms: int
    distinct_maps: int
    mismatches: list[tuple[str, str]]

    @property
    def ok(self) -> bool:
        return not self.mismatches and self.distinct_maps == self.normal_forms


def ball_check(radius: int) -> BallCheck:
    """Every reduced word of length at most ``radius`` embeds to the same map as
    its normal form, and distinct normal forms embed to distinct maps."""
    letters = [("x", 1), ("x", -1), ("t", 1), ("t", -1)]
    maps: dict[BSNormalForm, PiecewiseMap] = {}
    mismatches = []
    count = 0
    stack = [((), IDENTITY, AffineRep())]
    while stack:
        prefix, f, rep = stack.pop()
        count += 1
        nf = normal_form_of(rep)
        g = maps.get(nf)
        if g is None:
            g = maps[nf] = normal_form_map(nf)
        if g != f:
            mismatches.append((str(GroupWord.from_letters(prefix, BS)), str(nf)))
        if len(prefix) == radius:
            continue
        for letter in letters:
            if prefix and prefix[-1] == (letter[0], -letter[1]):
                continue
            stack.append((prefix + (letter,), compose(f, _EMBED[letter]), rep * _AFFINE[letter]))
    return BallCheck(radius, count, len(maps), len(set(maps.values())), mismatches)
