"""Independent reference implementations used to cross-check the library.

Nothing here imports the composition code under test: generators are written
out as plain piecewise functions of a Fraction, words are applied pointwise,
and the BS(1,2) and Thompson checks use their own small models.
"""

from fractions import Fraction as Q

HALF = Q(1, 2)


def a(t):
    return t + 1


def a_inv(t):
    return t - 1


def b(t):
    if t <= 0:
        return t
    if t <= HALF:
        return t / (1 - t)
    if t <= 1:
        return (3 * t - 1) / t
    return t + 1


def b_inv(t):
    if t <= 0:
        return t
    if t <= 1:
        return t / (t + 1)
    if t <= 2:
        return 1 / (3 - t)
    return t - 1


def c(t):
    return 2 * t / (1 + t) if 0 <= t <= 1 else t


def c_inv(t):
    return t / (2 - t) if 0 <= t <= 1 else t


POINTWISE = {
    ("a", 1): a, ("a", -1): a_inv,
    ("b", 1): b, ("b", -1): b_inv,
    ("c", 1): c, ("c", -1): c_inv,
}


def apply_letters(letters, t):
    """Letters act left to right: the first letter is applied first."""
    for sym, e in letters:
        step = POINTWISE[(sym, 1 if e > 0 else -1)]
        for _ in range(abs(e)):
            t = step(t)
    return t


# Displayed piecewise tables: breakpoints and one (a, b, c, d) per component,
# for t -> (a t + b)/(c t + d), already in the normalized form.
DISPLAYED = {
    "a": ([], [(1, 1, 0, 1)]),
    "a^-1": ([], [(1, -1, 0, 1)]),
    "b": ([0, HALF, 1], [(1, 0, 0, 1), (1, 0, -1, 1), (3, -1, 1, 0), (1, 1, 0, 1)]),
    "b^-1": ([0, 1, 2], [(1, 0, 0, 1), (1, 0, 1, 1), (0, 1, -1, 3), (1, -1, 0, 1)]),
    "c": ([0, 1], [(1, 0, 0, 1), (2, 0, 1, 1), (1, 0, 0, 1)]),
    "c^-1": ([0, 1], [(1, 0, 0, 1), (1, 0, -1, 2), (1, 0, 0, 1)]),
    "b c a^-1 c^-1 a b^-1": ([0, HALF, 1], [(1, 0, 0, 1), (2, 0, 2, 1), (0, 1, -2, 3), (1, 0, 0, 1)]),
    "b b a^-1 b^-1 a b^-1": (
        [0, Q(1, 3), HALF, 1],
        [(1, 0, 0, 1), (1, 0, -1, 1), (4, -1, 5, -1), (0, 1, -1, 2), (1, 0, 0, 1)],
    ),
}


def sample_points():
    """Rationals spread over the interesting range, avoiding nothing in particular."""
    pts = {Q(k, 7) for k in range(-21, 29)}
    pts |= {Q(1, n) for n in range(2, 20)} | {Q(n - 1, n) for n in range(2, 20)}
    pts |= {Q(k, 1) for k in range(-5, 6)}
    return sorted(pts)


# --- BS(1,2) as 2x2 upper triangular integer-free matrices -----------------


def bs_matrix(word_letters):
    """Affine maps as matrices ((2^e, q), (0, 1)); leftmost letter outermost."""
    gens = {
        ("x", 1): ((Q(1), Q(1)), (Q(0), Q(1))),
        ("x", -1): ((Q(1), Q(-1)), (Q(0), Q(1))),
        ("t", 1): ((Q(2), Q(0)), (Q(0), Q(1))),
        ("t", -1): ((Q(1, 2), Q(0)), (Q(0), Q(1))),
    }
    m = ((Q(1), Q(0)), (Q(0), Q(1)))
    for sym, e in word_letters:
        g = gens[(sym, 1 if e > 0 else -1)]
        for _ in range(abs(e)):
            m = (
                (m[0][0] * g[0][0] + m[0][1] * g[1][0], m[0][0] * g[0][1] + m[0][1] * g[1][1]),
                (m[1][0] * g[0][0] + m[1][1] * g[1][0], m[1][0] * g[0][1] + m[1][1] * g[1][1]),
            )
    return m


# --- Thompson's F acting on dyadic rationals in [0, 1] ---------------------


def dyadic_of(address: str) -> Q:
    """Left end point of the cylinder ``address``."""
    return sum((Q(1, 2 ** (i + 1)) for i, ch in enumerate(address) if ch == "1"), Q(0))


def pl_apply(rows, t: Q) -> Q:
    """Apply a prefix table as the PL map of [0, 1] with the dyadic subdivision."""
    for d, r in rows:
        lo, width = dyadic_of(d), Q(1, 2 ** len(d))
        if lo <= t < lo + width:
            return dyadic_of(r) + (t - lo) * Q(1, 2 ** len(r)) / width
    assert t == 1
    return Q(1)
