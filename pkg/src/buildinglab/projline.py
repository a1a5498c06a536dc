"""The projective line P = F + {inf} and arithmetic recovered from it.

The group of interest is generated by the translations tau_a: x -> a + x
and the involution iota: x -> -x^-1, acting on P with the conventions
0^-1 = inf, inf^-1 = 0, -inf = inf, and a + inf = inf for finite a.  Those
conventions are centralized in the pl_* kernel below; every other function
goes through it, so the degenerate cases are decided in exactly one place.
The kernel additionally totalizes inf + inf = inf, which only matters when
both arguments of the triple product sit at infinity.

The triple product map (x, y) -> x*y*x is expressed through the generators
by the identity

    x*y*x = (x^-1 - (x + y^-1)^-1)^-1 - x,

valid for all finite x, y including the degenerate products x*y = 0 and
x*y = -1, where the intermediate terms pass through inf and come back.
(The package test suite pins this down exhaustively over F5 before
anything else relies on it.)  Squaring is the special case y = 1, extended
to infinity through x^2 = -iota(iota(x)^2), and the full multiplication is
recovered from squares: in odd or zero characteristic via
2xy = (x+y)^2 - x^2 - y^2 followed by inverting the doubling map, in
characteristic 2 via x*y^2*x = (xy)^2 followed by the inverse of the
Frobenius.  Comparing this recovered product against the native field
product keeps the two routes honest against each other.
"""

from __future__ import annotations

from typing import Iterable

from .errors import InvalidSpec, PrecisionExhausted
from .localfield import Field, parse_element


class _Infinity:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "inf"


INF = _Infinity()


def is_inf(x) -> bool:
    return x is INF


# -- the convention kernel --------------------------------------------------

def pl_inv(field: Field, x):
    """Extended inversion: 0 <-> inf."""
    if x is INF:
        return field.zero
    if field.is_zero(x):
        return INF
    return field.inv(x)


def pl_neg(field: Field, x):
    """Extended negation: -inf = inf."""
    if x is INF:
        return INF
    return field.neg(x)


def pl_add(field: Field, x, y):
    """Extended addition: a + inf = inf (totalized to inf + inf = inf)."""
    if x is INF or y is INF:
        return INF
    return field.add(x, y)


def pl_sub(field: Field, x, y):
    return pl_add(field, x, pl_neg(field, y))


# -- generators -------------------------------------------------------------

def tau(field: Field, a, x):
    """Translation by the finite constant a."""
    if a is INF:
        raise InvalidSpec("translation constant must be finite")
    return pl_add(field, a, x)


def iota(field: Field, x):
    """x -> -x^-1; an involution on the whole line."""
    return pl_neg(field, pl_inv(field, x))


def pl_apply(field: Field, word: Iterable, x):
    """Apply a word in the generators, given as pairs ("tau", a) and
    ("iota", None), left factor first."""
    for op in word:
        name = op[0]
        if name == "tau":
            x = tau(field, op[1], x)
        elif name == "iota":
            x = iota(field, x)
        else:
            raise InvalidSpec(f"unknown generator {name!r}")
    return x


# -- recovered arithmetic ----------------------------------------------------

def hua_triple_product(field: Field, x, y):
    """(x^-1 - (x + y^-1)^-1)^-1 - x; equals x*y*x for finite x, y."""
    t1 = pl_inv(field, x)
    t2 = pl_inv(field, pl_add(field, x, pl_inv(field, y)))
    return pl_sub(field, pl_inv(field, pl_sub(field, t1, t2)), x)


def recover_square(field: Field, x):
    """x^2 through the triple product (y = 1); at infinity through the
    inversion chart, where x^2 = -iota(iota(x)^2)."""
    if x is INF:
        inner = hua_triple_product(field, iota(field, x), field.one)
        return pl_neg(field, iota(field, inner))
    return hua_triple_product(field, x, field.one)


def _halve(field: Field, w):
    # inverse of the additive doubling map z -> z + z (char != 2)
    two = field.add(field.one, field.one)
    return field.mul(w, field.inv(two))


def recover_multiplication(field: Field, x, y):
    """The product x*y computed without using the native two-argument
    product of the field (save constants): squares come from the triple
    product, and the square data is resolved by halving or, in
    characteristic 2, by the inverse Frobenius applied to (xy)^2."""
    if x is INF or y is INF:
        raise InvalidSpec("recovered product is defined for finite points")
    if field.char == 2:
        ysq = recover_square(field, y)
        w = hua_triple_product(field, x, ysq)  # x y^2 x = (xy)^2
        return field.frobenius_inv(w)
    s_xy = recover_square(field, pl_add(field, x, y))
    s_x = recover_square(field, x)
    s_y = recover_square(field, y)
    w = pl_sub(field, pl_sub(field, s_xy, s_x), s_y)  # 2xy
    return _halve(field, w)


# -- sampling and agreement reports ------------------------------------------

def sample_point(field: Field, rng, allow_inf: bool = True):
    if allow_inf and rng.random() < 0.08:
        return INF
    if field.kind == "finite":
        return field.random_element(rng)
    return field.random_element(rng, min_val=-2, max_val=2, nonzero=False)


def recovery_check(field: Field, pairs: int, seed: int) -> dict:
    """Compare the triple product and the recovered binary product against
    native multiplication on `pairs` sampled finite pairs, forcing the
    degenerate products x*y = 0 and x*y = -1 into the stream.  A sample on
    which the truncated model runs out of digits is recorded as skipped,
    never as agreement.
    """
    import random as _random

    rng = _random.Random(seed)
    compared = skipped = 0
    failures = []
    drawn = 0
    max_draw = 3 * pairs + 30
    while compared < pairs and drawn < max_draw:
        drawn += 1
        x = sample_point(field, rng, allow_inf=False)
        mode = drawn % 10
        if mode == 7:
            y = field.zero                       # forces x*y = 0
        elif mode == 3 and not field.is_zero(x):
            y = field.neg(field.inv(x))          # forces x*y = -1
        else:
            y = sample_point(field, rng, allow_inf=False)
        try:
            hua = hua_triple_product(field, x, y)
            native_triple = field.mul(field.mul(x, y), x)
            ok_hua = (hua is not INF) and field.eq(hua, native_triple)
            rec = recover_multiplication(field, x, y)
            native = field.mul(x, y)
            ok_mul = (rec is not INF) and field.eq(rec, native)
        except PrecisionExhausted:
            skipped += 1
            continue
        compared += 1
        if not (ok_hua and ok_mul):
            failures.append({
                "x": field.format_element(x),
                "y": field.format_element(y),
                "triple_ok": ok_hua,
                "product_ok": ok_mul,
            })
    return {
        "field": field.describe(),
        "pairs_compared": compared,
        "skipped": skipped,
        "failures": failures,
        "ok": compared >= pairs and not failures,
    }


# -- parsing ------------------------------------------------------------------

def parse_point(field: Field, text: str):
    text = text.strip()
    if text in ("inf", "oo", "infinity"):
        return INF
    return parse_element(field, text)


def format_point(field: Field, x) -> str:
    return "inf" if x is INF else field.format_element(x)
