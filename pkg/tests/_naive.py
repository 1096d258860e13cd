"""Deliberately naive reference implementations used as test oracles.

Everything here works on plain ``{word-tuple: Fraction}`` dicts with no
packing, no degree bucketing and no truncation cleverness, so that the
library's optimized arithmetic can be checked against an independent
route.  Slow on purpose; only exercised at small degree.
"""

from fractions import Fraction
from math import factorial


def n_mul(a: dict, b: dict, degrees, D: int) -> dict:
    out = {}
    for w1, c1 in a.items():
        for w2, c2 in b.items():
            w = w1 + w2
            if sum(degrees[l] for l in w) > D:
                continue
            out[w] = out.get(w, Fraction(0)) + c1 * c2
    return {w: c for w, c in out.items() if c}


def n_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for w, c in b.items():
        out[w] = out.get(w, Fraction(0)) + c
    return {w: c for w, c in out.items() if c}


def n_scale(a: dict, s) -> dict:
    return {w: s * c for w, c in a.items() if s * c}


def n_exp(x: dict, degrees, D: int) -> dict:
    out = {(): Fraction(1)}
    power = {(): Fraction(1)}
    for k in range(1, D + 1):
        power = n_mul(power, x, degrees, D)
        out = n_add(out, n_scale(power, Fraction(1, factorial(k))))
    return out


def n_log(x: dict, degrees, D: int) -> dict:
    u = n_add(x, {(): Fraction(-1)})
    out = {}
    power = {(): Fraction(1)}
    for k in range(1, D + 1):
        power = n_mul(power, u, degrees, D)
        out = n_add(out, n_scale(power, Fraction((-1) ** (k + 1), k)))
    return out


def n_commutator(a: dict, b: dict, degrees, D: int) -> dict:
    return n_add(n_mul(a, b, degrees, D), n_scale(n_mul(b, a, degrees, D), Fraction(-1)))
