"""Brute-force reference computations on plain dicts {word string: Fraction}.

Deliberately independent of the library's Series machinery.
"""

from fractions import Fraction
from itertools import product


def words(alphabet, max_len):
    out = []
    for n in range(max_len + 1):
        out.extend("".join(t) for t in product(alphabet, repeat=n))
    return out


def cauchy(f, g, w):
    return sum((f.get(w[:i], 0) * g.get(w[i:], 0) for i in range(len(w) + 1)), Fraction(0))


def compositions(w):
    """All ways to cut w into non-empty consecutive blocks."""
    n = len(w)
    if n == 0:
        yield ()
        return
    for mask in range(1 << (n - 1)):
        blocks, start = [], 0
        for i in range(1, n):
            if mask >> (i - 1) & 1:
                blocks.append(w[start:i])
                start = i
        blocks.append(w[start:])
        yield tuple(blocks)


def star_coeff(f, w, mod=None):
    """sum over compositions of w of the product of f on the blocks."""
    total = 0
    for blocks in compositions(w):
        term = 1
        for b in blocks:
            term *= f.get(b, 0)
            if not term:
                break
        total += term
    return total % mod if mod else Fraction(total)


def v_p_by_factoring(q: Fraction, p: int):
    import sympy

    num = sympy.factorint(abs(q.numerator)).get(p, 0)
    den = sympy.factorint(q.denominator).get(p, 0)
    return num - den
