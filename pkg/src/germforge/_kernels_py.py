"""Pure-Python implementations of the hot inner loops.

The compiled twin lives in ``_kernels.pyx``; :mod:`germforge.kernels` picks
one at import time.  Both expose exactly the same four functions and must
stay behaviourally identical (``tests/test_kernels.py`` compares them).

Term maps are ``dict[exponent-tuple, coefficient]``.  ``*_q`` variants work
for any exact coefficient type with native ``+``/``*`` and ``== 0`` (used
with `fractions.Fraction`); ``*_fp`` variants take int coefficients and a
prime ``p`` and reduce mod ``p``.
"""

from __future__ import annotations

IMPLEMENTATION = "python"


def mul_terms_q(a_items, b_items, trunc):
    """Truncated convolution of two term lists.

    ``a_items``/``b_items`` are sequences of ``(mono, degree, coeff)`` sorted
    by ascending degree.  Returns a dict with exact zeros dropped.
    """
    out = {}
    for ma, da, ca in a_items:
        limit = trunc - da
        if limit < 0:
            break
        for mb, db, cb in b_items:
            if db > limit:
                break
            key = tuple(x + y for x, y in zip(ma, mb))
            prev = out.get(key)
            if prev is None:
                out[key] = ca * cb
            else:
                s = prev + ca * cb
                if s == 0:
                    del out[key]
                else:
                    out[key] = s
    return out


def mul_terms_fp(a_items, b_items, trunc, p):
    out = {}
    for ma, da, ca in a_items:
        limit = trunc - da
        if limit < 0:
            break
        for mb, db, cb in b_items:
            if db > limit:
                break
            key = tuple(x + y for x, y in zip(ma, mb))
            prev = out.get(key)
            if prev is None:
                out[key] = ca * cb % p
            else:
                s = (prev + ca * cb) % p
                if s == 0:
                    del out[key]
                else:
                    out[key] = s
    return out


def row_submul_q(row, src, c):
    """In place ``row -= c * src`` on sparse rows, dropping exact zeros."""
    for key, v in src.items():
        prev = row.get(key)
        if prev is None:
            row[key] = -c * v
        else:
            s = prev - c * v
            if s == 0:
                del row[key]
            else:
                row[key] = s


def row_submul_fp(row, src, c, p):
    for key, v in src.items():
        prev = row.get(key)
        if prev is None:
            row[key] = -c * v % p
        else:
            s = (prev - c * v) % p
            if s == 0:
                del row[key]
            else:
                row[key] = s
