"""Shared test corpus: small curves with known Frobenius data.

Each entry is (q, coefficients a1..a6, trace, f0, fE).  The traces and
conductors were frozen from an exhaustive survey of curves over fields of
order at most 13; the point counts behind them are re-derived independently
in test_curve.py by naive (x, y) enumeration.
"""
from __future__ import annotations

from functools import lru_cache
from math import gcd

from isopower import curve_create, field_create

FIELDS = {2: (2, 1), 3: (3, 1), 4: (2, 2), 5: (5, 1), 7: (7, 1), 8: (2, 3), 9: (3, 2),
          11: (11, 1), 13: (13, 1)}

# ordinary curves whose endomorphism ring is Z[pi]
YES_ORDINARY = [
    (5, (0, 0, 0, 1, 1), -3, 1, 1),     # D = -11
    (4, (1, 0, 2, 0, 0), -1, 1, 1),     # D = -15, h = 2
    (8, (1, 0, 0, 0, 3), -3, 1, 1),     # D = -23, h = 3
    (7, (0, 0, 0, 1, 4), -2, 1, 1),     # D = -24
    (11, (0, 0, 0, 1, 1), -2, 1, 1),    # D = -40
    (9, (0, 4, 0, 0, 4), -1, 1, 1),     # D = -35
    (5, (0, 0, 0, 1, 2), 2, 2, 2),      # D = -16, End = Z[2i]
    (7, (0, 0, 0, 3, 1), -4, 2, 2),     # D = -12
    (9, (0, 4, 0, 0, 2), 2, 2, 2),      # D = -32
    (11, (0, 0, 0, 1, 3), -6, 1, 1),    # D = -8
]

# curves where End E is strictly bigger than Z[pi] at a prime l != p
NO_CURVES = [
    (5, (0, 0, 0, 4, 0), -2, 2, 1),     # y^2 = x^3 - x, End = Z[i]
    (7, (0, 0, 0, 0, 2), -1, 3, 1),
    (13, (0, 0, 0, 0, 5), -2, 4, 1),
    (7, (0, 0, 0, 3, 0), 0, 2, 1),      # supersingular over F_7
    (11, (0, 0, 0, 2, 0), 0, 2, 1),     # supersingular over F_11
]

# supersingular over F_p with End = Z[pi] (table rows with answer YES)
YES_SUPERSINGULAR = [
    (7, (0, 0, 0, 1, 0), 0, 2, 2),
    (11, (0, 0, 0, 0, 1), 0, 2, 2),
    (13, (0, 0, 0, 1, 4), 0, 1, 1),
]

RANK4_CURVES = [
    (4, (0, 0, 1, 0, 0), -4),
    (9, (0, 0, 0, 1, 0), -6),
]


@lru_cache(maxsize=None)
def curve(q: int, coeffs: tuple):
    p, m = FIELDS[q]
    return curve_create(field_create(p, m), *coeffs)


def curves(entries):
    return [curve(e[0], e[1]) for e in entries]


def entry_id(entry) -> str:
    return f"q{entry[0]}-" + "".join(str(c) for c in entry[1])


def brute_class_number(D):
    """Count reduced primitive forms by trying every (a, b, c) in the reduced box."""
    h = 0
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a, a + 1):
            for c in range(a, (b * b - D) // (4 * a) + 1):
                if b * b - 4 * a * c != D or gcd(gcd(a, b), c) != 1:
                    continue
                if (b < 0 and (abs(b) == a or a == c)):
                    continue
                h += 1
        a += 1
    return h
