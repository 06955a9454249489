"""Elliptic curves in long Weierstrass form over the fields of :mod:`field`.

Points are ``None`` (the point at infinity) or tuples ``(x, y)`` of encoded
field elements.  The group law is the usual chord and tangent construction
written for all characteristics.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Optional

from sympy import factorint

from .. import config
from ..errors import BoundExceeded, FieldMismatch, SingularCurve
from .field import FiniteField, field_create

Point = Optional[tuple]


class EllipticCurve:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over a finite field."""

    def __init__(self, F: FiniteField, a1: int, a2: int, a3: int, a4: int, a6: int):
        for name, a in zip(("a1", "a2", "a3", "a4", "a6"), (a1, a2, a3, a4, a6)):
            if not F.contains(a):
                raise FieldMismatch(f"coefficient {name} is not an element of {F!r}", value=a)
        self.F = F
        self.a = (a1, a2, a3, a4, a6)
        self.a1, self.a2, self.a3, self.a4, self.a6 = self.a
        Fm, Fa, Fs = F.mul, F.add, F.smul
        b2 = Fa(Fm(a1, a1), Fs(4, a2))
        b4 = Fa(Fm(a1, a3), Fs(2, a4))
        b6 = Fa(Fm(a3, a3), Fs(4, a6))
        b8 = F.sub(Fa(Fa(Fm(Fm(a1, a1), a6), Fs(4, Fm(a2, a6))), F.sub(Fm(a2, Fm(a3, a3)), Fm(a4, a4))),
                   Fm(a1, Fm(a3, a4)))
        self.b = (b2, b4, b6, b8)
        c4 = F.sub(Fm(b2, b2), Fs(24, b4))
        disc = F.neg(Fm(Fm(b2, b2), b8))
        disc = F.sub(disc, Fs(8, Fm(b4, Fm(b4, b4))))
        disc = F.sub(disc, Fs(27, Fm(b6, b6)))
        disc = Fa(disc, Fs(9, Fm(b2, Fm(b4, b6))))
        self.c4 = c4
        self.discriminant = disc
        if disc == 0:
            raise SingularCurve("discriminant vanishes", coefficients=list(self.a), field=repr(F))

    def __repr__(self) -> str:
        return f"EllipticCurve({self.F!r}, {list(self.a)})"

    def __eq__(self, other) -> bool:
        return isinstance(other, EllipticCurve) and self.F == other.F and self.a == other.a

    def __hash__(self) -> int:
        return hash((self.F, self.a))

    @property
    def key(self) -> tuple:
        return (self.F.p, self.F.m) + self.a

    @property
    def q(self) -> int:
        return self.F.q

    @cached_property
    def j_invariant(self) -> int:
        F = self.F
        return F.div(F.mul(self.c4, F.mul(self.c4, self.c4)), self.discriminant)

    # -- group law -----------------------------------------------------------
    def is_on(self, P: Point) -> bool:
        if P is None:
            return True
        if not (isinstance(P, tuple) and len(P) == 2 and all(self.F.contains(c) for c in P)):
            return False
        x, y = P
        F = self.F
        lhs = F.add(F.mul(y, y), F.mul(y, F.add(F.mul(self.a1, x), self.a3)))
        return lhs == self._rhs(x)

    def _rhs(self, x: int) -> int:
        F = self.F
        r = F.add(F.mul(F.add(x, self.a2), x), self.a4)
        return F.add(F.mul(r, x), self.a6)

    def check(self, P: Point) -> Point:
        if not self.is_on(P):
            raise FieldMismatch("point is not on this curve over this field", point=P, curve=repr(self))
        return P

    def neg(self, P: Point) -> Point:
        if P is None:
            return None
        F = self.F
        x, y = P
        return (x, F.sub(F.neg(y), F.add(F.mul(self.a1, x), self.a3)))

    def add(self, P: Point, Q: Point) -> Point:
        if P is None:
            return Q
        if Q is None:
            return P
        F = self.F
        a1, a2, a3, a4, a6 = self.a
        x1, y1 = P
        x2, y2 = Q
        if x1 == x2:
            s = F.add(F.add(y1, y2), F.add(F.mul(a1, x2), a3))
            if s == 0:
                return None
            den = F.add(F.add(F.smul(2, y1), F.mul(a1, x1)), a3)
            num = F.sub(F.add(F.add(F.smul(3, F.mul(x1, x1)), F.smul(2, F.mul(a2, x1))), a4), F.mul(a1, y1))
            lam = F.div(num, den)
        else:
            lam = F.div(F.sub(y2, y1), F.sub(x2, x1))
        x3 = F.sub(F.sub(F.sub(F.add(F.mul(lam, lam), F.mul(a1, lam)), a2), x1), x2)
        y3 = F.sub(F.neg(F.mul(lam, F.sub(x3, x1))), F.add(F.add(y1, F.mul(a1, x3)), a3))
        return (x3, y3)

    def sub(self, P: Point, Q: Point) -> Point:
        return self.add(P, self.neg(Q))

    def mul(self, n: int, P: Point) -> Point:
        if n < 0:
            n, P = -n, self.neg(P)
        R = None
        while n:
            if n & 1:
                R = self.add(R, P)
            n >>= 1
            if n:
                P = self.add(P, P)
        return R

    def frobenius(self, P: Point, power: int) -> Point:
        if P is None:
            return None
        return (self.F.pow(P[0], power), self.F.pow(P[1], power))

    # -- points --------------------------------------------------------------
    def ys_over(self, x: int) -> list[int]:
        """The y-coordinates of points with abscissa x, sorted."""
        F = self.F
        h = F.add(F.mul(self.a1, x), self.a3)
        f = self._rhs(x)
        if F.p == 2:
            if h == 0:
                return [F.sqrt(f)]
            z = F.solve_artin_schreier(F.div(f, F.mul(h, h)))
            if z is None:
                return []
            return sorted({F.mul(h, z), F.mul(h, F.add(z, 1))})
        g = F.add(F.smul(4, f), F.mul(h, h))
        s = F.sqrt(g)
        if s is None:
            return []
        inv2 = F.inv(2)
        return sorted({F.mul(F.sub(s, h), inv2), F.mul(F.sub(F.neg(s), h), inv2)})

    def points(self, start: int = 0) -> Iterator[tuple]:
        """Affine points in increasing (x, y) order."""
        for x in range(start, self.F.q):
            for y in self.ys_over(x):
                yield (x, y)

    @cached_property
    def _trace_mask(self) -> int:
        F = self.F
        mask = 0
        for i in range(F.m):
            if F.trace_to_prime(1 << i):
                mask |= 1 << i
        return mask

    def count(self) -> int:
        """#E(F) by running over every abscissa."""
        F = self.F
        if F.q > config.current().bound_q:
            raise BoundExceeded("field too large for enumeration", q=F.q, cap=config.current().bound_q)
        total = 1
        if F.p == 2:
            mask = self._trace_mask
            for x in range(F.q):
                h = F.add(F.mul(self.a1, x), self.a3)
                if h == 0:
                    total += 1
                else:
                    c = F.div(self._rhs(x), F.mul(h, h))
                    if bin(c & mask).count("1") % 2 == 0:
                        total += 2
            return total
        b2, b4, b6, _ = self.b
        if F.prime:
            p = F.p
            sq = bytearray(p)
            for y in range(p):
                sq[y * y % p] = 1
            e4, eb2, e2b4 = 4 % p, b2, 2 * b4 % p
            for x in range(p):
                g = (((e4 * x + eb2) * x + e2b4) * x + b6) % p
                total += 1 if g == 0 else (2 if sq[g] else 0)
            return total
        for x in range(F.q):
            g = F.add(F.mul(F.add(F.mul(F.add(F.smul(4, x), b2), x), F.smul(2, b4)), x), b6)
            if g == 0:
                total += 1
            elif F.is_square(g):
                total += 2
        return total

    @cached_property
    def n_points(self) -> int:
        return self.count()

    @cached_property
    def trace(self) -> int:
        return self.F.q + 1 - self.n_points

    def trace_over(self, k: int) -> int:
        """Trace of the q^k-power Frobenius, from the base trace."""
        t, q = self.trace, self.q
        prev, cur = 2, t
        for _ in range(k - 1):
            prev, cur = cur, t * cur - q * prev
        return cur if k >= 1 else 2

    def count_over(self, k: int) -> int:
        return self.q ** k + 1 - self.trace_over(k)

    def base_change(self, k: int) -> "EllipticCurve":
        return _base_change(self, k)

    # -- group structure -----------------------------------------------------
    def order_exponent(self, P: Point, ell: int, cap: int) -> int:
        """Smallest k <= cap with ell^k P = 0 (P must lie in the ell-power part)."""
        k = 0
        while P is not None:
            if k >= cap:
                raise AssertionError("point is not in the expected Sylow subgroup")
            P = self.mul(ell, P)
            k += 1
        return k

    def dlog_cyclic(self, z: Point, x: Point, n: int, ell: int) -> Optional[int]:
        """u with u*x = z where x has order ell^n, or None if z is not in <x>."""
        if n == 0:
            return 0 if z is None else None
        x0 = self.mul(ell ** (n - 1), x)
        table = {}
        R = None
        for d in range(ell):
            table[R] = d
            R = self.add(R, x0)
        u = 0
        for i in range(n):
            r = self.sub(z, self.mul(u, x))
            t = self.mul(ell ** (n - 1 - i), r)
            if t not in table:
                return None
            u += table[t] * ell ** i
        return u if self.mul(u, x) == z else None

    def sylow(self, N: int, ell: int) -> tuple:
        """Generators of the ell-Sylow subgroup of E(F), given N = #E(F).

        Returns (x, a1, w, b) with the subgroup equal to <x> + <w>, the sum
        direct, x of order ell^a1 and w of order ell^b, a1 >= b.
        """
        a = 0
        M = N
        while M % ell == 0:
            M //= ell
            a += 1
        if a == 0:
            return (None, 0, None, 0)
        cof = M
        x, ox, x0 = None, 0, None
        for P in self.points():
            Q = self.mul(cof, P)
            if Q is None:
                continue
            k = self.order_exponent(Q, ell, a)
            if k > ox:
                x, ox = Q, k
                x0 = self.mul(ell ** (ox - 1), x)
            if ox == a:
                return (x, ox, None, 0)
            b = a - ox
            if b > ox:
                continue
            v = self.dlog_cyclic(self.mul(ell ** b, Q), x, ox, ell)
            if v is None or v % ell ** b:
                continue
            w = self.sub(Q, self.mul(v // ell ** b, x))
            if w is None:
                continue
            kw = self.order_exponent(w, ell, a)
            if kw != b:
                continue
            w0 = self.mul(ell ** (b - 1), w)
            if self.dlog_cyclic(w0, x0, 1, ell) is None:
                return (x, ox, w, b)
        raise AssertionError("Sylow subgroup was not generated; is N correct?")

    def group_structure(self, N: Optional[int] = None) -> tuple:
        """(d1, d2, (P1, P2)) with E(F) = Z/d1 x Z/d2, d1 | d2, generated by P1, P2."""
        if N is None:
            N = self.n_points
        d1 = d2 = 1
        P1 = P2 = None
        for ell in sorted(factorint(N)):
            x, a1, w, b = self.sylow(N, ell)
            d2 *= ell ** a1
            d1 *= ell ** b
            P1 = self.add(P1, x)
            P2 = self.add(P2, w)
        return d1, d2, (P1, P2)


def _base_change_key(E: EllipticCurve, k: int):
    return (E.F.p, E.F.m, E.a, k, config.current().table_cap)


_BC_CACHE: dict = {}


def _base_change(E: EllipticCurve, k: int) -> EllipticCurve:
    if k == 1:
        return E
    key = _base_change_key(E, k)
    hit = _BC_CACHE.get(key)
    if hit is not None:
        return hit
    big = field_create(E.F.p, E.F.m * k)
    coeffs = [big.embed(E.F, a) for a in E.a]
    out = EllipticCurve(big, *coeffs)
    _BC_CACHE[key] = out  # idempotent insert: every writer stores an equal curve
    return out


def curve_create(F: FiniteField, a1: int = 0, a2: int = 0, a3: int = 0, a4: int = 0, a6: int = 0) -> EllipticCurve:
    return EllipticCurve(F, a1, a2, a3, a4, a6)


@dataclass(frozen=True)
class PointCount:
    N: int
    t: int
    charpoly: tuple   # coefficients of x^2 - t x + q^m, highest degree first


def point_count(E: EllipticCurve, m: int = 1) -> PointCount:
    """#E(F_{q^m}), the trace of the q^m-power Frobenius and its characteristic polynomial."""
    cfg = config.current()
    if E.q > cfg.bound_q:
        raise BoundExceeded("base field too large for enumeration", q=E.q, cap=cfg.bound_q)
    if m < 1 or E.F.m * m > cfg.bound_ext:
        raise BoundExceeded("extension degree beyond cap", m=m, cap=cfg.bound_ext)
    t = E.trace_over(m)
    qm = E.q ** m
    return PointCount(qm + 1 - t, t, (1, -t, qm))


def point_op(E: EllipticCurve, P: Point, Q=None, n: Optional[int] = None) -> Point:
    """P + Q, or n*P when n is given."""
    E.check(P)
    if n is not None:
        return E.mul(n, P)
    E.check(Q)
    return E.add(P, Q)


def group_structure(E: EllipticCurve, m: int = 1) -> tuple:
    N = point_count(E, m).N
    return E.base_change(m).group_structure(N)
