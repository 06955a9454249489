"""Bases of E[l^e] over the smallest extension where they are rational.

The basis is chosen deterministically: the first basis point is the smallest
point (in (x, y) order) of exact order l^e, the second is the smallest point
completing it to a basis.  Frobenius is then read off by table lookup.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from sympy import isprime

from .. import config
from ..errors import BadPrime, BoundExceeded, NotPrime
from .curve import EllipticCurve, point_count


@dataclass(frozen=True)
class TorsionLattice:
    """E[l^e] as a free Z/l^e-module of rank 2 with the q-power Frobenius on it."""
    ell: int
    e: int
    ext: int                 # degree of the extension of the base field used
    curve: EllipticCurve     # base change of the curve to that extension
    basis: tuple             # (P1, P2)
    frob: tuple              # ((a, b), (c, d)); column j = coordinates of Frob(P_j)
    coords: dict = field(repr=False, compare=False)  # point -> (u, v), point = u P1 + v P2

    @property
    def modulus(self) -> int:
        return self.ell ** self.e

    def point(self, u: int, v: int):
        E = self.curve
        return E.add(E.mul(u, self.basis[0]), E.mul(v, self.basis[1]))


def torsion_degree(E: EllipticCurve, ell: int, e: int) -> int:
    """Smallest k with E[l^e] contained in E(F_{q^k}); verified by Sylow structure."""
    cfg = config.current()
    q = E.q
    mod = ell ** e
    k = 0
    while True:
        k += 1
        if E.F.m * k > cfg.bound_ext:
            raise BoundExceeded("torsion needs too large an extension", ell=ell, e=e,
                                degree=E.F.m * k, cap=cfg.bound_ext)
        Nk = E.count_over(k)
        if Nk % (mod * mod) or (q ** k - 1) % mod:
            continue
        _, a1, _, b = _sylow(E, k, ell)
        if b >= e:
            return k


@lru_cache(maxsize=4096)
def _sylow_cached(key, ell):
    E, k = key
    Ek = E.base_change(k)
    return Ek.sylow(E.count_over(k), ell)


def _sylow(E: EllipticCurve, k: int, ell: int):
    return _sylow_cached((E, k), ell)


def torsion_basis(E: EllipticCurve, ell: int, e: int) -> TorsionLattice:
    if not isinstance(ell, int) or not isprime(ell):
        raise NotPrime("torsion prime must be prime", ell=ell)
    if ell == E.F.p:
        raise BadPrime("torsion prime equals the characteristic", ell=ell, p=E.F.p)
    if e < 1:
        raise BoundExceeded("exponent must be positive", e=e)
    if E.q > config.current().bound_q:
        point_count(E)  # raises the bound error with the usual context
    return _torsion_basis(E, ell, e, config.current().bound_ext, config.current().bound_group)


@lru_cache(maxsize=1024)
def _torsion_basis(E: EllipticCurve, ell: int, e: int, bound_ext: int, bound_group: int) -> TorsionLattice:
    mod = ell ** e
    if mod * mod > bound_group:
        raise BoundExceeded("torsion subgroup too large to tabulate", size=mod * mod, cap=bound_group)
    k = torsion_degree(E, ell, e)
    Ek = E.base_change(k)
    x, a1, w, b = _sylow(E, k, ell)
    g1 = Ek.mul(ell ** (a1 - e), x)
    g2 = Ek.mul(ell ** (b - e), w)
    # tabulate E[l^e] in the coordinates of (g1, g2)
    table = {}
    row = None
    for i in range(mod):
        pt = row
        for j in range(mod):
            table[pt] = (i, j)
            pt = Ek.add(pt, g2)
        row = Ek.add(row, g1)
    assert len(table) == mod * mod
    pts = sorted(p for p in table if p is not None)
    P1 = next(p for p in pts if table[p][0] % ell or table[p][1] % ell)
    u1, v1 = table[P1]
    P2 = next(p for p in pts if (u1 * table[p][1] - v1 * table[p][0]) % ell)
    u2, v2 = table[P2]
    det = (u1 * v2 - u2 * v1) % mod
    dinv = pow(det, -1, mod)
    # inverse of [[u1, u2], [v1, v2]]
    inv = ((v2 * dinv % mod, -u2 * dinv % mod), (-v1 * dinv % mod, u1 * dinv % mod))

    def to_basis(uv):
        u, v = uv
        return ((inv[0][0] * u + inv[0][1] * v) % mod, (inv[1][0] * u + inv[1][1] * v) % mod)

    coords = {p: to_basis(uv) for p, uv in table.items()}
    q = E.q
    c1 = coords[Ek.frobenius(P1, q)]
    c2 = coords[Ek.frobenius(P2, q)]
    frob = ((c1[0], c2[0]), (c1[1], c2[1]))
    return TorsionLattice(ell, e, k, Ek, (P1, P2), frob, coords)
