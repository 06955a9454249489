import pytest

from corpus import NO_CURVES, YES_ORDINARY, curve, entry_id
from isopower import torsion_basis
from isopower.arith.torsion import torsion_degree
from isopower.config import Config, using
from isopower.errors import BadPrime, BoundExceeded, NotPrime

CASES = [(e, ell, k) for e in YES_ORDINARY[:5] + NO_CURVES[:3] for ell, k in ((2, 1), (3, 1), (2, 2))
         if e[0] % ell]


def exact_order(E, P, cap):
    k, Q = 1, P
    while Q is not None and k <= cap:
        Q = E.add(Q, P)
        k += 1
    return k


@pytest.mark.parametrize("entry,ell,e", CASES, ids=lambda v: entry_id(v) if isinstance(v, tuple) else str(v))
def test_frobenius_matrix_has_the_right_charpoly(entry, ell, e):
    E = curve(entry[0], entry[1])
    T = torsion_basis(E, ell, e)
    mod = ell ** e
    (a, b), (c, d) = T.frob
    assert (a + d - E.trace) % mod == 0
    assert (a * d - b * c - E.q) % mod == 0


@pytest.mark.parametrize("entry,ell,e", CASES, ids=lambda v: entry_id(v) if isinstance(v, tuple) else str(v))
def test_basis_generates_the_full_torsion(entry, ell, e):
    E = curve(entry[0], entry[1])
    T = torsion_basis(E, ell, e)
    mod = ell ** e
    Ek = T.curve
    P1, P2 = T.basis
    assert exact_order(Ek, P1, mod) == mod
    assert exact_order(Ek, P2, mod) == mod
    pts = {T.point(u, v) for u in range(mod) for v in range(mod)}
    assert len(pts) == mod * mod
    assert all(Ek.mul(mod, P) is None for P in pts)


@pytest.mark.parametrize("entry,ell,e", CASES[:6], ids=lambda v: entry_id(v) if isinstance(v, tuple) else str(v))
def test_frobenius_matrix_describes_the_q_power_map(entry, ell, e):
    E = curve(entry[0], entry[1])
    T = torsion_basis(E, ell, e)
    Ek = T.curve
    (a, b), (c, d) = T.frob
    for j, P in enumerate(T.basis):
        image = Ek.frobenius(P, E.q)
        u, v = (a, c) if j == 0 else (b, d)
        assert image == T.point(u, v)


def test_degree_is_minimal():
    E = curve(5, (0, 0, 0, 1, 1))
    k = torsion_degree(E, 3, 1)
    Ek = E.base_change(k)
    assert Ek.n_points % 9 == 0
    for j in range(1, k):
        if k % j == 0:
            assert E.count_over(j) % 9 or (E.q ** j - 1) % 3


def test_errors():
    E = curve(5, (0, 0, 0, 1, 1))
    with pytest.raises(BadPrime):
        torsion_basis(E, 5, 1)
    with pytest.raises(NotPrime):
        torsion_basis(E, 4, 1)
    with using(Config(bound_ext=2)):
        with pytest.raises(BoundExceeded):
            torsion_basis(E, 7, 1)
