import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import factorint, legendre_symbol

from corpus import brute_class_number
from isopower import class_group, ideal_arith, ideal_from_form, order_from_disc, reduce_form
from isopower.config import Config, using
from isopower.errors import BadDiscriminant, BoundExceeded, NonInvertible
from isopower.orders import (compose_forms, form_of_lattice, form_power, is_reduced,
                             lattice_of_form, lattice_product, multiplier_ring)

DISCS = [-3, -4, -7, -8, -11, -12, -15, -16, -20, -23, -24, -27, -28, -32, -35, -36, -39, -47,
         -48, -52, -56, -60, -63, -71, -72, -75, -84, -96, -99, -100, -104, -119, -140, -144,
         -147, -156, -180, -196, -200, -231, -300, -324, -400]


def kronecker_prime(d, ell):
    if ell == 2:
        if d % 2 == 0:
            return 0
        return 1 if d % 8 in (1, 7) else -1
    return legendre_symbol(d % ell, ell) if d % ell else 0


def class_number_formula(D):
    """h(f^2 d_K) from h(d_K) and the conductor (Dedekind's formula)."""
    R = order_from_disc(D)
    dK, f = R.dK, R.f
    h = brute_class_number(dK)
    units = {-3: 6, -4: 4}.get(dK, 2)
    num = h * f
    for ell in factorint(f):
        num = num * (ell - kronecker_prime(dK, ell)) // ell
    return num * 2 // units if f > 1 else h


def test_known_class_numbers():
    known = {-3: 1, -4: 1, -23: 3, -47: 5, -56: 4, -71: 7, -84: 4, -15: 2, -20: 2, -39: 4,
             -16: 1, -12: 1, -27: 1, -36: 2, -400: 4}
    for D, h in known.items():
        assert class_group(order_from_disc(D)).h == h, D


@pytest.mark.parametrize("D", DISCS)
def test_class_number_against_brute_force_and_formula(D):
    h = class_group(order_from_disc(D)).h
    assert h == brute_class_number(D)
    assert h == class_number_formula(D)


def test_group_structures():
    assert class_group(order_from_disc(-56)).structure == (4,)
    assert class_group(order_from_disc(-84)).structure == (2, 2)
    assert class_group(order_from_disc(-23)).structure == (3,)
    assert class_group(order_from_disc(-11)).structure == ()


@pytest.mark.parametrize("D", [-3, -4, -16, -28, -12, -75, -144])
def test_split_into_fundamental_part(D):
    R = order_from_disc(D)
    assert R.f ** 2 * R.dK == D
    assert order_from_disc(R.dK).f == 1


def test_bad_discriminants():
    for D in (0, 5, -5, -6, -1):
        with pytest.raises(BadDiscriminant):
            order_from_disc(D)


def test_class_group_bound():
    with using(Config(bound_disc=50)):
        with pytest.raises(BoundExceeded):
            class_group(order_from_disc(-56))


def test_non_primitive_form_is_rejected():
    with pytest.raises(NonInvertible):
        ideal_from_form(order_from_disc(-16), (2, 0, 2))


def test_multiplier_ring_of_form_lattice():
    for D in (-16, -36, -48, -60, -75):
        R = order_from_disc(D)
        for f in class_group(R).reps:
            assert multiplier_ring(lattice_of_form(R.dK, f)) == R


def test_ideal_ops():
    R = order_from_disc(-23)
    I = ideal_from_form(R, (2, 1, 3))
    J = ideal_arith(I, op="invert")
    assert ideal_arith(I, J).form == R.identity_form()
    assert ideal_arith(I, op="conjugate").form == (2, -1, 3)
    assert ideal_arith(ideal_from_form(R, (6, 5, 2)), op="reduce").form == reduce_form((6, 5, 2))


discs = st.sampled_from([D for D in DISCS if class_group(order_from_disc(D)).h > 1])


@settings(max_examples=80, deadline=None)
@given(discs, st.data())
def test_composition_is_a_group_law(D, data):
    reps = class_group(order_from_disc(D)).reps
    f, g, h = (data.draw(st.sampled_from(reps)) for _ in range(3))
    ident = order_from_disc(D).identity_form()
    assert compose_forms(f, g) == compose_forms(g, f)
    assert compose_forms(compose_forms(f, g), h) == compose_forms(f, compose_forms(g, h))
    assert compose_forms(f, ident) == f
    assert compose_forms(f, reduce_form((f[0], -f[1], f[2]))) == ident
    assert is_reduced(compose_forms(f, g))
    assert form_power(f, len(reps)) == ident


@settings(max_examples=80, deadline=None)
@given(discs, st.data())
def test_composition_is_ideal_multiplication(D, data):
    R = order_from_disc(D)
    reps = class_group(R).reps
    f, g = data.draw(st.sampled_from(reps)), data.draw(st.sampled_from(reps))
    L = lattice_product(lattice_of_form(R.dK, f), lattice_of_form(R.dK, g))
    assert reduce_form(form_of_lattice(L)) == compose_forms(f, g)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 40), st.integers(-40, 40), st.integers(1, 40))
def test_reduction_preserves_discriminant_and_is_idempotent(a, b, c):
    D = b * b - 4 * a * c
    if D >= 0:
        return
    r = reduce_form((a, b, c))
    assert r[1] ** 2 - 4 * r[0] * r[2] == D
    assert is_reduced(r)
    assert reduce_form(r) == r
