import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import divisors

from corpus import brute_class_number
from isopower import (ModuleNF, dual_module, enumerate_modules, ideal_from_form, is_isomorphic,
                      module_from_ideals, module_from_presentation, normal_form, order_from_disc)
from isopower.config import Config, using
from isopower.errors import BaseMismatch, BoundExceeded, HasTorsion, OwnerNotAbove
from isopower.modules import (find_isomorphism, free_module, module_from_nf,
                              random_invertible_matrix)
from isopower.orders import class_group, compose_forms, multiplier_ring, unit_ideal

pytestmark = pytest.mark.filterwarnings("error")


def ideal(D, form):
    return ideal_from_form(order_from_disc(D), form)


def gaussian_i(K):
    return K.from_sqrt(0, 1, 2)


@pytest.mark.parametrize("D,n,count", [(-11, 1, 1), (-16, 1, 2), (-15, 2, 2), (-16, 2, 3),
                                       (-60, 2, 6), (-23, 3, 3), (-144, 1, 8)])
def test_enumeration_counts(D, n, count):
    assert len(enumerate_modules(order_from_disc(D), n)) == count


@pytest.mark.parametrize("D", [-12, -16, -27, -36, -48, -63, -72, -100, -144, -196, -300, -400])
def test_rank_one_count_is_sum_of_class_numbers(D):
    R = order_from_disc(D)
    expected = sum(brute_class_number(R.dK * g * g) for g in divisors(R.f))
    assert len(enumerate_modules(R, 1)) == expected


def test_enumeration_is_sorted_and_unique():
    nfs = enumerate_modules(order_from_disc(-48), 2)
    assert nfs == sorted(set(nfs))


def test_free_modules_and_ideal_sums():
    R = order_from_disc(-23)
    I = ideal(-23, (2, 1, 3))
    Ibar = ideal(-23, (2, -1, 3))
    ident = R.identity_form()
    assert normal_form(free_module(R, 2)) == ModuleNF((1, 1), ident)
    # I + I^{-1} is free, I + I is R + I^2
    assert is_isomorphic(module_from_ideals(R, [I, Ibar]), free_module(R, 2))
    I2 = ideal_from_form(R, compose_forms(I.form, I.form))
    assert is_isomorphic(module_from_ideals(R, [I, I]), module_from_ideals(R, [unit_ideal(R), I2]))
    assert not is_isomorphic(module_from_ideals(R, [I, I]), free_module(R, 2))


def test_mixed_owners_give_a_conductor_chain():
    R = order_from_disc(-16)
    OK = unit_ideal(order_from_disc(-4))
    M = module_from_ideals(R, [unit_ideal(R), OK])
    assert normal_form(M) == ModuleNF((2, 1), (1, 0, 1))
    M2 = module_from_ideals(R, [OK, unit_ideal(R)])
    assert normal_form(M2) == normal_form(M)


def test_rank_one_owner_is_the_multiplier_ring():
    R = order_from_disc(-144)
    for nf in enumerate_modules(R, 1):
        M = module_from_nf(R, nf)
        L = M.summands[0].lattice
        assert multiplier_ring(L).f == nf.conductors[0]


def test_maximal_order_normal_form_is_rank_and_determinant():
    R = order_from_disc(-56)
    forms = class_group(R).reps
    for f in forms:
        for g in forms:
            M = module_from_ideals(R, [ideal_from_form(R, f), ideal_from_form(R, g)])
            assert normal_form(M) == ModuleNF((1, 1), compose_forms(f, g))


def test_remark_presentation_has_torsion_and_completion_does_not():
    R = order_from_disc(-16)
    K = R.K
    two_i = K.scale(2, gaussian_i(K))
    with pytest.raises(HasTorsion) as exc:
        module_from_presentation(R, [[two_i, K.elt(-2)]])
    assert exc.value.exponent == 2
    M = module_from_presentation(R, [[two_i, K.elt(-2)], [K.elt(2), two_i]])
    assert M.rank == 1
    assert normal_form(M) == ModuleNF((1,), (1, 0, 1))


def test_presentation_of_a_free_module():
    R = order_from_disc(-15)
    K = R.K
    M = module_from_presentation(R, [[K.elt(1), K.elt(-1), K.elt(0)]])
    assert M.rank == 2
    assert normal_form(M) == normal_form(free_module(R, 2))


def test_presentation_entries_must_lie_in_the_order():
    R = order_from_disc(-16)
    K = R.K
    with pytest.raises(OwnerNotAbove):
        module_from_presentation(R, [[gaussian_i(K), K.elt(1)]])


def test_owner_below_base_is_rejected():
    R = order_from_disc(-4)
    with pytest.raises(OwnerNotAbove):
        module_from_ideals(R, [unit_ideal(order_from_disc(-16))])


def test_base_mismatch():
    with pytest.raises(BaseMismatch):
        is_isomorphic(free_module(order_from_disc(-15), 1), free_module(order_from_disc(-23), 1))


def test_enumeration_bound():
    with using(Config(bound_disc=100)):
        with pytest.raises(BoundExceeded):
            enumerate_modules(order_from_disc(-144 * 4), 1)


@pytest.mark.parametrize("D,n", [(-16, 2), (-23, 2), (-60, 2), (-36, 2), (-15, 3)])
def test_dual_is_an_involution(D, n):
    R = order_from_disc(D)
    for nf in enumerate_modules(R, n):
        M = module_from_nf(R, nf)
        Md = dual_module(M)
        assert Md.rank == n
        assert normal_form(Md).conductors == nf.conductors
        assert is_isomorphic(dual_module(Md), M)


def test_dual_of_an_ideal_is_its_inverse_class():
    R = order_from_disc(-23)
    I = ideal(-23, (2, 1, 3))
    Md = dual_module(module_from_ideals(R, [I]))
    # conj(I^{-1}) is in the class of I
    assert normal_form(Md).steinitz == (2, 1, 3)


@pytest.mark.parametrize("D", [-15, -16, -23])
def test_isomorphism_witness_agrees_with_normal_form(D):
    R = order_from_disc(D)
    rng = random.Random(D)
    nfs = enumerate_modules(R, 2)
    mods = [module_from_nf(R, nf) for nf in nfs]
    for i, A in enumerate(mods):
        for j, B in enumerate(mods):
            B2 = B.times_matrix(random_invertible_matrix(R.K, 2, rng, steps=2))
            X = find_isomorphism(A, B2, max_vectors=300)
            assert (X is not None) == (nfs[i] == nfs[j])
            if X is not None:
                assert A.times_matrix(X).basis == B2.basis


modules = st.sampled_from([(D, nf) for D in (-15, -16, -23, -48, -60, -135)
                           for n in (1, 2) for nf in enumerate_modules(order_from_disc(D), n)])


@settings(max_examples=120, deadline=None)
@given(modules, st.integers(0, 10 ** 6))
def test_normal_form_is_invariant_under_change_of_basis(entry, seed):
    D, nf = entry
    R = order_from_disc(D)
    M = module_from_nf(R, nf)
    X = random_invertible_matrix(R.K, nf.rank, random.Random(seed), steps=6)
    assert normal_form(M.times_matrix(X)) == nf


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([-15, -16, -23, -36, -48]), st.data())
def test_normal_form_ignores_summand_order(D, data):
    R = order_from_disc(D)
    summands = data.draw(st.lists(st.sampled_from(
        [s for nf in enumerate_modules(R, 1) for s in module_from_nf(R, nf).summands]),
        min_size=2, max_size=3))
    perm = data.draw(st.permutations(summands))
    assert normal_form(module_from_ideals(R, summands)) == normal_form(module_from_ideals(R, list(perm)))


def test_json_round_trip():
    nf = ModuleNF((2, 1), (1, 0, 1))
    assert ModuleNF.from_json(nf.to_json()) == nf
    assert nf.to_json() == {"conductors": [2, 1], "steinitz": [1, 0, 1]}
