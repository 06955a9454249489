import json

import pytest

from corpus import NO_CURVES, RANK4_CURVES, YES_ORDINARY, curve, entry_id
from isopower import (SubgroupData, brute_force_kernels, commutant, galois_image_test,
                      is_kernel_subgroup)
from isopower.config import Config, using
from isopower.decide import end_order
from isopower.errors import (BadPrime, BoundExceeded, NotGaloisStable, SingularMatrix,
                             UsageError)
from isopower.functor import torsion_action
from isopower.kernels import (frobenius_stable_subgroups, is_kernel_subgroup_for,
                              oracle_compare, span)

E_D11 = (5, (0, 0, 0, 1, 1))      # t = -3, Frobenius irreducible mod 2
E_ZI = (5, (0, 0, 0, 1, 0))       # t = 2, End = Z[i], Frobenius = 1 mod 2

IDENTITY = ((1, 0), (0, 1))


def mm(A, B, mod):
    return tuple(tuple(sum(A[i][k] * B[k][j] for k in range(2)) % mod for j in range(2))
                 for i in range(2))


def gaussian_binomial(n, k, q):
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


@pytest.mark.parametrize("entry", YES_ORDINARY[:5] + NO_CURVES[:3], ids=entry_id)
@pytest.mark.parametrize("ell", [2, 3])
def test_commutant_commutes_with_frobenius_and_end(entry, ell):
    E = curve(entry[0], entry[1])
    if E.F.p == ell:
        pytest.skip("l = p")
    C = commutant(E, ell, 1)
    act, _, _ = torsion_action(E, end_order(E), ell, 1)
    rho = tuple(tuple(act.omega[j][i] for j in range(2)) for i in range(2))
    for B in C.basis:
        assert mm(B, C.frob, ell) == mm(C.frob, B, ell)
        assert mm(B, rho, ell) == mm(rho, B, ell)
    assert C.shape == "rank2"
    assert len(C.basis) == 2


def test_commutant_is_a_field_when_frobenius_is_irreducible():
    C = commutant(curve(*E_D11), 2, 1)
    elements = {tuple(tuple((a * B1[i][j] + b * B2[i][j]) % 2 for j in range(2)) for i in range(2))
                for a in (0, 1) for b in (0, 1) for B1, B2 in [C.basis]}
    nonzero = [X for X in elements if any(any(r) for r in X)]
    assert len(nonzero) == 3
    # every nonzero element is invertible: C/2C is F_4
    assert all((X[0][0] * X[1][1] - X[0][1] * X[1][0]) % 2 for X in nonzero)


def test_commutant_of_a_scalar_frobenius_is_not_everything():
    C = commutant(curve(*E_ZI), 2, 1)
    assert C.frob[0][0] % 2 == C.frob[1][1] % 2 and C.frob[0][1] % 2 == C.frob[1][0] % 2 == 0
    assert len(C.basis) == 2


@pytest.mark.parametrize("entry", RANK4_CURVES, ids=entry_id)
def test_rank_four_commutant_is_the_centre(entry):
    E = curve(entry[0], entry[1])
    ell = 3 if E.F.p == 2 else 2
    C = commutant(E, ell, 1)
    assert C.shape == "Z_l-center"
    assert C.basis == (IDENTITY,)
    # Frobenius is the scalar -p on the torsion
    assert C.frob == ((-E.F.p % ell, 0), (0, -E.F.p % ell))


@pytest.mark.parametrize("ell,e,r", [(2, 1, 1), (3, 1, 1), (5, 1, 1), (2, 1, 2), (3, 1, 2), (2, 2, 1)])
def test_subgroup_enumeration_counts(ell, e, r):
    found = frobenius_stable_subgroups(IDENTITY, ell, e, r)
    if e == 1:
        n = 2 * r
        assert len(found) == sum(gaussian_binomial(n, k, ell) for k in range(n + 1))
    else:
        assert len(found) == 15     # subgroups of Z/4 x Z/4


def test_trivial_and_full_subgroups_are_kernels():
    E = curve(*E_D11)
    for ell, r in ((2, 1), (3, 1), (2, 2)):
        zero = SubgroupData(ell, 1, r, ())
        full = SubgroupData(ell, 1, r, tuple(tuple(int(i == j) for j in range(2 * r)) for i in range(2 * r)))
        assert is_kernel_subgroup(E, zero)
        assert is_kernel_subgroup(E, full)


def test_irreducible_frobenius_has_no_stable_lines():
    E = curve(*E_D11)
    assert len(brute_force_kernels(E, 2, 1, 1)) == 2
    for v in ((1, 0), (0, 1), (1, 1)):
        with pytest.raises(NotGaloisStable):
            is_kernel_subgroup(E, SubgroupData(2, 1, 1, (v,)))


def test_scalar_frobenius_lines_are_decided_by_the_commutant():
    E = curve(*E_ZI)
    verdicts = [is_kernel_subgroup(E, SubgroupData(2, 1, 1, (v,))) for v in ((1, 0), (0, 1), (1, 1))]
    assert not all(verdicts)
    oracle = brute_force_kernels(E, 2, 1, 1)
    for v, ok in zip(((1, 0), (0, 1), (1, 1)), verdicts):
        assert (span([v], 2, 2) in oracle) == ok


@pytest.mark.parametrize("entry", [YES_ORDINARY[0], YES_ORDINARY[3], NO_CURVES[0], NO_CURVES[1]],
                         ids=entry_id)
def test_oracle_agrees_with_the_criterion(entry):
    E = curve(entry[0], entry[1])
    for ell in (2, 3):
        if ell == E.F.p:
            continue
        for r in (1, 2):
            oc = oracle_compare(E, ell, 1, r)
            assert oc.agree, (ell, r)
            assert oc.kernels == oc.oracle


@pytest.mark.parametrize("entry", RANK4_CURVES, ids=entry_id)
def test_oracle_on_rank_four_curves(entry):
    E = curve(entry[0], entry[1])
    ell = 3 if E.F.p == 2 else 2
    oc = oracle_compare(E, ell, 1, 1)
    assert oc.agree
    assert oc.stable == oc.kernels == ell + 3


def test_kernels_are_closed_under_intersection():
    E = curve(*E_ZI)
    ks = brute_force_kernels(E, 3, 1, 2)
    for A in ks:
        for B in ks:
            assert A & B in ks


def test_products_of_kernels():
    E = curve(*E_ZI)
    C = commutant(E, 2, 1)
    singles = frobenius_stable_subgroups(C.frob, 2, 1, 1)
    for G1 in singles:
        for G2 in singles:
            prod = frozenset(a + b for a in G1 for b in G2)
            both = is_kernel_subgroup_for(C, G1) and is_kernel_subgroup_for(C, G2)
            assert is_kernel_subgroup_for(C, prod) == both


def test_galois_image_examples():
    E = curve(*E_D11)
    C = commutant(E, 2, 1)
    assert not galois_image_test([IDENTITY], C.basis, 2).surjective
    img = galois_image_test([C.frob], C.basis, 2)
    assert img.surjective and img.algebra_dim == 2
    full = [((1, 0), (0, 0)), ((0, 1), (0, 0)), ((0, 0), (1, 0)), ((0, 0), (0, 1))]
    borel = galois_image_test([((1, 1), (0, 2))], full, 3)
    assert not borel.surjective and borel.classification == "borel"
    cartan = galois_image_test([((0, 2), (1, 0))], full, 3)     # x^2 + 1 is irreducible mod 3
    assert not cartan.surjective and cartan.classification == "nonsplit-cartan"
    both = galois_image_test([((1, 1), (0, 1)), ((1, 0), (1, 1))], full, 3)
    assert both.surjective and both.classification is None


def test_singular_galois_matrix():
    with pytest.raises(SingularMatrix):
        galois_image_test([((1, 1), (1, 1))], [IDENTITY], 2)


def test_subgroup_json():
    data = SubgroupData.from_json(json.loads('{"l": 3, "e": 1, "r": 2, "generators": [[1, 0, 2, 0]]}'))
    assert data.to_json() == {"l": 3, "e": 1, "r": 2, "generators": [[1, 0, 2, 0]]}
    assert len(data.subgroup()) == 3
    with pytest.raises(UsageError):
        SubgroupData.from_json({"l": 3, "e": 1, "r": 2, "generators": [[1, 0]]})
    with pytest.raises(UsageError):
        SubgroupData.from_json({"l": 3, "generators": []})
    with pytest.raises(UsageError):
        SubgroupData.from_json({"l": "x", "e": 1, "r": 1})


def test_oracle_bounds_and_bad_primes():
    E = curve(*E_D11)
    with pytest.raises(BoundExceeded):
        brute_force_kernels(E, 2, 4, 1)
    with pytest.raises(BoundExceeded):
        brute_force_kernels(E, 2, 1, 3)
    with pytest.raises(BadPrime):
        brute_force_kernels(E, 5, 1, 1)
    with pytest.raises(BadPrime):
        commutant(E, 5, 1)
    with using(Config(bound_group=50)):
        with pytest.raises(BoundExceeded):
            frobenius_stable_subgroups(IDENTITY, 3, 1, 2)
