"""Evaluating HOM_R(M, E) on torsion and on rational points.

Everything reduces to one pattern: a finite abelian group G = Z^2 / L (either
the l-Sylow subgroup of E(F_{q^m}) or the free module E[l^e]) on which R acts
through integer 2x2 matrices, and a linear condition on tuples in G^k whose
solutions we count or describe.  Matrices here act on row vectors unless the
name says otherwise; torsion lattices store Frobenius on columns, so they are
transposed on the way in.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from sympy import factorint

from . import config
from .arith.curve import EllipticCurve, point_count
from .arith.torsion import TorsionLattice, torsion_basis, torsion_degree
from .errors import (BadPrime, BoundExceeded, CrossCheckMismatch, DenominatorClash,
                     NotSubring, UnsupportedCase)
from .linalg import (SmithModPrimePower, charpoly, det_q, identity, inverse_q, kron,
                     mat_pow_mod, matmul, matmul_mod, poly_mul, solve_integral_preimage,
                     transpose)
from .modules import ModuleNF, RModule, _to_order_coords, dual_module, normal_form
from .orders import QuadIdeal, QuadOrder, _fundamental_split, order_from_disc


# ---------------------------------------------------------------------------
# Frobenius as an element of K

@dataclass(frozen=True)
class FrobeniusData:
    q: int
    t: int
    f0: int          # conductor of Z[pi]
    dK: int
    c: int           # pi = c + f0 * w_K

    @property
    def order(self) -> QuadOrder:
        return order_from_disc(self.f0 * self.f0 * self.dK)

    @property
    def element(self) -> tuple:
        return (Fraction(self.c), Fraction(self.f0))


def frobenius_data(E: EllipticCurve) -> FrobeniusData:
    q, t = E.q, E.trace
    D0 = t * t - 4 * q
    if D0 == 0:
        raise UnsupportedCase("Frobenius is an integer; no quadratic order contains it",
                              q=q, t=t)
    dK, f0 = _fundamental_split(D0)
    return FrobeniusData(q, t, f0, dK, (t - f0 * dK) // 2)


def check_order_on_curve(R: QuadOrder, E: EllipticCurve) -> FrobeniusData:
    """R must be an order of the CM field containing Z[pi]."""
    fd = frobenius_data(E)
    if R.dK != fd.dK or fd.f0 % R.f:
        raise NotSubring("order does not contain Z[pi]", D=R.D, frobenius_disc=fd.f0 ** 2 * fd.dK)
    return fd


# ---------------------------------------------------------------------------
# R acting on finite groups

@dataclass(frozen=True)
class GroupAction:
    """G = Z^2 / diag(rel) with pi and the generator of R acting on row vectors."""
    ell: int
    rel: tuple                # (l^a, l^b)
    frob: tuple               # 2x2, row convention
    omega: tuple              # 2x2, row convention: the generator f_R * w_K of R
    order: QuadOrder

    @property
    def exponent(self) -> int:
        return max(self.rel)

    def element_matrix(self, u) -> list:
        x, y = _to_order_coords(self.order, u)
        return [[x * (i == j) + y * self.omega[i][j] for j in range(2)] for i in range(2)]


def _mat2(M) -> tuple:
    return tuple(tuple(int(v) for v in r) for r in M)


def torsion_action(E: EllipticCurve, R: QuadOrder, ell: int, e: int) -> tuple[GroupAction, TorsionLattice, int]:
    """The action of R on E[l^e], lifting to E[l^(e+s)] when l^s divides [R : Z[pi]].

    Returns (action, lattice, s); the basis of E[l^e] is l^s times the basis of
    the returned lattice.
    """
    if ell == E.F.p:
        raise BadPrime("torsion prime equals the characteristic", ell=ell, p=E.F.p)
    fd = check_order_on_curve(R, E)
    d = fd.f0 // R.f
    s, u = 0, d
    while u % ell == 0:
        u //= ell
        s += 1
    T = torsion_basis(E, ell, e + s)
    big, mod = ell ** (e + s), ell ** e
    F = [list(r) for r in T.frob]
    diff = [[(F[i][j] - fd.c * (i == j)) % big for j in range(2)] for i in range(2)]
    if any(v % ell ** s for r in diff for v in r):
        raise DenominatorClash("the generator of R does not act on this torsion level",
                               ell=ell, e=e, D=R.D)
    uinv = pow(u, -1, mod)
    W = [[(v // ell ** s) * uinv % mod for v in r] for r in diff]
    Fm = [[v % mod for v in r] for r in F]
    act = GroupAction(ell, (mod, mod), _mat2(transpose(Fm)), _mat2(transpose(W)), R)
    return act, T, s


def _sylow_dlog(Em: EllipticCurve, z, x, a: int, w, b: int, ell: int) -> tuple[int, int]:
    for v in range(ell ** b):
        r = Em.sub(z, Em.mul(v, w)) if v else z
        u = Em.dlog_cyclic(r, x, a, ell)
        if u is not None:
            return u, v
    raise AssertionError("point outside the Sylow subgroup")


def sylow_action(E: EllipticCurve, R: QuadOrder, m: int, ell: int) -> Optional[GroupAction]:
    """The action of R on the l-part of E(F_{q^m}) computed inside that group.

    Requires l prime to [R : Z[pi]]; returns None when the l-part is trivial.
    """
    fd = check_order_on_curve(R, E)
    d = fd.f0 // R.f
    N = point_count(E, m).N
    Em = E.base_change(m)
    x, a, w, b = Em.sylow(N, ell)
    if a == 0:
        return None
    exp = ell ** a
    if d % ell == 0:
        raise DenominatorClash("l divides the index of Z[pi] in R", ell=ell, D=R.D)
    rows = []
    for g in (x, w):
        if g is None:
            rows.append([0, 0])
            continue
        rows.append(list(_sylow_dlog(Em, Em.frobenius(g, E.q), x, a, w, b, ell)))
    P = rows
    dinv = pow(d, -1, exp)
    Om = [[(P[i][j] - fd.c * (i == j)) * dinv % exp for j in range(2)] for i in range(2)]
    return GroupAction(ell, (ell ** a, ell ** b), _mat2(P), _mat2(Om), R)


# ---------------------------------------------------------------------------
# counting solutions of linear conditions in G^k

def _kernel_size(act: GroupAction, T: Sequence[Sequence[int]], n_in: int, n_out: int) -> int:
    """#{x in G^n_in : x T = 0 in G^n_out} for an integer (2 n_in) x (2 n_out) matrix T."""
    rel_in = [act.rel[i % 2] for i in range(2 * n_in)]
    rel_out = [act.rel[i % 2] for i in range(2 * n_out)]
    k = 2 * n_in
    cons = [[Fraction(int(i == j)) for j in range(k)] for i in range(k)]
    for col in range(2 * n_out):
        cons.append([Fraction(T[r][col], rel_out[col]) for r in range(k)])
    pre = solve_integral_preimage(cons)
    total = 1
    for v in rel_in:
        total *= v
    size = Fraction(total) / abs(det_q(pre))
    assert size.denominator == 1
    return int(size)


def module_omega_matrix(M: RModule) -> list:
    """Integer W with b_k * gen = sum_j W_kj b_j on the Z-basis of M."""
    K = M.K
    gen = M.base.gen
    B = [list(r) for r in M.basis]
    images = []
    for r in B:
        img = []
        for i in range(M.rank):
            img.extend(K.mul(gen, (r[2 * i], r[2 * i + 1])))
        images.append(img)
    W = matmul(images, inverse_q(B))
    assert all(Fraction(v).denominator == 1 for r in W for v in r)
    return [[int(v) for v in r] for r in W]


def _hom_condition(W: Sequence[Sequence[int]], act: GroupAction) -> list:
    """Row-convention matrix of Phi -> W Phi - Phi Omega on G^(2n)."""
    k = len(W)
    return [[a - b for a, b in zip(ra, rb)]
            for ra, rb in zip(kron(transpose(W), identity(2)), kron(identity(k), [list(r) for r in act.omega]))]


def _fixed_condition(k: int, act: GroupAction, m: int) -> list:
    Fm = mat_pow_mod([list(r) for r in act.frob], m, act.exponent)
    D = [[Fm[i][j] - (i == j) for j in range(2)] for i in range(2)]
    return kron(identity(k), D)


def _hstack(*mats) -> list:
    return [sum((list(M[i]) for M in mats), []) for i in range(len(mats[0]))]


def hom_count_on(M: RModule, act: GroupAction, fixed_power: Optional[int] = None) -> int:
    """#Hom_R(M, G), optionally restricted to maps landing in G^(pi^m = 1)."""
    W = module_omega_matrix(M)
    k = len(W)
    T = _hom_condition(W, act)
    n_out = k
    if fixed_power is not None:
        T = _hstack(T, _fixed_condition(k, act, fixed_power))
        n_out += k
    return _kernel_size(act, T, k, n_out)


def presentation_count_on(X, R: QuadOrder, act: GroupAction, n: int, fixed_power: Optional[int] = None) -> int:
    """#{g in G^n : sum_j X_ij g_j = 0 for all i}, the points of the presented functor."""
    m_rows = len(X)
    T = [[0] * (2 * m_rows) for _ in range(2 * n)]
    for i, row in enumerate(X):
        for j, u in enumerate(row):
            A = act.element_matrix(u)
            for a in range(2):
                for b in range(2):
                    T[2 * j + a][2 * i + b] = A[a][b]
    n_out = m_rows
    if fixed_power is not None:
        T = _hstack(T, _fixed_condition(n, act, fixed_power)) if T and T[0] else _fixed_condition(n, act, fixed_power)
        n_out += n
    if n_out == 0:
        return act.rel[0] ** n * act.rel[1] ** n
    return _kernel_size(act, T, n, n_out)


# ---------------------------------------------------------------------------
# torsion of HOM_R(M, E)

@dataclass(frozen=True)
class HomTorsion:
    ell: int
    e: int
    invariants: tuple          # exponents k of the cyclic factors Z/l^k
    frob: Optional[tuple]      # Frobenius on a basis of the (free) group, column convention
    lift: int                  # s with the torsion basis taken at level e + s

    @property
    def order(self) -> int:
        return self.ell ** sum(self.invariants)

    def to_json(self) -> dict:
        return {"l": self.ell, "e": self.e, "structure": [self.ell ** k for k in self.invariants],
                "frob": [list(r) for r in self.frob] if self.frob else None}


def _column_condition(W, act: GroupAction) -> list:
    """Column-convention form of the Hom condition, acting on vec(Phi) row-major."""
    return transpose(_hom_condition(W, act))


def hom_torsion(M: RModule, E: EllipticCurve, ell: int, e: int) -> HomTorsion:
    act, T, s = torsion_action(E, M.base, ell, e)
    W = module_omega_matrix(M)
    k = len(W)
    A = _column_condition(W, act)
    S = SmithModPrimePower(A, ell, e)
    exps, _ = S.kernel()
    basis = S.free_kernel_basis()
    frob = None
    if basis is not None:
        Kcols, L = basis
        Fcol = transpose([list(r) for r in act.frob])
        big = kron(identity(k), Fcol)
        Kmat = transpose(Kcols)
        Phi = matmul_mod(matmul_mod(L, big, ell ** e), Kmat, ell ** e)
        frob = _mat2(Phi)
    return HomTorsion(ell, e, tuple(sorted(exps)), frob, s)


def presentation_torsion_order(X, R: QuadOrder, E: EllipticCurve, n: int, ell: int, e: int) -> int:
    """Order of the torsion realization of the functor presented by X, on E[l^e]."""
    act, _, _ = torsion_action(E, R, ell, e)
    return presentation_count_on(X, R, act, n)


# ---------------------------------------------------------------------------
# rational points

def _route_prime(E: EllipticCurve, d: int) -> int:
    """Smallest prime l, prime to p d, whose l-torsion lives in an affordable extension."""
    p = E.F.p
    ell = 1
    cfg = config.current()
    while True:
        ell += 1
        if ell > 50:
            raise BoundExceeded("no small auxiliary prime has rational enough torsion", d=d)
        if any(ell % r == 0 for r in range(2, ell)) or ell == p or d % ell == 0:
            continue
        if ell * ell > cfg.bound_group:
            continue
        try:
            torsion_degree(E, ell, 1)
        except BoundExceeded:
            continue
        return ell


def _sylow_exponent(E: EllipticCurve, m: int, N: int, ell: int) -> int:
    """k with l^k the exponent of E(F_{q^m})[l^oo]; that group lies in E[l^k]."""
    _, a, _, _ = E.base_change(m).sylow(N, ell)
    return a


def _expected_charpoly(E: EllipticCurve, m: int, n: int) -> list[int]:
    base = [1, -E.trace_over(m), E.q ** m]
    out = [1]
    for _ in range(n):
        out = poly_mul(out, base)
    return out


@dataclass(frozen=True)
class CountReport:
    m: int
    group_route: int
    charpoly_route: Optional[int]
    per_prime: tuple           # (l, count) pairs from the group route
    auxiliary_prime: Optional[int]
    saturated: bool

    @property
    def count(self) -> int:
        return self.group_route


def hom_point_count_report(M: RModule, E: EllipticCurve, m: int) -> CountReport:
    R = M.base
    fd = check_order_on_curve(R, E)
    d = fd.f0 // R.f
    pc = point_count(E, m)
    N = pc.N
    n = M.rank
    per_prime = []
    total = 1
    for ell in sorted(factorint(N)):
        if d % ell:
            act = sylow_action(E, R, m, ell)
            cnt = hom_count_on(M, act)
        elif ell == E.F.p:
            raise DenominatorClash("index of Z[pi] in R is divisible by p", p=ell, D=R.D)
        else:
            act, _, _ = torsion_action(E, R, ell, _sylow_exponent(E, m, N, ell))
            cnt = hom_count_on(M, act, fixed_power=m)
        per_prime.append((ell, cnt))
        total *= cnt
    if not is_saturated(R, E):
        # outside the hypotheses of the equivalence the count is not an abelian
        # variety's, so there is nothing for the second route to agree with
        return CountReport(m, total, None, tuple(per_prime), None, False)
    # route 2: Frobenius on Hom_R(M, T_l E) at an auxiliary prime; its characteristic
    # polynomial fixes det(pi^m - 1) and hence the count
    ell = _route_prime(E, fd.f0)
    ht = hom_torsion(M, E, ell, 1)
    if ht.frob is None or len(ht.frob) != 2 * n:
        raise CrossCheckMismatch("torsion realization is not free of the expected rank",
                                 ell=ell, invariants=list(ht.invariants))
    Phi_m = mat_pow_mod([list(r) for r in ht.frob], m, ell)
    got = [v % ell for v in charpoly(Phi_m)]
    want_poly = _expected_charpoly(E, m, n)
    want = [v % ell for v in want_poly]
    if got != want:
        raise CrossCheckMismatch("Frobenius characteristic polynomial disagrees", ell=ell, m=m,
                                 got=got, want=want)
    route2 = sum(want_poly)  # the char poly at x = 1 is det(1 - pi^m)
    if total != route2:
        raise CrossCheckMismatch("point counts disagree between routes", m=m,
                                 group_route=total, charpoly_route=route2)
    return CountReport(m, total, route2, tuple(per_prime), ell, True)


def hom_point_count(M: RModule, E: EllipticCurve, m: int = 1) -> int:
    return hom_point_count_report(M, E, m).count


def presentation_point_count(X, R: QuadOrder, E: EllipticCurve, n: int, m: int = 1) -> int:
    """#{g in E(F_{q^m})^n : X g = 0}, computed prime by prime."""
    fd = check_order_on_curve(R, E)
    d = fd.f0 // R.f
    N = point_count(E, m).N
    total = 1
    for ell in sorted(factorint(N)):
        if d % ell:
            act = sylow_action(E, R, m, ell)
            total *= presentation_count_on(X, R, act, n)
        else:
            act, _, _ = torsion_action(E, R, ell, _sylow_exponent(E, m, N, ell))
            total *= presentation_count_on(X, R, act, n, fixed_power=m)
    return total


# ---------------------------------------------------------------------------
# kernels of ideals

@dataclass(frozen=True)
class IdealKernel:
    index: int                 # #(R/I)
    order: int                 # prime-to-p part computed, p-part inferred
    per_prime: tuple           # (l, order of E[I][l^oo])
    p_part_inferred: int
    consistent: bool

    def to_json(self) -> dict:
        return {"index": self.index, "order": self.order,
                "per_prime": [list(x) for x in self.per_prime],
                "p_part_inferred": self.p_part_inferred, "consistent": self.consistent}


def kernel_of_ideal(E: EllipticCurve, I: QuadIdeal) -> IdealKernel:
    R = I.owner
    check_order_on_curve(R, E)
    # #(R/I) from the Z-basis, so non-primitive lattices such as nR count correctly
    n = int(abs(det_q([list(_to_order_coords(R, b)) for b in I.zbasis])))
    p = E.F.p
    gens = [(b[0], b[1]) for b in I.zbasis]
    per_prime = []
    prime_to_p = 1
    p_part = 1
    for ell, v in sorted(factorint(n).items()):
        if ell == p:
            p_part = ell ** v
            continue
        act, _, _ = torsion_action(E, R, ell, v)
        # x in E[l^v] killed by every generator: x A_g = 0 for each g
        T = _hstack(*[act.element_matrix(g) for g in gens])
        cnt = _kernel_size(act, T, 1, len(gens))
        per_prime.append((ell, cnt))
        prime_to_p *= cnt
    order = prime_to_p * p_part
    return IdealKernel(n, order, tuple(per_prime), p_part, order == n)


# ---------------------------------------------------------------------------
# duality and saturation

@dataclass(frozen=True)
class DualityReport:
    module: ModuleNF
    dual: ModuleNF
    counts: tuple              # (m, #A(F_{q^m}), #A*(F_{q^m}))
    charpoly: tuple
    dual_charpoly: tuple
    ok: bool

    def to_json(self) -> dict:
        return {"module": self.module.to_json(), "dual": self.dual.to_json(),
                "counts": [list(c) for c in self.counts], "charpoly": list(self.charpoly),
                "dual_charpoly": list(self.dual_charpoly), "ok": self.ok}


def duality_check(M: RModule, E: EllipticCurve, ms: Iterable[int] = (1, 2, 3)) -> DualityReport:
    Md = dual_module(M)
    counts = []
    for m in ms:
        counts.append((m, hom_point_count(M, E, m), hom_point_count(Md, E, m)))
    fd = frobenius_data(E)
    ell = _route_prime(E, fd.f0)
    cp = tuple(v % ell for v in charpoly([list(r) for r in hom_torsion(M, E, ell, 1).frob]))
    cpd = tuple(v % ell for v in charpoly([list(r) for r in hom_torsion(Md, E, ell, 1).frob]))
    ok = all(a == b for _, a, b in counts) and cp == cpd
    return DualityReport(normal_form(M), normal_form(Md), tuple(counts), cp, cpd, ok)


def is_saturated(R_sub: QuadOrder, E: EllipticCurve) -> bool:
    from .decide import end_conductor

    fd = frobenius_data(E)
    fE = end_conductor(E)
    if not isinstance(fE, int):
        raise NotSubring("endomorphism ring is not a quadratic order", fE=fE)
    if R_sub.dK != fd.dK or R_sub.f % fE or fd.f0 % R_sub.f:
        raise NotSubring("order is not between Z[pi] and End E", D=R_sub.D, f0=fd.f0, fE=fE)
    return R_sub.f == fE


# ---------------------------------------------------------------------------
# the model object

@dataclass
class VarietyModel:
    """A = HOM_R(M, E) kept as the pair (M, E) with a memo of torsion realizations."""
    curve: EllipticCurve
    module: RModule
    torsion_cache: dict = field(default_factory=dict, repr=False)

    @property
    def dim(self) -> int:
        return self.module.rank

    def torsion(self, ell: int, e: int) -> HomTorsion:
        key = (ell, e)
        if key not in self.torsion_cache:
            self.torsion_cache[key] = hom_torsion(self.module, self.curve, ell, e)
        return self.torsion_cache[key]

    def count(self, m: int = 1) -> int:
        return hom_point_count(self.module, self.curve, m)

    def report(self, ms: Iterable[int] = (1, 2, 3)) -> dict:
        ms = list(ms)
        return {
            "module": normal_form(self.module).to_json(),
            "curve": curve_json(self.curve),
            "dim": self.dim,
            "counts": [self.count(m) for m in ms],
            "charpoly": _expected_charpoly(self.curve, 1, self.dim),
        }


def curve_json(E: EllipticCurve) -> dict:
    return {"p": E.F.p, "m": E.F.m, "a": [E.F.digits(v) for v in E.a], "q": E.q, "t": E.trace,
            "N": E.n_points}
