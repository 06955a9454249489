"""Torsion-free modules over an imaginary quadratic order.

A module of rank n is stored as a full Z-lattice in K^n: 2n rows of length 2n,
component i occupying coordinates (2i, 2i+1) in the (1, w) basis of K.  The
isomorphism class is captured by :class:`ModuleNF`, the chain of conductors of
the orders R_1 in ... in R_n together with a class in Pic(R_n).
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from sympy import divisors, factorint

from . import config
from .errors import BaseMismatch, BoundExceeded, HasTorsion, OwnerNotAbove
from .linalg import (common_denominator, det_q, hnf_q, inverse_q, lll_gram, matmul, short_vectors,
                     smith_invariants, solve_integral_preimage)
from .orders import (KLattice, QuadField, QuadIdeal, QuadOrder, class_group, form_of_lattice,
                     ideal_from_form, multiplier_ring, reduce_form, unit_ideal)


@dataclass(frozen=True, order=True)
class ModuleNF:
    conductors: tuple     # (f_1, ..., f_n), f_n | ... | f_1
    steinitz: tuple       # reduced form of discriminant f_n^2 d_K

    def to_json(self) -> dict:
        return {"conductors": list(self.conductors), "steinitz": list(self.steinitz)}

    @classmethod
    def from_json(cls, obj: dict) -> "ModuleNF":
        return cls(tuple(int(v) for v in obj["conductors"]), tuple(int(v) for v in obj["steinitz"]))

    @property
    def rank(self) -> int:
        return len(self.conductors)


class RModule:
    """A torsion-free module over ``base`` realised as a lattice in K^rank."""

    def __init__(self, base: QuadOrder, rank: int, lattice: Sequence[Sequence],
                 summands: Optional[Sequence[QuadIdeal]] = None, presentation=None):
        self.base = base
        self.rank = rank
        H = hnf_q(lattice) if rank else []
        if len(H) != 2 * rank:
            raise HasTorsion("lattice does not have full rank", exponent=0, rank=len(H))
        self.basis = tuple(tuple(r) for r in H)
        self.presentation = presentation
        self._summands = tuple(summands) if summands is not None else None
        K = base.K
        gen = base.gen
        for row in self.basis:
            img = _act(K, gen, row)
            if not _in_span(self.basis, img):
                raise OwnerNotAbove("lattice is not stable under the base order")

    @property
    def K(self) -> QuadField:
        return self.base.K

    @property
    def summands(self) -> tuple:
        if self._summands is None:
            self._summands = canonical_summands(self.base, normal_form(self))
        return self._summands

    @property
    def covolume(self) -> Fraction:
        return abs(det_q([list(r) for r in self.basis]))

    def vectors(self) -> list:
        """Basis vectors as lists of K-elements."""
        return [[(r[2 * i], r[2 * i + 1]) for i in range(self.rank)] for r in self.basis]

    def times_matrix(self, X) -> "RModule":
        """The image M X of row vectors under an invertible n x n matrix over K."""
        K = self.K
        rows = []
        for v in self.vectors():
            w = []
            for j in range(self.rank):
                acc = (Fraction(0), Fraction(0))
                for i in range(self.rank):
                    acc = K.add(acc, K.mul(v[i], X[i][j]))
                w.extend(acc)
            rows.append(w)
        return RModule(self.base, self.rank, rows)

    def __repr__(self) -> str:
        return f"RModule(base={self.base.D}, rank={self.rank}, nf={normal_form(self)})"


def _act(K: QuadField, u, row) -> list:
    out = []
    for i in range(len(row) // 2):
        out.extend(K.mul(u, (row[2 * i], row[2 * i + 1])))
    return out


def _in_span(basis, v) -> bool:
    inv = inverse_q([list(r) for r in basis])
    c = matmul([list(v)], inv)[0]
    return all(Fraction(x).denominator == 1 for x in c)


def _direct_sum_rows(lattices: Sequence[KLattice]) -> list:
    n = len(lattices)
    rows = []
    for i, L in enumerate(lattices):
        for b in L.basis:
            row = [Fraction(0)] * (2 * n)
            row[2 * i], row[2 * i + 1] = b
            rows.append(row)
    return rows


def module_from_ideals(R: QuadOrder, ideals: Sequence[QuadIdeal]) -> RModule:
    for I in ideals:
        if not I.owner.contains_order(R):
            raise OwnerNotAbove("summand owner does not contain the base order",
                                owner=I.owner.D, base=R.D)
    return RModule(R, len(ideals), _direct_sum_rows([I.lattice for I in ideals]), summands=ideals)


def free_module(R: QuadOrder, n: int) -> RModule:
    return module_from_ideals(R, [unit_ideal(R)] * n)


def module_from_lattice(R: QuadOrder, rows: Sequence[Sequence], rank: int) -> RModule:
    return RModule(R, rank, rows)


# ---------------------------------------------------------------------------
# presentations

def _to_order_coords(R: QuadOrder, u) -> tuple[int, int]:
    x, y = Fraction(u[0]), Fraction(u[1])
    if x.denominator != 1 or y.denominator != 1 or int(y) % R.f:
        raise OwnerNotAbove("presentation entry is not in the base order", entry=[str(x), str(y)])
    return int(x), int(y) // R.f


def _k_rref(K: QuadField, X) -> tuple[list, list]:
    """Row echelon form over K; returns (rows, pivot columns)."""
    M = [list(r) for r in X]
    n = len(M[0]) if M else 0
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(M)) if not K.is_zero(M[i][c])), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = K.inv(M[r][c])
        M[r] = [K.mul(inv, v) for v in M[r]]
        for i in range(len(M)):
            if i != r and not K.is_zero(M[i][c]):
                f = M[i][c]
                M[i] = [K.sub(a, K.mul(f, b)) for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    return M[:r], pivots


def module_from_presentation(R: QuadOrder, X, n: Optional[int] = None) -> RModule:
    """The cokernel of R^m -> R^n, r -> r X, which must be torsion-free.

    ``X`` is a list of m rows of n elements of K (pairs), all lying in R.
    """
    K = R.K
    X = [[(Fraction(u[0]), Fraction(u[1])) for u in row] for row in X]
    if n is None:
        if not X:
            raise ValueError("the number of columns is needed for an empty presentation")
        n = len(X[0])
    # relation lattice inside R^n = Z^{2n} (coordinates in the basis 1, gen)
    rel = []
    for row in X:
        for mult in (K.elt(1), R.gen):
            vec = []
            for u in row:
                vec.extend(_to_order_coords(R, K.mul(mult, u)))
            rel.append(vec)
    inv = smith_invariants(rel) if rel else []
    torsion = [d for d in inv if d > 1]
    if torsion:
        raise HasTorsion("cokernel has torsion", exponent=max(torsion), invariants=torsion)
    # a K-basis of the kernel of r -> r X, realised as columns Y with X Y = 0
    if X:
        E, piv = _k_rref(K, X)
    else:
        E, piv = [], []
    free = [c for c in range(n) if c not in piv]
    Y = [[K.elt(0) for _ in free] for _ in range(n)]
    for j, fc in enumerate(free):
        Y[fc][j] = K.elt(1)
        for i, pc in enumerate(piv):
            Y[pc][j] = K.neg(E[i][fc])
    rank = len(free)
    rows = []
    for i in range(n):
        for mult in (K.elt(1), R.gen):
            vec = []
            for j in range(rank):
                vec.extend(K.mul(mult, Y[i][j]))
            rows.append(vec)
    if rank == 0:
        return RModule(R, 0, [], presentation=X)
    return RModule(R, rank, rows, presentation=X)


# ---------------------------------------------------------------------------
# the normal form

def _extend(M: RModule, g: int) -> list:
    """Rows spanning R_g M."""
    K = M.K
    gen = (Fraction(0), Fraction(g))
    rows = [list(r) for r in M.basis]
    rows += [_act(K, gen, r) for r in M.basis]
    return hnf_q(rows)


def conductor_chain(M: RModule) -> tuple:
    f = M.base.f
    n = M.rank
    vals: dict[int, list[int]] = {}
    cov = M.covolume
    for pr, v in factorint(f).items():
        cop = f // pr ** v
        idx = []
        for j in range(v + 1):
            H = _extend(M, cop * pr ** j)
            ratio = cov / abs(det_q(H))
            assert ratio.denominator == 1
            k, r = 0, int(ratio)
            while r % pr == 0:
                r //= pr
                k += 1
            assert r == 1
            idx.append(k)
        idx.append(0)
        # above[j] = #{i : v_pr(f_i) > j}
        above = [idx[j] - idx[j + 1] for j in range(v + 1)]
        col = []
        for j in range(v, -1, -1):
            exact = above[j - 1] - above[j] if j > 0 else n - above[0]
            col += [j] * exact
        vals[pr] = sorted(col, reverse=True)
    conds = []
    for i in range(n):
        c = 1
        for pr, col in vals.items():
            c *= pr ** col[i]
        conds.append(c)
    return tuple(conds)


def determinant_lattice(M: RModule, g: int) -> KLattice:
    """Z-span of the K-determinants of n-tuples of basis vectors of R_g M."""
    K = M.K
    n = M.rank
    H = _extend(M, g)
    vecs = [[(r[2 * i], r[2 * i + 1]) for i in range(n)] for r in H]
    dets = []
    for combo in itertools.combinations(range(2 * n), n):
        dets.append(_k_det(K, [vecs[c] for c in combo]))
    return KLattice(M.K.dK, [d for d in dets])


def _k_det(K: QuadField, rows) -> tuple:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    acc = (Fraction(0), Fraction(0))
    for j in range(n):
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = K.mul(rows[0][j], _k_det(K, minor))
        acc = K.add(acc, term) if j % 2 == 0 else K.sub(acc, term)
    return acc


def normal_form(M: RModule) -> ModuleNF:
    if M.rank == 0:
        return ModuleNF((), ())
    conds = conductor_chain(M)
    fn = conds[-1]
    L = determinant_lattice(M, fn)
    owner = multiplier_ring(L)
    assert owner.f == fn, (owner, conds)
    return ModuleNF(conds, reduce_form(form_of_lattice(L)))


def canonical_summands(R: QuadOrder, nf: ModuleNF) -> tuple:
    """Ideals R_{f_1}, ..., R_{f_{n-1}}, I with I in the Steinitz class."""
    out = []
    for i, c in enumerate(nf.conductors):
        Ri = R.suborder(c)
        if i == len(nf.conductors) - 1:
            out.append(ideal_from_form(Ri, nf.steinitz))
        else:
            out.append(unit_ideal(Ri))
    return tuple(out)


def module_from_nf(R: QuadOrder, nf: ModuleNF) -> RModule:
    return module_from_ideals(R, canonical_summands(R, nf))


def is_isomorphic(M1: RModule, M2: RModule) -> bool:
    if M1.base != M2.base:
        raise BaseMismatch("modules over different orders", d1=M1.base.D, d2=M2.base.D)
    return normal_form(M1) == normal_form(M2)


# ---------------------------------------------------------------------------
# duals

def dual_module(M: RModule) -> RModule:
    """conj of {y in K^n : sum x_i y_i in R for every x in M}."""
    K = M.K
    R = M.base
    n = M.rank
    rows = []
    for v in M.vectors():
        # y -> sum v_i y_i, as a linear map Q^{2n} -> Q^2
        cols = []
        for i in range(n):
            Mi = K.mul_matrix(v[i])       # (u, w) @ Mi = (u + w w_K) v_i
            cols.extend(Mi)
        # coordinates (X, Y) must satisfy X in Z, Y / f in Z
        rows.append([c[0] for c in cols])
        rows.append([c[1] / R.f for c in cols])
    D = solve_integral_preimage(rows)
    conj_rows = []
    for r in D:
        out = []
        for i in range(n):
            out.extend(K.conj((r[2 * i], r[2 * i + 1])))
        conj_rows.append(out)
    return RModule(R, n, conj_rows)


# ---------------------------------------------------------------------------
# enumeration

def conductor_chains(f: int, n: int) -> list[tuple]:
    divs = sorted(divisors(f))
    out = []

    def rec(prefix):
        if len(prefix) == n:
            out.append(tuple(prefix))
            return
        for d in divs:
            if not prefix or prefix[-1] % d == 0:
                rec(prefix + [d])

    rec([])
    return out


def enumerate_modules(R: QuadOrder, n: int) -> list[ModuleNF]:
    cap = config.current().bound_disc
    out = []
    for chain in conductor_chains(R.f, n):
        Rn = R.suborder(chain[-1])
        if -Rn.D > cap:
            raise BoundExceeded("class group beyond bound", D=Rn.D, cap=cap)
        for form in class_group(Rn).reps:
            out.append(ModuleNF(chain, form))
    return sorted(out)


# ---------------------------------------------------------------------------
# re-decompositions and the isomorphism-witness oracle

def random_invertible_matrix(K: QuadField, n: int, rng: random.Random, steps: int = 4) -> list:
    """A product of elementary matrices and diagonal scalings with small random entries."""
    X = [[K.elt(int(i == j)) for j in range(n)] for i in range(n)]

    def rand_elt(nonzero=False):
        while True:
            u = (Fraction(rng.randint(-3, 3), rng.choice((1, 1, 2))), Fraction(rng.randint(-2, 2), rng.choice((1, 1, 3))))
            if not nonzero or not K.is_zero(u):
                return u

    for _ in range(steps):
        if n > 1 and rng.random() < 0.7:
            i, j = rng.sample(range(n), 2)
            c = rand_elt()
            X[i] = [K.add(a, K.mul(c, b)) for a, b in zip(X[i], X[j])]
        else:
            i = rng.randrange(n)
            c = rand_elt(nonzero=True)
            X[i] = [K.mul(c, a) for a in X[i]]
    if n > 1 and rng.random() < 0.5:
        i, j = rng.sample(range(n), 2)
        X[i], X[j] = X[j], X[i]
    return X


def hom_lattice(M1: RModule, M2: RModule) -> list:
    """Z-basis of {X in M_n(K) : M1 X in M2}, X flattened row-major as (x, y) pairs."""
    K = M1.K
    n = M1.rank
    B2inv = inverse_q([list(r) for r in M2.basis])
    rows = []
    nv = 2 * n * n
    for v in M1.vectors():
        # image coordinates (in K^n, rational) as linear functions of the X variables
        img = [[Fraction(0)] * nv for _ in range(2 * n)]
        for i in range(n):
            Mi = K.mul_matrix(v[i])
            for j in range(n):
                for t in range(2):          # X_ij = x + y w ; t picks x or y
                    var = 2 * (i * n + j) + t
                    for s in range(2):
                        img[2 * j + s][var] += Mi[t][s]
        # coordinates in the basis of M2: img^T @ B2inv
        for col in range(2 * n):
            rows.append([sum(img[r][var] * B2inv[r][col] for r in range(2 * n)) for var in range(nv)])
    return solve_integral_preimage(rows)


def find_isomorphism(M1: RModule, M2: RModule, max_vectors: int = 400, rounds: int = 6):
    """Search for X with M1 X = M2.  Returns X (n x n over K) or None.

    For rank one the search is exhaustive.  For rank two, pairs of short
    vectors of the target are tried as images of two independent short
    vectors of the source (and the other way round); at most ``max_vectors``
    of the shortest vectors are used.  Higher ranks search the Hom lattice
    with a radius that doubles ``rounds`` times.  Outside rank one a ``None``
    means no witness was found within the budget.
    """
    if M1.base != M2.base:
        raise BaseMismatch("modules over different orders", d1=M1.base.D, d2=M2.base.D)
    if M1.rank != M2.rank:
        return None
    K = M1.K
    n = M1.rank
    target = M2.covolume / M1.covolume        # required N(det X)
    if n == 2:
        X = _find_isomorphism_rank2(M1, M2, target, max_vectors, rounds)
        if X is None:
            # the short vectors of M1 may be the better starting point
            Y = _find_isomorphism_rank2(M2, M1, 1 / target, max_vectors, rounds)
            if Y is not None:
                X = _inverse2(K, Y)
        return X
    H = hom_lattice(M1, M2)
    dim = len(H)
    A, _ = _reduced_vectors(M1)

    def herm(u_rows, w_rows):
        # sum over the basis of M1 of <a X_u, a X_w>, the K-norm taken coordinatewise
        s = Fraction(0)
        for a in A:
            for j in range(n):
                x = (Fraction(0), Fraction(0))
                y = (Fraction(0), Fraction(0))
                for i in range(n):
                    x = K.add(x, K.mul(a[i], u_rows[i][j]))
                    y = K.add(y, K.mul(a[i], w_rows[i][j]))
                s += K.trace(K.mul(x, K.conj(y))) / 2
        return s

    def as_matrix(h):
        return [[(h[2 * (i * n + j)], h[2 * (i * n + j) + 1]) for j in range(n)] for i in range(n)]

    mats = [as_matrix(h) for h in H]
    G = [[Fraction(0)] * dim for _ in range(dim)]
    for a in range(dim):
        for b in range(a, dim):
            G[a][b] = G[b][a] = herm(mats[a], mats[b])
    T = lll_gram(G)
    Hr = [[sum(T[i][k] * H[k][c] for k in range(dim)) for c in range(len(H[0]))] for i in range(dim)]
    TG = matmul(T, G)
    Gr = [[sum(TG[i][b] * T[j][b] for b in range(dim)) for j in range(dim)] for i in range(dim)]
    if n == 1:
        # Q(x) = N(x) * sum of N(a) over the basis, so this radius is exhaustive
        radii = [target * sum(K.norm(a[0]) for a in A)]
    else:
        base_r = _reduced_vectors(M2)[1]
        radii = [base_r * 2 ** k for k in range(rounds)]
    den = common_denominator(Hr)
    Hint = [[int(v * den) for v in row] for row in Hr]
    ncol = len(Hint[0])
    scaled_target = target * den ** (2 * n)
    if scaled_target.denominator != 1:
        return None
    scaled_target = int(scaled_target)
    nw = K.nw
    dK = K.dK

    def imul(u, w):
        a, b = u
        c, d = w
        return (a * c - b * d * nw, a * d + b * c + b * d * dK)

    def inorm(u):
        x, y = u
        return x * x + dK * x * y + nw * y * y

    def idet(X):
        if n == 1:
            return X[0][0]
        if n == 2:
            a, b = imul(X[0][0], X[1][1]), imul(X[0][1], X[1][0])
            return (a[0] - b[0], a[1] - b[1])
        return _k_det(K, X)

    for radius in radii:
        seen = 0
        for coeffs in short_vectors(Gr, radius, limit=max_vectors):
            seen += 1
            nz = [(i, c) for i, c in enumerate(coeffs) if c]
            flat = [sum(c * Hint[i][col] for i, c in nz) for col in range(ncol)]
            X = [[(flat[2 * (i * n + j)], flat[2 * (i * n + j) + 1]) for j in range(n)] for i in range(n)]
            if inorm(idet(X)) != scaled_target:
                continue
            Xq = [[(Fraction(u[0], den), Fraction(u[1], den)) for u in row] for row in X]
            if _same_lattice(M1.times_matrix(Xq), M2):
                return Xq
        if seen >= max_vectors:
            break
    return None


def _find_isomorphism_rank2(M1: RModule, M2: RModule, target: Fraction, max_vectors: int, rounds: int):
    """Try pairs (v1, v2) of short vectors of M2 as images of two K-independent short vectors of M1."""
    K = M1.K
    A, _ = _reduced_vectors(M1)
    a1 = A[0]
    a2 = next(a for a in A[1:] if not K.is_zero(K.sub(K.mul(a1[0], a[1]), K.mul(a1[1], a[0]))))
    detP = K.sub(K.mul(a1[0], a2[1]), K.mul(a1[1], a2[0]))
    Pinv_scale = K.inv(detP)
    B, _ = _reduced_vectors(M2)
    m = len(B)
    G = [[sum(K.trace(K.mul(B[a][k], K.conj(B[b][k]))) / 2 for k in range(2)) for b in range(m)]
         for a in range(m)]
    den = common_denominator([[c for u in v for c in u] for v in B])
    Bint = [[(int(u[0] * den), int(u[1] * den)) for u in v] for v in B]
    want = target * K.norm(detP) * den ** 4
    if want.denominator != 1:
        return None
    want = int(want)
    nw, dK = K.nw, K.dK

    def imul(u, w):
        return (u[0] * w[0] - u[1] * w[1] * nw, u[0] * w[1] + u[1] * w[0] + u[1] * w[1] * dK)

    def inorm(u):
        return u[0] * u[0] + dK * u[0] * u[1] + nw * u[1] * u[1]

    # grow the ball until it holds max_vectors vectors, then keep the shortest ones
    radius = max(G[i][i] for i in range(m))
    for _ in range(rounds):
        coeffs = list(short_vectors(G, radius, limit=8 * max_vectors))
        if len(coeffs) >= max_vectors:
            break
        radius *= 2
    gden = common_denominator(G)
    Gint = [[int(x * gden) for x in row] for row in G]
    coeffs.sort(key=lambda c: sum(ci * cj * Gint[i][j] for i, ci in enumerate(c) for j, cj in enumerate(c)))
    cands = [[(sum(ci * Bint[i][k][0] for i, ci in enumerate(c)),
               sum(ci * Bint[i][k][1] for i, ci in enumerate(c))) for k in range(2)]
             for c in coeffs[:max_vectors]]
    signed = cands + [[(-u[0], -u[1]) for u in v] for v in cands]
    # a X = c1 v1 + c2 v2 for the other basis vectors a = c1 a1 + c2 a2 of M1, so
    # M1 X lies in M2 exactly when the residues mod M2 of c1 v1 and c2 v2 cancel
    Padj = [[a2[1], K.neg(a1[1])], [K.neg(a2[0]), a1[0]]]
    B2inv = inverse_q([list(r) for r in M2.basis])
    extra = [a for a in A if a is not a1 and a is not a2]
    coefs = [[K.mul(Pinv_scale, K.add(K.mul(a[0], Padj[0][j]), K.mul(a[1], Padj[1][j]))) for j in range(2)]
             for a in extra]

    def residue_map(c):
        # integer matrix and modulus sending integer coordinates of v to those of c v / den mod M2
        Mc = [list(K.mul(c, K.elt(1))), list(K.mul(c, (Fraction(0), Fraction(1))))]
        L = [[Fraction(0)] * 4 for _ in range(4)]
        for r in range(4):
            img = [Fraction(0)] * 4
            blk = r // 2
            img[2 * blk], img[2 * blk + 1] = Mc[r % 2]
            for col in range(4):
                L[r][col] = sum(img[k] * B2inv[k][col] for k in range(4)) / den
        mod = common_denominator(L)
        return [[int(x * mod) for x in row] for row in L], mod

    maps = [(residue_map(c[0]), residue_map(c[1])) for c in coefs]

    def residue(Lm, v):
        L, mod = Lm
        flat = (v[0][0], v[0][1], v[1][0], v[1][1])
        return tuple(sum(flat[r] * L[r][col] for r in range(4)) % mod for col in range(4))

    by_residue: dict = {}
    for v2 in signed:
        key = tuple(residue(m2, v2) for _, m2 in maps)
        by_residue.setdefault(key, []).append(v2)
    for v1 in cands:
        key = tuple(tuple((-x) % m1[1] for x in residue(m1, v1)) for m1, _ in maps)
        for v2 in by_residue.get(key, ()):
            d1, d2 = imul(v1[0], v2[1]), imul(v1[1], v2[0])
            if inorm((d1[0] - d2[0], d1[1] - d2[1])) != want:
                continue
            # X = P^{-1} V with P = (a1; a2), V = (v1; v2)
            V = [[(Fraction(u[0], den), Fraction(u[1], den)) for u in v] for v in (v1, v2)]
            X = [[K.mul(Pinv_scale, K.add(K.mul(Padj[i][0], V[0][j]), K.mul(Padj[i][1], V[1][j])))
                  for j in range(2)] for i in range(2)]
            if _same_lattice(M1.times_matrix(X), M2):
                return X
    return None


def _inverse2(K: QuadField, Y) -> list:
    d = K.inv(K.sub(K.mul(Y[0][0], Y[1][1]), K.mul(Y[0][1], Y[1][0])))
    return [[K.mul(d, Y[1][1]), K.mul(d, K.neg(Y[0][1]))],
            [K.mul(d, K.neg(Y[1][0])), K.mul(d, Y[0][0])]]


def _reduced_vectors(M: RModule) -> tuple[list, Fraction]:
    """An LLL-reduced Z-basis of M (as K-vectors) and the sum of its squared lengths."""
    K = M.K
    V = M.vectors()
    m = len(V)
    G = [[sum(K.trace(K.mul(V[a][k], K.conj(V[b][k]))) / 2 for k in range(M.rank)) for b in range(m)]
         for a in range(m)]
    T = lll_gram(G)
    out = [[K.elt(0) for _ in range(M.rank)] for _ in range(m)]
    for i in range(m):
        for a in range(m):
            if T[i][a]:
                out[i] = [K.add(x, K.scale(T[i][a], y)) for x, y in zip(out[i], V[a])]
    size = sum(sum(T[i][a] * G[a][b] * T[i][b] for a in range(m) for b in range(m)) for i in range(m))
    return out, size


def _same_lattice(A: RModule, B: RModule) -> bool:
    return A.basis == B.basis
