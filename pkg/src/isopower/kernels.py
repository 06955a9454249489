"""Kernel subgroups of E^r at primes l != p.

A subgroup of E[l^e]^r is stored as a frozenset of coordinate tuples of length
2r (coordinates in the torsion basis, block i belonging to the i-th factor).
Matrices are 2x2 over Z/l^e acting on column vectors.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from . import config
from .arith.curve import EllipticCurve
from .arith.torsion import torsion_basis
from .errors import BadPrime, BoundExceeded, NotGaloisStable, SingularMatrix, UsageError
from .linalg import SmithModPrimePower

Vector = tuple
Subgroup = frozenset


# ---------------------------------------------------------------------------
# the commutant

@dataclass(frozen=True)
class Commutant:
    ell: int
    e: int
    basis: tuple              # 2x2 matrices over Z/l^e
    shape: str                # "scalar-only-M2", "rank2" or "Z_l-center"
    frob: tuple               # Frobenius on the torsion basis

    @property
    def modulus(self) -> int:
        return self.ell ** self.e

    def to_json(self) -> dict:
        return {"l": self.ell, "e": self.e, "shape": self.shape,
                "basis": [[list(r) for r in B] for B in self.basis]}


def _mm(A, B, mod: int) -> tuple:
    return tuple(tuple(sum(A[i][k] * B[k][j] for k in range(2)) % mod for j in range(2)) for i in range(2))


def _commuting_solutions(gens: Sequence, ell: int, e: int) -> list:
    """Generators of {X : XG = GX for all G} over Z/l^e."""
    mod = ell ** e
    rows = []
    for G in gens:
        # entry (i, j) of XG - GX as a linear form in X = (x00, x01, x10, x11)
        for i in range(2):
            for j in range(2):
                row = [0] * 4
                for k in range(2):
                    row[2 * i + k] += G[k][j]
                    row[2 * k + j] -= G[i][k]
                rows.append([v % mod for v in row])
    exps, cols = SmithModPrimePower(rows, ell, e).kernel()
    out = []
    for col in cols:
        out.append(((col[0] % mod, col[1] % mod), (col[2] % mod, col[3] % mod)))
    return out


def _is_rank4(E: EllipticCurve) -> bool:
    p = E.F.p
    return E.F.m == 2 and abs(E.trace) == 2 * p


def commutant(E: EllipticCurve, ell: int, e: int) -> Commutant:
    if ell == E.F.p:
        raise BadPrime("commutant needs l different from p", ell=ell, p=E.F.p)
    if _is_rank4(E):
        # End is a maximal quaternion order, so End tensor Z_l is all of M_2(Z_l)
        # and commutes only with scalars
        T = torsion_basis(E, ell, e)
        return Commutant(ell, e, (((1, 0), (0, 1)),), "Z_l-center", T.frob)
    from .decide import end_order
    from .functor import torsion_action

    # Frobenius and the generator of End E, both on the basis used for the lift
    act, _, _ = torsion_action(E, end_order(E), ell, e)
    frob = _columns(act.frob)
    rho = _columns(act.omega)
    basis = tuple(_commuting_solutions([frob, rho], ell, e))
    return Commutant(ell, e, basis, "rank2", frob)


def _columns(M) -> tuple:
    return tuple(tuple(M[j][i] for j in range(2)) for i in range(2))


def commutant_from_matrices(mats: Sequence, ell: int, e: int = 1) -> Commutant:
    """The commutant of the algebra generated by the given matrices."""
    mats = [tuple(tuple(int(v) % ell ** e for v in r) for r in M) for M in mats]
    basis = tuple(_commuting_solutions(mats, ell, e))
    dim = len(basis)
    shape = "scalar-only-M2" if dim == 4 else ("Z_l-center" if dim == 1 else "rank2")
    return Commutant(ell, e, basis, shape, mats[0] if mats else ((1, 0), (0, 1)))


# ---------------------------------------------------------------------------
# subgroups

@dataclass(frozen=True)
class SubgroupData:
    ell: int
    e: int
    r: int
    generators: tuple

    @classmethod
    def from_json(cls, obj: dict) -> "SubgroupData":
        try:
            ell, e, r = int(obj["l"]), int(obj["e"]), int(obj["r"])
            gens = tuple(tuple(int(v) for v in g) for g in obj.get("generators", []))
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError("malformed subgroup data", error=str(exc)) from None
        if any(len(g) != 2 * r for g in gens):
            raise UsageError("generators must have 2r coordinates", r=r)
        return cls(ell, e, r, gens)

    def to_json(self) -> dict:
        return {"l": self.ell, "e": self.e, "r": self.r, "generators": [list(g) for g in self.generators]}

    def subgroup(self) -> Subgroup:
        return span(self.generators, self.ell ** self.e, 2 * self.r)


def span(gens: Iterable[Vector], mod: int, dim: int) -> Subgroup:
    out = {tuple([0] * dim)}
    frontier = list(out)
    gens = [tuple(v % mod for v in g) for g in gens]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = tuple((a + b) % mod for a, b in zip(x, g))
                if y not in out:
                    out.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(out)


def apply_blockwise(M, v: Vector, mod: int) -> Vector:
    out = []
    for i in range(0, len(v), 2):
        x, y = v[i], v[i + 1]
        out.append((M[0][0] * x + M[0][1] * y) % mod)
        out.append((M[1][0] * x + M[1][1] * y) % mod)
    return tuple(out)


def is_stable(G: Subgroup, M, mod: int) -> bool:
    return all(apply_blockwise(M, v, mod) in G for v in G)


def generators_of(G: Subgroup, mod: int, dim: int) -> tuple:
    """A small generating set, chosen greedily in sorted order."""
    gens: list = []
    cur = span([], mod, dim)
    for v in sorted(G):
        if v not in cur:
            gens.append(v)
            cur = span(gens, mod, dim)
            if cur == G:
                break
    return tuple(gens)


def frobenius_stable_subgroups(frob, ell: int, e: int, r: int) -> set:
    """Every subgroup of (Z/l^e)^(2r) stable under the block-diagonal Frobenius."""
    mod = ell ** e
    dim = 2 * r
    _check_size(ell, e, r)
    vectors = list(itertools.product(range(mod), repeat=dim))
    zero = span([], mod, dim)
    found = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for H in frontier:
            for v in vectors:
                if v in H:
                    continue
                orbit = [v]
                w = apply_blockwise(frob, v, mod)
                while w not in orbit:
                    orbit.append(w)
                    w = apply_blockwise(frob, w, mod)
                S = span(orbit, mod, dim)
                G = frozenset(tuple((a + b) % mod for a, b in zip(h, s)) for h in H for s in S)
                if G not in found:
                    found.add(G)
                    nxt.append(G)
        frontier = nxt
    return found


def _check_size(ell: int, e: int, r: int) -> None:
    if (ell ** e) ** (2 * r) > config.current().bound_group:
        raise BoundExceeded("subgroup enumeration too large", size=(ell ** e) ** (2 * r),
                            cap=config.current().bound_group)


def is_kernel_subgroup_for(C: Commutant, G: Subgroup) -> bool:
    mod = C.modulus
    if not is_stable(G, C.frob, mod):
        raise NotGaloisStable("subgroup is not stable under Frobenius")
    return all(is_stable(G, B, mod) for B in C.basis)


def is_kernel_subgroup(E: EllipticCurve, data: SubgroupData) -> bool:
    C = commutant(E, data.ell, data.e)
    return is_kernel_subgroup_for(C, data.subgroup())


# ---------------------------------------------------------------------------
# the brute-force oracle: kernels of homomorphisms E^r -> E^s

def _row_kernel(blocks: Sequence, mod: int, r: int) -> Subgroup:
    """Kernel on E[l^e]^r of x -> sum_j B_j x_j, each B_j a 2x2 or 1x2 matrix."""
    out = []
    for v in itertools.product(range(mod), repeat=2 * r):
        acc = [0] * len(blocks[0])
        for j, B in enumerate(blocks):
            x, y = v[2 * j], v[2 * j + 1]
            for i, row in enumerate(B):
                acc[i] += row[0] * x + row[1] * y
        if all(a % mod == 0 for a in acc):
            out.append(v)
    return frozenset(out)


def ring_matrices(E: EllipticCurve, ell: int, e: int) -> list:
    """Matrices of all elements of End E / l^e acting on E[l^e] (rows for the rank-4 case)."""
    mod = ell ** e
    if _is_rank4(E):
        return [((a, b),) for a in range(mod) for b in range(mod)]
    from .decide import end_order
    from .functor import torsion_action

    act, _, _ = torsion_action(E, end_order(E), ell, e)
    rho = _columns(act.omega)
    out = set()
    for a in range(mod):
        for b in range(mod):
            out.add(tuple(tuple((a * (i == j) + b * rho[i][j]) % mod for j in range(2)) for i in range(2)))
    return sorted(out)


def brute_force_kernels(E: EllipticCurve, ell: int, e: int, r: int, s_max: int = 4) -> set:
    if ell == E.F.p:
        raise BadPrime("kernel oracle needs l different from p", ell=ell, p=E.F.p)
    if ell ** e > 9 or r > 2 or s_max > 4:
        raise BoundExceeded("oracle parameters beyond the supported range", l=ell, e=e, r=r, s_max=s_max)
    _check_size(ell, e, r)
    mod = ell ** e
    mats = ring_matrices(E, ell, e)
    single = set()
    for blocks in itertools.product(mats, repeat=r):
        single.add(_row_kernel(blocks, mod, r))
    level = set(single)
    found = set(single)
    for _ in range(s_max - 1):
        nxt = set()
        for A in level:
            for B in single:
                C = A & B
                if C not in found:
                    nxt.add(C)
        found |= nxt
        level = nxt
        if not level:
            break
    return found


def criterion_kernels(E: EllipticCurve, ell: int, e: int, r: int) -> set:
    """Frobenius-stable subgroups passing the commutant test."""
    C = commutant(E, ell, e)
    return {G for G in frobenius_stable_subgroups(C.frob, ell, e, r) if is_kernel_subgroup_for(C, G)}


@dataclass(frozen=True)
class OracleComparison:
    ell: int
    e: int
    r: int
    stable: int
    kernels: int
    oracle: int
    agree: bool
    non_kernel: tuple          # generators of stable subgroups failing the test

    def to_json(self) -> dict:
        return {"l": self.ell, "e": self.e, "r": self.r, "stable": self.stable,
                "kernels": self.kernels, "oracle": self.oracle, "agree": self.agree,
                "non_kernel": [[list(g) for g in gens] for gens in self.non_kernel]}


def oracle_compare(E: EllipticCurve, ell: int, e: int, r: int, s_max: int = 4) -> OracleComparison:
    C = commutant(E, ell, e)
    mod = ell ** e
    stable = frobenius_stable_subgroups(C.frob, ell, e, r)
    good = {G for G in stable if is_kernel_subgroup_for(C, G)}
    bad = sorted(generators_of(G, mod, 2 * r) for G in stable - good)
    oracle = brute_force_kernels(E, ell, e, r, s_max)
    return OracleComparison(ell, e, r, len(stable), len(good), len(oracle), oracle == good, tuple(bad))


# ---------------------------------------------------------------------------
# images of Galois in C / l C

@dataclass(frozen=True)
class GaloisImage:
    surjective: bool
    classification: Optional[str]   # None, "borel" or "nonsplit-cartan"
    algebra_dim: int
    target_dim: int

    def to_json(self) -> dict:
        return {"surjective": self.surjective, "classification": self.classification,
                "algebra_dim": self.algebra_dim, "target_dim": self.target_dim}


def _flat(M, ell: int) -> list:
    return [M[0][0] % ell, M[0][1] % ell, M[1][0] % ell, M[1][1] % ell]


def _row_reduce(vectors: Iterable[list], ell: int) -> list:
    basis: list = []
    for v in vectors:
        v = [x % ell for x in v]
        for b in basis:
            piv = next(i for i, x in enumerate(b) if x)
            if v[piv]:
                f = v[piv]
                v = [(x - f * y) % ell for x, y in zip(v, b)]
        if any(v):
            piv = next(i for i, x in enumerate(v) if x)
            inv = pow(v[piv], -1, ell)
            v = [x * inv % ell for x in v]
            basis = [[(x - b[piv] * y) % ell for x, y in zip(b, v)] for b in basis]
            basis.append(v)
    return basis


def _unflat(v) -> tuple:
    return ((v[0], v[1]), (v[2], v[3]))


def generated_algebra(mats: Sequence, ell: int) -> list:
    """F_l-basis (flattened) of the algebra generated by the matrices and the identity."""
    basis = _row_reduce([[1, 0, 0, 1]] + [_flat(M, ell) for M in mats], ell)
    while True:
        prods = [_flat(_mm(_unflat(a), _unflat(b), ell), ell) for a in basis for b in basis]
        new = _row_reduce(basis + prods, ell)
        if len(new) == len(basis):
            return new
        basis = new


def _has_common_eigenvector(mats: Sequence, ell: int) -> bool:
    lines = [(1, y) for y in range(ell)] + [(0, 1)]
    for v in lines:
        ok = True
        for M in mats:
            w = ((M[0][0] * v[0] + M[0][1] * v[1]) % ell, (M[1][0] * v[0] + M[1][1] * v[1]) % ell)
            if (w[0] * v[1] - w[1] * v[0]) % ell:
                ok = False
                break
        if ok:
            return True
    return False


def galois_image_test(matrices: Sequence, C_basis: Sequence, ell: int) -> GaloisImage:
    mats = [tuple(tuple(int(v) % ell for v in r) for r in M) for M in matrices]
    for M in mats:
        if (M[0][0] * M[1][1] - M[0][1] * M[1][0]) % ell == 0:
            raise SingularMatrix("Galois matrices must be invertible mod l", matrix=[list(r) for r in M])
    alg = generated_algebra(mats, ell)
    target = _row_reduce([_flat(B, ell) for B in C_basis], ell)
    joint = _row_reduce(target + alg, ell)
    surjective = len(joint) == len(target) and len(alg) == len(target)
    cls = None
    if not surjective and len(target) == 4:
        cls = "borel" if _has_common_eigenvector(mats, ell) else "nonsplit-cartan"
    return GaloisImage(surjective, cls, len(alg), len(target))
