"""Exact integer and rational linear algebra.

Everything here works on plain nested lists of ``int`` or ``Fraction``.
Sizes in this package never exceed a dozen rows, so clarity wins over
asymptotics.
"""
from __future__ import annotations

import math
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Matrix = list  # list[list[int | Fraction]]


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a - (a // b) * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def matmul(A: Matrix, B: Matrix) -> Matrix:
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def matmul_mod(A: Matrix, B: Matrix, mod: int) -> Matrix:
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) % mod for col in Bt] for row in A]


def transpose(A: Matrix) -> Matrix:
    return [list(r) for r in zip(*A)]


def kron(A: Matrix, B: Matrix) -> Matrix:
    rb, cb = len(B), len(B[0])
    return [[A[i // rb][j // cb] * B[i % rb][j % cb]
             for j in range(len(A[0]) * cb)] for i in range(len(A) * rb)]


def block_diag(*blocks: Matrix) -> Matrix:
    n = sum(len(b) for b in blocks)
    out = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, v in enumerate(row):
                out[off + i][off + j] = v
        off += len(b)
    return out


def det(A: Matrix) -> int:
    """Bareiss fraction-free determinant of an integer matrix."""
    n = len(A)
    if n == 0:
        return 1
    M = [list(r) for r in A]
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def det_q(A: Matrix) -> Fraction:
    """Determinant of a rational matrix (clears denominators, then Bareiss)."""
    n = len(A)
    if n == 0:
        return Fraction(1)
    den = 1
    for row in A:
        for v in row:
            den = den * Fraction(v).denominator // gcd(den, Fraction(v).denominator)
    return Fraction(det([[int(Fraction(v) * den) for v in row] for row in A]), den ** n)


def inverse_q(A: Matrix) -> Matrix:
    n = len(A)
    M = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(A)]
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        M[c], M[piv] = M[piv], M[c]
        inv = 1 / M[c][c]
        M[c] = [v * inv for v in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    return [row[n:] for row in M]


def hnf(rows: Iterable[Sequence[int]]) -> Matrix:
    """Row Hermite normal form; zero rows are dropped.

    Pivots are positive and entries above a pivot lie in ``[0, pivot)``.
    """
    M = [list(r) for r in rows if any(r)]
    if not M:
        return []
    ncols = len(M[0])
    out: Matrix = []
    col = 0
    while M and col < ncols:
        nz = [r for r in M if r[col] != 0]
        if not nz:
            col += 1
            continue
        rest = [r for r in M if r[col] == 0]
        piv = nz[0]
        for r in nz[1:]:
            g, x, y = xgcd(piv[col], r[col])
            a, b = piv[col] // g, r[col] // g
            newp = [x * u + y * v for u, v in zip(piv, r)]
            red = [b * u - a * v for u, v in zip(piv, r)]
            piv = newp
            if any(red):
                rest.append(red)
        if piv[col] < 0:
            piv = [-v for v in piv]
        out.append(piv)
        M = rest
        col += 1
    # reduce above pivots
    for i in range(len(out)):
        c = next(j for j, v in enumerate(out[i]) if v)
        p = out[i][c]
        for k in range(i):
            q = out[k][c] // p
            if q:
                out[k] = [u - q * v for u, v in zip(out[k], out[i])]
    return out


def common_denominator(rows: Iterable[Sequence]) -> int:
    den = 1
    for r in rows:
        for v in r:
            d = Fraction(v).denominator
            den = den * d // gcd(den, d)
    return den


def hnf_q(rows: Iterable[Sequence]) -> Matrix:
    """Hermite normal form of the Z-span of rational row vectors."""
    rows = [list(r) for r in rows]
    if not rows:
        return []
    den = common_denominator(rows)
    H = hnf([[int(Fraction(v) * den) for v in r] for r in rows])
    return [[Fraction(v, den) for v in r] for r in H]


def dual_lattice(basis: Matrix) -> Matrix:
    """Basis of {y : <b, y> in Z for every basis row b}; basis must be square."""
    inv = inverse_q(basis)
    return hnf_q(transpose(inv))


def solve_integral_preimage(constraints: Matrix) -> Matrix:
    """Lattice of y in Q^k with ``S @ y`` integral, where S has full column rank.

    The answer is the dual of the Z-span of the rows of S.
    """
    H = hnf_q(constraints)
    if not H or len(H) != len(H[0]):
        raise ValueError("constraint rows do not span")
    return dual_lattice(H)


def vec_valuation(v: int, ell: int, cap: int) -> int:
    if v == 0:
        return cap
    k = 0
    while v % ell == 0 and k < cap:
        v //= ell
        k += 1
    return k


class SmithModPrimePower:
    """Smith form of an integer matrix over Z/ell^e.

    ``A @ V`` has, after row operations, diagonal ell^vals[i].  ``V`` and its
    inverse are kept so kernels come out as explicit column vectors.
    """

    def __init__(self, A: Matrix, ell: int, e: int):
        self.ell, self.e, self.mod = ell, e, ell ** e
        mod = self.mod
        rows = len(A)
        cols = len(A[0]) if rows else 0
        self.cols = cols
        M = [[v % mod for v in r] for r in A]
        V = identity(cols)
        Vi = identity(cols)
        vals = []
        k = 0
        while k < min(rows, cols):
            best = None
            for i in range(k, rows):
                for j in range(k, cols):
                    if M[i][j]:
                        v = vec_valuation(M[i][j], ell, e)
                        if best is None or v < best[0]:
                            best = (v, i, j)
                            if v == 0:
                                break
                if best and best[0] == 0:
                    break
            if best is None:
                break
            v, i, j = best
            M[k], M[i] = M[i], M[k]
            if j != k:
                for r in M:
                    r[k], r[j] = r[j], r[k]
                for r in V:
                    r[k], r[j] = r[j], r[k]
                Vi[k], Vi[j] = Vi[j], Vi[k]
            piv = M[k][k]
            unit = piv // ell ** v
            uinv = pow(unit, -1, mod)
            M[k] = [x * uinv % mod for x in M[k]]
            sh = ell ** v
            for r in range(rows):
                if r != k and M[r][k]:
                    f = M[r][k] // sh
                    M[r] = [(x - f * y) % mod for x, y in zip(M[r], M[k])]
            for c in range(k + 1, cols):
                if M[k][c]:
                    f = M[k][c] // sh
                    # column op: col_c -= f * col_k
                    for r in M:
                        r[c] = (r[c] - f * r[k]) % mod
                    for r in V:
                        r[c] = (r[c] - f * r[k]) % mod
                    Vi[k] = [(a + f * b) % mod for a, b in zip(Vi[k], Vi[c])]
            vals.append(v)
            k += 1
        self.vals = vals
        self.V = V
        self.Vinv = Vi

    def kernel(self) -> tuple[list[int], Matrix]:
        """Return (exponents, generators) with ker = sum of cyclic Z/ell^exp pieces.

        Generators are column vectors (as lists); exponent e pieces are free.
        """
        ell, e, mod = self.ell, self.e, self.mod
        exps, gens = [], []
        for i in range(self.cols):
            v = self.vals[i] if i < len(self.vals) else e
            v = min(v, e)
            if v == 0:
                continue
            col = [self.V[r][i] * ell ** (e - v) % mod for r in range(self.cols)]
            exps.append(v)
            gens.append(col)
        return exps, gens

    def kernel_order_exponent(self) -> int:
        return sum(min(v, self.e) for v in self.vals) + self.e * (self.cols - len(self.vals))

    def free_kernel_basis(self) -> tuple[Matrix, Matrix] | None:
        """If the kernel is free, return (basis columns, left-inverse rows)."""
        e = self.e
        idx = []
        for i in range(self.cols):
            v = self.vals[i] if i < len(self.vals) else e
            if 0 < v < e:
                return None
            if v >= e:
                idx.append(i)
        K = [[self.V[r][i] for r in range(self.cols)] for i in idx]
        L = [list(self.Vinv[i]) for i in idx]
        return K, L


def charpoly(A: Matrix) -> list[int]:
    """Characteristic polynomial det(xI - A), coefficients high degree first."""
    n = len(A)
    coeffs = [1]
    Mk = [[0] * n for _ in range(n)]
    c = 1
    for k in range(1, n + 1):
        Mk = matmul(A, Mk)
        for i in range(n):
            Mk[i][i] += c
        AM = matmul(A, Mk)
        tr = sum(AM[i][i] for i in range(n))
        assert tr % k == 0
        c = -tr // k
        coeffs.append(c)
    return coeffs


def poly_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def mat_pow_mod(A: Matrix, k: int, mod: int) -> Matrix:
    R = identity(len(A))
    B = [[v % mod for v in r] for r in A]
    while k:
        if k & 1:
            R = matmul_mod(R, B, mod)
        B = matmul_mod(B, B, mod)
        k >>= 1
    return R


# ---------------------------------------------------------------------------
# LLL and short-vector enumeration for positive definite rational forms

def lll_gram(G: Matrix, delta: Fraction = Fraction(3, 4)) -> Matrix:
    """LLL-reduce with respect to Gram matrix G; returns the unimodular transform.

    Row i of the result expresses the i-th reduced vector in the input basis.
    """
    n = len(G)
    den = common_denominator(G)
    G = [[int(v * den) for v in r] for r in G]     # scaling does not change the reduction
    T = identity(n)

    def gso():
        TG = [[sum(T[i][a] * G[a][b] for a in range(n)) for b in range(n)] for i in range(n)]

        def gram(i, j):
            return sum(TG[i][b] * T[j][b] for b in range(n))

        mu = [[Fraction(0)] * n for _ in range(n)]
        Bn = [Fraction(0)] * n
        for i in range(n):
            for j in range(i):
                mu[i][j] = (gram(i, j) - sum(mu[j][k] * mu[i][k] * Bn[k] for k in range(j))) / Bn[j]
            Bn[i] = gram(i, i) - sum(mu[i][k] ** 2 * Bn[k] for k in range(i))
        return mu, Bn

    k = 1
    mu, Bn = gso()
    while k < n:
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                T[k] = [a - q * b for a, b in zip(T[k], T[j])]
                mu, Bn = gso()
        if Bn[k] >= (delta - mu[k][k - 1] ** 2) * Bn[k - 1]:
            k += 1
        else:
            T[k], T[k - 1] = T[k - 1], T[k]
            mu, Bn = gso()
            k = max(k - 1, 1)
    return T


def short_vectors(G: Matrix, bound, limit: int | None = None):
    """Yield integer coefficient vectors x != 0 with x^T G x <= bound (Fincke-Pohst).

    The enumeration runs in floating point with a small slack so that it
    visits a superset of the solutions; each candidate is then checked with
    exact arithmetic.  One of each pair +-x is produced.  Stops after
    ``limit`` vectors if given.
    """
    n = len(G)
    Q = [[Fraction(v) for v in r] for r in G]
    A = [[float(v) for v in r] for r in Q]
    q = [[0.0] * n for _ in range(n)]
    for i in range(n):
        q[i][i] = A[i][i]
        for j in range(i + 1, n):
            q[i][j] = A[i][j] / A[i][i]
        for j in range(i + 1, n):
            for k in range(j, n):
                A[j][k] -= q[i][j] * A[i][k]
                A[k][j] = A[j][k]
    bound = Fraction(bound)
    slack = 1e-7 * (1.0 + float(bound))
    # exact check in integers: x^T (s G) x <= s bound
    scale = common_denominator(Q + [[bound]])
    Qint = [[int(v * scale) for v in r] for r in Q]
    bound_int = math.floor(bound * scale)
    x = [0] * n

    def rec(i, remaining):
        if i < 0:
            yield x
            return
        centre = -sum(q[i][j] * x[j] for j in range(i + 1, n))
        r = math.sqrt(max(remaining, 0.0) / q[i][i]) + 1e-7
        for xi in range(math.ceil(centre - r), math.floor(centre + r) + 1):
            d = (xi - centre) ** 2 * q[i][i]
            if d <= remaining:
                x[i] = xi
                yield from rec(i - 1, remaining - d)
        x[i] = 0

    count = 0
    for v in rec(n - 1, float(bound) + slack):
        if not any(v):
            continue
        first = next(c for c in reversed(v) if c)
        if first < 0:
            continue
        nz = [(i, c) for i, c in enumerate(v) if c]
        if sum(ci * cj * Qint[i][j] for i, ci in nz for j, cj in nz) > bound_int:
            continue
        yield list(v)
        count += 1
        if limit is not None and count >= limit:
            return


def smith_invariants(A: Matrix) -> list[int]:
    """Nonzero invariant factors d1 | d2 | ... of an integer matrix."""
    M = [list(r) for r in A if any(r)]
    if not M:
        return []
    rows, cols = len(M), len(M[0])
    out = []
    k = 0
    while k < min(rows, cols):
        nz = [(abs(M[i][j]), i, j) for i in range(k, rows) for j in range(k, cols) if M[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        M[k], M[i] = M[i], M[k]
        for r in M:
            r[k], r[j] = r[j], r[k]
        done = False
        while not done:
            done = True
            piv = M[k][k]
            for i in range(k + 1, rows):
                if M[i][k]:
                    q = M[i][k] // piv
                    M[i] = [a - q * b for a, b in zip(M[i], M[k])]
                    if M[i][k]:
                        done = False
            for j in range(k + 1, cols):
                if M[k][j]:
                    q = M[k][j] // piv
                    for r in M:
                        r[j] -= q * r[k]
                    if M[k][j]:
                        done = False
            if not done:
                nz = [(abs(M[i][j]), i, j) for i in range(k, rows) for j in range(k, cols)
                      if M[i][j] and (i == k or j == k)]
                _, i, j = min(nz)
                M[k], M[i] = M[i], M[k]
                for r in M:
                    r[k], r[j] = r[j], r[k]
                continue
            # make the pivot divide the rest of the block
            bad = next(((i, j) for i in range(k + 1, rows) for j in range(k + 1, cols)
                        if M[i][j] % M[k][k]), None)
            if bad is not None:
                M[k] = [a + b for a, b in zip(M[k], M[bad[0]])]
                done = False
        out.append(abs(M[k][k]))
        k += 1
    return out
