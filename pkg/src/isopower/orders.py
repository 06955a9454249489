"""Imaginary quadratic orders, binary quadratic forms and lattices in K.

Elements of K = Q(sqrt(d_K)) are pairs (x, y) of Fractions standing for
x + y*w with w = (d_K + sqrt(d_K))/2, so the maximal order is Z + Z*w and the
order of conductor f is Z + Z*f*w.  Lattices in K are 2x2 rational bases in
Hermite normal form with respect to that coordinate system.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from typing import Iterable, Sequence

from sympy import divisors, factorint

from . import config
from .errors import (BadDiscriminant, BoundExceeded, DegenerateLattice, NonInvertible,
                     OwnerMismatch)
from .linalg import det_q, hnf_q, inverse_q, matmul, solve_integral_preimage, xgcd

Form = tuple  # (a, b, c)


# ---------------------------------------------------------------------------
# the quadratic field

@dataclass(frozen=True)
class QuadField:
    dK: int

    @property
    def nw(self) -> int:
        """Norm of w."""
        return (self.dK * self.dK - self.dK) // 4

    def elt(self, x, y=0) -> tuple:
        return (Fraction(x), Fraction(y))

    def from_sqrt(self, a, b, den=1) -> tuple:
        """(a + b*sqrt(d_K)) / den."""
        # sqrt(d_K) = 2w - d_K
        return (Fraction(a - b * self.dK, den), Fraction(2 * b, den))

    def add(self, u, v):
        return (u[0] + v[0], u[1] + v[1])

    def sub(self, u, v):
        return (u[0] - v[0], u[1] - v[1])

    def neg(self, u):
        return (-u[0], -u[1])

    def scale(self, k, u):
        return (k * u[0], k * u[1])

    def mul(self, u, v):
        a, b = u
        c, d = v
        return (a * c - b * d * self.nw, a * d + b * c + b * d * self.dK)

    def conj(self, u):
        return (u[0] + u[1] * self.dK, -u[1])

    def norm(self, u):
        x, y = u
        return x * x + self.dK * x * y + self.nw * y * y

    def trace(self, u):
        return 2 * u[0] + self.dK * u[1]

    def inv(self, u):
        n = self.norm(u)
        if n == 0:
            raise ZeroDivisionError("zero has no inverse")
        c = self.conj(u)
        return (Fraction(c[0]) / n, Fraction(c[1]) / n)

    def div(self, u, v):
        return self.mul(u, self.inv(v))

    def is_zero(self, u) -> bool:
        return u[0] == 0 and u[1] == 0

    def mul_matrix(self, u) -> list:
        """Rows: coordinates of 1*u and w*u (so (x, y) @ M = (x + y w) u)."""
        return [list(u), list(self.mul((Fraction(0), Fraction(1)), u))]


# ---------------------------------------------------------------------------
# orders

def _fundamental_split(D: int) -> tuple[int, int]:
    """Write D = f^2 * d_K with d_K fundamental."""
    fac = factorint(-D)
    s, k = -1, 1
    for pr, e in fac.items():
        s *= pr ** (e % 2)
        k *= pr ** (e // 2)
    if s % 4 == 1:
        return s, k
    # s is 2 or 3 mod 4: d_K = 4s and the square part loses a factor 2
    if k % 2:
        raise BadDiscriminant("not a discriminant", D=D)
    return 4 * s, k // 2


@dataclass(frozen=True)
class QuadOrder:
    """The order of discriminant D = f^2 d_K in an imaginary quadratic field."""
    D: int
    dK: int = field(compare=False)
    f: int = field(compare=False)

    @property
    def K(self) -> QuadField:
        return QuadField(self.dK)

    @property
    def gen(self) -> tuple:
        """The generator f*w, so the order is Z + Z*gen."""
        return (Fraction(0), Fraction(self.f))

    @property
    def basis(self) -> list:
        return [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(self.f)]]

    def lattice(self) -> "KLattice":
        return KLattice(self.dK, self.basis)

    def element(self, x: int, y: int = 0) -> tuple:
        """x + y*gen."""
        return (Fraction(x), Fraction(y * self.f))

    def contains(self, u) -> bool:
        return u[0].denominator == 1 and u[1].denominator == 1 and u[1].numerator % self.f == 0

    def suborder(self, g: int) -> "QuadOrder":
        return order_from_disc(self.dK * g * g)

    def contains_order(self, other: "QuadOrder") -> bool:
        return self.dK == other.dK and other.f % self.f == 0

    def identity_form(self) -> Form:
        b = self.D % 2
        return (1, b, (b * b - self.D) // 4)

    def __repr__(self) -> str:
        return f"QuadOrder(D={self.D}, f={self.f}, dK={self.dK})"


def order_from_disc(D: int) -> QuadOrder:
    if not isinstance(D, int) or D >= 0 or D % 4 not in (0, 1):
        raise BadDiscriminant("need a negative integer congruent to 0 or 1 mod 4", D=D)
    dK, f = _fundamental_split(D)
    return QuadOrder(D, dK, f)


def suborder_chain_candidates(R: QuadOrder) -> list[QuadOrder]:
    """Every order containing R, from R itself up to the maximal order."""
    return [R.suborder(g) for g in sorted(divisors(R.f), reverse=True)]


# ---------------------------------------------------------------------------
# binary quadratic forms

def disc(form: Form) -> int:
    a, b, c = form
    return b * b - 4 * a * c


def is_primitive(form: Form) -> bool:
    return gcd(gcd(form[0], form[1]), form[2]) == 1


def normalize(form: Form) -> Form:
    a, b, c = form
    D = b * b - 4 * a * c
    if -a < b <= a:
        return form
    k = (a - b) // (2 * a)
    b2 = b + 2 * a * k
    return (a, b2, (b2 * b2 - D) // (4 * a))


def reduce_form(form: Form) -> Form:
    """The reduced form equivalent to a positive definite form."""
    a, b, c = normalize(form)
    while a > c:
        a, b, c = normalize((c, -b, a))
    if a == c and b < 0:
        b = -b
    return (a, b, c)


def is_reduced(form: Form) -> bool:
    a, b, c = form
    if not (abs(b) <= a <= c):
        return False
    if (a == c or abs(b) == a) and b < 0:
        return False
    return True


def compose_forms(f1: Form, f2: Form) -> Form:
    """Gaussian composition followed by reduction."""
    a1, b1, c1 = f1
    a2, b2, c2 = f2
    if disc(f1) != disc(f2):
        raise OwnerMismatch("forms have different discriminants", d1=disc(f1), d2=disc(f2))
    if a1 > a2:
        a1, b1, c1, a2, b2, c2 = a2, b2, c2, a1, b1, c1
    s = (b1 + b2) // 2
    n = b2 - s
    if a2 % a1 == 0:
        y1, d = 0, a1
    else:
        d, u, _ = xgcd(a2, a1)
        y1 = u
    if s % d == 0:
        y2, x2, d1 = -1, 0, d
    else:
        d1, x2, y2 = xgcd(s, d)
        y2 = -y2
    v1 = a1 // d1
    v2 = a2 // d1
    r = (y1 * y2 * n - x2 * c2) % v1
    b3 = b2 + 2 * v2 * r
    a3 = v1 * v2
    c3 = (b3 * b3 - disc(f1)) // (4 * a3)
    return reduce_form((a3, b3, c3))


def conjugate_form(form: Form) -> Form:
    return (form[0], -form[1], form[2])


def form_power(form: Form, k: int) -> Form:
    D = disc(form)
    b = D % 2
    result = (1, b, (b * b - D) // 4)
    base = reduce_form(form)
    if k < 0:
        base, k = reduce_form(conjugate_form(base)), -k
    while k:
        if k & 1:
            result = compose_forms(result, base)
        base = compose_forms(base, base)
        k >>= 1
    return result


def reduced_forms(D: int) -> list[Form]:
    """All reduced primitive forms of discriminant D, sorted."""
    out = []
    amax = isqrt(-D // 3)
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            if (b - D) % 2:
                continue
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a:
                continue
            if (a == c) and b < 0:
                continue
            if gcd(gcd(a, b), c) != 1:
                continue
            out.append((a, b, c))
    return sorted(out)


@dataclass(frozen=True)
class ClassGroup:
    order: QuadOrder
    reps: tuple          # reduced forms, sorted
    structure: tuple     # invariant factors d1 | d2 | ... (empty for the trivial group)

    @property
    def h(self) -> int:
        return len(self.reps)

    @property
    def identity(self) -> Form:
        return self.order.identity_form()

    def compose(self, f1: Form, f2: Form) -> Form:
        return compose_forms(f1, f2)

    def element_order(self, form: Form) -> int:
        k, cur = 1, reduce_form(form)
        while cur != self.identity:
            cur = compose_forms(cur, form)
            k += 1
        return k


def class_group(R: QuadOrder) -> ClassGroup:
    bound = config.current().bound_disc
    if -R.D > bound:
        raise BoundExceeded("discriminant beyond class-group bound", D=R.D, cap=bound)
    return _class_group(R.D)


@lru_cache(maxsize=None)
def _class_group(D: int) -> ClassGroup:
    R = order_from_disc(D)
    reps = tuple(reduced_forms(D))
    h = len(reps)
    ident = R.identity_form()
    orders = {}
    for f in reps:
        k, cur = 1, f
        while cur != ident:
            cur = compose_forms(cur, f)
            k += 1
        orders[f] = k
    structure = invariant_factors_from_orders(list(orders.values()), h)
    return ClassGroup(R, reps, structure)


def invariant_factors_from_orders(orders: Sequence[int], size: int) -> tuple:
    """Invariant factors of a finite abelian group from the multiset of element orders."""
    if size == 1:
        return ()
    parts: dict[int, list[int]] = {}
    for pr in factorint(size):
        # n_j = #{x : x^(pr^j) = 1}; the number of cyclic factors of order >= pr^j
        # is log_pr(n_j / n_{j-1})
        exps = []
        j, prev = 1, 1
        while True:
            nj = sum(1 for o in orders if (pr ** j) % o == 0)
            if nj == prev:
                break
            cnt = 0
            r = nj // prev
            while r > 1:
                r //= pr
                cnt += 1
            exps.append(cnt)
            prev = nj
            j += 1
        # exps[j-1] = number of factors with exponent >= j
        mult = []
        for j in range(len(exps)):
            nxt = exps[j + 1] if j + 1 < len(exps) else 0
            mult += [j + 1] * (exps[j] - nxt)
        parts[pr] = sorted(mult, reverse=True)
    width = max(len(v) for v in parts.values())
    factors = []
    for i in range(width):
        d = 1
        for pr, ex in parts.items():
            if i < len(ex):
                d *= pr ** ex[i]
        factors.append(d)
    return tuple(sorted(factors))


def _prime_part(n: int, pr: int) -> int:
    out = 1
    while n % pr == 0:
        n //= pr
        out *= pr
    return out


# ---------------------------------------------------------------------------
# lattices in K

class KLattice:
    """A full-rank Z-lattice in K, kept as a rational basis in Hermite normal form."""

    def __init__(self, dK: int, gens: Iterable[Sequence]):
        self.dK = dK
        H = hnf_q(gens)
        if len(H) != 2:
            raise DegenerateLattice("generators do not span a rank-2 lattice", rank=len(H))
        self.basis = tuple(tuple(r) for r in H)

    @property
    def K(self) -> QuadField:
        return QuadField(self.dK)

    def __eq__(self, other) -> bool:
        return isinstance(other, KLattice) and self.dK == other.dK and self.basis == other.basis

    def __hash__(self) -> int:
        return hash((self.dK, self.basis))

    def __repr__(self) -> str:
        return f"KLattice(dK={self.dK}, basis={[[str(v) for v in r] for r in self.basis]})"

    @property
    def covolume(self) -> Fraction:
        """|det| of the basis; the index [O_K : L] for integral L."""
        return abs(det_q([list(r) for r in self.basis]))

    def contains(self, u) -> bool:
        inv = inverse_q([list(r) for r in self.basis])
        c = matmul([list(u)], inv)[0]
        return all(Fraction(v).denominator == 1 for v in c)

    def scaled(self, u) -> "KLattice":
        K = self.K
        return KLattice(self.dK, [K.mul(b, u) for b in self.basis])


def lattice_sum(L1: KLattice, L2: KLattice) -> KLattice:
    return KLattice(L1.dK, list(L1.basis) + list(L2.basis))


def lattice_product(L1: KLattice, L2: KLattice) -> KLattice:
    K = L1.K
    return KLattice(L1.dK, [K.mul(a, b) for a in L1.basis for b in L2.basis])


def colon_lattice(L1: KLattice, L2: KLattice) -> KLattice:
    """(L1 : L2) = {x in K : x L2 in L1}."""
    if L1.dK != L2.dK:
        raise DegenerateLattice("lattices live in different fields", d1=L1.dK, d2=L2.dK)
    K = L1.K
    B1inv = inverse_q([list(r) for r in L1.basis])
    rows = []
    for beta in L2.basis:
        # (u, v) -> coordinates of (u + v w) * beta in the basis of L1
        C = matmul(K.mul_matrix(beta), B1inv)   # 2x2: row i = image of i-th unit vector
        for j in range(2):
            rows.append([C[0][j], C[1][j]])
    return KLattice(L1.dK, solve_integral_preimage(rows))


def multiplier_ring(L: KLattice) -> QuadOrder:
    """The order (L : L)."""
    M = colon_lattice(L, L)
    (a, b), (c, d) = M.basis
    assert a == 1 and b == 0 and c == 0 and d.denominator == 1, M
    return order_from_disc(L.dK * int(d) ** 2)


def oriented_basis(L: KLattice) -> tuple:
    """A basis (alpha, beta) with Im(beta / alpha) > 0."""
    K = L.K
    alpha, beta = L.basis
    if K.mul(beta, K.conj(alpha))[1] < 0:
        beta = K.neg(beta)
    return alpha, beta


def form_of_lattice(L: KLattice) -> Form:
    """The primitive form N(x alpha - y beta) / content attached to L (not reduced)."""
    K = L.K
    alpha, beta = oriented_basis(L)
    a = K.norm(alpha)
    b = -K.trace(K.mul(alpha, K.conj(beta)))
    c = K.norm(beta)
    den = 1
    for v in (a, b, c):
        den = den * v.denominator // gcd(den, v.denominator)
    a, b, c = int(a * den), int(b * den), int(c * den)
    g = gcd(gcd(a, b), c)
    return (a // g, b // g, c // g)


def lattice_of_form(dK: int, form: Form) -> KLattice:
    """The lattice a Z + ((-b + sqrt(D))/2) Z of a primitive form of discriminant f^2 d_K."""
    a, b, c = form
    D = b * b - 4 * a * c
    R = order_from_disc(D)
    if R.dK != dK:
        raise BadDiscriminant("form does not belong to this field", D=D, dK=dK)
    f = R.f
    return KLattice(dK, [[a, 0], [Fraction(-b - f * dK, 2), f]])


# ---------------------------------------------------------------------------
# invertible ideals

@dataclass(frozen=True)
class QuadIdeal:
    """An invertible ideal of ``owner``: its form together with a Z-basis."""
    owner: QuadOrder
    form: Form
    zbasis: tuple = field(compare=False)

    @property
    def lattice(self) -> KLattice:
        return KLattice(self.owner.dK, self.zbasis)

    @property
    def norm(self) -> int:
        return self.form[0]

    def reduced(self) -> "QuadIdeal":
        return ideal_from_form(self.owner, reduce_form(self.form))

    def to_json(self) -> list:
        return list(self.form)


def ideal_from_form(R: QuadOrder, form: Form) -> QuadIdeal:
    form = tuple(int(v) for v in form)
    if disc(form) != R.D:
        raise BadDiscriminant("form discriminant does not match the order", form=form, D=R.D)
    if not is_primitive(form):
        raise NonInvertible("form is not primitive", form=form)
    if form[0] <= 0:
        raise NonInvertible("form is not positive definite", form=form)
    L = lattice_of_form(R.dK, form)
    return QuadIdeal(R, form, L.basis)


def unit_ideal(R: QuadOrder) -> QuadIdeal:
    return ideal_from_form(R, R.identity_form())


def ideal_of_lattice(L: KLattice) -> QuadIdeal:
    """The lattice as an invertible ideal of its multiplier ring (form not reduced)."""
    R = multiplier_ring(L)
    form = form_of_lattice(L)
    assert disc(form) == R.D
    return QuadIdeal(R, form, L.basis)


def ideal_arith(I: QuadIdeal, J: QuadIdeal | None = None, op: str = "compose") -> QuadIdeal:
    """compose, invert, conjugate or reduce ideals given by forms."""
    for X in (I, J):
        if X is not None and not is_primitive(X.form):
            raise NonInvertible("form is not primitive", form=X.form)
    if op == "compose":
        if J is None or I.owner != J.owner:
            raise OwnerMismatch("ideals belong to different orders",
                                d1=I.owner.D, d2=None if J is None else J.owner.D)
        return ideal_from_form(I.owner, compose_forms(I.form, J.form))
    if op == "conjugate":
        return ideal_from_form(I.owner, conjugate_form(I.form))
    if op == "invert":
        return ideal_from_form(I.owner, reduce_form(conjugate_form(I.form)))
    if op == "reduce":
        return ideal_from_form(I.owner, reduce_form(I.form))
    raise ValueError(f"unknown operation {op!r}")


def same_class(f1: Form, f2: Form) -> bool:
    return reduce_form(f1) == reduce_form(f2)
