"""Finite fields F_{p^m} with elements encoded as integers.

An element sum(c_i x^i) of F_p[x]/(modulus) is stored as the integer
sum(c_i p^i), so 0 and 1 are the usual zero and one and the prime field sits
inside as 0..p-1.  Small fields get log/exp/Zech tables; larger ones fall back
to polynomial arithmetic on coefficient lists.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Optional

from sympy import factorint, isprime

from .. import config
from ..errors import DegreeOutOfRange, NotPrime


# -- polynomial helpers over F_p (coefficient lists, low degree first) -------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: list[int], f: list[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    df = len(f) - 1
    inv = pow(f[-1], -1, p)
    while len(a) - 1 >= df:
        c = a[-1] * inv % p
        shift = len(a) - 1 - df
        for i, fc in enumerate(f):
            a[shift + i] = (a[shift + i] - c * fc) % p
        _trim(a)
    return a


def _pmul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return [c % p for c in out]


def _ppowmod(base: list[int], k: int, f: list[int], p: int) -> list[int]:
    result = [1]
    base = _pmod(base, f, p)
    while k:
        if k & 1:
            result = _pmod(_pmul(result, base, p), f, p)
        base = _pmod(_pmul(base, base, p), f, p)
        k >>= 1
    return result


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _pinv(a: list[int], f: list[int], p: int) -> list[int]:
    """Inverse of a modulo the irreducible f by the extended Euclidean algorithm."""
    r0, r1 = list(f), _trim(list(a))
    s0, s1 = [], [1]
    while len(r1) > 1:
        inv = pow(r1[-1], -1, p)
        qt = [0] * (len(r0) - len(r1) + 1)
        r = list(r0)
        while len(r) >= len(r1):
            c = r[-1] * inv % p
            sh = len(r) - len(r1)
            qt[sh] = c
            for i, v in enumerate(r1):
                r[sh + i] = (r[sh + i] - c * v) % p
            _trim(r)
            if not r:
                break
        r0, r1 = r1, r
        s0, s1 = s1, _psub(s0, _pmul(qt, s1, p), p)
    c = pow(r1[0], -1, p)
    return [v * c % p for v in s1]


def _psub(a: list[int], b: list[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    return _trim([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)])


def is_irreducible(f: list[int], p: int) -> bool:
    """Ben-Or's test for a monic polynomial over F_p (early exit on small factors)."""
    m = len(f) - 1
    if m <= 0:
        return False
    if m == 1:
        return True
    x = [0, 1]
    h = x
    for _ in range(m // 2):
        h = _ppowmod(h, p, f, p)
        if len(_pgcd(f, _psub(h, x, p), p)) != 1:
            return False
    return True


def smallest_irreducible(p: int, m: int) -> tuple[int, ...]:
    """Monic irreducible of degree m whose coefficient encoding is smallest."""
    if m == 1:
        return (0, 1)
    for code in range(p ** m):
        coeffs = []
        c = code
        for _ in range(m):
            coeffs.append(c % p)
            c //= p
        if coeffs[0] == 0:
            continue
        f = coeffs + [1]
        if is_irreducible(f, p):
            return tuple(f)
    raise AssertionError("no irreducible polynomial found")


# -- the field ---------------------------------------------------------------

class FiniteField:
    """The field with p^m elements built on the smallest irreducible modulus."""

    def __init__(self, p: int, m: int, table_cap: int):
        self.p, self.m = p, m
        self.q = p ** m
        self.modulus = smallest_irreducible(p, m)
        self._f = list(self.modulus)
        self.prime = m == 1
        self.tabled = (not self.prime) and self.q <= table_cap
        if self.tabled:
            self._build_tables()
        self._nonresidue: Optional[int] = None
        self._as_system = None

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.m})"

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteField) and (self.p, self.m) == (other.p, other.m)

    def __hash__(self) -> int:
        return hash((self.p, self.m))

    # encoding
    def digits(self, a: int) -> list[int]:
        p = self.p
        out = []
        for _ in range(self.m):
            out.append(a % p)
            a //= p
        return out

    def from_digits(self, ds) -> int:
        v = 0
        for c in reversed(list(ds)[: self.m]):
            v = v * self.p + (c % self.p)
        return v

    def elements(self) -> range:
        return range(self.q)

    def contains(self, a) -> bool:
        return isinstance(a, int) and 0 <= a < self.q

    def _build_tables(self) -> None:
        q, p, f = self.q, self.p, self._f
        n = q - 1
        primes = list(factorint(n))
        g = None
        for cand in range(p, q):
            base = self.digits(cand)
            if all(_ppowmod(base, n // r, f, p) != [1] for r in primes):
                g = cand
                break
        assert g is not None
        self.generator = g
        exp = [0] * (2 * n)
        log = [0] * q
        cur = [1]
        gd = _trim(self.digits(g))
        for i in range(n):
            v = self.from_digits(cur + [0] * (self.m - len(cur)))
            exp[i] = v
            log[v] = i
            cur = _pmod(_pmul(cur, gd, p), f, p)
        for i in range(n, 2 * n):
            exp[i] = exp[i - n]
        self._exp, self._log = exp, log
        # Zech logarithms: 1 + g^k = g^zech[k]; -1 marks 1 + g^k = 0
        zech = [-1] * n
        for k in range(n):
            s = self._digit_add(1, exp[k])
            zech[k] = -1 if s == 0 else log[s]
        self._zech = zech

    def _digit_add(self, a: int, b: int) -> int:
        p = self.p
        if p == 2:
            return a ^ b
        out, mul = 0, 1
        while a or b:
            out += ((a % p + b % p) % p) * mul
            a //= p
            b //= p
            mul *= p
        return out

    # arithmetic
    def add(self, a: int, b: int) -> int:
        if self.prime:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        if self.tabled:
            if a == 0:
                return b
            if b == 0:
                return a
            la, lb = self._log[a], self._log[b]
            z = self._zech[(lb - la) % (self.q - 1)]
            return 0 if z < 0 else self._exp[la + z]
        return self._digit_add(a, b)

    def neg(self, a: int) -> int:
        if self.prime:
            return -a % self.p
        if self.p == 2 or a == 0:
            return a
        if self.tabled:
            # -1 = g^((q-1)/2) for odd q
            return self._exp[self._log[a] + (self.q - 1) // 2]
        return self.from_digits([-c for c in self.digits(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.prime:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        if self.tabled:
            return self._exp[self._log[a] + self._log[b]]
        prod = _pmod(_pmul(self.digits(a), self.digits(b), self.p), self._f, self.p)
        return self.from_digits(prod)

    def smul(self, k: int, a: int) -> int:
        """Multiply by the integer k."""
        return self.mul(k % self.p, a)

    def pow(self, a: int, k: int) -> int:
        if self.prime:
            return pow(a, k, self.p)
        if a == 0:
            return 0 if k > 0 else 1
        if self.tabled:
            return self._exp[(self._log[a] * k) % (self.q - 1)]
        if k < 0:
            a, k = self.inv(a), -k
        r = _ppowmod(self.digits(a), k, self._f, self.p)
        return self.from_digits(r)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.prime:
            return pow(a, -1, self.p)
        if self.tabled:
            return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]
        return self.from_digits(_pinv(self.digits(a), self._f, self.p))

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def frobenius(self, a: int, power: int) -> int:
        """a -> a^power, where power is a power of p."""
        return self.pow(a, power)

    # square roots and the Artin-Schreier equation
    def is_square(self, a: int) -> bool:
        if a == 0 or self.p == 2:
            return True
        if self.tabled:
            return self._log[a] % 2 == 0
        return self.pow(a, (self.q - 1) // 2) == 1

    def sqrt(self, a: int) -> Optional[int]:
        """A square root of a (the smaller encoding of the two), or None."""
        if a == 0:
            return 0
        if self.p == 2:
            return self.pow(a, self.q // 2)
        if self.tabled:
            la = self._log[a]
            if la % 2:
                return None
            r = self._exp[la // 2]
            return min(r, self.neg(r))
        if not self.is_square(a):
            return None
        q = self.q
        s, t = 0, q - 1
        while t % 2 == 0:
            s, t = s + 1, t // 2
        if self._nonresidue is None:
            z = 2
            while self.is_square(z):
                z += 1
            self._nonresidue = z
        c = self.pow(self._nonresidue, t)
        x = self.pow(a, (t + 1) // 2)
        b = self.pow(a, t)
        mm = s
        while b != 1:
            i, bb = 0, b
            while bb != 1:
                bb = self.mul(bb, bb)
                i += 1
            w = self.pow(c, 1 << (mm - i - 1))
            x = self.mul(x, w)
            c = self.mul(w, w)
            b = self.mul(b, c)
            mm = i
        return min(x, self.neg(x))

    def solve_artin_schreier(self, c: int) -> Optional[int]:
        """In characteristic 2, a root z of z^2 + z = c (the smaller one), or None."""
        if self._as_system is None:
            # eliminate the F_2-linear map z -> z^2 + z on bit vectors once per field
            basis: dict[int, tuple[int, int]] = {}
            for i in range(self.m):
                v = self.add(self.mul(1 << i, 1 << i), 1 << i)
                comb = 1 << i
                while v:
                    hb = v.bit_length() - 1
                    if hb not in basis:
                        basis[hb] = (v, comb)
                        break
                    bv, bc = basis[hb]
                    v ^= bv
                    comb ^= bc
            self._as_system = basis
        basis = self._as_system
        v, comb = c, 0
        while v:
            hb = v.bit_length() - 1
            if hb not in basis:
                return None
            bv, bc = basis[hb]
            v ^= bv
            comb ^= bc
        return min(comb, comb ^ 1)

    def trace_to_prime(self, a: int) -> int:
        """Absolute trace Tr_{F_q/F_p}(a)."""
        s, x = 0, a
        for _ in range(self.m):
            s = self.add(s, x)
            x = self.pow(x, self.p)
        return s

    # subfields and embeddings
    def embedding_from(self, small: "FiniteField") -> list[int]:
        """Images of 1, x, ..., x^{m'-1} of the smaller field under a fixed embedding.

        The root of the smaller modulus with the smallest encoding is used.
        """
        if small.p != self.p or self.m % small.m:
            raise DegreeOutOfRange("no embedding between these fields", small=repr(small), big=repr(self))
        return list(_embedding(self.p, small.m, self.m, config.current().table_cap))

    def embed(self, small: "FiniteField", a: int) -> int:
        if small.m == 1:
            return a
        images = self.embedding_from(small)
        out = 0
        for c, img in zip(small.digits(a), images):
            if c:
                out = self.add(out, self.smul(c, img))
        return out


@lru_cache(maxsize=None)
def _embedding(p: int, m_small: int, m_big: int, table_cap: int) -> tuple[int, ...]:
    big = field_create(p, m_big)
    small = field_create(p, m_small)
    if m_small == 1:
        return (1,)
    # F_p-basis of the subfield {y : y^(p^m_small) = y}
    qs = small.q
    n = m_big
    imgs = [big.pow(p ** i, qs) for i in range(n)]   # images of basis monomials x^i
    # matrix rows: coordinates of (Frob - I)(x^i)
    rows = []
    for i in range(n):
        d = big.digits(big.sub(imgs[i], p ** i))
        rows.append(d)
    kernel = _nullspace_mod_p(rows, p)   # combinations of monomials fixed by Frob
    assert len(kernel) == m_small
    basis_elems = [big.from_digits(v) for v in kernel]
    f = small.modulus
    best = None
    for combo in range(qs):
        y, c = 0, combo
        for be in basis_elems:
            k = c % p
            c //= p
            if k:
                y = big.add(y, big.smul(k, be))
        val, pw = 0, 1
        for coef in f:
            if coef:
                val = big.add(val, big.smul(coef, pw))
            pw = big.mul(pw, y)
        if val == 0 and (best is None or y < best):
            best = y
    assert best is not None
    out, pw = [], 1
    for _ in range(m_small):
        out.append(pw)
        pw = big.mul(pw, best)
    return tuple(out)


def _nullspace_mod_p(rows: list[list[int]], p: int) -> list[list[int]]:
    """Left null space: vectors v with sum v_i rows[i] = 0 (mod p)."""
    n = len(rows)
    m = len(rows[0])
    aug = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(rows)]
    r = 0
    for c in range(m):
        piv = next((i for i in range(r, n) if aug[i][c] % p), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = pow(aug[r][c], -1, p)
        aug[r] = [v * inv % p for v in aug[r]]
        for i in range(n):
            if i != r and aug[i][c] % p:
                f = aug[i][c]
                aug[i] = [(a - f * b) % p for a, b in zip(aug[i], aug[r])]
        r += 1
    return [row[m:] for row in aug[r:]]


def field_create(p: int, m: int) -> FiniteField:
    """Return the field with p^m elements (cached, so identical inputs share one object)."""
    if not isinstance(p, int) or not isprime(p):
        raise NotPrime("characteristic must be prime", p=p)
    cfg = config.current()
    if not isinstance(m, int) or m < 1 or m > cfg.bound_ext:
        raise DegreeOutOfRange("extension degree out of range", m=m, cap=cfg.bound_ext)
    return _field(p, m, cfg.table_cap)


@lru_cache(maxsize=None)
def _field(p: int, m: int, table_cap: int) -> FiniteField:
    return FiniteField(p, m, table_cap)


def parse_element(F: FiniteField, text) -> int:
    """Read an element given as an int or a comma-separated coefficient list (low first)."""
    if isinstance(text, int):
        v = text
    else:
        s = str(text).strip()
        if "," in s or s.startswith("["):
            parts = [t for t in s.strip("[]").split(",") if t.strip()]
            coeffs = [int(t) for t in parts]
            if len(coeffs) > F.m:
                raise DegreeOutOfRange("too many coefficients", got=len(coeffs), m=F.m)
            return F.from_digits(coeffs + [0] * (F.m - len(coeffs)))
        v = int(s)
    if F.m == 1:
        return v % F.p
    if not 0 <= v < F.q:
        raise DegreeOutOfRange("element encoding out of range", value=v, q=F.q)
    return v
