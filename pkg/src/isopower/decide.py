"""Deciding whether HOM_R(-, E) is an equivalence, and what its image is.

The endomorphism conductor is found one prime at a time: l^j divides f0/fE
exactly when Frobenius acts as a scalar on E[l^j].  The verdict then follows
the trichotomy (ordinary with Z[pi] = End; supersingular over F_p with
Z[pi] = End; supersingular over F_{p^2} with End of rank 4).
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

from sympy import factorint

from . import config
from .arith.curve import EllipticCurve, curve_create, group_structure
from .arith.field import field_create
from .arith.torsion import torsion_basis
from .errors import BoundExceeded, SingularCurve, UnsupportedCase
from .modules import enumerate_modules
from .orders import QuadOrder, _fundamental_split, order_from_disc

RANK4 = "rank4"

CASE_ORDINARY = "ordinary-Zpi=R"
CASE_SS_FP = "ss-Fp-Zpi=R"
CASE_RANK4 = "ss-Fp2-rank4"
CASE_NONE = "none"


def is_supersingular(E: EllipticCurve) -> bool:
    return E.trace % E.F.p == 0


def frobenius_conductor(E: EllipticCurve) -> tuple[int, int]:
    """(f0, d_K) with t^2 - 4q = f0^2 d_K; (0, 0) when Frobenius is an integer."""
    D0 = E.trace ** 2 - 4 * E.q
    if D0 == 0:
        return 0, 0
    dK, f0 = _fundamental_split(D0)
    return f0, dK


def _is_scalar(F, mod: int) -> bool:
    return F[0][1] % mod == 0 and F[1][0] % mod == 0 and (F[0][0] - F[1][1]) % mod == 0


def scalar_level(E: EllipticCurve, ell: int, cap: int) -> int:
    """Largest j <= cap with Frobenius acting as an integer on E[l^j]."""
    j = 0
    while j < cap:
        T = torsion_basis(E, ell, j + 1)
        if not _is_scalar(T.frob, ell ** (j + 1)):
            break
        j += 1
    return j


def end_conductor(E: EllipticCurve):
    """Conductor of End E inside its CM field, or RANK4 when Frobenius is an integer."""
    return _end_conductor(E, config.current().bound_ext, config.current().bound_group)


@lru_cache(maxsize=4096)
def _end_conductor(E: EllipticCurve, bound_ext: int, bound_group: int):
    f0, dK = frobenius_conductor(E)
    if f0 == 0:
        return RANK4
    p = E.F.p
    fE = f0
    for ell, v in factorint(f0).items():
        if ell == p:
            # End E is maximal at p (ordinary curves have p prime to f0 anyway)
            fE //= ell ** v
            continue
        fE //= ell ** scalar_level(E, ell, v)
    return fE


def end_order(E: EllipticCurve) -> QuadOrder:
    fE = end_conductor(E)
    if fE == RANK4:
        raise UnsupportedCase("endomorphism ring has rank 4", q=E.q, t=E.trace)
    _, dK = frobenius_conductor(E)
    return order_from_disc(dK * fE * fE)


# ---------------------------------------------------------------------------
# the verdict

@dataclass(frozen=True)
class EquivalenceVerdict:
    curve: dict
    q: int
    t: int
    ss: str
    f0: int
    fE: object                # int, or RANK4
    case: str
    verdict: str
    evidence: tuple = field(default=())

    def to_json(self) -> dict:
        out = {"curve": self.curve, "q": self.q, "t": self.t, "ss": self.ss, "f0": self.f0}
        if self.fE == RANK4:
            out["rank4"] = True
        else:
            out["fE"] = self.fE
        out.update({"case": self.case, "verdict": self.verdict, "evidence": list(self.evidence)})
        return out


def _witness(E: EllipticCurve, ell: int) -> Optional[list]:
    """A Frobenius-stable line in E[l] that is not a kernel subgroup."""
    from .kernels import commutant, frobenius_stable_subgroups, generators_of, is_kernel_subgroup_for

    C = commutant(E, ell, 1)
    for G in sorted(frobenius_stable_subgroups(C.frob, ell, 1, 1), key=lambda H: (len(H), sorted(H))):
        if not is_kernel_subgroup_for(C, G):
            return [list(g) for g in generators_of(G, ell, 2)]
    return None


def _prime_evidence(E: EllipticCurve, ell: int, v: int, fE: int) -> dict:
    from .kernels import commutant, galois_image_test

    level = scalar_level(E, ell, v)
    C = commutant(E, ell, 1)
    gi = galois_image_test([C.frob], C.basis, ell)
    rec = {"l": ell, "v_f0": v, "scalar_level": level,
           "Zpi_equals_End_at_l": level == 0, "galois_image": gi.to_json()}
    if gi.surjective != (level == 0):
        raise AssertionError("scalar test and Galois image test disagree")
    if level > 0:
        rec["witness"] = _witness(E, ell)
    return rec


def decide_equivalence(E: EllipticCurve) -> EquivalenceVerdict:
    from .functor import curve_json

    p, a = E.F.p, E.F.m
    q, t = E.q, E.trace
    ss = is_supersingular(E)
    f0, dK = frobenius_conductor(E)
    fE = end_conductor(E)
    evidence = []
    if f0:
        for ell, v in sorted(factorint(f0).items()):
            if ell == p:
                evidence.append({"l": p, "note": "p-power part: End E is maximal at p"})
                continue
            evidence.append(_prime_evidence(E, ell, v, fE))
    if not ss:
        case = CASE_ORDINARY if fE == f0 else CASE_NONE
    elif a == 1:
        case = CASE_SS_FP if fE == f0 else CASE_NONE
    elif a == 2:
        case = CASE_RANK4 if fE == RANK4 else CASE_NONE
        if case == CASE_NONE:
            evidence.append({"l": p, "note": "p-power obstruction: End E has rank 2 over F_{p^2}"})
    else:
        case = CASE_NONE
        evidence.append({"l": p, "note": "p-power obstruction over F_{p^a} with a >= 3",
                         "unsupported": UnsupportedCase.kind})
    verdict = "YES" if case != CASE_NONE else "NO"
    return EquivalenceVerdict(curve_json(E), q, t, "supersingular" if ss else "ordinary",
                              f0, fE, case, verdict, tuple(evidence))


# ---------------------------------------------------------------------------
# the image of the functor

def class_count(R: QuadOrder, n: int) -> int:
    return len(enumerate_modules(R, n))


def describe_image(E: EllipticCurve, max_rank: Optional[int] = None) -> dict:
    v = decide_equivalence(E)
    if v.fE == RANK4:
        raise UnsupportedCase("image description needs a rank-2 endomorphism ring", q=E.q, t=E.trace)
    max_rank = max_rank or config.current().max_rank
    f0, dK = frobenius_conductor(E)
    RE = order_from_disc(dK * v.fE ** 2)
    Rpi = order_from_disc(dK * f0 ** 2)
    ranks = []
    for n in range(1, max_rank + 1):
        image = class_count(RE, n)
        rec = {"n": n, "image": image}
        if v.verdict == "YES":
            rec["total"] = image
        elif n == 1:
            rec["total"] = class_count(Rpi, 1)     # curves isogenous to E
        ranks.append(rec)
    return {"curve": v.curve, "verdict": v.verdict, "f0": f0, "fE": v.fE, "ranks": ranks}


# ---------------------------------------------------------------------------
# maximal and minimal curves over F_{p^2}

def _candidate_curves(p: int, sample: Optional[int], seed: int):
    F = field_create(p, 2)
    q = F.q
    if p == 2:
        coeffs = itertools.product(range(q), repeat=5)
    elif p == 3:
        coeffs = ((0, a2, 0, a4, a6) for a2, a4, a6 in itertools.product(range(q), repeat=3))
    else:
        coeffs = ((0, 0, 0, a4, a6) for a4, a6 in itertools.product(range(q), repeat=2))
    coeffs = list(coeffs)
    if sample is not None and sample < len(coeffs):
        coeffs = sorted(random.Random(seed).sample(coeffs, sample))
    for c in coeffs:
        try:
            yield curve_create(F, *c)
        except SingularCurve:
            continue


def maximal_scan(p: int, minimal: bool = False, g_max: int = 3, sample: Optional[int] = None,
                 ells=(2, 3, 5)) -> dict:
    cfg = config.current()
    if p * p > cfg.bound_q:
        raise BoundExceeded("field too large to scan", q=p * p, cap=cfg.bound_q)
    q = p * p
    sign = p if minimal else -p
    target = (q + 1 - 2 * sign)
    want_t = 2 * sign
    side = p - 1 if minimal else p + 1
    scanned = 0
    equivalent = True
    found = []
    for E in _candidate_curves(p, sample, cfg.seed):
        scanned += 1
        N = E.n_points
        is_extreme = N == target
        if is_extreme != (E.trace == want_t):
            equivalent = False
        if not is_extreme:
            continue
        d1, d2, _ = group_structure(E)
        frob_ok = {}
        for ell in ells:
            if ell == p:
                continue
            T = torsion_basis(E, ell, 1)
            F = T.frob
            frob_ok[ell] = (_is_scalar(F, ell) and (F[0][0] - sign) % ell == 0)
        rec = {"a": [E.F.digits(v) for v in E.a], "j": E.F.digits(E.j_invariant), "N": N,
               "t": E.trace, "structure": [d1, d2],
               "frobenius_scalar": {str(k): v for k, v in sorted(frob_ok.items())}}
        rec["ok"] = (E.trace == want_t and (d1, d2) == (side, side) and all(frob_ok.values()))
        if not rec["ok"]:
            equivalent = False
        found.append(rec)
    found.sort(key=lambda r: (r["j"], r["a"]))
    classes = {}
    for rec in found:
        key = tuple(rec["j"])
        classes.setdefault(key, []).append(rec)
    class_reports = [{"j": list(j), "N": recs[0]["N"], "t": recs[0]["t"],
                      "structure": recs[0]["structure"], "models": len(recs),
                      "ok": all(r["ok"] for r in recs)} for j, recs in sorted(classes.items())]
    products = []
    reps = [recs[0] for _, recs in sorted(classes.items())]
    # products of up to g_max curves drawn from the models (with repetition)
    pool = found[:3] if len(found) >= 3 else found
    for g in range(1, g_max + 1):
        for combo in itertools.combinations_with_replacement(range(len(pool)), g):
            count = 1
            invariants = []
            for i in combo:
                count *= pool[i]["N"]
                invariants.extend(pool[i]["structure"])
            products.append({"g": g, "factors": list(combo), "count": count,
                             "structure": sorted(invariants),
                             "ok": count == side ** (2 * g) and all(x == side for x in invariants)})
    ok = equivalent and all(r["ok"] for r in found) and all(pr["ok"] for pr in products)
    return {"p": p, "q": q, "mode": "minimal" if minimal else "maximal", "scanned": scanned,
            "target": target, "curves": found, "classes": class_reports, "products": products,
            "representatives": [r["a"] for r in reps], "ok": ok}
