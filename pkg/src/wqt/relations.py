"""Operator-level bookkeeping for products of W-currents.

A product f(z2/z1) A(z1) B(z2) is a sum over monomial pairs of a rational
coefficient times :M1(z1) M2(z2):.  Its two-region difference is supported on
the poles of the coefficients.  At a pole zeta = 1/c the pair pins z1 = c z2
and turns into a single pattern.  With y = c zeta,

    alpha/(1-y)^2 + beta/(1-y)  ->  alpha Q delta1(y) + (beta Q + alpha sum_f D_f Q) delta(y)

where delta1(y) = sum (m+1) y^m and D_f is z d/dz applied to the factor f of
Q that came from z1.  D_f Q is represented by its boson-field coefficients so
that sums of derivative terms can be compared exactly.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Tuple

from .exponent import E, ExponentFn
from .model import Current, Monomial, current_T, delta_value, pair_rational, params, reduce_pattern
from .scalar import ZERO, Scalar, c_const, xpow
from .series import FactoredRational, RepeatedPoleError, SeriesError, pole_parts, principal_mismatch

Factor = Tuple[int, ExponentFn]
Key = Tuple[ExponentFn, Monomial]


@dataclass
class Term:
    d2: Scalar = ZERO      # coefficient of Q delta1
    d1: Scalar = ZERO      # coefficient of Q delta
    div: Scalar = ZERO     # divergent part of a coincident product (must vanish)
    deriv: Dict[Factor, Scalar] = field(default_factory=dict)

    def add_deriv(self, f: Factor, v: Scalar):
        self.deriv[f] = self.deriv[f] + v if f in self.deriv else v

    def __sub__(self, other: "Term") -> "Term":
        d = dict(self.deriv)
        for f, v in other.deriv.items():
            d[f] = d[f] - v if f in d else -v
        return Term(self.d2 - other.d2, self.d1 - other.d1, self.div - other.div, d)

    def scaled(self, s: Scalar) -> "Term":
        return Term(self.d2 * s, self.d1 * s, self.div * s, {f: v * s for f, v in self.deriv.items()})


class OpSum:
    """Collection of pinned terms keyed by (pole exponent, pattern)."""

    def __init__(self):
        self.terms: Dict[Key, Term] = {}

    def at(self, e, Q: Monomial) -> Term:
        k = (E(e), Q)
        t = self.terms.get(k)
        if t is None:
            t = self.terms[k] = Term()
        return t

    def keys(self):
        return set(self.terms)

    def get(self, k: Key) -> Term:
        return self.terms.get(k, Term())

    def poles(self) -> List[ExponentFn]:
        return sorted({k[0] for k, t in self.terms.items() if not t.d1.is_zero()}, key=lambda e: e.okey())


def pole_exponent(c: Scalar) -> ExponentFn:
    mm = c.as_monomial()
    if mm is None or mm[0] != 1:
        raise SeriesError(f"pole at 1/({c.pretty()}) is not a power of x")
    return mm[1]


def _check_reduction(case, M: Monomial, Q: Monomial, has_deriv: bool):
    if has_deriv and len(Q) != len(M):
        raise SeriesError("derivative term on a pattern that reduces (Case 1 truncation)")


@dataclass
class PairData:
    M1: Monomial
    M2: Monomial
    weight: Scalar
    rational: FactoredRational
    reverse: FactoredRational


def lhs_opsum(case, i: int, j: int, Ti: Current, Tj: Current) -> Tuple[OpSum, List[PairData]]:
    """Two-region difference of f_{i,j}(z2/z1) T_i(z1) T_j(z2)."""
    out = OpSum()
    pairs = []
    for M1, w1 in Ti:
        for M2, w2 in Tj:
            w = w1 * w2
            R = pair_rational(case, M1, M2, i, j)
            Rp = pair_rational(case, M2, M1, j, i)
            pairs.append(PairData(M1, M2, w, R, Rp))
            for c, n in R.fac.items():
                if n >= 0:
                    continue
                a, b = pole_parts(R, c)
                e = pole_exponent(c)
                M = M1.shifted(e)
                raw = M * M2
                Q = reduce_pattern(case, raw)
                _check_reduction(case, raw, Q, not a.is_zero())
                t = out.at(e, Q)
                t.d2 = t.d2 + w * a
                t.d1 = t.d1 + w * b
                if not a.is_zero():
                    for f in M:
                        t.add_deriv(f, w * a)
    return out, pairs


def pinned_product(case, A: Current, B: Current, ia: int, ib: int, s1, s2, scale: Scalar,
                   out: OpSum, e):
    """Add scale * f_{ia,ib}(z2'/z1') A(z1') B(z2') at z1' = x^s1 z2, z2' = x^s2 z2
    to out[e, .], regularising simple poles of individual pairs."""
    s1, s2 = E(s1), E(s2)
    z0 = xpow(s2 - s1)
    c0 = xpow(s1 - s2)
    for M1, w1 in A:
        for M2, w2 in B:
            w = w1 * w2 * scale
            R = pair_rational(case, M1, M2, ia, ib)
            n = R.fac.get(c0, 0)
            M = M1.shifted(s1)
            raw = M * M2.shifted(s2)
            Q = reduce_pattern(case, raw)
            t = out.at(e, Q)
            if n >= 0:
                t.d1 = t.d1 + w * R.value_at(z0)
                continue
            if n < -1:
                raise RepeatedPoleError("coincident product with a repeated pole")
            rho, fin = pole_parts(R * FactoredRational.factor(c0, -1), c0)
            _check_reduction(case, raw, Q, True)
            t.d1 = t.d1 + w * fin
            t.div = t.div + w * rho
            for f in M:
                t.add_deriv(f, w * rho)


def delta1_product(k: int) -> Scalar:
    out = c_const()
    for l in range(1, k):
        out = out * delta_value(1, xpow(2 * l + 1))
    return out


def rhs_opsum(case, i: int, j: int, construction: str = "ordered") -> OpSum:
    out = OpSum()
    for k in range(1, i + 1):
        pref = delta1_product(k)
        A = current_T(case, i - k, construction)
        B = current_T(case, j + k, construction)
        if not len(A) or not len(B):
            continue
        pinned_product(case, A, B, i - k, j + k, i - j - k, -k, pref, out, i - j - 2 * k)
        pinned_product(case, A, B, i - k, j + k, j - i + k, k, -pref, out, j - i + 2 * k)
    return out


def field_coefficients(case, deriv: Dict[Factor, Scalar], M: int) -> Optional[Tuple[int, int]]:
    """First (m, j) where the boson field sum_f v_f lambda_{a_f,j}(m) x^{-k_f m}
    is nonzero, or None if it vanishes for 0 < |m| <= M."""
    P = params(case)
    live = {f: v for f, v in deriv.items() if not v.is_zero()}
    if not live:
        return None
    for m in [s * n for n in range(1, M + 1) for s in (1, -1)]:
        for j in (1, 2):
            acc = ZERO
            for (a, k), v in live.items():
                acc = acc + v * P.lam(a, j, m) * xpow(-k * m)
            if not acc.is_zero():
                return m, j
    return None


@dataclass
class KeyResult:
    pole: ExponentFn
    pattern: Monomial
    lhs: Term
    rhs: Term
    problem: Optional[str]


def compare(case, lhs: OpSum, rhs: OpSum, modes: int) -> List[KeyResult]:
    out = []
    for key in sorted(lhs.keys() | rhs.keys(), key=lambda k: (k[0].okey(), k[1].sort_key())):
        L, Rr = lhs.get(key), rhs.get(key)
        d = L - Rr
        problem = None
        if not d.d2.is_zero():
            problem = f"double-pole coefficient {d.d2.pretty()} does not cancel"
        elif not Rr.div.is_zero():
            problem = f"coincident product diverges with coefficient {Rr.div.pretty()}"
        elif not d.d1.is_zero():
            problem = f"delta coefficient differs by {d.d1.pretty()}"
        else:
            bad = field_coefficients(case, d.deriv, modes)
            if bad is not None:
                problem = f"derivative term survives at mode m={bad[0]}, boson {bad[1]}"
        out.append(KeyResult(key[0], key[1], L, Rr, problem))
    return out


def brute_force_pairs(pairs: Iterable[PairData], N: int) -> Optional[Tuple[PairData, int]]:
    """Cross-check each pair's principal parts against the two expansions."""
    for p in pairs:
        parts = {c: pole_parts(p.rational, c) for c, n in p.rational.fac.items() if n < 0}
        m = principal_mismatch(p.rational, parts, N, other=p.reverse)
        if m is not None:
            return p, m
    return None


def fusion_residues(case, A: Current, B: Current, i: int, j: int, c) -> Dict[Monomial, Scalar]:
    """lim (1 - c zeta) f_{i,j}(zeta) A(z1) B(z2) as pattern -> weight, relative to z2."""
    c = c if isinstance(c, Scalar) else xpow(c)
    e = pole_exponent(c)
    acc: Dict[Monomial, Scalar] = {}
    for M1, w1 in A:
        for M2, w2 in B:
            R = pair_rational(case, M1, M2, i, j)
            n = R.fac.get(c, 0)
            if n >= 0:
                continue
            if n < -1:
                raise RepeatedPoleError(f"repeated pole in the fusion of {M1} and {M2}")
            _, b = pole_parts(R, c)
            Q = reduce_pattern(case, M1.shifted(e) * M2)
            acc[Q] = acc[Q] + w1 * w2 * b if Q in acc else w1 * w2 * b
    return {Q: v for Q, v in acc.items() if not v.is_zero()}
