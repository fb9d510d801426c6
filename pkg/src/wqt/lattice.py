"""Bridge from Laurent polynomials in x^{Q(r)} to ordinary multivariate
polynomials, so that gcd and exact division can be delegated to sympy.

The exponents occurring in a finite set of polynomials span a finitely
generated subgroup of Q(r).  Clearing a common polynomial denominator and a
common integer denominator embeds them in Z^w; the ring map x^e -> t^vec is
injective and flat, so gcds and quotients computed there are the true ones.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Dict, List, Optional, Tuple

from .exponent import ExponentFn, _c, pdivmod, pgcd, pmul

Poly = Dict[ExponentFn, object]


class _Embedding:
    def __init__(self, exps: List[ExponentFn]):
        den: tuple = (1,)
        for e in exps:
            if e.den != (1,) and e.den != den:
                g = pgcd(den, e.den)
                den = pdivmod(pmul(den, e.den), g)[0]
        self.den = den
        vecs = []
        scale = 1
        for e in exps:
            p = e.num if e.den == den else pmul(e.num, pdivmod(den, e.den)[0])
            vecs.append(p)
            for v in p:
                d = Fraction(v).denominator
                scale = scale * d // gcd(scale, d)
        self.scale = scale
        self.width = max([len(v) for v in vecs] + [1])
        self._vec = {}
        for e, p in zip(exps, vecs):
            self._vec[e] = tuple(int(Fraction(p[k]) * scale) if k < len(p) else 0 for k in range(self.width))
        from sympy.polys.domains import QQ
        from sympy.polys.rings import ring
        self.QQ = QQ
        self.ring, *_ = ring(",".join(f"t{k}" for k in range(self.width)), QQ)

    def to_poly(self, P: Poly):
        vs = [self._vec[e] for e in P]
        lo = tuple(min(v[k] for v in vs) for k in range(self.width))
        terms = {}
        for v, c in zip(vs, P.values()):
            c = Fraction(c)
            terms[tuple(v[k] - lo[k] for k in range(self.width))] = self.QQ(c.numerator, c.denominator)
        return self.ring.from_dict(terms), lo

    def from_poly(self, f, shift) -> Poly:
        out: Poly = {}
        for mon, c in f.terms():
            vec = [Fraction(mon[k] + shift[k], self.scale) for k in range(self.width)]
            out[ExponentFn(vec, self.den)] = _c(Fraction(int(c.numerator), int(c.denominator)))
        return out


def gcd_reduce(num: Poly, den: Poly) -> Tuple[Poly, Poly]:
    """Cancel the gcd of numerator and denominator."""
    emb = _Embedding(list(num) + list(den))
    fN, loN = emb.to_poly(num)
    fD, loD = emb.to_poly(den)
    _, cN, cD = fN.cofactors(fD)
    shift = tuple(a - b for a, b in zip(loN, loD))
    return emb.from_poly(cN, shift), emb.from_poly(cD, (0,) * emb.width)


def exact_quotient(P: Poly, D: Poly) -> Optional[Poly]:
    """P/D in the Laurent ring when exact, else None."""
    emb = _Embedding(list(P) + list(D))
    fP, loP = emb.to_poly(P)
    fD, loD = emb.to_poly(D)
    q, rem = fP.div(fD)
    if rem:
        return None
    shift = tuple(a - b for a, b in zip(loP, loD))
    return emb.from_poly(q, shift)
