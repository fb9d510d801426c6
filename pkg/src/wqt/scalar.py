"""Exact coefficient field: fractions of finite sums of c * x^e with e in Q(r).

A Scalar is stored as an expanded Laurent polynomial times a product of
factored atoms with signed multiplicities.  Atoms are binomials 1 - x^e
(e > 0) or arbitrary normalised polynomials.  Keeping the q-integer style
binomials factored makes products, quotients and common denominators cheap,
and the zero test is exact: a Scalar is zero iff its polynomial part is empty.
A fully reduced canonical form is computed lazily for hashing and text.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Optional, Tuple

from .exponent import ExponentFn, E, ZERO_E, _c

Poly = Dict[ExponentFn, object]

# term-level helpers on dict polynomials {exponent: coefficient}


def _pmul(a: Poly, b: Poly) -> Poly:
    if len(a) < len(b):
        a, b = b, a
    if len(b) == 1:
        (f, d), = b.items()
        if f.num == ():
            if d == 1:
                return dict(a)
            return {e: _c(c * d) for e, c in a.items()}
        return {e + f: _c(c * d) for e, c in a.items()}
    out: Poly = {}
    get = out.get
    for f, d in b.items():
        for e, c in a.items():
            k = e + f
            out[k] = get(k, 0) + c * d
    return {k: _c(v) for k, v in out.items() if v}


def _padd(a: Poly, b: Poly, sign: int = 1) -> Poly:
    out = dict(a)
    for e, c in b.items():
        v = out.get(e, 0) + (c if sign > 0 else -c)
        if v:
            out[e] = _c(v)
        else:
            out.pop(e, None)
    return out


def _ppow(a: Poly, n: int) -> Poly:
    out: Poly = {ZERO_E: 1}
    base = a
    while n:
        if n & 1:
            out = _pmul(out, base)
        n >>= 1
        if n:
            base = _pmul(base, base)
    return out


def _pmono_inv(a: Poly) -> Poly:
    (e, c), = a.items()
    return {-e: _c(Fraction(1) / Fraction(c))}


def _floor_frac(v) -> int:
    v = Fraction(v)
    return v.numerator // v.denominator


def _pdiv_binomial(P: Poly, e: ExponentFn) -> Optional[Poly]:
    """P / (1 - x^e) if exact, grouping exponents by cosets of Z*e."""
    key = e.okey()
    j = next(i for i, v in enumerate(key) if v)
    ej = Fraction(key[j])
    cosets: Dict[ExponentFn, Dict[int, object]] = {}
    for f, c in P.items():
        k = _floor_frac(Fraction(f.okey()[j]) / ej)
        rep = f - e * k if k else f
        cosets.setdefault(rep, {})[k] = c
    Q: Poly = {}
    for rep, line in cosets.items():
        if sum(line.values()) != 0:
            return None
        lo, hi = min(line), max(line)
        acc = 0
        for k in range(lo, hi):
            acc += line.get(k, 0)
            if acc:
                Q[rep + e * k if k else rep] = _c(acc)
    return Q


def _pdiv_exact(P: Poly, D: Poly) -> Optional[Poly]:
    """Quotient P/D if D divides P exactly in the group ring, else None."""
    if not P:
        return {}
    if len(D) == 1:
        return _pmul(P, _pmono_inv(D))
    if len(D) == 2:
        (e1, c1), (e2, c2) = D.items()
        if c1 == -c2:
            # D = c1 x^e1 (1 - x^(e2-e1))
            q = _pdiv_binomial(P, e2 - e1)
            return None if q is None else _pmul(q, _pmono_inv({e1: c1}))
    from .lattice import exact_quotient
    return exact_quotient(P, D)


# atoms ------------------------------------------------------------------------


class Atom:
    """1 - x^e for e > 0 (binomial) or a normalised polynomial."""

    __slots__ = ("key", "poly", "binomial")

    def __init__(self, key, poly: Poly, binomial: Optional[ExponentFn]):
        self.key = key
        self.poly = poly
        self.binomial = binomial

    def __hash__(self):
        return hash(self.key)

    def __eq__(self, other):
        return isinstance(other, Atom) and self.key == other.key


_ATOMS: Dict[object, Atom] = {}


def _binomial_atom(e: ExponentFn) -> Atom:
    key = ("b", e)
    a = _ATOMS.get(key)
    if a is None:
        a = Atom(key, {ZERO_E: 1, e: -1}, e)
        _ATOMS[key] = a
    return a


def _poly_atom(P: Poly) -> Tuple[Atom, Poly]:
    """Split P = unit * atom; returns (atom, unit monomial)."""
    top = max(P, key=ExponentFn.okey)
    c = Fraction(P[top])
    norm = {e - top: _c(v / c) for e, v in P.items()}
    if len(norm) == 2:
        other = next(e for e in norm if e != ZERO_E)
        if norm[other] == -1:
            # 1 - x^other with other < 0: equals -x^other (1 - x^-other)
            return _binomial_atom(-other), {top + other: _c(-c)}
    key = ("p", tuple(sorted(((e.num, e.den, v) for e, v in norm.items()))))
    a = _ATOMS.get(key)
    if a is None:
        a = Atom(key, norm, None)
        _ATOMS[key] = a
    return a, {top: _c(c)}


def _atom_div(P: Poly, atom: Atom) -> Optional[Poly]:
    if len(P) < 2:
        return None
    if atom.binomial is not None:
        return _pdiv_binomial(P, atom.binomial)
    return _pdiv_exact(P, atom.poly)


# the Scalar type ----------------------------------------------------------------


class Scalar:
    __slots__ = ("_p", "_a", "_canon", "_h")

    def __init__(self, value=0):
        if isinstance(value, Scalar):
            self._p, self._a = value._p, value._a
        else:
            v = _c(value)
            self._p = {ZERO_E: v} if v else {}
            self._a = {}
        self._canon = None
        self._h = None

    @classmethod
    def _make(cls, p: Poly, a: Dict[Atom, int]) -> "Scalar":
        s = object.__new__(cls)
        if not p:
            a = {}
        s._p = p
        s._a = a
        s._canon = None
        s._h = None
        return s

    @classmethod
    def _reduced(cls, p: Poly, a: Dict[Atom, int], tests: Iterable[Atom]) -> "Scalar":
        if len(p) > 1:
            for atom in tests:
                n = a.get(atom, 0)
                while n < 0:
                    q = _atom_div(p, atom)
                    if q is None:
                        break
                    p = q
                    n += 1
                if n:
                    a[atom] = n
                else:
                    a.pop(atom, None)
                if len(p) < 2:
                    break
        return cls._make(p, a)

    # constructors ------------------------------------------------------------
    @classmethod
    def monomial(cls, e, c=1) -> "Scalar":
        c = _c(c)
        if not c:
            return ZERO
        return cls._make({E(e): c}, {})

    @classmethod
    def from_terms(cls, terms: Dict) -> "Scalar":
        p = {}
        for e, c in terms.items():
            c = _c(c)
            if c:
                e = E(e)
                p[e] = _c(p.get(e, 0) + c)
                if not p[e]:
                    del p[e]
        return cls._make(p, {})

    @classmethod
    def one_minus_x(cls, e) -> "Scalar":
        """1 - x^e in factored form."""
        e = E(e)
        s = e.sign()
        if s == 0:
            return ZERO
        if s > 0:
            return cls._make({ZERO_E: 1}, {_binomial_atom(e): 1})
        return cls._make({e: -1}, {_binomial_atom(-e): 1})

    # queries ------------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self._p

    def __bool__(self):
        return bool(self._p)

    def as_monomial(self) -> Optional[Tuple[Fraction, ExponentFn]]:
        """(c, e) if the value equals c*x^e, else None."""
        if not self._p:
            return None
        if not self._a and len(self._p) == 1:
            (e, c), = self._p.items()
            return Fraction(c), e
        n, d = self.canonical()
        if len(n) == 1 and len(d) == 1:
            (e, c), = n.items()
            (f, dc), = d.items()
            return Fraction(c) / Fraction(dc), e - f
        return None

    def is_one(self) -> bool:
        m = self.as_monomial()
        return m is not None and m[0] == 1 and m[1] == ZERO_E

    # arithmetic --------------------------------------------------------------
    def __add__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return _add(self, o, 1)

    __radd__ = __add__

    def __sub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return _add(self, o, -1)

    def __rsub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return _add(o, self, -1)

    def __neg__(self):
        return Scalar._make({e: -c for e, c in self._p.items()}, self._a)

    def __mul__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        if not self._p or not o._p:
            return ZERO
        p = _pmul(self._p, o._p)
        a = dict(self._a)
        for atom, n in o._a.items():
            v = a.get(atom, 0) + n
            if v:
                a[atom] = v
            else:
                a.pop(atom, None)
        tests = set()
        if len(o._p) > 1:
            tests.update(t for t, n in self._a.items() if n < 0)
        if len(self._p) > 1:
            tests.update(t for t, n in o._a.items() if n < 0)
        return Scalar._reduced(p, a, tests)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        if not o._p:
            raise ZeroDivisionError("Scalar division by zero")
        if not self._p:
            return ZERO
        a = dict(self._a)
        for atom, n in o._a.items():
            v = a.get(atom, 0) - n
            if v:
                a[atom] = v
            else:
                a.pop(atom, None)
        tests = {t for t, n in o._a.items() if n > 0}
        if len(o._p) == 1:
            p = _pmul(self._p, _pmono_inv(o._p))
        else:
            q = _pdiv_exact(self._p, o._p) if len(self._p) >= len(o._p) else None
            if q is not None:
                p = q
            else:
                atom, unit = _poly_atom(o._p)
                p = _pmul(self._p, _pmono_inv(unit))
                v = a.get(atom, 0) - 1
                if v:
                    a[atom] = v
                else:
                    a.pop(atom, None)
                tests.add(atom)
        return Scalar._reduced(p, a, tests)

    def __rtruediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return ONE / (self ** (-n))
        if n == 0:
            return ONE
        if not self._p:
            return ZERO
        p = _ppow(self._p, n)
        a = {t: k * n for t, k in self._a.items()}
        tests = [t for t, k in a.items() if k < 0] if len(self._p) > 1 else []
        return Scalar._reduced(p, a, tests)

    def __eq__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        if self._a == o._a:
            return self._p == o._p
        return _add(self, o, -1).is_zero()

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self):
        if self._h is None:
            self._h = hash(self.to_text())
        return self._h

    # monomial substitution x^e -> x^{k e} ---------------------------------------
    def scale_exponents(self, k) -> "Scalar":
        """Image under x -> x^k for a positive rational k (ExponentFn allowed)."""
        k = E(k)
        if k.sign() <= 0:
            raise ValueError("exponent scaling must be positive")
        p = {e * k: c for e, c in self._p.items()}
        out = Scalar._make(p, {})
        for atom, n in self._a.items():
            poly = {e * k: c for e, c in atom.poly.items()}
            out = out * (Scalar._make(poly, {}) ** n if atom.binomial is None
                         else Scalar.one_minus_x(atom.binomial * k) ** n)
        return out

    # expanded and canonical forms ------------------------------------------
    def expanded(self) -> Tuple[Poly, Poly]:
        """(numerator, denominator) polynomials with atoms multiplied out."""
        num = dict(self._p)
        den: Poly = {ZERO_E: 1}
        for atom, n in self._a.items():
            if n > 0:
                num = _pmul(num, _ppow(atom.poly, n))
            else:
                den = _pmul(den, _ppow(atom.poly, -n))
        return num, den

    def canonical(self) -> Tuple[Poly, Poly]:
        """Reduced (N, D) with D's order-maximal term equal to 1*x^0."""
        if self._canon is None:
            self._canon = _canonical(*self.expanded())
        return self._canon

    def to_text(self) -> str:
        if not self._p:
            return "0"
        n, d = self.canonical()
        if len(d) == 1:
            return _terms_text(n)
        return "(" + _terms_text(n) + ")/(" + _terms_text(d) + ")"

    @classmethod
    def from_text(cls, s: str) -> "Scalar":
        s = s.strip()
        if s == "0":
            return ZERO
        if s.startswith("(") and ")/(" in s:
            a, b = s[1:-1].split(")/(")
            return cls.from_terms(_parse_terms(a)) / cls.from_terms(_parse_terms(b))
        return cls.from_terms(_parse_terms(s))

    def pretty(self) -> str:
        if not self._p:
            return "0"
        n, d = self.canonical()
        if len(d) == 1:
            return _terms_pretty(n)
        return "(" + _terms_pretty(n) + ")/(" + _terms_pretty(d) + ")"

    def __repr__(self):
        return f"Scalar({self.pretty()})"

    __str__ = pretty

    def evaluate(self, x0, r0, precision: int = 30):
        return eval_numeric(self, x0, r0, precision)


def _coerce(v) -> Optional[Scalar]:
    if isinstance(v, Scalar):
        return v
    if isinstance(v, (int, Fraction)):
        return Scalar(v)
    return None


def _add(a: Scalar, b: Scalar, sign: int) -> Scalar:
    if not b._p:
        return a
    if not a._p:
        return b if sign > 0 else -b
    if a._a == b._a:
        return Scalar._reduced(_padd(a._p, b._p, sign), dict(a._a),
                               [t for t, n in a._a.items() if n < 0])
    common: Dict[Atom, int] = {}
    pa, pb = a._p, b._p
    for atom in set(a._a) | set(b._a):
        na, nb = a._a.get(atom, 0), b._a.get(atom, 0)
        m = min(na, nb)
        if m:
            common[atom] = m
        if na - m:
            pa = _pmul(pa, _ppow(atom.poly, na - m))
        if nb - m:
            pb = _pmul(pb, _ppow(atom.poly, nb - m))
    p = _padd(pa, pb, sign)
    return Scalar._reduced(p, common, [t for t, n in common.items() if n < 0])


# canonical reduction via multivariate gcd in lattice coordinates -----------------


def _canonical(num: Poly, den: Poly) -> Tuple[Poly, Poly]:
    if len(den) > 1 and len(num) > 1:
        from .lattice import gcd_reduce
        num, den = gcd_reduce(num, den)
    top = max(den, key=ExponentFn.okey)
    c = Fraction(den[top])
    num = {e - top: _c(v / c) for e, v in num.items()}
    den = {e - top: _c(v / c) for e, v in den.items()}
    return num, den


def _sorted_terms(p: Poly):
    return sorted(p.items(), key=lambda t: t[0].okey(), reverse=True)


def _terms_text(p: Poly) -> str:
    return " + ".join(f"{c}*x^({e.to_text()})" for e, c in _sorted_terms(p))


def _parse_terms(s: str) -> Dict[ExponentFn, Fraction]:
    out = {}
    for part in s.split(" + "):
        c, rest = part.split("*x^(", 1)
        e = ExponentFn.from_text(rest[:-1])
        out[e] = out.get(e, 0) + Fraction(c)
    return out


def _terms_pretty(p: Poly) -> str:
    bits = []
    for e, c in _sorted_terms(p):
        if e == ZERO_E:
            mon = ""
        elif e == 1:
            mon = "x"
        else:
            t = e.pretty()
            mon = f"x^{t}" if e.is_constant() and e.constant() >= 0 and "/" not in t else f"x^({t})"
        if mon:
            body = mon if abs(c) == 1 else f"{abs(c)}*{mon}"
        else:
            body = str(abs(c))
        bits.append(("-" if c < 0 else "+", body))
    out = ("-" if bits[0][0] == "-" else "") + bits[0][1]
    for sg, b in bits[1:]:
        out += f" {sg} {b}"
    return out


# public helpers ---------------------------------------------------------------

ZERO = Scalar._make({}, {})
ONE = Scalar._make({ZERO_E: 1}, {})


def xpow(e, c=1) -> Scalar:
    """c * x^e."""
    return Scalar.monomial(e, c)


def qint(n) -> Scalar:
    """[n] = (x^n - x^-n)/(x - x^-1) for n in Q(r)."""
    n = E(n)
    if not n:
        return ZERO
    # x^{1-n} (1 - x^{2n}) / (1 - x^2)
    return xpow(1 - n) * Scalar.one_minus_x(2 * n) / Scalar.one_minus_x(2)


def qint_base(n, base) -> Scalar:
    """[n] with q = x^base: (x^{bn} - x^{-bn})/(x^b - x^-b)."""
    n, base = E(n), E(base)
    if not n:
        return ZERO
    return xpow(base - base * n) * Scalar.one_minus_x(2 * base * n) / Scalar.one_minus_x(2 * base)


def x_minus_xinv() -> Scalar:
    return Scalar.from_terms({1: 1, -1: -1})


def c_const() -> Scalar:
    """c(r, x) = [r][r-1](x - x^-1)."""
    from .exponent import R
    return qint(R) * qint(R - 1) * x_minus_xinv()


def d_const(j: int) -> Scalar:
    """d_j = prod_{l=1}^{j} [r-l]/[l]; d_0 = 1."""
    from .exponent import R
    out = ONE
    for l in range(1, j + 1):
        out = out * qint(R - l) / qint(l)
    return out


def eval_numeric(a: Scalar, x0, r0, precision: int = 30):
    """Numeric value with x -> x0, r -> r0, using mpmath at `precision` digits.

    r0 is converted to an exact rational so exponents are evaluated exactly.
    """
    import mpmath

    rr = Fraction(r0) if not isinstance(r0, str) else Fraction(r0)
    with mpmath.workdps(precision):
        X = mpmath.mpf(x0)
        if X <= 0:
            raise ValueError("x0 must be positive")

        def ev(p: Poly):
            acc = mpmath.mpf(0)
            for e, c in p.items():
                ex = Fraction(e.evaluate(rr))
                c = Fraction(c)
                acc += mpmath.mpf(c.numerator) / c.denominator * mpmath.power(X, mpmath.mpf(ex.numerator) / ex.denominator)
            return acc

        val = ev(a._p)
        for atom, n in a._a.items():
            v = ev(atom.poly)
            if v == 0:
                raise ZeroDivisionError("evaluated denominator vanishes")
            val *= mpmath.power(v, n)
        return +val
