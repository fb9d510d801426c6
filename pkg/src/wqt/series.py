"""Truncated Laurent series, factored rational functions of a ratio variable,
boundary expansions and delta decomposition."""
from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .exponent import E
from .scalar import ONE, ZERO, Scalar, xpow


class SeriesError(ValueError):
    pass


class RepeatedPoleError(SeriesError):
    pass


def _S(v) -> Scalar:
    return v if isinstance(v, Scalar) else Scalar(v)


class LaurentSeries:
    """sum_{k=lo}^{N} c_k t^k, coefficients known exactly up to order N.

    `var` is a tag only; expansions at infinity use var "u" with u = 1/zeta.
    """

    __slots__ = ("var", "lo", "N", "c")

    def __init__(self, coeffs: Dict[int, Scalar], N: int, lo: Optional[int] = None, var: str = "zeta"):
        cl = {k: _S(v) for k, v in coeffs.items() if k <= N}
        cl = {k: v for k, v in cl.items() if not v.is_zero()}
        self.c = cl
        self.N = N
        self.lo = min(cl) if lo is None and cl else (lo if lo is not None else N + 1)
        if cl and min(cl) < self.lo:
            raise SeriesError("coefficient below the stated low exponent")
        self.var = var

    @classmethod
    def one(cls, N: int, var: str = "zeta") -> "LaurentSeries":
        return cls({0: ONE}, N, 0, var)

    def coeff(self, k: int) -> Scalar:
        if k > self.N:
            raise SeriesError(f"coefficient {k} beyond truncation order {self.N}")
        return self.c.get(k, ZERO)

    def __getitem__(self, k: int) -> Scalar:
        return self.coeff(k)

    def _check(self, other: "LaurentSeries"):
        if self.var != other.var:
            raise SeriesError(f"variable mismatch {self.var} vs {other.var}")

    def __add__(self, other):
        if not isinstance(other, LaurentSeries):
            other = LaurentSeries({0: _S(other)}, self.N, var=self.var)
        self._check(other)
        N = min(self.N, other.N)
        out = dict((k, v) for k, v in self.c.items() if k <= N)
        for k, v in other.c.items():
            if k <= N:
                out[k] = out[k] + v if k in out else v
        return LaurentSeries(out, N, min(self.lo, other.lo), self.var)

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeries({k: -v for k, v in self.c.items()}, self.N, self.lo, self.var)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s) -> "LaurentSeries":
        s = _S(s)
        return LaurentSeries({k: v * s for k, v in self.c.items()}, self.N, self.lo, self.var)

    def __mul__(self, other):
        if not isinstance(other, LaurentSeries):
            return self.scale(other)
        self._check(other)
        # negative low exponents eat into the known precision
        N = min(self.N + min(other.lo, 0), other.N + min(self.lo, 0))
        out: Dict[int, Scalar] = {}
        for i, a in self.c.items():
            for j, b in other.c.items():
                k = i + j
                if k <= N:
                    t = a * b
                    out[k] = out[k] + t if k in out else t
        return LaurentSeries(out, N, self.lo + other.lo, self.var)

    __rmul__ = __mul__

    def shift(self, n: int) -> "LaurentSeries":
        return LaurentSeries({k + n: v for k, v in self.c.items()}, self.N + n, self.lo + n, self.var)

    def valuation(self) -> Optional[int]:
        return min(self.c) if self.c else None

    def inv(self) -> "LaurentSeries":
        v = self.valuation()
        if v is None:
            raise SeriesError("inverse of the zero series")
        f = self.shift(-v)
        f0 = f.coeff(0)
        N = f.N
        g: Dict[int, Scalar] = {0: ONE / f0}
        inv0 = g[0]
        for n in range(1, N + 1):
            acc = ZERO
            for k in range(1, n + 1):
                fk = f.c.get(k)
                if fk is not None and (n - k) in g:
                    acc = acc + fk * g[n - k]
            if not acc.is_zero():
                g[n] = -(acc * inv0)
        return LaurentSeries(g, N, 0, self.var).shift(-v)

    def exp(self) -> "LaurentSeries":
        if any(k <= 0 for k in self.c):
            raise SeriesError("exp needs a series with only positive exponents")
        N = self.N
        e: Dict[int, Scalar] = {0: ONE}
        for n in range(1, N + 1):
            acc = ZERO
            for k in range(1, n + 1):
                sk = self.c.get(k)
                if sk is not None and (n - k) in e:
                    acc = acc + sk * e[n - k] * k
            if not acc.is_zero():
                e[n] = acc * Fraction(1, n)
        return LaurentSeries(e, N, 0, self.var)

    def log(self) -> "LaurentSeries":
        if any(k < 0 for k in self.c) or not self.coeff(0).is_one():
            raise SeriesError("log needs constant term 1 and no negative exponents")
        N = self.N
        L: Dict[int, Scalar] = {}
        for n in range(1, N + 1):
            acc = ZERO
            for k in range(1, n):
                lk = L.get(k)
                fk = self.c.get(n - k)
                if lk is not None and fk is not None:
                    acc = acc + lk * fk * k
            v = self.coeff(n) - acc * Fraction(1, n)
            if not v.is_zero():
                L[n] = v
        return LaurentSeries(L, N, 1, self.var)

    def truncate(self, N: int) -> "LaurentSeries":
        return LaurentSeries({k: v for k, v in self.c.items() if k <= N}, min(N, self.N), self.lo, self.var)

    def first_difference(self, other: "LaurentSeries", lo: Optional[int] = None) -> Optional[int]:
        """Smallest exponent where the two series differ (within common order)."""
        self._check(other)
        N = min(self.N, other.N)
        start = min(self.lo, other.lo) if lo is None else lo
        for k in range(start, N + 1):
            if self.coeff(k) != other.coeff(k):
                return k
        return None

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return self.var == other.var and self.first_difference(other) is None

    def to_report(self) -> Dict[str, str]:
        return {str(k): self.c[k].to_text() for k in sorted(self.c)}

    def __repr__(self):
        body = " + ".join(f"({v.pretty()})*{self.var}^{k}" for k, v in sorted(self.c.items()))
        return f"LaurentSeries[{body or '0'} + O({self.var}^{self.N + 1})]"


def series_from_log_coeffs(coeff, N: int, var: str = "zeta") -> LaurentSeries:
    """exp(sum_{m=1}^N coeff(m) t^m)."""
    return LaurentSeries({m: coeff(m) for m in range(1, N + 1)}, N, 1, var).exp()


# factored rational functions ---------------------------------------------------


def one_minus(s: Scalar) -> Scalar:
    m = s.as_monomial()
    if m is not None and m[0] == 1:
        return Scalar.one_minus_x(m[1])
    return ONE - s


class FactoredRational:
    """prefactor * zeta^k * prod (1 - c zeta)^n."""

    __slots__ = ("pre", "k", "fac")

    def __init__(self, pre=ONE, k: int = 0, fac: Optional[Dict[Scalar, int]] = None):
        pre = _S(pre)
        self.pre = pre
        self.k = k if not pre.is_zero() else 0
        f = {}
        if fac and not pre.is_zero():
            for c, n in fac.items():
                c = _S(c)
                if c.is_zero():
                    raise SeriesError("factor with c = 0")
                if n:
                    f[c] = f.get(c, 0) + n
                    if not f[c]:
                        del f[c]
        self.fac = f

    @classmethod
    def factor(cls, c, n: int = 1) -> "FactoredRational":
        return cls(ONE, 0, {_S(c): n})

    def is_zero(self) -> bool:
        return self.pre.is_zero()

    def __mul__(self, other):
        if not isinstance(other, FactoredRational):
            return FactoredRational(self.pre * _S(other), self.k, self.fac)
        if self.is_zero() or other.is_zero():
            return FactoredRational(ZERO)
        fac = dict(self.fac)
        for c, n in other.fac.items():
            v = fac.get(c, 0) + n
            if v:
                fac[c] = v
            else:
                fac.pop(c, None)
        return FactoredRational(self.pre * other.pre, self.k + other.k, fac)

    __rmul__ = __mul__

    def inv(self) -> "FactoredRational":
        if self.is_zero():
            raise ZeroDivisionError("inverse of the zero rational function")
        return FactoredRational(ONE / self.pre, -self.k, {c: -n for c, n in self.fac.items()})

    def __truediv__(self, other):
        if not isinstance(other, FactoredRational):
            return FactoredRational(self.pre / _S(other), self.k, self.fac)
        return self * other.inv()

    def __pow__(self, n: int):
        if n < 0:
            return self.inv() ** (-n)
        return FactoredRational(self.pre ** n, self.k * n, {c: m * n for c, m in self.fac.items()})

    def scale(self, s) -> "FactoredRational":
        """zeta -> s * zeta."""
        s = _S(s)
        return FactoredRational(self.pre * s ** self.k, self.k, {c * s: n for c, n in self.fac.items()})

    def invert(self) -> "FactoredRational":
        """zeta -> 1/zeta, renormalised so that factors are again 1 - c zeta."""
        pre = self.pre
        k = -self.k
        fac = {}
        for c, n in self.fac.items():
            # 1 - c/zeta = -c zeta^-1 (1 - zeta/c)
            pre = pre * (-c) ** n
            k -= n
            fac[ONE / c] = n
        return FactoredRational(pre, k, fac)

    def multiplicity(self, c) -> int:
        return self.fac.get(_S(c), 0)

    def poles(self) -> List[Scalar]:
        return [c for c, n in self.fac.items() if n < 0]

    def value_at(self, z0: Scalar) -> Scalar:
        """Value at zeta = z0 (must not be a pole)."""
        z0 = _S(z0)
        out = self.pre * z0 ** self.k
        for c, n in self.fac.items():
            v = one_minus(c * z0)
            if v.is_zero():
                if n < 0:
                    raise SeriesError("evaluation at a pole")
                return ZERO
            out = out * v ** n
        return out

    def expand(self, at: str, N: int) -> LaurentSeries:
        return expand(self, at, N)

    def __eq__(self, other):
        if not isinstance(other, FactoredRational):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return self.is_zero() and other.is_zero()
        return self.k == other.k and self.fac == other.fac and self.pre == other.pre

    def to_report(self) -> Dict[str, object]:
        facs = sorted(((c.to_text(), n) for c, n in self.fac.items()))
        return {"prefactor": self.pre.to_text(), "zeta_power": self.k, "factors": [list(f) for f in facs]}

    def pretty(self) -> str:
        bits = [f"({self.pre.pretty()})"]
        if self.k:
            bits.append(f"zeta^{self.k}")
        for c, n in sorted(self.fac.items(), key=lambda t: t[0].to_text()):
            bits.append(f"(1 - ({c.pretty()})zeta)^{n}")
        return "*".join(bits)

    def __repr__(self):
        return f"FactoredRational[{self.pretty()}]"


def _binomial_series(c: Scalar, n: int, N: int) -> Dict[int, Scalar]:
    """(1 - c t)^n to order N."""
    out: Dict[int, Scalar] = {0: ONE}
    if n > 0:
        binom = 1
        cp = ONE
        for j in range(1, min(n, N) + 1):
            binom = binom * (n - j + 1) // j
            cp = cp * c
            out[j] = cp * (binom if j % 2 == 0 else -binom)
    else:
        m = -n
        binom = 1
        cp = ONE
        for j in range(1, N + 1):
            # coefficient binom(m + j - 1, j) c^j
            binom = binom * (m + j - 1) // j
            cp = cp * c
            out[j] = cp * binom
    return out


def _mul_trunc(a: Dict[int, Scalar], b: Dict[int, Scalar], N: int) -> Dict[int, Scalar]:
    out: Dict[int, Scalar] = {}
    for i, u in a.items():
        for j, v in b.items():
            k = i + j
            if k <= N:
                t = u * v
                out[k] = out[k] + t if k in out else t
    return {k: v for k, v in out.items() if not v.is_zero()}


def expand(r: FactoredRational, at: str, N: int) -> LaurentSeries:
    """iota_0 (at='zero') or iota_infinity (at='infinity') expansion.

    At infinity the result is a series in u = 1/zeta (coefficient j is the
    coefficient of zeta^-j), known down to zeta^-N.
    """
    if at == "infinity":
        s = expand(r.invert(), "zero", N)
        return LaurentSeries(s.c, N, s.lo, "u")
    if at != "zero":
        raise ValueError(f"unknown expansion point {at!r}")
    if r.is_zero():
        return LaurentSeries({}, N, 0)
    body: Dict[int, Scalar] = {0: r.pre}
    M = N - r.k
    for c, n in r.fac.items():
        body = _mul_trunc(body, _binomial_series(c, n, M), M)
    return LaurentSeries({j + r.k: v for j, v in body.items()}, N, r.k)


class DeltaExpansion:
    """sum_c coeff_c * delta(c zeta), delta(z) = sum_{m in Z} z^m."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[Scalar, Scalar]] = None):
        t = {}
        for c, v in (terms or {}).items():
            c, v = _S(c), _S(v)
            if c in t:
                v = t[c] + v
            if v.is_zero():
                t.pop(c, None)
            else:
                t[c] = v
        self.terms = t

    def __add__(self, other: "DeltaExpansion") -> "DeltaExpansion":
        out = dict(self.terms)
        for c, v in other.terms.items():
            out[c] = out[c] + v if c in out else v
        return DeltaExpansion(out)

    def scale(self, s) -> "DeltaExpansion":
        s = _S(s)
        return DeltaExpansion({c: v * s for c, v in self.terms.items()})

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, DeltaExpansion):
            return NotImplemented
        return (self - other).is_zero()

    def coefficient_series(self, N: int) -> Dict[int, Scalar]:
        """Coefficients of zeta^m, -N <= m <= N."""
        out = {}
        for m in range(-N, N + 1):
            acc = ZERO
            for c, v in self.terms.items():
                acc = acc + v * c ** m
            out[m] = acc
        return out

    def to_report(self) -> Dict[str, str]:
        return {c.to_text(): v.to_text() for c, v in sorted(self.terms.items(), key=lambda t: t[0].to_text())}

    def __repr__(self):
        body = " + ".join(f"({v.pretty()})*delta(({c.pretty()})zeta)" for c, v in self.terms.items())
        return f"DeltaExpansion[{body or '0'}]"


def residue_limit(r: FactoredRational, c) -> Scalar:
    """lim_{zeta -> 1/c} (1 - c zeta) r(zeta)."""
    c = _S(c)
    n = r.fac.get(c, 0)
    if n < -1:
        raise RepeatedPoleError(f"pole of order {-n} at zeta = 1/({c.pretty()})")
    if n >= 0:
        return ZERO
    z0 = ONE / c
    out = r.pre * z0 ** r.k
    for f, m in r.fac.items():
        if f == c:
            continue
        out = out * one_minus(f * z0) ** m
    return out


def delta_decompose(r: FactoredRational, check_window: Optional[int] = None) -> DeltaExpansion:
    """iota_0 r - iota_infinity r as a sum of shifted delta functions."""
    terms = {}
    for c, n in r.fac.items():
        if n < -1:
            raise RepeatedPoleError(f"pole of order {-n} at zeta = 1/({c.pretty()})")
        if n == -1:
            terms[c] = residue_limit(r, c)
    out = DeltaExpansion(terms)
    if check_window is not None:
        mismatch = delta_mismatch(r, out, check_window)
        if mismatch is not None:
            raise SeriesError(f"delta decomposition inconsistent at zeta^{mismatch}")
    return out


def delta_mismatch(r: FactoredRational, d: DeltaExpansion, N: int) -> Optional[int]:
    """First exponent in [-N, N] where iota_0 r - iota_inf r differs from d."""
    z = expand(r, "zero", N)
    u = expand(r, "infinity", N)
    target = d.coefficient_series(N)
    for m in range(-N, N + 1):
        lhs = (z.c.get(m, ZERO) if m >= z.lo else ZERO) - (u.c.get(-m, ZERO) if -m >= u.lo else ZERO)
        if lhs != target[m]:
            return m
    return None


# q-Pochhammer and theta logarithms ------------------------------------------------


def pochhammer_log_coeff(p_exponent, a_exponent, m: int) -> Scalar:
    """Coefficient of zeta^m in log (a zeta; p)_inf = -a^m/(m(1 - p^m))."""
    if m < 1:
        raise ValueError("m must be positive")
    p, a = E(p_exponent), E(a_exponent)
    if p.sign() <= 0:
        raise ValueError("the nome exponent must be positive")
    return -xpow(a * m) / (Scalar.one_minus_x(p * m) * m)


def theta_log_coeff(p_exponent, a_exponent, m: int) -> Tuple[Scalar, Scalar]:
    """Log coefficients of Theta_p(a zeta) = (a zeta;p)(p/(a zeta);p)(p;p).

    Returns (coefficient of zeta^m, coefficient of zeta^-m); the constant
    (p;p) factor does not contribute.
    """
    p, a = E(p_exponent), E(a_exponent)
    return pochhammer_log_coeff(p, a, m), pochhammer_log_coeff(p, p - a, m)


def pole_parts(r: FactoredRational, c) -> Tuple[Scalar, Scalar]:
    """(alpha, beta) with r = alpha/(1-y)^2 + beta/(1-y) + O(1), y = c zeta.

    Poles of order above two raise RepeatedPoleError.
    """
    c = _S(c)
    n = r.fac.get(c, 0)
    if n >= 0:
        return ZERO, ZERO
    if n < -2:
        raise RepeatedPoleError(f"pole of order {-n} at zeta = 1/({c.pretty()})")
    z0 = ONE / c
    h = r.pre * z0 ** r.k
    dlog = Scalar(r.k)
    for f, m in r.fac.items():
        if f == c:
            continue
        t = f * z0
        v = one_minus(t)
        h = h * v ** m
        dlog = dlog - t * m / v
    if n == -1:
        return ZERO, h
    return h, -h * dlog


def principal_parts(r: FactoredRational) -> Dict[Scalar, Tuple[Scalar, Scalar]]:
    return {c: pole_parts(r, c) for c, n in r.fac.items() if n < 0}


def principal_mismatch(r: FactoredRational, parts: Dict[Scalar, Tuple[Scalar, Scalar]], N: int,
                       other: Optional[FactoredRational] = None) -> Optional[int]:
    """First m in [-N, N] where iota_0 r - iota_inf r
    differs from sum_c alpha_c (m+1) c^m + beta_c c^m.

    `other`, when given, is the second ordering as a function of 1/zeta and
    is expanded around 1/zeta = 0 directly.
    """
    z = expand(r, "zero", N)
    u = expand(r, "infinity", N) if other is None else expand(other, "zero", N)
    for m in range(-N, N + 1):
        lhs = (z.c.get(m, ZERO) if m >= z.lo else ZERO) - (u.c.get(-m, ZERO) if -m >= u.lo else ZERO)
        rhs = ZERO
        for c, (a, b) in parts.items():
            w = c ** m
            rhs = rhs + (a * (m + 1) + b) * w
        if lhs != rhs:
            return m
    return None
