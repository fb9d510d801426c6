"""Exact rational functions of the formal symbol r, used as exponents of x."""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence, Union

Coef = Union[int, Fraction]


def _c(v) -> Coef:
    if isinstance(v, int):
        return v
    v = Fraction(v)
    return v.numerator if v.denominator == 1 else v


def _trim(p: list) -> tuple:
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def padd(a: Sequence, b: Sequence) -> tuple:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for k, v in enumerate(b):
        out[k] = _c(out[k] + v)
    return _trim(out)


def pneg(a: Sequence) -> tuple:
    return tuple(-v for v in a)


def psub(a: Sequence, b: Sequence) -> tuple:
    return padd(a, pneg(b))


def pmul(a: Sequence, b: Sequence) -> tuple:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, u in enumerate(a):
        if u == 0:
            continue
        for j, v in enumerate(b):
            out[i + j] += u * v
    return _trim([_c(v) for v in out])


def pscale(a: Sequence, c) -> tuple:
    return _trim([_c(v * c) for v in a])


def pdivmod(a: Sequence, b: Sequence) -> tuple[tuple, tuple]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(a)
    lead = b[-1]
    q = [0] * max(len(a) - len(b) + 1, 0)
    for k in range(len(a) - len(b), -1, -1):
        c = Fraction(rem[k + len(b) - 1]) / lead
        if c:
            q[k] = _c(c)
            for j, v in enumerate(b):
                rem[k + j] = _c(rem[k + j] - c * v)
    return _trim(q), _trim(rem[: len(b) - 1])


def pmonic(a: Sequence) -> tuple:
    return pscale(a, Fraction(1) / Fraction(a[-1]))


def pgcd(a: Sequence, b: Sequence) -> tuple:
    a, b = tuple(a), tuple(b)
    while b:
        a, b = b, pdivmod(a, b)[1]
    return pmonic(a) if a else ()


def peval(a: Sequence, t):
    acc = 0
    for v in reversed(a):
        acc = acc * t + v
    return acc


def _poly_text(p: Sequence) -> str:
    return "[" + ",".join(str(v) for v in p) + "]" if p else "[0]"


class ExponentFn:
    """An element num(r)/den(r) of Q(r); den is monic and coprime to num.

    Ordered by sign as r -> +infinity.
    """

    __slots__ = ("num", "den", "_h", "_k")

    def __init__(self, num=0, den=1):
        if isinstance(num, ExponentFn):
            n, d = num.num, num.den
        elif isinstance(num, (int, Fraction)):
            n, d = _trim([_c(num)]), (1,)
        else:
            n, d = _trim([_c(v) for v in num]), (1,)
        if isinstance(den, ExponentFn):
            n, d = pmul(n, den.den), pmul(d, den.num)
        elif isinstance(den, (int, Fraction)):
            if den == 0:
                raise ZeroDivisionError("zero exponent denominator")
            d = pscale(d, den)
        else:
            d = pmul(d, _trim([_c(v) for v in den]))
        if not d:
            raise ZeroDivisionError("zero exponent denominator")
        if not n:
            d = (1,)
        elif len(d) > 1:
            g = pgcd(n, d)
            if len(g) > 1:
                n, d = pdivmod(n, g)[0], pdivmod(d, g)[0]
        lead = d[-1]
        if lead != 1:
            n, d = pscale(n, Fraction(1) / Fraction(lead)), pscale(d, Fraction(1) / Fraction(lead))
        self.num = n
        self.den = d
        self._h = None
        self._k = None

    @classmethod
    def _raw(cls, num: tuple, den: tuple = (1,)) -> "ExponentFn":
        e = object.__new__(cls)
        e.num = num
        e.den = den
        e._h = None
        e._k = None
        return e

    @classmethod
    def poly(cls, coeffs: Iterable) -> "ExponentFn":
        return cls._raw(_trim([_c(v) for v in coeffs]))

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        o = other if isinstance(other, ExponentFn) else _as_exp(other)
        if o is NotImplemented:
            return o
        if self.den == (1,) and o.den == (1,):
            return ExponentFn._raw(padd(self.num, o.num))
        return ExponentFn(padd(pmul(self.num, o.den), pmul(o.num, self.den)), pmul(self.den, o.den))

    __radd__ = __add__

    def __neg__(self):
        return ExponentFn._raw(pneg(self.num), self.den)

    def __sub__(self, other):
        o = other if isinstance(other, ExponentFn) else _as_exp(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = other if isinstance(other, ExponentFn) else _as_exp(other)
        if o is NotImplemented:
            return o
        if self.den == (1,) and o.den == (1,):
            return ExponentFn._raw(pmul(self.num, o.num))
        return ExponentFn(pmul(self.num, o.num), pmul(self.den, o.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = other if isinstance(other, ExponentFn) else _as_exp(other)
        if o is NotImplemented:
            return o
        if not o.num:
            raise ZeroDivisionError("division by zero exponent")
        return ExponentFn(pmul(self.num, o.den), pmul(self.den, o.num))

    def __rtruediv__(self, other):
        return _as_exp(other) / self

    # order ----------------------------------------------------------------
    def sign(self) -> int:
        if not self.num:
            return 0
        return 1 if self.num[-1] > 0 else -1

    def okey(self) -> tuple:
        """Sort key realising the r -> infinity order (lexicographic on the
        expansion coefficients of r^TOP, ..., r^-TAIL)."""
        k = self._k
        if k is None:
            if len(self.num) > _TOP + 1 or len(self.den) > _TOP + 1:
                raise ValueError("exponent degree too large for ordering key")
            if self.den == (1,):
                k = tuple(self.num[j] if j < len(self.num) else 0 for j in range(_TOP, -1, -1)) + _ZTAIL
            else:
                k = _expansion_key(self.num, self.den)
            self._k = k
        return k

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __eq__(self, other):
        if isinstance(other, ExponentFn):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)):
            return self.den == (1,) and self.num == _trim([_c(other)])
        return NotImplemented

    def __hash__(self):
        h = self._h
        if h is None:
            if self.den == (1,) and len(self.num) <= 1:
                h = hash(self.num[0] if self.num else 0)
            else:
                h = hash((self.num, self.den))
            self._h = h
        return h

    def __bool__(self):
        return bool(self.num)

    # queries --------------------------------------------------------------
    def is_constant(self) -> bool:
        return self.den == (1,) and len(self.num) <= 1

    def constant(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"exponent {self.pretty()} depends on r")
        return Fraction(self.num[0]) if self.num else Fraction(0)

    def is_integer(self) -> bool:
        return self.is_constant() and self.constant().denominator == 1

    def evaluate(self, r0):
        """Value at r = r0; raises if the denominator vanishes there."""
        d = peval(self.den, r0)
        if d == 0:
            raise ZeroDivisionError(f"exponent denominator vanishes at r={r0}")
        return peval(self.num, r0) / d

    # text -----------------------------------------------------------------
    def to_text(self) -> str:
        return _poly_text(self.num) + "/" + _poly_text(self.den)

    @classmethod
    def from_text(cls, s: str) -> "ExponentFn":
        n, d = s.split("/[", 1)
        return cls(_parse_poly(n), _parse_poly("[" + d))

    def pretty(self) -> str:
        n = _poly_pretty(self.num)
        if self.den == (1,):
            return n
        return f"({n})/({_poly_pretty(self.den)})"

    def __repr__(self):
        return f"ExponentFn({self.pretty()})"

    __str__ = pretty


_TOP = 8
_TAIL = 2 * _TOP
_ZTAIL = (0,) * _TAIL


def _expansion_key(num, den) -> tuple:
    # num/den = r^(dn-dd) * N(u)/D(u) with u = 1/r, D(0) = 1
    dn, dd = len(num) - 1, len(den) - 1
    top = dn - dd
    n = _TOP + _TAIL + 1
    nu = [Fraction(num[dn - i]) if i <= dn else Fraction(0) for i in range(n)]
    du = [Fraction(den[dd - i]) if i <= dd else Fraction(0) for i in range(n)]
    ser = []
    for i in range(n):
        acc = nu[i] - sum(du[j] * ser[i - j] for j in range(1, min(i, dd) + 1))
        ser.append(acc)
    out = []
    for power in range(_TOP, -_TAIL - 1, -1):
        idx = top - power
        out.append(_c(ser[idx]) if 0 <= idx < n else 0)
    return tuple(out)


def _parse_poly(s: str) -> list:
    s = s.strip()
    if not (s.startswith("[") and s.endswith("]")):
        raise ValueError(f"bad polynomial text {s!r}")
    return [Fraction(v) for v in s[1:-1].split(",") if v.strip()]


def _poly_pretty(p: Sequence) -> str:
    if not p:
        return "0"
    parts = []
    for k in range(len(p) - 1, -1, -1):
        c = p[k]
        if c == 0:
            continue
        mon = "" if k == 0 else ("r" if k == 1 else f"r^{k}")
        if mon and abs(c) == 1:
            body = mon
        else:
            body = str(abs(c)) + mon
        sgn = "-" if c < 0 else "+"
        parts.append((sgn, body))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sgn, body in parts[1:]:
        out += sgn + body
    return out


def _as_exp(v):
    if isinstance(v, ExponentFn):
        return v
    if isinstance(v, (int, Fraction)):
        return ExponentFn._raw(_trim([_c(v)]))
    return NotImplemented


def E(v=0, den=1) -> ExponentFn:
    """Coerce ints, Fractions, coefficient lists or ExponentFn values."""
    if isinstance(v, ExponentFn) and den == 1:
        return v
    return ExponentFn(v, den)


R = ExponentFn._raw((0, 1))
ZERO_E = ExponentFn._raw(())
ONE_E = ExponentFn._raw((1,))
