"""Free-field data for the three cases: parameter tables, contraction
functions, structure functions, kernels and W-currents."""
from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Tuple

from .exponent import E, ExponentFn, R
from .scalar import ONE, ZERO, Scalar, c_const, d_const, qint, x_minus_xinv, xpow
from .series import FactoredRational, LaurentSeries, residue_limit, series_from_log_coeffs


class CaseId(enum.Enum):
    CASE1 = 1
    CASE2 = 2
    CASE3 = 3

    @classmethod
    def parse(cls, v) -> "CaseId":
        if isinstance(v, CaseId):
            return v
        s = str(v).strip().lower().replace("case", "")
        try:
            return cls(int(s))
        except (ValueError, KeyError):
            raise ValueError(f"unknown case {v!r}; expected 1, 2 or 3") from None

    def __str__(self):
        return f"case{self.value}"


# ----------------------------------------------------------------------------
# parameter tables

Pair = Tuple[int, int]


def _qm(e, m: int) -> Scalar:
    """[e*m]_x."""
    return qint(E(e) * m)


@dataclass(frozen=True)
class CaseParams:
    """One column of the parameter solution.

    lambda0[i, j] is the coefficient of log x in lambda_{i,j}(0); lam_table
    gives lambda_{i,j}(m)/s_j(m).  q_exp/p_exp hold exponents of x; the
    entries (1,2) and (3,1) are None because only p = q is fixed there.
    """

    case: CaseId
    A0: Dict[Pair, ExponentFn]
    a12_pos: Callable[[int], Scalar]
    a12_neg: Callable[[int], Scalar]
    s_neg: Tuple[Callable[[int], Scalar], Callable[[int], Scalar]]
    lambda0: Dict[Pair, ExponentFn]
    lam_table: Callable[[int, int, int], Scalar]
    g: Tuple[Scalar, Scalar, Scalar]
    q_exp: Dict[Pair, Optional[ExponentFn]]
    p_exp: Dict[Pair, Optional[ExponentFn]]
    s_param: ExponentFn
    tag: str = "reference"
    _memo: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    # boson data ----------------------------------------------------------
    def Am(self, i: int, j: int, m: int) -> Scalar:
        if m == 0:
            raise ValueError("Am needs m != 0")
        if i == j:
            return ONE
        if (i, j) == (2, 1):
            m = -m
        key = ("A", m)
        v = self._memo.get(key)
        if v is None:
            v = self.a12_pos(m) if m > 0 else self.a12_neg(m)
            self._memo[key] = v
        return v

    def s(self, j: int, m: int) -> Scalar:
        if m == 0:
            raise ValueError("s_j(m) needs m != 0")
        if m > 0:
            return ONE
        key = ("s", j, m)
        v = self._memo.get(key)
        if v is None:
            v = self.s_neg[j - 1](m)
            self._memo[key] = v
        return v

    def lam(self, i: int, j: int, m: int) -> Scalar:
        key = ("l", i, j, m)
        v = self._memo.get(key)
        if v is None:
            v = self.s(j, m) * self.lam_table(i, j, m)
            self._memo[key] = v
        return v

    def q(self, i: int, j: int) -> Optional[ExponentFn]:
        return self.q_exp.get((i, j))

    def p(self, i: int, j: int) -> Optional[ExponentFn]:
        return self.p_exp.get((i, j))

    def with_changes(self, tag: str, **kw) -> "CaseParams":
        return replace(self, tag=tag, _memo={}, **kw)


def _ident(d: Dict) -> Dict:
    return {k: (None if v is None else E(v)) for k, v in d.items()}


def _case1() -> CaseParams:
    r = R

    def lam(i, j, m):
        pre = -_qm(r, m) / _qm(3, m) * x_minus_xinv()
        if j < i:
            return pre * xpow((r + 2) * m) * _qm(j, m)
        return pre * xpow((r - 1) * m) * _qm(j - 3, m)

    def s_neg(m):
        return -_qm(r - 1, m) * _qm(2, m) / (_qm(r, m) * _qm(1, m))

    A11 = (2 * r - 2) / r
    A12 = -(r - 1) / r
    l0 = {(i, j): (2 * r / 3) * (j if j < i else j - 3) for i in (1, 2, 3) for j in (1, 2)}
    return CaseParams(
        case=CaseId.CASE1,
        A0={(1, 1): A11, (2, 2): A11, (1, 2): A12, (2, 1): A12},
        a12_pos=lambda m: -_qm(1, m) / _qm(2, m),
        a12_neg=lambda m: -_qm(1, m) / _qm(2, m),
        s_neg=(s_neg, s_neg),
        lambda0=l0,
        lam_table=lam,
        g=(ONE, ONE, ONE),
        q_exp=_ident({(1, 1): 0, (2, 1): 2 * r, (2, 2): 1, (3, 2): 2 * r + 1, (1, 2): None, (3, 1): None}),
        p_exp=_ident({(1, 1): 2 * r - 2, (2, 1): 2, (2, 2): 2 * r - 1, (3, 2): 3, (1, 2): None, (3, 1): None}),
        s_param=E(3),
    )


_C2_L0 = {(1, 1): -R, (1, 2): 1 - R, (2, 2): 1 - R, (2, 1): E(1), (3, 1): E(1), (3, 2): E(2)}
_C3_L0 = {(1, 1): -R, (1, 2): E(-1), (2, 2): E(-1), (2, 1): E(1), (3, 1): E(1), (3, 2): R}


def _case2() -> CaseParams:
    r = R

    def lam(i, j, m):
        pre = _qm(r, m) / _qm(r + 1, m) * x_minus_xinv()
        if (i, j) == (1, 1):
            return pre * xpow((r - 1) * m) * _qm(r, m)
        if (i, j) in ((1, 2), (2, 2)):
            return pre * xpow((r - 1) * m) * _qm(r - 1, m)
        if (i, j) in ((2, 1), (3, 1)):
            return -pre * xpow(2 * r * m) * _qm(1, m)
        return -pre * xpow(2 * r * m) * _qm(2, m)

    def s1_neg(m):
        return -_qm(r - 1, m) * _qm(2, m) / (_qm(r, m) * _qm(1, m))

    A12 = -(r - 1) / r
    return CaseParams(
        case=CaseId.CASE2,
        A0={(1, 1): (2 * r - 2) / r, (2, 2): E(1), (1, 2): A12, (2, 1): A12},
        a12_pos=lambda m: -_qm(r - 1, m) / _qm(r, m),
        a12_neg=lambda m: -_qm(1, m) / _qm(2, m),
        s_neg=(s1_neg, lambda m: -ONE),
        lambda0={k: (2 * r / (r + 1)) * v for k, v in _C2_L0.items()},
        lam_table=lam,
        g=(ONE, ONE, qint(r - 1)),
        q_exp=_ident({(1, 1): 0, (2, 1): 2 * r, (2, 2): 1, (3, 2): 2 * r + 1, (1, 2): None, (3, 1): None}),
        p_exp=_ident({(1, 1): 2 * r - 2, (2, 1): 2, (2, 2): 2 * r - 1, (3, 2): 2 * r - 1, (1, 2): None, (3, 1): None}),
        s_param=r + 1,
    )


def _case3() -> CaseParams:
    r = R

    def lam(i, j, m):
        pre = _qm(r, m) / _qm(r + 1, m) * x_minus_xinv()
        if (i, j) == (1, 1):
            return pre * xpow((r - 1) * m) * _qm(r, m)
        if (i, j) in ((1, 2), (2, 2)):
            return pre * xpow((r - 1) * m) * _qm(1, m)
        if (i, j) in ((2, 1), (3, 1)):
            return -pre * xpow(2 * r * m) * _qm(1, m)
        return -pre * xpow(2 * r * m) * _qm(r, m)

    A12 = -1 / r
    return CaseParams(
        case=CaseId.CASE3,
        A0={(1, 1): E(1), (2, 2): E(1), (1, 2): A12, (2, 1): A12},
        a12_pos=lambda m: -_qm(1, m) / _qm(r, m),
        a12_neg=lambda m: -_qm(1, m) / _qm(r, m),
        s_neg=(lambda m: -ONE, lambda m: -ONE),
        lambda0={k: (2 * r / (r + 1)) * v for k, v in _C3_L0.items()},
        lam_table=lam,
        g=(ONE, qint(r - 1), ONE),
        q_exp=_ident({(1, 1): 0, (2, 1): 2 * r, (2, 2): r - 1, (3, 2): 3 * r - 1, (1, 2): None, (3, 1): None}),
        p_exp=_ident({(1, 1): 2 * r - 2, (2, 1): 2 * r - 2, (2, 2): r + 1, (3, 2): r + 1, (1, 2): None, (3, 1): None}),
        s_param=r + 1,
    )


_PARAMS: Dict[CaseId, CaseParams] = {}


def params(case) -> CaseParams:
    case = CaseId.parse(case)
    p = _PARAMS.get(case)
    if p is None:
        p = {CaseId.CASE1: _case1, CaseId.CASE2: _case2, CaseId.CASE3: _case3}[case]()
        _PARAMS[case] = p
    return p


# ----------------------------------------------------------------------------
# contraction functions


@dataclass(frozen=True)
class Vertex:
    kind: str  # "L" (Lambda_i), "S" (S_j) or "St" (S_j without e^Q)
    index: int

    @classmethod
    def parse(cls, s: str) -> "Vertex":
        s = s.strip()
        for kind in ("St", "S", "L"):
            if s.startswith(kind) and s[len(kind):].isdigit():
                return cls(kind, int(s[len(kind):]))
        raise ValueError(f"bad vertex {s!r}; use L1..L3, S1, S2, St1, St2")

    def __str__(self):
        return f"{self.kind}{self.index}"


@dataclass
class Contraction:
    """phi_{V,W} = zero-mode part * exp(sum_m coeff_m zeta^m).

    zero_mode is ("const", e) for a constant x^e, ("power", e) for a factor
    w1^e, or None.
    """

    zero_mode: Optional[Tuple[str, ExponentFn]]
    log_coeff: Callable[[int], Scalar]

    def series(self, N: int) -> LaurentSeries:
        return series_from_log_coeffs(self.log_coeff, N)


def _log_LS(P: CaseParams, i: int, j: int, m: int) -> Scalar:
    acc = ZERO
    for k in (1, 2):
        acc = acc + P.lam(i, k, m) * P.Am(k, j, m)
    return acc * P.s(j, -m) / m


def _log_SL(P: CaseParams, j: int, i: int, m: int) -> Scalar:
    acc = ZERO
    for k in (1, 2):
        acc = acc + P.Am(j, k, m) * P.lam(i, k, -m)
    return acc * P.s(j, m) / m


def _log_SS(P: CaseParams, k: int, l: int, m: int) -> Scalar:
    return P.s(k, m) * P.Am(k, l, m) * P.s(l, -m) / m


def _log_LL(P: CaseParams, k: int, l: int, m: int) -> Scalar:
    key = ("LL", k, l, m)
    v = P._memo.get(key)
    if v is None:
        v = ZERO
        for a in (1, 2):
            for b in (1, 2):
                v = v + P.lam(k, a, m) * P.Am(a, b, m) * P.lam(l, b, -m)
        v = v / m
        P._memo[key] = v
    return v


def phi(P: CaseParams, V: Vertex, W: Vertex) -> Contraction:
    """Contraction of V (first argument) with W (second argument)."""
    if V.kind == "L" and W.kind == "L":
        return Contraction(None, lambda m: _log_LL(P, V.index, W.index, m))
    if V.kind == "L":
        i, j = V.index, W.index
        zm = None
        if W.kind == "S":
            e = P.lambda0[(i, 1)] * P.A0[(1, j)] + P.lambda0[(i, 2)] * P.A0[(2, j)]
            zm = ("const", e)
        return Contraction(zm, lambda m: _log_LS(P, i, j, m))
    if W.kind == "L":
        return Contraction(None, lambda m: _log_SL(P, V.index, W.index, m))
    k, l = V.index, W.index
    zm = ("power", P.A0[(k, l)]) if (V.kind == "S" and W.kind == "S") else None
    return Contraction(zm, lambda m: _log_SS(P, k, l, m))


def phi_generic(P: CaseParams, V, W, N: int) -> Tuple[Optional[Tuple[str, ExponentFn]], LaurentSeries]:
    V = V if isinstance(V, Vertex) else Vertex.parse(V)
    W = W if isinstance(W, Vertex) else Vertex.parse(W)
    c = phi(P, V, W)
    return c.zero_mode, c.series(N)


# ----------------------------------------------------------------------------
# structure functions and Delta


def f_log_coeff(s_param, i: int, j: int, m: int) -> Scalar:
    """Coefficient of z^m in log f_{i,j}(z)."""
    if m < 1:
        raise ValueError("m must be positive")
    lo, hi = min(i, j), max(i, j)
    if lo == 0:
        return ZERO
    s = E(s_param)
    t = _qm(R - 1, m) * _qm(R, m) * _qm(lo, m) * _qm(s - hi, m)
    if t.is_zero():
        return ZERO
    xm = x_minus_xinv()
    return -t * xm * xm / (_qm(1, m) * _qm(s, m) * m)


def f_struct(s_param, i: int, j: int, N: int) -> LaurentSeries:
    return series_from_log_coeffs(lambda m: f_log_coeff(s_param, i, j, m), N)


def _as_scalar(c) -> Scalar:
    if isinstance(c, Scalar):
        return c
    if isinstance(c, (int, Fraction)) and not isinstance(c, ExponentFn):
        return Scalar(c)
    return xpow(c)


def delta_rational(i: int, shift=ONE) -> FactoredRational:
    """Delta_i(shift * zeta)."""
    if i < 0:
        raise ValueError("Delta_i needs i >= 0")
    c = _as_scalar(shift)
    if c.is_zero():
        return FactoredRational(ONE)
    return FactoredRational(ONE, 0, {
        xpow(2 * R - i) * c: 1, xpow(i - 2 * R) * c: 1,
        xpow(i) * c: -1, xpow(-i) * c: -1,
    })


def delta_log_coeff(i: int, shift_exp, m: int) -> Scalar:
    """Coefficient of zeta^m in log Delta_i(x^shift zeta)."""
    a = E(shift_exp)
    return -(xpow((2 * R - i + a) * m) + xpow((i - 2 * R + a) * m)
             - xpow((i + a) * m) - xpow((a - i) * m)) / m


def delta_value(i: int, point) -> Scalar:
    """Delta_i at a scalar point."""
    return delta_rational(i, ONE).value_at(_as_scalar(point))


# ----------------------------------------------------------------------------
# contraction kernels f_{1,1}(zeta) phi_{Lk,Ll}(zeta)


@dataclass(frozen=True)
class Kernel:
    delta_type: int  # 0 means the constant 1
    shift: int

    def rational(self) -> FactoredRational:
        if self.delta_type == 0:
            return FactoredRational(ONE)
        return delta_rational(self.delta_type, xpow(self.shift))

    def describe(self) -> str:
        if self.delta_type == 0:
            return "1"
        return f"Delta_{self.delta_type}(x^{self.shift} zeta)"


def kernel(case, k: int, l: int) -> Kernel:
    case = CaseId.parse(case)
    if k < l:
        return Kernel(1, -1)
    if k > l:
        return Kernel(1, 1)
    if (case, k) in ((CaseId.CASE2, 3), (CaseId.CASE3, 2)):
        return Kernel(2, 0)
    return Kernel(0, 0)


def kernel_log_coeff(case, k: int, l: int, m: int) -> Scalar:
    K = kernel(case, k, l)
    if K.delta_type == 0:
        return ZERO
    return delta_log_coeff(K.delta_type, K.shift, m)


# ----------------------------------------------------------------------------
# monomials and currents


class Monomial:
    """Normal-ordered product of Lambda_a(x^k z); items sorted by (k, a)."""

    __slots__ = ("items", "_h")

    def __init__(self, items: Iterable[Tuple[int, object]] = ()):
        its = [(int(a), E(k)) for a, k in items]
        its.sort(key=lambda t: (t[1].okey(), t[0]))
        self.items: Tuple[Tuple[int, ExponentFn], ...] = tuple(its)
        self._h = hash(self.items)

    @classmethod
    def of(cls, *pairs) -> "Monomial":
        return cls(pairs)

    def __len__(self):
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def __eq__(self, other):
        return isinstance(other, Monomial) and self.items == other.items

    def __hash__(self):
        return self._h

    def shifted(self, e) -> "Monomial":
        e = E(e)
        if not e:
            return self
        return Monomial((a, k + e) for a, k in self.items)

    def relabel(self, perm: Dict[int, int]) -> "Monomial":
        return Monomial((perm[a], k) for a, k in self.items)

    def __mul__(self, other: "Monomial") -> "Monomial":
        return Monomial(self.items + other.items)

    def sort_key(self):
        return tuple((k.okey(), a) for a, k in self.items)

    def to_text(self) -> str:
        if not self.items:
            return "1"
        return ":" + " ".join(f"L{a}(x^{k.pretty()}z)" if k else f"L{a}(z)" for a, k in self.items) + ":"

    __str__ = to_text

    def __repr__(self):
        return f"Monomial({self.to_text()})"


UNIT = Monomial()


class Current:
    """Finite sum of weight * monomial."""

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[Tuple[Scalar, Monomial]] = ()):
        acc: Dict[Monomial, Scalar] = {}
        for w, M in terms:
            w = _as_weight(w)
            acc[M] = acc[M] + w if M in acc else w
        self.terms: Dict[Monomial, Scalar] = {M: w for M, w in acc.items() if not w.is_zero()}

    def __iter__(self):
        return iter(sorted(self.terms.items(), key=lambda t: t[0].sort_key()))

    def __len__(self):
        return len(self.terms)

    def weight(self, M: Monomial) -> Scalar:
        return self.terms.get(M, ZERO)

    def shifted(self, e) -> "Current":
        return Current((w, M.shifted(e)) for M, w in self.terms.items())

    def relabel(self, perm: Dict[int, int]) -> "Current":
        return Current((w, M.relabel(perm)) for M, w in self.terms.items())

    def degree(self) -> Optional[int]:
        ds = {len(M) for M in self.terms}
        return ds.pop() if len(ds) == 1 else None

    def __eq__(self, other):
        if not isinstance(other, Current):
            return NotImplemented
        keys = set(self.terms) | set(other.terms)
        return all(self.weight(k) == other.weight(k) for k in keys)

    def to_report(self) -> List[List[str]]:
        return [[M.to_text(), w.to_text()] for M, w in self]

    def __repr__(self):
        return "Current[" + " + ".join(f"({w.pretty()}){M}" for M, w in self) + "]"


def _as_weight(w) -> Scalar:
    return w if isinstance(w, Scalar) else Scalar(w)


PERM_2_TO_3 = {1: 3, 2: 1, 3: 2}
PERM_3_TO_2 = {v: k for k, v in PERM_2_TO_3.items()}


def _case2_T(i: int) -> Current:
    if i == 0:
        return Current([(ONE, UNIT)])
    if i == 1:
        return Current([(ONE, Monomial.of((1, 0))), (ONE, Monomial.of((2, 0))), (d_const(1), Monomial.of((3, 0)))])
    terms = []
    if i >= 2:
        terms.append((d_const(i - 2), Monomial([(1, -i + 1), (2, -i + 3)] + [(3, -i + 2 * j + 3) for j in range(1, i - 1)])))
    for k in (1, 2):
        terms.append((d_const(i - 1), Monomial([(k, -i + 1)] + [(3, -i + 2 * j + 1) for j in range(1, i)])))
    terms.append((d_const(i), Monomial([(3, -i + 2 * j - 1) for j in range(1, i + 1)])))
    return Current(terms)


def _case1_T(i: int) -> Current:
    if i == 0 or i == 3:
        return Current([(ONE, UNIT)])
    if i == 1:
        return Current([(ONE, Monomial.of((a, 0))) for a in (1, 2, 3)])
    if i == 2:
        return Current([(ONE, Monomial.of((a, -1), (b, 1))) for a, b in ((1, 2), (1, 3), (2, 3))])
    return Current()


def _case3_T(i: int) -> Current:
    # the Case 2 shape with the repeated generator (weight [r-1]) in the middle
    if i == 0:
        return Current([(ONE, UNIT)])
    if i == 1:
        return Current([(ONE, Monomial.of((1, 0))), (d_const(1), Monomial.of((2, 0))), (ONE, Monomial.of((3, 0)))])
    mid = lambda n, start: [(2, start + 2 * j) for j in range(n)]
    return Current([
        (d_const(i - 2), Monomial([(1, -i + 1)] + mid(i - 2, -i + 3) + [(3, i - 1)])),
        (d_const(i - 1), Monomial([(1, -i + 1)] + mid(i - 1, -i + 3))),
        (d_const(i - 1), Monomial(mid(i - 1, -i + 1) + [(3, i - 1)])),
        (d_const(i), Monomial(mid(i, -i + 1))),
    ])


CONSTRUCTIONS = ("ordered", "literal", "fusion")


def build_T(case, i: int, construction: str = "ordered") -> Current:
    """T_i(z) for the given case; T_0 is the unit.

    Case 3 offers three constructions:
      "ordered"  the Case 2 formula with generators kept in index order and
                 the weight-[r-1] generator Lambda_2 taking the repeated slot;
      "literal"  the Case 2 formula relabelled by (1,2,3) -> (3,1,2);
      "fusion"   T_i built by repeated fusion from T_1.
    "ordered" and "fusion" agree; "literal" does not satisfy the quadratic
    relations because the k < l kernel rule is not permutation invariant.
    """
    if construction not in CONSTRUCTIONS:
        raise ValueError(f"unknown construction {construction!r}")
    case = CaseId.parse(case)
    if i < 0:
        raise ValueError("i must be >= 0")
    if case is CaseId.CASE1:
        if i >= 3:
            raise ValueError("Case 1 has no independent T_i for i >= 3; "
                             "use verify_case1_truncation to check T_3 = 1 and T_i = 0 (i >= 4)")
        return _case1_T(i)
    if case is CaseId.CASE2:
        return _case2_T(i)
    if construction == "literal":
        return _case2_T(i).relabel(PERM_2_TO_3)
    if construction == "fusion":
        return fusion_chain(params(case), i)
    return _case3_T(i)


def dynkin_map(M: Monomial) -> Monomial:
    """Case 2 pattern -> Case 3 pattern: relabel 1->1, 2->3, 3->2 and then
    hand the labels out along the positions in increasing index order."""
    pos = [k for _, k in M.items]
    labs = sorted({1: 1, 2: 3, 3: 2}[a] for a, _ in M.items)
    return Monomial(zip(labs, pos))


def current_T(case, i: int, construction: str = "ordered") -> Current:
    """Like build_T but with the Case 1 truncation T_3 = 1, T_i = 0 (i >= 4)."""
    case = CaseId.parse(case)
    if case is CaseId.CASE1:
        return _case1_T(i)
    return build_T(case, i, construction)


def composite_monomial(kind: str, i: int, k: Optional[int] = None, case=CaseId.CASE2) -> Optional[Monomial]:
    """Composite currents of the fusion and exchange tables; None stands for the zero current."""
    if i < 1:
        raise ValueError("i must be >= 1")
    if kind == "L3":
        M = Monomial([(3, -i - 1 + 2 * l) for l in range(1, i + 1)])
    elif kind == "Lk3":
        if k not in (1, 2):
            raise ValueError("Lk3 needs k in {1, 2}")
        M = Monomial([(k, -i + 1)] + [(3, -i + 1 + 2 * l) for l in range(1, i)])
    elif kind == "L123":
        if i == 1:
            return None
        M = Monomial([(1, -i + 1), (2, -i + 3)] + [(3, -i + 3 + 2 * l) for l in range(1, i - 1)])
    else:
        raise ValueError(f"unknown composite kind {kind!r}")
    if CaseId.parse(case) is CaseId.CASE3:
        M = M.relabel(PERM_2_TO_3)
    return M


# ----------------------------------------------------------------------------
# pair rationals and the f_{1,1} ledger


class LedgerError(ValueError):
    pass


def f11_ledger(i: int, j: int) -> Tuple[Counter, FactoredRational]:
    """f_{i,j}(zeta) = prod_d f_{1,1}(x^d zeta) * (Delta_1 part), from the
    factorisation of f_{i,j} into f_{1,1} and Delta_1 factors."""
    if min(i, j) == 0:
        return Counter(), FactoredRational(ONE)
    i, j = min(i, j), max(i, j)
    shifts = Counter(2 * (k + l) - i - j - 2 for k in range(1, i + 1) for l in range(1, j + 1))
    rat = FactoredRational(ONE)
    for k in range(1, i + 1):
        for l in range(1, j):
            rat = rat / delta_rational(1, xpow(-i - 1 + 2 * k - j + 2 * l))
    return shifts, rat


def _ledger_cached(i, j, _cache={}):
    v = _cache.get((i, j))
    if v is None:
        v = f11_ledger(i, j)
        _cache[(i, j)] = v
    return v


def f_is_trivial(case, i: int, j: int) -> bool:
    s = params(case).s_param
    return min(i, j) == 0 or (s.is_constant() and s.constant() == max(i, j))


def pair_rational(case, M1: Monomial, M2: Monomial, i: int, j: int) -> FactoredRational:
    """f_{i,j}(zeta) * (contraction of M1(z1) with M2(z2)), zeta = z2/z1."""
    case = CaseId.parse(case)
    if not len(M1) or not len(M2):
        if not f_is_trivial(case, i, j):
            raise LedgerError(f"f_{{{i},{j}}} is not 1 but one side is the unit")
        return FactoredRational(ONE)
    if len(M1) != i or len(M2) != j:
        if f_is_trivial(case, i, j):
            raise LedgerError(f"monomial degrees ({len(M1)},{len(M2)}) do not match ({i},{j})")
    shifts, rat = _ledger_cached(i, j)
    seen = Counter()
    out = rat
    for a, ka in M1:
        for b, kb in M2:
            d = kb - ka
            if not d.is_integer():
                raise LedgerError(f"non-integer relative shift {d.pretty()}")
            d = int(d.constant())
            seen[d] += 1
            K = kernel(case, a, b)
            if K.delta_type:
                out = out * delta_rational(K.delta_type, xpow(K.shift + d))
    if seen != shifts:
        raise LedgerError(f"f_{{1,1}} ledger does not cancel: have {sorted(seen.elements())}, "
                          f"need {sorted(shifts.elements())}")
    return out


def current_product(case, A: Current, B: Current, i: int, j: int) -> Dict[Tuple[Monomial, Monomial], FactoredRational]:
    """Weighted pair rationals of f_{i,j}(z2/z1) A(z1) B(z2), keyed by monomial pair."""
    out = {}
    for M1, w1 in A:
        for M2, w2 in B:
            out[(M1, M2)] = pair_rational(case, M1, M2, i, j) * (w1 * w2)
    return out


# ----------------------------------------------------------------------------
# Case 1 truncation and the fusion chain

_CASE1_TRIPLE = ((1, -2), (2, 0), (3, 2))


def reduce_case1(M: Monomial) -> Monomial:
    """Remove sub-products :L1(x^{a-2}z) L2(x^a z) L3(x^{a+2}z): (each equals 1)."""
    items = list(M.items)
    changed = True
    while changed:
        changed = False
        for a, k in sorted(items, key=lambda t: (t[1].okey(), t[0])):
            if a != 2:
                continue
            need = [(1, k - 2), (3, k + 2)]
            if all(n in items for n in need):
                for n in need + [(2, k)]:
                    items.remove(n)
                changed = True
                break
    return Monomial(items)


def reduce_pattern(case, M: Monomial) -> Monomial:
    return reduce_case1(M) if CaseId.parse(case) is CaseId.CASE1 else M


def fusion_chain(P_or_case, i: int, _cache={}) -> Current:
    """T_i = (1/c) lim_{w -> x^-1 z} (1 - x^-1 z/w) f_{i-1,1}(x^{i-1}z/w) T_{i-1}(w) T_1(x^{i-1}z)."""
    P = P_or_case if isinstance(P_or_case, CaseParams) else params(P_or_case)
    case = P.case
    if i <= 1:
        return {CaseId.CASE1: _case1_T, CaseId.CASE2: _case2_T, CaseId.CASE3: _case3_T}[case](i)
    key = (case, i)
    if key in _cache:
        return _cache[key]
    prev = fusion_chain(P, i - 1)
    T1 = fusion_chain(P, 1)
    c_inv = ONE / c_const()
    terms = []
    for M1, w1 in prev:
        for M2, w2 in T1:
            if not len(M1):
                continue
            res = residue_limit(pair_rational(case, M1, M2, i - 1, 1), xpow(-i))
            if res.is_zero():
                continue
            M = reduce_pattern(case, M1.shifted(-1) * M2.shifted(i - 1))
            terms.append((res * w1 * w2 * c_inv, M))
    out = Current(terms)
    _cache[key] = out
    return out
