"""The beta -> 0 limit with q = x^{2r} fixed, beta = (r - 1)/r.

The expansions leave the exponent field (x^{e(r)} has to be expanded around
r = 1), so they are checked numerically on a ladder of beta values with
mpmath.  The Poisson structure coefficients themselves are exact Scalars in
the variable q.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import mpmath

from .model import f_log_coeff
from .scalar import ZERO, Scalar, c_const, eval_numeric, qint
from .verify import Report, Witness, _Checks, _finish

CONVENTIONS = ("q=x^2r", "q=x^-2r")


@dataclass
class PBParams:
    q0: float = 4.0
    betas: Sequence[float] = (1e-2, 1e-3, 1e-4)
    precision: int = 40
    imax: int = 3
    mmax: int = 8
    K: float = 10.0          # allowed relative error is K * beta
    min_order: float = 1.8
    convention: str = "q=x^2r"

    def __post_init__(self):
        if self.q0 <= 0 or self.q0 == 1:
            raise ValueError("q0 must be positive and different from 1")
        bs = list(self.betas)
        if not bs or any(b <= 0 or b >= 0.5 for b in bs):
            raise ValueError("each beta must lie in (0, 1/2)")
        if any(a <= b for a, b in zip(bs, bs[1:])):
            raise ValueError("betas must be strictly decreasing")
        if self.convention not in CONVENTIONS:
            raise ValueError(f"convention must be one of {CONVENTIONS}")


def poisson_coeff(i: int, j: int, m: int) -> Scalar:
    """[Min(i,j) m/2]_q [(Max(i,j)/2 - 1) m]_q / [m]_q, with x read as q."""
    if i < 1 or j < 1:
        raise ValueError("i, j must be >= 1")
    if m == 0:
        raise ValueError("m must be nonzero")
    lo, hi = min(i, j), max(i, j)
    a = qint(Fraction(lo * m, 2))
    b = qint(Fraction(hi * m, 2) - m)
    if a.is_zero() or b.is_zero():
        return ZERO
    return a * b / qint(m)


def sample_point(q0, beta, convention: str = "q=x^2r") -> Tuple[Fraction, mpmath.mpf]:
    """(r, x) for one beta; r is exact."""
    r = 1 / (1 - Fraction(str(beta)))
    sgn = 1 if convention == "q=x^2r" else -1
    x = mpmath.power(mpmath.mpf(q0), sgn / (2 * mpmath.mpf(r.numerator) / r.denominator))
    return r, x


def f_coefficients(i: int, j: int, mmax: int, x, r: Fraction, precision: int) -> List:
    """Taylor coefficients f^0..f^mmax of f_{i,j}(z) with s = r + 1 at a numeric point."""
    from .exponent import R
    s = R + 1
    with mpmath.workdps(precision):
        logs = [mpmath.mpf(0)] + [eval_numeric(f_log_coeff(s, i, j, m), x, r, precision) for m in range(1, mmax + 1)]
        # exp of a power series: n a_n = sum_k k l_k a_{n-k}
        a = [mpmath.mpf(1)]
        for n in range(1, mmax + 1):
            acc = mpmath.mpf(0)
            for k in range(1, n + 1):
                acc += k * logs[k] * a[n - k]
            a.append(acc / n)
        return a


def _fit_order(betas: Sequence[float], residuals: Sequence) -> Optional[float]:
    pts = [(math.log(b), math.log(float(abs(v)))) for b, v in zip(betas, residuals) if v != 0]
    if len(pts) < 2:
        return None
    n = len(pts)
    mx = sum(p[0] for p in pts) / n
    my = sum(p[1] for p in pts) / n
    sxx = sum((p[0] - mx) ** 2 for p in pts)
    return sum((p[0] - mx) * (p[1] - my) for p in pts) / sxx


def _num(v) -> str:
    return mpmath.nstr(v, 12)


def verify_classical_limit(p: Optional[PBParams] = None) -> Report:
    t0 = time.perf_counter()
    p = p or PBParams()
    rep = Report("classical", None, {"q0": p.q0, "betas": ",".join(repr(b) for b in p.betas),
                                     "imax": p.imax, "mmax": p.mmax, "convention": p.convention})
    ch = _Checks()
    mpmath.mp.dps = p.precision
    logq = mpmath.log(mpmath.mpf(p.q0))
    q = mpmath.mpf(p.q0)
    floor = mpmath.mpf(10) ** (-(p.precision - 8))

    # c(r, x) = -beta log q + O(beta^2)
    ratios, res = [], []
    for b in p.betas:
        r, x = sample_point(p.q0, b, p.convention)
        cval = eval_numeric(c_const(), x, r, p.precision)
        ratios.append(cval / (b * logq))
        res.append(cval + b * logq)
    bad = next((k for k, (b, v) in enumerate(zip(p.betas, ratios)) if abs(v + 1) > p.K * b), None)
    w = None
    if bad is not None:
        w = Witness("c(r,x)/(beta log q)", f"beta={p.betas[bad]}", _num(ratios[bad]), "-1",
                    f"|ratio + 1| exceeds {p.K} beta")
    order = _fit_order(p.betas, res)
    rep.data["c"] = {"ratios": [_num(v) for v in ratios], "residuals": [_num(v) for v in res],
                     "order": None if order is None else round(order, 3)}
    ch.flag("c(r,x)/(beta log q) -> -1 within K beta", bad is None, w, count=len(p.betas))
    ch.flag(f"c residual order >= {p.min_order}", order is not None and order >= p.min_order,
            Witness("c(r,x) + beta log q", "fitted order", str(order and round(order, 3)), f">= {p.min_order}"),
            count=len(p.betas))

    # first-order coefficients of f_{i,j}
    table = {}
    worst = {True: None, False: None}   # keyed by "target vanishes"
    counts = {True: 0, False: 0}
    k_needed = {True: mpmath.mpf(0), False: mpmath.mpf(0)}
    orders_bad = None
    low_precision = False
    for i in range(1, p.imax + 1):
        for j in range(1, p.imax + 1):
            targets = []
            for m in range(1, p.mmax + 1):
                C = poisson_coeff(i, j, m)
                targets.append(eval_numeric(C, q, 1, p.precision) * (q - 1 / q) if not C.is_zero() else mpmath.mpf(0))
            resid = {m: [] for m in range(1, p.mmax + 1)}
            for b in p.betas:
                r, x = sample_point(p.q0, b, p.convention)
                fc = f_coefficients(i, j, p.mmax, x, r, p.precision)
                for m in range(1, p.mmax + 1):
                    got = fc[m] / (b * logq)
                    want = targets[m - 1]
                    zero = want == 0
                    err = abs(got - want) / (1 if zero else abs(want))
                    counts[zero] += 1
                    k_needed[zero] = max(k_needed[zero], err / b)
                    resid[m].append(fc[m] - b * logq * want)
                    if abs(resid[m][-1]) < floor:
                        low_precision = True
                    if err > p.K * b and worst[zero] is None:
                        kind = "absolute" if zero else "relative"
                        worst[zero] = Witness(f"f_{i}{j}", f"z^{m}, beta={b}", _num(got), _num(want),
                                              f"{kind} error {_num(err)} > {p.K} beta")
            for m in range(1, p.mmax + 1):
                o = _fit_order(p.betas, resid[m])
                table[f"{i},{j},{m}"] = None if o is None else round(o, 3)
                if o is not None and o < p.min_order and orders_bad is None:
                    orders_bad = Witness(f"f_{i}{j}", f"z^{m}", str(round(o, 3)), f">= {p.min_order}",
                                         "fitted order of the first-order residual")
    n = p.imax * p.imax * p.mmax
    ch.flag("f_ij first-order coefficients match (q - 1/q) C_ij, relative error within K beta",
            worst[False] is None, worst[False], count=counts[False])
    ch.flag("f_ij first-order coefficients vanish where C_ij = 0, absolute error within K beta",
            worst[True] is None, worst[True], count=counts[True])
    ch.flag(f"f_ij residual order >= {p.min_order}", orders_bad is None, orders_bad, count=n)
    rep.data["f_orders"] = table
    rep.data["K_needed"] = {"nonzero": _num(k_needed[False]), "vanishing": _num(k_needed[True])}
    if low_precision:
        rep.notes.append("some residuals are below the working precision; raise precision")

    # exact properties of the Poisson coefficients
    ch.scan("C_12 = C_21 = C_22 = 0 exactly",
            ((f"C_{i}{j}", f"m={m}", poisson_coeff(i, j, m), ZERO)
             for i, j in ((1, 2), (2, 1), (2, 2)) for m in list(range(1, p.mmax + 1)) + [-1, -2]))
    ch.scan("C_ij symmetric in (i, j) and odd in m",
            ((f"C_{i}{j}", f"m={m}", poisson_coeff(i, j, m), -poisson_coeff(j, i, -m))
             for i in range(1, p.imax + 1) for j in range(1, p.imax + 1) for m in range(1, p.mmax + 1)))
    ch.scan("C_11 = -[m/2]^2/[m]",
            (("C_11", f"m={m}", poisson_coeff(1, 1, m), -qint(Fraction(m, 2)) ** 2 / qint(m))
             for m in range(1, p.mmax + 1)))
    return _finish(rep, ch, t0)
