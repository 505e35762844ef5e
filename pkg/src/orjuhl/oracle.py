"""Definitional (oracle) expansion of the operator calculus.

The building block is R_j = -2 rho d^2/drho^2 + 2 j d/drho + Mtilde(rho) with
the generating function Mtilde(rho) = sum_N (1/(N!)^2) (-rho/2)^N M_{2(N+1)}.
Everything else is composition of R-operators, formal products, and the rho=0
evaluation.

Pruning: a term at rho power q with b R-applications still to come can never
reach rho^0 if q > b, since each R lowers the rho degree by at most one.  Such
terms are dropped eagerly; a nonnegative ``margin`` widens the bound for the
soundness cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from .algebra import (
    PAIR,
    PLAIN,
    WITHF,
    BasisKey,
    CoeffTable,
    FormalExpr,
    add,
    attach_M,
    inject_f,
    pair_product,
    plain_key,
    scale,
    table_add,
    table_scale,
    unit_plain,
)
from .rationals import Rational, gamma_ratio, pochhammer


class BudgetExhausted(RuntimeError):
    """apply_R was invoked with no remaining operator applications."""


@dataclass
class BudgetedExpr:
    expr: FormalExpr
    remaining_ops: int
    margin: int = 0


def apply_D(j: Rational, e: FormalExpr) -> FormalExpr:
    """The split piece D_j = -rho d^2 + j d acting on rho powers, with the
    three-term rule on f-carrying keys:

        D_j(rho^p f^(R)) = p(j+1-p) rho^(p-1) f^(R)
                         + (j-2p) rho^p f^(R+1)
                         - rho^(p+1) f^(R+2).
    """
    j = Fraction(j)
    out: dict[tuple[int, BasisKey], Fraction] = {}

    def emit(p: int, key: BasisKey, c: Fraction) -> None:
        if c:
            s = out.get((p, key), Fraction(0)) + c
            if s:
                out[(p, key)] = s
            else:
                del out[(p, key)]

    for (p, key), c in e.terms.items():
        if p >= 1:
            emit(p - 1, key, c * p * (j + 1 - p))
        if key.f_order is not None:
            bump1 = BasisKey(key.outer, key.f_order + 1, key.left, key.right)
            bump2 = BasisKey(key.outer, key.f_order + 2, key.left, key.right)
            emit(p, bump1, c * (j - 2 * p))
            emit(p + 1, bump2, -c)
    return FormalExpr(out)


def apply_P(k: int, e: FormalExpr) -> FormalExpr:
    """Multiplication by rho^k."""
    if k < 0:
        raise ValueError("rho power must be nonnegative")
    return FormalExpr({(p + k, key): c for (p, key), c in e.terms.items()})


def apply_Mtilde(be: BudgetedExpr, slot: str) -> FormalExpr:
    """Mtilde(rho) expansion, truncated where no remaining R-application could
    ever bring the resulting rho power back to zero."""
    bound = be.remaining_ops + be.margin
    out = FormalExpr()
    for (p, key), c in be.expr.terms.items():
        piece = FormalExpr({(p, key): c})
        n = 0
        while p + n <= bound:
            coeff = Fraction((-1) ** n, 2**n * factorial(n) ** 2)
            out = add(out, apply_P(n, attach_M(scale(piece, coeff), n, slot)))
            n += 1
    return out


def _prune(e: FormalExpr, bound: int) -> FormalExpr:
    return FormalExpr({(p, k): c for (p, k), c in e.terms.items() if p <= bound})


def apply_R(j: Rational, be: BudgetedExpr, slot: str) -> BudgetedExpr:
    """One application of R_j = 2 D_j + Mtilde(rho); consumes one unit of budget."""
    if be.remaining_ops < 1:
        raise BudgetExhausted("no R-applications remaining")
    after = BudgetedExpr(be.expr, be.remaining_ops - 1, be.margin)
    result = add(scale(apply_D(j, be.expr), 2), apply_Mtilde(after, slot))
    return BudgetedExpr(_prune(result, after.remaining_ops + be.margin), after.remaining_ops, be.margin)


def compose_D(
    M: int,
    L: Rational,
    e: FormalExpr,
    slot: str,
    extra_budget: int = 0,
    margin: int = 0,
) -> FormalExpr:
    """D~_{M,L} = R_{L+1-2M} ... R_{L-3} R_{L-1}, rightmost factor applied first.

    ``extra_budget`` counts R-applications that will still act on the result
    later (outer layers); it keeps the pruning bound sound across phases.
    """
    L = Fraction(L)
    be = BudgetedExpr(e, M + extra_budget, margin)
    for i in range(M):
        be = apply_R(L - 1 - 2 * i, be, slot)
    return be.expr


def eval_rho0(e: FormalExpr, params: dict | None = None, provenance: str = "oracle") -> CoeffTable:
    """Keep exactly the rho^0 terms."""
    return CoeffTable(
        {key: c for (p, key), c in e.terms.items() if p == 0},
        params or {},
        provenance,
    )


def oracle_P2k(k: int, margin: int = 0) -> CoeffTable:
    """GJMS operator P_{2k} = R_{1-k} ... R_{k-3} R_{k-1} (u) at rho=0."""
    if k < 1:
        raise ValueError("k must be positive")
    expr = compose_D(k, Fraction(k), unit_plain(), "inner", margin=margin)
    return eval_rho0(expr, {"k": k})


def multinomial(k: int, r: int, s: int, t: int) -> int:
    return factorial(k) // (factorial(r) * factorial(s) * factorial(t))


def a_coeff(k: int, r: int, s: int, t: int, L_k: Rational) -> Fraction:
    """Multinomial times the Gamma-ratio triple, all with integer offsets
    anchored at Gamma(L_k - k) and Gamma(L_k)."""
    return (
        multinomial(k, r, s, t)
        * gamma_ratio(L_k - k, k - r)
        * gamma_ratio(L_k, -s)
        * gamma_ratio(L_k, -t)
    )


def b_coeff(k: int, r: int, s: int, ell: Rational) -> Fraction:
    return comb(k, s) * pochhammer(ell, s) * pochhammer(ell, r)


def oracle_D2k(k: int, n_param: Rational, margin: int = 0) -> CoeffTable:
    """Curved Ovsienko-Redou operator on u (x) v via its defining triple sum of
    R-compositions, with L_k = n/6 + 2k/3."""
    if k < 1:
        raise ValueError("k must be positive")
    n_param = Fraction(n_param)
    L_k = n_param / 6 + Fraction(2 * k, 3)
    total = CoeffTable({}, {"n": n_param, "k": k})
    for r in range(k + 1):
        for s in range(k + 1 - r):
            t = k - r - s
            a = a_coeff(k, r, s, t, L_k)
            eu = compose_D(s, L_k, unit_plain(), "inner", extra_budget=r, margin=margin)
            ev = compose_D(t, L_k, unit_plain(), "inner", extra_budget=r, margin=margin)
            prod = _prune(pair_product(eu, ev), r + margin)
            outer = compose_D(r, -L_k + 2 * r, prod, "outer", margin=margin)
            total = table_add(total, table_scale(eval_rho0(outer), a))
    total.params = {"n": n_param, "k": k}
    return total


def oracle_D2kI(k: int, ell: Rational, margin: int = 0) -> CoeffTable:
    """Linear analogue with an inserted formal scalar f of weight -2*ell."""
    if k < 1:
        raise ValueError("k must be positive")
    ell = Fraction(ell)
    total = CoeffTable({}, {"ell": ell, "k": k})
    for s in range(k + 1):
        r = k - s
        b = b_coeff(k, r, s, ell)
        inner = compose_D(s, k + ell, unit_plain(), "inner", extra_budget=r, margin=margin)
        expr = _prune(inject_f(inner), r + margin)
        outer = compose_D(r, k - ell - 2 * s, expr, "outer", margin=margin)
        total = table_add(total, table_scale(eval_rho0(outer), b))
    total.params = {"ell": ell, "k": k}
    return total


def oracle_bilinear_general(
    U: int,
    V: int,
    L: Rational,
    Ks: Rational,
    Kd: Rational,
    Ns: int,
    Nd: int,
    margin: int = 0,
) -> CoeffTable:
    """Generalized bilinear family: the triple sum over M*+Mdia+M' = U of
    Gamma-ratio prefactors times composed operators on rho^Ns u (x) rho^Nd v."""
    L, Ks, Kd = Fraction(L), Fraction(Ks), Fraction(Kd)
    params = {"U": U, "V": V, "L": L, "Kstar": Ks, "Kdia": Kd, "Nstar": Ns, "Ndia": Nd}
    total = CoeffTable({}, params)
    for Ms in range(U + 1):
        for Md in range(U + 1 - Ms):
            Mp = U - Ms - Md
            pref = (
                gamma_ratio(Ks + Ms + 1, U - Ms)
                * gamma_ratio(Kd + Md + 1, U - Md)
                / factorial(Mp)
                * gamma_ratio(L - U, U - Ms)
                * gamma_ratio(L, -Md)
                * gamma_ratio(L, V - Mp)
            )
            eu = compose_D(Ms, L - Ks, unit_plain(Ns), "inner", extra_budget=Mp, margin=margin)
            ev = compose_D(Md, L - Kd, unit_plain(Nd), "inner", extra_budget=Mp, margin=margin)
            prod = _prune(pair_product(eu, ev), Mp + margin)
            outer = compose_D(Mp, -L - V + 2 * Mp, prod, "outer", margin=margin)
            total = table_add(total, table_scale(eval_rho0(outer), pref))
    total.params = params
    return total


def oracle_linear_general(
    U: int,
    V: int,
    L: Rational,
    K: Rational,
    N: int,
    margin: int = 0,
) -> CoeffTable:
    """Generalized linear family: sum over M+M' = U with f injected between
    the inner and outer composition layers, acting on rho^N u."""
    L, K = Fraction(L), Fraction(K)
    params = {"U": U, "V": V, "L": L, "K": K, "N": N}
    total = CoeffTable({}, params)
    for M in range(U + 1):
        Mp = U - M
        pref = (
            gamma_ratio(K + M + 1, U - M)
            / factorial(Mp)
            * pochhammer(L, Mp)
            * gamma_ratio(L, V - Mp)
        )
        inner = compose_D(M, L - K + U, unit_plain(N), "inner", extra_budget=Mp, margin=margin)
        expr = _prune(inject_f(inner), Mp + margin)
        outer = compose_D(Mp, -L - V + 2 * Mp, expr, "outer", margin=margin)
        total = table_add(total, table_scale(eval_rho0(outer), pref))
    total.params = params
    return total


def oracle_DML_PN(M: int, L: Rational, N: int, margin: int = 0) -> CoeffTable:
    """D_{M,L} o P_N (u): compose M R-operators onto rho^N u and take rho=0."""
    expr = compose_D(M, L, unit_plain(N), "inner", margin=margin)
    return eval_rho0(expr, {"M": M, "L": Fraction(L), "N": N})


def oracle_DML_PN_f(M: int, L: Rational, N: int, margin: int = 0) -> CoeffTable:
    """D_{M,L} o P_N (f u): same composition with the formal f present."""
    expr = compose_D(M, L, inject_f(unit_plain(N)), "outer", margin=margin)
    return eval_rho0(expr, {"M": M, "L": Fraction(L), "N": N})


def expand_S_AB(A: tuple[int, ...], B: tuple[int, ...], L: Rational, N: int) -> FormalExpr:
    """Literal application of the D/P word S_{A,B,M,L} to rho^N.

    B has length len(A)+1; the operator sequence is B[0] D's, P_{A[0]},
    B[1] D's, ..., P_{A[-1]}, B[-1] D's, with the D at overall position m
    (1-based, counting P's too) carrying index L - (2m - 1).  Returned as a
    plain expression on the empty word (no M-symbols attached).
    """
    if len(B) != len(A) + 1:
        raise ValueError("B must be one longer than A")
    L = Fraction(L)
    e = unit_plain(N)
    pos = 0
    for i, b in enumerate(B):
        if i > 0:
            e = apply_P(A[i - 1], e)
            pos += 1
        for _ in range(b):
            pos += 1
            e = apply_D(L - (2 * pos - 1), e)
    return e


def expand_S_AB_f(A: tuple[int, ...], B: tuple[int, ...], L: Rational, N: int) -> FormalExpr:
    """Same word applied to rho^N f, tracking f-derivative orders."""
    if len(B) != len(A) + 1:
        raise ValueError("B must be one longer than A")
    L = Fraction(L)
    e = inject_f(unit_plain(N))
    pos = 0
    for i, b in enumerate(B):
        if i > 0:
            e = apply_P(A[i - 1], e)
            pos += 1
        for _ in range(b):
            pos += 1
            e = apply_D(L - (2 * pos - 1), e)
    return e
