"""Closed-form coefficient tables.

Each function here transcribes a closed summation formula directly, producing
a CoeffTable to be compared against the definitional oracle.  Nothing in this
module applies an operator; it only enumerates index sequences and multiplies
linear factors.

Conventions shared with the oracle:

* a word (A_1, ..., A_r) has degree r + sum(A) = sum of (A_i + 1);
* "forward prefix sums" are sum_{j<=i} (A_j + 1) for i = 1..r;
* "reverse prefix sums" are the same on the reversed word;
* empty products are 1.

Two of the bilinear-family formulas circulate with a prefactor that is too
small by a factor of L^2; the `corrected` flag (default True) multiplies that
factor back in.  See the verifier's proportionality verdict, which measures
the ratio empirically instead of assuming it.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product as iter_product
from math import comb, factorial
from typing import Iterator

from .algebra import (
    BasisKey,
    CoeffTable,
    MWord,
    pair_key,
    plain_key,
    withf_key,
)
from .rationals import PoleError, Rational, gen_binomial


def word_degree(word: MWord) -> int:
    """len(word) + sum(word), i.e. sum of (A_i + 1)."""
    return len(word) + sum(word)


def words_of_degree(d: int) -> Iterator[MWord]:
    """All words (A_1,...,A_r) with sum(A_i + 1) = d, as compositions of d."""
    if d == 0:
        yield ()
        return
    for first in range(d):
        for rest in words_of_degree(d - first - 1):
            yield (first,) + rest


def enumerate_words(total: int, slots: int, with_R: bool) -> Iterator[tuple]:
    """All tuples of `slots` words (optionally preceded by a nonnegative R)
    whose degrees, plus R, sum to `total`."""
    r_range = range(total + 1) if with_R else (None,)
    for R in r_range:
        remaining = total - (R or 0)
        for degs in _split(remaining, slots):
            pools = [list(words_of_degree(d)) for d in degs]
            for combo in iter_product(*pools):
                yield ((R,) + combo) if with_R else combo


def _split(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for tail in _split(total - head, parts - 1):
            yield (head,) + tail


def fwd_prefix_sums(word: MWord) -> list[int]:
    """[sum_{j<=i}(A_j+1) for i=1..r]."""
    out, acc = [], 0
    for a in word:
        acc += a + 1
        out.append(acc)
    return out


def rev_prefix_sums(word: MWord) -> list[int]:
    return fwd_prefix_sums(tuple(reversed(word)))


def _inv_fact_sq(word: MWord) -> Fraction:
    out = Fraction(1)
    for a in word:
        out /= factorial(a) ** 2
    return out


def _prod(factors) -> Fraction:
    out = Fraction(1)
    for f in factors:
        out *= f
    return out


def _skip_prod(base: Rational, lo: int, hi: int, skip: int, sign: int = 1) -> Fraction:
    """Product over n in [lo, hi] of (base + sign*n), with the n = skip factor
    removed symbolically (the removable-singularity cancellation)."""
    base = Fraction(base)
    return _prod(base + sign * n for n in range(lo, hi + 1) if n != skip)


def sab_coeff(A: MWord, B: tuple[int, ...], M: int, L: Rational, N: int) -> tuple[int, Fraction]:
    """The single D/P-word expansion term: returns (rho exponent, coefficient)
    of S applied to rho^N.  The coefficient is zero exactly when some prefix
    of B overtakes the available rho degree."""
    r = len(A)
    if len(B) != r + 1:
        raise ValueError("B must be one longer than A")
    if r + sum(B) != M:
        raise ValueError("sequences must satisfy r + sum(B) = M")
    L = Fraction(L)
    exponent = N + sum(A) - sum(B)
    coeff = Fraction(1)
    sum_a = 0
    sum_b_prev = 0
    for i, b in enumerate(B):
        if i >= 1:
            sum_a += A[i - 1]
        coeff *= factorial(b) ** 2
        coeff *= gen_binomial(N + sum_a - sum_b_prev, b)
        coeff *= gen_binomial(L - N - 2 * i - sum_a - sum_b_prev, b)
        sum_b_prev += b
    return exponent, coeff


def sab_f_coeff(A: MWord, B: tuple[int, ...], M: int, L: Rational, N: int, R: int) -> Fraction:
    """Coefficient of rho^(R+N+sumA-sumB) f^(R) in the word expansion applied
    to rho^N f: an alternating binomial average of the plain coefficients at
    shifted rho powers N+l."""
    r = len(A)
    if len(B) != r + 1 or r + sum(B) != M:
        raise ValueError("sequences must satisfy r + sum(B) = M")
    L = Fraction(L)
    total = Fraction(0)
    for l in range(R + 1):
        term = Fraction((-1) ** (R - l) * comb(R, l))
        sum_a = 0
        sum_b_prev = 0
        for i, b in enumerate(B):
            if i >= 1:
                sum_a += A[i - 1]
            term *= factorial(b) ** 2
            term *= gen_binomial(N + l + sum_a - sum_b_prev, b)
            term *= gen_binomial(L - N - l - 2 * i - sum_a - sum_b_prev, b)
            sum_b_prev += b
        total += term
    return total / factorial(R)


def _dml_core(M: int, L: Fraction, N: int, word: MWord, extra_2exp: int, extra_sign: int) -> Fraction:
    """Shared coefficient core of the composed-operator expansions on rho^N:
    sign * 2^N * 1/(A!)^2 * M! * prod(L-M-n) * two reverse-prefix factors.

    At integer L a vanishing reverse-prefix denominator L-2M+p (= 0 at
    L = 2M-p) always has the matching vanishing numerator factor L-M-n at
    n = M-p; the pair is cancelled symbolically.  An uncancelled zero
    numerator factor makes the whole coefficient zero.
    """
    r = len(word)
    coeff = Fraction((-1) ** (M - N - r + extra_sign) * 2 ** (N + extra_2exp))
    coeff *= _inv_fact_sq(word)
    coeff *= factorial(M)
    numerators = [L - M - n for n in range(M)]
    denominators: list[Fraction] = []
    for p in rev_prefix_sums(word):
        denominators.append(Fraction(p))
        denominators.append(L - 2 * M + p)
    for d in denominators:
        if d == 0:
            numerators.remove(Fraction(0))  # guaranteed present, see docstring
        else:
            coeff /= d
    return coeff * _prod(numerators)


def cf_DML_PN(M: int, L: Rational, N: int) -> CoeffTable:
    """Closed form for the M-fold composition applied to rho^N u at rho=0,
    over plain words of degree M - N."""
    L = Fraction(L)
    entries: dict[BasisKey, Fraction] = {}
    if 0 <= N <= M:
        for word in words_of_degree(M - N):
            c = _dml_core(M, L, N, word, 0, 0)
            if c:
                entries[plain_key(word)] = c
    return CoeffTable(entries, {"M": M, "L": L, "N": N}, "closed-form")


def cf_DML_PN_f(M: int, L: Rational, N: int) -> CoeffTable:
    """Closed form with the formal f inserted: keys carry the word outside
    f^(R), over (R, word) with R + degree = M - N."""
    L = Fraction(L)
    entries: dict[BasisKey, Fraction] = {}
    if 0 <= N <= M:
        for R in range(M - N + 1):
            for word in words_of_degree(M - N - R):
                c = _dml_core(M, L, N, word, R, R) / factorial(R)
                if c:
                    entries[withf_key(word, R, ())] = c
    return CoeffTable(entries, {"M": M, "L": L, "N": N}, "closed-form")


def cf_P2k(k: int) -> CoeffTable:
    """Juhl's formula: GJMS coefficients over words of degree k."""
    if k < 1:
        raise ValueError("k must be positive")
    entries: dict[BasisKey, Fraction] = {}
    for word in words_of_degree(k):
        c = Fraction(factorial(k - 1) ** 2) * _inv_fact_sq(word)
        # both prefix products stop one factor short of the full degree k
        for p in fwd_prefix_sums(word)[:-1]:
            c /= p
        for p in rev_prefix_sums(word)[:-1]:
            c /= p
        entries[plain_key(word)] = c
    return CoeffTable(entries, {"k": k}, "closed-form")


def cf_bilinear_general(
    U: int,
    V: int,
    L: Rational,
    Ks: Rational,
    Kd: Rational,
    Ns: int,
    Nd: int,
    corrected: bool = True,
) -> CoeffTable:
    """Closed form of the generalized bilinear family on rho^Ns u (x) rho^Nd v.

    With corrected=False this is the literal printed prefactor, which is the
    corrected one divided by L^2; the corrected table is the one that matches
    the definitional sum exactly.
    """
    L, Ks, Kd = Fraction(L), Fraction(Ks), Fraction(Kd)
    params = {"U": U, "V": V, "L": L, "Kstar": Ks, "Kdia": Kd, "Nstar": Ns, "Ndia": Nd}
    entries: dict[BasisKey, Fraction] = {}
    total = U - Ns - Nd
    if total >= 0:
        base = Fraction((-1) ** (Ns + Nd) * 2 ** (Ns + Nd))
        # (Ks+Ns) and (Kd+Nd) cancel against the n=Ns / n=Nd factors of the
        # K-products; the corrected L-part is prod_{n=0..U, n!=Ns}(L-n) times
        # L/(L-Nd), with the Nd=0 case cancelling symbolically as well.
        base *= _skip_prod(Ks, 0, U, Ns)
        base *= _skip_prod(Kd, 0, U, Nd)
        base *= _skip_prod(L, 0, U, Ns, sign=-1)
        if Nd != 0:
            if L == Nd:
                raise PoleError(f"L = {L} hits the L - Ndia pole")
            base *= L / (L - Nd)
        base *= _prod(L + n for n in range(V))
        if not corrected:
            if L == 0:
                raise PoleError("printed prefactor has a pole at L = 0")
            base /= L * L
        for As, Ad, Ap in enumerate_words(total, 3, with_R=False):
            c = base * _inv_fact_sq(As) * _inv_fact_sq(Ad) * _inv_fact_sq(Ap)
            for p in fwd_prefix_sums(As):
                c /= (Ks + Ns + p) * (L - Ns - p)
            for p in fwd_prefix_sums(Ad):
                c /= (Kd + Nd + p) * (L - Nd - p)
            for p in rev_prefix_sums(Ap):
                c /= p * (L + V - p)
            if c:
                entries[pair_key(Ap, As, Ad)] = c
    return CoeffTable(entries, params, "closed-form")


def cf_D2k(k: int, n_param: Rational, corrected: bool = True) -> CoeffTable:
    """Closed form of the order-2k bilinear operator: the general closed form
    specialized to (U,V,K,K,N,N) = (k,0,0,0,0,0) and scaled by 1/k!."""
    if k < 1:
        raise ValueError("k must be positive")
    n_param = Fraction(n_param)
    L_k = n_param / 6 + Fraction(2 * k, 3)
    t = cf_bilinear_general(k, 0, L_k, 0, 0, 0, 0, corrected=corrected)
    entries = {key: c / factorial(k) for key, c in t.entries.items()}
    return CoeffTable(entries, {"n": n_param, "k": k}, "closed-form")


def cf_linear_general(U: int, V: int, L: Rational, K: Rational, N: int) -> CoeffTable:
    """Closed form of the generalized linear family on rho^N u with the formal
    f inserted between layers."""
    L, K = Fraction(L), Fraction(K)
    params = {"U": U, "V": V, "L": L, "K": K, "N": N}
    entries: dict[BasisKey, Fraction] = {}
    total = U - N
    if total >= 0:
        base = Fraction((-1) ** N * 2**N)
        base *= _skip_prod(K, 0, U, N)
        # (L+U-N) cancels against the n = U-N factor of prod_{n=0..U}(L+n)
        base *= _skip_prod(L, 0, U, U - N)
        base *= _prod(L + n for n in range(V))
        for R, Ap, A in enumerate_words(total, 2, with_R=True):
            c = base * Fraction((-1) ** R * 2**R, factorial(R))
            c *= _inv_fact_sq(A) * _inv_fact_sq(Ap)
            for p in fwd_prefix_sums(A):
                c /= (K + N + p) * (L + U - N - p)
            for p in rev_prefix_sums(Ap):
                c /= p * (L + V - p)
            if c:
                entries[withf_key(Ap, R, A)] = c
    return CoeffTable(entries, params, "closed-form")


def cf_D2kI(k: int, ell: Rational) -> CoeffTable:
    """Closed form of the order-2k linear operator with inserted f: the
    general linear closed form at (U,V,L,K,N) = (k,k,ell,0,0)."""
    if k < 1:
        raise ValueError("k must be positive")
    ell = Fraction(ell)
    t = cf_linear_general(k, k, ell, 0, 0)
    return CoeffTable(t.entries, {"ell": ell, "k": k}, "closed-form")
