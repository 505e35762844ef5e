"""Exact rational scaffolding: rising factorials, Gamma ratios with integer
offset, generalized binomial coefficients, and deterministic rational sampling.

Every scalar in this package is a ``fractions.Fraction``; nothing here is ever
evaluated in floating point.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Callable, Mapping, Union

Rational = Fraction

# Named map from indeterminate label to its sampled/assigned value.
ParamPoint = Mapping[str, Union[Fraction, int]]


class PoleError(ZeroDivisionError):
    """A reciprocal product hit a zero factor (bad sample point)."""


class SampleExhausted(RuntimeError):
    """sample_rational ran out of retries against its pole predicate."""


def pochhammer(a: Fraction | int, m: int) -> Fraction:
    """Rising factorial (a)_m = a (a+1) ... (a+m-1); empty product is 1."""
    if m < 0:
        raise ValueError(f"pochhammer order must be nonnegative, got {m}")
    out = Fraction(1)
    a = Fraction(a)
    for k in range(m):
        out *= a + k
    return out


def gamma_ratio(x: Fraction | int, m: int) -> Fraction:
    """Gamma(x+m) / Gamma(x) for integer offset m, without evaluating Gamma.

    For m >= 0 this is pochhammer(x, m); for m < 0 it is 1/pochhammer(x+m, -m)
    and raises PoleError when a factor of the reciprocal product vanishes.
    """
    if m >= 0:
        return pochhammer(x, m)
    denom = pochhammer(Fraction(x) + m, -m)
    if denom == 0:
        raise PoleError(f"gamma_ratio({x}, {m}) hits a pole")
    return 1 / denom


def gen_binomial(x: Fraction | int, b: int) -> Fraction:
    """Generalized binomial coefficient C(x, b) = x(x-1)...(x-b+1) / b!."""
    if b < 0:
        raise ValueError(f"binomial lower index must be nonnegative, got {b}")
    out = Fraction(1)
    x = Fraction(x)
    for i in range(b):
        out *= x - i
    for i in range(2, b + 1):
        out /= i
    return out


def sample_rational(
    stream_seed: int,
    index: int,
    pole_predicate: Callable[[Fraction], bool] | None = None,
    *,
    max_retries: int = 1000,
    num_bound: int = 10**6,
    den_bound: int = 10**3,
) -> Fraction:
    """Deterministic pseudo-random rational with numerator in [-num_bound,
    num_bound] and denominator in [1, den_bound].

    The (stream_seed, index) pair fully determines the value; resamples within
    the same stream until pole_predicate is false, raising SampleExhausted
    after max_retries draws.
    """
    # String seeding keeps the stream stable across Python versions.
    rng = random.Random(f"orjuhl:{stream_seed}:{index}")
    for _ in range(max_retries):
        value = Fraction(rng.randint(-num_bound, num_bound), rng.randint(1, den_bound))
        if pole_predicate is None or not pole_predicate(value):
            return value
    raise SampleExhausted(
        f"no pole-free sample after {max_retries} retries (seed={stream_seed}, index={index})"
    )


def is_integer(x: Fraction) -> bool:
    return x.denominator == 1


def non_integer_predicate(x: Fraction) -> bool:
    """Pole predicate rejecting integers (covers every integer-offset linear
    factor appearing in the closed forms)."""
    return is_integer(x)
