"""Bernoulli numbers, Bernoulli polynomials, and periodic Bernoulli tails.

The Euler-Maclaurin evaluator and the kernel tail integrals both need
B_{2k} and the scaled periodic polynomials P_k(x) = B_k({x})/k!.
Everything here is generated once from the exact Fraction recurrence.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache


@lru_cache(maxsize=None)
def bernoulli_number(n: int) -> Fraction:
    """Exact Bernoulli number B_n (B_1 = -1/2 convention)."""
    if n == 0:
        return Fraction(1)
    # B_n = -1/(n+1) * sum_{k=0}^{n-1} C(n+1, k) B_k
    total = Fraction(0)
    binom = 1
    for k in range(n):
        total += binom * bernoulli_number(k)
        binom = binom * (n + 1 - k) // (k + 1)
    return -total / (n + 1)


@lru_cache(maxsize=None)
def bernoulli_poly_coeffs(n: int) -> tuple[float, ...]:
    """Coefficients of B_n(x) in increasing powers of x, as floats."""
    # B_n(x) = sum_k C(n,k) B_{n-k} x^k
    coeffs = []
    binom = 1
    for k in range(n + 1):
        coeffs.append(float(binom * bernoulli_number(n - k)))
        binom = binom * (n - k) // (k + 1)
    return tuple(coeffs)


def periodic_bernoulli(n: int, x: float) -> float:
    """B_n({x}), the 1-periodic Bernoulli polynomial."""
    u = x - int(x)
    if u < 0.0:
        u += 1.0
    value = 0.0
    for c in reversed(bernoulli_poly_coeffs(n)):
        value = value * u + c
    return value


@lru_cache(maxsize=None)
def _factorial(n: int) -> int:
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def scaled_periodic(n: int, x: float) -> float:
    """P_n(x) = B_n({x})/n!, the natural repeated antiderivative of {x}-1/2."""
    return periodic_bernoulli(n, x) / _factorial(n)


@lru_cache(maxsize=None)
def scaled_periodic_bound(n: int) -> float:
    """sup_x |B_n({x})|/n!  (coarse: sampled max with 2x safety)."""
    grid = [k / 512.0 for k in range(513)]
    m = max(abs(scaled_periodic(n, u)) for u in grid)
    return 2.0 * m


def periodic_tail_integral(k: int, z: complex, x: float, depth: int = 8) -> tuple[complex, float]:
    """integral_x^inf P_k({t}) t^z dt by repeated integration by parts.

    Returns (value, error_bound).  Each step uses
      int_x^inf P_k t^z dt = -P_{k+1}(x) x^z - z int_x^inf P_{k+1} t^{z-1} dt,
    valid because P_{k+1}' = P_k between integers and P_{k+1} is continuous
    for k+1 >= 2.  The final remainder is bounded crudely by the sup of
    P_{k+depth} against the convergent power integral; that requires
    Re z - depth < -1, which every caller satisfies by a wide margin.
    """
    if x <= 0:
        raise ValueError("periodic tail requires x > 0")
    value = 0.0 + 0.0j
    coeff = 1.0 + 0.0j
    kk, zz = k, z
    for _ in range(depth):
        value += coeff * (-scaled_periodic(kk + 1, x)) * x**zz
        coeff *= -zz
        kk += 1
        zz -= 1
    re_z = zz.real if isinstance(zz, complex) else float(zz)
    if re_z >= -1.0:
        raise ValueError("tail integral does not converge absolutely at this depth")
    bound = abs(coeff) * scaled_periodic_bound(kk) * x ** (re_z + 1.0) / (-re_z - 1.0)
    return value, bound
