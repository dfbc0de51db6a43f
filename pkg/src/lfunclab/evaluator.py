"""Critical-strip evaluation for degree-1 and factorable degree-2 streams.

zeta and Hurwitz zeta are computed by the Euler-Maclaurin development

    zeta(s, a) = sum_{n<N} (n+a)^{-s} + (N+a)^{1-s}/(s-1) + (N+a)^{-s}/2
                 + sum_{k=1}^{K} B_{2k}/(2k)! (s)_{2k-1} (N+a)^{-s-2k+1} + R,

with the direct sum cut at N = max(20, ceil(2|Im s|)) and corrections
through B_12, which keeps |R| under 1e-12 in double precision for the
heights this library touches.  Dirichlet L-values go through the
character decomposition L(s, chi) = q^{-s} sum_a chi(a) zeta(s, a/q),
and the degree-2 field zeta functions through their zeta * L(chi) split.

The rotated critical-line function hardy_Z multiplies L(1/2 + it) by the
phase of the completed-function prefactor so that self-dual streams give
a real signal whose sign changes bracket zeros.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import digamma, loggamma

from .bernoulli import bernoulli_number
from .coefficients import CoefficientStream, LSeriesDescriptor
from .errors import (InternalConsistencyError, PoleError, PreconditionError,
                     UnsupportedEvaluation)

_EM_ORDER = 6  # Bernoulli corrections through B_12
_MIN_TOL = 1e-14


@lru_cache(maxsize=1)
def _em_b_over_fact() -> tuple[float, ...]:
    return tuple(float(bernoulli_number(2 * k)) / math.factorial(2 * k)
                 for k in range(1, _EM_ORDER + 1))


def _em_tail(s: complex, base: complex) -> complex:
    """Euler-Maclaurin closure for sum_{n >= N} (n+a)^{-s}; base = N + a."""
    out = base ** (1 - s) / (s - 1) + 0.5 * base ** (-s)
    rising = s
    power = base ** (-s - 1)
    inv2 = 1.0 / (base * base)
    for k, bf in enumerate(_em_b_over_fact(), start=1):
        out += bf * rising * power
        if k < _EM_ORDER:
            rising *= (s + 2 * k - 1) * (s + 2 * k)
            power *= inv2
    return out


def _em_error_estimate(s: complex, base: float) -> float:
    """Magnitude of the first omitted Bernoulli correction (order B_14)."""
    rising = 1.0
    for j in range(2 * _EM_ORDER + 1):
        rising *= abs(s + j)
    b14 = abs(float(bernoulli_number(2 * _EM_ORDER + 2))) / math.factorial(2 * _EM_ORDER + 2)
    return 2.0 * b14 * rising * base ** (-(s.real + 2 * _EM_ORDER + 1))


def hurwitz_zeta(s: complex, a: float, tol: float = 1e-12) -> complex:
    """zeta(s, a) = sum_{n>=0} (n+a)^{-s}, continued to s != 1; 0 < a <= 1."""
    s = complex(s)
    if abs(s - 1) < 1e-300:
        raise PoleError("zeta(s, a) has its pole at s = 1")
    if not 0 < a <= 1:
        raise PreconditionError(f"Hurwitz parameter must satisfy 0 < a <= 1, got {a}")
    if tol < _MIN_TOL:
        warnings.warn(f"tolerance {tol} below double-precision floor; clamped to {_MIN_TOL}")
        tol = _MIN_TOL
    n_direct = max(20, math.ceil(2 * abs(s.imag)))
    while _em_error_estimate(s, n_direct + a) > 0.25 * tol and n_direct < 10_000_000:
        n_direct *= 2
    ns = np.arange(n_direct, dtype=float) + a
    direct = complex(np.exp(-s * np.log(ns)).sum())
    return direct + _em_tail(s, n_direct + a)


def zeta_value(s: complex, tol: float = 1e-12) -> complex:
    """Riemann zeta via Euler-Maclaurin; absolute error <= tol for |Im s| <= 500."""
    return hurwitz_zeta(s, 1.0, tol)


def hurwitz_zeta_vec(s_values: np.ndarray, a: float = 1.0) -> np.ndarray:
    """Vectorized zeta(s, a) over an array of s, blocked by height.

    Same truncation rule as the scalar path; used by the vertical-line
    quadrature caches where hundreds of thousands of points share a line.
    """
    s_values = np.asarray(s_values, dtype=complex)
    flat = s_values.ravel()
    out = np.empty(flat.shape, dtype=complex)
    order = np.argsort(np.abs(flat.imag), kind="stable")
    block = 8192
    for start in range(0, len(order), block):
        idx = order[start:start + block]
        s_blk = flat[idx]
        t_max = float(np.abs(s_blk.imag).max(initial=0.0))
        n_direct = max(20, math.ceil(2 * t_max))
        acc = np.zeros(len(idx), dtype=complex)
        chunk = max(1, int(4_000_000 // max(len(idx), 1)))
        for n0 in range(0, n_direct, chunk):
            ns = np.arange(n0, min(n0 + chunk, n_direct), dtype=float) + a
            acc += np.exp(-np.multiply.outer(s_blk, np.log(ns))).sum(axis=1)
        base = complex(n_direct + a)
        acc += base ** (1 - s_blk) / (s_blk - 1) + 0.5 * base ** (-s_blk)
        rising = s_blk.copy()
        power = base ** (-s_blk - 1)
        for k, bf in enumerate(_em_b_over_fact(), start=1):
            acc += bf * rising * power
            if k < _EM_ORDER:
                rising = rising * (s_blk + 2 * k - 1) * (s_blk + 2 * k)
                power = power / (base * base)
        out[idx] = acc
    return out.reshape(s_values.shape)


# ----------------------------------------------------------------------
# L-values
# ----------------------------------------------------------------------

def _dirichlet_l(q: int, values: tuple[complex, ...], s: complex, tol: float) -> complex:
    s = complex(s)
    if abs(s - 1) < 1e-300:
        # entire at s = 1: the Hurwitz poles cancel against the character sum,
        # leaving L(1, chi) = -(1/q) sum_a chi(a) psi(a/q)
        return -sum(values[a - 1] * digamma(a / q) for a in range(1, q)) / q
    per_term = tol / max(q, 1)
    total = 0j
    for a in range(1, q):
        chi = values[a - 1]
        if chi != 0:
            total += chi * hurwitz_zeta(s, a / q, per_term)
    return q ** (-s) * total


def l_value(stream: CoefficientStream, s: complex, tol: float = 1e-12) -> complex:
    """L(s) for zeta, Dirichlet, field-zeta, and product streams.

    Degree >= 2 streams without a known factorization (ramanujan_tau)
    are rejected; use the coefficient-side kernels for those.
    """
    s = complex(s)
    if stream.kind == "zeta":
        if abs(s - 1) < 1e-300:
            raise PoleError("zeta has its pole at s = 1")
        return zeta_value(s, tol)
    if stream.kind == "dirichlet":
        q, values = stream.params
        return _dirichlet_l(q, values, s, tol)
    if stream.kind == "dedekind_quadratic":
        if abs(s - 1) < 1e-300:
            raise PoleError(f"{stream.label} has its pole at s = 1")
        (d,) = stream.params
        q = abs(d)
        from .coefficients import _kronecker_table
        table = _kronecker_table(d)
        values = tuple(complex(table[a]) for a in range(1, q))
        return zeta_value(s, tol / 2) * _dirichlet_l(q, values, s, tol / 2)
    if stream.kind == "product":
        a, b = stream.params
        return l_value(a, s, tol / 2) * l_value(b, s, tol / 2)
    raise UnsupportedEvaluation(
        f"{stream.label}: no critical-strip evaluator for non-factorable degree "
        f"{stream.descriptor.degree_m}; use coefficient-side operations")


def l_value_vec(stream: CoefficientStream, s_values: np.ndarray) -> np.ndarray:
    """Vectorized l_value on an array of s (same dispatch, blocked Hurwitz)."""
    s_values = np.asarray(s_values, dtype=complex)
    if stream.kind == "zeta":
        return hurwitz_zeta_vec(s_values, 1.0)
    if stream.kind == "dirichlet":
        q, values = stream.params
        total = np.zeros(s_values.shape, dtype=complex)
        for a in range(1, q):
            chi = values[a - 1]
            if chi != 0:
                total += chi * hurwitz_zeta_vec(s_values, a / q)
        return np.asarray(q, dtype=float) ** (-s_values) * total
    if stream.kind == "dedekind_quadratic":
        (d,) = stream.params
        from .coefficients import make_stream
        chi = make_stream("dirichlet_quadratic", d, n_max=2 * abs(d) + 2)
        return l_value_vec_zeta_cached(s_values) * l_value_vec(chi, s_values)
    if stream.kind == "product":
        a, b = stream.params
        return l_value_vec(a, s_values) * l_value_vec(b, s_values)
    raise UnsupportedEvaluation(f"{stream.label}: no critical-strip evaluator")


def l_value_vec_zeta_cached(s_values: np.ndarray) -> np.ndarray:
    return hurwitz_zeta_vec(s_values, 1.0)


def central_value(stream: CoefficientStream, override: complex | None = None) -> complex:
    """L(1/2); falls back to the supplied override for non-evaluable streams."""
    try:
        return l_value(stream, 0.5)
    except UnsupportedEvaluation:
        if override is not None:
            return override
        raise UnsupportedEvaluation(
            f"{stream.label} is not evaluable at 1/2; supply an override central value")


# ----------------------------------------------------------------------
# Completed function and Hardy Z
# ----------------------------------------------------------------------

def completed_log_prefactor(descriptor: LSeriesDescriptor, s: complex) -> complex:
    """log of D^{s/2} pi^{-ms/2} prod_j Gamma((s+c_j)/2), up to a real constant.

    scipy's loggamma is continuous on Re > 0, so the phase needs no
    unwrapping as long as every (s + c_j)/2 stays in the right half-plane.
    """
    s = complex(s)
    out = 0.5 * s * math.log(descriptor.conductor_D) \
        - 0.5 * descriptor.degree_m * s * math.log(math.pi)
    for c in descriptor.gamma_params:
        out += loggamma((s + c) / 2)
    return out


def completed_value(stream: CoefficientStream, s: complex, tol: float = 1e-12) -> complex:
    """D^{s/2} * Gamma-factor * L(s), up to a fixed positive constant."""
    return np.exp(completed_log_prefactor(stream.descriptor, s)) * l_value(stream, s, tol)


def hardy_Z(stream: CoefficientStream, t: float, tol: float = 1e-12) -> float:
    """Phase-rotated critical-line value, real for self-dual streams.

    Z(t) = e^{i theta(t)} L(1/2 + it) where theta is the argument of the
    completed-function prefactor, continuous with theta(0) = 0.
    """
    if not stream.descriptor.self_dual:
        raise UnsupportedEvaluation(f"{stream.label} is not self-dual; hardy_Z undefined")
    if abs(t) > 500:
        raise PreconditionError(f"|t| = {abs(t)} exceeds the supported ceiling 500")
    s = complex(0.5, t)
    theta = completed_log_prefactor(stream.descriptor, s).imag
    value = complex(math.cos(theta), math.sin(theta)) * l_value(stream, s, tol)
    resid = abs(value.imag)
    if resid > 1e-6 * max(1.0, abs(value.real)) and resid > 1e-6:
        raise InternalConsistencyError(
            f"{stream.label}: rotated value at t = {t} has imaginary residue {resid:.3e}")
    if resid > 1e-8 and resid > 1e-8 * abs(value.real):
        warnings.warn(f"{stream.label}: imaginary residue {resid:.2e} at t = {t}")
    return value.real


def hardy_Z_vec(stream: CoefficientStream, ts: np.ndarray) -> np.ndarray:
    """Vectorized hardy_Z used by the zero scan."""
    ts = np.asarray(ts, dtype=float)
    s = 0.5 + 1j * ts
    desc = stream.descriptor
    logpre = 0.5 * s * math.log(desc.conductor_D) - 0.5 * desc.degree_m * s * math.log(math.pi)
    for c in desc.gamma_params:
        logpre = logpre + loggamma((s + c) / 2)
    values = np.exp(1j * logpre.imag) * l_value_vec(stream, s)
    return values.real


# ----------------------------------------------------------------------
# Zero location
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class ZeroRecord:
    """One bracketed, bisected ordinate of a critical-line zero."""

    ordinate: float
    bracket: tuple[float, float]
    refined_tol: float
    descriptor_label: str


def find_zeros(stream: CoefficientStream, t_lo: float, t_hi: float,
               tol: float = 1e-9, step: float = 0.05) -> list[ZeroRecord]:
    """Scan hardy_Z at fixed step, bisect each sign change to width <= tol.

    Simple zeros separated by more than the step are all found; closer
    pairs are an accepted blind spot of the grid.
    """
    if not (0 <= t_lo < t_hi <= 500):
        raise PreconditionError(f"need 0 <= t_lo < t_hi <= 500, got [{t_lo}, {t_hi}]")
    if tol < 1e-10:
        raise PreconditionError(f"tolerance {tol} below the supported floor 1e-10")
    n_steps = int(math.ceil((t_hi - t_lo) / step))
    grid = np.linspace(t_lo, t_hi, n_steps + 1)
    z = hardy_Z_vec(stream, grid)
    records = []
    for i in range(n_steps):
        a, b = float(grid[i]), float(grid[i + 1])
        za, zb = float(z[i]), float(z[i + 1])
        if za == 0.0:
            records.append(ZeroRecord(a, (a, a), tol, stream.label))
            continue
        if za * zb >= 0:
            continue
        while b - a > tol:
            mid = 0.5 * (a + b)
            zm = hardy_Z(stream, mid)
            if zm == 0.0:
                a = b = mid
                break
            if za * zm < 0:
                b, zb = mid, zm
            else:
                a, za = mid, zm
        records.append(ZeroRecord(0.5 * (a + b), (a, b), tol, stream.label))
    return sorted(records, key=lambda r: r.ordinate)
