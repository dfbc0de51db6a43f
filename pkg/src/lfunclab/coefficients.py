"""Dirichlet coefficient streams and their structural invariants.

A stream bundles a lazy-but-memoized coefficient prefix a_1..a_{n_max}
with the invariants of the underlying L-function: degree m, conductor D,
residue kappa at s=1, Gamma-factor shift parameters, self-duality.

Built-in kinds
--------------
zeta                  a_n = 1;  m=1, D=1, kappa=1
dirichlet(q, values)  primitive character given by its value table
dirichlet_quadratic(d)  a_n = Kronecker symbol (d|n);  m=1, D=|d|, entire
dedekind_quadratic(d)   a_n = sum_{e|n} (d|e)  (ideal counts of Q(sqrt d));
                        m=2, D=|d|, pole with residue L(1, chi_d)
ramanujan_tau         a_n = tau(n)/n^{11/2} from the weight-12 eta power
product(A, B)         Dirichlet convolution; degree adds, conductor multiplies
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import CoefficientShortfall, PreconditionError, UsageError

DEFAULT_N_MAX = 10_000


# ----------------------------------------------------------------------
# Kronecker symbol
# ----------------------------------------------------------------------

def _is_squarefree(m: int) -> bool:
    m = abs(m)
    if m % 4 == 0:
        return False
    p = 3
    while p * p <= m:
        if m % (p * p) == 0:
            return False
        p += 2
    return True


def fundamental_discriminant_failure(d: int) -> str | None:
    """None if d is a fundamental discriminant, else the failed condition."""
    if d == 0:
        return "d = 0 is not a discriminant"
    if d % 4 == 1:
        if not _is_squarefree(d):
            return f"d = {d} is 1 mod 4 but not squarefree"
        return None
    if d % 4 == 0:
        k = d // 4
        if k % 4 not in (2, 3):
            return f"d = {d} is 0 mod 4 but d/4 = {k} is {k % 4} mod 4 (need 2 or 3)"
        if not _is_squarefree(k):
            return f"d = {d} is 0 mod 4 but d/4 = {k} is not squarefree"
        return None
    return f"d = {d} is {d % 4} mod 4 (need 0 or 1)"


def _jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a|n) for odd n >= 1."""
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def kronecker_symbol(d: int, n: int) -> int:
    """Kronecker symbol (d|n) for fundamental d and n >= 1.

    Completely multiplicative in n, with period |d|; this is the real
    primitive character attached to the quadratic field of discriminant d.
    """
    reason = fundamental_discriminant_failure(d)
    if reason is not None:
        raise PreconditionError(f"not a fundamental discriminant: {reason}")
    if n < 1:
        raise PreconditionError(f"n must be a positive integer, got {n}")
    m = n
    v2 = 0
    while m % 2 == 0:
        m //= 2
        v2 += 1
    result = 1
    if v2:
        if d % 2 == 0:
            return 0
        result = 1 if d % 8 in (1, 7) else -1
        if v2 % 2 == 0:
            result = 1
    return result * _jacobi(d, m)


@lru_cache(maxsize=64)
def _kronecker_table(d: int) -> tuple[int, ...]:
    """(d|r) for r = 0..|d|-1; (d|n) = table[n mod |d|]."""
    period = abs(d)
    return tuple(kronecker_symbol(d, r) if r else kronecker_symbol(d, period)
                 for r in range(period))


# ----------------------------------------------------------------------
# Descriptor and stream
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class LSeriesDescriptor:
    """Structural invariants of an L-function of degree m over Q."""

    label: str
    degree_m: int
    conductor_D: int
    residue_kappa: complex
    gamma_params: tuple[complex, ...]
    self_dual: bool
    has_pole: bool

    def __post_init__(self):
        if self.degree_m < 1 or self.conductor_D < 1:
            raise PreconditionError("degree and conductor must be positive")
        if len(self.gamma_params) != self.degree_m:
            raise PreconditionError(
                f"{self.label}: {len(self.gamma_params)} Gamma parameters for degree {self.degree_m}")
        if any(complex(c).real < -1e-12 for c in self.gamma_params):
            raise PreconditionError(f"{self.label}: Gamma shift with negative real part")
        if self.has_pole != (self.residue_kappa != 0):
            raise PreconditionError(f"{self.label}: has_pole inconsistent with residue")

    @property
    def analytic_conductor(self) -> float:
        """D * prod_j (1 + |c_j|)."""
        out = float(self.conductor_D)
        for c in self.gamma_params:
            out *= 1.0 + abs(c)
        return out


class CoefficientStream:
    """Immutable memoized coefficient prefix plus its descriptor.

    The prefix is built once at construction (safe to share across
    threads afterwards); ``coeff`` is a pure function of n.
    """

    def __init__(self, descriptor: LSeriesDescriptor, kind: str, params: tuple,
                 prefix: np.ndarray, ramanujan_verified: bool,
                 real_coefficients: bool):
        prefix = np.asarray(prefix, dtype=complex)
        prefix.setflags(write=False)
        self.descriptor = descriptor
        self.kind = kind
        self.params = params
        self._prefix = prefix
        self.n_max = len(prefix) - 1
        self.ramanujan_verified = ramanujan_verified
        self.real_coefficients = real_coefficients

    def coeff(self, n: int) -> complex:
        if n < 1:
            raise PreconditionError(f"coefficient index must be >= 1, got {n}")
        if n > self.n_max:
            raise CoefficientShortfall(
                f"{self.label}: coefficient a_{n} requested but the stream was "
                f"built with n_max = {self.n_max} (short by {n - self.n_max})")
        return complex(self._prefix[n])

    def coeffs_upto(self, n: int) -> np.ndarray:
        """Read-only view of (a_1, ..., a_n)."""
        if n > self.n_max:
            raise CoefficientShortfall(
                f"{self.label}: prefix to n = {n} requested but n_max = {self.n_max} "
                f"(short by {n - self.n_max})")
        return self._prefix[1:n + 1]

    @property
    def label(self) -> str:
        return self.descriptor.label

    @property
    def cache_key(self) -> str:
        return f"{self.label}#n{self.n_max}"

    def __repr__(self):
        return f"CoefficientStream({self.label}, n_max={self.n_max})"


def residue_of(stream: CoefficientStream) -> complex:
    """Residue of the stream's L-function at s = 1 (0 when entire)."""
    return stream.descriptor.residue_kappa


# ----------------------------------------------------------------------
# Character tables
# ----------------------------------------------------------------------

def _validate_character(q: int, values: Sequence[complex]) -> list[complex]:
    if q < 2:
        raise PreconditionError(f"character modulus must be >= 2, got {q}")
    if len(values) != q - 1:
        raise PreconditionError(
            f"character table must list values at a = 1..{q - 1}, got {len(values)} entries")
    table = [0j] + [complex(v) for v in values]
    for a in range(1, q):
        if math.gcd(a, q) == 1:
            if abs(abs(table[a]) - 1.0) > 1e-9:
                raise PreconditionError(f"character value at a = {a} must lie on the unit circle")
        elif table[a] != 0:
            raise PreconditionError(f"character value at a = {a} must be 0 (gcd(a, q) > 1)")
    if table[1] != 1:
        raise PreconditionError("character must satisfy chi(1) = 1")
    units = [a for a in range(1, q) if math.gcd(a, q) == 1]
    for a in units:
        for b in units:
            if abs(table[a * b % q] - table[a] * table[b]) > 1e-9:
                raise PreconditionError(
                    f"table is not multiplicative: chi({a})chi({b}) != chi({a * b % q})")
    # primitivity: chi must not be trivial on the kernel of any reduction mod f < q
    for f in range(1, q):
        if q % f:
            continue
        if all(abs(table[a] - 1.0) < 1e-9 for a in units if a % f == 1):
            raise PreconditionError(
                f"character mod {q} is imprimitive: trivial on residues 1 mod {f}")
    return table[1:]


def load_character_file(path: str | Path) -> tuple[int, list[complex]]:
    """Read a character table: first line q, then q-1 lines "a value".

    Values may be -1, 0, 1 or any Python complex literal.
    """
    lines = [ln.strip() for ln in Path(path).read_text().splitlines() if ln.strip()]
    if not lines:
        raise UsageError(f"empty character file {path}")
    try:
        q = int(lines[0])
    except ValueError as exc:
        raise UsageError(f"first line of {path} must be the modulus q") from exc
    if len(lines) != q:
        raise UsageError(f"{path}: expected {q - 1} value lines after q = {q}, got {len(lines) - 1}")
    values: list[complex] = [0j] * (q - 1)
    seen = set()
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise UsageError(f"{path}: malformed line {ln!r} (need 'a value')")
        a = int(parts[0])
        if not (1 <= a <= q - 1) or a in seen:
            raise UsageError(f"{path}: residue {a} out of range or repeated")
        seen.add(a)
        values[a - 1] = complex(parts[1].replace("i", "j"))
    if len(seen) != q - 1:
        raise UsageError(f"{path}: table does not cover all residues 1..{q - 1}")
    return q, values


# ----------------------------------------------------------------------
# Ramanujan tau
# ----------------------------------------------------------------------

@lru_cache(maxsize=2)
def _tau_exact(n_max: int) -> tuple[int, ...]:
    """tau(1..n_max) via the cube of the eta-series raised to the 8th power.

    eta^3 = sum_{j>=0} (-1)^j (2j+1) q^{j(j+1)/2} (Jacobi), so the weight-12
    coefficient array is eight sparse convolutions with exact integers.
    """
    sparse = []
    j = 0
    while j * (j + 1) // 2 < n_max:
        sparse.append((j * (j + 1) // 2, (-1) ** j * (2 * j + 1)))
        j += 1
    arr = np.zeros(n_max, dtype=object)
    arr[0] = 1
    for _ in range(8):
        out = np.zeros(n_max, dtype=object)
        for e, c in sparse:
            out[e:] += arr[: n_max - e] * c
        arr = out
    return tuple(int(v) for v in arr)


def ramanujan_tau_exact(n: int) -> int:
    """Exact integer tau(n) (small n; the prefix builder handles scans)."""
    return _tau_exact(n)[n - 1]


# ----------------------------------------------------------------------
# Stream constructors
# ----------------------------------------------------------------------

def _zeta_stream(n_max: int) -> CoefficientStream:
    desc = LSeriesDescriptor("zeta", 1, 1, 1.0 + 0j, (0.0 + 0j,), True, True)
    return CoefficientStream(desc, "zeta", (), np.ones(n_max + 1), True, True)


def _dirichlet_from_table(q: int, values: Sequence[complex], n_max: int,
                          label: str | None = None) -> CoefficientStream:
    values = _validate_character(q, values)
    parity = values[q - 2] if q > 1 else 1  # chi(-1) = chi(q-1)
    if abs(parity - 1) < 1e-9:
        gamma: tuple[complex, ...] = (0.0 + 0j,)
    elif abs(parity + 1) < 1e-9:
        gamma = (1.0 + 0j,)
    else:
        raise PreconditionError("chi(-1) must be +1 or -1")
    real = all(abs(v.imag) < 1e-12 for v in values)
    desc = LSeriesDescriptor(label or f"dirichlet({q})", 1, q, 0j, gamma, real, False)
    prefix = np.zeros(n_max + 1, dtype=complex)
    for n in range(1, n_max + 1):
        r = n % q
        prefix[n] = values[r - 1] if r else 0
    return CoefficientStream(desc, "dirichlet", (q, tuple(values)), prefix, True, real)


def _dirichlet_quadratic_stream(d: int, n_max: int) -> CoefficientStream:
    reason = fundamental_discriminant_failure(d)
    if reason is not None:
        raise PreconditionError(f"not a fundamental discriminant: {reason}")
    if d == 1:
        raise PreconditionError("d = 1 gives the trivial character; use the zeta stream")
    table = _kronecker_table(d)
    period = abs(d)
    gamma: tuple[complex, ...] = (0j,) if d > 0 else (1.0 + 0j,)
    desc = LSeriesDescriptor(f"dirichlet_quadratic({d})", 1, period, 0j, gamma, True, False)
    ns = np.arange(n_max + 1)
    prefix = np.asarray(table, dtype=float)[ns % period].astype(complex)
    prefix[0] = 0
    values = tuple(complex(table[a]) for a in range(1, period))
    return CoefficientStream(desc, "dirichlet", (period, values), prefix, True, True)


def _dedekind_quadratic_stream(d: int, n_max: int) -> CoefficientStream:
    reason = fundamental_discriminant_failure(d)
    if reason is not None:
        raise PreconditionError(f"not a fundamental discriminant: {reason}")
    if d == 1:
        raise PreconditionError("d = 1 is the rational field; use the zeta stream")
    table = _kronecker_table(d)
    period = abs(d)
    prefix = np.zeros(n_max + 1)
    for e in range(1, n_max + 1):
        c = table[e % period]
        if c:
            prefix[e::e] += c
    prefix[0] = 0
    # two real Gamma factors for a real field, a split complex one otherwise
    gamma: tuple[complex, ...] = (0j, 0j) if d > 0 else (0j, 1.0 + 0j)
    from . import evaluator  # deferred: evaluator imports this module at top level
    chi = _dirichlet_quadratic_stream(d, min(n_max, 4 * period + 8))
    kappa = evaluator.l_value(chi, 1.0, tol=1e-13)
    desc = LSeriesDescriptor(f"dedekind_quadratic({d})", 2, period, kappa, gamma, True, True)
    return CoefficientStream(desc, "dedekind_quadratic", (d,), prefix, True, True)


def _ramanujan_tau_stream(n_max: int) -> CoefficientStream:
    taus = _tau_exact(n_max)
    ns = np.arange(1, n_max + 1, dtype=float)
    prefix = np.zeros(n_max + 1)
    prefix[1:] = np.array([float(t) for t in taus]) / ns ** 5.5
    desc = LSeriesDescriptor("ramanujan_tau", 2, 1, 0j, (5.5 + 0j, 6.5 + 0j), True, False)
    return CoefficientStream(desc, "ramanujan_tau", (), prefix, True, True)


def _product_stream(a: CoefficientStream, b: CoefficientStream,
                    n_max: int | None) -> CoefficientStream:
    limit = min(a.n_max, b.n_max)
    if n_max is not None:
        if n_max > limit:
            raise PreconditionError(
                f"product truncation {n_max} exceeds factor prefixes "
                f"({a.label}: {a.n_max}, {b.label}: {b.n_max})")
        limit = n_max
    if a.descriptor.has_pole and b.descriptor.has_pole:
        raise PreconditionError("product of two pole-bearing streams has a double pole at s = 1")
    ca, cb = a._prefix[:limit + 1], b._prefix[:limit + 1]
    prefix = np.zeros(limit + 1, dtype=complex)
    # divisor-style sieve: O(N log N), exact for integer-valued factors
    for e in range(1, limit + 1):
        ae = ca[e]
        if ae != 0:
            prefix[e::e] += ae * cb[1:limit // e + 1]
    kappa = 0j
    has_pole = a.descriptor.has_pole or b.descriptor.has_pole
    if has_pole:
        from . import evaluator
        polar, other = (a, b) if a.descriptor.has_pole else (b, a)
        kappa = polar.descriptor.residue_kappa * evaluator.l_value(other, 1.0, tol=1e-13)
    desc = LSeriesDescriptor(
        f"product({a.label},{b.label})",
        a.descriptor.degree_m + b.descriptor.degree_m,
        a.descriptor.conductor_D * b.descriptor.conductor_D,
        kappa,
        a.descriptor.gamma_params + b.descriptor.gamma_params,
        a.descriptor.self_dual and b.descriptor.self_dual,
        has_pole)
    return CoefficientStream(desc, "product", (a, b), prefix,
                             a.ramanujan_verified and b.ramanujan_verified,
                             a.real_coefficients and b.real_coefficients)


def make_stream(kind: str, *args, n_max: int = DEFAULT_N_MAX) -> CoefficientStream:
    """Construct a built-in coefficient stream.

    kind and positional arguments:
      "zeta"
      "dirichlet", q, values        value table on a = 1..q-1
      "dirichlet_quadratic", d      fundamental discriminant
      "dedekind_quadratic", d       fundamental discriminant, |d| > 1
      "ramanujan_tau"
      "product", streamA, streamB
    """
    if kind == "zeta":
        return _zeta_stream(n_max)
    if kind == "dirichlet":
        q, values = args
        return _dirichlet_from_table(q, values, n_max)
    if kind == "dirichlet_quadratic":
        (d,) = args
        return _dirichlet_quadratic_stream(d, n_max)
    if kind == "dedekind_quadratic":
        (d,) = args
        return _dedekind_quadratic_stream(d, n_max)
    if kind == "ramanujan_tau":
        return _ramanujan_tau_stream(n_max)
    if kind == "product":
        a, b = args
        explicit = n_max if n_max != DEFAULT_N_MAX else None
        return _product_stream(a, b, explicit)
    raise UsageError(f"unknown stream kind {kind!r}")
