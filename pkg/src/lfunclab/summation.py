"""Compensated and pairwise summation helpers.

All accumulation in the library goes through these helpers (or through
numpy's pairwise ``np.sum``), so results are deterministic and the
rounding error of long scans stays near machine level.
"""

from __future__ import annotations

import math
from typing import Iterable

import numpy as np


def kahan_sum(terms: Iterable[float]) -> float:
    """Kahan-compensated sum of real terms."""
    total = 0.0
    comp = 0.0
    for term in terms:
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return total


def kahan_csum(terms: Iterable[complex]) -> complex:
    """Kahan-compensated sum of complex terms (real/imag tracked jointly)."""
    total = 0.0 + 0.0j
    comp = 0.0 + 0.0j
    for term in terms:
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return total


def fsum_c(terms: Iterable[complex]) -> complex:
    """Exactly rounded complex sum via math.fsum on both components."""
    items = list(terms)
    return complex(math.fsum(z.real for z in items), math.fsum(z.imag for z in items))


def compensated_cumsum(values: np.ndarray) -> np.ndarray:
    """Running Kahan cumulative sum of a complex or real vector.

    np.cumsum drifts linearly with length; partial-sum prefixes feed the
    piecewise kernels, which are later checked against direct summation
    to 1e-10, so the prefix itself must stay well below that.
    """
    out = np.empty(len(values), dtype=complex)
    total = 0.0 + 0.0j
    comp = 0.0 + 0.0j
    for i, term in enumerate(values):
        y = complex(term) - comp
        t = total + y
        comp = (t - total) - y
        total = t
        out[i] = total
    return out


def pairwise_sum(values: np.ndarray) -> complex | float:
    """Deterministic pairwise reduction (numpy's fixed-tree np.sum)."""
    return values.sum()
