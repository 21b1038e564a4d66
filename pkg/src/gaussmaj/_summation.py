"""Compensated running sums."""

from __future__ import annotations

from typing import Iterable

import numpy as np


def compensated_cumsum(values: Iterable[float]) -> np.ndarray:
    """Running sums of ``values`` using Neumaier's variant of Kahan summation.

    Each prefix is exact to within a couple of ulps regardless of length,
    which plain ``np.cumsum`` does not guarantee for long vectors.
    """
    out = []
    s = 0.0
    c = 0.0
    for v in values:
        t = s + v
        if abs(s) >= abs(v):
            c += (s - t) + v
        else:
            c += (v - t) + s
        s = t
        out.append(s + c)
    return np.array(out, dtype=float)
