"""Eigenvalue laws of the reduced states of normal-form pure Gaussian states.

Tracing one half of a two-mode squeezed vacuum with squeezing ``r`` leaves a
thermal state whose Fock-basis eigenvalues follow a geometric law with ratio
``x = tanh(r)**2``.  An N x N normal-form state reduces to a tensor product of
such thermal states, so its spectrum lives on the lattice of photon-number
tuples ``(n_1, ..., n_N)``.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

import numpy as np

from gaussmaj._summation import compensated_cumsum

DEFAULT_DEPTH = 4096


def squeezing_to_occupation(r: float) -> float:
    """Mean photon number ``sinh(r)**2`` of the reduced thermal state."""
    if r < 0:
        raise ValueError(f"squeezing parameter must be >= 0, got {r!r}")
    return math.sinh(r) ** 2


def occupation_to_squeezing(nu: float) -> float:
    """Inverse of :func:`squeezing_to_occupation`."""
    if nu < 0:
        raise ValueError(f"mean photon number must be >= 0, got {nu!r}")
    return math.asinh(math.sqrt(nu))


def squeezing_to_db(r: float) -> float:
    return 20.0 * r / math.log(10.0)


@dataclass(frozen=True)
class SqueezingVector:
    """Squeezing parameters of a normal-form state, sorted non-increasing."""

    r: tuple[float, ...]

    def __post_init__(self):
        r = tuple(float(v) for v in self.r)
        object.__setattr__(self, "r", r)
        if not r:
            raise ValueError("a squeezing vector needs at least one mode")
        if any(not math.isfinite(v) or v < 0 for v in r):
            raise ValueError(f"squeezing parameters must be finite and >= 0: {r}")
        if any(a < b for a, b in zip(r, r[1:])):
            raise ValueError(f"squeezing parameters must be sorted non-increasing: {r}")

    @classmethod
    def from_unsorted(cls, values: Iterable[float]) -> "SqueezingVector":
        return cls(tuple(sorted((float(v) for v in values), reverse=True)))

    @classmethod
    def parse(cls, text: str) -> "SqueezingVector":
        """Parse a comma-separated list such as ``"1.15,0.88"``."""
        try:
            values = [float(tok) for tok in text.split(",") if tok.strip()]
        except ValueError as exc:
            raise ValueError(f"malformed squeezing vector {text!r}") from exc
        return cls(tuple(values))

    def __len__(self) -> int:
        return len(self.r)

    def __iter__(self):
        return iter(self.r)

    def __getitem__(self, i):
        return self.r[i]

    @property
    def occupations(self) -> tuple[float, ...]:
        return tuple(squeezing_to_occupation(v) for v in self.r)

    def __str__(self) -> str:
        return ",".join(repr(v) for v in self.r)


@dataclass(frozen=True)
class GeometricSpectrum:
    """Thermal-state eigenvalues ``(1 - x) * x**n`` for ``n = 0, 1, 2, ...``."""

    x: float

    def __post_init__(self):
        if not 0.0 <= self.x < 1.0:
            raise ValueError(f"eigenvalue ratio must lie in [0, 1), got {self.x!r}")

    @classmethod
    def from_occupation(cls, nu: float) -> "GeometricSpectrum":
        if nu < 0:
            raise ValueError(f"mean photon number must be >= 0, got {nu!r}")
        return cls(nu / (nu + 1.0))

    @property
    def occupation(self) -> float:
        return self.x / (1.0 - self.x)

    def eigenvalue(self, n: int) -> float:
        if n < 0:
            raise ValueError("photon number must be >= 0")
        if self.x == 0.0:
            return 1.0 if n == 0 else 0.0
        return (1.0 - self.x) * self.x**n

    def eigenvalues(self, count: int) -> np.ndarray:
        n = np.arange(count)
        if self.x == 0.0:
            return (n == 0).astype(float)
        return (1.0 - self.x) * np.power(self.x, n)

    def partial_mass(self, k: int) -> float:
        """Sum of the ``k`` largest eigenvalues, ``1 - x**k``."""
        return 1.0 - self.x**k


def spectrum_of(r: float) -> GeometricSpectrum:
    """Reduced-state spectrum of a two-mode squeezed vacuum with squeezing ``r``."""
    if r < 0:
        raise ValueError(f"squeezing parameter must be >= 0, got {r!r}")
    x = math.tanh(r) ** 2
    if x >= 1.0:
        raise ValueError(f"squeezing {r!r} too large: tanh(r)**2 rounds to 1")
    return GeometricSpectrum(x)


@dataclass(frozen=True)
class ProductSpectrum:
    """Tensor product of thermal spectra, one per mode."""

    modes: tuple[GeometricSpectrum, ...]

    def __post_init__(self):
        object.__setattr__(self, "modes", tuple(self.modes))
        if not self.modes:
            raise ValueError("a product spectrum needs at least one mode")

    @classmethod
    def from_squeezing(cls, r: SqueezingVector | Sequence[float]) -> "ProductSpectrum":
        return cls(tuple(spectrum_of(v) for v in r))

    @classmethod
    def from_ratios(cls, xs: Iterable[float]) -> "ProductSpectrum":
        return cls(tuple(GeometricSpectrum(x) for x in xs))

    @property
    def ratios(self) -> tuple[float, ...]:
        return tuple(m.x for m in self.modes)

    def eigenvalue(self, indices: Sequence[int]) -> float:
        if len(indices) != len(self.modes):
            raise ValueError("one photon number per mode is required")
        return math.prod(m.eigenvalue(n) for m, n in zip(self.modes, indices))


@dataclass(frozen=True, eq=False)
class RankedEigenvalues:
    """The largest eigenvalues of a spectrum, sorted non-increasing.

    ``values`` may be shorter than ``depth`` when the spectrum has fewer
    nonzero eigenvalues than requested (the vacuum, for instance); the
    missing entries are zeros and contribute nothing to partial sums.
    """

    values: np.ndarray
    depth: int
    cumulative: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError("depth must be >= 1")
        if len(self.values) > self.depth:
            raise ValueError("more values than the stated depth")
        if len(self.values) != len(self.cumulative):
            raise ValueError("cumulative sums must match values")
        self.values.flags.writeable = False
        self.cumulative.flags.writeable = False

    @classmethod
    def from_values(cls, values: Iterable[float], depth: int | None = None) -> "RankedEigenvalues":
        """Wrap an explicit sorted probability vector (mainly for testing)."""
        vals = np.array([float(v) for v in values], dtype=float)
        if vals.size == 0:
            raise ValueError("at least one value is required")
        if np.any(vals <= 0):
            raise ValueError("ranked values must be positive")
        if np.any(np.diff(vals) > 0):
            raise ValueError("ranked values must be sorted non-increasing")
        cum = compensated_cumsum(vals.tolist())
        if cum[-1] > 1.0 + 1e-12:
            raise ValueError(f"values sum to {cum[-1]!r} > 1")
        return cls(vals, depth if depth is not None else vals.size, cum)

    @property
    def captured_mass(self) -> float:
        return float(self.cumulative[-1]) if len(self.cumulative) else 0.0

    @property
    def tail_mass(self) -> float:
        return max(0.0, 1.0 - self.captured_mass)

    @cached_property
    def padded_cumulative(self) -> np.ndarray:
        """Partial sums ``S_1 .. S_depth``, padded past the last nonzero value."""
        pad = self.depth - len(self.cumulative)
        out = np.concatenate([self.cumulative, np.full(pad, self.captured_mass)])
        out.flags.writeable = False
        return out

    def __len__(self) -> int:
        return self.depth


def _lattice_top_logs(log_ratios: tuple[float, ...], log_norm: float, k: int) -> list[float]:
    """Log-eigenvalues of the ``k`` heaviest lattice points, largest first.

    The joint log-eigenvalue ``log_norm + sum(n_i * log_ratios[i])`` is
    non-increasing in every coordinate, so the next-largest point is always
    adjacent to an already-emitted one.  A heap over that frontier plus a
    visited set enumerates points in order while touching at most
    ``k * N`` candidates.
    """
    n_modes = len(log_ratios)
    origin = (0,) * n_modes
    heap = [(-log_norm, origin)]
    seen = {origin}
    out = []
    push, pop = heapq.heappush, heapq.heappop
    while heap and len(out) < k:
        neg, idx = pop(heap)
        out.append(-neg)
        for i in range(n_modes):
            nxt = idx[:i] + (idx[i] + 1,) + idx[i + 1:]
            if nxt in seen:
                continue
            seen.add(nxt)
            logv = log_norm
            for c, lr in zip(nxt, log_ratios):
                if c:
                    logv += c * lr
            push(heap, (-logv, nxt))
    return out


@lru_cache(maxsize=256)
def _top_k_cached(ratios: tuple[float, ...], k: int) -> RankedEigenvalues:
    active = tuple(x for x in ratios if x > 0.0)
    log_norm = math.fsum(math.log1p(-x) for x in active)
    if not active:
        logs = [0.0]
    elif len(active) == 1:
        x = active[0]
        logs = (log_norm + np.arange(k) * math.log(x)).tolist()
    else:
        logs = _lattice_top_logs(tuple(math.log(x) for x in active), log_norm, k)
    values = np.exp(np.array(logs, dtype=float))
    # eigenvalues beyond the float range behave like a finite support
    values = values[values > 0.0]
    return RankedEigenvalues(values, k, compensated_cumsum(values.tolist()))


def top_k(spec: ProductSpectrum | GeometricSpectrum, k: int = DEFAULT_DEPTH) -> RankedEigenvalues:
    """The ``k`` largest joint eigenvalues of a product spectrum, sorted.

    Equal eigenvalues come out in an arbitrary but deterministic order;
    partial sums do not depend on it.
    """
    if isinstance(k, bool) or int(k) != k or k < 1:
        raise ValueError(f"depth must be a positive integer, got {k!r}")
    if isinstance(spec, GeometricSpectrum):
        spec = ProductSpectrum((spec,))
    return _top_k_cached(spec.ratios, int(k))
