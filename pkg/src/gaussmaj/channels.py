"""Quantum-limited amplifier and pure-loss channel on Fock-diagonal states.

Both channels send diagonal states to diagonal states, so on eigenvalue
vectors they act as infinite lower/upper triangular matrices.  Indices are
1-based as in the usual matrix display: column ``m`` carries ``m - 1``
input photons and row ``n`` carries ``n - 1`` output photons.

Amplifier of gain G (gamma^2 = 1 - 1/G)::

    D(n, m) = C(n-1, m-1) (1 - gamma^2)^m gamma^(2(n-m))      n >= m

Pure loss of transmittance eta::

    D(n, m) = C(m-1, n-1) eta^(n-1) (1 - eta)^(m-n)          m >= n

Amplifier columns sum to 1 and rows to 1/G; loss columns sum to 1 and rows
to 1/eta.  Row and column sums of a tensor product are products of the
factors' sums, so a product of such channels is column-stochastic exactly
when the product of the gains and transmittances is at least 1.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.special import gammaln, xlog1py, xlogy

from gaussmaj.fock_spectra import GeometricSpectrum

# binomials with top index above this go through log-gamma
EXACT_BINOMIAL_LIMIT = 30


class ChannelKind(str, enum.Enum):
    LOSS = "LOSS"
    AMP = "AMP"


@dataclass(frozen=True)
class ChannelSpec:
    """A pure-loss channel (``parameter`` = eta) or amplifier (``parameter`` = G)."""

    kind: ChannelKind
    parameter: float

    def __post_init__(self):
        object.__setattr__(self, "kind", ChannelKind(self.kind))
        p = self.parameter
        if self.kind is ChannelKind.LOSS and not 0 <= p <= 1:
            raise ValueError(f"transmittance must lie in [0, 1], got {p!r}")
        if self.kind is ChannelKind.AMP and not p >= 1:
            raise ValueError(f"gain must be >= 1, got {p!r}")

    @classmethod
    def loss(cls, eta) -> "ChannelSpec":
        return cls(ChannelKind.LOSS, eta)

    @classmethod
    def amp(cls, gain) -> "ChannelSpec":
        return cls(ChannelKind.AMP, gain)

    @property
    def tau(self):
        """Transmittance for loss, gain for amplification."""
        return self.parameter

    @property
    def is_identity(self) -> bool:
        return self.parameter == 1

    def matrix(self) -> "ChannelMatrixView":
        return ChannelMatrixView(self)


def _binomial_term(top: int, bottom: int, a, b):
    """``C(top, bottom) * a**bottom * b**(top - bottom)``.

    Exact arithmetic (works with ``Fraction``) for small indices, log-gamma
    beyond ``EXACT_BINOMIAL_LIMIT``.
    """
    if bottom < 0 or bottom > top:
        return 0.0
    if top <= EXACT_BINOMIAL_LIMIT or isinstance(a, Fraction):
        return math.comb(top, bottom) * a**bottom * b ** (top - bottom)
    if (a == 0 and bottom > 0) or (b == 0 and top > bottom):
        return 0.0
    log_c = math.lgamma(top + 1) - math.lgamma(bottom + 1) - math.lgamma(top - bottom + 1)
    log_a = bottom * math.log(a) if bottom else 0.0
    log_b = (top - bottom) * math.log(b) if top > bottom else 0.0
    return math.exp(log_c + log_a + log_b)


@dataclass(frozen=True)
class ChannelMatrixView:
    """Lazy access to the Fock-basis transition matrix of a channel."""

    spec: ChannelSpec

    def entry(self, n: int, m: int):
        """``D(n, m)`` with 1-based row ``n`` and column ``m``."""
        if n < 1 or m < 1:
            raise ValueError("matrix indices are 1-based")
        p = self.spec.parameter
        if self.spec.kind is ChannelKind.AMP:
            if n < m:
                return 0.0
            # (1 - gamma^2) = 1/G, so peel one factor off the binomial term
            inv_g = 1 / p
            gamma2 = 1 - inv_g
            return inv_g * _binomial_term(n - 1, m - 1, inv_g, gamma2)
        if m < n:
            return 0.0
        return _binomial_term(m - 1, n - 1, p, 1 - p)

    def dense(self, rows: int, cols: int) -> np.ndarray:
        """Top-left ``rows x cols`` block as a float array."""
        n = np.arange(1, rows + 1)[:, None]
        m = np.arange(1, cols + 1)[None, :]
        p = float(self.spec.parameter)
        if self.spec.kind is ChannelKind.AMP:
            top, bottom = n - 1, m - 1
            a = 1.0 / p
            extra = math.log(a)
        else:
            top, bottom = m - 1, n - 1
            a, extra = p, 0.0
        valid = bottom <= top
        t = np.where(valid, top, 0)
        s = np.where(valid, bottom, 0)
        with np.errstate(divide="ignore", invalid="ignore"):
            log_c = gammaln(t + 1) - gammaln(s + 1) - gammaln(t - s + 1)
            logv = log_c + xlogy(s, a) + xlog1py(t - s, -a) + extra
            out = np.where(valid, np.exp(logv), 0.0)
        # small binomials exactly
        small = valid & (t <= EXACT_BINOMIAL_LIMIT)
        if small.any():
            ii, jj = np.nonzero(small)
            for i, j in zip(ii, jj):
                out[i, j] = self.entry(i + 1, j + 1)
        return out

    def column_sum(self, m: int, truncation: int):
        """``sum_{n <= truncation} D(n, m)``."""
        return _fsum_like(self.entry(n, m) for n in range(1, truncation + 1))

    def row_sum(self, n: int, truncation: int):
        """``sum_{m <= truncation} D(n, m)``."""
        return _fsum_like(self.entry(n, m) for m in range(1, truncation + 1))


def _fsum_like(terms):
    terms = list(terms)
    if any(isinstance(t, Fraction) for t in terms):
        return sum(terms, Fraction(0))
    return math.fsum(terms)


def amp_column_sum(gain: float, m: int, truncation: int) -> float:
    """Partial column sum ``sum_{n=m}^{T} D_amp(n, m)``; tends to 1 as T grows."""
    if gain < 1:
        raise ValueError("gain must be >= 1")
    if m < 1:
        raise ValueError("column index is 1-based")
    if truncation < m:
        raise ValueError(f"truncation {truncation} is below the first nonzero row {m}")
    view = ChannelSpec.amp(gain).matrix()
    return math.fsum(view.entry(n, m) for n in range(m, truncation + 1))


def amp_row_sum(gain: float, n: int, truncation: int | None = None) -> float:
    """Row sum of the amplifier matrix.

    Without ``truncation`` this is the closed form ``1/G``.  With it, the
    first ``truncation`` entries are summed; since row ``n`` has only ``n``
    nonzero entries the result equals ``1/G`` once ``truncation >= n``.
    """
    if gain < 1:
        raise ValueError("gain must be >= 1")
    if n < 1:
        raise ValueError("row index is 1-based")
    if truncation is None:
        return 1.0 / gain
    view = ChannelSpec.amp(gain).matrix()
    return math.fsum(view.entry(n, m) for m in range(1, min(n, truncation) + 1))


def loss_column_sum(eta, m: int):
    """Column sum of the loss matrix over its ``m`` nonzero entries (always 1).

    Passing a ``Fraction`` transmittance gives an exact rational result.
    """
    if not 0 <= eta <= 1:
        raise ValueError("transmittance must lie in [0, 1]")
    if m < 1:
        raise ValueError("column index is 1-based")
    return ChannelSpec.loss(eta).matrix().column_sum(m, m)


def loss_row_sum(eta, n: int, truncation: int):
    """Partial row sum ``sum_{m=n}^{T} D_loss(n, m)``; tends to ``1/eta``."""
    if not 0 < eta <= 1:
        raise ValueError("transmittance must lie in (0, 1] for a finite row sum")
    if n < 1:
        raise ValueError("row index is 1-based")
    if truncation < n:
        raise ValueError(f"truncation {truncation} is below the first nonzero column {n}")
    view = ChannelSpec.loss(eta).matrix()
    return _fsum_like(view.entry(n, m) for m in range(n, truncation + 1))


def apply_channel(spec: ChannelSpec, nu_in: float) -> float:
    """Mean photon number of the thermal output for a thermal input ``nu_in``."""
    if nu_in < 0:
        raise ValueError("mean photon number must be >= 0")
    if spec.kind is ChannelKind.LOSS:
        return spec.parameter * nu_in
    return spec.parameter * nu_in + (spec.parameter - 1)


def matrix_action_check(
    spec: ChannelSpec, x_in: float, depth: int, entries: int | None = None
) -> float:
    """Largest deviation between ``D @ lambda'`` and the analytic thermal output.

    ``lambda'`` is the geometric eigenvalue vector of ratio ``x_in`` truncated
    to ``depth`` entries; the comparison covers the first ``entries`` rows
    (all ``depth`` rows by default).
    """
    if not 0 <= x_in < 1:
        raise ValueError("eigenvalue ratio must lie in [0, 1)")
    if depth < 1:
        raise ValueError("depth must be >= 1")
    rows = depth if entries is None else min(entries, depth)
    source = GeometricSpectrum(x_in)
    lam_in = source.eigenvalues(depth)
    lam_out = spec.matrix().dense(rows, depth) @ lam_in
    target = GeometricSpectrum.from_occupation(apply_channel(spec, source.occupation))
    return float(np.max(np.abs(lam_out - target.eigenvalues(rows))))


def derive_channel(nu_from: float, nu_to: float) -> ChannelSpec:
    """The quantum-limited channel taking thermal ``nu_from`` to thermal ``nu_to``.

    Loss when the occupation does not grow (identity for equal occupations),
    amplification otherwise.
    """
    if nu_from < 0 or nu_to < 0:
        raise ValueError("mean photon numbers must be >= 0")
    if nu_to <= nu_from:
        return ChannelSpec.loss(1.0 if nu_from == 0 else nu_to / nu_from)
    return ChannelSpec.amp((nu_to + 1.0) / (nu_from + 1.0))


@dataclass(frozen=True)
class StochasticityCertificate:
    certified: bool
    product: float


def stochasticity_certificate(channels: Sequence[ChannelSpec]) -> StochasticityCertificate:
    """Check that the tensor product of ``channels`` is column-stochastic.

    Columns of the product matrix sum to 1 and rows to ``1/prod(tau)``, so
    ``prod(tau) >= 1`` means the input spectrum majorizes the output.
    """
    if not channels:
        raise ValueError("at least one channel is required")
    product = math.prod(float(c.tau) for c in channels)
    return StochasticityCertificate(product >= 1.0, product)
