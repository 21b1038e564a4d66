"""Conversion verdicts between normal-form pure Gaussian states.

The question is whether ``|psi(r)> -> |psi(r')>`` is possible under
deterministic LOCC, i.e. whether the reduced spectrum of ``r'`` majorizes
that of ``r``.  Analytic criteria are tried first (Gaussian condition, then
the channel-product criterion) and the numeric majorization oracle settles
whatever they leave open.
"""

from __future__ import annotations

import dataclasses
import enum
import math
from dataclasses import dataclass

from gaussmaj.channels import (
    ChannelSpec,
    StochasticityCertificate,
    derive_channel,
    stochasticity_certificate,
)
from gaussmaj.fock_spectra import DEFAULT_DEPTH, ProductSpectrum, SqueezingVector, top_k
from gaussmaj.majorization import (
    DEFAULT_SLACK_CEILING,
    DEFAULT_TOL,
    MajorizationVerdict,
    Relation,
    compare,
)


class Category(str, enum.Enum):
    GLOCC_FORWARD = "GLOCC_FORWARD"
    LOCC_FORWARD_NONGAUSSIAN_CRITERION = "LOCC_FORWARD_NONGAUSSIAN_CRITERION"
    LOCC_FORWARD_NUMERIC = "LOCC_FORWARD_NUMERIC"
    LOCC_REVERSE_ONLY_GLOCC = "LOCC_REVERSE_ONLY_GLOCC"
    LOCC_REVERSE_ONLY_CRITERION = "LOCC_REVERSE_ONLY_CRITERION"
    LOCC_REVERSE_ONLY_NUMERIC = "LOCC_REVERSE_ONLY_NUMERIC"
    INCOMPARABLE = "INCOMPARABLE"
    UNDECIDED = "UNDECIDED"

    @property
    def forward(self) -> bool:
        return self in _FORWARD

    @property
    def reverse_only(self) -> bool:
        return self in _REVERSE


_FORWARD = {
    Category.GLOCC_FORWARD,
    Category.LOCC_FORWARD_NONGAUSSIAN_CRITERION,
    Category.LOCC_FORWARD_NUMERIC,
}
_REVERSE = {
    Category.LOCC_REVERSE_ONLY_GLOCC,
    Category.LOCC_REVERSE_ONLY_CRITERION,
    Category.LOCC_REVERSE_ONLY_NUMERIC,
}


def _as_vector(r) -> SqueezingVector:
    return r if isinstance(r, SqueezingVector) else SqueezingVector(tuple(r))


def _check_lengths(r: SqueezingVector, r_prime: SqueezingVector):
    if len(r) != len(r_prime):
        raise ValueError(f"mode count mismatch: {len(r)} vs {len(r_prime)}")


def glocc_condition(r, r_prime) -> bool:
    """Gaussian LOCC reaches ``r_prime`` from ``r`` iff ``r_i >= r'_i`` for all i."""
    r, r_prime = _as_vector(r), _as_vector(r_prime)
    _check_lengths(r, r_prime)
    return all(a >= b for a, b in zip(r, r_prime))


def theorem1_ratio(r, r_prime) -> float:
    """The two-mode ratio ``[sinh(r1+r2) +- sinh(r1-r2)] / [same for r']``.

    The sign is ``+`` when the first squeezing grows and ``-`` when it shrinks.
    Only defined when the two squeezing changes have strictly opposite signs.
    """
    r, r_prime = _as_vector(r), _as_vector(r_prime)
    if len(r) != 2 or len(r_prime) != 2:
        raise ValueError("the two-mode criterion needs exactly two modes on each side")
    d1, d2 = r_prime[0] - r[0], r_prime[1] - r[1]
    if not d1 * d2 < 0:
        raise ValueError(
            "squeezing changes must have opposite signs; use glocc_condition otherwise"
        )
    sign = 1.0 if d1 > 0 else -1.0
    (r1, r2), (q1, q2) = r.r, r_prime.r
    num = math.sinh(r1 + r2) + sign * math.sinh(r1 - r2)
    den = math.sinh(q1 + q2) + sign * math.sinh(q1 - q2)
    return num / den


def theorem1_product_form(r, r_prime) -> float:
    """``sinh(r_eta) cosh(r_G) / (sinh(r'_eta) cosh(r'_G))``.

    ``eta`` labels the mode whose squeezing grows, ``G`` the one that shrinks.
    Equal to :func:`theorem1_ratio`.
    """
    r, r_prime = _as_vector(r), _as_vector(r_prime)
    if (r_prime[0] - r[0]) * (r_prime[1] - r[1]) >= 0:
        raise ValueError("squeezing changes must have opposite signs")
    eta, gain = (0, 1) if r_prime[0] > r[0] else (1, 0)
    num = math.sinh(r[eta]) * math.cosh(r[gain])
    den = math.sinh(r_prime[eta]) * math.cosh(r_prime[gain])
    return num / den


def theorem1_condition(r, r_prime) -> bool:
    """Sufficient condition for a (necessarily non-Gaussian) 2x2 LOCC conversion."""
    return theorem1_ratio(r, r_prime) >= 1.0


@dataclass(frozen=True)
class CriterionResult:
    holds: bool
    product: float
    channels: tuple[ChannelSpec, ...]


def theoremN_condition(r, r_prime) -> CriterionResult:
    """Channel-product criterion for ``|psi(r)> -> |psi(r')>``.

    Each mode of the target's reduced state (occupation ``nu'_i``) is sent to
    the source's occupation ``nu_i`` by a pure-loss channel or amplifier.
    If the product of transmittances and gains is at least 1 the combined
    matrix is column-stochastic, so the target spectrum majorizes the source
    spectrum and the conversion exists.
    """
    r, r_prime = _as_vector(r), _as_vector(r_prime)
    _check_lengths(r, r_prime)
    channels = tuple(
        derive_channel(nu_target, nu_source)
        for nu_target, nu_source in zip(r_prime.occupations, r.occupations)
    )
    cert: StochasticityCertificate = stochasticity_certificate(channels)
    return CriterionResult(cert.certified, cert.product, channels)


@dataclass(frozen=True)
class Evidence:
    """What each stage of the cascade found.

    ``numeric`` is ``None`` when an analytic criterion decided the pair; it
    otherwise holds ``compare(spectrum(r'), spectrum(r))``.
    """

    glocc_forward: bool
    glocc_reverse: bool
    criterion_forward: bool
    criterion_reverse: bool
    product_forward: float
    product_reverse: float
    identical: bool = False
    numeric: MajorizationVerdict | None = None

    def mirrored(self) -> "Evidence":
        return Evidence(
            self.glocc_reverse,
            self.glocc_forward,
            self.criterion_reverse,
            self.criterion_forward,
            self.product_reverse,
            self.product_forward,
            self.identical,
            None if self.numeric is None else self.numeric.mirrored(),
        )


@dataclass(frozen=True)
class ConversionVerdict:
    category: Category
    evidence: Evidence

    @property
    def forward_possible(self) -> bool:
        return self.category.forward


_NUMERIC_CATEGORY = {
    Relation.MAJORIZES: Category.LOCC_FORWARD_NUMERIC,
    Relation.MAJORIZED_BY: Category.LOCC_REVERSE_ONLY_NUMERIC,
    Relation.INCOMPARABLE: Category.INCOMPARABLE,
}


def classify(
    r,
    r_prime,
    depth: int = DEFAULT_DEPTH,
    tol: float = DEFAULT_TOL,
    slack_ceiling: float = DEFAULT_SLACK_CEILING,
) -> ConversionVerdict:
    """Classify the conversion ``|psi(r)> -> |psi(r')>``.

    Stages, first match wins: Gaussian condition forward; Gaussian condition
    backward with a strict increase; channel-product criterion forward, then
    backward; numeric majorization of the reduced spectra.
    """
    r, r_prime = _as_vector(r), _as_vector(r_prime)
    _check_lengths(r, r_prime)
    fwd = theoremN_condition(r, r_prime)
    rev = theoremN_condition(r_prime, r)
    glocc_fwd = glocc_condition(r, r_prime)
    glocc_rev = glocc_condition(r_prime, r)
    evidence = Evidence(
        glocc_forward=glocc_fwd,
        glocc_reverse=glocc_rev,
        criterion_forward=fwd.holds,
        criterion_reverse=rev.holds,
        product_forward=fwd.product,
        product_reverse=rev.product,
        identical=r.r == r_prime.r,
    )
    if glocc_fwd:
        return ConversionVerdict(Category.GLOCC_FORWARD, evidence)
    if glocc_rev:
        # r' >= r componentwise and r' != r, so some component is strictly larger
        return ConversionVerdict(Category.LOCC_REVERSE_ONLY_GLOCC, evidence)
    if fwd.holds:
        return ConversionVerdict(Category.LOCC_FORWARD_NONGAUSSIAN_CRITERION, evidence)
    if rev.holds:
        return ConversionVerdict(Category.LOCC_REVERSE_ONLY_CRITERION, evidence)

    verdict = compare(
        top_k(ProductSpectrum.from_squeezing(r_prime), depth),
        top_k(ProductSpectrum.from_squeezing(r), depth),
        tol=tol,
        slack_ceiling=slack_ceiling,
    )
    evidence = dataclasses.replace(evidence, numeric=verdict)
    category = _NUMERIC_CATEGORY.get(verdict.relation, Category.UNDECIDED)
    return ConversionVerdict(category, evidence)
