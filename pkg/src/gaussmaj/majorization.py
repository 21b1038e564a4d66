"""Majorization of (possibly infinite) sorted distributions at finite depth.

Partial sums of the exact top-k eigenvalues are exact, so a partial-sum
violation found at some ``k <= K`` settles a negative answer for good.  A
positive answer can only be certified up to the mass left beyond depth
``K``: if ``S_k(p) >= S_k(q) - tol`` for every ``k <= K`` then for ``k > K``
we still have ``S_k(p) >= S_K(p) = 1 - tail(p) >= S_k(q) - tail(p)``.  The
verdict therefore carries a slack ``tail(p) + tol`` that holds for all k.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from gaussmaj.fock_spectra import RankedEigenvalues

DEFAULT_TOL = 1e-12
DEFAULT_SLACK_CEILING = 1e-6


class Relation(str, enum.Enum):
    MAJORIZES = "MAJORIZES"
    MAJORIZED_BY = "MAJORIZED_BY"
    EQUAL = "EQUAL"
    INCOMPARABLE = "INCOMPARABLE"
    UNDECIDED = "UNDECIDED"


@dataclass(frozen=True)
class MajorizationVerdict:
    """Outcome of :func:`compare` for a pair ``(p, q)``.

    ``witness_forward`` is the first ``k`` (1-based) with
    ``S_k(p) < S_k(q) - tol``, proving p does not majorize q, and
    ``margin_forward`` the largest ``S_k(q) - S_k(p)`` seen.  The
    ``*_reverse`` fields are the same with p and q exchanged.
    """

    relation: Relation
    depth: int
    slack: float
    witness_forward: int | None = None
    witness_reverse: int | None = None
    margin_forward: float = 0.0
    margin_reverse: float = 0.0

    def mirrored(self) -> "MajorizationVerdict":
        """The verdict that ``compare(q, p)`` returns."""
        swap = {Relation.MAJORIZES: Relation.MAJORIZED_BY, Relation.MAJORIZED_BY: Relation.MAJORIZES}
        return MajorizationVerdict(
            swap.get(self.relation, self.relation),
            self.depth,
            self.slack,
            self.witness_reverse,
            self.witness_forward,
            self.margin_reverse,
            self.margin_forward,
        )


def partial_sums(ranked: RankedEigenvalues) -> np.ndarray:
    """``S_k`` for ``k = 1..K``, computed with compensated summation."""
    return ranked.padded_cumulative


def compare(
    p: RankedEigenvalues,
    q: RankedEigenvalues,
    tol: float = DEFAULT_TOL,
    slack_ceiling: float = DEFAULT_SLACK_CEILING,
) -> MajorizationVerdict:
    """Decide how ``p`` and ``q`` relate under majorization at their common depth.

    Negative findings are exact.  MAJORIZES / MAJORIZED_BY / EQUAL are only
    returned when the certification slack stays below ``slack_ceiling``;
    otherwise the verdict is UNDECIDED.
    """
    if p.depth != q.depth:
        raise ValueError(f"depth mismatch: {p.depth} != {q.depth}")
    if not tol > 0:
        raise ValueError("tol must be positive")
    diff = partial_sums(p) - partial_sums(q)

    fwd = np.flatnonzero(diff < -tol)
    rev = np.flatnonzero(diff > tol)
    witness_fwd = int(fwd[0]) + 1 if fwd.size else None
    witness_rev = int(rev[0]) + 1 if rev.size else None
    margin_fwd = max(0.0, float(-diff.min()))
    margin_rev = max(0.0, float(diff.max()))

    def verdict(relation, slack):
        return MajorizationVerdict(
            relation, p.depth, slack, witness_fwd, witness_rev, margin_fwd, margin_rev
        )

    if fwd.size and rev.size:
        return verdict(Relation.INCOMPARABLE, tol)
    if rev.size:
        slack = p.tail_mass + tol
        return verdict(Relation.MAJORIZES if slack <= slack_ceiling else Relation.UNDECIDED, slack)
    if fwd.size:
        slack = q.tail_mass + tol
        return verdict(Relation.MAJORIZED_BY if slack <= slack_ceiling else Relation.UNDECIDED, slack)
    slack = max(p.tail_mass, q.tail_mass) + tol
    return verdict(Relation.EQUAL if slack <= slack_ceiling else Relation.UNDECIDED, slack)
