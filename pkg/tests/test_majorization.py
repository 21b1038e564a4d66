import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gaussmaj._summation import compensated_cumsum
from gaussmaj.fock_spectra import GeometricSpectrum, ProductSpectrum, RankedEigenvalues, top_k
from gaussmaj.majorization import MajorizationVerdict, Relation, compare, partial_sums

from conftest import BASE, brute_force_top

K = 4096


def test_partial_sums_geometric():
    np.testing.assert_allclose(partial_sums(top_k(GeometricSpectrum(0.5), 3)), [0.5, 0.75, 0.875])


def test_partial_sums_vacuum():
    np.testing.assert_array_equal(partial_sums(top_k(GeometricSpectrum(0.0), 6)), np.ones(6))


def test_partial_sums_two_modes():
    s = partial_sums(top_k(ProductSpectrum.from_ratios([0.5, 0.5]), 4))
    np.testing.assert_allclose(s, [0.25, 0.375, 0.5, 0.5625])


def test_partial_sums_last_equals_captured_mass():
    r = top_k(ProductSpectrum.from_squeezing(BASE), 777)
    s = partial_sums(r)
    assert len(s) == 777
    assert s[-1] == r.captured_mass
    assert np.all(np.diff(s) >= 0)


def test_compensated_sum_beats_naive_on_long_vectors():
    values = [1.0] + [1e-16] * 10_000
    exact = 1.0 + 1e-12
    assert compensated_cumsum(values)[-1] == pytest.approx(exact, rel=0, abs=2e-16)
    assert abs(np.cumsum(values)[-1] - exact) > 1e-13


def test_partial_sums_match_exact_fsum():
    r = top_k(ProductSpectrum.from_squeezing((1.3, 1.1, 0.9)), 5000)
    s = partial_sums(r)
    for k in (1, 10, 999, 5000):
        assert s[k - 1] == pytest.approx(math.fsum(r.values[:k].tolist()), rel=0, abs=2e-16)


def test_compare_reflexive():
    p = top_k(ProductSpectrum.from_squeezing(BASE), K)
    v = compare(p, p)
    assert v.relation is Relation.EQUAL
    assert v.witness_forward is None and v.witness_reverse is None
    assert v.slack >= 0


def test_single_mode_smaller_ratio_majorizes():
    p, q = top_k(GeometricSpectrum(0.3), 256), top_k(GeometricSpectrum(0.6), 256)
    v = compare(p, q)
    assert v.relation is Relation.MAJORIZES
    assert v.witness_forward is None and v.witness_reverse == 1
    assert v.slack == pytest.approx(p.tail_mass + 1e-12)


def test_depth_mismatch_rejected():
    with pytest.raises(ValueError):
        compare(top_k(GeometricSpectrum(0.3), 10), top_k(GeometricSpectrum(0.3), 11))
    with pytest.raises(ValueError):
        compare(top_k(GeometricSpectrum(0.3), 10), top_k(GeometricSpectrum(0.3), 10), tol=0)


def _brute_partial_sums(r, k):
    xs = [math.tanh(v) ** 2 for v in r]
    vals = brute_force_top(xs, k)
    return np.array([math.fsum(vals[: i + 1].tolist()) for i in range(len(vals))])


def test_incomparable_point_in_right_quadrant():
    # oracle: dense-grid partial sums at K = 4096 over right-quadrant
    # candidates until both directions show a violation
    s_base = _brute_partial_sums(BASE, K)
    found = None
    for r1 in np.arange(1.2, 1.7, 0.05):
        for r2 in np.arange(0.2, 0.85, 0.05):
            cand = (round(r1, 2), round(r2, 2))
            s = _brute_partial_sums(cand, K)
            if np.any(s < s_base - 1e-9) and np.any(s > s_base + 1e-9):
                found = cand, int(np.argmax(s < s_base - 1e-9)) + 1, int(np.argmax(s > s_base + 1e-9)) + 1
                break
        if found:
            break
    assert found is not None
    cand, w_fwd, w_rev = found
    v = compare(top_k(ProductSpectrum.from_squeezing(cand), K), top_k(ProductSpectrum.from_squeezing(BASE), K))
    assert v.relation is Relation.INCOMPARABLE
    assert (v.witness_forward, v.witness_reverse) == (w_fwd, w_rev)


def test_slack_above_ceiling_gives_undecided():
    # a broad spectrum that majorizes an even broader one, but whose tail at
    # depth 16 is far above the ceiling
    p, q = top_k(GeometricSpectrum(0.9), 16), top_k(GeometricSpectrum(0.95), 16)
    assert compare(p, q).relation is Relation.UNDECIDED
    assert compare(p, q, slack_ceiling=1.0).relation is Relation.MAJORIZES


def test_violations_inside_tolerance_are_not_conclusive():
    p = RankedEigenvalues.from_values([0.5, 0.25, 0.125], depth=3)
    q = RankedEigenvalues.from_values([0.5 - 1e-14, 0.25 + 1e-14, 0.125], depth=3)
    v = compare(p, q, slack_ceiling=1.0)
    assert v.relation is Relation.EQUAL
    assert v.witness_forward is None and v.witness_reverse is None


def test_mirrored_roundtrip():
    v = MajorizationVerdict(Relation.MAJORIZES, 10, 0.1, None, 3, 0.0, 0.2)
    assert v.mirrored().relation is Relation.MAJORIZED_BY
    assert v.mirrored().mirrored() == v


def _random_ranked(rng):
    xs = rng.uniform(0, 0.8, size=rng.integers(1, 4))
    return top_k(ProductSpectrum.from_ratios(xs), 512)


def test_antisymmetry(rng):
    for _ in range(200):
        p, q = _random_ranked(rng), _random_ranked(rng)
        a, b = compare(p, q), compare(q, p)
        assert b == a.mirrored()
        if a.relation is Relation.MAJORIZES:
            assert b.relation is Relation.MAJORIZED_BY


def test_transitivity_on_certified_verdicts(rng):
    checked = 0
    for _ in range(300):
        p, q, s = (_random_ranked(rng) for _ in range(3))
        pq, qs = compare(p, q), compare(q, s)
        if pq.relation is Relation.MAJORIZES and qs.relation is Relation.MAJORIZES:
            checked += 1
            ps = compare(p, s)
            bound = pq.slack + qs.slack + 1e-12
            assert not (ps.relation is Relation.MAJORIZED_BY and ps.margin_forward > bound)
            assert ps.margin_forward <= bound
    assert checked > 10


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(min_value=1, max_value=6), min_size=2, max_size=12))
def test_tie_permutation_invariance(levels):
    # geometric levels with duplicates; ties can be listed in any order
    levels = sorted(levels)
    raw = np.array([2.0**-l for l in levels])
    raw = raw / (raw.sum() * 1.0000001)
    ref = RankedEigenvalues.from_values(raw)
    other = RankedEigenvalues.from_values(sorted(raw[::-1].tolist(), reverse=True))
    q = RankedEigenvalues.from_values(np.full(len(raw), 1.0 / (len(raw) + 1)))
    assert compare(ref, q, slack_ceiling=1) == compare(other, q, slack_ceiling=1)


def test_tie_order_in_lattice_enumeration():
    # equal eigenvalues at (1, 0) and (0, 1) swapped by relabelling the modes
    a = top_k(ProductSpectrum.from_ratios([0.5, 0.5, 0.3]), 300)
    b = top_k(ProductSpectrum.from_ratios([0.3, 0.5, 0.5]), 300)
    q = top_k(ProductSpectrum.from_ratios([0.55, 0.5, 0.3]), 300)
    np.testing.assert_allclose(a.values, b.values, rtol=1e-14)
    va, vb = compare(a, q), compare(b, q)
    assert (va.relation, va.witness_forward, va.witness_reverse) == (
        vb.relation,
        vb.witness_forward,
        vb.witness_reverse,
    )
    assert va.slack == pytest.approx(vb.slack, abs=1e-15)


def test_single_mode_analytic_rule(rng):
    for _ in range(100):
        xp, xq = rng.uniform(0, 0.95, size=2)
        v = compare(top_k(GeometricSpectrum(xp), 256), top_k(GeometricSpectrum(xq), 256), slack_ceiling=1.0)
        expected = Relation.MAJORIZES if xp < xq else Relation.MAJORIZED_BY
        assert v.relation is expected
