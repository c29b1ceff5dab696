"""Rank-2 reflexive ray data: Chern classes, stability, normalization."""

from __future__ import annotations

from fractions import Fraction

import pytest

from tsk.fan import Fan
from tsk.linalg import Subspace
from tsk.reflexive import (
    NO_SPLIT,
    R2Filtration,
    RayDatum,
    Stability,
    bogomolov_ok,
    chern_k_general,
    chern_total,
    chern_vector_positivity,
    discriminant,
    elementary_symmetric,
    from_multifiltration,
    is_locally_free,
    normalize,
    normalized_positivity,
    prescribe_reflexive,
    slope,
    stability,
    to_multifiltration,
)
from tsk.ring import TruncPoly


def b_zero(n, c, lines=None):
    return R2Filtration.b_zero_data(Fan(n), c, lines)


def test_ray_datum():
    r = RayDatum(-2, 0, (2, 4))
    assert r.c == 2
    assert r.line == (1, 2)  # canonicalized
    assert r.value_at(-3) == Subspace.zero(2)
    assert r.value_at(-1) == Subspace.line(1, 2)
    assert r.value_at(0) == Subspace.full(2)
    # trivial ray: the line is dropped
    assert RayDatum(1, 1, (1, 0)).line is None
    with pytest.raises(ValueError):
        RayDatum(1, 0, (1, 0))
    with pytest.raises(ValueError):
        RayDatum(-1, 0, None)


def test_filtration_basics():
    f = b_zero(4, (1, 6, 6, 0, 0))
    assert f.n == 4
    assert f.a_vec == (-1, -6, -6, 0, 0)
    assert f.b_vec == (0, 0, 0, 0, 0)
    assert f.c_vec == (1, 6, 6, 0, 0)
    assert f.c_sum == 13
    assert f.active_rays() == [0, 1, 2]
    assert f.distinct_active_lines() == [(1, 0), (1, 1), (1, 2)]
    assert f.is_b_zero() and not f.is_a_zero()
    with pytest.raises(ValueError):
        R2Filtration(Fan(2), (RayDatum(0, 0),))  # wrong ray count


def test_normalize():
    f = R2Filtration(
        Fan(3),
        (
            RayDatum(-1, 2, (1, 0)),
            RayDatum(0, 3, (1, 1)),
            RayDatum(2, 2, None),
            RayDatum(-4, 0, (1, 2)),
        ),
    )
    b0 = normalize(f, "b_zero")
    a0 = normalize(f, "a_zero")
    assert b0.is_b_zero() and a0.is_a_zero()
    # twisting preserves c_rho, lines, and the discriminant
    assert b0.c_vec == f.c_vec == a0.c_vec
    assert [r.line for r in b0.rays] == [r.line for r in f.rays]
    assert discriminant(b0) == discriminant(f) == discriminant(a0)
    assert stability(b0) is stability(f)
    with pytest.raises(ValueError):
        normalize(f, "c_zero")


def test_elementary_symmetric():
    f = b_zero(4, (1, 6, 6, 0, 0))
    assert [elementary_symmetric(f, k) for k in (1, 2, 3, 4)] == [13, 48, 36, 0]
    with pytest.raises(ValueError):
        elementary_symmetric(f, 0)
    with pytest.raises(ValueError):
        elementary_symmetric(f, 5)


def test_chern_total_oracle():
    # the running example: c = (1, 6, 6, 0, 0) on P^4
    f = b_zero(4, (1, 6, 6, 0, 0))
    assert chern_total(f).render() == "1 + 13*H + 48*H^2 + 36*H^3"
    # b_zero: c_k = s_k for k >= 1
    assert chern_total(f) == TruncPoly(4, (1, 13, 48, 36, 0))
    assert chern_k_general(f, 3) == 36
    assert chern_k_general(f, 4) == 0


def test_chern_line_bundle_split():
    # O(2) (+) O on P^3: a split, locally free filtration
    f = R2Filtration(
        Fan(3),
        (
            RayDatum(-2, 0, (1, 0)),
            RayDatum(0, 0),
            RayDatum(0, 0),
            RayDatum(0, 0),
        ),
    )
    assert is_locally_free(f)
    assert chern_total(f).render() == "1 + 2*H"


def test_chern_two_lines_split():
    # two distinct lines, each on its own rays: O(d1) (+) O(d2)
    f = b_zero(3, (2, 3, 0, 0), lines=[(1, 0), (1, 0), None, None])
    assert is_locally_free(f)
    assert chern_total(f) == TruncPoly(3, (1, 5)) * TruncPoly(3, (1, 0))
    g = b_zero(3, (2, 3, 0, 0), lines=[(1, 0), (0, 1), None, None])
    assert is_locally_free(g)
    assert chern_total(g) == TruncPoly(3, (1, 2)) * TruncPoly(3, (1, 3))


def test_chern_general_vs_resolution():
    # three distinct active lines: genuinely reflexive, not locally free
    f = b_zero(3, (1, 1, 1, 0))
    assert not is_locally_free(f)
    c = chern_total(f)
    assert c == TruncPoly(3, (1, 3, 3, 1))
    assert c[3] == chern_k_general(f, 3) == elementary_symmetric(f, 3)


def test_general_b_chern():
    # non-normalized data: chern_k_general's binomial expansion in b
    f = R2Filtration(
        Fan(4),
        (
            RayDatum(-1, 1, (1, 0)),
            RayDatum(-2, 0, (1, 1)),
            RayDatum(0, 2, (1, 2)),
            RayDatum(-1, 0, (1, 3)),
            RayDatum(0, 0),
        ),
    )
    c = chern_total(f)
    for k in (3, 4):
        assert c[k] == chern_k_general(f, k)


def test_slope():
    f = b_zero(4, (1, 1, 1, 0, 0))
    assert slope(f) == Fraction(3, 2)
    shifted = normalize(f, "a_zero")
    assert slope(shifted) == slope(f) - Fraction(2 * 3, 2)


def test_stability_verdicts():
    # distinct lines sharing no majority: stable
    assert stability(b_zero(4, (1, 1, 1, 0, 0))) is Stability.STABLE
    # one line carrying exactly half of c: strictly semistable
    assert stability(b_zero(4, (2, 1, 1, 0, 0))) is Stability.STRICTLY_SEMISTABLE
    # one line carrying more than half: unstable
    assert stability(b_zero(4, (3, 1, 1, 0, 0))) is Stability.UNSTABLE
    # no active ray at all: split sum of equal line bundles
    assert stability(b_zero(3, (0, 0, 0, 0))) is Stability.STRICTLY_SEMISTABLE
    # same line on all active rays: maximally unstable
    same = b_zero(3, (1, 2, 0, 0), lines=[(1, 0), (1, 0), None, None])
    assert stability(same) is Stability.UNSTABLE


def test_discriminant_and_bogomolov():
    f = b_zero(4, (1, 1, 1, 0, 0))
    assert discriminant(f) == 4 * 3 - 9 == 3
    assert bogomolov_ok(f) is True
    g = b_zero(4, (3, 1, 1, 0, 0))
    assert stability(g) is Stability.UNSTABLE
    assert bogomolov_ok(g) is None  # no claim for unstable data
    # semistable split data sits on the boundary Delta = 0 or below
    h = b_zero(3, (2, 2, 0, 0), lines=[(1, 0), (1, 1), None, None])
    assert stability(h) is Stability.STRICTLY_SEMISTABLE
    assert discriminant(h) == 4 * 4 - 16 == 0
    assert bogomolov_ok(h) is True


def test_positivity():
    assert chern_vector_positivity((1, 13, 48, 36, 0))
    assert not chern_vector_positivity((1, 13, 48, -1, 0))
    f = normalize(b_zero(4, (1, 6, 6, 0, 0)), "a_zero")
    assert normalized_positivity(f)
    with pytest.raises(ValueError):
        normalized_positivity(b_zero(4, (1, 6, 6, 0, 0)))


def test_prescribe_reflexive():
    target = TruncPoly(4, (1, 13, 48, 36, 0))
    f = prescribe_reflexive(target)
    assert isinstance(f, R2Filtration)
    assert chern_total(f) == target
    assert f.c_vec == (1, 6, 6, 0, 0)
    # no multiset of nonnegative integers has e_1 = 1, e_2 = 1
    assert prescribe_reflexive(TruncPoly(3, (1, 1, 1, 0))) is NO_SPLIT
    with pytest.raises(ValueError):
        prescribe_reflexive(TruncPoly(3, (2, 1)))


def test_multifiltration_roundtrip():
    for c in [(1, 6, 6, 0, 0), (0, 0, 0, 0, 0), (2, 1, 1, 0, 0)]:
        f = b_zero(4, c)
        assert from_multifiltration(to_multifiltration(f)) == f
    g = R2Filtration(
        Fan(3),
        (
            RayDatum(-1, 2, (1, 0)),
            RayDatum(0, 3, (1, 1)),
            RayDatum(2, 2, None),
            RayDatum(-4, 0, (1, 2)),
        ),
    )
    assert from_multifiltration(to_multifiltration(g)) == g
