"""Chern prescription: the triangular solver, schedules, and families."""

from __future__ import annotations

from fractions import Fraction

import pytest

from tsk.prescribe import (
    Infeasible,
    PrescriptionProblem,
    S_kl,
    build_sequence,
    family_p4_even,
    family_p4_odd,
    family_p5,
    family_p5_candidates,
    family_pn,
    positivity_check_p4,
    schwarzenberger,
    solve_p,
    solve_p_closed_p4,
    solve_p_closed_p5,
    tilde_c,
    weight_schedule,
)
from tsk.multifilt import is_reflexive, reflexive_hull
from tsk.reflexive import Stability
from tsk.ring import TruncPoly


def test_problem_validation():
    prob = PrescriptionProblem(4, (1, 6, 6, 0, 0))
    assert prob.c_rho0 == 1
    assert prob.start_chern().render() == "1 + 13*H + 48*H^2 + 36*H^3"
    assert prob.target_chern().render() == "1 + 13*H + 48*H^2"
    with pytest.raises(ValueError):
        PrescriptionProblem(2, (1, 1, 1))
    with pytest.raises(ValueError):
        PrescriptionProblem(4, (1, 1, 1))  # wrong arity
    with pytest.raises(ValueError):
        PrescriptionProblem(4, (0, 1, 1, 0, 0))  # designated ray inactive
    with pytest.raises(ValueError):
        PrescriptionProblem(4, (1, -1, 1, 0, 0))


def test_tilde_c_oracle():
    prob = PrescriptionProblem(4, (1, 6, 6, 0, 0))
    assert tilde_c(prob.start_chern()) == (-108, 1872)
    # a target with no H^3+ defect has vanishing tilde_c
    assert tilde_c(TruncPoly(4, (1, 13, 48, 0, 0))) == (0, 0)
    with pytest.raises(ValueError):
        tilde_c(TruncPoly(4, (2, 0, 0, 0, 0)))


def test_weight_schedule_consecutive():
    p = (18, 240)
    # stage 3: weights -1..16; stage 4: 17..256 — one consecutive run
    weights = [weight_schedule(1, p, k, j) for k in (3, 4) for j in range(1, p[k - 3] + 1)]
    assert weights == list(range(-1, 257))
    with pytest.raises(ValueError):
        weight_schedule(1, p, 5, 1)
    with pytest.raises(ValueError):
        weight_schedule(1, p, 3, 19)


def test_schedule_power_sums():
    p = (18, 240)
    for k, l in [(3, 0), (3, 1), (4, 0)]:
        expected = sum(
            weight_schedule(1, p, k, j) ** l for j in range(1, p[k - 3] + 1)
        )
        assert S_kl(1, p, k, l) == expected
    with pytest.raises(ValueError):
        S_kl(1, p, 3, 2)  # l > n - k


def test_solve_p_oracles():
    sol = solve_p(PrescriptionProblem(4, (1, 6, 6, 0, 0)))
    assert sol.p == (18, 240)
    assert sol.chern == TruncPoly(4, (1, 13, 48, 0, 0))
    assert sol.delta == 23
    assert sol.stability is Stability.STABLE
    assert sol.schwarzenberger is None
    assert sol.injection_count == 258
    assert sol.p_k(3) == 18 and sol.p_k(4) == 240
    cert = sol.certificate()
    assert cert["indecomposable_if_smoothable"] is True
    assert cert["chern"] == "1 + 13*H + 48*H^2"

    even = solve_p(PrescriptionProblem(4, (1, 7, 7, 7, 0)))
    assert even.p == (245, 31752)
    assert even.delta == 188


def test_solve_p_infeasible():
    bad = solve_p(PrescriptionProblem(4, (1, 1, 1, 0, 0)))
    assert isinstance(bad, Infeasible)
    assert bad.reason == "NonInteger"
    assert bad.q == 3
    assert bad.value == Fraction(1, 2)
    assert "q=3" in str(bad)


def test_injection_params_schedule():
    sol = solve_p(PrescriptionProblem(4, (1, 6, 6, 0, 0)))
    params = list(sol.injection_params())
    assert len(params) == 258
    assert params[0] == (3, 1, (0, 1, 2), (-1, 0, 0))
    assert params[17] == (3, 18, (0, 1, 2), (-1, 0, 17))
    assert params[18] == (4, 1, (0, 1, 2, 3), (-1, 0, 18, 0))
    assert params[-1] == (4, 240, (0, 1, 2, 3), (-1, 0, 18, 239))


def test_closed_forms_match_solver():
    prob = PrescriptionProblem(4, (1, 6, 6, 0, 0))
    sol = solve_p(prob)
    start = prob.start_chern()
    p3, p4 = solve_p_closed_p4(start.coeffs, prob.c_rho0)
    assert (p3, p4) == sol.p
    assert positivity_check_p4(start, prob.c_rho0)

    for c in [(1, 120, 120, 0, 0, 0), (1, 12, 12, 0, 0, 0)]:
        prob5 = PrescriptionProblem(5, c)
        sol5 = solve_p(prob5)
        closed = solve_p_closed_p5(prob5.start_chern().coeffs)
        assert tuple(closed) == sol5.p


def test_schwarzenberger():
    # split pairs always satisfy every congruence
    for d1, d2 in [(0, 0), (2, 3), (-1, 4)]:
        assert schwarzenberger(d1 + d2, d1 * d2, 6) is None
    # the first violated modulus is reported (m = 2, 3 hold for (0, 1):
    # -2c2 = -2 = 0 mod 2 and -6c2 - 3c1c2 = -6 = 0 mod 6; m = 4 breaks)
    assert schwarzenberger(0, 1, 6) == 4
    # the running example passes through n = 4
    assert schwarzenberger(13, 48, 4) is None


def test_build_sequence_small_full():
    # the minimal P^3 family: two 3-drops, fully built and verified
    sol = family_pn(3)
    prob = sol.problem
    assert prob.c == (1, 2, 2, 0)
    assert sol.p == (2,)
    res = build_sequence(prob, sol)
    assert res.full and res.built == res.total == 2
    assert res.chern_final == sol.chern
    assert not is_reflexive(res.final)
    assert reflexive_hull(res.final) == res.start


def test_build_sequence_prefix():
    prob = PrescriptionProblem(4, (1, 6, 6, 0, 0))
    sol = solve_p(prob)
    res = build_sequence(prob, sol, limit=5)
    assert not res.full
    assert res.built == 5 and res.total == 258
    assert len(res.injections) == 5
    # the closure is exact even for partial builds
    assert res.chern_final == sol.chern
    # every built step is saturated with the scheduled weight
    for idx, inj in enumerate(res.injections):
        assert inj.saturated
        assert inj.m_Sigma == weight_schedule(1, sol.p, *_kj(sol, idx))


def _kj(sol, idx):
    for pos, (k, j, _, _) in enumerate(sol.injection_params()):
        if pos == idx:
            return k, j
    raise IndexError(idx)


def test_build_rejects_infeasible():
    prob = PrescriptionProblem(4, (1, 1, 1, 0, 0))
    bad = solve_p(prob)
    with pytest.raises(ValueError):
        build_sequence(prob, bad)


def test_family_p4_odd():
    for t in (1, 2):
        sol = family_p4_odd(t)
        assert sol.chern == TruncPoly(
            4, (1, 12 * t + 1, 12 * t * (3 * t + 1), 0, 0)
        )
        assert sol.p_k(3) == 18 * t * t
        assert sol.delta == 24 * t - 1
        assert sol.stability is Stability.STABLE
    with pytest.raises(ValueError):
        family_p4_odd(0)


def test_family_p4_even():
    sol = family_p4_even(1)
    t = 1
    assert sol.chern == TruncPoly(
        4, (1, 12 * t + 10, 12 * (t + 1) * (4 * t + 3), 0, 0)
    )
    big_t = 4 * t + 3
    c = sol.problem.start_chern()
    lhs = 4 * (c[1] * c[3] - c[4]) + 3 * c[3] ** 2
    assert lhs == 3 * (big_t * (big_t + 1) * (big_t + 2)) ** 2


def test_family_p5():
    cands = family_p5_candidates(1)
    assert set(cands) == {"c=120t", "c=12t"}
    sol = family_p5(1)
    assert sol.chern == TruncPoly(5, (1, 241, 14640, 0, 0, 0))
    assert sol.p == (7200, 26498400, 351211221073200)
    small = cands["c=12t"]
    assert not isinstance(small, Infeasible)
    assert small.chern == TruncPoly(5, (1, 25, 168, 0, 0, 0))
    assert small.p == (72, 3192, 5266380)
    assert small.delta == 47


def test_family_pn_minimal_multipliers():
    assert family_pn(3).problem.c[1] == 2
    assert family_pn(4).problem.c[1] == 4
    with pytest.raises(ValueError):
        family_pn(2)
