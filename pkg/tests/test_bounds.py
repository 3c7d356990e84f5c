"""Envelope algebra: closed forms, poles, grids, and the derived constants."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ddestab import (
    BoundTable,
    NoCrossingError,
    PoleDomainError,
    RationalBound,
    build_bound_table,
    d_branch,
    derived_constants,
    eval_A,
    eval_B,
    eval_D,
    eval_R,
    eval_RR,
    eval_lambda_map,
    eval_r,
    solve_x2,
)

B15 = RationalBound(-1.5, 1.0)

# hand-derived closed values at (a, b) = (-1.5, 1):
#   P(x) = -1.5 (x - log(1+x)),  A(1) = 1 + r(1) - P(1)/r(1),  r(1) = -3/4
A1_EXPECTED = 0.25 - 2.0 * (1.0 - math.log(2.0))
B1_EXPECTED = -1.5 * (0.75 - math.log(1.75)) / 0.75


def test_constants_reference_point():
    assert B15.a_prime0 == pytest.approx(-1.0, abs=1e-12)
    assert B15.a_second0 == pytest.approx(8.0 / 3.0, abs=1e-12)
    assert B15.b_prime0 == pytest.approx(-1.125, abs=1e-12)
    assert B15.nu == pytest.approx(-0.75, abs=1e-12)
    assert solve_x2(B15) == pytest.approx(0.5, abs=1e-12)


def test_construction_rejects_bad_parameters():
    with pytest.raises(ValueError):
        RationalBound(0.0, 1.0)
    with pytest.raises(ValueError):
        RationalBound(1.0, 1.0)
    with pytest.raises(ValueError):
        RationalBound(-1.0, -0.1)


def test_domain_low():
    assert B15.domain_low == -1.0
    assert RationalBound(-1.0, 0.0).domain_low == -math.inf
    assert RationalBound(-1.0, 2.0).domain_low == -0.5


def test_r_spot_values():
    assert eval_r(B15, 1.0) == pytest.approx(-0.75, abs=1e-15)
    assert eval_r(B15, 0.0) == 0.0
    assert eval_r(RationalBound(-2.0, 0.0), 3.0) == -6.0


def test_A_B_closed_spot_values():
    assert eval_A(B15, 1.0) == pytest.approx(A1_EXPECTED, abs=1e-13)
    assert eval_B(B15, 1.0) == pytest.approx(B1_EXPECTED, abs=1e-13)


def test_b_zero_linear_case():
    lin = RationalBound(-1.5, 0.0)
    # A(x) = (a + 1/2) x and B(x) = -(a^2/2) x when the envelope is linear
    assert eval_A(lin, 2.0) == pytest.approx(-2.0, abs=1e-12)
    assert eval_B(lin, 1.0) == pytest.approx(-1.125, abs=1e-12)
    assert lin.a_second0 == 0.0
    assert lin.nu == -math.inf


def test_quadrature_route_matches_closed_form():
    for a, b in ((-1.5, 1.0), (-1.2, 1.0), (-2.0, 0.0)):
        bound = RationalBound(a, b)
        for x in (-0.9, -0.3, 0.05, 0.5, 1.0, 3.0, 10.0):
            ac = eval_A(bound, x)
            aq = eval_A(bound, x, method="quad")
            assert aq == pytest.approx(ac, abs=1e-10 * max(1.0, abs(ac)))
            try:
                bc = eval_B(bound, x)
            except PoleDomainError:
                # inner limit out of domain: both routes must agree on that
                with pytest.raises(PoleDomainError):
                    eval_B(bound, x, method="quad")
                continue
            bq = eval_B(bound, x, method="quad")
            assert bq == pytest.approx(bc, abs=1e-10 * max(1.0, abs(bc)))


def test_taylor_ball_agreement():
    # both routes use the same first-order value inside the ball
    for x in (1e-7, -1e-7, 9e-7):
        assert eval_A(B15, x) == eval_A(B15, x, method="quad")
        assert eval_A(B15, x) == B15.a_prime0 * x + 0.0
        assert eval_B(B15, x) == B15.b_prime0 * x + 0.0
    assert eval_A(B15, 0.0) == 0.0
    assert eval_B(B15, 0.0) == 0.0
    assert eval_lambda_map(B15, 0.0) == 0.0
    assert eval_lambda_map(B15, 1e-7) == 0.0


def test_series_log_crossover_continuity():
    # closed form switches between series and log1p near u = 1e-3
    for x in (9.99e-4, 1.001e-3):
        ac = eval_A(B15, x)
        aq = eval_A(B15, x, method="quad")
        assert ac == pytest.approx(aq, abs=1e-14)


def test_R_spot_values_and_pole():
    assert eval_R(B15, 1.0) == pytest.approx(-3.0 / 7.0, abs=1e-14)
    assert eval_R(B15, 0.0) == 0.0
    with pytest.raises(PoleDomainError):
        eval_R(B15, -0.75)
    with pytest.raises(PoleDomainError):
        eval_R(B15, -0.8)
    assert math.isfinite(eval_R(B15, -0.74))


def test_RR_identity_at_sharp_slope():
    # (R'(0))^2 = 1 at a = -1.5 and the composition collapses to x exactly
    for x in (0.1, 0.25, 0.4, 0.49):
        assert eval_RR(B15, x) == x


def test_RR_contracts_inside_sharp_range():
    bound = RationalBound(-1.4, 1.0)
    x2 = solve_x2(bound)
    for x in (0.1 * x2, 0.5 * x2, 0.9 * x2):
        assert eval_RR(bound, x) < x


def test_lambda_map_reference_value():
    # r∘r(-r(1)/2) at (-1.25, 1) composes by hand to 125/236
    lam = eval_lambda_map(RationalBound(-1.25, 1.0), 1.0)
    assert lam == pytest.approx(125.0 / 236.0, abs=1e-14)
    with pytest.raises(ValueError):
        eval_lambda_map(B15, -0.1)


def test_lambda_slope_at_zero():
    for a in (-1.0, -1.25, -0.5):
        bound = RationalBound(a, 1.0)
        h = 1e-4
        slope = (4.0 * eval_lambda_map(bound, h) - eval_lambda_map(bound, 2.0 * h)) / (2.0 * h)
        assert slope == pytest.approx(abs(a) ** 3 / 2.0, abs=1e-6)


def test_solve_x2():
    assert solve_x2(RationalBound(-2.0, 1.0)) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(NoCrossingError):
        solve_x2(RationalBound(-1.5, 0.0))
    with pytest.raises(NoCrossingError):
        solve_x2(RationalBound(-0.9, 1.0))


def test_switch_continuity_at_x2():
    for a in (-1.1, -1.25, -1.5):
        bound = RationalBound(a, 1.0)
        x2 = solve_x2(bound)
        assert abs(eval_A(bound, x2) - eval_B(bound, x2)) < 1e-9


def test_d_branch_and_eval_D():
    x2 = solve_x2(B15)
    assert d_branch(B15, 0.5 * x2) == "A"
    assert d_branch(B15, 2.0 * x2) == "B"
    assert eval_D(B15, 0.25) == eval_A(B15, 0.25)
    assert eval_D(B15, 1.0) == eval_B(B15, 1.0)
    with pytest.raises(ValueError):
        d_branch(B15, -0.1)


def test_derived_constants_payload():
    c = derived_constants(B15)
    assert c["A_prime0"] == pytest.approx(-1.0, abs=1e-12)
    assert c["A_second0"] == pytest.approx(8.0 / 3.0, abs=1e-12)
    assert c["B_prime0"] == pytest.approx(-1.125, abs=1e-12)
    assert c["nu"] == pytest.approx(-0.75, abs=1e-12)
    assert c["x2"] == pytest.approx(0.5, abs=1e-12)
    assert c["x2_reason"] == ""

    c0 = derived_constants(RationalBound(-1.0, 0.0))
    assert c0["x2"] is None
    assert c0["x2_reason"] == "no-crossing"
    assert c0["nu"] is None


def test_bound_table_csv_shape():
    table = build_bound_table(B15, [-0.9, -0.5, 0.0, 0.25, 1.0])
    lines = table.to_csv().splitlines()
    assert lines[0] == "x,A,B,D,R,branch"
    by_x = {row.x: row for row in table.rows}
    # past nu the R cell is empty
    assert by_x[-0.9].R is None
    assert by_x[-0.5].R is not None
    # x = 0 row is exactly zero everywhere
    zero = by_x[0.0]
    assert (zero.A, zero.B, zero.D, zero.R) == (0.0, 0.0, 0.0, 0.0)
    # branch labels only on the nonnegative side
    assert by_x[0.25].branch == "A" and by_x[1.0].branch == "B"
    assert by_x[-0.5].branch == ""
    assert "D defined for x >= 0" in by_x[-0.5].reason


def test_bound_table_reason_column():
    table = build_bound_table(B15, [-0.9])
    csv = table.to_csv(include_reason=True)
    assert csv.splitlines()[0] == "x,A,B,D,R,branch,reason"
    assert "x <= nu" in csv


def test_bound_table_flags_R_outside_intended_range():
    assert build_bound_table(RationalBound(-0.5, 1.0), [0.0, 1.0]).notes
    assert not build_bound_table(B15, [0.0, 1.0]).notes


def test_bound_table_is_sorted_and_deterministic():
    xs = [1.0, -0.5, 0.25]
    t1 = build_bound_table(B15, xs)
    t2 = build_bound_table(B15, list(reversed(xs)))
    assert [r.x for r in t1.rows] == [-0.5, 0.25, 1.0]
    assert t1.to_csv() == t2.to_csv()


# ---------------------------------------------------------------------------
# property tests

bounds_st = st.builds(
    RationalBound,
    st.floats(min_value=-3.0, max_value=-0.05),
    st.one_of(st.just(0.0), st.floats(min_value=0.05, max_value=3.0)),
)


@given(bounds_st, st.floats(min_value=-0.9, max_value=10.0))
def test_r_is_decreasing(bound, x):
    if bound.b > 0.0 and x <= bound.domain_low * 0.999:
        return
    lo = max(-0.9, bound.domain_low * 0.99)
    x = max(x, lo)
    h = 1e-3 * max(1.0, abs(x))
    assert eval_r(bound, x) > eval_r(bound, x + h)


@given(bounds_st, st.floats(min_value=1e-4, max_value=10.0))
@settings(max_examples=60)
def test_closed_vs_quadrature_property(bound, x):
    ac = eval_A(bound, x)
    aq = eval_A(bound, x, method="quad")
    assert abs(ac - aq) <= 1e-10 * max(1.0, abs(ac))
    bc = eval_B(bound, x)
    bq = eval_B(bound, x, method="quad")
    assert abs(bc - bq) <= 1e-10 * max(1.0, abs(bc))


@given(st.floats(min_value=-1.24, max_value=-0.3), st.floats(min_value=1e-4, max_value=100.0))
def test_lambda_contracts(a, M):
    assert eval_lambda_map(RationalBound(a, 1.0), M) < M


@given(st.floats(min_value=-2.5, max_value=-1.05), st.floats(min_value=1e-6, max_value=0.999))
def test_x2_is_the_crossing(a, frac):
    bound = RationalBound(a, 1.0)
    x2 = solve_x2(bound)
    assert eval_r(bound, x2) == pytest.approx(-x2, abs=1e-12 * max(1.0, x2))
    x = frac * x2
    assert eval_r(bound, x) < -x  # A-branch strictly inside
