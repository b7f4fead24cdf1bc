import pytest

from ecodyn import dims
from ecodyn.dims import DIMENSIONLESS, FLOW, MONEY, TIME, Dimension, check_relation, var
from ecodyn.errors import StructuralError


def test_base_constants():
    assert MONEY == Dimension(1, 0)
    assert TIME == Dimension(0, 1)
    assert DIMENSIONLESS == Dimension(0, 0)
    assert FLOW == Dimension(1, -1)


def test_dimension_arithmetic():
    assert MONEY / TIME == FLOW
    assert FLOW * TIME == MONEY
    assert (MONEY * MONEY).money_exp == 2
    assert FLOW.integrated_dt() == MONEY
    assert MONEY.differentiated_dt() == FLOW


def test_rendering():
    assert FLOW.render() == "$·s^-1"
    assert MONEY.render() == "$"
    assert TIME.render() == "s"
    assert DIMENSIONLESS.render() == "1"
    assert Dimension(2, -3).render() == "$^2·s^-3"


def test_capital_growth_equals_investment_consistent():
    # Kdot = I with K a stock and I a flow: both sides are $/s
    K = var("K", MONEY)
    I = var("I", FLOW)
    report = check_relation(K.derivative_dt(), I)
    assert report.consistent
    assert report.lhs_dim == FLOW
    assert report.rhs_dim == FLOW


def test_stock_equals_flow_inconsistent():
    # K = nu*Y with dimensionless nu: $ vs $/s
    K = var("K", MONEY)
    nu = var("nu", DIMENSIONLESS)
    Y = var("Y", FLOW)
    report = check_relation(K, nu * Y)
    assert not report.consistent
    assert report.lhs_dim == MONEY
    assert report.rhs_dim == FLOW
    assert report.first_violation is not None


def test_stock_equals_integrated_flow_consistent():
    K = var("K", MONEY)
    nu = var("nu", DIMENSIONLESS)
    Y = var("Y", FLOW)
    report = check_relation(K, nu * Y.integral_dt())
    assert report.consistent


def test_goodwin_stock_flow_time_mix_inconsistent():
    # K = nu*Y + a*t with a itself a flow: the sum mixes $/s and $
    K = var("K", MONEY)
    nu = var("nu", DIMENSIONLESS)
    Y = var("Y", FLOW)
    a = var("a", FLOW)
    t = var("t", TIME)
    report = check_relation(K, nu * Y + a * t)
    assert not report.consistent
    violation = report.first_violation
    assert violation is not None
    assert violation.side == "rhs"
    assert violation.left_dim == FLOW
    assert violation.right_dim == MONEY


def test_nu_tagging_resolves_both_ways():
    # tagging nu with TIME makes K = nu*Y consistent; DIMENSIONLESS breaks it
    K = var("K", MONEY)
    Y = var("Y", FLOW)
    assert check_relation(K, var("nu", TIME) * Y).consistent
    assert not check_relation(K, var("nu", DIMENSIONLESS) * Y).consistent


def test_verdict_symmetric_in_sides():
    K = var("K", MONEY)
    Y = var("Y", FLOW)
    nu = var("nu", DIMENSIONLESS)
    assert (
        check_relation(K, nu * Y).consistent
        == check_relation(nu * Y, K).consistent
    )
    lhs = var("a", FLOW) + var("b", FLOW)
    rhs = var("c", FLOW)
    assert check_relation(lhs, rhs).consistent == check_relation(rhs, lhs).consistent


def test_derivative_of_integral_restores_dimension():
    Y = var("Y", FLOW)
    expr = Y.integral_dt().derivative_dt()
    report = check_relation(expr, Y)
    assert report.consistent
    assert report.lhs_dim == FLOW


def test_violation_reports_first_offending_node():
    bad = var("a", MONEY) + var("b", TIME)
    report = check_relation(bad * var("c", FLOW), var("d", FLOW))
    v = report.first_violation
    assert v is not None
    assert "a + b" in v.expr
    assert v.path == (0,)


def test_malformed_tree_rejected():
    with pytest.raises(StructuralError):
        dims.DimExpr("add", children=(var("a", MONEY),))
    with pytest.raises(StructuralError):
        dims.DimExpr("leaf", name="x", dim=None)
    with pytest.raises(StructuralError):
        dims.DimExpr("frobnicate", children=(var("a", MONEY), var("b", MONEY)))
    with pytest.raises(StructuralError):
        var("a", MONEY) + 3  # type: ignore[operator]


def test_render_expressions():
    K = var("K", MONEY)
    Y = var("Y", FLOW)
    nu = var("nu", DIMENSIONLESS)
    assert (nu * Y.integral_dt()).render() == "nu*int(Y)dt"
    assert (K.derivative_dt()).render() == "d(K)/dt"
    assert ((K + K) * Y).render() == "(K + K)*Y"
