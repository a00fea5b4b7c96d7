from fractions import Fraction as F

import pytest
import sympy

from kvjet.appendix_cmp import (
    am_beta_series,
    am_gamma_series,
    am_lhs,
    am_pi_series,
    compare_solutions_report,
    first_divergence,
    g_series,
    gamma_vergne,
    r_series,
    universal_lhs,
    vergne_rhs,
)
from kvjet.exact_arith import Series1, euler_operator, parity_split
from kvjet.kv_core import beta_series, gamma_series

Q = F(1, 4)
t = sympy.Symbol("t")


def sympy_coeffs(expr, order):
    ser = sympy.series(expr, t, 0, order + 1).removeO()
    return [F(str(ser.coeff(t, k))) for k in range(order + 1)]


def test_r_series_against_sympy():
    assert list(r_series(8).coeffs) == sympy_coeffs((sympy.exp(t) - sympy.exp(-t) - 2 * t) / t**2, 8)
    assert g_series(4)[1] == F(1, 6)


def test_vergne_rhs_against_sympy():
    phi = t / (sympy.exp(t) - 1)
    r = (sympy.exp(t) - sympy.exp(-t) - 2 * t) / t**2
    expr = t / 8 - t * phi.subs(t, -t) * r * sympy.diff(phi, t) / 2
    assert list(vergne_rhs(7).coeffs) == sympy_coeffs(expr, 7)


def test_published_values():
    assert vergne_rhs(4).coeffs[1:] == (F(1, 8), F(1, 12), F(1, 72), F(-1, 360))
    assert universal_lhs(4).coeffs[1:] == (F(1, 8), F(1, 12), F(1, 72), F(-1, 480))
    assert am_lhs(4).coeffs[1:] == (F(1, 8), F(1, 12), F(1, 72), F(-1, 720))


def test_first_divergence():
    a, b, c = universal_lhs(8), vergne_rhs(8), am_lhs(8)
    assert first_divergence(a, b, c) == 4
    assert len({a[4], b[4], c[4]}) == 3
    assert first_divergence(a, a) is None


@pytest.mark.parametrize("order", [6, 12])
def test_beta_am_is_quarter_beta(order):
    assert am_beta_series(order) == beta_series(Q, order)


def test_odd_parts_agree_through_12():
    odd = [parity_split(s)[1] for s in (gamma_series(Q, 12), gamma_vergne(12), am_gamma_series(12))]
    assert odd[0] == odd[1] == odd[2]


def test_ode_round_trips():
    assert euler_operator(gamma_vergne(8), 2) == vergne_rhs(8)
    assert am_pi_series(6)[0] == F(1, 4)


def test_report():
    rep = compare_solutions_report(8)
    assert rep["pass"]
    assert rep["degree4"] == {"universal": "-1/480", "vergne": "-1/360", "am": "-1/720"}
    with pytest.raises(ValueError):
        compare_solutions_report(3)
