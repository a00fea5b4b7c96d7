"""The trace equation, linearized in epsilon, on the 3-dimensional algebra g_{lambda,mu}.

Basis (a, b, c) with ``[a,b] = 0, [a,c] = lambda c, [b,c] = mu c``.  lambda and
mu stay formal: every scalar is a polynomial in (lambda, mu), stored as a
``Series2`` whose monomial ``(i, j)`` means ``lambda^i mu^j``, truncated at
total degree N like the series it comes from.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

import numpy as np

from .exact_arith import (
    Series1,
    Series2,
    as_rational,
    parity_split,
    psi_series,
    series_derivative,
)
from .kv_core import beta_series, gamma_odd_series

Poly = Series2
PolyMatrix = list  # 3x3 nested lists of Poly


def _const(c, order: int) -> Poly:
    return Series2({(0, 0): as_rational(c)}, order)


def _lam(order: int) -> Poly:
    return Series2.monomial(1, 0, order)


def _mu(order: int) -> Poly:
    return Series2.monomial(0, 1, order)


def mat_zero(order: int) -> PolyMatrix:
    return [[Series2.zero(order) for _ in range(3)] for _ in range(3)]


def mat_identity(order: int) -> PolyMatrix:
    m = mat_zero(order)
    for i in range(3):
        m[i][i] = _const(1, order)
    return m


def mat_add(a: PolyMatrix, b: PolyMatrix) -> PolyMatrix:
    return [[a[i][j] + b[i][j] for j in range(3)] for i in range(3)]


def mat_scale(a: PolyMatrix, c) -> PolyMatrix:
    return [[a[i][j] * c for j in range(3)] for i in range(3)]


def mat_mul(a: PolyMatrix, b: PolyMatrix) -> PolyMatrix:
    order = min(a[0][0].order, b[0][0].order)
    out = mat_zero(order)
    for i in range(3):
        for j in range(3):
            acc = Series2.zero(order)
            for k in range(3):
                if not a[i][k].is_zero() and not b[k][j].is_zero():
                    acc = acc + a[i][k] * b[k][j]
            out[i][j] = acc
    return out


def mat_vec(a: PolyMatrix, v: Sequence[Poly]) -> list[Poly]:
    order = min(a[0][0].order, v[0].order)
    out = []
    for i in range(3):
        acc = Series2.zero(order)
        for k in range(3):
            acc = acc + a[i][k] * v[k]
        out.append(acc)
    return out


def trace(a: PolyMatrix) -> Poly:
    return a[0][0] + a[1][1] + a[2][2]


class QuadraticTraceModel:
    """``g_{lambda,mu}`` with formal lambda, mu, truncated at total degree ``order``."""

    def __init__(self, order: int):
        self.order = order

    def basis(self, name: str) -> list[Poly]:
        idx = "abc".index(name)
        return [_const(int(i == idx), self.order) for i in range(3)]

    def ad(self, v: Sequence[Poly]) -> PolyMatrix:
        """Matrix of ``w -> [v, w]`` in the basis (a, b, c); columns are images."""
        n = self.order
        lam, mu = _lam(n), _mu(n)
        va, vb, vc = v
        m = mat_zero(n)
        m[2][0] = -(lam * vc)  # [v, a] = -lambda v_c c
        m[2][1] = -(mu * vc)  # [v, b] = -mu v_c c
        m[2][2] = lam * va + mu * vb  # [v, c]
        return m

    @property
    def ad_a(self) -> PolyMatrix:
        return self.ad(self.basis("a"))

    @property
    def ad_b(self) -> PolyMatrix:
        return self.ad(self.basis("b"))

    def bracket(self, v, w) -> list[Poly]:
        return mat_vec(self.ad(v), w)

    def series_of(self, xi: Series1, m: PolyMatrix) -> PolyMatrix:
        """``xi(m)`` for a matrix with entries of positive degree."""
        n = self.order
        acc = mat_zero(n)
        power = mat_identity(n)
        for k in range(n + 1):
            if k > xi.order:
                break
            if xi.coeffs[k]:
                acc = mat_add(acc, mat_scale(power, xi.coeffs[k]))
            power = mat_mul(power, m)
        return acc

    def derivative_of_series(self, xi: Series1, m: PolyMatrix, direction: PolyMatrix) -> PolyMatrix:
        """``d/de xi(m + e direction)`` at e = 0, without assuming commutation."""
        n = self.order
        acc = mat_zero(n)
        powers = [mat_identity(n)]
        for _ in range(n):
            powers.append(mat_mul(powers[-1], m))
        for k in range(1, min(n, xi.order) + 1):
            c = xi.coeffs[k]
            if not c:
                continue
            for j in range(k):
                term = mat_mul(mat_mul(powers[j], direction), powers[k - 1 - j])
                acc = mat_add(acc, mat_scale(term, c))
        return acc


def trace_functional(xi: Series2) -> Poly:
    """``tr(xi(ad a, ad b)) = xi(lambda, mu) + 2 xi(0, 0)``."""
    return xi + _const(2 * xi[(0, 0)], xi.order)


def literal_trace(i: int, j: int, order: int) -> Poly:
    """``tr((ad a)^i (ad b)^j)`` by multiplying the 3x3 matrices."""
    model = QuadraticTraceModel(order)
    m = mat_identity(order)
    for _ in range(i):
        m = mat_mul(m, model.ad_a)
    for _ in range(j):
        m = mat_mul(m, model.ad_b)
    return trace(m)


def _poly_json(p: Poly) -> list:
    return p.to_json()


def eq2_sides(alpha, gamma: Series1, rho, order: int, f: Series1 | None = None) -> dict:
    """Both sides of the trace equation at X = a, Y = eps b, orders eps^0 and eps^1."""
    alpha = as_rational(alpha)
    rho = as_rational(rho)
    n = order
    model = QuadraticTraceModel(n)
    A, B = model.ad_a, model.ad_b
    f = psi_series(n) if f is None else f
    beta = beta_series(alpha, max(n - 1, 0))

    # delta_1 A(a, eps b) = rho id - eps sum_n beta_n sum_j (ad a)^j ad((ad a)^{n-1-j} b)
    delta1_eps = mat_zero(n)
    a_vec = model.basis("a")
    b_iter = [model.basis("b")]
    for _ in range(n):
        b_iter.append(model.bracket(a_vec, b_iter[-1]))
    a_powers = [mat_identity(n)]
    for _ in range(n):
        a_powers.append(mat_mul(a_powers[-1], A))
    for k in range(1, min(n - 1, beta.order) + 1):
        c = beta.coeffs[k]
        if not c:
            continue
        inner = mat_zero(n)
        for j in range(k):
            inner = mat_add(inner, mat_mul(a_powers[j], model.ad(b_iter[k - 1 - j])))
        delta1_eps = mat_add(delta1_eps, mat_scale(inner, -c))

    lhs0 = trace(mat_scale(A, rho))
    gamma_at_a = model.series_of(gamma.truncate(min(gamma.order, max(n - 1, 0))), A)
    lhs1 = trace(mat_mul(A, delta1_eps)) + trace(mat_mul(B, gamma_at_a))

    # psi(ad a) + psi(eps ad b) - psi(ad a + eps ad b); the last argument is
    # ad ln(exp(a) exp(eps b)), which equals ad a + eps ad b in this algebra
    f_a = model.series_of(f, A)
    f_zero = mat_scale(mat_identity(n), f.coeffs[0])
    rhs0 = trace(mat_add(mat_add(f_a, f_zero), mat_scale(f_a, -1)))
    f1 = f.coeffs[1] if f.order >= 1 else Fraction(0)
    rhs1 = trace(mat_scale(B, f1)) - trace(model.derivative_of_series(f, A, B))
    return {"lhs0": lhs0, "lhs1": lhs1, "rhs0": rhs0, "rhs1": rhs1}


def verify_eq2_linearized(alpha, gamma: Series1, rho, order: int, f: Series1 | None = None) -> dict:
    """Difference polynomials (lhs - rhs) of the trace equation at eps^0 and eps^1."""
    sides = eq2_sides(alpha, gamma, rho, order, f)
    d0 = sides["lhs0"] - sides["rhs0"]
    d1 = sides["lhs1"] - sides["rhs1"]
    return {
        "check": "verify_eq2_linearized",
        "order": order,
        "alpha": str(as_rational(alpha)),
        "rho": str(as_rational(rho)),
        "pass": d0.is_zero() and d1.is_zero(),
        "eps0": _poly_json(d0),
        "eps1": _poly_json(d1),
    }


def f_gamma(f: Series1, alpha, order: int) -> Series1:
    """``beta_alpha - beta_alpha(0) + f'(0) - f'(t)``."""
    beta = beta_series(alpha, order)
    df = series_derivative(f)
    return beta - beta[0] + df[0] - df


def f_consistency_check(f: Series1, alpha, order: int) -> tuple[Series1, bool]:
    """gamma for the f-variant of the trace equation, and whether a universal solution can exist."""
    n = min(order, f.order - 1)
    gamma_f = f_gamma(f, alpha, n)
    _, odd = parity_split(gamma_f)
    consistent = f.coeffs[0] == 0 and odd.agrees_with(gamma_odd_series(alpha, n))
    return gamma_f, consistent


# ---------------------------------------------------------------------------
# quadratic Lie algebras: sl_2


def _frac_matrix(rows) -> np.ndarray:
    return np.array([[Fraction(v) for v in row] for row in rows], dtype=object)


# basis (e, f, h): [h,e] = 2e, [h,f] = -2f, [e,f] = h; columns are images
SL2_AD = {
    "e": _frac_matrix([[0, 0, -2], [0, 0, 0], [0, 1, 0]]),
    "f": _frac_matrix([[0, 0, 0], [0, 0, 2], [-1, 0, 0]]),
    "h": _frac_matrix([[2, 0, 0], [0, -2, 0], [0, 0, 0]]),
}


def sl2_ad(coords: Sequence) -> np.ndarray:
    ce, cf, ch = (as_rational(c) for c in coords)
    return SL2_AD["e"] * ce + SL2_AD["f"] * cf + SL2_AD["h"] * ch


def killing_form_sl2() -> np.ndarray:
    basis = [SL2_AD[k] for k in "efh"]
    return np.array([[np.trace(a.dot(b)) for b in basis] for a in basis], dtype=object)


def _panel(seed: int = 20240) -> list[tuple]:
    rng = random.Random(seed)
    pairs = [((1, 0, 0), (0, 1, 0)), ((0, 0, 1), (1, 0, 0)), ((1, 0, 1), (0, 1, -2))]
    for _ in range(4):
        pairs.append(
            tuple(tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 7)) for _ in range(3)) for _ in range(2))
        )
    return pairs


def quadratic_trace_check(n_max: int, pairs=None) -> bool:
    """``tr((ad X)^{2n} ad Y) = 0`` on sl_2 for every pair in the panel and n <= n_max."""
    pairs = _panel() if pairs is None else pairs
    for xc, yc in pairs:
        ax, ay = sl2_ad(xc), sl2_ad(yc)
        ax2 = ax.dot(ax)
        power = np.identity(3, dtype=object) * Fraction(1)
        for n in range(n_max + 1):
            if np.trace(power.dot(ay)) != 0:
                return False
            power = power.dot(ax2)
    return True
