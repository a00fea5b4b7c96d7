"""The jet of a universal symmetric Kashiwara-Vergne solution, up to second order in Y.

Conventions: ``A(X, Y) = rho X + beta(ad X) Y + 1/2 (pi(t,u) : [Y, Y])_X + O(Y^3)``
and ``B(X, Y) = alpha X + gamma(ad X) Y + O(Y^2)``.  The factor 1/2 appears
because pi describes the second derivative of A in Y, not its Taylor term.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction

from .exact_arith import (
    Series1,
    Series2,
    as_rational,
    biv_div_sum,
    biv_div_t,
    biv_skew_split,
    exp_series,
    lift_sum,
    parity_split,
    phi1_series,
    psi_series,
    rational_str,
    series_derivative,
    series_scale_arg,
    shift_down,
)
from .free_lie import (
    LieElement,
    apply_series,
    bch_y_jet,
    bracket_form,
    hall_words_of_degree,
    log_exp_product,
    rank_independence,
    to_hall_coords,
    x_gen,
    y_gen,
)


class PiConvention(str, Enum):
    """Prefactor multiplying ``s_skew / (t+u)`` in the formula for pi.

    ``NEG_PHI1_SUM`` is ``-phi1(t+u)``, i.e. it inverts ``1 - e^{t+u}``.
    ``PHI1_NEG_SUM`` is ``phi1(-(t+u))``, i.e. it inverts ``1 - e^{-(t+u)}``,
    the symbol of ``id - e^{-ad X}`` on bracket forms in X.
    """

    NEG_PHI1_SUM = "neg_phi1_sum"
    PHI1_NEG_SUM = "phi1_neg_sum"


# Selected by verify_eq1_jet: only this prefactor reproduces the
# Campbell-Hausdorff series at y-degree 2 (see tests/test_kv_core.py).
DEFAULT_PI_CONVENTION = PiConvention.PHI1_NEG_SUM


def _phi1_shifted(order: int) -> Series1:
    """``(phi1(t) - 1) / t``."""
    return shift_down(phi1_series(order + 1) - 1, 1)


def beta_series(alpha, order: int) -> Series1:
    """``phi1(-t) ((phi1(t) - 1)/t + alpha)``."""
    alpha = as_rational(alpha)
    return series_scale_arg(phi1_series(order), -1) * (_phi1_shifted(order) + alpha)


def gamma_odd_series(alpha, order: int) -> Series1:
    alpha = as_rational(alpha)
    _, odd = parity_split(_phi1_shifted(order) * series_scale_arg(phi1_series(order), -1))
    return Series1.monomial(1, order, alpha / 2) + odd * Fraction(1, 2)


def gamma_series(alpha, order: int) -> Series1:
    """``beta(t) - beta(0) + psi'(0) - psi'(t)``."""
    beta = beta_series(alpha, order)
    dpsi = series_derivative(psi_series(order + 1))
    return beta - beta[0] + dpsi[0] - dpsi


def _difference_quotient(order: int) -> Series2:
    """``(phi1(t+u) - phi1(u)) / t * phi1(t)`` to total degree ``order``."""
    phi = phi1_series(order + 1)
    num = lift_sum(phi) - Series2.in_u(phi)
    return biv_div_t(num) * Series2.in_t(phi1_series(order))


def s_series(alpha, gamma: Series1, order: int) -> Series2:
    alpha = as_rational(alpha)
    n = min(order, gamma.order)
    return (
        _difference_quotient(n)
        + Series2.monomial(0, 1, n, alpha)
        - Series2.in_u(gamma.truncate(n)) * 2
    )


def _prefactor(convention: PiConvention, order: int) -> Series1:
    phi = phi1_series(order)
    if PiConvention(convention) is PiConvention.NEG_PHI1_SUM:
        return -phi
    return series_scale_arg(phi, -1)


def pi_series(alpha, gamma: Series1, order: int, convention=None) -> Series2:
    """Skew series pi with ``A_2(X, Y) = (pi : [Y, Y])_X``.

    Raises ``NotDivisible`` unless the odd part of ``gamma`` is the one forced
    by the first-order equation.  The result is known to total degree
    ``min(order, gamma.order - 1)``.
    """
    convention = DEFAULT_PI_CONVENTION if convention is None else PiConvention(convention)
    s = s_series(alpha, gamma, min(order + 1, gamma.order))
    _, skew = biv_skew_split(s)
    quotient = biv_div_sum(skew)
    return lift_sum(_prefactor(convention, quotient.order)) * quotient


@dataclass(frozen=True)
class KVSolutionJet:
    alpha: Fraction
    rho: Fraction
    beta: Series1
    gamma: Series1
    pi: Series2
    order: int
    convention: PiConvention = field(default=DEFAULT_PI_CONVENTION)

    def with_gamma(self, gamma: Series1) -> "KVSolutionJet":
        return replace(self, gamma=gamma)

    def a_jet(self, order: int | None = None) -> LieElement:
        n = self.order if order is None else order
        x, y = x_gen(n), y_gen(n)
        return x * self.rho + apply_series(self.beta, x, y) + bracket_form(self.pi, y, y, x) * Fraction(1, 2)

    def b_jet(self, order: int | None = None) -> LieElement:
        n = self.order if order is None else order
        x, y = x_gen(n), y_gen(n)
        return x * self.alpha + apply_series(self.gamma, x, y)

    def to_json(self) -> dict:
        return {
            "alpha": rational_str(self.alpha),
            "rho": rational_str(self.rho),
            "beta": self.beta.to_json(),
            "gamma": self.gamma.to_json(),
            "pi": self.pi.to_json(),
            "order": self.order,
            "pi_convention": self.convention.value,
        }


def kv_jet(alpha, order: int, convention=None) -> KVSolutionJet:
    alpha = as_rational(alpha)
    convention = DEFAULT_PI_CONVENTION if convention is None else PiConvention(convention)
    gamma = gamma_series(alpha, order)
    return KVSolutionJet(
        alpha=alpha,
        rho=Fraction(0),
        beta=beta_series(alpha, order),
        gamma=gamma,
        pi=pi_series(alpha, gamma, order - 1, convention),
        order=order,
        convention=convention,
    )


# ---------------------------------------------------------------------------
# verification against the Campbell-Hausdorff series


def _failures(diff: LieElement, y_degrees) -> list[dict]:
    out = []
    for k in y_degrees:
        part = diff.y_degree_part(k)
        for d in part.degrees():
            for w, c in zip(hall_words_of_degree(d), to_hall_coords(part, d)):
                if c != 0:
                    out.append({"degree": d, "y_degree": k, "hall_word": str(w), "diff": rational_str(c)})
    return out


def eq1_sides(jet: KVSolutionJet, order: int) -> tuple[LieElement, LieElement]:
    """Both sides of the first KV equation with X = x, Y = y, to total degree ``order``."""
    x, y = x_gen(order), y_gen(order)
    lhs = log_exp_product(y, x) - x - y
    one_minus_exp_neg = -(exp_series(order, -1) - 1)
    exp_minus_one = exp_series(order) - 1
    rhs = apply_series(one_minus_exp_neg, x, jet.a_jet(order)) + apply_series(exp_minus_one, y, jet.b_jet(order))
    return lhs, rhs


def verify_eq1_jet(jet: KVSolutionJet, order: int) -> dict:
    """Compare both sides of the first KV equation at y-degrees 0, 1, 2.

    Higher y-degrees would need the unknown second-order jet of B.
    """
    lhs, rhs = eq1_sides(jet, order)
    failures = _failures(lhs - rhs, (0, 1, 2))
    return {
        "check": "verify_eq1_jet",
        "order": order,
        "alpha": rational_str(jet.alpha),
        "pi_convention": jet.convention.value,
        "pass": not failures,
        "failures": failures,
    }


def select_pi_convention(alpha, order: int) -> dict:
    """Run the first-equation check under both prefactors and report which pass."""
    results = {}
    for conv in PiConvention:
        results[conv.value] = verify_eq1_jet(kv_jet(alpha, order, conv), order)["pass"]
    passing = [c for c, ok in results.items() if ok]
    return {
        "check": "select_pi_convention",
        "order": order,
        "alpha": rational_str(as_rational(alpha)),
        "results": results,
        "selected": passing[0] if len(passing) == 1 else None,
        "pass": len(passing) == 1,
    }


def d2_series(order: int) -> Series2:
    return _difference_quotient(order)


def verify_lemma_d2_report(order: int) -> dict:
    """Twice the y-degree-2 part of ``ln(exp(y) exp(x))`` against its bracket-form closed form."""
    if order < 3:
        raise ValueError("order must be >= 3")
    second = bch_y_jet(order, 2)[2] * 2
    x, y = x_gen(order), y_gen(order)
    closed = bracket_form(d2_series(order - 2), y, y, x)
    failures = _failures(second - closed, (2,))
    return {"check": "verify_lemma_d2", "order": order, "pass": not failures, "failures": failures}


def verify_lemma_d2(order: int) -> bool:
    return verify_lemma_d2_report(order)["pass"]


# ---------------------------------------------------------------------------
# symmetry


def _bidegree_le_one(e: LieElement) -> LieElement:
    """Part of x-degree <= 1 and y-degree <= 1."""
    acc = LieElement.zero(e.order)
    for d in (1, 2):
        if d > e.order:
            break
        h = e.homogeneous(d)
        for k in range(d + 1):
            if k <= 1 and d - k <= 1:
                acc = acc + h.y_degree_part(k)
    return acc


def symmetric_alpha() -> Fraction:
    """The unique alpha with ``beta_alpha(0) = -alpha``; beta_alpha(0) is affine in alpha."""
    b0 = beta_series(0, 0)[0]
    slope = beta_series(1, 0)[0] - b0
    if slope == -1:
        raise ArithmeticError("beta_alpha(0) + alpha does not depend on alpha")
    return -b0 / (slope + 1)


def verify_symmetry_order1_report(alpha, order: int = 2) -> dict:
    """Compare ``A(X, Y)`` with ``B(-Y, -X)`` on terms of degree <= 1 in each variable."""
    alpha = as_rational(alpha)
    n = max(order, 2)
    beta = beta_series(alpha, n)
    gamma = gamma_series(alpha, n)
    x, y = x_gen(2), y_gen(2)
    a_side = _bidegree_le_one(x * 0 + apply_series(beta.truncate(2), x, y))
    b_side = _bidegree_le_one((-y) * alpha + apply_series(gamma.truncate(2), -y, -x))
    diff = a_side - b_side
    failures = []
    for d in (1, 2):
        for w, c in zip(hall_words_of_degree(d), to_hall_coords(diff, d)):
            if c != 0:
                failures.append({"degree": d, "hall_word": str(w), "diff": rational_str(c)})
    unique = symmetric_alpha()
    return {
        "check": "verify_symmetry_order1",
        "order": order,
        "alpha": rational_str(alpha),
        "beta0": rational_str(beta[0]),
        "beta1": rational_str(beta[1]),
        "gamma1": rational_str(gamma[1]),
        "symmetric_alpha": rational_str(unique),
        "constant_term_ok": beta[0] == -alpha,
        "bidegree_11_ok": beta[1] == -gamma[1],
        "pass": not failures,
        "failures": failures,
    }


def verify_symmetry_order1(alpha, order: int = 2) -> bool:
    return verify_symmetry_order1_report(alpha, order)["pass"]


# ---------------------------------------------------------------------------
# independence lemmas


def lemma_l14_check(n: int, order: int | None = None) -> bool:
    """``(u^{2n+1} : [y,y])_x`` lies outside the span of ``((t+u) t^l u^{2n-l} : [y,y])_x``."""
    d = 2 * n + 3
    order = d if order is None else order
    x, y = x_gen(order), y_gen(order)
    target = bracket_form(Series2.monomial(0, 2 * n + 1, 2 * n + 1), y, y, x)
    span = []
    for l in range(2 * n + 1):
        xi = Series2({(l + 1, 2 * n - l): 1, (l, 2 * n - l + 1): 1}, 2 * n + 1)
        span.append(bracket_form(xi, y, y, x))
    _, member = rank_independence(span, d, target)
    return not member


def skew_images(n: int, order: int | None = None) -> list[LieElement]:
    """Bracket-form images of the skew monomials ``t^j u^{n-j} - u^j t^{n-j}``, ``j < n - j``."""
    order = n + 2 if order is None else order
    x, y = x_gen(order), y_gen(order)
    out = []
    for j in range(n + 1):
        if j < n - j:
            xi = Series2({(j, n - j): 1, (n - j, j): -1}, n)
            out.append(bracket_form(xi, y, y, x))
    return out


def skew_injectivity_check(n: int, order: int | None = None) -> bool:
    images = skew_images(n, order)
    rank, _ = rank_independence(images, n + 2)
    return rank == len(images)


# ---------------------------------------------------------------------------
# rigidity


def rigidity_report(alpha, order: int) -> dict:
    """Perturb the jet and record which equation rejects each perturbation."""
    from .exact_arith import NotDivisible
    from .trace_eq import verify_eq2_linearized

    alpha = as_rational(alpha)
    jet = kv_jet(alpha, order)
    out = {"check": "rigidity", "order": order, "alpha": rational_str(alpha)}

    odd = jet.gamma + Series1.monomial(1, order)
    try:
        pi_series(alpha, odd, order - 1)
        out["gamma_plus_t"] = {"rejected_by": None}
    except NotDivisible as exc:
        out["gamma_plus_t"] = {"rejected_by": "pi_series", "degree": exc.degree, "residue": rational_str(exc.residue)}

    even = jet.gamma + Series1.monomial(2, order)
    eq1 = verify_eq1_jet(jet.with_gamma(even), order)
    # with pi rebuilt from the perturbed gamma the first equation still holds:
    # it never sees the even part of gamma, only the trace equation does
    eq1_rebuilt = verify_eq1_jet(replace(jet, gamma=even, pi=pi_series(alpha, even, order - 1)), order)
    eq2 = verify_eq2_linearized(alpha, even, jet.rho, order)
    out["gamma_plus_t2"] = {
        "eq1_pass": eq1["pass"],
        "eq1_pass_with_rebuilt_pi": eq1_rebuilt["pass"],
        "eq2_pass": eq2["pass"],
        "rejected_by": "verify_eq1_jet" if not eq1["pass"] else ("verify_eq2_linearized" if not eq2["pass"] else None),
    }

    eq2_rho = verify_eq2_linearized(alpha, jet.gamma, jet.rho + 1, order)
    out["rho_plus_1"] = {
        "eq2_pass": eq2_rho["pass"],
        "rejected_by": None if eq2_rho["pass"] else "verify_eq2_linearized",
    }
    out["pass"] = all(out[k]["rejected_by"] is not None for k in ("gamma_plus_t", "gamma_plus_t2", "rho_plus_1"))
    return out
