"""Exact rationals and truncated formal power series in one and two variables.

A ``Series1`` of order ``N`` knows the coefficients of ``t^0 .. t^N``; everything
beyond is unknown (not zero), so binary operations return the smaller order.
``Series2`` is truncated by total degree in ``(t, u)``.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Iterable, Mapping, Union

Rational = Fraction
Scalar = Union[int, Fraction]


class SeriesError(ArithmeticError):
    """Base class for series arithmetic failures."""


class DivisionByNonUnit(SeriesError):
    pass


class EmptySeries(SeriesError):
    pass


class NotDivisible(SeriesError):
    """Raised when a bivariate series is not divisible by ``t + u``.

    ``degree`` and ``residue`` name the first homogeneous component whose
    restriction to the anti-diagonal ``u = -t`` is nonzero.
    """

    def __init__(self, degree: int, residue: Fraction):
        self.degree = degree
        self.residue = residue
        super().__init__(
            f"not divisible by (t+u): degree-{degree} component has "
            f"xi(t,-t) coefficient {residue}"
        )


class ZeroDivisor(SeriesError):
    pass


def as_rational(value) -> Fraction:
    """Parse ints, Fractions and ``"p/q"`` strings into a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def rational_str(q: Fraction) -> str:
    """Lowest-terms ``p/q`` string (``p`` when the denominator is 1)."""
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# one variable


@dataclass(frozen=True)
class Series1:
    coeffs: tuple
    order: int

    def __post_init__(self):
        cs = tuple(Fraction(c) for c in self.coeffs)
        if len(cs) < self.order + 1:
            cs = cs + (Fraction(0),) * (self.order + 1 - len(cs))
        object.__setattr__(self, "coeffs", cs[: self.order + 1])
        if self.order < 0:
            raise ValueError("order must be >= 0")

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[Scalar], order: int | None = None) -> "Series1":
        cs = [as_rational(c) for c in coeffs]
        return cls(tuple(cs), len(cs) - 1 if order is None else order)

    @classmethod
    def constant(cls, c: Scalar, order: int) -> "Series1":
        return cls((as_rational(c),), order)

    @classmethod
    def monomial(cls, k: int, order: int, c: Scalar = 1) -> "Series1":
        cs = [Fraction(0)] * (order + 1)
        if k <= order:
            cs[k] = as_rational(c)
        return cls(tuple(cs), order)

    def __getitem__(self, k: int) -> Fraction:
        if k < 0:
            return Fraction(0)
        if k > self.order:
            raise IndexError(f"coefficient {k} lies beyond truncation order {self.order}")
        return self.coeffs[k]

    def __len__(self) -> int:
        return self.order + 1

    def truncate(self, order: int) -> "Series1":
        if order > self.order:
            raise ValueError(f"cannot extend a series of order {self.order} to {order}")
        return Series1(self.coeffs[: order + 1], order)

    def __add__(self, other):
        if not isinstance(other, Series1):
            other = Series1.constant(other, self.order)
        n = min(self.order, other.order)
        return Series1(tuple(self.coeffs[k] + other.coeffs[k] for k in range(n + 1)), n)

    __radd__ = __add__

    def __neg__(self):
        return Series1(tuple(-c for c in self.coeffs), self.order)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Series1):
            return series_mul(self, other)
        c = as_rational(other)
        return Series1(tuple(c * a for a in self.coeffs), self.order)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Series1):
            return series_div(self, other)
        c = as_rational(other)
        return Series1(tuple(a / c for a in self.coeffs), self.order)

    def __eq__(self, other):
        if not isinstance(other, Series1):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.coeffs, self.order))

    def agrees_with(self, other: "Series1") -> bool:
        """Equality on the common range of known coefficients."""
        n = min(self.order, other.order)
        return self.coeffs[: n + 1] == other.coeffs[: n + 1]

    def to_json(self) -> list:
        return [rational_str(c) for c in self.coeffs]

    def pretty(self, var: str = "t") -> str:
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mag = abs(c)
            if k == 0:
                body = rational_str(mag)
            else:
                mono = var if k == 1 else f"{var}^{k}"
                body = mono if mag == 1 else f"{rational_str(mag)} {mono}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(("+ " if c > 0 else "- ") + body)
        return " ".join(parts) if parts else "0"

    def __repr__(self):
        return f"Series1({self.pretty()} + O(t^{self.order + 1}))"


def series_mul(a: Series1, b: Series1) -> Series1:
    n = min(a.order, b.order)
    ac, bc = a.coeffs, b.coeffs
    out = []
    for k in range(n + 1):
        out.append(sum((ac[i] * bc[k - i] for i in range(k + 1)), Fraction(0)))
    return Series1(tuple(out), n)


def _leading_zeros(a: Series1) -> int:
    for k, c in enumerate(a.coeffs):
        if c != 0:
            return k
    return a.order + 1


def series_div(a: Series1, b: Series1) -> Series1:
    """Quotient ``a / b``.

    When ``b`` is not a unit, a common factor ``t^k`` is cancelled first; the
    result then loses ``k`` orders of validity.
    """
    k = _leading_zeros(b)
    if k > b.order:
        raise DivisionByNonUnit("division by a series with no known nonzero coefficient")
    if k > 0:
        if _leading_zeros(a) < k:
            raise DivisionByNonUnit(
                f"divisor has a zero of order {k} at t=0 that the dividend does not share"
            )
        a = shift_down(a, k)
        b = shift_down(b, k)
    n = min(a.order, b.order)
    inv0 = 1 / b.coeffs[0]
    out: list[Fraction] = []
    for m in range(n + 1):
        acc = a.coeffs[m] - sum((out[i] * b.coeffs[m - i] for i in range(m)), Fraction(0))
        out.append(acc * inv0)
    return Series1(tuple(out), n)


def shift_down(a: Series1, k: int) -> Series1:
    """Exact division by ``t^k`` of a series whose first ``k`` coefficients vanish."""
    if k == 0:
        return a
    if any(c != 0 for c in a.coeffs[:k]):
        raise DivisionByNonUnit(f"series is not divisible by t^{k}")
    if a.order < k:
        raise EmptySeries("no coefficients left after division by t^k")
    return Series1(a.coeffs[k:], a.order - k)


def shift_up(a: Series1, k: int = 1) -> Series1:
    """Multiplication by ``t^k``; the order grows by ``k``."""
    return Series1((Fraction(0),) * k + a.coeffs, a.order + k)


def series_scale_arg(a: Series1, c: Scalar) -> Series1:
    """Substitution ``t -> c t``."""
    c = as_rational(c)
    return Series1(tuple(a.coeffs[k] * c**k for k in range(a.order + 1)), a.order)


def series_derivative(a: Series1) -> Series1:
    if a.order == 0:
        raise EmptySeries("derivative of an order-0 series has no known coefficient")
    return Series1(tuple((k + 1) * a.coeffs[k + 1] for k in range(a.order)), a.order - 1)


def parity_split(a: Series1) -> tuple[Series1, Series1]:
    even = tuple(c if k % 2 == 0 else Fraction(0) for k, c in enumerate(a.coeffs))
    odd = tuple(c if k % 2 == 1 else Fraction(0) for k, c in enumerate(a.coeffs))
    return Series1(even, a.order), Series1(odd, a.order)


def euler_operator(a: Series1, k: int) -> Series1:
    """Apply ``t d/dt + k``; keeps the order."""
    return Series1(tuple((n + k) * c for n, c in enumerate(a.coeffs)), a.order)


def solve_euler_ode(f: Series1, k: int) -> Series1:
    """Solve ``t y' + k y = f`` coefficientwise: ``y_n = f_n / (n + k)``."""
    out = []
    for n, c in enumerate(f.coeffs):
        if n + k == 0:
            if c != 0:
                raise ZeroDivisor(f"t y' + {k} y = f has no series solution: f_{n} = {c}")
            raise ZeroDivisor(f"coefficient {n} of the solution is undetermined (n + k = 0)")
        out.append(c / (n + k))
    return Series1(tuple(out), f.order)


def exp_series(order: int, c: Scalar = 1) -> Series1:
    """``e^{c t}``."""
    c = as_rational(c)
    return Series1(tuple(c**k / factorial(k) for k in range(order + 1)), order)


# ---------------------------------------------------------------------------
# Bernoulli numbers and the named series

_bernoulli_cache: list[Fraction] = [Fraction(1)]
_bernoulli_lock = threading.Lock()


def bernoulli(m: int) -> Fraction:
    """Bernoulli number ``B_m`` with ``B_1 = -1/2``.

    Uses the recurrence ``sum_{j<=m} C(m+1, j) B_j = 0``.
    """
    if m < 0:
        raise ValueError("m must be >= 0")
    with _bernoulli_lock:
        cache = _bernoulli_cache
        while len(cache) <= m:
            n = len(cache)
            s = sum((comb(n + 1, j) * cache[j] for j in range(n)), Fraction(0))
            cache.append(-s / (n + 1))
        return cache[m]


def phi1_series(order: int) -> Series1:
    """``t / (e^t - 1)``, the exponential generating series of Bernoulli numbers."""
    return Series1(tuple(bernoulli(k) / factorial(k) for k in range(order + 1)), order)


def psi_series(order: int) -> Series1:
    """``-(phi1(t) - 1) / 2``."""
    return -(phi1_series(order) - 1) * Fraction(1, 2)


def phi1_inverse_series(order: int) -> Series1:
    """``(e^t - 1) / t``."""
    return Series1(tuple(Fraction(1, factorial(k + 1)) for k in range(order + 1)), order)


# ---------------------------------------------------------------------------
# two variables


@dataclass(frozen=True)
class Series2:
    coeffs: Mapping
    order: int

    def __post_init__(self):
        clean = {}
        for (i, j), c in dict(self.coeffs).items():
            if i < 0 or j < 0:
                raise ValueError("negative exponent")
            if i + j > self.order:
                continue
            c = Fraction(c)
            if c != 0:
                clean[(i, j)] = c
        object.__setattr__(self, "coeffs", clean)

    @classmethod
    def zero(cls, order: int) -> "Series2":
        return cls({}, order)

    @classmethod
    def monomial(cls, i: int, j: int, order: int, c: Scalar = 1) -> "Series2":
        return cls({(i, j): as_rational(c)}, order)

    @classmethod
    def in_t(cls, a: Series1) -> "Series2":
        return cls({(k, 0): c for k, c in enumerate(a.coeffs)}, a.order)

    @classmethod
    def in_u(cls, a: Series1) -> "Series2":
        return cls({(0, k): c for k, c in enumerate(a.coeffs)}, a.order)

    def __getitem__(self, key) -> Fraction:
        i, j = key
        if i + j > self.order:
            raise IndexError(f"monomial t^{i} u^{j} lies beyond truncation order {self.order}")
        return self.coeffs.get((i, j), Fraction(0))

    def items(self):
        return sorted(self.coeffs.items())

    def truncate(self, order: int) -> "Series2":
        if order > self.order:
            raise ValueError(f"cannot extend a series of order {self.order} to {order}")
        return Series2(self.coeffs, order)

    def homogeneous(self, d: int) -> list[Fraction]:
        """Coefficients of ``t^i u^(d-i)`` for ``i = 0..d``."""
        return [self.coeffs.get((i, d - i), Fraction(0)) for i in range(d + 1)]

    def __add__(self, other):
        if not isinstance(other, Series2):
            other = Series2({(0, 0): as_rational(other)}, self.order)
        n = min(self.order, other.order)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, Fraction(0)) + c
        return Series2(out, n)

    __radd__ = __add__

    def __neg__(self):
        return Series2({k: -c for k, c in self.coeffs.items()}, self.order)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Series2):
            return series2_mul(self, other)
        c = as_rational(other)
        return Series2({k: c * v for k, v in self.coeffs.items()}, self.order)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Series2):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((tuple(self.items()), self.order))

    def is_zero(self) -> bool:
        return not self.coeffs

    def swap(self) -> "Series2":
        """``xi(u, t)``."""
        return Series2({(j, i): c for (i, j), c in self.coeffs.items()}, self.order)

    def evaluate(self, t: Scalar, u: Scalar) -> Fraction:
        t, u = as_rational(t), as_rational(u)
        return sum((c * t**i * u**j for (i, j), c in self.coeffs.items()), Fraction(0))

    def to_json(self) -> list:
        return [{"i": i, "j": j, "c": rational_str(c)} for (i, j), c in self.items()]

    def __repr__(self):
        terms = " + ".join(f"({rational_str(c)}) t^{i} u^{j}" for (i, j), c in self.items())
        return f"Series2({terms or '0'}; order {self.order})"


def series2_mul(a: Series2, b: Series2) -> Series2:
    n = min(a.order, b.order)
    out: dict = {}
    for (i1, j1), c1 in a.coeffs.items():
        for (i2, j2), c2 in b.coeffs.items():
            if i1 + i2 + j1 + j2 <= n:
                key = (i1 + i2, j1 + j2)
                out[key] = out.get(key, Fraction(0)) + c1 * c2
    return Series2(out, n)


def lift_sum(a: Series1, order: int | None = None) -> Series2:
    """``a(t + u)`` expanded binomially and truncated to total degree ``order``."""
    n = a.order if order is None else order
    if n > a.order:
        raise ValueError(f"series of order {a.order} cannot be lifted to order {n}")
    out = {}
    for k in range(n + 1):
        c = a.coeffs[k]
        if c == 0:
            continue
        for i in range(k + 1):
            out[(i, k - i)] = c * comb(k, i)
    return Series2(out, n)


def biv_skew_split(xi: Series2) -> tuple[Series2, Series2]:
    sw = xi.swap()
    half = Fraction(1, 2)
    return (xi + sw) * half, (xi - sw) * half


def biv_div_sum(xi: Series2) -> Series2:
    """Exact quotient of ``xi`` by ``t + u``; the order drops by one."""
    if xi.order == 0:
        raise EmptySeries("quotient by (t+u) of an order-0 series has no known coefficient")
    out = {}
    for d in range(xi.order + 1):
        c = xi.homogeneous(d)
        if d == 0:
            if c[0] != 0:
                raise NotDivisible(0, c[0])
            continue
        # (t+u) * sum_i q_i t^i u^(d-1-i): coefficient of t^i u^(d-i) is q_{i-1} + q_i
        q = [c[0]]
        for i in range(1, d):
            q.append(c[i] - q[i - 1])
        residue = c[d] - q[d - 1]
        if residue != 0:
            raise NotDivisible(d, residue)
        for i, v in enumerate(q):
            out[(i, d - 1 - i)] = v
    return Series2(out, xi.order - 1)


def biv_div_t(xi: Series2) -> Series2:
    """Exact quotient by ``t``; every monomial must carry a factor of ``t``."""
    out = {}
    for (i, j), c in xi.coeffs.items():
        if i == 0:
            raise NotDivisible(i + j, c)
        out[(i - 1, j)] = c
    return Series2(out, xi.order - 1)

