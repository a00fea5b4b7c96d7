"""The free Lie algebra on {x, y}, truncated at a total degree N.

Elements are stored through their image in the free associative algebra
(``NCPoly``): one dense coefficient vector per degree, indexed by the word's
binary code (x = 0, y = 1, first letter most significant).  With that layout
the product of homogeneous pieces is ``outer(a, b).ravel()``.

Hall words give coordinates; they are never the canonical form.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Sequence

import numpy as np

from . import _kernels
from .exact_arith import Series1, Series2, as_rational, rational_str
from .linalg import ExactSolver, Inconsistent, exact_rank

DEFAULT_ORDER = 10


class DegreeOverflow(ValueError):
    pass


class NotALieElement(ValueError):
    pass


def _zeros(d: int) -> np.ndarray:
    out = np.empty(1 << d, dtype=object)
    out.fill(Fraction(0))
    return out


@lru_cache(maxsize=None)
def _popcounts(d: int) -> np.ndarray:
    codes = np.arange(1 << d, dtype=np.int64)
    counts = np.zeros(1 << d, dtype=np.int64)
    for bit in range(d):
        counts += (codes >> bit) & 1
    return counts


def word_str(code: int, d: int) -> str:
    return "".join("xy"[(code >> (d - 1 - i)) & 1] for i in range(d))


def word_code(word: str) -> int:
    code = 0
    for ch in word:
        if ch not in "xy":
            raise ValueError(f"letter {ch!r} is not a generator")
        code = (code << 1) | (ch == "y")
    return code


# ---------------------------------------------------------------------------
# noncommutative polynomials


class NCPoly:
    """Element of the free associative algebra on {x, y}, modulo degree > order."""

    __slots__ = ("comps", "order")

    def __init__(self, comps: dict, order: int):
        self.order = order
        clean = {}
        for d, vec in comps.items():
            if d > order:
                continue
            vec = np.asarray(vec, dtype=object)
            if vec.shape != (1 << d,):
                raise ValueError(f"degree-{d} component must have length {1 << d}")
            if any(c != 0 for c in vec):
                clean[d] = vec
        self.comps = clean

    @classmethod
    def zero(cls, order: int) -> "NCPoly":
        return cls({}, order)

    @classmethod
    def one(cls, order: int) -> "NCPoly":
        return cls({0: np.array([Fraction(1)], dtype=object)}, order)

    @classmethod
    def generator(cls, letter: str, order: int) -> "NCPoly":
        vec = _zeros(1)
        vec[word_code(letter)] = Fraction(1)
        return cls({1: vec}, order)

    @classmethod
    def from_terms(cls, terms: dict, order: int) -> "NCPoly":
        comps: dict = {}
        for word, c in terms.items():
            d = len(word)
            if d > order:
                raise DegreeOverflow(f"word {word!r} exceeds truncation degree {order}")
            vec = comps.setdefault(d, _zeros(d))
            vec[word_code(word)] += as_rational(c)
        return cls(comps, order)

    def terms(self) -> dict:
        out = {}
        for d in sorted(self.comps):
            for code, c in enumerate(self.comps[d]):
                if c != 0:
                    out[word_str(code, d)] = Fraction(c)
        return out

    def component(self, d: int) -> np.ndarray:
        if d > self.order:
            raise DegreeOverflow(f"degree {d} exceeds truncation degree {self.order}")
        vec = self.comps.get(d)
        return _zeros(d) if vec is None else vec.copy()

    def homogeneous(self, d: int) -> "NCPoly":
        return NCPoly({d: self.comps[d]} if d in self.comps else {}, self.order)

    def y_degree_part(self, k: int) -> "NCPoly":
        out = {}
        for d, vec in self.comps.items():
            mask = _popcounts(d) == k
            if mask.any():
                v = _zeros(d)
                v[mask] = vec[mask]
                out[d] = v
        return NCPoly(out, self.order)

    def truncate(self, order: int) -> "NCPoly":
        return NCPoly(self.comps, min(order, self.order))

    def min_degree(self) -> int | None:
        return min(self.comps) if self.comps else None

    def is_zero(self) -> bool:
        return not self.comps

    def _binary(self, other: "NCPoly", sign: int) -> "NCPoly":
        n = min(self.order, other.order)
        out = {d: v.copy() for d, v in self.comps.items() if d <= n}
        for d, v in other.comps.items():
            if d > n:
                continue
            if d in out:
                out[d] = out[d] + v if sign > 0 else out[d] - v
            else:
                out[d] = v.copy() if sign > 0 else -v
        return NCPoly(out, n)

    def __add__(self, other):
        return self._binary(other, 1)

    def __sub__(self, other):
        return self._binary(other, -1)

    def __neg__(self):
        return NCPoly({d: -v for d, v in self.comps.items()}, self.order)

    def scale(self, c) -> "NCPoly":
        c = as_rational(c)
        if c == 0:
            return NCPoly.zero(self.order)
        return NCPoly({d: v * c for d, v in self.comps.items()}, self.order)

    def __mul__(self, other):
        if not isinstance(other, NCPoly):
            return self.scale(other)
        n = min(self.order, other.order)
        out: dict = {}
        for d1, v1 in self.comps.items():
            for d2, v2 in other.comps.items():
                d = d1 + d2
                if d > n:
                    continue
                prod = np.outer(v1, v2).ravel()
                out[d] = out[d] + prod if d in out else prod
        return NCPoly(out, n)

    def __rmul__(self, c):
        return self.scale(c)

    def __eq__(self, other):
        if not isinstance(other, NCPoly):
            return NotImplemented
        if set(self.comps) != set(other.comps):
            return False
        return all(np.array_equal(self.comps[d], other.comps[d]) for d in self.comps)

    def __hash__(self):
        return hash(tuple(sorted(self.terms().items())))

    def __repr__(self):
        parts = [f"({rational_str(c)}){w}" for w, c in self.terms().items()]
        return f"NCPoly({' + '.join(parts) or '0'}; order {self.order})"


def commutator(a: NCPoly, b: NCPoly) -> NCPoly:
    return a * b - b * a


def nc_exp(a: NCPoly) -> NCPoly:
    """Truncated exponential of an element without constant term."""
    if 0 in a.comps:
        raise ValueError("exp is only taken of elements without constant term")
    result = NCPoly.one(a.order)
    power = NCPoly.one(a.order)
    for k in range(1, a.order + 1):
        power = power * a
        if power.is_zero():
            break
        result = result + power.scale(Fraction(1, factorial(k)))
    return result


def nc_log(a: NCPoly) -> NCPoly:
    """Truncated logarithm of an element with constant term 1."""
    const = a.comps.get(0)
    if const is None or const[0] != 1:
        raise ValueError("log is only taken of elements with constant term 1")
    e = a - NCPoly.one(a.order)
    result = NCPoly.zero(a.order)
    power = NCPoly.one(a.order)
    for k in range(1, a.order + 1):
        power = power * e
        if power.is_zero():
            break
        result = result + power.scale(Fraction((-1) ** (k + 1), k))
    return result


# ---------------------------------------------------------------------------
# Hall words


@dataclass(frozen=True)
class HallWord:
    """A generator (``letter`` set) or a bracket ``[left, right]``."""

    letter: str | None = None
    left: "HallWord | None" = None
    right: "HallWord | None" = None

    @property
    def degree(self) -> int:
        return 1 if self.letter is not None else self.left.degree + self.right.degree

    @property
    def key(self) -> tuple:
        # degree first, then left subtree, then right subtree; x < y
        if self.letter is not None:
            return (1, "xy".index(self.letter))
        return (self.degree, self.left.key, self.right.key)

    @property
    def y_degree(self) -> int:
        if self.letter is not None:
            return int(self.letter == "y")
        return self.left.y_degree + self.right.y_degree

    def __lt__(self, other: "HallWord") -> bool:
        return self.key < other.key

    def __le__(self, other: "HallWord") -> bool:
        return self.key <= other.key

    def __str__(self) -> str:
        if self.letter is not None:
            return self.letter
        return f"[{self.left},{self.right}]"

    def __repr__(self) -> str:
        return f"HallWord({self})"


X_WORD = HallWord("x")
Y_WORD = HallWord("y")


def bracket_word(a: HallWord, b: HallWord) -> HallWord:
    return HallWord(left=a, right=b)


def is_hall_pair(a: HallWord, b: HallWord) -> bool:
    """``[a, b]`` is a Hall word iff a < b and either b is a letter or b = [c, e] with c <= a."""
    if not a < b:
        return False
    return b.letter is not None or b.left <= a


@lru_cache(maxsize=None)
def _hall_by_degree(d: int) -> tuple:
    if d == 1:
        return (X_WORD, Y_WORD)
    words = []
    for da in range(1, d):
        for a in _hall_by_degree(da):
            for b in _hall_by_degree(d - da):
                if is_hall_pair(a, b):
                    words.append(bracket_word(a, b))
    return tuple(sorted(words, key=lambda w: w.key))


def hall_basis(order: int) -> list[HallWord]:
    """Hall words of degree 1..order in increasing order."""
    if order < 1:
        raise ValueError("order must be >= 1")
    out: list[HallWord] = []
    for d in range(1, order + 1):
        out.extend(_hall_by_degree(d))
    return out


def hall_words_of_degree(d: int) -> tuple:
    return _hall_by_degree(d)


def parse_bracket(text: str) -> HallWord:
    """Parse ``"[x,[x,y]]"`` into a bracket tree (Hall conditions are not checked)."""
    tokens = re.findall(r"[\[\],]|[xy]", text.replace(" ", ""))
    if "".join(tokens) != text.replace(" ", ""):
        raise ValueError(f"cannot parse bracket expression {text!r}")
    pos = 0

    def parse():
        nonlocal pos
        tok = tokens[pos]
        if tok in "xy":
            pos += 1
            return HallWord(tok)
        if tok != "[":
            raise ValueError(f"unexpected token {tok!r} in {text!r}")
        pos += 1
        left = parse()
        if tokens[pos] != ",":
            raise ValueError(f"expected ',' in {text!r}")
        pos += 1
        right = parse()
        if tokens[pos] != "]":
            raise ValueError(f"expected ']' in {text!r}")
        pos += 1
        return HallWord(left=left, right=right)

    tree = parse()
    if pos != len(tokens):
        raise ValueError(f"trailing input in {text!r}")
    return tree


@lru_cache(maxsize=None)
def integer_expansion(w: HallWord) -> np.ndarray:
    """Integer coefficient vector of a bracket tree in the free associative algebra."""
    if w.letter is not None:
        vec = np.zeros(2, dtype=np.int64)
        vec[word_code(w.letter)] = 1
        return vec
    return _kernels.bracket_dense(integer_expansion(w.left), integer_expansion(w.right))


def nc_expand(w, order: int | None = None) -> NCPoly:
    """Expand a bracket expression (tree or string) via ``[a, b] -> ab - ba``."""
    if isinstance(w, str):
        w = parse_bracket(w)
    n = w.degree if order is None else order
    if w.degree > n:
        raise DegreeOverflow(f"{w} has degree {w.degree} > {n}")
    vec = np.array([Fraction(int(c)) for c in integer_expansion(w)], dtype=object)
    return NCPoly({w.degree: vec}, n)


class _DegreeSystem:
    def __init__(self, d: int):
        self.words = hall_words_of_degree(d)
        self.solver = ExactSolver([integer_expansion(w).tolist() for w in self.words])


@lru_cache(maxsize=None)
def _degree_system(d: int) -> _DegreeSystem:
    return _DegreeSystem(d)


# ---------------------------------------------------------------------------
# Lie elements


class LieElement:
    """Element of the truncated free Lie algebra, held as its associative expansion."""

    __slots__ = ("expansion",)

    def __init__(self, expansion: NCPoly):
        if 0 in expansion.comps:
            raise NotALieElement("Lie elements have no constant term")
        self.expansion = expansion

    @property
    def order(self) -> int:
        return self.expansion.order

    @classmethod
    def zero(cls, order: int) -> "LieElement":
        return cls(NCPoly.zero(order))

    @classmethod
    def generator(cls, letter: str, order: int) -> "LieElement":
        return cls(NCPoly.generator(letter, order))

    @classmethod
    def from_word(cls, w, order: int) -> "LieElement":
        return cls(nc_expand(w, order))

    @classmethod
    def from_hall_coords(cls, coords: dict, order: int) -> "LieElement":
        """Build from ``{HallWord or bracket string: coefficient}``."""
        acc = NCPoly.zero(order)
        for w, c in coords.items():
            acc = acc + nc_expand(w, order).scale(c)
        return cls(acc)

    def __add__(self, other):
        return LieElement(self.expansion + other.expansion)

    def __sub__(self, other):
        return LieElement(self.expansion - other.expansion)

    def __neg__(self):
        return LieElement(-self.expansion)

    def __mul__(self, c):
        return LieElement(self.expansion.scale(c))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, LieElement):
            return NotImplemented
        return self.expansion == other.expansion

    def __hash__(self):
        return hash(self.expansion)

    def is_zero(self) -> bool:
        return self.expansion.is_zero()

    def bracket(self, other: "LieElement") -> "LieElement":
        return LieElement(commutator(self.expansion, other.expansion))

    def degrees(self) -> list[int]:
        return sorted(self.expansion.comps)

    def min_degree(self) -> int | None:
        return self.expansion.min_degree()

    def homogeneous(self, d: int) -> "LieElement":
        return LieElement(self.expansion.homogeneous(d))

    def y_degree_part(self, k: int) -> "LieElement":
        return LieElement(self.expansion.y_degree_part(k))

    def truncate(self, order: int) -> "LieElement":
        return LieElement(self.expansion.truncate(order))

    def hall_coords(self, d: int) -> list[Fraction]:
        return to_hall_coords(self, d)

    def hall_terms(self) -> dict:
        """``{bracket string: coefficient}`` over all degrees, zero coordinates dropped."""
        out = {}
        for d in self.degrees():
            for w, c in zip(hall_words_of_degree(d), to_hall_coords(self, d)):
                if c != 0:
                    out[str(w)] = c
        return out

    def to_json(self) -> dict:
        return {
            str(d): {str(w): rational_str(c) for w, c in zip(hall_words_of_degree(d), to_hall_coords(self, d)) if c}
            for d in self.degrees()
        }

    def __repr__(self):
        terms = " + ".join(f"({rational_str(c)}){w}" for w, c in self.hall_terms().items())
        return f"LieElement({terms or '0'}; order {self.order})"


def to_hall_coords(e, d: int) -> list[Fraction]:
    """Coordinates of the degree-``d`` component in the degree-``d`` Hall words."""
    expansion = e.expansion if isinstance(e, LieElement) else e
    if d < 1:
        raise NotALieElement("Lie elements have no degree-0 part")
    vec = expansion.component(d)
    system = _degree_system(d)
    try:
        return system.solver.solve(vec)
    except Inconsistent as exc:
        raise NotALieElement(f"degree-{d} component is not in the Lie subspace ({exc})") from None


def ad_power(w: LieElement, z: LieElement, k: int) -> LieElement:
    for _ in range(k):
        z = w.bracket(z)
    return z


def apply_series(xi: Series1, w: LieElement, z: LieElement) -> LieElement:
    """``sum_k xi_k (ad w)^k (z)`` in the truncated algebra."""
    n = min(w.order, z.order)
    acc = LieElement.zero(n)
    cur = z.truncate(n)
    k = 0
    while not cur.is_zero():
        if k > xi.order:
            raise DegreeOverflow(
                f"(ad W)^{k} Z is nonzero below degree {n + 1} but the series is only known to order {xi.order}"
            )
        c = xi.coeffs[k]
        if c:
            acc = acc + cur * c
        cur = w.bracket(cur)
        k += 1
    return acc


def _ad_iterates(y: LieElement, w: LieElement) -> list[LieElement]:
    out = [w]
    while not out[-1].is_zero():
        out.append(y.bracket(out[-1]))
    return out[:-1]


def bracket_form(xi: Series2, w: LieElement, x: LieElement, y: LieElement) -> LieElement:
    """``sum_{i,j} xi_{ij} [(ad y)^i w, (ad y)^j x]``."""
    n = min(w.order, x.order, y.order)
    ws = _ad_iterates(y, w.truncate(n))
    xs = _ad_iterates(y, x.truncate(n))
    acc = LieElement.zero(n)
    for i, wi in enumerate(ws):
        for j, xj in enumerate(xs):
            if i + j > xi.order:
                lo = (wi.min_degree() or 0) + (xj.min_degree() or 0)
                if lo <= n and not wi.bracket(xj).is_zero():
                    raise DegreeOverflow(
                        f"term t^{i} u^{j} contributes below degree {n + 1} but the series "
                        f"is only known to total degree {xi.order}"
                    )
                continue
            c = xi.coeffs.get((i, j))
            if c:
                acc = acc + wi.bracket(xj) * c
    return acc


# ---------------------------------------------------------------------------
# Campbell-Hausdorff series


def log_exp_product(a: LieElement, b: LieElement) -> LieElement:
    """``ln(exp(a) exp(b))`` computed with truncated exp/log in the associative algebra."""
    z = nc_log(nc_exp(a.expansion) * nc_exp(b.expansion))
    return LieElement(z)


def bch(order: int = DEFAULT_ORDER, *, check: bool = True) -> LieElement:
    """``ln(exp(x) exp(y))`` up to degree ``order``.

    With ``check`` every degree is converted to Hall coordinates, which fails
    if the result left the Lie subspace.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    x = LieElement.generator("x", order)
    y = LieElement.generator("y", order)
    z = log_exp_product(x, y)
    if check:
        for d in z.degrees():
            to_hall_coords(z, d)
    return z


def bch_y_jet(order: int, k: int) -> list[LieElement]:
    """Components of ``ln(exp(y) exp(x))`` of y-degree 0..k."""
    if k > order:
        raise ValueError("k must not exceed the truncation order")
    x = LieElement.generator("x", order)
    y = LieElement.generator("y", order)
    z = log_exp_product(y, x)
    return [z.y_degree_part(j) for j in range(k + 1)]


@lru_cache(maxsize=None)
def _right_normed(code: int, d: int) -> np.ndarray:
    # [w1, [w2, [..., wd]]]
    first = np.zeros(2, dtype=np.int64)
    first[(code >> (d - 1)) & 1] = 1
    if d == 1:
        return first
    return _kernels.bracket_dense(first, _right_normed(code & ((1 << (d - 1)) - 1), d - 1))


def dynkin_bch(order: int) -> LieElement:
    """Campbell-Hausdorff series from Dynkin's explicit formula.

    The associative coefficients of ``ln(exp x exp y)`` are enumerated directly
    over the blocks ``x^{r_i} y^{s_i}``, then each degree-n word is mapped to
    its right-normed bracket and divided by n.  Shares nothing with the
    exp/log path except the word encoding.
    """
    comps = {}
    for n in range(1, order + 1):
        word_coeff: dict[int, Fraction] = {}
        for k in range(1, n + 1):
            sign = Fraction((-1) ** (k - 1), k)
            for blocks in _block_sequences(n, k):
                code = 0
                weight = 1
                for r, s in blocks:
                    code = (code << (r + s)) | ((1 << s) - 1)
                    weight *= factorial(r) * factorial(s)
                word_coeff[code] = word_coeff.get(code, Fraction(0)) + sign / weight
        vec = _zeros(n)
        for code, c in word_coeff.items():
            if c:
                vec = vec + _right_normed(code, n).astype(object) * (c / n)
        comps[n] = vec
    return LieElement(NCPoly(comps, order))


def _block_sequences(n: int, k: int):
    """Sequences of k pairs (r, s), r + s >= 1, with total weight n."""
    if k == 0:
        if n == 0:
            yield ()
        return
    for m in range(1, n - (k - 1) + 1):
        for r in range(m + 1):
            for rest in _block_sequences(n - m, k - 1):
                yield ((r, m - r),) + rest


# ---------------------------------------------------------------------------
# independence


def rank_independence(
    elements: Sequence[LieElement], d: int, target: LieElement | None = None
) -> tuple[int, bool | None]:
    """Exact rank of the degree-``d`` components, and optionally span membership of ``target``."""
    vecs = [list(e.expansion.component(d)) for e in elements]
    rank = exact_rank(vecs)
    if target is None:
        return rank, None
    with_target = exact_rank(vecs + [list(target.expansion.component(d))])
    return rank, with_target == rank


def witt_dimension(d: int) -> int:
    """Dimension of the degree-d part of the free Lie algebra on two generators."""
    total = 0
    for e in range(1, d + 1):
        if d % e == 0:
            total += _mobius(e) * 2 ** (d // e)
    return total // d


def _mobius(n: int) -> int:
    result = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    if n > 1:
        result = -result
    return result


def x_gen(order: int) -> LieElement:
    return LieElement.generator("x", order)


def y_gen(order: int) -> LieElement:
    return LieElement.generator("y", order)


def ad_x_power_y(n: int) -> HallWord:
    """The tree of ``(ad x)^n (y)``."""
    w = Y_WORD
    for _ in range(n):
        w = bracket_word(X_WORD, w)
    return w


__all__ = [
    "DEFAULT_ORDER",
    "DegreeOverflow",
    "NotALieElement",
    "NCPoly",
    "HallWord",
    "LieElement",
    "hall_basis",
    "hall_words_of_degree",
    "nc_expand",
    "to_hall_coords",
    "apply_series",
    "bracket_form",
    "bch",
    "bch_y_jet",
    "dynkin_bch",
    "rank_independence",
    "witt_dimension",
    "parse_bracket",
]
