from fractions import Fraction as F
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kvjet.exact_arith import Series1, Series2, phi1_series
from kvjet.free_lie import (
    DegreeOverflow,
    LieElement,
    NCPoly,
    NotALieElement,
    ad_x_power_y,
    apply_series,
    bch,
    bch_y_jet,
    bracket_form,
    dynkin_bch,
    hall_basis,
    hall_words_of_degree,
    is_hall_pair,
    nc_expand,
    parse_bracket,
    rank_independence,
    to_hall_coords,
    witt_dimension,
    x_gen,
    y_gen,
)

WITT_2 = [2, 1, 2, 3, 6, 9, 18, 30, 56, 99]


def necklace_count(d):
    """Aperiodic binary necklaces of length d, by brute-force rotation classes."""
    seen = set()
    count = 0
    for code in range(1 << d):
        w = format(code, f"0{d}b")
        rots = {w[i:] + w[:i] for i in range(d)}
        if len(rots) == d and min(rots) not in seen:
            seen.add(min(rots))
            count += 1
    return count


def random_lie(rng, order, max_terms=4):
    acc = LieElement.zero(order)
    words = hall_basis(order)
    for w in rng.sample(words, min(max_terms, len(words))):
        acc = acc + LieElement.from_word(w, order) * F(rng.randint(-4, 4), rng.randint(1, 3))
    return acc


# --- Hall basis ----------------------------------------------------------


def test_hall_basis_low_degree():
    assert [str(w) for w in hall_basis(2)] == ["x", "y", "[x,y]"]


def test_hall_counts_match_witt_and_necklaces():
    counts = [len(hall_words_of_degree(d)) for d in range(1, 11)]
    assert counts == WITT_2
    assert [witt_dimension(d) for d in range(1, 11)] == WITT_2
    assert [necklace_count(d) for d in range(1, 11)] == WITT_2


def test_ad_x_powers_are_hall_words():
    members = set(hall_basis(10))
    for n in range(10):
        assert ad_x_power_y(n) in members


@pytest.mark.parametrize("n", range(1, 9))
def test_paired_ad_powers_are_hall_words(n):
    members = set(hall_basis(n + 2))
    for j in range(n):
        if j < n - j:
            w = parse_bracket(f"[{ad_x_power_y(j)},{ad_x_power_y(n - j)}]")
            assert w in members


@pytest.mark.parametrize("d", range(1, 9))
def test_hall_words_independent(d):
    words = hall_words_of_degree(d)
    elems = [LieElement.from_word(w, d) for w in words]
    rank, _ = rank_independence(elems, d)
    assert rank == len(words)


def test_hall_pair_conditions():
    x, y = parse_bracket("x"), parse_bracket("y")
    xy = parse_bracket("[x,y]")
    assert is_hall_pair(x, y) and not is_hall_pair(y, x) and not is_hall_pair(x, x)
    assert is_hall_pair(x, xy) and is_hall_pair(y, xy)
    # [xy, [y, xy]] needs y <= [x,y], fine; [x, [y, xy]] fails since y > x
    assert not is_hall_pair(x, parse_bracket("[y,[x,y]]"))


# --- expansion and coordinates -----------------------------------------


def test_nc_expand():
    assert nc_expand("[x,y]").terms() == {"xy": 1, "yx": -1}
    assert nc_expand("[x,[x,y]]").terms() == {"xxy": 1, "xyx": -2, "yxx": 1}
    assert nc_expand("x").terms() == {"x": 1}
    with pytest.raises(DegreeOverflow):
        nc_expand("[x,[x,y]]", order=2)


def test_to_hall_coords():
    yx = LieElement.from_word("[y,x]", 2)
    assert to_hall_coords(yx, 2) == [-1]
    xxy = LieElement.from_word("[x,[x,y]]", 3)
    words = hall_words_of_degree(3)
    coords = to_hall_coords(xxy, 3)
    assert coords[words.index(parse_bracket("[x,[x,y]]"))] == 1
    assert sum(abs(c) for c in coords) == 1


def test_not_a_lie_element():
    with pytest.raises(NotALieElement):
        to_hall_coords(NCPoly.from_terms({"xy": 1}, 2), 2)


@pytest.mark.parametrize("d", range(1, 8))
def test_hall_word_coordinates_are_unit_vectors(d):
    for i, w in enumerate(hall_words_of_degree(d)):
        coords = to_hall_coords(LieElement.from_word(w, d), d)
        assert coords == [F(int(i == j)) for j in range(len(coords))]


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_antisymmetry_and_jacobi(seed):
    rng = random.Random(seed)
    a, b, c = (random_lie(rng, 6) for _ in range(3))
    assert (a.bracket(b) + b.bracket(a)).is_zero()
    jac = a.bracket(b.bracket(c)) + b.bracket(c.bracket(a)) + c.bracket(a.bracket(b))
    assert jac.is_zero()
    for d in a.bracket(b).degrees():
        to_hall_coords(a.bracket(b), d)


# --- series actions ------------------------------------------------------


def test_apply_series():
    x, y = x_gen(5), y_gen(5)
    assert apply_series(Series1.constant(1, 5), x, y) == y
    assert apply_series(Series1.monomial(1, 5), x, y) == x.bracket(y)
    got = apply_series(phi1_series(5), x, y)
    expected = LieElement.from_hall_coords(
        {"y": 1, "[x,y]": F(-1, 2), "[x,[x,y]]": F(1, 12), "[x,[x,[x,[x,y]]]]": F(-1, 720)}, 5
    )
    assert got == expected


def test_apply_series_overflow():
    x, y = x_gen(5), y_gen(5)
    with pytest.raises(DegreeOverflow):
        apply_series(phi1_series(2), x, y)


def test_bracket_form_examples():
    n = 6
    x, y = x_gen(n), y_gen(n)
    w = LieElement.from_word("[x,y]", n)
    t_plus_u = Series2({(1, 0): 1, (0, 1): 1}, n)
    assert bracket_form(t_plus_u, w, x, y) == y.bracket(w.bracket(x))
    assert bracket_form(Series2.monomial(0, 0, n), x, y, x) == x.bracket(y)
    with pytest.raises(DegreeOverflow):
        bracket_form(Series2.monomial(0, 0, 0), x, y, x)


@pytest.mark.parametrize("i,j", [(0, 1), (1, 2), (2, 0), (1, 1)])
def test_bracket_form_swap(i, j):
    n = 7
    x, y = x_gen(n), y_gen(n)
    w = LieElement.from_word("[x,y]", n)
    lhs = bracket_form(Series2.monomial(i, j, n), w, x, y)
    rhs = bracket_form(Series2.monomial(j, i, n), x, w, y)
    assert lhs == -rhs


# --- Campbell-Hausdorff --------------------------------------------------


def test_bch_low_degrees():
    z = bch(4)
    assert z.homogeneous(1) == x_gen(4) + y_gen(4)
    assert z.homogeneous(2) == LieElement.from_hall_coords({"[x,y]": F(1, 2)}, 4)
    assert z.homogeneous(3) == LieElement.from_hall_coords(
        {"[x,[x,y]]": F(1, 12), "[y,[x,y]]": F(-1, 12)}, 4
    )


def test_bch_matches_dynkin():
    assert bch(7) == dynkin_bch(7)


def test_bch_symmetry():
    n = 7
    z = bch(n)
    # z(x, y) = -z(-y, -x): swap the letters and flip signs by degree
    terms = z.expansion.terms()
    mirrored = {}
    for w, c in terms.items():
        swapped = "".join("y" if ch == "x" else "x" for ch in w)
        mirrored[swapped] = -c * (-1) ** len(w)
    assert NCPoly.from_terms(mirrored, n) == z.expansion


def test_bch_y_jet():
    n = 6
    x, y = x_gen(n), y_gen(n)
    jet = bch_y_jet(n, 2)
    assert jet[0] == x
    assert jet[1] == apply_series(phi1_series(n), x, y)


# --- independence statements at truncation ------------------------------


def test_rank_examples():
    n = 5
    xy = LieElement.from_word("[x,y]", n)
    assert rank_independence([xy], 2)[0] == 1
    assert rank_independence([xy, xy * 2], 2)[0] == 1
    elems = [
        LieElement.from_word(f"[{ad_x_power_y(j)},{ad_x_power_y(5 - j)}]", 7) for j in range(3) if j < 5 - j
    ]
    assert rank_independence(elems, 7)[0] == 3


def test_rank_membership():
    n = 4
    a = LieElement.from_word("[x,[x,y]]", n)
    b = LieElement.from_word("[y,[x,y]]", n)
    assert rank_independence([a], 3, a * 3 + b * 0)[1] is True
    assert rank_independence([a], 3, b)[1] is False


@pytest.mark.parametrize("N", [4, 6, 8])
def test_series_action_injective_at_truncation(N):
    x, y = x_gen(N), y_gen(N)
    for k in range(N):
        assert not apply_series(Series1.monomial(k, N), x, y).is_zero()


@pytest.mark.parametrize("N", [4, 6, 8])
def test_odd_self_bracket_nonzero(N):
    x, y = x_gen(N), y_gen(N)
    for i in range(N):
        if 2 * i + 2 <= N - 1:
            assert not y.bracket(apply_series(Series1.monomial(2 * i + 1, N), x, y)).is_zero()
