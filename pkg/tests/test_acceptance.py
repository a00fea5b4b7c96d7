"""The twelve acceptance criteria, each at exact equality.

Every criterion prints one ``PASS``/``FAIL`` line.  Run with ``pytest -s`` to
see them, or ``python tests/test_acceptance.py`` for the summary alone.
Runtimes are measured with cold library caches; the one-off JIT compile of
the integer kernels is excluded by a warm-up fixture.
"""

import random
import time
from fractions import Fraction as F

import numpy as np
import pytest

from kvjet import _kernels, appendix_cmp, exact_arith, free_lie, kv_core, trace_eq
from kvjet.exact_arith import Series1, parity_split

Q = F(1, 4)
WITT_2 = [2, 1, 2, 3, 6, 9, 18, 30, 56, 99]


def cold_caches():
    exact_arith._bernoulli_cache[1:] = []
    for fn in (
        free_lie._popcounts,
        free_lie._hall_by_degree,
        free_lie.integer_expansion,
        free_lie._degree_system,
        free_lie._right_normed,
    ):
        fn.cache_clear()


def report(number, ok, elapsed, limit, detail=""):
    within = limit is None or elapsed < limit
    status = "PASS" if ok and within else "FAIL"
    bound = f" (limit {limit:g} s)" if limit is not None else ""
    line = f"criterion {number:2d}: {status}  {elapsed:.4f} s{bound}"
    if detail:
        line += f"  {detail}"
    print(line)
    return ok and within


def timed(fn):
    cold_caches()
    start = time.perf_counter()
    value = fn()
    return value, time.perf_counter() - start


def bernoulli_oracle(n):
    """Akiyama-Tanigawa, an independent route to B_0..B_n with B_1 = +1/2."""
    a = [F(0)] * (n + 1)
    out = []
    for m in range(n + 1):
        a[m] = F(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        out.append(a[0])
    return out


@pytest.fixture(scope="module", autouse=True)
def warm_jit():
    _kernels.rank_mod_p(np.identity(2, dtype=np.int64))
    _kernels.bracket_dense(np.ones(2, dtype=np.int64), np.ones(2, dtype=np.int64))


def test_criterion_01_phi1():
    phi, dt = timed(lambda: exact_arith.phi1_series(4))
    oracle = bernoulli_oracle(4)
    oracle[1] = -oracle[1]
    coeffs = tuple(phi.coeffs)
    ok = coeffs == (1, F(-1, 2), F(1, 12), 0, F(-1, 720)) and coeffs[:2] == (1, F(-1, 2))
    ok = ok and list(coeffs) == [b / _fact(k) for k, b in enumerate(oracle)]
    assert report(1, ok, dt, 1e-3, phi.pretty())


def _fact(k):
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


def test_criterion_02_bch():
    def work():
        z = free_lie.bch(6)
        return z, free_lie.dynkin_bch(6)

    (z, dyn), dt = timed(work)
    ok = z == dyn
    ok = ok and z.homogeneous(2) == free_lie.LieElement.from_hall_coords({"[x,y]": F(1, 2)}, 6)
    ok = ok and z.homogeneous(3) == free_lie.LieElement.from_hall_coords(
        {"[x,[x,y]]": F(1, 12), "[y,[x,y]]": F(-1, 12)}, 6
    )
    assert report(2, ok, dt, 1.0)


def test_criterion_03_hall_counts():
    counts, dt = timed(lambda: [len(free_lie.hall_words_of_degree(d)) for d in range(1, 11)])
    ok = counts == WITT_2 == [free_lie.witt_dimension(d) for d in range(1, 11)]
    assert report(3, ok, dt, 1.0, str(counts))


def test_criterion_04_d2_lemma():
    rep, dt = timed(lambda: kv_core.verify_lemma_d2_report(8))
    assert report(4, rep["pass"], dt, 30.0)


def test_criterion_05_eq1():
    def work():
        return {str(a): kv_core.verify_eq1_jet(kv_core.kv_jet(a, 8), 8) for a in (F(0), Q, F(1))}

    reps, dt = timed(work)
    ok = all(r["pass"] for r in reps.values())
    conventions = {r["pi_convention"] for r in reps.values()}
    ok = ok and conventions == {kv_core.DEFAULT_PI_CONVENTION.value}
    assert report(5, ok, dt, 60.0, f"convention={conventions.pop()}")


def test_criterion_06_rigidity():
    rep, dt = timed(lambda: kv_core.rigidity_report(Q, 8))
    ok = (
        rep["gamma_plus_t"]["rejected_by"] == "pi_series"
        and rep["gamma_plus_t2"]["rejected_by"] == "verify_eq1_jet"
        and rep["rho_plus_1"]["rejected_by"] == "verify_eq2_linearized"
        and rep["pass"]
    )
    assert report(6, ok, dt, 60.0)


def test_criterion_07_symmetry():
    def work():
        return kv_core.symmetric_alpha(), kv_core.verify_symmetry_order1_report(Q), kv_core.verify_symmetry_order1(0)

    (alpha, rep, at_zero), dt = timed(work)
    beta1, gamma1 = F(rep["beta1"]), F(rep["gamma1"])
    ok = alpha == Q and rep["pass"] and not at_zero and beta1 == -gamma1
    assert report(7, ok, dt, None, f"alpha={alpha} beta1={beta1} gamma1={gamma1}")


def test_criterion_08_eq2():
    rep, dt = timed(lambda: trace_eq.verify_eq2_linearized(Q, kv_core.gamma_series(Q, 12), 0, 12))
    ok = rep["pass"] and rep["eps0"] == [] and rep["eps1"] == []
    assert report(8, ok, dt, 5.0)


def test_criterion_09_quadratic_solutions():
    def work():
        return appendix_cmp.vergne_rhs(4), appendix_cmp.universal_lhs(4), appendix_cmp.am_lhs(4)

    (ver, uni, am), dt = timed(work)
    ok = (
        ver.coeffs[1:5] == (F(1, 8), F(1, 12), F(1, 72), F(-1, 360))
        and uni.coeffs[1:5] == (F(1, 8), F(1, 12), F(1, 72), F(-1, 480))
        and am.coeffs[1:5] == (F(1, 8), F(1, 12), F(1, 72), F(-1, 720))
        and appendix_cmp.first_divergence(uni, ver, am) == 4
        and len({ver[4], uni[4], am[4]}) == 3
    )
    assert report(9, ok, dt, 1.0)


def test_criterion_10_beta_am_and_odd_parts():
    def work():
        beta_ok = appendix_cmp.am_beta_series(12) == kv_core.beta_series(Q, 12)
        odd = [
            parity_split(s)[1]
            for s in (appendix_cmp.am_gamma_series(12), appendix_cmp.gamma_vergne(12), kv_core.gamma_series(Q, 12))
        ]
        return beta_ok, odd[0] == odd[1] == odd[2]

    (beta_ok, odd_ok), dt = timed(work)
    assert report(10, beta_ok and odd_ok, dt, None)


def test_criterion_11_independence():
    def work():
        l14 = [kv_core.lemma_l14_check(n) for n in range(4)]
        skew = [kv_core.skew_injectivity_check(n) for n in range(1, 9)]
        return l14, skew

    (l14, skew), dt = timed(work)
    assert report(11, all(l14) and all(skew), dt, None, f"l14={l14} skew={skew}")


def test_criterion_12_f_check():
    rng = random.Random(12)
    samples = [F(rng.randint(-50, 50) or 1, rng.randint(1, 30)) for _ in range(8)]

    def work():
        psi = exact_arith.psi_series(9)
        base = trace_eq.f_consistency_check(psi, Q, 8)[1]
        perturbed = [trace_eq.f_consistency_check(psi + Series1.monomial(2, 9, e), Q, 8)[1] for e in samples]
        return base, perturbed

    (base, perturbed), dt = timed(work)
    assert report(12, base and not any(perturbed), dt, None, f"eps={[str(e) for e in samples]}")


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-s", "-p", "no:cacheprovider"]))
