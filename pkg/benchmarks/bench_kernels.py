"""Time the numba and numpy paths of the integer kernels side by side.

    python benchmarks/bench_kernels.py [--max-degree 10] [--repeat 5]

Inputs are the actual workloads of the library: bracket expansions of Hall
words and the mod-p rank of each degree's Hall expansion matrix.  Without
numba installed only the numpy column is filled in.
"""

import argparse
import timeit

import numpy as np

from kvjet import _kernels
from kvjet.free_lie import hall_words_of_degree, integer_expansion


def workloads(max_degree):
    brackets = []
    matrices = []
    for d in range(2, max_degree + 1):
        words = hall_words_of_degree(d)
        pairs = [(integer_expansion(w.left), integer_expansion(w.right)) for w in words]
        brackets.append((d, pairs))
        matrices.append((d, np.array([integer_expansion(w) for w in words], dtype=np.int64)))
    return brackets, matrices


def best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--max-degree", type=int, default=10)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    brackets, matrices = workloads(args.max_degree)
    have_nb = _kernels.HAVE_NUMBA
    if have_nb:  # compile outside the timed region
        _kernels._bracket_dense_nb(*brackets[0][1][0])
        _kernels._rank_mod_p_nb(matrices[0][1], _kernels.PRIME)

    print(f"{'kernel':<12}{'degree':>7}{'size':>12}{'numpy ms':>12}{'numba ms':>12}{'speedup':>9}")
    for (d, pairs), (_, mat) in zip(brackets, matrices):
        rows = [
            ("bracket", f"{len(pairs)} pairs",
             lambda: [_kernels.bracket_dense_numpy(a, b) for a, b in pairs],
             (lambda: [_kernels._bracket_dense_nb(a, b) for a, b in pairs]) if have_nb else None),
            ("rank_mod_p", f"{mat.shape[0]}x{mat.shape[1]}",
             lambda: _kernels.rank_mod_p_numpy(mat),
             (lambda: _kernels._rank_mod_p_nb(mat, _kernels.PRIME)) if have_nb else None),
        ]
        for name, size, np_fn, nb_fn in rows:
            t_np = best(np_fn, args.repeat) * 1e3
            if nb_fn is None:
                print(f"{name:<12}{d:>7}{size:>12}{t_np:>12.3f}{'-':>12}{'-':>9}")
                continue
            t_nb = best(nb_fn, args.repeat) * 1e3
            print(f"{name:<12}{d:>7}{size:>12}{t_np:>12.3f}{t_nb:>12.3f}{t_np / t_nb:>8.1f}x")


if __name__ == "__main__":
    main()
