#!/usr/bin/env python3
"""Independent reference values for the unit tests.

Computed with numpy, scipy's HiGHS LP solver and plain enumeration, sharing no code
with the C++ library. Run it and paste the printed numbers into tests/reference.hpp.
"""

import itertools
import math

import numpy as np
from scipy.optimize import linprog

np.set_printoptions(precision=17)

# Fixed small chains used by the tests. Symmetric, rows sum to 1.
CHAIN5 = np.array([
    [0.50, 0.20, 0.05, 0.15, 0.10],
    [0.20, 0.40, 0.25, 0.00, 0.15],
    [0.05, 0.25, 0.30, 0.30, 0.10],
    [0.15, 0.00, 0.30, 0.45, 0.10],
    [0.10, 0.15, 0.10, 0.10, 0.55],
])
CHAIN5_OTHER = np.array([
    [0.30, 0.30, 0.10, 0.10, 0.20],
    [0.30, 0.30, 0.10, 0.20, 0.10],
    [0.10, 0.10, 0.50, 0.20, 0.10],
    [0.10, 0.20, 0.20, 0.40, 0.10],
    [0.20, 0.10, 0.10, 0.10, 0.50],
])
BLOCK4 = np.array([
    [0.49, 0.49, 0.01, 0.01],
    [0.49, 0.49, 0.01, 0.01],
    [0.01, 0.01, 0.49, 0.49],
    [0.01, 0.01, 0.49, 0.49],
])
UNIFORM4 = np.full((4, 4), 0.25)
# Path-like chain on 6 states with a weak middle edge.
PATH6 = np.array([
    [0.60, 0.40, 0.00, 0.00, 0.00, 0.00],
    [0.40, 0.30, 0.30, 0.00, 0.00, 0.00],
    [0.00, 0.30, 0.65, 0.05, 0.00, 0.00],
    [0.00, 0.00, 0.05, 0.65, 0.30, 0.00],
    [0.00, 0.00, 0.00, 0.30, 0.30, 0.40],
    [0.00, 0.00, 0.00, 0.00, 0.40, 0.60],
])


def check_chain(p):
    assert np.allclose(p, p.T) and np.allclose(p.sum(axis=1), 1.0) and (p >= 0).all()


def chain_distance(p, q):
    return 1.0 - np.linalg.eigvalsh(np.sqrt(p * q)).max()


def subsets(universe):
    for r in range(1, len(universe)):
        for s in itertools.combinations(universe, r):
            yield s


def boundary(p, s):
    out = [j for j in range(len(p)) if j not in s]
    return sum(p[i, j] for i in s for j in out)


def sparsest_cut(p, T=()):
    n = len(p)
    best = None
    for s in subsets(range(n)):
        if set(s) & set(T):
            continue
        g = boundary(p, s) / (len(s) * (n - len(s)))
        if best is None or g < best[1] - 1e-15:
            best = (s, g)
    return best


def cheeger(p):
    n = len(p)
    return min(boundary(p, s) / min(len(s), n - len(s)) for s in subsets(range(n)))


def lpccc(p, T=()):
    """LP-CCC with every triangle inequality, ordered-pair normalization and T glued."""
    n = len(p)
    pairs = list(itertools.combinations(range(n), 2))
    idx = {pr: k for k, pr in enumerate(pairs)}
    var = lambda i, j: idx[(min(i, j), max(i, j))]
    c = np.array([p[i, j] + p[j, i] for i, j in pairs])
    a_ub, b_ub = [], []
    for i, j in pairs:
        for k in range(n):
            if k in (i, j):
                continue
            row = np.zeros(len(pairs))
            row[var(i, j)] += 1
            row[var(i, k)] -= 1
            row[var(k, j)] -= 1
            a_ub.append(row)
            b_ub.append(0.0)
    a_eq, b_eq = [np.full(len(pairs), 2.0)], [1.0]
    for a, b in itertools.combinations(sorted(T), 2):
        row = np.zeros(len(pairs))
        row[var(a, b)] = 1
        a_eq.append(row)
        b_eq.append(0.0)
        for k in range(n):
            if k in T:
                continue
            row = np.zeros(len(pairs))
            row[var(a, k)] += 1
            row[var(b, k)] -= 1
            a_eq.append(row)
            b_eq.append(0.0)
    res = linprog(c, A_ub=np.array(a_ub), b_ub=b_ub, A_eq=np.array(a_eq), b_eq=b_eq,
                  bounds=(0, None), method="highs")
    assert res.status == 0
    return res.fun


def hitting_time(p):
    n = len(p)
    worst = 0.0
    for j in range(n):
        keep = [i for i in range(n) if i != j]
        a = np.eye(n - 1) - p[np.ix_(keep, keep)]
        h = np.linalg.solve(a, np.ones(n - 1))
        worst = max(worst, h.max())
    return worst


def observed(p, T):
    n = len(p)
    out = [i for i in range(n) if i not in T]
    pt = p[np.ix_(T, T)]
    if not out:
        return pt
    return pt + p[np.ix_(T, out)] @ np.linalg.solve(np.eye(len(out)) - p[np.ix_(out, out)], p[np.ix_(out, T)])


def edge_dist(p, r):
    probs = [p[i, j] / len(r) for i in r for j in r]
    return np.array(probs + [1.0 - sum(probs)])


def min_internal_expansion(p, s):
    sub = p[np.ix_(s, s)]
    return cheeger(sub)


def min_escape_ratio(p, T):
    return min(boundary(p, r) / len(r) for k in range(1, len(T) + 1) for r in itertools.combinations(T, k))


def show(name, value):
    print(f"{name} = {value!r}")


def main():
    for p in (CHAIN5, CHAIN5_OTHER, BLOCK4, UNIFORM4, PATH6):
        check_chain(p)

    a = np.array([[0.5, 0.5], [0.5, 0.5]])
    b = np.array([[0.9, 0.1], [0.1, 0.9]])
    show("rho_sq_2x2", np.linalg.eigvalsh(np.sqrt(a * b)).max())
    show("dist_2x2", chain_distance(a, b))
    show("dist_chain5", chain_distance(CHAIN5, CHAIN5_OTHER))
    show("lambda2_chain5", np.sort(np.linalg.eigvalsh(CHAIN5))[-2])
    show("cheeger_chain5", cheeger(CHAIN5))
    show("cheeger_path6", cheeger(PATH6))
    show("sparsest_chain5", sparsest_cut(CHAIN5))
    show("sparsest_chain5_T13", sparsest_cut(CHAIN5, (1, 3)))
    show("sparsest_path6", sparsest_cut(PATH6))
    show("sparsest_path6_T05", sparsest_cut(PATH6, (0, 5)))
    show("lp_uniform4", lpccc(UNIFORM4))
    show("lp_block4", lpccc(BLOCK4))
    show("lp_chain5", lpccc(CHAIN5))
    show("lp_chain5_T13", lpccc(CHAIN5, (1, 3)))
    show("lp_path6", lpccc(PATH6))
    show("lp_path6_T05", lpccc(PATH6, (0, 5)))
    show("hit_chain5", hitting_time(CHAIN5))
    show("hit_path6", hitting_time(PATH6))
    show("observed_chain5_T024", observed(CHAIN5, [0, 2, 4]).tolist())
    pe, qe = edge_dist(CHAIN5, [1, 2, 4]), edge_dist(CHAIN5_OTHER, [1, 2, 4])
    show("edge_tv_chain5_R124", 0.5 * np.abs(pe - qe).sum())
    show("edge_hel_chain5_R124", 1.0 - np.sqrt(pe * qe).sum())
    show("internal_expansion_chain5_S0123", min_internal_expansion(CHAIN5, [0, 1, 2, 3]))
    show("escape_ratio_chain5_T34", min_escape_ratio(CHAIN5, [3, 4]))
    show("escape_ratio_path6_T23", min_escape_ratio(PATH6, [2, 3]))
    show("hellinger_sandwich_example", (0.4, 1 - (math.sqrt(0.45) + math.sqrt(0.05))))


if __name__ == "__main__":
    main()
