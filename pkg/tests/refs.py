"""Independent reference implementations used only by the tests.

Everything here recomputes answers by a method different from the library's
own (dense grids, exact rational arithmetic, brute-force enumeration), so
agreement is evidence rather than tautology.
"""

from fractions import Fraction
from itertools import combinations

import numpy as np


def grid_prox(v, w, p, points=20_001):
    """Two-stage dense-grid minimizer of |t|^p + (w/2)(t-v)^2.

    The minimizer is 0 or lies in (0, |v|] with the sign of v, so scanning
    [0, |v|] is exhaustive.  A second pass refines around the coarse argmin;
    the final resolution is ~(|v|/points^2), about 4e-8 for |v| <= 4.
    """
    a = abs(v)
    if a == 0.0:
        return 0.0
    ts = np.linspace(0.0, a, points)
    obj = np.where(ts > 0, ts**p, 0.0) + 0.5 * w * (ts - a) ** 2
    i = int(np.argmin(obj))
    h = a / (points - 1)
    lo, hi = max(ts[i] - 2 * h, 0.0), min(ts[i] + 2 * h, a)
    ts2 = np.linspace(lo, hi, points)
    obj2 = np.where(ts2 > 0, ts2**p, 0.0) + 0.5 * w * (ts2 - a) ** 2
    t = float(ts2[int(np.argmin(obj2))])
    # a strictly interior grid min still loses to the exact 0 sometimes
    if t**p + 0.5 * w * (t - a) ** 2 >= 0.5 * w * a * a:
        t = 0.0
    return float(np.copysign(t, v))


# -- exact rational linear programming by polytope vertex enumeration --
#
# For integer-valued data and a bounded feasible set {x : A x <= b}, every
# optimum is attained at a vertex, and every vertex solves an invertible
# n-row active subsystem.  Enumerating all n-subsets with Fraction
# arithmetic is exact: no tolerances anywhere.


def _frac_solve(rows, rhs):
    """Gaussian elimination over Fractions; returns None if singular."""
    n = len(rhs)
    aug = [list(rows[i]) + [rhs[i]] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = Fraction(1, 1) / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [v - factor * w for v, w in zip(aug[r], aug[col])]
    return [aug[i][n] for i in range(n)]


def exact_polytope_lp(c, a_ub, b_ub):
    """min c'x over {x : a_ub x <= b_ub} for a BOUNDED rational polyhedron.

    Returns ("infeasible", None, None) or ("optimal", value, vertex) with
    exact Fractions.  The caller must ensure boundedness (box rows).
    """
    c = [Fraction(v) for v in c]
    rows = [[Fraction(v) for v in row] for row in a_ub]
    rhs = [Fraction(v) for v in b_ub]
    n = len(c)
    best_val, best_x = None, None
    feasible = False
    for subset in combinations(range(len(rows)), n):
        sub = [rows[i] for i in subset]
        sr = [rhs[i] for i in subset]
        x = _frac_solve(sub, sr)
        if x is None:
            continue
        if any(sum(r * xi for r, xi in zip(row, x)) > b for row, b in zip(rows, rhs)):
            continue
        feasible = True
        val = sum(ci * xi for ci, xi in zip(c, x))
        if best_val is None or val < best_val:
            best_val, best_x = val, x
    if not feasible:
        return "infeasible", None, None
    return "optimal", best_val, best_x


def exact_l1_fit(cols, b, box=10**6):
    """Exact min_c ||cols c - b||_1 via the epigraph LP over Fractions.

    cols is an m x k integer matrix (list of rows), b an integer vector.
    Returns the exact optimal value as a Fraction.
    """
    m = len(b)
    k = len(cols[0]) if m else 0
    # variables (c_1..c_k, t_1..t_m): minimize sum t
    # rows:  cols c - t <= b,  -cols c - t <= -b,  |c_j| <= box, t_i <= box
    obj = [0] * k + [1] * m
    rows, rhs = [], []
    for i in range(m):
        rows.append([cols[i][j] for j in range(k)] + [-1 if l == i else 0 for l in range(m)])
        rhs.append(b[i])
        rows.append([-cols[i][j] for j in range(k)] + [-1 if l == i else 0 for l in range(m)])
        rhs.append(-b[i])
    for j in range(k):
        e = [0] * (k + m)
        e[j] = 1
        rows.append(list(e))
        rhs.append(box)
        e2 = [0] * (k + m)
        e2[j] = -1
        rows.append(e2)
        rhs.append(box)
    for i in range(m):
        e = [0] * (k + m)
        e[k + i] = 1
        rows.append(e)
        rhs.append(box)
        e2 = [0] * (k + m)
        e2[k + i] = -1
        rows.append(e2)
        rhs.append(0)  # t_i >= 0
    status, val, _ = exact_polytope_lp(obj, rows, rhs)
    assert status == "optimal"
    return val
