"""Dense two-phase tableau simplex with Bland's rule.

Solves ``min c.x  s.t.  A x <= b,  0 <= x <= upper``. Only meant for the
small relaxations inside the reference branch-and-bound; Bland's rule keeps
it from cycling on the heavily degenerate multicut polytopes.
"""
from __future__ import annotations

import numpy as np

PIVOT_TOL = 1e-9
FEAS_TOL = 1e-7


class LPResult:
    __slots__ = ("status", "x", "objective")

    def __init__(self, status, x=None, objective=None):
        self.status = status  # "optimal" or "infeasible"
        self.x = x
        self.objective = objective


def _pivot(T, basis, row, col):
    T[row] /= T[row, col]
    colvals = T[:, col].copy()
    colvals[row] = 0.0
    T -= np.outer(colvals, T[row])
    basis[row] = col


def _run(T, basis, allowed):
    """Bland's rule iterations on tableau ``T`` (objective in the last row)."""
    m = T.shape[0] - 1
    while True:
        obj = T[-1, :-1]
        candidates = np.nonzero((obj < -PIVOT_TOL) & allowed)[0]
        if candidates.size == 0:
            return
        col = candidates[0]
        column = T[:m, col]
        rows = np.nonzero(column > PIVOT_TOL)[0]
        if rows.size == 0:
            raise ArithmeticError("unbounded relaxation")
        ratios = T[rows, -1] / column[rows]
        best = ratios.min()
        ties = rows[ratios <= best + PIVOT_TOL]
        row = ties[np.argmin([basis[r] for r in ties])]
        _pivot(T, basis, row, col)


def solve_lp(c, A, b, upper=1.0) -> LPResult:
    c = np.asarray(c, dtype=float)
    n = c.size
    b = np.asarray(b, dtype=float).reshape(-1)
    if n == 0:
        if np.all(b >= -FEAS_TOL):
            return LPResult("optimal", np.zeros(0), 0.0)
        return LPResult("infeasible")
    A = np.asarray(A, dtype=float).reshape(-1, n)
    ub = np.broadcast_to(np.asarray(upper, dtype=float), (n,))
    rows = np.vstack([A, np.eye(n)])
    rhs = np.concatenate([b, ub])
    m = rows.shape[0]

    neg = rhs < 0
    art_rows = np.nonzero(neg)[0]
    na = art_rows.size
    width = n + m + na
    T = np.zeros((m + 1, width + 1))
    T[:m, :n] = rows
    T[:m, n:n + m] = np.eye(m)
    T[:m, -1] = rhs
    T[:m][neg] *= -1.0
    basis = list(range(n, n + m))
    for k, r in enumerate(art_rows):
        T[r, n + m + k] = 1.0
        basis[r] = n + m + k

    allowed = np.ones(width, dtype=bool)
    if na:
        T[-1, :] = 0.0
        T[-1, n + m:n + m + na] = 1.0
        for r in art_rows:
            T[-1] -= T[r]
        _run(T, basis, allowed)
        if -T[-1, -1] > FEAS_TOL:
            return LPResult("infeasible")
        # drive zero-level artificials out of the basis
        for r in range(m):
            if basis[r] >= n + m:
                nz = np.nonzero(np.abs(T[r, :n + m]) > PIVOT_TOL)[0]
                if nz.size:
                    _pivot(T, basis, r, nz[0])
        allowed[n + m:] = False

    T[-1, :] = 0.0
    T[-1, :n] = c
    for r in range(m):
        j = basis[r]
        if j < n and c[j] != 0.0:
            T[-1] -= c[j] * T[r]
    _run(T, basis, allowed)

    x = np.zeros(width)
    for r in range(m):
        x[basis[r]] = T[r, -1]
    sol = np.clip(x[:n], 0.0, ub)
    return LPResult("optimal", sol, float(c @ sol))
