"""Exact integer linear algebra on small matrices (lists of lists of int)."""
from __future__ import annotations

__all__ = ["smith_normal_form", "row_echelon", "solve_in_span", "SpanSolver"]


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(matrix):
    """Return ``(diag, U, V)`` with ``U @ matrix @ V`` diagonal.

    ``diag`` lists the nonzero invariant factors (positive, each dividing
    the next), so ``len(diag)`` is the rank.  Pivots are chosen by minimal
    absolute value.
    """
    A = [list(map(int, row)) for row in matrix]
    m = len(A)
    n = len(A[0]) if m else 0
    U, V = _identity(m), _identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for M in (A, V):
            for row in M:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst -= q * row_src
        A[dst] = [a - q * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a - q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col_dst -= q * col_src
        for M in (A, V):
            for row in M:
                row[dst] -= q * row[src]

    t = 0
    while t < min(m, n):
        nonzero = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not nonzero:
            break
        _, pi, pj = min(nonzero)
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, A[i][t] // p)
                    dirty = dirty or A[i][t] != 0
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, A[t][j] // p)
                    dirty = dirty or A[t][j] != 0
            if dirty:
                cands = [(abs(A[i][t]), i, t) for i in range(t + 1, m) if A[i][t]]
                cands += [(abs(A[t][j]), t, j) for j in range(t + 1, n) if A[t][j]]
                _, ci, cj = min(cands)
                if ci != t:
                    swap_rows(t, ci)
                else:
                    swap_cols(t, cj)
                continue
            # pivot must divide the remaining block
            bad = next(
                ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad[0], -1)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
        t += 1
    return [A[i][i] for i in range(t)], U, V


def row_echelon(rows):
    """Integer row echelon form.  Returns ``(E, T, pivots)`` with ``E = T @ rows``."""
    E = [list(map(int, r)) for r in rows]
    k = len(E)
    n = len(E[0]) if k else 0
    T = _identity(k)
    pivots = []
    r = 0
    for c in range(n):
        if r >= k:
            break
        while True:
            live = [(abs(E[i][c]), i) for i in range(r, k) if E[i][c]]
            if not live:
                break
            _, i0 = min(live)
            E[r], E[i0] = E[i0], E[r]
            T[r], T[i0] = T[i0], T[r]
            done = True
            for i in range(r + 1, k):
                if E[i][c]:
                    q = E[i][c] // E[r][c]
                    E[i] = [a - q * b for a, b in zip(E[i], E[r])]
                    T[i] = [a - q * b for a, b in zip(T[i], T[r])]
                    done = done and E[i][c] == 0
            if done:
                break
        if r < k and E[r][c]:
            pivots.append(c)
            r += 1
    return E, T, pivots


class SpanSolver:
    """Repeated membership queries against one integer row span."""

    def __init__(self, gens):
        self.count = len(gens)
        if gens:
            self.E, self.T, self.pivots = row_echelon(gens)
        else:
            self.E, self.T, self.pivots = [], [], []

    def solve(self, target):
        """Integer ``coeffs`` with ``sum(coeffs[i] * gens[i]) == target``, or ``None``."""
        residual = list(map(int, target))
        c = [0] * len(self.E)
        for r, col in enumerate(self.pivots):
            row = self.E[r]
            if residual[col] % row[col]:
                return None
            q = residual[col] // row[col]
            if q:
                c[r] = q
                residual = [a - q * b for a, b in zip(residual, row)]
        if any(residual):
            return None
        return [sum(c[r] * self.T[r][i] for r in range(len(self.E))) for i in range(self.count)]


def solve_in_span(gens, target):
    """Integer ``coeffs`` with ``sum(coeffs[i] * gens[i]) == target``, or ``None``."""
    return SpanSolver(gens).solve(target)
