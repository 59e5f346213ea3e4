"""Generic spray-to-curvature passes.

One code path turns any spray (a callable on generic-scalar component
lists) into the Riemann operator, and one more vertical jet level on top
of that yields the Ricci tensor.  Both the Riemannian and the Finsler
pipelines run through here.
"""

from __future__ import annotations

from . import jet

__all__ = ["spray_tables", "riemann_operator", "ricci_tensor_pass", "spray_y_divergence", "mean_berwald"]


def spray_tables(spray_fn, n, xs, ys):
    """Jet table of the spray over (x, y): one order-2 lift in 2n variables."""

    def wrapped(args):
        return spray_fn(args[:n], args[n:])

    return jet.lift(wrapped, list(xs) + list(ys))


def riemann_operator(spray_fn, n, xs, ys):
    """R^i_k from second derivatives of the spray.

    R^i_k = 2 dG^i/dx^k - d2G^i/dx^m dy^k y^m
            + 2 G^m d2G^i/dy^m dy^k - dG^i/dy^m dG^m/dy^k
    """
    jets = spray_tables(spray_fn, n, xs, ys)
    Gv = [j.f for j in jets]
    R = [[None] * n for _ in range(n)]
    for i in range(n):
        ji = jets[i]
        for k in range(n):
            nk = n + k
            acc = 2.0 * ji.g[k]
            for m in range(n):
                acc = acc - ji.h[m][nk] * ys[m]
                acc = acc + 2.0 * (Gv[m] * ji.h[n + m][nk])
                acc = acc - ji.g[n + m] * jets[m].g[nk]
            R[i][k] = acc
    return R, Gv


def ricci_tensor_pass(spray_fn, n, xs, ys):
    """Vertical second derivatives of R^i_k, reduced to Ric_ij and H_ij.

    With A_ij = d2(R^m_m)/dy^i dy^j and B_ij = d2(R^m_j)/dy^m dy^i the
    curvature-tensor reduction gives
    Ric_ij = (1/6) (2 A_ij - B_ij - B_ji) and H_ij = Ric_ij - A_ij / 2.
    """

    def r_flat(ys2):
        R, _ = riemann_operator(spray_fn, n, xs, ys2)
        return [R[i][k] for i in range(n) for k in range(n)]

    jets = jet.lift(r_flat, list(ys))
    R0 = [[jets[i * n + k].f for k in range(n)] for i in range(n)]
    A = [[None] * n for _ in range(n)]
    B = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            a = 0.0
            b = 0.0
            for m in range(n):
                a = a + jets[m * n + m].h[i][j]
                b = b + jets[m * n + j].h[m][i]
            A[i][j] = a
            B[i][j] = b
    ric_t = [[(2.0 * A[i][j] - B[i][j] - B[j][i]) / 6.0 for j in range(n)] for i in range(n)]
    H = [[ric_t[i][j] - 0.5 * A[i][j] for j in range(n)] for i in range(n)]
    return R0, ric_t, H


def spray_y_divergence(spray_fn, n, xs, ys):
    """dG^m/dy^m at (x, y); the fiber part of the S-curvature."""
    jets = jet.lift(lambda ys2: spray_fn(xs, ys2), list(ys))
    acc = 0.0
    for i in range(n):
        acc = acc + jets[i].g[i]
    return acc


def mean_berwald(spray_fn, n, xs, ys):
    """E_ij = (1/2) d2(dG^m/dy^m)/dy^i dy^j (inspection only)."""

    def div_fn(ys2):
        return spray_y_divergence(spray_fn, n, xs, ys2)

    J = jet.lift(div_fn, list(ys))
    return [[0.5 * J.h[i][j] for j in range(n)] for i in range(n)]
