"""Levi-Civita data of alpha: Christoffel symbols, covariant derivatives of
beta, the r/s decomposition, Killing predicates, and the curvature of alpha.

Everything differentiating chart functions does so through jet lifts, so
these routines stay correct when called with jet-valued chart points from
the spray/curvature passes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import engine, jet, tensors
from .jet import value_of
from .metric import ABMetric, TangentSample

KILLING_TOL = 1e-8


def _christoffel_scalars(m, xs):
    """Gamma^i_jk at a generic-scalar chart point."""
    n = m.n
    A = jet.lift(lambda args: m.a_at(args), xs)
    a0 = [[A[i][j].f for j in range(n)] for i in range(n)]
    da = [[[A[i][j].g[k] for k in range(n)] for j in range(n)] for i in range(n)]
    ainv = tensors.sym_inverse(a0, n, what="a(x)")
    gamma = [[[None] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            for k in range(j, n):
                acc = 0.0
                for p in range(n):
                    acc = acc + ainv[i][p] * (da[p][j][k] + da[p][k][j] - da[j][k][p])
                val = 0.5 * acc
                gamma[i][j][k] = val
                gamma[i][k][j] = val
    return gamma, a0, ainv


def christoffel(m: ABMetric, x):
    """Levi-Civita symbols Gamma^i_jk(x); symmetric in (j, k)."""
    xs = tensors.components(x, m.n)
    batch = tensors.batch_shape_of(np.asarray(x))
    gamma, _, _ = _christoffel_scalars(m, xs)
    return tensors.stack(gamma, batch, 3)


def alpha_spray(m: ABMetric):
    """Geodesic coefficients of alpha: Gbar^i = (1/2) Gamma^i_jk y^j y^k."""

    def spray(xs, ys):
        gamma, _, _ = _christoffel_scalars(m, xs)
        n = m.n
        out = []
        for i in range(n):
            acc = 0.0
            for j in range(n):
                for k in range(n):
                    acc = acc + gamma[i][j][k] * ys[j] * ys[k]
            out.append(0.5 * acc)
        return out

    return spray


@dataclass
class BetaDerivatives:
    """Covariant data of beta at one (x, y), all in chart components.

    ``s_up_cov[i][j][k]`` holds s^i_{j;k} and ``s_low_cov[j][m][k]`` holds
    s_{jm;k}; the y-contractions the curvature formulas need are exposed
    as plain fields.
    """

    bcov: np.ndarray  # b_{i;j}
    r: np.ndarray
    sA: np.ndarray
    s_up: np.ndarray  # s^i_j
    r_vec: np.ndarray  # r_j = b^m r_mj
    s_vec: np.ndarray  # s_j = b^m s_mj
    s_up_cov: np.ndarray
    s_low_cov: np.ndarray
    b2: float
    # contractions at the sample direction
    s_i0: np.ndarray  # s_{i0} = s_{ij} y^j
    s_low0: np.ndarray  # s_{0j} = y^i s_{ij}
    s_up0: np.ndarray  # s^i_0
    r_00: float
    s_0: float
    s0m_sm0: float
    sisj_trace: float
    div_s0: float  # s^m_{0;m}


def _s_mixed_scalars(m, xs):
    """s^i_j as generic scalars at a chart point (with its own inner lift)."""
    n = m.n
    gamma, a0, ainv = _christoffel_scalars(m, xs)
    B = jet.lift(lambda args: m.b_at(args), xs)
    b0 = [B[i].f for i in range(n)]
    db = [[B[i].g[j] for j in range(n)] for i in range(n)]
    bcov = [[db[i][j] - sum_bg(b0, gamma, i, j, n) for j in range(n)] for i in range(n)]
    sA = [[0.5 * (bcov[i][j] - bcov[j][i]) for j in range(n)] for i in range(n)]
    s_up = [[tensors.dot(ainv[i], [sA[p][j] for p in range(n)]) for j in range(n)] for i in range(n)]
    return s_up, sA, bcov, gamma, a0, ainv, b0


def sum_bg(b0, gamma, i, j, n):
    acc = 0.0
    for p in range(n):
        acc = acc + b0[p] * gamma[p][i][j]
    return acc


def beta_derivatives(m: ABMetric, t: TangentSample) -> BetaDerivatives:
    """b_{i;j} = db_i/dx^j - b_p Gamma^p_ij plus every contraction in use."""
    n = m.n
    xs = tensors.components(t.x, n)
    ys = tensors.components(t.y, n)
    batch = tensors.batch_shape_of(t.x, t.y)

    s_up, sA, bcov, gamma, a0, ainv, b0 = _s_mixed_scalars(m, xs)
    r = [[0.5 * (bcov[i][j] + bcov[j][i]) for j in range(n)] for i in range(n)]
    b_up = tensors.mat_vec(ainv, b0)
    r_vec = [tensors.dot(b_up, [r[p][j] for p in range(n)]) for j in range(n)]
    s_vec = [tensors.dot(b_up, [sA[p][j] for p in range(n)]) for j in range(n)]
    b2 = m.b2_at(xs, a=a0, ainv=ainv)

    # one more x-derivative level for the covariant derivatives of s
    S = jet.lift(lambda args: _s_mixed_scalars(m, args)[0], xs)
    dsu = [[[S[i][j].g[k] for k in range(n)] for j in range(n)] for i in range(n)]
    s_up_cov = [[[None] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                acc = dsu[i][j][k]
                for p in range(n):
                    acc = acc + gamma[i][k][p] * s_up[p][j] - gamma[p][k][j] * s_up[i][p]
                s_up_cov[i][j][k] = acc

    SL = jet.lift(lambda args: _s_mixed_scalars(m, args)[1], xs)
    dsl = [[[SL[i][j].g[k] for k in range(n)] for j in range(n)] for i in range(n)]
    s_low_cov = [[[None] * n for _ in range(n)] for _ in range(n)]
    for j in range(n):
        for mm in range(n):
            for k in range(n):
                acc = dsl[j][mm][k]
                for p in range(n):
                    acc = acc - gamma[p][k][j] * sA[p][mm] - gamma[p][k][mm] * sA[j][p]
                s_low_cov[j][mm][k] = acc

    s_i0 = [tensors.dot(sA[i], ys) for i in range(n)]
    s_low0 = [sum((ys[i] * sA[i][j] for i in range(n)), start=0.0) for j in range(n)]
    s_up0 = [tensors.dot(s_up[i], ys) for i in range(n)]
    r_00 = tensors.quad_form(r, ys, ys)
    s_0 = tensors.dot(s_vec, ys)
    s0m_sm0 = tensors.dot(s_low0, s_up0)
    sisj = sum((s_up[i][p] * s_up[p][i] for i in range(n) for p in range(n)), start=0.0)
    div_s0 = sum((ys[j] * s_up_cov[p][j][p] for j in range(n) for p in range(n)), start=0.0)

    def st(v, d):
        return tensors.stack(v, batch, d)

    return BetaDerivatives(
        bcov=st(bcov, 2),
        r=st(r, 2),
        sA=st(sA, 2),
        s_up=st(s_up, 2),
        r_vec=st(r_vec, 1),
        s_vec=st(s_vec, 1),
        s_up_cov=st(s_up_cov, 3),
        s_low_cov=st(s_low_cov, 3),
        b2=st(b2, 0),
        s_i0=st(s_i0, 1),
        s_low0=st(s_low0, 1),
        s_up0=st(s_up0, 1),
        r_00=st(r_00, 0),
        s_0=st(s_0, 0),
        s0m_sm0=st(s0m_sm0, 0),
        sisj_trace=st(sisj, 0),
        div_s0=st(div_s0, 0),
    )


@dataclass
class KillingReport:
    is_killing: bool
    max_r: float
    max_s_vec: float
    b_len_std: float
    scale: float


def killing_predicate(m: ABMetric, points) -> KillingReport:
    """True iff r_ij = 0 and s_j = 0 over the samples (relative threshold).

    The residual scale is max(1, ||b_{i;j}||_inf) over the samples so that
    large covariant derivatives do not mask genuine violations.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    ys = np.ones_like(points)  # contractions unused here, any direction works
    bd = beta_derivatives(m, TangentSample(points, ys))
    scale = max(1.0, float(np.max(np.abs(bd.bcov))))
    max_r = float(np.max(np.abs(bd.r)))
    max_s = float(np.max(np.abs(bd.s_vec)))
    b_lens = np.sqrt(np.asarray(bd.b2))
    b_std = float(np.std(np.broadcast_to(b_lens, points.shape[:-1])))
    ok = (max_r < KILLING_TOL * scale) and (max_s < KILLING_TOL * scale)
    return KillingReport(bool(ok), max_r, max_s, b_std, scale)


@dataclass
class AlphaCurvature:
    Rbar: np.ndarray
    RicBar: float
    christoffel: np.ndarray


def alpha_curvature(m: ABMetric, t: TangentSample) -> AlphaCurvature:
    """Riemann operator and Ricci curvature of alpha via the spray formula.

    Deliberately runs through the same generic spray-curvature path as the
    Finsler metric, with Gbar as the spray.
    """
    xs = tensors.components(t.x, m.n)
    ys = tensors.components(t.y, m.n)
    batch = tensors.batch_shape_of(t.x, t.y)
    R, _ = engine.riemann_operator(alpha_spray(m), m.n, xs, ys)
    ric = sum((R[i][i] for i in range(m.n)), start=0.0)
    return AlphaCurvature(
        Rbar=tensors.stack(R, batch, 2),
        RicBar=tensors.stack(ric, batch, 0),
        christoffel=christoffel(m, t.x),
    )


def lemma_sss_check(m: ABMetric, samples: TangentSample):
    """Residuals of b^m s_{jm;k} + s_{jm} s^m_k and its contracted trace form.

    Only meaningful when the Killing predicate holds.  Returns
    (max_abs_residual_full, max_abs_residual_contracted).
    """
    n = m.n
    bd = beta_derivatives(m, samples)
    xs = tensors.components(samples.x, n)
    a0 = m.a_at(xs)
    ainv = tensors.sym_inverse(a0, n, what="a(x)")
    b0 = m.b_at(xs)
    b_up = tensors.mat_vec(ainv, b0)
    b_up = tensors.stack(b_up, tensors.batch_shape_of(samples.x), 1)

    full = np.einsum("...m,...jmk->...jk", b_up, bd.s_low_cov) + np.einsum(
        "...jm,...mk->...jk", bd.sA, bd.s_up
    )
    contracted = np.einsum("...i,...mim->...", b_up, bd.s_up_cov) + bd.sisj_trace
    return float(np.max(np.abs(full))), float(np.max(np.abs(contracted)))


def randers_isotropicS_residual(m: ABMetric, c, x):
    """Residual of r_ij + b_i s_j + b_j s_i - 2c (a_ij - b_i b_j) at x."""
    x = np.asarray(x, dtype=float)
    y = np.ones_like(x)
    bd = beta_derivatives(m, TangentSample(x, y))
    xs = tensors.components(x, m.n)
    batch = tensors.batch_shape_of(x)
    a0 = tensors.stack(m.a_at(xs), batch, 2)
    b0 = tensors.stack(m.b_at(xs), batch, 1)
    bb = np.einsum("...i,...j->...ij", b0, b0)
    sb = np.einsum("...i,...j->...ij", b0, bd.s_vec)
    return bd.r + sb + np.swapaxes(sb, -1, -2) - 2.0 * c * (a0 - bb)
