"""Squashed three-sphere charts: right-invariant coframe and Berger scaling.

S^3 is the unit quaternions q = (w, v) charted by v on the hemisphere
w = sqrt(1 - |v|^2) > 0.  The components of the right Maurer-Cartan form
dq q^{-1} in the (i, j, k) basis give three right-invariant 1-forms whose
exterior derivatives close with structure constant exactly 2,
d eta^1 = 2 eta^2 ^ eta^3 (cyclic); the sign convention is pinned by that
normalization and asserted numerically in the tests.

Scaling eta^1 by (1+eps) and eta^2, eta^3 by sqrt(1+eps) produces the
squashed metric; the unit-length-b multiple of the first scaled form is
the Killing form the whole construction rides on.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import jet, tensors
from .errors import OutOfChartError
from .metric import ABMetric
from .phi import PhiSpec

CHART_RADIUS = 0.9  # sampling stays inside |v| <= 0.9


def coframe(vs):
    """eta^a_i at chart point v (list of 3 generic scalars).

    Rows are the coframe index a, columns the chart index i:
    eta^a = eta^a_i dv^i with
    eta^a_i = w delta_ai + v_a v_i / w + (cross matrix of v)_ai.
    """
    v0, v1, v2 = vs
    r2 = v0 * v0 + v1 * v1 + v2 * v2
    if np.any(np.asarray(jet.value_of(r2)) >= 1.0):
        raise OutOfChartError("|v| >= 1 leaves the hemisphere chart")
    w = jet.sqrt(1.0 - r2)
    iw = 1.0 / w
    return [
        [w + v0 * v0 * iw, v0 * v1 * iw - v2, v0 * v2 * iw + v1],
        [v1 * v0 * iw + v2, w + v1 * v1 * iw, v1 * v2 * iw - v0],
        [v2 * v0 * iw - v1, v2 * v1 * iw + v0, w + v2 * v2 * iw],
    ]


@dataclass
class BergerSphere:
    """Berger metric data for one squashing parameter epsilon >= 0."""

    epsilon: float
    b: float
    lam: float
    metric: ABMetric

    def scales(self):
        e = self.epsilon
        return (1.0 + e, np.sqrt(1.0 + e), np.sqrt(1.0 + e))

    def theta(self, vs):
        """Scaled coframe theta^a_i on generic scalars."""
        s1, s2, s3 = self.scales()
        eta = coframe(vs)
        return [
            [s1 * c for c in eta[0]],
            [s2 * c for c in eta[1]],
            [s3 * c for c in eta[2]],
        ]

    def coframe_at(self, p):
        """theta^a_i as a numpy array (batched over leading axes of p)."""
        vs = tensors.components(p, 3)
        batch = tensors.batch_shape_of(np.asarray(p))
        return tensors.stack(self.theta(vs), batch, 2)

    def frame_components(self, p, y):
        """yhat^a = theta^a_i y^i."""
        th = self.coframe_at(p)
        return np.einsum("...ai,...i->...a", th, np.asarray(y, dtype=float))

    def chart_components(self, p, yhat):
        """Inverse transform: y^i from frame components."""
        th = self.coframe_at(p)
        return np.linalg.solve(th, np.asarray(yhat, dtype=float)[..., None])[..., 0]

    def frame_operator(self, p, T):
        """Conjugate a (1,1)-tensor T^i_j into frame components."""
        th = self.coframe_at(p)
        thi = np.linalg.inv(th)
        return np.einsum("...ai,...ij,...jb->...ab", th, np.asarray(T, dtype=float), thi)

    def frame_covector(self, p, w):
        """Lower-index components w_a = w_i (theta^{-1})^i_a."""
        thi = np.linalg.inv(self.coframe_at(p))
        return np.einsum("...i,...ia->...a", np.asarray(w, dtype=float), thi)

    def with_phi(self, phi):
        return BergerSphere(self.epsilon, self.b, self.lam, self.metric.with_phi(phi))


def make_berger(epsilon, phi=None):
    """Assemble the Berger sphere for a given squashing epsilon >= 0."""
    eps = float(epsilon)
    if eps < 0:
        raise ValueError("epsilon must be >= 0")
    b = np.sqrt(eps / (1.0 + eps))
    lam = 1.0 - 4.0 * b * b
    s1 = 1.0 + eps
    s23 = np.sqrt(1.0 + eps)
    scales = (s1, s23, s23)

    def theta(vs):
        eta = coframe(vs)
        return [[scales[a] * eta[a][i] for i in range(3)] for a in range(3)]

    def a_fn(vs):
        th = theta(vs)
        return [
            [th[0][i] * th[0][j] + th[1][i] * th[1][j] + th[2][i] * th[2][j] for j in range(3)]
            for i in range(3)
        ]

    def b_fn(vs):
        th = theta(vs)
        return [b * th[0][i] for i in range(3)]

    metric = ABMetric(3, a_fn, b_fn, phi or PhiSpec.riemannian(), b_len=float(b))
    return BergerSphere(epsilon=eps, b=float(b), lam=float(lam), metric=metric)


# -- closed-form frame expectations --------------------------------------

_S_FRAME = None


def _frame_s_data(b):
    """The exact frame components of the s-tensor and its covariant derivative."""
    s = np.zeros((3, 3))
    s[1, 2] = -b
    s[2, 1] = b
    # s_{jm;k}: the only nonzero covariant derivatives in the frame
    s_cov = np.zeros((3, 3, 3))
    s_cov[0, 1, 1] = -b  # s_{12;2}
    s_cov[1, 0, 1] = b
    s_cov[0, 2, 2] = -b  # s_{13;3}
    s_cov[2, 0, 2] = b
    return s, s_cov


@dataclass
class FrameExpectations:
    """Closed-form values of the frame quantities at one frame direction."""

    RicBar: float
    RBar: np.ndarray  # entries the construction pins down; see docstring
    s0m_sm0: float
    div_s0: float
    sisj_trace: float
    RT: np.ndarray
    R11: float
    R22: float
    R33: float
    RT11: float
    RT12: float
    RT22: float


def expected_quantities(sphere, yhat, phijet=None):
    """Golden frame-component values at frame direction yhat.

    ``RT`` is assembled from the curvature-difference formula with the
    exact frame s-data (an evaluation path independent of the chart
    pipeline); RT11/RT12/RT22 and R11/R22/R33 are the literal closed-form
    displays.  When ``phijet`` is None only the alpha-level quantities are
    filled and the phi-dependent entries are NaN.
    """
    b, lam = sphere.b, sphere.lam
    y = np.asarray(yhat, dtype=float)
    y1, y2, y3 = y
    alpha2 = float(y @ y)
    alpha = np.sqrt(alpha2)
    beta = b * y1
    perp = y2 * y2 + y3 * y3

    RicBar = 2.0 * alpha2 - 4.0 * (b * b * alpha2 - beta * beta)
    RBar = np.full((3, 3), np.nan)
    RBar[0, 0] = perp
    RBar[1, 1] = y1 * y1 + lam * y3 * y3
    RBar[2, 2] = y1 * y1 + lam * y2 * y2
    RBar[0, 1] = -y1 * y2
    RBar[0, 2] = -y1 * y3
    RBar[1, 2] = -lam * y2 * y3

    s0m_sm0 = -(b * b * alpha2 - beta * beta)
    div_s0 = 2.0 * beta
    sisj = -2.0 * b * b

    if phijet is None:
        nan = float("nan")
        return FrameExpectations(RicBar, RBar, s0m_sm0, div_s0, sisj, np.full((3, 3), np.nan), nan, nan, nan, nan, nan, nan)

    Q, Qs = phijet.Q, phijet.Q_s
    C331, C332, C333, C311 = phijet.C331, phijet.C332, phijet.C333, phijet.C311
    s = beta / alpha

    smat, s_cov = _frame_s_data(b)
    s_up0 = smat @ y  # s^i_0
    s_low0 = y @ smat  # s_{0j}
    ss0 = smat @ s_up0  # s^i_k s^k_0
    ss = smat @ smat  # s^i_k s^k_j
    s_up_cov = s_cov  # orthonormal frame: raising is the identity
    s_0j = np.einsum("imk,m->ik", s_up_cov, y)  # s^i_{0;j}
    s_j0 = np.einsum("ijk,k->ij", s_up_cov, y)  # s^i_{j;0}
    s_00 = np.einsum("imk,m,k->i", s_up_cov, y, y)  # s^i_{0;0}
    l_low = y / alpha
    b_low = np.array([b, 0.0, 0.0])

    RT = (
        C331 * np.outer(s_up0, s_low0)
        + alpha * C332 * np.outer(ss0, l_low)
        + alpha * C333 * np.outer(ss0, b_low)
        - (Q * Q * alpha2) * ss
        + (2.0 * Q * alpha) * s_0j
        - (Q * alpha) * s_j0
        + C311 * np.outer(s_00, l_low)
        - Qs * np.outer(s_00, b_low)
    )

    R11 = (1.0 + s * Q + (b * b - s * s) * Qs) * perp
    R22 = (
        y1 * y1
        + lam * y3 * y3
        + (b * b * Q * Q + 2.0 * s * Q) * alpha2
        - (b * b * C332 - s * C311) * y2 * y2
        - b * b * C331 * y3 * y3
    )
    R33 = (
        y1 * y1
        + lam * y2 * y2
        + (b * b * Q * Q + 2.0 * s * Q) * alpha2
        - (b * b * C332 - s * C311) * y3 * y3
        - b * b * C331 * y2 * y2
    )
    RT11 = -b / alpha * perp * (C311 * y1 - Qs * b * alpha)
    RT12 = -b / alpha * y2 * (Q * alpha2 + perp * C311)
    RT22 = (
        -b * b * (C331 * y3 * y3 + C332 * y2 * y2)
        + b * b * Q * Q * alpha2
        + 2.0 * b * Q * alpha * y1
        + C311 * b / alpha * y1 * y2 * y2
    )
    return FrameExpectations(RicBar, RBar, s0m_sm0, div_s0, sisj, RT, R11, R22, R33, RT11, RT12, RT22)
