"""Chart-based (alpha,beta)-metrics: F, the fundamental tensor, samples.

An :class:`ABMetric` bundles the chart functions a_ij(x) and b_i(x) with a
phi family.  The chart closures receive a list of n generic scalars and
must build their output from arithmetic the jet kernel understands; that
single discipline makes every curvature operation in the package work
unchanged on floats, on batched numpy payloads and under jet lifts.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import jet, tensors
from .errors import DegenerateDirectionError
from .jet import value_of
from .phi import PhiSpec

FUNDAMENTAL_DET_GUARD = 1e-12


@dataclass
class TangentSample:
    """A chart point with a nonzero direction; trailing axis is the component axis."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        self.y = np.asarray(self.y, dtype=float)


@dataclass
class ABMetric:
    """F = alpha * phi(beta/alpha) in one chart.

    ``b_len`` declares a constant ||beta||_alpha when known (the Berger
    construction has one); otherwise b^2 is computed per point.
    """

    n: int
    a: Callable
    bform: Callable
    phi: PhiSpec
    b_len: float | None = None

    def with_phi(self, phi):
        return ABMetric(self.n, self.a, self.bform, phi, self.b_len)

    # chart functions on generic scalar lists ---------------------------

    def a_at(self, xs):
        return self.a(xs)

    def b_at(self, xs):
        return self.bform(xs)

    def b2_at(self, xs, a=None, ainv=None):
        """||beta||_alpha^2 at the point (generic scalars)."""
        if self.b_len is not None:
            return self.b_len**2
        if ainv is None:
            a = self.a_at(xs) if a is None else a
            ainv = tensors.sym_inverse(a, self.n, what="a(x)")
        b = self.b_at(xs)
        return tensors.quad_form(ainv, b, b)

    def alpha_beta(self, xs, ys, a=None):
        """(alpha, beta, s) as generic scalars; alpha > 0 is the caller's duty."""
        if a is None:
            a = self.a_at(xs)
        alpha2 = tensors.quad_form(a, ys, ys)
        alpha = jet.sqrt(alpha2)
        beta = tensors.dot(self.b_at(xs), ys)
        return alpha, beta, beta / alpha

    def F2_at(self, xs, ys, a=None):
        """F^2 as a generic scalar (no domain checks: do them on values first)."""
        alpha, _, s = self.alpha_beta(xs, ys, a=a)
        f = alpha * self.phi.phi(s)
        return f * f


def _split_sample(m, t):
    xs = tensors.components(t.x, m.n)
    ys = tensors.components(t.y, m.n)
    batch = tensors.batch_shape_of(t.x, t.y)
    return xs, ys, batch


def eval_F(m: ABMetric, t: TangentSample):
    """F(x, y); positively 1-homogeneous in y."""
    xs, ys, batch = _split_sample(m, t)
    a = m.a_at(xs)
    alpha2 = tensors.quad_form(a, ys, ys)
    if np.any(np.asarray(alpha2) <= 0.0):
        raise DegenerateDirectionError("alpha(x, y) = 0")
    alpha = jet.sqrt(alpha2)
    beta = tensors.dot(m.b_at(xs), ys)
    s = beta / alpha
    b = np.sqrt(np.max(np.asarray(value_of(m.b2_at(xs)))))
    m.phi.check_domain(s, max(b, 1e-15))
    F = alpha * m.phi.phi(s)
    return F if batch else float(F)


def fundamental_tensor(m: ABMetric, t: TangentSample):
    """g_ij = (1/2) d^2 F^2 / dy^i dy^j via jets, plus its inverse."""
    xs, ys, batch = _split_sample(m, t)

    def f2(args):
        return m.F2_at(xs, args)

    J = jet.lift(f2, ys)
    n = m.n
    g = [[0.5 * J.h[i][j] for j in range(n)] for i in range(n)]
    ginv = tensors.sym_inverse(g, n, guard=FUNDAMENTAL_DET_GUARD, what="fundamental tensor")
    return tensors.stack(g, batch, 2), tensors.stack(ginv, batch, 2)
