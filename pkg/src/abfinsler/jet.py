"""Truncated second-order forward-mode Taylor arithmetic.

A :class:`Jet2` carries a value together with exact first and second
partial derivatives with respect to ``m`` seed variables.  Payload slots
are duck-typed: plain floats, numpy arrays (elementwise batching over
sample points) and other ``Jet2`` instances all work.  Nesting jets is how
mixed chart/fiber derivatives are obtained -- each nesting level
contributes up to two orders of differentiation, and the composite result
is exact because the levels carry independent infinitesimals.

The only cross-level constants allowed inside a jet expression are plain
Python numbers; mixing two jets of different nesting levels in one
arithmetic expression would silently confuse the perturbations.  All
lifting helpers in this module keep the levels separated.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import JetDomainError

__all__ = [
    "Jet2",
    "value_of",
    "variables",
    "lift",
    "nested_xy_derivatives",
    "compose_univariate",
    "sqrt",
    "exp",
    "log",
    "sin",
    "cos",
    "power",
]


class Jet2:
    """Value with exact gradient and Hessian w.r.t. ``m`` active variables.

    The Hessian is stored as a full ``m x m`` nested list whose symmetric
    entries alias the same object; instances are never mutated after
    construction, so the aliasing is safe.
    """

    __slots__ = ("m", "f", "g", "h")

    def __init__(self, m, f, g, h):
        self.m = m
        self.f = f
        self.g = g
        self.h = h

    @classmethod
    def constant(cls, value, m):
        return cls(m, value, [0.0] * m, [[0.0] * m for _ in range(m)])

    @classmethod
    def variable(cls, value, slot, m):
        g = [0.0] * m
        g[slot] = 1.0
        return cls(m, value, g, [[0.0] * m for _ in range(m)])

    # -- ring operations -------------------------------------------------

    def __add__(self, o):
        if isinstance(o, Jet2):
            g = [a + b for a, b in zip(self.g, o.g)]
            h = [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.h, o.h)]
            return Jet2(self.m, self.f + o.f, g, h)
        return Jet2(self.m, self.f + o, self.g, self.h)

    __radd__ = __add__

    def __sub__(self, o):
        if isinstance(o, Jet2):
            g = [a - b for a, b in zip(self.g, o.g)]
            h = [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.h, o.h)]
            return Jet2(self.m, self.f - o.f, g, h)
        return Jet2(self.m, self.f - o, self.g, self.h)

    def __rsub__(self, o):
        g = [-a for a in self.g]
        h = [[-a for a in row] for row in self.h]
        return Jet2(self.m, o - self.f, g, h)

    def __neg__(self):
        g = [-a for a in self.g]
        h = [[-a for a in row] for row in self.h]
        return Jet2(self.m, -self.f, g, h)

    def __mul__(self, o):
        m = self.m
        if isinstance(o, Jet2):
            sf, of = self.f, o.f
            sg, og = self.g, o.g
            g = [sf * og[i] + of * sg[i] for i in range(m)]
            h = [[None] * m for _ in range(m)]
            for i in range(m):
                shi, ohi = self.h[i], o.h[i]
                sgi, ogi = sg[i], og[i]
                for j in range(i, m):
                    v = sf * ohi[j] + of * shi[j] + sgi * og[j] + ogi * sg[j]
                    h[i][j] = v
                    if j != i:
                        h[j][i] = v
            return Jet2(m, sf * of, g, h)
        g = [o * a for a in self.g]
        h = [[o * a for a in row] for row in self.h]
        return Jet2(m, self.f * o, g, h)

    __rmul__ = __mul__

    def __truediv__(self, o):
        if isinstance(o, Jet2):
            return self * o._reciprocal()
        return self * (1.0 / o)

    def __rtruediv__(self, o):
        return self._reciprocal() * o

    def _reciprocal(self):
        v = self.f
        try:
            iv = 1.0 / v
        except ZeroDivisionError as exc:
            raise JetDomainError("divide", v) from exc
        iv2 = iv * iv
        return _compose(self, iv, -iv2, 2.0 * (iv2 * iv))

    def __pow__(self, p):
        if isinstance(p, Jet2):
            return exp(p * log(self))
        if p == 2:
            return self * self
        return power(self, p)

    # comparisons act on the (recursively unwrapped) value, which is what
    # branch decisions in piecewise evaluations need
    def __lt__(self, o):
        return value_of(self) < value_of(o)

    def __le__(self, o):
        return value_of(self) <= value_of(o)

    def __gt__(self, o):
        return value_of(self) > value_of(o)

    def __ge__(self, o):
        return value_of(self) >= value_of(o)

    def __repr__(self):
        return f"Jet2(m={self.m}, f={self.f!r})"


def value_of(x):
    """Strip all jet structure, returning the underlying float or array."""
    while isinstance(x, Jet2):
        x = x.f
    return x


def _compose(x, f0, f1, f2):
    """Chain rule for a univariate map with derivatives ``f0, f1, f2`` at x."""
    m = x.m
    xg = x.g
    g = [f1 * a for a in xg]
    h = [[None] * m for _ in range(m)]
    for i in range(m):
        xhi = x.h[i]
        xgi = xg[i]
        for j in range(i, m):
            v = f1 * xhi[j] + f2 * (xgi * xg[j])
            h[i][j] = v
            if j != i:
                h[j][i] = v
    return Jet2(m, f0, g, h)


def compose_univariate(x, f0, f1, f2):
    """Public chain-rule hook for functions supplied with their derivatives.

    ``f0, f1, f2`` must be the function and its first two derivatives
    already evaluated at the payload of ``x``.  Used by piecewise
    (spline-backed) phi families.
    """
    if isinstance(x, Jet2):
        return _compose(x, f0, f1, f2)
    return f0


# -- smooth primitives dispatching on payload type -----------------------


def sqrt(x):
    if isinstance(x, Jet2):
        r = sqrt(x.f)
        d1 = 0.5 / r
        return _compose(x, r, d1, -0.25 / (r * r * r))
    if isinstance(x, np.ndarray):
        if np.any(x < 0.0):
            raise JetDomainError("sqrt", float(np.min(x)))
        return np.sqrt(x)
    if x < 0.0:
        raise JetDomainError("sqrt", x)
    return math.sqrt(x)


def exp(x):
    if isinstance(x, Jet2):
        e = exp(x.f)
        return _compose(x, e, e, e)
    if isinstance(x, np.ndarray):
        return np.exp(x)
    return math.exp(x)


def log(x):
    if isinstance(x, Jet2):
        l0 = log(x.f)  # also performs the domain check
        iv = 1.0 / x.f
        return _compose(x, l0, iv, -(iv * iv))
    if isinstance(x, np.ndarray):
        if np.any(x <= 0.0):
            raise JetDomainError("log", float(np.min(x)))
        return np.log(x)
    if x <= 0.0:
        raise JetDomainError("log", x)
    return math.log(x)


def sin(x):
    if isinstance(x, Jet2):
        s = sin(x.f)
        c = cos(x.f)
        return _compose(x, s, c, -1.0 * s)
    if isinstance(x, np.ndarray):
        return np.sin(x)
    return math.sin(x)


def cos(x):
    if isinstance(x, Jet2):
        s = sin(x.f)
        c = cos(x.f)
        return _compose(x, c, -1.0 * s, -1.0 * c)
    if isinstance(x, np.ndarray):
        return np.cos(x)
    return math.cos(x)


def power(x, p):
    """x**p for a numeric exponent p (x > 0 unless p is a small integer)."""
    if isinstance(x, Jet2):
        v = x.f
        f0 = power(v, p)
        f1 = p * power(v, p - 1)
        f2 = p * (p - 1) * power(v, p - 2)
        return _compose(x, f0, f1, f2)
    if isinstance(x, np.ndarray):
        if p != int(p) and np.any(x < 0.0):
            raise JetDomainError("power", float(np.min(x)))
        return x**p
    if p != int(p) and x < 0.0:
        raise JetDomainError("power", x)
    if isinstance(x, (int, float)):
        try:
            return x**p
        except ZeroDivisionError as exc:
            raise JetDomainError("power", x) from exc
    return x**p


# -- lifting helpers ------------------------------------------------------


def variables(values, active=None):
    """Seed a list of scalars as jet variables.

    ``active`` selects which slots are differentiated (all by default);
    inactive slots are passed through untouched so they behave as
    constants of whatever level they already carry.
    """
    values = list(values)
    if active is None:
        active = range(len(values))
    active = list(active)
    m = len(active)
    out = list(values)
    for slot, idx in enumerate(active):
        out[idx] = Jet2.variable(values[idx], slot, m)
    return out


def lift(f, seed, active=None):
    """Evaluate ``f`` on jet-seeded arguments.

    ``f`` receives the full argument list (active slots replaced by jet
    variables) and may return a scalar or any nesting of lists/tuples of
    scalars; the same structure of jets comes back.
    """
    args = variables(seed, active)
    return f(args)


def nested_xy_derivatives(f, x0, y0, orders=(2, 2)):
    """Mixed partial table of ``f(x, y)`` up to ``orders=(a<=2, b<=2)``.

    Returns a dict keyed by ``(a, b)`` holding numpy arrays of shape
    ``(n,)*a + (n,)*b`` with entry ``[i...][j...] =``
    d^(a+b) f / dx^i... dy^j... .  Differentiation nests a jet level over
    x inside a jet level over y, so every entry is exact.
    """
    ax, ay = orders
    if ax > 2 or ay > 2:
        raise ValueError("at most two derivative orders per slot are supported")
    x0 = [float(v) for v in x0]
    y0 = [float(v) for v in y0]
    nx, ny = len(x0), len(y0)

    xjets = variables(x0)  # inner level: d/dx
    outer_seed = [Jet2.constant(xj, ny) for xj in xjets]

    def wrapped(args_y):
        return f(outer_seed, args_y)

    res = lift(wrapped, y0)

    def part(payload, xa, idx):
        # payload is an inner x-jet (or a plain float when f ignores x)
        if not isinstance(payload, Jet2):
            if xa == 0:
                return payload
            return 0.0
        if xa == 0:
            return payload.f
        if xa == 1:
            return payload.g[idx[0]]
        return payload.h[idx[0]][idx[1]]

    def ypart(jet, yb, idx):
        if yb == 0:
            return jet.f
        if yb == 1:
            return jet.g[idx[0]]
        return jet.h[idx[0]][idx[1]]

    table = {}
    for b in range(ay + 1):
        for a in range(ax + 1):
            shape = (nx,) * a + (ny,) * b
            arr = np.zeros(shape) if shape else None
            if not shape:
                table[(a, b)] = float(part(ypart(res, 0, ()), 0, ()))
                continue
            for idx in np.ndindex(shape):
                xi, yi = idx[:a], idx[a:]
                arr[idx] = part(ypart(res, b, yi), a, xi)
            table[(a, b)] = arr
    return table
