"""Small tensor helpers on nested lists of generic scalars.

Everything here must stay payload-agnostic (floats, numpy arrays, jets),
so matrices are nested lists and the 3x3 inverse goes through the
adjugate -- branch-free, hence safe for batched and jet-valued entries.
"""

from __future__ import annotations

import numpy as np

from .errors import DegenerateMetricError
from .jet import value_of


def components(arr, n):
    """Split the trailing axis of a numpy array into a list of n scalars."""
    a = np.asarray(arr, dtype=float)
    if a.shape[-1] != n:
        raise ValueError(f"expected trailing axis of length {n}, got shape {a.shape}")
    out = []
    for i in range(n):
        c = a[..., i]
        out.append(float(c) if c.ndim == 0 else c)
    return out


def batch_shape_of(*arrays):
    shapes = [np.asarray(a).shape[:-1] for a in arrays]
    return np.broadcast_shapes(*shapes)


def stack(nested, batch_shape, depth):
    """Assemble a depth-level nested list of scalars into a numpy array.

    Component axes come last: depth-2 input of shape [n][m] with payload
    batch shape B yields an array of shape B + (n, m).
    """
    if depth == 0:
        v = np.asarray(nested, dtype=float)
        if v.shape != tuple(batch_shape):
            v = np.broadcast_to(v, batch_shape).copy()
        return v
    parts = [stack(item, batch_shape, depth - 1) for item in nested]
    return np.stack(parts, axis=-depth)


def dot(u, v):
    acc = u[0] * v[0]
    for a, b in zip(u[1:], v[1:]):
        acc = acc + a * b
    return acc


def mat_vec(m, v):
    return [dot(row, v) for row in m]


def quad_form(m, u, v):
    return dot(u, mat_vec(m, v))


def transpose(m):
    n = len(m)
    return [[m[j][i] for j in range(n)] for i in range(n)]


def det3(a):
    return (
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    )


def inv3(a, guard=None, what="matrix"):
    """Adjugate inverse of a 3x3 nested-list matrix.

    When ``guard`` is given, raise DegenerateMetricError if
    |det| < guard * max(1, scale^3) with scale = max |a_ij| (checked on
    the payload values, so it works batched).
    """
    d = det3(a)
    if guard is not None:
        dv = np.asarray(value_of(d))
        scale = max(1.0, float(np.max([np.max(np.abs(np.asarray(value_of(x)))) for row in a for x in row])))
        if np.any(np.abs(dv) < guard * scale**3):
            raise DegenerateMetricError(f"{what} is numerically singular (|det| < {guard} * scale)")
    c00 = a[1][1] * a[2][2] - a[1][2] * a[2][1]
    c01 = a[0][2] * a[2][1] - a[0][1] * a[2][2]
    c02 = a[0][1] * a[1][2] - a[0][2] * a[1][1]
    c10 = a[1][2] * a[2][0] - a[1][0] * a[2][2]
    c11 = a[0][0] * a[2][2] - a[0][2] * a[2][0]
    c12 = a[0][2] * a[1][0] - a[0][0] * a[1][2]
    c20 = a[1][0] * a[2][1] - a[1][1] * a[2][0]
    c21 = a[0][1] * a[2][0] - a[0][0] * a[2][1]
    c22 = a[0][0] * a[1][1] - a[0][1] * a[1][0]
    inv_d = 1.0 / d
    return [
        [c00 * inv_d, c01 * inv_d, c02 * inv_d],
        [c10 * inv_d, c11 * inv_d, c12 * inv_d],
        [c20 * inv_d, c21 * inv_d, c22 * inv_d],
    ]


def sym_inverse(a, n, guard=None, what="matrix"):
    if n == 3:
        return inv3(a, guard=guard, what=what)
    raise NotImplementedError("only n=3 charts are wired up")
