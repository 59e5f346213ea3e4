"""phi families for F = alpha * phi(beta/alpha) and their s-jets.

Each family evaluates through the jet kernel, so phi together with its
first two s-derivatives is exact (for spline-backed numeric solutions,
exact on the interpolant).  :func:`eval_phi_jet` packages everything the
curvature formulas consume: Q, its s-derivative, Theta, Psi and the
coefficient families built from them.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import jet
from .errors import PhiDomainError, SingularQError
from .jet import Jet2, value_of

Q_SINGULARITY_GUARD = 1e-12
REGULARITY_TOL = 1e-12

_KINDS = ("riemannian", "randers", "kropina", "randers_type", "ode_star_closed", "numeric")


@dataclass(frozen=True)
class PhiSpec:
    """A phi family: preset kind plus numeric parameters.

    kinds and params:
      riemannian       []                    phi = 1
      randers          []                    phi = 1 + s
      kropina          [sign]                phi = 1/s on the sign branch
      randers_type     [k1, k2, k3]          phi = k1*sqrt(1 + k2 s^2) + k3 s
      ode_star_closed  [C1, delta, b, sign]  phi = C1*(sqrt(b^2 - s^2) + sign*sqrt(delta)*b*s)
      numeric          []                    spline-backed solution handle
    """

    kind: str
    params: tuple = ()
    solution: object = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown phi kind {self.kind!r}")
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))

    # -- constructors ----------------------------------------------------

    @classmethod
    def riemannian(cls):
        return cls("riemannian")

    @classmethod
    def randers(cls):
        return cls("randers")

    @classmethod
    def kropina(cls, sign=1.0):
        return cls("kropina", (float(np.sign(sign) or 1.0),))

    @classmethod
    def randers_type(cls, k1, k2, k3):
        if k1 <= 0:
            raise ValueError("k1 must be positive")
        return cls("randers_type", (k1, k2, k3))

    @classmethod
    def ode_star_closed(cls, c1, delta, b, sign=1.0):
        if delta <= 0 or b <= 0 or c1 <= 0:
            raise ValueError("need C1 > 0, delta > 0, b > 0")
        return cls("ode_star_closed", (c1, delta, b, float(np.sign(sign) or 1.0)))

    @classmethod
    def numeric(cls, solution):
        return cls("numeric", (), solution)

    # -- evaluation ------------------------------------------------------

    def phi(self, s):
        """phi(s) on a generic scalar (float, array or jet)."""
        k = self.kind
        if k == "riemannian":
            return 1.0 + 0.0 * s
        if k == "randers":
            return 1.0 + s
        if k == "kropina":
            return 1.0 / s
        if k == "randers_type":
            k1, k2, k3 = self.params
            return k1 * jet.sqrt(1.0 + k2 * (s * s)) + k3 * s
        if k == "ode_star_closed":
            c1, delta, b, sign = self.params
            return c1 * (jet.sqrt(b * b - s * s) + sign * jet.sqrt(delta) * b * s)
        return self.solution.phi(s)

    def s_range(self, b):
        """Admissible closed |s|-interval inside [-b, b] (lo, hi).

        Open endpoints of the analytic domain are shrunk by a small
        margin so that every point of the returned interval is safely
        evaluable.
        """
        b = float(b)
        k = self.kind
        if k in ("riemannian", "randers"):
            return (-b, b)
        if k == "kropina":
            (sign,) = self.params
            floor = max(1e-3, 0.05 * b)
            return (floor, b) if sign > 0 else (-b, -floor)
        if k == "randers_type":
            _, k2, _ = self.params
            if k2 >= 0:
                return (-b, b)
            cap = 0.999 / np.sqrt(-k2)
            return (-min(b, cap), min(b, cap))
        if k == "ode_star_closed":
            _, _, bphi, _ = self.params
            cap = min(b, bphi * (1.0 - 1e-9))
            return (-cap, cap)
        lo, hi = self.solution.s_span()
        return (max(lo, -b), min(hi, b))

    def contains(self, s, b):
        lo, hi = self.s_range(b)
        s = np.asarray(s)
        return (s >= lo) & (s <= hi)

    def check_domain(self, s, b):
        ok = self.contains(s, b)
        if not np.all(ok):
            bad = np.asarray(s)[~np.asarray(ok)] if np.ndim(s) else s
            raise PhiDomainError(self.kind, bad)

    # -- serialization ---------------------------------------------------

    def to_json(self):
        out = {"kind": self.kind, "params": list(self.params)}
        if self.kind == "numeric":
            out["solution"] = self.solution.to_json()
        return out

    @classmethod
    def from_json(cls, obj):
        kind = obj["kind"]
        if kind == "numeric":
            from .ode import PhiSolution

            return cls.numeric(PhiSolution.from_json(obj["solution"]))
        return cls(kind, tuple(obj.get("params", ())))


@dataclass
class PhiJet:
    """All s-dependent scalars of the metric family at one s.

    Entries are floats for scalar input and arrays for batched input.
    ``Theta``/``Psi`` are NaN wherever the regularity expression
    phi - s phi' + (b^2 - s^2) phi'' degenerates (``degenerate`` flags it);
    the Killing-form spray never consumes them in that case.
    """

    s: float
    b2: float
    phi: float
    dphi: float
    ddphi: float
    Q: float
    Q_s: float
    Theta: float
    Psi: float
    reg: float
    c19: float
    c24: float
    c26: float
    C331: float
    C332: float
    C333: float
    C311: float
    C340: float
    degenerate: bool = False


def phi_derivatives(spec, s):
    """(phi, phi', phi'') at s via a single order-2 jet pass."""
    j = jet.lift(lambda a: spec.phi(a[0]), [s])
    if not isinstance(j, Jet2):  # constant family (riemannian short-circuit)
        z = 0.0 * np.asarray(s)
        return j + z, z, z
    return j.f, j.g[0], j.h[0][0]


def eval_phi_jet(spec, s, b2):
    """Evaluate the full coefficient record of Lemma-level quantities at s.

    Q_s is the exact derivative of Q: from Q = phi'/(phi - s phi') one has
    dQ/ds = phi * phi'' / (phi - s phi')^2, assembled from the jet values.
    """
    if np.any(np.asarray(b2) <= 0):
        raise ValueError("b2 must be positive")
    spec.check_domain(s, np.sqrt(np.max(np.asarray(b2))) if np.ndim(b2) else np.sqrt(b2))
    v, d1, d2 = phi_derivatives(spec, s)
    den = v - s * d1
    if np.any(np.abs(np.asarray(den)) < Q_SINGULARITY_GUARD):
        raise SingularQError(s)
    Q = d1 / den
    Q_s = v * d2 / (den * den)
    reg = den + (b2 - s * s) * d2

    scale = np.maximum(1.0, np.abs(np.asarray(den)) + np.abs(np.asarray((b2 - s * s) * d2)))
    degmask = np.abs(np.asarray(reg)) < REGULARITY_TOL * scale
    degenerate = bool(np.any(degmask))
    with np.errstate(divide="ignore", invalid="ignore"):
        theta_num = v * d1 - s * (v * d2 + d1 * d1)
        Theta = theta_num / (2.0 * v * reg)
        Psi = d2 / (2.0 * reg)
    if degenerate:
        Theta = np.where(degmask, np.nan, Theta)
        Psi = np.where(degmask, np.nan, Psi)
        if np.ndim(s) == 0:
            Theta, Psi = float(Theta), float(Psi)

    sQ = s * Q
    c19 = -2.0 * Q * Q + 2.0 * (1.0 + sQ) * Q_s
    c24 = 2.0 * Q
    c26 = -(Q * Q)
    C331 = -3.0 * Q * Q + 3.0 * sQ * Q_s + 3.0 * Q_s
    C332 = (Q - s * Q_s) * Q
    C333 = Q * Q_s
    C311 = s * Q_s - Q
    C340 = -2.0 * (Q_s * (b2 - s * s) + sQ + 1.0) * Psi + Q_s

    return PhiJet(
        s=s,
        b2=b2,
        phi=v,
        dphi=d1,
        ddphi=d2,
        Q=Q,
        Q_s=Q_s,
        Theta=Theta,
        Psi=Psi,
        reg=reg,
        c19=c19,
        c24=c24,
        c26=c26,
        C331=C331,
        C332=C332,
        C333=C333,
        C311=C311,
        C340=C340,
        degenerate=degenerate,
    )


@dataclass
class RegularityReport:
    verdict: str  # "regular" | "almost_regular" | "irregular"
    min_reg: float
    s_at_min_reg: float
    min_phi: float
    s_at_min_phi: float


def regularity_check(spec, b, grid=None):
    """Scan phi - s phi' + (b^2 - s^2) phi'' and phi over an s-grid.

    Verdicts: ``regular`` when the expression stays strictly positive,
    ``almost_regular`` when it touches zero (to tolerance, relative to the
    size of its two constituent terms) without going negative -- the
    closed-form solution of the first-order Q-equation degenerates this
    way on its whole domain -- and ``irregular`` on a genuine sign
    violation or non-positive phi.
    """
    b = float(b)
    if grid is None:
        lo, hi = spec.s_range(b)
        grid = np.linspace(lo, hi, 2001)
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise ValueError("empty s-grid")
    spec.check_domain(grid, b)
    v, d1, d2 = phi_derivatives(spec, grid)
    v = np.broadcast_to(np.asarray(v, dtype=float), grid.shape)
    term1 = v - grid * d1
    term2 = (b * b - grid * grid) * d2
    reg = term1 + term2
    scale = np.maximum(1.0, np.abs(term1) + np.abs(term2))

    i_reg = int(np.argmin(reg))
    i_phi = int(np.argmin(v))
    violated = reg < -REGULARITY_TOL * scale
    touched = reg < REGULARITY_TOL * scale
    if np.any(violated) or np.min(v) <= 0.0:
        verdict = "irregular"
    elif np.any(touched):
        verdict = "almost_regular"
    else:
        verdict = "regular"
    return RegularityReport(
        verdict=verdict,
        min_reg=float(reg[i_reg]),
        s_at_min_reg=float(grid[i_reg]),
        min_phi=float(v[i_phi]),
        s_at_min_phi=float(grid[i_phi]),
    )
