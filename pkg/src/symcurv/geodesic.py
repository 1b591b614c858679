"""Geodesics and Jacobi fields of left-invariant connections, numerically.

Everything lives in the Lie algebra through left trivialization: the
velocity v(t), the Jacobi field J(t) and P(t) = D_t J, with D_t W = W' + A(v)W.
The system integrated is

    v' = -A(v)v,   J' = P - A(v)J,   P' = R(v, J)v - A(v)P.

Floats throughout; the exact coefficients and curvature are converted once.
"""

import math
from dataclasses import dataclass, field

import numpy as np


class GeodesicError(ValueError):
    pass


class BlowUp(GeodesicError):
    def __init__(self, t):
        super().__init__("nonfinite values at t = %.6g" % t)
        self.t = t


@dataclass
class FloatConnection:
    A: np.ndarray  # A[i, j, k] = (nabla_{e_i} e_j)^k
    R: np.ndarray  # R[i, j, p, k] = (R(e_i, e_j) e_p)^k
    omega: np.ndarray

    @classmethod
    def from_connection(cls, conn):
        return cls(
            A=conn.coefficients.to_float(),
            R=conn.curvature().to_float(),
            omega=conn.omega.matrix.to_float(),
        )

    def rhs(self, state):
        v, J, P = state
        Av = np.einsum("i,ijk->jk", v, self.A)
        return np.stack(
            [
                -v @ Av,
                P - J @ Av,
                np.einsum("i,j,p,ijpk->k", v, J, v, self.R) - P @ Av,
            ]
        )

    def pair(self, x, y):
        return x @ self.omega @ y


def as_float_connection(conn):
    return conn if isinstance(conn, FloatConnection) else FloatConnection.from_connection(conn)


@dataclass
class Trajectory:
    h: float
    times: np.ndarray
    v: np.ndarray  # shape (steps + 1, dim)
    J: np.ndarray
    P: np.ndarray  # covariant derivative D_t J
    connection: FloatConnection = field(repr=False)

    @property
    def final(self):
        return np.stack([self.v[-1], self.J[-1], self.P[-1]])


def rk4_step(fc, state, h):
    k1 = fc.rhs(state)
    k2 = fc.rhs(state + 0.5 * h * k1)
    k3 = fc.rhs(state + 0.5 * h * k2)
    k4 = fc.rhs(state + h * k3)
    return state + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)


def integrate(conn, v0, J0, Jdot0, T, h):
    """Classical RK4 from t = 0 to t = T (rounded to a whole number of steps)."""
    if not (h > 0 and math.isfinite(h)):
        raise GeodesicError("step must be positive and finite, got %r" % (h,))
    if not (math.isfinite(T) and T >= h):
        raise GeodesicError("duration must be finite and at least one step, got %r" % (T,))
    fc = as_float_connection(conn)
    steps = int(round(T / h))
    parts = [np.asarray(x, dtype=float) for x in (v0, J0, Jdot0)]
    if any(p.shape != (fc.A.shape[0],) for p in parts):
        raise GeodesicError("initial data must be three vectors of length %d" % fc.A.shape[0])
    state = np.stack(parts)
    if not np.all(np.isfinite(state)):
        raise GeodesicError("initial data must be finite")
    out = np.empty((steps + 1, 3, state.shape[1]))
    out[0] = state
    # overflow is detected below and reported as BlowUp
    with np.errstate(over="ignore", invalid="ignore"):
        for s in range(steps):
            state = rk4_step(fc, state, h)
            if not np.all(np.isfinite(state)):
                raise BlowUp((s + 1) * h)
            out[s + 1] = state
    return Trajectory(h, np.arange(steps + 1) * h, out[:, 0], out[:, 1], out[:, 2], fc)


def richardson(conn, v0, J0, Jdot0, T, h):
    """Fourth-order Richardson combination (16 y_{h/2} - y_h) / 15 at time T."""
    coarse = integrate(conn, v0, J0, Jdot0, T, h).final
    fine = integrate(conn, v0, J0, Jdot0, T, h / 2).final
    return (16 * fine - coarse) / 15


def convergence_order(conn, v0, J0, Jdot0, T=2.0, h=0.1):
    """Observed order log2(|y_h - y_{h/2}| / |y_{h/2} - y_{h/4}|)."""
    y = [integrate(conn, v0, J0, Jdot0, T, h / 2**m).final for m in range(3)]
    e1 = np.max(np.abs(y[0] - y[1]))
    e2 = np.max(np.abs(y[1] - y[2]))
    if e2 == 0:
        return math.inf
    return math.log2(e1 / e2)


# -- convexity -----------------------------------------------------------------


def symplectic_pairings(traj):
    """g = Omega(J, v), gdot = Omega(P, v) and the curvature term Omega(R(v, J)v, v)."""
    fc = traj.connection
    W = fc.omega
    g = np.einsum("ti,ij,tj->t", traj.J, W, traj.v)
    gdot = np.einsum("ti,ij,tj->t", traj.P, W, traj.v)
    rv = np.einsum("ti,tj,tp,ijpk->tk", traj.v, traj.J, traj.v, fc.R)
    curv = np.einsum("ti,ij,tj->t", rv, W, traj.v)
    return g, gdot, curv


def count_sign_changes(values, tol):
    signs = [np.sign(x) for x in values if abs(x) > tol]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


@dataclass
class ConvexityReport:
    derivative_residual: float  # check (a), absolute
    second_derivative_residual: float  # check (b), relative to max(1, sup|f''|)
    identically_zero: bool
    zero_count: int
    f_max: float
    npc_sampled: object = None  # None when no census was supplied
    convex: object = None
    lemma_holds: object = None
    notes: list = field(default_factory=list)

    def as_dict(self):
        return {
            "derivative_residual": self.derivative_residual,
            "second_derivative_residual": self.second_derivative_residual,
            "identically_zero": self.identically_zero,
            "zero_count": self.zero_count,
            "f_max": self.f_max,
            "npc_sampled": self.npc_sampled,
            "convex": self.convex,
            "lemma_holds": self.lemma_holds,
            "notes": list(self.notes),
        }


def second_difference(f, h, stencil=5, stride=1):
    """Central second differences of samples ``f`` with step ``stride * h``.

    Returns the differences and the number of samples lost at each end.
    """
    m = stride
    H = m * h
    if stencil == 3:
        return (f[: -2 * m] - 2 * f[m:-m] + f[2 * m :]) / H**2, m
    if stencil == 5:
        d = -f[: -4 * m] + 16 * f[m : -3 * m] - 30 * f[2 * m : -2 * m] + 16 * f[3 * m : -m] - f[4 * m :]
        return d / (12 * H**2), 2 * m
    raise GeodesicError("stencil must be 3 or 5, got %r" % (stencil,))


def convexity_check(traj, census=None, zero_tol=1e-9, stencil=5, stride=5):
    """Finite-difference checks of f = Omega(J, v)^2 / 2 along a trajectory.

    (a) compares a five-point derivative of Omega(J, v) with Omega(P, v);
    (b) compares a central second difference of f with
    Omega(P, v)^2 + Omega(J, v) Omega(R(v, J)v, v).  The default five-point
    stencil is fourth order; ``stencil=3`` gives the second-order one.  The
    difference step is ``stride`` samples: roundoff in f grows like 1/step^2,
    so a step of a few h keeps it below the truncation error.
    With a ``census`` (from ``npc_sample``) reporting nonpositive samples, f
    is also tested for convexity and Omega(J, v) for at most one zero.
    """
    h = traj.h
    g, gdot, curv = symplectic_pairings(traj)
    need = max(5, (stencil - 1) * stride + 1)
    if len(g) < need:
        raise GeodesicError("need at least %d samples for the finite differences" % need)
    fd1 = (g[:-4] - 8 * g[1:-3] + 8 * g[3:-1] - g[4:]) / (12 * h)
    res_a = float(np.max(np.abs(fd1 - gdot[2:-2])))
    f = 0.5 * g**2
    fd2, pad = second_difference(f, h, stencil, stride)
    f2 = gdot**2 + g * curv
    scale = max(1.0, float(np.max(np.abs(f2))))
    res_b = float(np.max(np.abs(fd2 - f2[pad:-pad]))) / scale
    ident = bool(np.max(np.abs(g)) <= zero_tol)
    zeros = 0 if ident else count_sign_changes(g, zero_tol)
    report = ConvexityReport(res_a, res_b, ident, zeros, float(np.max(f)))
    if census is not None:
        report.npc_sampled = bool(census.nonpositive)
        if census.nonpositive:
            report.convex = bool(np.min(f2) >= -1e-9 * scale)
            report.lemma_holds = bool(report.convex and (ident or zeros <= 1))
            report.notes.append("nonpositivity is sampled, not certified")
        else:
            report.notes.append("sampled curvature takes positive values; zero bound not asserted")
    return report
