"""Flat-space models of constant (para-)holomorphic sectional curvature 4c.

On Q^{2n} with Omega = [[0, I], [-I, 0]] the model uses

* eps = -1: g = I and J e_a = e_{a+n}, J e_{a+n} = -e_a;
* eps = +1: g = diag(-I, I) (split signature) and J swapping e_a, e_{a+n};

so that J_i^p g_pj = Omega_ij and J o J = eps I.  The curvature is
R_ijkl = 2c(Omega_i(k g_l)j - Omega_j(k g_l)i + Omega_ij g_kl).
"""

from dataclasses import dataclass

import numpy as np

from . import rational as rq
from .curvature import compose, raise_curvature
from .rational import Q
from .sectional import curvature_value, scurv
from .symplin import SymplecticError, SymplecticForm, as_vec, standard_form
from .tensor import Tensor, einsum, evaluate, sym_part


@dataclass(frozen=True, eq=False)
class KahlerModel:
    n: int
    c: object
    eps: int
    g: Tensor  # dd, symmetric
    J: Tensor  # du, J(x)^j = x^i J_i^j
    omega: SymplecticForm
    Rl: Tensor  # lowered curvature

    @property
    def dim(self):
        return 2 * self.n

    def metric(self, x, y):
        return Q(as_vec(x).dot(self.g.data).dot(as_vec(y)))

    def apply_J(self, x):
        return rq.normalize(as_vec(x).dot(self.J.data))

    def connection(self):
        return ModelConnection(self)


def cholo_curvature(omega, g, c):
    w = omega.matrix
    t1 = sym_part(einsum("ik,lj->ijkl", w, g), [2, 3])
    t2 = sym_part(einsum("jk,li->ijkl", w, g), [2, 3])
    t3 = einsum("ij,kl->ijkl", w, g)
    return (t1 - t2 + t3) * (2 * Q(c))


def make_kahler_model(n, c, eps):
    if eps not in (-1, 1):
        raise ValueError("eps must be -1 (complex) or +1 (paracomplex), got %r" % (eps,))
    if n < 1:
        raise ValueError("n must be positive")
    omega = standard_form(n, "block")
    diag = [1] * (2 * n) if eps == -1 else [-1] * n + [1] * n
    g = Tensor(np.diag(rq.qarray(diag)), "dd")
    ginv = np.diag(rq.qarray([Q(1) / v for v in diag]))
    # J_i^p g_pj = Omega_ij  =>  J = Omega g^{-1} as matrices
    J = Tensor(rq.matmul(omega.matrix.data, ginv), "du")
    model = KahlerModel(n, Q(c), eps, g, J, omega, cholo_curvature(omega, g, c))
    if compose(J, J) != Tensor.delta(2 * n) * eps:
        raise AssertionError("model structure does not square to eps")
    return model


class ModelConnection:
    """Connection data of a model: curvature at the origin, and it is parallel.

    The model's Levi-Civita connection is locally symmetric, so the
    covariant derivative of every curvature-derived tensor vanishes; that is
    all the curvature analysis asks of ``covariant_derivative``.
    """

    def __init__(self, model):
        self.model = model
        self.omega = model.omega
        self.dim = model.dim

    def curvature(self):
        return raise_curvature(self.model.Rl, self.omega)

    def covariant_derivative(self, t):
        return Tensor.zeros(self.dim, "d" + t.variance)


def holomorphic_sectional(model, x):
    """g(R(Jx, x)x, Jx) / (g(x, x) g(Jx, Jx) - g(x, Jx)^2) for a nonnull x."""
    gxx = model.metric(x, x)
    if gxx == 0:
        raise SymplecticError("holomorphic sectional curvature needs a nonnull vector")
    jx = model.apply_J(x)
    R = raise_curvature(model.Rl, model.omega)
    rvec = evaluate(R, jx, x, x).data
    num = model.metric(rvec, jx)
    den = gxx * model.metric(jx, jx) - model.metric(x, jx) ** 2
    return num / den


def holomorphic_sectional_variants(model, x):
    """The metric quotient next to its two shortened forms.

    Since g(a, Jb) = -Omega(a, b) here, the last form carries the opposite
    sign of the other two; all three are returned so callers can compare.
    """
    gxx = model.metric(x, x)
    if gxx == 0:
        raise SymplecticError("holomorphic sectional curvature needs a nonnull vector")
    jx = model.apply_J(x)
    R = raise_curvature(model.Rl, model.omega)
    rvec = evaluate(R, jx, x, x).data
    return {
        "metric_quotient": holomorphic_sectional(model, x),
        "metric_normalized": -model.eps * model.metric(rvec, jx) / gxx**2,
        "symplectic_normalized": -model.eps * curvature_value(model.Rl, jx, x, x, x) / gxx**2,
    }


def grs_check(model, x, y):
    """scurv_L(y) = g(y, y) hcurv for L = span{x, Jx} and y in L."""
    jx = model.apply_J(x)
    lhs = scurv(model.Rl, model.omega, x, jx, y)
    rhs = model.metric(y, y) * holomorphic_sectional(model, x)
    return lhs, rhs


def metric_trace_weyl(model, W):
    """g^ab W_iab^p g_pj."""
    ginv = Tensor(rq.inverse(model.g.data), "uu")
    Wm = raise_curvature(W, model.omega)
    return einsum("ab,iabp,pj->ij", ginv, Wm, model.g)
