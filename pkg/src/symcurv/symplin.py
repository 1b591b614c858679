"""Symplectic linear algebra on Q^{2n}: forms, planes, projections, Darboux bases."""

from dataclasses import dataclass

import numpy as np

from . import rational as rq
from .rational import ONE, ZERO, Q, qarray
from .tensor import Tensor, TensorError


class SymplecticError(ValueError):
    """Raised for degenerate or non-antisymmetric forms and bad planes."""


def as_vec(x):
    if isinstance(x, Tensor):
        if x.variance != "u":
            raise TensorError("expected a vector (variance 'u'), got %r" % x.variance)
        return x.data
    return qarray(x)


@dataclass(frozen=True, eq=False)
class SymplecticForm:
    matrix: Tensor  # Omega_{ij}, variance "dd"
    inverse: Tensor  # Omega^{ij}, variance "uu"

    @property
    def dim(self):
        return self.matrix.dim

    @property
    def n(self):
        return self.dim // 2

    def pair(self, x, y):
        """Omega(x, y) = x^i y^j Omega_{ij}."""
        x, y = as_vec(x), as_vec(y)
        return Q(x.dot(self.matrix.data).dot(y))

    def lower(self, x):
        """x_i = x^p Omega_{pi}."""
        return Tensor(as_vec(x).dot(self.matrix.data), "d")

    def raise_(self, alpha):
        """alpha^i = Omega^{ip} alpha_p."""
        a = alpha.data if isinstance(alpha, Tensor) else qarray(alpha)
        return Tensor(self.inverse.data.dot(a), "u")

    def __eq__(self, other):
        return isinstance(other, SymplecticForm) and self.matrix == other.matrix

    __hash__ = None


def make_symplectic_form(matrix):
    """Validate an antisymmetric nondegenerate matrix and cache its inverse bivector."""
    if isinstance(matrix, SymplecticForm):
        return matrix
    if isinstance(matrix, Tensor):
        if matrix.variance != "dd":
            raise SymplecticError("a symplectic form has variance 'dd', got %r" % matrix.variance)
        data = matrix.data
    else:
        data = qarray(matrix)
    if data.ndim != 2 or data.shape[0] != data.shape[1]:
        raise SymplecticError("symplectic form must be a square matrix")
    dim = data.shape[0]
    if dim % 2:
        raise SymplecticError("symplectic form needs even dimension, got %d" % dim)
    if not np.all(data == -data.T):
        raise SymplecticError("matrix is not antisymmetric")
    try:
        inv = rq.inverse(data)
    except ZeroDivisionError:
        raise SymplecticError("matrix is singular") from None
    # Omega^{ip} Omega_{pj} = -delta_j^i  =>  Omega^{..} = -(Omega_{..})^{-1}
    return SymplecticForm(Tensor(data, "dd"), Tensor(-inv, "uu"))


def as_symplectic_form(omega):
    if isinstance(omega, SymplecticForm):
        return omega
    return make_symplectic_form(omega)


def standard_form(n, layout="block"):
    """Standard Darboux form on Q^{2n}.

    ``layout="block"``: Omega = [[0, I], [-I, 0]] (pairs (a, a+n)).
    ``layout="interleaved"``: Omega = sum_a e^{2a} ^ e^{2a+1}.
    ``layout="mirror"``: Omega = sum_a e^{a} ^ e^{2n-1-a}, e.g.
    e^1^e^4 + e^2^e^3 in dimension 4.
    """
    dim = 2 * n
    m = rq.qzeros((dim, dim))
    for a in range(n):
        if layout == "block":
            i, j = a, a + n
        elif layout == "interleaved":
            i, j = 2 * a, 2 * a + 1
        elif layout == "mirror":
            i, j = a, dim - 1 - a
        else:
            raise ValueError("unknown layout %r" % layout)
        m[i, j] = ONE
        m[j, i] = -ONE
    return make_symplectic_form(m)


PLANE_KINDS = ("symplectic", "isotropic", "dependent")


@dataclass(frozen=True, eq=False)
class Plane:
    x: np.ndarray
    y: np.ndarray
    kind: str
    pairing: object  # Omega(x, y)


def plane_kind(omega, x, y):
    omega = as_symplectic_form(omega)
    x, y = as_vec(x), as_vec(y)
    if x.shape != (omega.dim,) or y.shape != (omega.dim,):
        raise SymplecticError(
            "vectors must have dimension %d, got %s and %s" % (omega.dim, x.shape, y.shape)
        )
    w = omega.pair(x, y)
    if w != 0:
        kind = "symplectic"
    elif rq.rank(np.stack([x, y])) < 2:
        kind = "dependent"
    else:
        kind = "isotropic"
    return Plane(x, y, kind, w)


def project_plane(omega, x, y, z):
    """Projection of ``z`` onto span{x, y} along its symplectic complement."""
    omega = as_symplectic_form(omega)
    plane = plane_kind(omega, x, y)
    if plane.kind != "symplectic":
        raise SymplecticError("projection needs a symplectic plane, got %s" % plane.kind)
    z = as_vec(z)
    w = plane.pairing
    return (omega.pair(z, plane.y) * plane.x - omega.pair(z, plane.x) * plane.y) / w


FORM_CLASSES = (
    "zero",
    "definite_positive",
    "definite_negative",
    "degenerate_positive",
    "degenerate_negative",
    "indefinite",
)


def classify_quadratic(q):
    """SL(2)-orbit tag of a symmetric 2x2 rational matrix.

    Degenerate nonzero forms are split by the sign of their one nonzero
    eigenvalue, which equals the trace.
    """
    q = qarray(q)
    if q.shape != (2, 2) or q[0, 1] != q[1, 0]:
        raise SymplecticError("expected a symmetric 2x2 matrix")
    a, b, c = q[0, 0], q[0, 1], q[1, 1]
    d = a * c - b * b
    if a == 0 and b == 0 and c == 0:
        return "zero"
    if d < 0:
        return "indefinite"
    tr = a + c
    if d == 0:
        return "degenerate_positive" if tr > 0 else "degenerate_negative"
    return "definite_positive" if tr > 0 else "definite_negative"


def symplectic_basis_of_span(omega, vectors):
    """Darboux basis of a symplectic span by exact symplectic Gram-Schmidt.

    Returns ``[X1, ..., Xm, U1, ..., Um]`` with Omega(U_a, X_b) = delta_ab and
    Omega(X_a, X_b) = Omega(U_a, U_b) = 0.  For m = 2 this is the quadruple
    ``X, Y, U, V`` with Omega(U, X) = Omega(V, Y) = 1 and all other pairings 0.
    """
    omega = as_symplectic_form(omega)
    pool = [as_vec(v) for v in vectors]
    xs, us = [], []
    while True:
        pool = [v for v in pool if np.any(v != 0)]
        if not pool:
            break
        x = pool.pop(0)
        partner = next((k for k, v in enumerate(pool) if omega.pair(v, x) != 0), None)
        if partner is None:
            raise SymplecticError("span is not symplectic (degenerate direction found)")
        u = pool.pop(partner)
        u = u / omega.pair(u, x)
        projected = []
        for v in pool:
            b = omega.pair(v, x)
            a = -omega.pair(v, u)
            projected.append(v - a * x - b * u)
        pool = projected
        xs.append(x)
        us.append(u)
    return xs + us


def random_symplectic_plane(omega, rng, bound=3, max_den=4):
    """Seeded pair (x, y) with Omega(x, y) != 0."""
    omega = as_symplectic_form(omega)
    while True:
        x = rq.random_vector(rng, omega.dim, bound, max_den)
        y = rq.random_vector(rng, omega.dim, bound, max_den)
        if omega.pair(x, y) != 0:
            return x, y


def random_isotropic_pair(omega, rng, bound=3, max_den=4):
    """Seeded independent pair (x, y) with Omega(x, y) = 0 (needs dim >= 4)."""
    omega = as_symplectic_form(omega)
    if omega.dim < 4:
        raise SymplecticError("isotropic pairs of independent vectors need dim >= 4")
    while True:
        x = rq.random_vector(rng, omega.dim, bound, max_den)
        y = rq.random_vector(rng, omega.dim, bound, max_den)
        u = rq.random_vector(rng, omega.dim, bound, max_den)
        wxu = omega.pair(x, u)
        if wxu == 0:
            continue
        y = y - (omega.pair(x, y) / wxu) * u
        if rq.rank(np.stack([x, y])) == 2:
            return x, y


def symplectic_complement_basis(omega, vectors):
    """Basis of {z : Omega(v, z) = 0 for all v in vectors}."""
    omega = as_symplectic_form(omega)
    rows = np.stack([omega.lower(v).data for v in vectors]) if vectors else rq.qzeros((0, omega.dim))
    return rq.nullspace(rows)
