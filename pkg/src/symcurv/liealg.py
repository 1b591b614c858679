"""Symplectic Lie algebras and their left-invariant connections.

Structure constants are stored as a ``ddu`` tensor ``c[i, j, k]`` with
``[e_i, e_j] = c[i, j, k] e_k``.  A left-invariant connection is a ``ddu``
tensor ``A[i, j, k]`` giving ``nabla_{e_i} e_j = A[i, j, k] e_k``.
Endomorphisms are ``du`` tensors ``E[i, j]`` with ``E(e_i) = E[i, j] e_j``.
"""

from dataclasses import dataclass, field
import itertools

import numpy as np

from . import rational as rq
from .rational import ONE, ZERO, Q, qarray, qzeros
from .symplin import SymplecticForm, as_vec, make_symplectic_form, standard_form
from .tensor import Tensor, einsum, sym_part


class LieAlgebraError(ValueError):
    """A structure axiom fails; ``witness`` holds the offending basis indices."""

    def __init__(self, message, axiom=None, witness=None):
        super().__init__(message)
        self.axiom = axiom
        self.witness = witness


@dataclass(frozen=True, eq=False)
class SymplecticLieAlgebra:
    structure: Tensor
    omega: SymplecticForm
    name: str = ""

    @property
    def dim(self):
        return self.structure.dim

    def bracket(self, x, y):
        x, y = as_vec(x), as_vec(y)
        return rq.normalize(np.einsum("i,j,ijk->k", x, y, self.structure.data))

    def ad(self, x):
        """ad(x) as a ``du`` endomorphism: ad(x)[j, k] = x^i c[i, j, k]."""
        x = as_vec(x)
        return Tensor(np.einsum("i,ijk->jk", x, self.structure.data), "du")

    def trace_ad(self, x):
        x = as_vec(x)
        return Q(np.einsum("i,ijj->", x, self.structure.data))


def from_brackets(dim, entries, omega, name=""):
    """Build an algebra from ``(i, j, k, value)`` entries meaning c_{ij}^k.

    Missing antisymmetric partners ``c_{ji}^k`` are filled in; explicit
    partners are kept as given so that :func:`validate` can flag them.
    """
    c = qzeros((dim, dim, dim))
    given = set()
    for i, j, k, v in entries:
        for idx in (i, j, k):
            if not 0 <= idx < dim:
                raise LieAlgebraError("bracket index %d out of range" % idx, "index", (i, j, k))
        c[i, j, k] = Q(v)
        given.add((i, j, k))
    for i, j, k in list(given):
        if (j, i, k) not in given:
            c[j, i, k] = -c[i, j, k]
    return SymplecticLieAlgebra(Tensor(c, "ddu"), make_symplectic_form(omega), name)


def _omega_mirror4():
    return standard_form(2, "mirror")


def builtin(name):
    """The two worked four-dimensional examples, or an abelian algebra.

    ``aff1c``: affine transformations of the complex line, basis
    (1,0), (i,0), (0,1), (0,i).  ``r40``: the solvable algebra with
    [e4, e1] = e1, [e4, e3] = e2.  Both carry Omega = e^1^e^4 + e^2^e^3.
    ``abelianN`` gives the abelian algebra of even dimension N with the
    block Darboux form.
    """
    if name == "aff1c":
        entries = [(0, 2, 2, 1), (0, 3, 3, 1), (1, 2, 3, 1), (1, 3, 2, -1)]
        return from_brackets(4, entries, _omega_mirror4().matrix, "aff1c")
    if name == "r40":
        entries = [(3, 0, 0, 1), (3, 2, 1, 1)]
        return from_brackets(4, entries, _omega_mirror4().matrix, "r40")
    if name.startswith("abelian"):
        try:
            dim = int(name[len("abelian"):] or 4)
        except ValueError:
            dim = -1
        if dim > 0 and dim % 2 == 0:
            return abelian(dim)
    raise KeyError("unknown builtin algebra %r" % name)


BUILTIN_NAMES = ("aff1c", "r40")


def abelian(dim):
    return SymplecticLieAlgebra(
        Tensor.zeros(dim, "ddu"), standard_form(dim // 2), "abelian%d" % dim
    )


# -- validation -------------------------------------------------------------


@dataclass
class ValidationReport:
    antisymmetric: bool = True
    jacobi: bool = True
    cocycle: bool = True
    nondegenerate: bool = True
    exact: bool = False
    exact_primitive: object = None
    solvable: bool = False
    nilpotent: bool = False
    failures: list = field(default_factory=list)  # (axiom, witness, message)

    @property
    def valid(self):
        return not self.failures

    def raise_for_errors(self):
        if self.failures:
            axiom, witness, message = self.failures[0]
            raise LieAlgebraError(message, axiom, witness)


def _span_basis(vectors, dim):
    if not vectors:
        return []
    R, piv = rq.rref(np.stack(vectors))
    return [R[r] for r in range(len(piv))]


def derived_series_dims(alg):
    dims = []
    basis = [rq.qeye(alg.dim)[i] for i in range(alg.dim)]
    for _ in range(alg.dim + 1):
        dims.append(len(basis))
        if not basis:
            break
        brackets = [alg.bracket(a, b) for a, b in itertools.combinations(basis, 2)]
        new = _span_basis([b for b in brackets if np.any(b != 0)], alg.dim)
        if len(new) == len(basis):
            break
        basis = new
    return dims


def lower_central_dims(alg):
    dims = []
    full = [rq.qeye(alg.dim)[i] for i in range(alg.dim)]
    basis = full
    for _ in range(alg.dim + 1):
        dims.append(len(basis))
        if not basis:
            break
        brackets = [alg.bracket(a, b) for a in full for b in basis]
        new = _span_basis([b for b in brackets if np.any(b != 0)], alg.dim)
        if len(new) == len(basis):
            break
        basis = new
    return dims


def is_solvable(alg):
    return derived_series_dims(alg)[-1] == 0


def is_nilpotent(alg):
    return lower_central_dims(alg)[-1] == 0


def exact_primitive(alg):
    """A one-form alpha with Omega = d alpha, where d alpha(x, y) = -alpha([x, y]).

    Returns ``None`` when Omega is not exact.
    """
    dim = alg.dim
    rows, rhs = [], []
    c, w = alg.structure.data, alg.omega.matrix.data
    for i, j in itertools.combinations(range(dim), 2):
        rows.append([-c[i, j, k] for k in range(dim)])
        rhs.append(w[i, j])
    sol = rq.solve(qarray(rows), qarray(rhs))
    return None if sol is None else Tensor(sol, "d")


def validate(alg):
    """Check bracket antisymmetry, Jacobi, the closedness cocycle and nondegeneracy."""
    rep = ValidationReport()
    c = alg.structure.data
    dim = alg.dim
    for i, j, k in itertools.product(range(dim), repeat=3):
        if c[i, j, k] != -c[j, i, k]:
            rep.antisymmetric = False
            rep.failures.append(
                ("antisymmetry", (i, j, k), "c[%d,%d,%d] != -c[%d,%d,%d]" % (i, j, k, j, i, k))
            )
            break
        if not rep.antisymmetric:
            break
    # Jacobi: [e_i,[e_j,e_k]] + cyclic = 0
    jac = (
        np.einsum("jkm,iml->ijkl", c, c)
        + np.einsum("kim,jml->ijkl", c, c)
        + np.einsum("ijm,kml->ijkl", c, c)
    )
    bad = [idx for idx, v in np.ndenumerate(jac) if v != 0]
    if bad:
        i, j, k, _ = bad[0]
        rep.jacobi = False
        rep.failures.append(
            ("jacobi", (i, j, k), "Jacobi identity fails on basis triple (%d, %d, %d)" % (i, j, k))
        )
    w = alg.omega.matrix.data
    # Omega([x,y],z) + Omega([y,z],x) + Omega([z,x],y) = 0
    cyc = (
        np.einsum("ijm,mk->ijk", c, w)
        + np.einsum("jkm,mi->ijk", c, w)
        + np.einsum("kim,mj->ijk", c, w)
    )
    bad = [idx for idx, v in np.ndenumerate(cyc) if v != 0]
    if bad:
        rep.cocycle = False
        rep.failures.append(
            ("cocycle", bad[0], "Omega is not closed on basis triple (%d, %d, %d)" % bad[0])
        )
    if rq.det(w) == 0:
        rep.nondegenerate = False
        rep.failures.append(("nondegenerate", (), "Omega is degenerate"))
    if rep.antisymmetric and rep.jacobi:
        alpha = exact_primitive(alg)
        rep.exact = alpha is not None
        rep.exact_primitive = alpha
        rep.solvable = is_solvable(alg)
        rep.nilpotent = is_nilpotent(alg)
    return rep


def killing_form(alg):
    c = alg.structure.data
    return Tensor(np.einsum("imn,jnm->ij", c, c), "dd")


# -- connections ------------------------------------------------------------


class ConnectionError_(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class LeftInvariantConnection:
    algebra: SymplecticLieAlgebra
    coefficients: Tensor  # A[i, j, k]

    @property
    def omega(self):
        return self.algebra.omega

    @property
    def dim(self):
        return self.algebra.dim

    def apply(self, x, y):
        """Components of A(x)y = nabla_{l^x} l^y."""
        x, y = as_vec(x), as_vec(y)
        return rq.normalize(np.einsum("i,j,ijk->k", x, y, self.coefficients.data))

    def endo(self, x):
        """A(x) as a ``du`` endomorphism."""
        x = as_vec(x)
        return Tensor(np.einsum("i,ijk->jk", x, self.coefficients.data), "du")

    def torsion(self):
        """T[i,j,k] = A[i,j,k] - A[j,i,k] - c[i,j,k]."""
        A = self.coefficients.data
        return Tensor(A - A.transpose(1, 0, 2) - self.algebra.structure.data, "ddu")

    def omega_derivative(self):
        """(nabla_i Omega)_{jk} = -Omega(A(e_i)e_j, e_k) - Omega(e_j, A(e_i)e_k)."""
        return covariant_derivative(self, self.omega.matrix)

    def is_torsion_free(self):
        return self.torsion().is_zero()

    def is_symplectic(self):
        return self.omega_derivative().is_zero()

    def covariant_derivative(self, t):
        return covariant_derivative(self, t)

    def curvature(self):
        return curvature(self)


def symplectic_adjoint_tensor(alg):
    """S[i, j, k] = components of ad(e_i)^* e_j.

    ad(x)^* is fixed by Omega(ad(x)^* y, z) = -Omega(y, ad(x) z).
    """
    w = alg.omega.matrix.data
    winv = rq.inverse(w)
    c = alg.structure.data
    # ad(e_i) as du matrix M_i[j, k] = c[i, j, k]; N_i = -W M_i^T W^{-1}
    out = qzeros((alg.dim,) * 3)
    for i in range(alg.dim):
        out[i] = -rq.matmul(rq.matmul(w, c[i].T), winv)
    return Tensor(out, "ddu")


def symplectic_adjoint(alg, x):
    x = as_vec(x)
    return Tensor(np.einsum("i,ijk->jk", x, symplectic_adjoint_tensor(alg).data), "du")


def canonical_connection(alg):
    """Left-invariant connection with A(a) = (ad(a) + ad(a)^*) / 3."""
    S = symplectic_adjoint_tensor(alg)
    return LeftInvariantConnection(alg, (alg.structure + S) / 3)


def symmetrize_connection(alg, abar):
    """Turn a torsion-free left-invariant connection into a symplectic one.

    Adds (2/3) Omega^{kp} nablabar_{(i} Omega_{j)p} to the coefficients.
    """
    if isinstance(abar, LeftInvariantConnection):
        abar = abar.coefficients
    base = LeftInvariantConnection(alg, abar)
    if not base.is_torsion_free():
        raise ConnectionError_("input connection has torsion")
    dw = base.omega_derivative()  # (i, j, p)
    s = sym_part(dw, [0, 1])
    diff = einsum("kp,ijp->ijk", alg.omega.inverse, s) * rq.mpq(2, 3)
    return LeftInvariantConnection(alg, abar + diff)


def half_bracket_connection(alg):
    return LeftInvariantConnection(alg, alg.structure / 2)


def random_symmetric_cubic(dim, rng, bound=3, max_den=4):
    t = qzeros((dim, dim, dim))
    for i, j, k in itertools.combinations_with_replacement(range(dim), 3):
        v = rq.random_rational(rng, bound, max_den)
        for p in set(itertools.permutations((i, j, k))):
            t[p] = v
    return Tensor(t, "ddd")


def random_symplectic_connection(alg, seed, scale=1):
    """Canonical connection plus a seeded totally symmetric difference tensor."""
    rng = rq.make_rng("conn:%s" % seed)
    cubic = random_symmetric_cubic(alg.dim, rng) * scale
    diff = einsum("kp,ijp->ijk", alg.omega.inverse, cubic)
    return LeftInvariantConnection(alg, canonical_connection(alg).coefficients + diff)


def difference_lowered(conn, other):
    """Pi_{ijk} = (A - A')_{ij}^p Omega_{pk}."""
    d = conn.coefficients - other.coefficients
    return einsum("ijp,pk->ijk", d, conn.omega.matrix)


# -- left-invariant calculus ----------------------------------------------


def covariant_derivative(conn, t):
    """nabla T for a left-invariant tensor T, new derivative slot first.

    Components of left-invariant tensors are constant in the left-invariant
    frame, so only the connection coefficients contribute.
    """
    A = conn.coefficients.data
    dim = conn.dim
    if t.rank == 0:
        return Tensor(qzeros((dim,)), "d")
    total = None
    for s, kind in enumerate(t.variance):
        if kind == "d":
            # -A[i, j_s, p] T[.., p, ..]
            term = -np.tensordot(A, t.data, axes=([2], [s]))
        else:
            # +A[i, p, k_s] T[.., p, ..]
            term = np.tensordot(A, t.data, axes=([1], [s]))
        term = np.moveaxis(term, 1, s + 1)
        total = term if total is None else total + term
    return Tensor(total, "d" + t.variance)


def curvature(conn):
    """R[i, j, p, k] = (R(e_i, e_j) e_p)^k with R(x, y) = [A(x), A(y)] - A([x, y])."""
    A = conn.coefficients.data
    c = conn.algebra.structure.data
    r = (
        np.einsum("jpq,iqk->ijpk", A, A)
        - np.einsum("ipq,jqk->ijpk", A, A)
        - np.einsum("ijm,mpk->ijpk", c, A)
    )
    return Tensor(r, "dddu")


def curvature_from_second_derivatives(conn):
    """Independent curvature: 2 nabla_[i nabla_j] X^k = R_{ijp}^k X^p on basis fields."""
    dim = conn.dim
    out = qzeros((dim,) * 4)
    for p in range(dim):
        x = qzeros(dim)
        x[p] = ONE
        X = Tensor(x, "u")
        ddx = covariant_derivative(conn, covariant_derivative(conn, X))
        out[:, :, p, :] = (ddx.data - ddx.data.transpose(1, 0, 2))
    return Tensor(out, "dddu")


# -- distinguished elements ---------------------------------------------------


@dataclass(frozen=True, eq=False)
class SpecialElements:
    ell: np.ndarray
    unimodular: bool
    nilpotent: bool
    solvable: bool
    self_adjoint: bool


def trace_form(alg):
    """The one-form x -> tr ad(x)."""
    return Tensor(np.einsum("ijj->i", alg.structure.data), "d")


def special_elements(alg):
    t = trace_form(alg).data
    w = alg.omega.matrix.data
    # Omega(ell, e_b) = ell^a W[a, b] = t_b
    ell = rq.solve(w.T, t)
    S = symplectic_adjoint_tensor(alg).data
    adl = np.einsum("i,ijk->jk", ell, alg.structure.data)
    adl_star = np.einsum("i,ijk->jk", ell, S)
    return SpecialElements(
        ell=ell,
        unimodular=bool(np.all(ell == 0)),
        nilpotent=is_nilpotent(alg),
        solvable=is_solvable(alg),
        self_adjoint=bool(np.all(adl == adl_star)),
    )


def is_self_adjoint(alg, z):
    z = as_vec(z)
    S = symplectic_adjoint_tensor(alg).data
    return bool(
        np.all(np.einsum("i,ijk->jk", z, alg.structure.data) == np.einsum("i,ijk->jk", z, S))
    )


def solvable_ricci_oracle(alg):
    """Ricci of the canonical connection from 9 ric(x, y) = tr ad(ad(x)^* y) - B(x, y)."""
    if not is_solvable(alg):
        raise LieAlgebraError("closed Ricci formula needs a solvable algebra", "solvable")
    S = symplectic_adjoint_tensor(alg).data
    tr = trace_form(alg).data
    first = np.einsum("ijk,k->ij", S, tr)
    return (Tensor(first, "dd") - killing_form(alg)) / 9


# -- random algebras ----------------------------------------------------------


def direct_sum(*algs, name=None):
    dim = sum(a.dim for a in algs)
    c = qzeros((dim,) * 3)
    w = qzeros((dim, dim))
    off = 0
    for a in algs:
        d = a.dim
        c[off:off + d, off:off + d, off:off + d] = a.structure.data
        w[off:off + d, off:off + d] = a.omega.matrix.data
        off += d
    return SymplecticLieAlgebra(
        Tensor(c, "ddu"),
        make_symplectic_form(w),
        name or "+".join(a.name for a in algs),
    )


def change_basis(alg, P, name=None):
    """Re-express ``alg`` in the basis f_a = P[i, a] e_i."""
    P = qarray(P)
    Pinv = rq.inverse(P)
    c = np.einsum("ia,jb,ijk,ck->abc", P, P, alg.structure.data, Pinv)
    w = np.einsum("ia,jb,ij->ab", P, P, alg.omega.matrix.data)
    return SymplecticLieAlgebra(
        Tensor(c, "ddu"), make_symplectic_form(w), name or alg.name + "'"
    )


def r2():
    """Two-dimensional non-abelian algebra [e1, e2] = e2 with Omega = e^1^e^2."""
    return from_brackets(2, [(0, 1, 1, 1)], standard_form(1).matrix, "r2")


def n4():
    """Four-dimensional filiform nilpotent algebra [e1,e2]=e3, [e1,e3]=e4."""
    return from_brackets(
        4, [(0, 1, 2, 1), (0, 2, 3, 1)], _omega_mirror4().matrix, "n4"
    )


def heisenberg_plus_line():
    """h3 + R: [e1, e2] = e3 with the closed form Omega = e^1^e^3 + e^2^e^4."""
    w = qzeros((4, 4))
    w[0, 2], w[2, 0] = ONE, -ONE
    w[1, 3], w[3, 1] = ONE, -ONE
    return from_brackets(4, [(0, 1, 2, 1)], w, "h3+R")


def base_algebras(dim):
    if dim == 2:
        return [abelian(2), r2()]
    if dim == 4:
        return [
            abelian(4),
            builtin("aff1c"),
            builtin("r40"),
            direct_sum(r2(), r2()),
            direct_sum(r2(), abelian(2)),
            n4(),
            heisenberg_plus_line(),
        ]
    if dim % 2 == 0 and dim >= 6:
        out = []
        for small in base_algebras(dim - 4):
            for big in base_algebras(4):
                out.append(direct_sum(big, small))
        if dim == 6:
            out.append(direct_sum(r2(), r2(), r2()))
        return out
    raise ValueError("dimension must be even and positive, got %d" % dim)


def random_invertible(rng, dim, bound=2):
    while True:
        P = qarray([[rng.randint(-bound, bound) for _ in range(dim)] for _ in range(dim)])
        if rq.det(P) != 0:
            return P


def random_symplectic_lie_algebra(dim, seed):
    """Seeded symplectic Lie algebra: a base algebra in a random rational basis."""
    rng = rq.make_rng("alg:%d:%s" % (dim, seed))
    pool = base_algebras(dim)
    base = pool[rng.randrange(len(pool))]
    P = random_invertible(rng, dim)
    return change_basis(base, P, name="%s@%s" % (base.name, seed))


def flat_connection(dim):
    alg = abelian(dim)
    return LeftInvariantConnection(alg, Tensor.zeros(dim, "ddu"))
