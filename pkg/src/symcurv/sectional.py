"""Symplectic sectional curvature and the statements built on it.

The symplectic curvature quadratic form of a symplectic plane L = span{X, Y}
is Z -> R(X, Y, Z, Z) / Omega(X, Y), where R(X, Y, Z, W) = Omega(R(X, Y)Z, W).
"""

from dataclasses import dataclass, field
import itertools

import numpy as np

from . import rational as rq
from .curvature import CurvatureData, compose, omega_traces
from .rational import Q
from .symplin import (
    SymplecticError,
    as_symplectic_form,
    as_vec,
    classify_quadratic,
    plane_kind,
    random_isotropic_pair,
    random_symplectic_plane,
    symplectic_complement_basis,
)
from .tensor import Tensor, einsum, evaluate, sym_part


def curvature_value(Rl, x, y, z, w):
    """R_{ijkl} x^i y^j z^k w^l = Omega(R(x, y)z, w)."""
    return Q(evaluate(Rl, as_vec(x), as_vec(y), as_vec(z), as_vec(w)))


def scurv(Rl, omega, x, y, z):
    """Value of the curvature quadratic form of span{x, y} at z."""
    omega = as_symplectic_form(omega)
    w = omega.pair(x, y)
    if w == 0:
        raise SymplecticError("span{x, y} is not a symplectic plane")
    return curvature_value(Rl, x, y, z, z) / w


@dataclass
class SectionalForm:
    form: Tensor  # S_{kl} on the whole space
    restricted: np.ndarray  # 2x2 matrix in the coordinates of the spanning pair
    kind: str  # classify_quadratic tag of ``restricted``
    pairing: object  # Omega(X, Y)

    def __call__(self, z):
        z = as_vec(z)
        return Q(z.dot(self.form.data).dot(z))


def sectional_form(Rl, omega, x, y):
    """S_{kl} = X^i Y^j R_{ijkl} / Omega(X, Y) and its restriction to span{X, Y}."""
    omega = as_symplectic_form(omega)
    plane = plane_kind(omega, x, y)
    if plane.kind != "symplectic":
        raise SymplecticError("sectional form needs a symplectic plane, got %s" % plane.kind)
    S = evaluate(Rl, plane.x, plane.y) / plane.pairing
    basis = np.stack([plane.x, plane.y])
    restricted = rq.normalize(basis.dot(S.data).dot(basis.T))
    return SectionalForm(S, restricted, classify_quadratic(restricted), plane.pairing)


# -- constant symplectic sectional curvature ----------------------------------


@dataclass
class ConstantCurvature:
    is_constant: bool
    A: Tensor  # ric / (2(n+1))
    r: object  # 2n r = R_pq R^pq
    trichotomy: str  # flat | nilpotent | complex | paracomplex | none
    endo_square_is_scalar: bool  # R_j^p R_p^i = -r delta
    nilpotent_kernel_is_annihilator: bool = None
    details: dict = field(default_factory=dict)


def _subspace_equal(a, b, dim):
    if len(a) != len(b):
        return False
    if not a:
        return True
    return rq.rank(np.stack(a + b)) == rq.rank(np.stack(a)) == len(a)


def nilpotent_structure(endo, omega):
    """Kernel/image data of a du endomorphism E with E(x)^j = x^i E_i^j."""
    omega = as_symplectic_form(omega)
    M = endo.data.T  # column convention: (E x) = M x
    kernel = rq.nullspace(M)
    R, pivots = rq.rref(M.T)
    image = [R[r] for r in range(len(pivots))]
    annihilator = symplectic_complement_basis(omega, image)
    square_zero = compose(endo, endo).is_zero()
    return {
        "square_zero": square_zero,
        "kernel": kernel,
        "image": image,
        "kernel_is_annihilator": _subspace_equal(kernel, annihilator, omega.dim),
    }


def classify_ricci_endomorphism(ric, omega):
    """Trichotomy of a Ricci tensor, independent of any constancy test.

    Returns ``(r, tag, square_ok, kernel_ok)``.  Both signs of the normalized
    endomorphism square to the same thing, so testing R o R = -r I covers
    either choice of sign.
    """
    omega = as_symplectic_form(omega)
    n = omega.n
    ric_up = einsum("pa,qb,ab->pq", omega.inverse, omega.inverse, ric)
    r = einsum("pq,pq->", ric_up, ric).item() / (2 * n)
    endo = einsum("ja,ia->ij", omega.inverse, ric)
    sq = compose(endo, endo)
    square_ok = sq == Tensor.delta(omega.dim) * (-r)
    kernel_ok = None
    if ric.is_zero():
        tag = "flat"
    elif r == 0:
        info = nilpotent_structure(endo, omega)
        kernel_ok = info["kernel_is_annihilator"]
        tag = "nilpotent" if info["square_zero"] else "none"
    elif r > 0:
        tag = "complex" if square_ok else "none"
    else:
        tag = "paracomplex" if square_ok else "none"
    return r, tag, square_ok, kernel_ok


def constant_curvature_analysis(conn, data=None):
    d = data or CurvatureData(conn)
    n = d.n
    weyl_zero = d.weyl.is_zero()
    ric_parallel = d.nabla_ric.is_zero()
    is_constant = weyl_zero and ric_parallel
    A = d.ric / (2 * (n + 1))
    r, tag, square_ok, kernel_ok = classify_ricci_endomorphism(d.ric, d.omega)
    return ConstantCurvature(
        is_constant=is_constant,
        A=A,
        r=r,
        trichotomy=tag if is_constant else "none",
        endo_square_is_scalar=square_ok,
        nilpotent_kernel_is_annihilator=kernel_ok,
        details={
            "weyl_zero": weyl_zero,
            "ricci_parallel": ric_parallel,
            "endomorphism_class": tag,
        },
    )


def reconstruct_curvature(A, omega):
    """2(Omega_i(k A_l)j - Omega_j(k A_l)i + Omega_ij A_kl): the curvature fixed by A."""
    omega = as_symplectic_form(omega)
    w = omega.matrix
    t1 = sym_part(einsum("ik,lj->ijkl", w, A), [2, 3])
    t2 = sym_part(einsum("jk,li->ijkl", w, A), [2, 3])
    t3 = einsum("ij,kl->ijkl", w, A)
    return (t1 - t2 + t3) * 2


def quadratic(A, z):
    z = as_vec(z)
    return Q(z.dot(A.data).dot(z))


@dataclass
class PlaneCheck:
    in_plane: bool  # scurv(Z) = 4A(Z, Z) for Z in L
    complement: bool  # scurv(Z) = 2A(Z, Z) for Z in the symplectic complement
    witness: tuple = ()


def sectional_constant_check(Rl, ric, omega, rng, planes=20):
    """Sample symplectic planes and compare scurv with 4A / 2A, 2(n+1)A = ric."""
    omega = as_symplectic_form(omega)
    A = ric / (2 * (omega.n + 1))
    out = []
    for _ in range(planes):
        x, y = random_symplectic_plane(omega, rng)
        a, b = rq.random_rational(rng), rq.random_rational(rng)
        z = a * x + b * y
        in_plane = scurv(Rl, omega, x, y, z) == 4 * quadratic(A, z)
        comp = symplectic_complement_basis(omega, [x, y])
        zc = sum((rq.random_rational(rng) * v for v in comp), rq.qzeros(omega.dim))
        complement = scurv(Rl, omega, x, y, zc) == 2 * quadratic(A, zc)
        out.append(PlaneCheck(in_plane, complement, () if in_plane and complement else (x, y)))
    return out


# -- isotropic sectional curvature --------------------------------------------


def isotropic_value(Rl, x, y):
    """Omega(R(x, y)y, y)."""
    return curvature_value(Rl, x, y, y, y)


@dataclass
class IsotropicScan:
    vanishes: bool
    pairs_checked: int
    witness: tuple = None
    consistent: bool = None  # agreement with the constant-curvature test


def _basis_isotropic_pairs(omega):
    dim = omega.dim
    eye = rq.qeye(dim)
    vecs = [eye[i] for i in range(dim)]
    # sums of two basis vectors catch mixed components that single pairs miss
    vecs += [eye[i] + eye[j] for i in range(dim) for j in range(i + 1, dim)]
    for x, y in itertools.permutations(vecs, 2):
        if omega.pair(x, y) == 0 and rq.rank(np.stack([x, y])) == 2:
            yield x, y


def isotropic_sectional_scan(conn, trials=200, seed=0, data=None):
    d = data or CurvatureData(conn)
    omega = d.omega
    if omega.dim < 4:
        raise SymplecticError("isotropic sectional curvature needs dimension >= 4")
    Rl = d.Rl
    rng = rq.make_rng("isotropic:%s" % (seed,))
    checked = 0
    witness = None
    pairs = itertools.chain(
        _basis_isotropic_pairs(omega),
        (random_isotropic_pair(omega, rng) for _ in range(trials)),
    )
    for x, y in pairs:
        checked += 1
        if isotropic_value(Rl, x, y) != 0:
            witness = (x, y)
            break
    vanishes = witness is None
    return IsotropicScan(
        vanishes=vanishes,
        pairs_checked=checked,
        witness=witness,
        consistent=vanishes == d.weyl.is_zero(),
    )


# -- the witness tensor of the isotropic argument ------------------------------


def check_witness_pattern(omega, X, Y, U, V):
    omega = as_symplectic_form(omega)
    pairs = [("X", "Y", X, Y, 0), ("U", "X", U, X, 1), ("U", "Y", U, Y, 0),
             ("V", "X", V, X, 0), ("V", "Y", V, Y, 1), ("U", "V", U, V, 0)]
    bad = [(a, b) for a, b, p, q, v in pairs if omega.pair(p, q) != v]
    if bad:
        raise SymplecticError("pairing pattern violated for %s" % bad)


def weyl_witness_tensor(omega, X, Y, U, V):
    """A_{ijkl} = X_i Y_j Y_k Y_l - Y_i X_j X_k X_l with lowered X_i = X^p Omega_pi.

    The quadruple must satisfy Omega(X, Y) = 0, Omega(U, X) = Omega(V, Y) = 1
    and all other pairings zero, which is what
    :func:`~symcurv.symplin.symplectic_basis_of_span` returns for m = 2.
    Then A(U, V, V, V) = 1.
    """
    omega = as_symplectic_form(omega)
    check_witness_pattern(omega, X, Y, U, V)
    x = omega.lower(X).data
    y = omega.lower(Y).data
    outer = np.multiply.outer
    data = outer(outer(outer(x, y), y), y) - outer(outer(outer(y, x), x), x)
    return Tensor(data, "dddd")


def witness_membership(A, omega):
    """Membership tests for {A = A_i(jkl), A_(ij)kl = 0, A_p^p_kl = 0}."""
    omega = as_symplectic_form(omega)
    trace = einsum("pa,pakl->kl", omega.inverse, A)
    return {
        "symmetric_last_three": sym_part(A, [1, 2, 3]) == A,
        "first_pair_symmetric_part_zero": sym_part(A, [0, 1]).is_zero(),
        "trace_free": trace.is_zero(),
    }


def corrected_witness(A):
    """A minus its complete symmetrization: lies in the Weyl-type module

    {A = A_i(jkl), A_(ijkl) = 0, trace-free}, which is where W_i(jkl) lives.
    """
    return A - sym_part(A, [0, 1, 2, 3])


def corrected_membership(A, omega):
    omega = as_symplectic_form(omega)
    return {
        "symmetric_last_three": sym_part(A, [1, 2, 3]) == A,
        "total_symmetric_part_zero": sym_part(A, [0, 1, 2, 3]).is_zero(),
        "all_traces_zero": all(t.is_zero() for t in omega_traces(A, omega).values()),
    }


# -- left-invariant check of the curvature formula via exterior derivatives ----


@dataclass
class SectcharReport:
    lhs: object
    rhs: object
    holds: bool
    self_adjoint: bool
    self_adjoint_checks: dict = field(default_factory=dict)


def sectchar_verify(conn, z, x, y, data=None):
    """Compare scurv_L(z) Omega(x, y) with its exterior-derivative expression.

    For left-invariant fields, d beta(x, y) = -beta([x, y]) and
    (L_Z beta)(y) = -beta([z, y]), so the right side becomes
    -Omega(A(z)z, [x, y]) - Omega(z, [z, [x, y]]) + 2 Omega(A(x)z, A(y)z).
    When z is self-adjoint, sad(z)z = 0 and scurv(z) = 0 are checked for the
    canonical connection of the algebra, whatever ``conn`` is.
    """
    from .liealg import canonical_connection, is_self_adjoint

    alg = conn.algebra
    omega = alg.omega
    z, x, y = as_vec(z), as_vec(x), as_vec(y)
    if omega.pair(x, y) == 0:
        raise SymplecticError("span{x, y} is not a symplectic plane")
    if rq.rank(np.stack([x, y, z])) != 2:
        raise SymplecticError("z is not in span{x, y}")
    d = data or CurvatureData(conn)
    lhs = curvature_value(d.Rl, x, y, z, z)
    xy = alg.bracket(x, y)
    rhs = (
        -omega.pair(conn.apply(z, z), xy)
        - omega.pair(z, alg.bracket(z, xy))
        + 2 * omega.pair(conn.apply(x, z), conn.apply(y, z))
    )
    sa = is_self_adjoint(alg, z)
    checks = {}
    if sa:
        canon = canonical_connection(alg)
        canon_Rl = d.Rl if canon.coefficients == conn.coefficients else CurvatureData(canon).Rl
        checks["sad_zz_zero"] = not np.any(canon.apply(z, z) != 0)
        checks["scurv_z_zero"] = scurv(canon_Rl, omega, x, y, z) == 0
    return SectcharReport(lhs, rhs, lhs == rhs, sa, checks)


# -- sign census ---------------------------------------------------------------


@dataclass
class SignCensus:
    negative: int
    zero: int
    positive: int

    @property
    def nonpositive(self):
        return self.positive == 0

    def as_dict(self):
        return {
            "negative": self.negative,
            "zero": self.zero,
            "positive": self.positive,
            "nonpositive": self.nonpositive,
        }


def npc_sample(conn, trials=100, seed=0, data=None):
    """Signs of Omega(X, Y) Omega(R(X, Y)X, X) over random rational pairs."""
    d = data or CurvatureData(conn)
    rng = rq.make_rng("npc:%s" % (seed,))
    counts = [0, 0, 0]
    for _ in range(trials):
        x = rq.random_vector(rng, d.dim)
        y = rq.random_vector(rng, d.dim)
        v = d.omega.pair(x, y) * curvature_value(d.Rl, x, y, x, x)
        counts[(v > 0) - (v < 0) + 1] += 1
    return SignCensus(*counts)
