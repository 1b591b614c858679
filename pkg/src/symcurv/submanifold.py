"""Polynomial symplectic embeddings into flat symplectic space, at the origin.

Domain Q^{2k} with coordinates x_1..x_{2k}; ambient Q^{2n} with the flat
connection and Omega = sum_a e^{2a} ^ e^{2a+1} (interleaved layout), so the
linear inclusion of the first 2k coordinates is symplectic.

Second derivatives of the embedding split as

    phi_ij^A = Gamma_ij^k phi_k^A + Pi_ij^A,   Omega(Pi_ij, phi_l) = 0,

which defines the induced connection Gamma and second fundamental form Pi.
"""

from dataclasses import dataclass, field

import numpy as np

from . import rational as rq
from .curvature import lower_curvature, raise_curvature, ricci
from .jets import JetPoly, jet_matrix_inverse, monomials
from .rational import ZERO, Q
from .symplin import (
    SymplecticError,
    as_symplectic_form,
    make_symplectic_form,
    random_symplectic_plane,
    standard_form,
    symplectic_complement_basis,
)
from .tensor import Tensor, einsum, sym_part

DEGREE = 3


class EmbeddingError(ValueError):
    pass


@dataclass
class PolyEmbedding:
    k: int  # domain dimension 2k
    n: int  # ambient dimension 2n
    components: list  # 2n JetPolys in 2k variables with zero constant term

    def __post_init__(self):
        if len(self.components) != 2 * self.n:
            raise EmbeddingError(
                "expected %d components, got %d" % (2 * self.n, len(self.components))
            )
        if self.k > self.n or self.k < 1:
            raise EmbeddingError("need 1 <= k <= n, got k=%d n=%d" % (self.k, self.n))
        for c in self.components:
            if c.nvars != 2 * self.k:
                raise EmbeddingError("component has %d variables, expected %d" % (c.nvars, 2 * self.k))
            if c.value() != 0:
                raise EmbeddingError("components must vanish at the origin")

    @property
    def omega(self):
        return standard_form(self.n, "interleaved")

    def differential(self):
        """phi_i^A as a 2k x 2n array of jets."""
        return [[c.derivative(i) for c in self.components] for i in range(2 * self.k)]

    def hessian(self):
        """phi_ij^A as a 2k x 2k x 2n nested list of jets."""
        d = self.differential()
        return [[[d[i][A].derivative(j) for A in range(2 * self.n)] for j in range(2 * self.k)] for i in range(2 * self.k)]


def embedding_from_terms(k, n, terms):
    """Build an embedding from ``{component: {exponent: value}}`` data."""
    comps = [JetPoly(2 * k, DEGREE, terms.get(A, {})) for A in range(2 * n)]
    return PolyEmbedding(k, n, comps)


def linear_inclusion(k, n):
    terms = {}
    for i in range(2 * k):
        e = [0] * (2 * k)
        e[i] = 1
        terms[i] = {tuple(e): 1}
    return embedding_from_terms(k, n, terms)


def random_embedding(k, n, seed, tangential=False, bound=2, max_den=3):
    """Linear inclusion plus seeded random quadratic and cubic terms.

    Normal components (index >= 2k) always receive random terms; with
    ``tangential`` the tangential components get them too, which makes the
    Christoffel symbols nonzero at the origin (a harder test of the splitting).  The linear part is the
    symplectic inclusion, so the map is symplectic at the origin.
    """
    rng = rq.make_rng("embedding:%s:%s:%s" % (k, n, seed))
    base = linear_inclusion(k, n)
    nonlinear = [e for e in _exponents(2 * k) if sum(e) >= 2]
    comps = []
    for A, c in enumerate(base.components):
        if A >= 2 * k or tangential:
            extra = {e: rq.random_rational(rng, bound, max_den) for e in nonlinear}
            c = c + JetPoly(2 * k, DEGREE, extra)
        comps.append(c)
    return PolyEmbedding(k, n, comps)


def _exponents(nvars):
    return monomials(nvars, DEGREE)


def pair_jets(omega, u, v):
    """Omega_AB u^A v^B for jet vectors u, v."""
    W = omega.matrix.data
    total = None
    for A, B in zip(*np.nonzero(W != 0)):
        term = u[A] * v[B] * W[A, B]
        total = term if total is None else total + term
    return total


def pullback_two_form(phi):
    """omega_ij = phi_i^A phi_j^B Omega_AB as a 2k x 2k nested list of jets."""
    d = phi.differential()
    omega = phi.omega
    size = 2 * phi.k
    w = [[pair_jets(omega, d[i], d[j]) for j in range(size)] for i in range(size)]
    w0 = rq.qarray([[w[i][j].value() for j in range(size)] for i in range(size)])
    if rq.rank(w0) < size:
        raise EmbeddingError("pullback form is degenerate at the origin")
    return w


def jets_value(arr):
    return rq.qarray(np.vectorize(lambda j: j.value(), otypes=[object])(np.array(arr, dtype=object)))


@dataclass
class SecondFundamentalData:
    k: int
    n: int
    omega0: np.ndarray  # pulled-back form at the origin
    omega_jet: list
    gamma_jet: list  # Gamma[i][j][k] as jets of order 1
    gamma0: np.ndarray
    dgamma0: np.ndarray  # dgamma0[m, i, j, k] = d_m Gamma_ij^k at the origin
    tangent0: np.ndarray  # phi_i^A at the origin, shape (2k, 2n)
    pi0: np.ndarray  # Pi_ij^A at the origin
    ambient: object  # ambient SymplecticForm
    extra: dict = field(default_factory=dict)

    @property
    def domain_form(self):
        return make_symplectic_form(self.omega0)


def induced_connection_and_II(phi):
    size = 2 * phi.k
    omega = phi.omega
    d = phi.differential()
    hess = phi.hessian()
    w = pullback_two_form(phi)
    winv = jet_matrix_inverse(w, 1)
    # H_ijl = Omega(phi_ij, phi_l); Gamma_ij^k omega_kl = H_ijl
    H = [[[pair_jets(omega, hess[i][j], d[l]).truncate(1) for l in range(size)] for j in range(size)] for i in range(size)]
    gamma = [
        [[sum((H[i][j][l] * winv[l][c] for l in range(size)), JetPoly(size, 1)) for c in range(size)] for j in range(size)]
        for i in range(size)
    ]
    gamma0 = jets_value(gamma)
    dgamma0 = rq.qzeros((size,) * 4)
    for m in range(size):
        for i in range(size):
            for j in range(size):
                for c in range(size):
                    dgamma0[m, i, j, c] = gamma[i][j][c].derivative(m).value()
    tangent0 = jets_value(d)
    hess0 = jets_value(hess)
    pi0 = rq.normalize(hess0 - np.einsum("ijk,ka->ija", gamma0, tangent0))
    return SecondFundamentalData(
        k=phi.k,
        n=phi.n,
        omega0=jets_value(w),
        omega_jet=w,
        gamma_jet=gamma,
        gamma0=gamma0,
        dgamma0=dgamma0,
        tangent0=tangent0,
        pi0=pi0,
        ambient=omega,
    )


def induced_curvature(data):
    """R_ijk^l at the origin from the Christoffel 1-jet (dddu Tensor)."""
    G, dG = data.gamma0, data.dgamma0
    R = (
        dG.transpose(0, 1, 2, 3)  # d_i Gamma_jk^l
        - dG.transpose(1, 0, 2, 3)  # d_j Gamma_ik^l
        + np.einsum("jkm,iml->ijkl", G, G)
        - np.einsum("ikm,jml->ijkl", G, G)
    )
    return Tensor(rq.normalize(R), "dddu")


def ind_tensor(data):
    """ind_ijk = Omega(Pi_ij, phi_k)."""
    W = data.ambient.matrix.data
    return rq.normalize(np.einsum("ija,kb,ab->ijk", data.pi0, data.tangent0, W))


def torsion_and_parallelism(data):
    """Torsion of the induced connection and nabla-bar omega, both as jets of order 1."""
    size = 2 * data.k
    G, w = data.gamma_jet, data.omega_jet
    torsion_zero = all(
        (G[i][j][c] - G[j][i][c]).is_zero() for i in range(size) for j in range(size) for c in range(size)
    )
    parallel = True
    zero = JetPoly(size, 1)
    for i in range(size):
        for j in range(size):
            for c in range(size):
                t = w[j][c].derivative(i).truncate(1)
                t = t - sum((G[i][j][p] * w[p][c] for p in range(size)), zero)
                t = t - sum((G[i][c][p] * w[j][p] for p in range(size)), zero)
                if not t.is_zero():
                    parallel = False
    return torsion_zero, parallel


# -- quadratic expressions in the second fundamental form ---------------------


def pi_pair(pi, W):
    """P_ijkl = Omega(Pi_ij, Pi_kl)."""
    return rq.normalize(np.einsum("ija,klb,ab->ijkl", pi, pi, W))


@dataclass
class SmcTensors:
    pi4: Tensor  # Pi_ijkl = 2 Pi_i(k^A Pi_l)j^B Omega_AB
    smc2: Tensor  # smc_ij
    smc4: Tensor  # trace-free part of Pi_ijkl


def smc_tensors(pi, ambient, omega0):
    """Pi_ijkl, smc_ij and smc_ijkl from Pi at a point.

    ``omega0`` is the induced form on the domain; its inverse bivector
    follows the usual sign, omega^{ip} omega_pj = -delta.
    """
    ambient = as_symplectic_form(ambient)
    w = make_symplectic_form(omega0)
    k = w.n
    P = pi_pair(pi, ambient.matrix.data)  # P[i,k,l,j] = Omega(Pi_ik, Pi_lj)
    pi4 = Tensor(np.einsum("iklj->ijkl", P), "dddd")
    pi4 = sym_part(pi4, [2, 3]) * 2
    smc2 = einsum("ab,iajb->ij", w.inverse, Tensor(P, "dddd"))
    wm = w.matrix
    t1 = sym_part(einsum("ik,lj->ijkl", wm, smc2), [2, 3])
    t2 = sym_part(einsum("jk,li->ijkl", wm, smc2), [2, 3])
    t3 = einsum("ij,kl->ijkl", wm, smc2)
    smc4 = pi4 - (t1 - t2 + t3) / (k + 1)
    return SmcTensors(pi4, smc2, smc4)


def smc(data):
    return smc_tensors(data.pi0, data.ambient, data.omega0)


def smc_symmetries(t, omega0):
    """Symmetry/trace facts listed for Pi_ijkl, smc_ij and smc_ijkl."""
    from .curvature import omega_traces

    w = make_symplectic_form(omega0)
    pi4, smc2, smc4 = t.pi4, t.smc2, t.smc4
    trace_pijq = einsum("pq,pijq->ij", w.inverse, pi4)
    trace_pqij = einsum("pq,pqij->ij", w.inverse, pi4)
    return {
        "smc_symmetric": sym_part(smc2, [0, 1], "antisymmetric").is_zero(),
        "pi4_skew_first_pair": sym_part(pi4, [0, 1], "antisymmetric") == pi4,
        "pi4_symmetric_last_pair": sym_part(pi4, [2, 3]) == pi4,
        "pi4_bianchi": sym_part(pi4, [0, 1, 2], "antisymmetric").is_zero(),
        "trace_pijq_is_smc": trace_pijq == smc2,
        "trace_pqij_is_2smc": trace_pqij == smc2 * 2,
        "smc4_trace_free": all(v.is_zero() for v in omega_traces(smc4, w).values()),
    }


# -- Gauss equation ------------------------------------------------------------


@dataclass
class GaussReport:
    gauss_residual_zero: bool
    ricci_is_minus_smc: bool
    ind_zero: bool
    torsion_free: bool
    preserves_omega: bool
    symmetries: dict
    smc4_zero: bool
    hereditary_written: list  # per plane: residual of scurv^N + 2 Pi(X,Y,Z,Z)
    hereditary_derived: list  # per plane: residual of scurv^N + Pi(X,Y,Z,Z)/omega(X,Y)
    split_written: list  # residual of scurv^N + 2 smc4(XYZZ) + 4/(k+1) smc(Z,Z)
    split_derived: list  # residual of scurv^N + smc4(XYZZ)/omega(X,Y) + 2/(k+1) smc(Z,Z)
    fitted: dict = field(default_factory=dict)

    @property
    def hereditary_written_holds(self):
        return all(r == 0 for r in self.hereditary_written)

    @property
    def hereditary_derived_holds(self):
        return all(r == 0 for r in self.hereditary_derived) and all(r == 0 for r in self.split_derived)


def gauss_check(phi, planes=5, seed=0, data=None):
    """Exact Gauss-equation checks for an embedding into flat space."""
    d = data or induced_connection_and_II(phi)
    w = d.domain_form
    k = d.k
    Rbar = induced_curvature(d)
    Rbar_l = lower_curvature(Rbar, w)
    t = smc(d)
    gauss = Rbar_l + t.pi4  # 2 Pi_k[i Pi_j]l = Pi_ijkl
    ric = ricci(Rbar)
    torsion_free, parallel = torsion_and_parallelism(d)
    rng = rq.make_rng("gauss:%s" % (seed,))
    hw, hd, sw, sd = [], [], [], []
    samples = []
    for _ in range(planes):
        x, y = random_symplectic_plane(w, rng)
        a, b = rq.random_rational(rng), rq.random_rational(rng)
        z = a * x + b * y
        wxy = w.pair(x, y)
        scurv_n = _contract4(Rbar_l, x, y, z, z) / wxy
        p = _contract4(t.pi4, x, y, z, z)
        s4 = _contract4(t.smc4, x, y, z, z)
        s2 = Q(z.dot(t.smc2.data).dot(z))
        hw.append(scurv_n + 2 * p)
        hd.append(scurv_n + p / wxy)
        sw.append(scurv_n + 2 * s4 + Q(4) / (k + 1) * s2)
        sd.append(scurv_n + s4 / wxy + Q(2) / (k + 1) * s2)
        samples.append((scurv_n, p / wxy))
    fitted = {}
    # scurv^N + c * Pi(X,Y,Z,Z)/omega(X,Y) = 0: solve for c over the samples
    rows = [[q] for _, q in samples if q != 0]
    rhs = [-s for s, q in samples if q != 0]
    if rows:
        sol = rq.solve(rq.qarray(rows), rq.qarray(rhs))
        fitted["normalized_pi4_coefficient"] = None if sol is None else sol[0]
    return GaussReport(
        gauss_residual_zero=gauss.is_zero(),
        ricci_is_minus_smc=ric == -t.smc2,
        ind_zero=not np.any(ind_tensor(d) != 0),
        torsion_free=torsion_free,
        preserves_omega=parallel,
        symmetries=smc_symmetries(t, d.omega0),
        smc4_zero=t.smc4.is_zero(),
        hereditary_written=hw,
        hereditary_derived=hd,
        split_written=sw,
        split_derived=sd,
        fitted=fitted,
    )


def _contract4(t, x, y, z, u):
    return Q(np.einsum("ijkl,i,j,k,l->", t.data, x, y, z, u))


# -- pointwise Ricci relation in a constant-curvature ambient ----------------


@dataclass
class CricsubReport:
    holds: bool
    lhs: Tensor  # (k+1) phi*(Ric)
    rhs: Tensor  # (n+1)(Ric-bar + smc)
    ind_zero: bool


def random_normal_pi(tangent, ambient, rng, bound=2, max_den=3):
    """Random symmetric Pi_ij^A with values in the Omega-complement of the tangent space."""
    ambient = as_symplectic_form(ambient)
    normal = symplectic_complement_basis(ambient, list(tangent))
    size = tangent.shape[0]
    pi = rq.qzeros((size, size, ambient.dim))
    for i in range(size):
        for j in range(i, size):
            v = rq.qzeros(ambient.dim)
            for nv in normal:
                v = v + rq.random_rational(rng, bound, max_den) * nv
            pi[i, j] = v
            pi[j, i] = v
    return pi


def cricsub_pointwise(n, k, ambient_Rl, ambient_ric, tangent, pi, ambient):
    """(k+1) phi*(Ric)_ij = (n+1)(Ric-bar_ij + smc_ij) at a point.

    The induced curvature is defined through the Gauss equation with the
    ambient curvature of constant-curvature type.  ``tangent`` is the 2k x 2n
    array phi_i^A and must span a symplectic subspace.
    """
    ambient = as_symplectic_form(ambient)
    tangent = rq.qarray(tangent)
    if tangent.shape != (2 * k, 2 * n) or ambient.dim != 2 * n:
        raise EmbeddingError("inconsistent dimensions for k=%d n=%d" % (k, n))
    W = ambient.matrix.data
    omega0 = rq.normalize(np.einsum("ia,jb,ab->ij", tangent, tangent, W))
    w = make_symplectic_form(omega0)
    ind = rq.normalize(np.einsum("ija,kb,ab->ijk", pi, tangent, W))
    pulled = rq.normalize(np.einsum("ABCD,iA,jB,kC,lD->ijkl", ambient_Rl.data, tangent, tangent, tangent, tangent))
    t = smc_tensors(pi, ambient, omega0)
    Rbar_l = Tensor(pulled, "dddd") - t.pi4
    ric_bar = ricci(raise_curvature(Rbar_l, w))
    pull_ric = Tensor(rq.normalize(np.einsum("AB,iA,jB->ij", ambient_ric.data, tangent, tangent)), "dd")
    lhs = pull_ric * (k + 1)
    rhs = (ric_bar + t.smc2) * (n + 1)
    return CricsubReport(lhs == rhs, lhs, rhs, not np.any(ind != 0))
