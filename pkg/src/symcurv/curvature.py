"""Curvature tensors of symplectic connections and the identities they satisfy.

Any object exposing ``omega`` (a :class:`~symcurv.symplin.SymplecticForm`),
``dim``, ``curvature()`` (the ``dddu`` tensor R_{ijk}^l) and
``covariant_derivative(t)`` can be analysed here.  Left-invariant
connections and the parallel-curvature Kähler models both qualify.
"""

from dataclasses import dataclass
import itertools
from functools import cached_property

import numpy as np

from . import rational as rq
from .rational import ZERO, Q, mpq
from .tensor import Tensor, TensorError, contract, einsum, flip_index, sym_part


class CurvatureError(ValueError):
    pass


def lower_curvature(R, omega):
    """R_{ijkl} = R_{ijk}^p Omega_{pl}."""
    return einsum("ijkp,pl->ijkl", R, omega.matrix)


def raise_curvature(Rl, omega):
    """Inverse of :func:`lower_curvature`: R_{ijk}^l = Omega^{lp} R_{ijkp}."""
    return flip_index(Rl, 3, "raise", omega)


def ricci(R):
    """R_{ij} = R_{pij}^p; the input must be antisymmetric in its first pair."""
    if R.variance != "dddu":
        raise CurvatureError("ricci expects a dddu curvature tensor, got %r" % R.variance)
    if not np.all(R.data == -R.data.transpose(1, 0, 2, 3)):
        raise CurvatureError("curvature tensor is not antisymmetric in its first two slots")
    return einsum("pijp->ij", R)


def weyl(Rl, ric, omega):
    """Totally Omega-trace-free part of the lowered curvature."""
    n = omega.n
    w = omega.matrix
    t1 = sym_part(einsum("ik,lj->ijkl", w, ric), [2, 3])  # Omega_{i(k} R_{l)j}
    t2 = sym_part(einsum("jk,li->ijkl", w, ric), [2, 3])  # Omega_{j(k} R_{l)i}
    t3 = einsum("ij,kl->ijkl", w, ric)
    return Rl - (t1 - t2 + t3) / (n + 1)


def ricci_endomorphism(ric, omega):
    """R_i^j = Omega^{ja} R_{ia}, so that Omega(R(x), y) = ric(x, y)."""
    return einsum("ja,ia->ij", omega.inverse, ric)


def raise_both(t, omega):
    """T^{pq} = Omega^{pa} Omega^{qb} T_{ab}."""
    return einsum("pa,qb,ab->pq", omega.inverse, omega.inverse, t)


def compose(e, f):
    """(e o f) as du tensors: (e o f)_i^j = f_i^p e_p^j."""
    return einsum("ip,pj->ij", f, e)


def omega_traces(t, omega):
    """All six Omega^{..} traces of a rank-4 covariant tensor."""
    out = {}
    letters = "abcd"
    for a in range(4):
        for b in range(a + 1, 4):
            spec = list(letters)
            spec[a], spec[b] = "p", "q"
            rest = "".join(ch for ch in spec if ch not in "pq")
            out[(a, b)] = einsum("pq,%s->%s" % ("".join(spec), rest), omega.inverse, t)
    return out


class CurvatureData:
    """Lazily computed curvature tensors of one connection."""

    def __init__(self, conn):
        self.conn = conn
        self.omega = conn.omega
        self.dim = conn.dim
        self.n = self.dim // 2

    def nabla(self, t):
        return self.conn.covariant_derivative(t)

    @cached_property
    def R(self):
        return self.conn.curvature()

    @cached_property
    def Rl(self):
        return lower_curvature(self.R, self.omega)

    @cached_property
    def ric(self):
        return ricci(self.R)

    @cached_property
    def weyl(self):
        return weyl(self.Rl, self.ric, self.omega)

    @cached_property
    def nabla_R(self):
        return self.nabla(self.R)

    @cached_property
    def nabla_Rl(self):
        return self.nabla(self.Rl)

    @cached_property
    def nabla_ric(self):
        return self.nabla(self.ric)

    @cached_property
    def nabla_weyl(self):
        return self.nabla(self.weyl)

    @cached_property
    def rho(self):
        """rho_i = nabla^p R_{ip} = Omega^{pa} nabla_a R_{ip}."""
        return einsum("pa,aip->i", self.omega.inverse, self.nabla_ric)

    @cached_property
    def rho_alt(self):
        """Same one-form through the other contraction order: -nabla_a R_i^a."""
        raised = flip_index(self.nabla_ric, 2, "raise", self.omega)
        return -contract(raised, 2, 0)

    @cached_property
    def nabla_rho(self):
        return self.nabla(self.rho)

    @cached_property
    def nabla_nabla_ric(self):
        return self.nabla(self.nabla_ric)

    @cached_property
    def ric_up(self):
        return raise_both(self.ric, self.omega)

    @cached_property
    def ric_endo(self):
        return ricci_endomorphism(self.ric, self.omega)

    @cached_property
    def ric_norm(self):
        """R_{pq} R^{pq}."""
        return einsum("pq,pq->", self.ric_up, self.ric).item()


def curvature_one_form(conn):
    return CurvatureData(conn).rho


# -- flags -------------------------------------------------------------------


@dataclass
class Flags:
    preferred: bool
    weyl_flat: bool
    symplectically_flat: bool
    locally_symmetric: bool
    ricci_parallel: bool
    vacuous: bool  # dimension 2: Weyl tensor vanishes identically
    consistent: bool  # weyl_flat implies preferred when dim > 2

    def as_dict(self):
        return {
            "preferred": self.preferred,
            "weyl_flat": self.weyl_flat,
            "symplectically_flat": self.symplectically_flat,
            "locally_symmetric": self.locally_symmetric,
            "ricci_parallel": self.ricci_parallel,
            "weyl_flat_vacuous": self.vacuous,
        }


def flags(conn, data=None):
    d = data or CurvatureData(conn)
    preferred = sym_part(d.nabla_ric, [0, 1, 2]).is_zero()
    weyl_flat = d.weyl.is_zero()
    vacuous = d.dim == 2
    return Flags(
        preferred=preferred,
        weyl_flat=weyl_flat,
        symplectically_flat=weyl_flat and preferred,
        locally_symmetric=d.nabla_R.is_zero(),
        ricci_parallel=d.nabla_ric.is_zero(),
        vacuous=vacuous,
        consistent=vacuous or not weyl_flat or preferred,
    )


# -- identity suite ------------------------------------------------------------


@dataclass
class Identity:
    """A tensor equation written as ``sum(coeff * term) == 0``."""

    name: str
    coefficients: list
    terms: list
    involves_weyl: bool = False

    def residual(self):
        total = None
        for c, t in zip(self.coefficients, self.terms):
            total = t * c if total is None else total + t * c
        return total


@dataclass
class IdentityResult:
    name: str
    holds: bool
    max_residual: object
    witness: tuple = ()
    vacuous: bool = False
    note: str = ""

    def as_dict(self):
        return {
            "name": self.name,
            "holds": self.holds,
            "max_residual": str(self.max_residual),
            "witness": list(self.witness),
            "vacuous": self.vacuous,
            "note": self.note,
        }


def identity_equations(d):
    """The curvature identities of a symplectic connection, as term lists."""
    n, w, winv = d.n, d.omega.matrix, d.omega.inverse
    R, Rl, ric, W = d.R, d.Rl, d.ric, d.weyl
    nric = d.nabla_ric
    rho = d.rho
    half = mpq(1, 2)
    eqs = []

    eqs.append(Identity("curvsym", [1], [sym_part(Rl, [2, 3], "antisymmetric")]))
    sym_r = sym_part(Rl, [1, 2, 3])
    sym_r_swapped = sym_r.permute([1, 0, 2, 3])  # R_j(ikl)
    eqs.append(Identity("rsym", [4, -3, 3], [Rl, sym_r, sym_r_swapped]))
    sym_w = sym_part(W, [1, 2, 3])
    sym_w_swapped = sym_w.permute([1, 0, 2, 3])
    eqs.append(Identity("rsym_weyl", [4, -3, 3], [W, sym_w, sym_w_swapped], True))
    eqs.append(Identity("bianchi1", [1], [sym_part(R, [0, 1, 2], "antisymmetric")]))
    eqs.append(Identity("ricci_symmetric", [1], [sym_part(ric, [0, 1], "antisymmetric")]))

    trace01 = einsum("ia,iakl->kl", winv, Rl)  # R_p^p_kl
    trace12 = einsum("pa,ipaj->ij", winv, Rl)  # R_ip^p_j
    trace03 = einsum("pijp->ij", R)  # R_pij^p
    eqs.append(Identity("twotraces_first", [1, -2], [trace01, ric]))
    eqs.append(Identity("twotraces_second", [-2, -2], [trace12, ric]))
    eqs.append(Identity("twotraces_third", [2, -2], [trace03, ric]))

    div_r = einsum("pa,apijk->ijk", winv, d.nabla_Rl)  # nabla^p R_pijk
    eqs.append(Identity("symdiffbianchi", [1, -1], [div_r, nric]))
    eqs.append(Identity("symdiffbianchi_trace", [half, -1], [d.nabla(trace01), nric]))

    div_mixed = einsum("aijka->ijk", d.nabla_R)  # nabla_p R_ijk^p
    skew_nric = sym_part(nric, [0, 1], "antisymmetric")  # nabla_[i R_j]k
    eqs.append(Identity("curvature_divergence", [1, 2], [div_mixed, skew_nric]))

    nW = d.nabla_weyl
    div_w_first = einsum("pa,apijk->ijk", winv, nW)  # nabla^p W_pijk
    div_w_last = einsum("pa,aijkp->ijk", winv, nW)  # nabla^p W_ijkp
    sym_nric = sym_part(nric, [0, 1, 2])
    w_rho = sym_part(einsum("ij,k->ijk", w, rho), [1, 2])  # Omega_i(j rho_k)
    eqs.append(
        Identity(
            "divw1",
            [2 * (n + 1), -(2 * n + 1), 3, -1],
            [div_w_first, nric, sym_nric, w_rho],
            True,
        )
    )
    eqs.append(
        Identity(
            "divw_symmetric",
            [n + 1, -(n - 1)],
            [sym_part(div_w_first, [0, 1, 2]), sym_nric],
            True,
        )
    )
    w_ij_rho_k = einsum("ij,k->ijk", w, rho)
    w_k_rho = sym_part(einsum("ki,j->ijk", w, rho), [0, 1], "antisymmetric")  # Omega_k[i rho_j]
    eqs.append(
        Identity(
            "divw_skew",
            [2 * (n + 1), 2 * (2 * n + 1), 1, -1],
            [div_w_last, skew_nric, w_ij_rho_k, w_k_rho],
            True,
        )
    )
    # -2 nabla^p W_i(jk)p = 3 (nabla^p W_pijk - nabla^p W_p(ijk))
    eqs.append(
        Identity(
            "divw_split",
            [-2, -3, 3],
            [sym_part(div_w_last, [1, 2]), div_w_first, sym_part(div_w_first, [0, 1, 2])],
            True,
        )
    )

    ric_up = d.ric_up
    rw = einsum("pq,pijq->ij", ric_up, W)
    rr = einsum("pq,pijq->ij", ric_up, Rl)
    ric_sq = einsum("ip,jp->ij", ric, d.ric_endo.permute([0, 1]))  # R_ip R_j^p
    norm = d.ric_norm
    eqs.append(
        Identity(
            "riccurv",
            [1, -1, -mpq(1, n + 1), -mpq(1, 2 * (n + 1))],
            [rw, rr, ric_sq, w * norm],
            True,
        )
    )

    nrho = d.nabla_rho
    dd_ric = einsum("pa,aijp->ij", winv, d.nabla_nabla_ric)  # nabla^p nabla_i R_jp
    eqs.append(
        Identity("nablarho", [1, -2, -2, -2], [nrho, dd_ric, rr, ric_sq])
    )
    eqs.append(
        Identity(
            "nablarho_weyl",
            [1, -2, -2, -mpq(2 * n, n + 1), mpq(1, n + 1)],
            [nrho, dd_ric, rw, ric_sq, w * norm],
            True,
        )
    )

    w_ric = sym_part(einsum("ij,kl->ijkl", w, ric), [1, 2, 3])  # Omega_i(j R_kl)
    eqs.append(
        Identity("wsym", [1, -1, mpq(2, n + 1)], [sym_w, sym_r, w_ric], True)
    )
    for (a, b), tr in omega_traces(W, d.omega).items():
        eqs.append(Identity("weyl_trace_%d%d" % (a, b), [1], [tr], True))
    return eqs


def _first_nonzero(t):
    for idx, v in np.ndenumerate(t.data):
        if v != 0:
            return tuple(int(i) for i in idx)
    return ()


def verify_identity_suite(conn, data=None):
    """Evaluate every identity exactly; failures are reported, not raised."""
    d = data or CurvatureData(conn)
    results = []
    vacuous_dim = d.dim == 2
    for eq in identity_equations(d):
        res = eq.residual()
        holds = res.is_zero()
        results.append(
            IdentityResult(
                name=eq.name,
                holds=holds,
                max_residual=res.max_abs(),
                witness=() if holds else _first_nonzero(res),
                vacuous=vacuous_dim and eq.involves_weyl,
            )
        )
    # nabla_p R_ijk^p = 0  =>  rho = 0
    div_mixed = einsum("aijka->ijk", d.nabla_R)
    premise = div_mixed.is_zero()
    rho_zero = d.rho.is_zero()
    results.append(
        IdentityResult(
            name="divergence_free_implies_rho_zero",
            holds=(not premise) or rho_zero,
            max_residual=d.rho.max_abs() if premise else ZERO,
            note="premise holds" if premise else "premise false",
        )
    )
    results.append(
        IdentityResult(
            name="rho_contraction_orders",
            holds=d.rho == d.rho_alt,
            max_residual=(d.rho - d.rho_alt).max_abs(),
        )
    )
    weyl_zero = d.weyl.is_zero()
    sym_zero = sym_part(d.weyl, [1, 2, 3]).is_zero()
    results.append(
        IdentityResult(
            name="weyl_flat_iff_symmetric_part",
            holds=weyl_zero == sym_zero,
            max_residual=ZERO,
            vacuous=vacuous_dim,
        )
    )
    return results


def fit_coefficients(equations):
    """Exact coefficients making ``sum(c_t * term_t) = 0`` across samples.

    ``equations`` is a list of :class:`Identity` instances of one name taken
    from different connections.  The first coefficient stays at its written
    value; among all solutions the one changing the fewest of the other
    written constants is returned.  Returns ``(coefficients, unique)`` or
    ``(None, False)`` when no choice of constants works.
    """
    first = equations[0]
    m = len(first.terms)
    if m < 2:
        return None, False
    written = [Q(c) for c in first.coefficients]
    columns = [[] for _ in range(m)]
    for eq in equations:
        for t, term in enumerate(eq.terms):
            columns[t].extend(term.data.reshape(-1))
    cols = [rq.qarray(c) for c in columns]
    full = np.stack(cols[1:], axis=1)
    unique = rq.rank(full) == m - 1
    for size in range(1, m):
        for free in itertools.combinations(range(1, m), size):
            rhs = -written[0] * cols[0]
            for t in range(1, m):
                if t not in free:
                    rhs = rhs - written[t] * cols[t]
            sol = rq.solve(np.stack([cols[t] for t in free], axis=1), rhs)
            if sol is not None:
                out = list(written)
                for t, v in zip(free, sol):
                    out[t] = v
                return out, unique
    return None, False


@dataclass
class SuiteSummary:
    """One identity checked over many connections of one dimension."""

    name: str
    dim: int
    samples: int
    failures: int
    printed: list
    derived: list = None
    derived_unique: bool = False
    vacuous: bool = False

    @property
    def holds(self):
        return self.failures == 0

    @property
    def accounted(self):
        """Holds as written, or a single correction explains every sample."""
        return self.holds or self.derived is not None

    def as_dict(self):
        return {
            "name": self.name,
            "dim": self.dim,
            "samples": self.samples,
            "failures": self.failures,
            "printed": [str(c) for c in self.printed],
            "derived": None if self.derived is None else [str(c) for c in self.derived],
            "derived_unique": self.derived_unique,
            "vacuous": self.vacuous,
        }


def identity_suite_over_samples(connections):
    """Run the identity suite on each connection and fit failing constants.

    Returns ``(summaries, per_connection_results)``.  Identities are grouped
    by name and dimension since several constants depend on n.
    """
    grouped = {}
    extra = {}
    per_conn = []
    for conn in connections:
        d = CurvatureData(conn)
        res = verify_identity_suite(conn, d)
        per_conn.append(res)
        by_name = {r.name: r for r in res}
        for eq in identity_equations(d):
            grouped.setdefault((d.dim, eq.name), []).append((eq, by_name[eq.name]))
        for r in res:
            if r.name not in {eq.name for eq, _ in grouped.get((d.dim, r.name), [])}:
                extra.setdefault((d.dim, r.name), []).append(r)
    summaries = []
    for (dim, name), items in sorted(grouped.items()):
        eqs = [eq for eq, _ in items]
        failures = sum(1 for _, r in items if not r.holds)
        s = SuiteSummary(
            name=name,
            dim=dim,
            samples=len(items),
            failures=failures,
            printed=[Q(c) for c in eqs[0].coefficients],
            vacuous=items[0][1].vacuous,
        )
        if failures:
            s.derived, s.derived_unique = fit_coefficients(eqs)
        summaries.append(s)
    for (dim, name), items in sorted(extra.items()):
        summaries.append(
            SuiteSummary(
                name=name,
                dim=dim,
                samples=len(items),
                failures=sum(1 for r in items if not r.holds),
                printed=[],
                vacuous=items[0].vacuous,
            )
        )
    return summaries, per_conn
