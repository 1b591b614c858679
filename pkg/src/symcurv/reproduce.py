"""Recompute the published values of the two four-dimensional examples.

Each check pairs a stored rational constant with the value computed from
scratch.  Labels use 1-based basis names (e1..e4, x1..x4) because that is how
the values are written; arrays stay 0-based internally.
"""

from dataclasses import dataclass

import numpy as np

from . import rational as rq
from .curvature import CurvatureData, flags, lower_curvature
from .liealg import (
    builtin,
    canonical_connection,
    derived_series_dims,
    is_nilpotent,
    is_solvable,
    killing_form,
    solvable_ricci_oracle,
    special_elements,
    symplectic_adjoint_tensor,
    trace_form,
    validate,
)
from .rational import Q
from .sectional import classify_ricci_endomorphism, scurv, sectional_form
from .symplin import classify_quadratic
from .tensor import Tensor, basis_covector, einsum, sym_part, tensor_product, wedge

DIM = 4


@dataclass
class Check:
    example: str
    name: str
    expected: object
    computed: object

    @property
    def ok(self):
        e, c = self.expected, self.computed
        if isinstance(e, Tensor) or isinstance(c, Tensor):
            return isinstance(e, Tensor) and isinstance(c, Tensor) and e == c
        if isinstance(e, np.ndarray) or isinstance(c, np.ndarray):
            return bool(np.array_equal(np.asarray(e, dtype=object), np.asarray(c, dtype=object)))
        return e == c

    def as_dict(self):
        return {
            "example": self.example,
            "check": self.name,
            "ok": self.ok,
            "expected": render(self.expected),
            "computed": render(self.computed),
        }


def render(v):
    """JSON-friendly form: rationals as strings, tensors as sparse 1-based lists."""
    if isinstance(v, Tensor):
        return [
            ["".join(str(i + 1) for i in idx), rq.to_str(x)] for idx, x in v.nonzero_items()
        ]
    if isinstance(v, np.ndarray):
        return [render(x) for x in v]
    if isinstance(v, (list, tuple)):
        return [render(x) for x in v]
    if isinstance(v, (bool, str, int)) or v is None:
        return v
    return rq.to_str(Q(v))


def poly_tensor(terms, variance, scale=1):
    """Tensor from ``{1-based index tuple: coefficient}``, times ``scale``.

    A bilinear formula sum c x_i y_j e_k is entered as {(i, j, k): c}.
    """
    out = rq.qzeros((DIM,) * len(variance))
    for idx, c in terms.items():
        out[tuple(i - 1 for i in idx)] = Q(c) * Q(scale)
    return Tensor(out, variance)


def e(i):
    v = rq.qzeros(DIM)
    v[i - 1] = Q(1)
    return v


def _basis():
    return [e(i) for i in range(1, DIM + 1)]


def _span_rank(vectors):
    nonzero = [v for v in vectors if np.any(v != 0)]
    return rq.rank(np.stack(nonzero)) if nonzero else 0


def commutator_vectors(alg):
    b = _basis()
    return [alg.bracket(x, y) for x in b for y in b]


def same_span(vectors, target):
    r = _span_rank(target)
    return _span_rank(vectors) == r and _span_rank(list(vectors) + list(target)) == r


def sample_vectors(seed, count, condition):
    rng = rq.make_rng("examples:%s" % seed)
    out = []
    while len(out) < count:
        v = rq.random_vector(rng, DIM)
        if condition(v):
            out.append(v)
    return out


def fit_binary_form(points):
    """Coefficients (a, b, c) of a u1^2 + b u1 u2 + c u2^2 through ``(u1, u2, value)``."""
    rows = [[u1 * u1, u1 * u2, u2 * u2] for u1, u2, _ in points]
    sol = rq.solve(rq.qarray(rows), rq.qarray([v for _, _, v in points]))
    if sol is None:
        return None
    for u1, u2, v in points:
        if sol[0] * u1 * u1 + sol[1] * u1 * u2 + sol[2] * u2 * u2 != v:
            return None
    return sol


def _common(name, alg, conn, d):
    """Checks shared by both examples: structural facts of the canonical connection."""
    out = []
    out.append(Check(name, "canonical connection torsion-free", True, conn.is_torsion_free()))
    out.append(Check(name, "canonical connection symplectic", True, conn.is_symplectic()))
    out.append(Check(name, "Ricci from the solvable formula", d.ric, solvable_ricci_oracle(alg)))
    fl = flags(conn, d)
    out.append(Check(name, "not preferred", False, fl.preferred))
    out.append(Check(name, "not Weyl flat", False, fl.weyl_flat))
    return out


def aff1c_checks():
    name = "aff1c"
    alg = builtin(name)
    conn = canonical_connection(alg)
    d = CurvatureData(conn)
    w = alg.omega
    checks = []
    rep = validate(alg)
    checks.append(Check(name, "valid symplectic Lie algebra", True, rep.valid))
    checks.append(Check(name, "[e1,e3] = e3", e(3), alg.bracket(e(1), e(3))))
    checks.append(Check(name, "[e2,e3] = e4", e(4), alg.bracket(e(2), e(3))))
    checks.append(Check(name, "commutator = span{e3,e4}", True, same_span(commutator_vectors(alg), [e(3), e(4)])))
    checks.append(Check(name, "solvable", True, is_solvable(alg)))
    checks.append(Check(name, "not nilpotent", False, is_nilpotent(alg)))
    # Omega = -d e^4 with d alpha(x, y) = -alpha([x, y])
    minus_e4 = -e(4)
    d_alpha = rq.qarray([[-minus_e4.dot(alg.bracket(x, y)) for y in _basis()] for x in _basis()])
    checks.append(Check(name, "Omega = -d e^4", w.matrix.data, d_alpha))
    checks.append(Check(name, "Omega exact", True, rep.exact))

    checks.append(Check(name, "tr ad(x) = 2 x1", poly_tensor({(1,): 2}, "d"), trace_form(alg)))
    se = special_elements(alg)
    checks.append(Check(name, "ell = -2 e4", -2 * e(4), se.ell))
    checks.append(Check(name, "not unimodular", False, se.unimodular))

    adstar = poly_tensor(
        {
            (2, 2, 1): 1, (1, 1, 1): -1,
            (1, 2, 2): -1, (2, 1, 2): -1,
            (4, 2, 3): 1, (3, 1, 3): -1,
            (4, 1, 4): -1, (3, 2, 4): -1,
        },
        "ddu",
    )
    checks.append(Check(name, "ad(x)* y", adstar, symplectic_adjoint_tensor(alg)))
    sad3 = poly_tensor(
        {
            (2, 2, 1): 1, (1, 1, 1): -1,
            (1, 2, 2): -1, (2, 1, 2): -1,
            (1, 3, 3): 1, (3, 1, 3): -2, (2, 4, 3): -1, (4, 2, 3): 2,
            (1, 4, 4): 1, (4, 1, 4): -2, (2, 3, 4): 1, (3, 2, 4): -2,
        },
        "ddu",
    )
    checks.append(Check(name, "3 sad(x) y", sad3, conn.coefficients * 3))

    comm_ok, curv_ok = True, True
    R = d.R
    for x in _basis():
        for y in _basis():
            sx, sy = conn.endo(x), conn.endo(y)
            sxy = conn.endo(alg.bracket(x, y))
            # (E o F) as du matrices composes as F @ E
            bracket = Tensor(rq.matmul(sy.data, sx.data) - rq.matmul(sx.data, sy.data), "du")
            comm_ok &= bracket == sxy * Q(2, 3)
            Rxy = Tensor(np.einsum("i,j,ijpk->pk", x, y, R.data), "du")
            curv_ok &= Rxy == sxy * Q(-1, 3)
    checks.append(Check(name, "[sad(x), sad(y)] = (2/3) sad([x,y])", True, comm_ok))
    checks.append(Check(name, "R(x,y) = -(1/3) sad([x,y])", True, curv_ok))

    ell = se.ell
    Rl = d.Rl
    vanish = all(
        Q(np.einsum("ijkl,i,j,k,l->", Rl.data, x, y, ell, ell)) == 0 for x in _basis() for y in _basis()
    )
    checks.append(Check(name, "Omega(R(x,y)ell, ell) = 0", True, vanish))
    checks.append(Check(name, "Omega(x, ell) = -2 x1", rq.qarray([-2, 0, 0, 0]), rq.normalize(w.matrix.data.dot(ell))))

    # Omega(R(x, ell)u, u) as a symmetric form in u depending linearly on x
    printed_rxl = poly_tensor({(1, 1, 1): -4, (1, 2, 2): 4, (2, 1, 2): 4, (2, 2, 1): 4}, "ddd", Q(1, 9))
    computed_rxl = sym_part(Tensor(np.einsum("ijkl,j->ikl", Rl.data, ell), "ddd"), [1, 2])
    checks.append(Check(name, "Omega(R(x,ell)u,u) = (4/9)(-x1u1^2 + x1u2^2 + 2x2u1u2)", printed_rxl, computed_rxl))

    xs = sample_vectors("aff-planes", 6, lambda v: v[0] != 0)
    rng = rq.make_rng("examples:aff-coeffs")
    on_plane_printed, on_plane_computed = [], []
    scurv_printed, scurv_computed = [], []
    points = []
    intrinsic = set()
    for x in xs:
        for _ in range(3):
            a, b = rq.random_rational(rng), rq.random_rational(rng)
            u = a * x + b * ell
            on_plane_printed.append(Q(4, 9) * a * a * x[0] * (3 * x[1] ** 2 - x[0] ** 2))
            on_plane_computed.append(Q(np.einsum("ijkl,i,j,k,l->", Rl.data, x, ell, u, u)))
            scurv_printed.append(Q(2, 9) * (u[0] ** 2 - 3 * u[1] ** 2))
            value = scurv(Rl, w, x, ell, u)
            scurv_computed.append(value)
            points.append((u[0], u[1], value))
        intrinsic.add(sectional_form(Rl, w, x, ell).kind)
    checks.append(Check(name, "Omega(R(x,ell)u,u) = (4/9)a^2 x1(3x2^2 - x1^2) for u = ax + b ell", on_plane_printed, on_plane_computed))
    checks.append(Check(name, "scurv on span{x,ell} = (2/9)(u1^2 - 3u2^2)", scurv_printed, scurv_computed))
    fitted = fit_binary_form(points)
    form_class = None if fitted is None else classify_quadratic([[fitted[0], fitted[1] / 2], [fitted[1] / 2, fitted[2]]])
    checks.append(Check(name, "scurv as a form in (u1,u2) is indefinite", "indefinite", form_class))
    checks.append(Check(name, "restricted form on span{x,ell} is degenerate", True, all(k.startswith("degenerate") for k in intrinsic)))

    checks.append(Check(name, "9 ric = 4(x2y2 - x1y1)", poly_tensor({(2, 2): 4, (1, 1): -4}, "dd", Q(1, 9)), d.ric))
    # Omega(Ax, y) = ric(x, y): A = ric W^{-1} as a du matrix
    A = Tensor(rq.matmul(d.ric.data, rq.inverse(w.matrix.data)), "du")
    checks.append(Check(name, "9A = 4(e^1 (x) e_4 - e^2 (x) e_3)", poly_tensor({(1, 4): 4, (2, 3): -4}, "du", Q(1, 9)), A))
    checks.append(Check(name, "A o A = 0", True, Tensor(rq.matmul(A.data, A.data), "du").is_zero()))
    _, tag, _, kernel_ok = classify_ricci_endomorphism(d.ric, w)
    checks.append(Check(name, "Ricci endomorphism is nilpotent with kernel = annihilator of image", ("nilpotent", True), (tag, kernel_ok)))

    ric_sad = einsum("ijp,pk->ijk", conn.coefficients, d.ric)
    checks.append(Check(
        name,
        "9 ric(sad(x)y, z) = 4(-x1y1z1 + x2y2z1 + x2y1z2 + x1y2z2)",
        poly_tensor({(1, 1, 1): -4, (2, 2, 1): 4, (2, 1, 2): 4, (1, 2, 2): 4}, "ddd", Q(1, 9)),
        ric_sad,
    ))
    checks.append(Check(
        name,
        "9 sym nabla ric = 8(x1y1z1 - x2y2z1 - x2y1z2 - x1y2z2)",
        poly_tensor({(1, 1, 1): 8, (2, 2, 1): -8, (2, 1, 2): -8, (1, 2, 2): -8}, "ddd", Q(1, 9)),
        sym_part(d.nabla_ric, [0, 1, 2]),
    ))
    checks.extend(_common(name, alg, conn, d))
    return checks


def r40_checks():
    name = "r40"
    alg = builtin(name)
    conn = canonical_connection(alg)
    d = CurvatureData(conn)
    w = alg.omega
    checks = []
    rep = validate(alg)
    checks.append(Check(name, "valid symplectic Lie algebra", True, rep.valid))
    checks.append(Check(name, "[e4,e1] = e1", e(1), alg.bracket(e(4), e(1))))
    checks.append(Check(name, "[e4,e3] = e2", e(2), alg.bracket(e(4), e(3))))
    checks.append(Check(name, "commutator = span{e1,e2}", True, same_span(commutator_vectors(alg), [e(1), e(2)])))
    checks.append(Check(name, "solvable", True, is_solvable(alg)))
    checks.append(Check(name, "not nilpotent", False, is_nilpotent(alg)))
    checks.append(Check(name, "derived series reaches 0", 0, derived_series_dims(alg)[-1]))
    checks.append(Check(name, "Omega closed", True, rep.cocycle))
    checks.append(Check(name, "Omega not exact", False, rep.exact))

    checks.append(Check(name, "tr ad(x) = x4", poly_tensor({(4,): 1}, "d"), trace_form(alg)))
    se = special_elements(alg)
    checks.append(Check(name, "ell = e1", e(1), se.ell))
    checks.append(Check(name, "not unimodular", False, se.unimodular))

    adstar = poly_tensor({(3, 3, 1): -1, (1, 4, 1): -1, (4, 3, 2): 1, (4, 4, 4): -1}, "ddu")
    checks.append(Check(name, "ad(x)* y", adstar, symplectic_adjoint_tensor(alg)))
    sad3 = poly_tensor(
        {(4, 1, 1): 1, (1, 4, 1): -2, (3, 3, 1): -1, (4, 3, 2): 2, (3, 4, 2): -1, (4, 4, 4): -1},
        "ddu",
    )
    checks.append(Check(name, "3 sad(x) y", sad3, conn.coefficients * 3))

    co = [basis_covector(DIM, i) for i in range(DIM)]
    printed_curv = tensor_product(wedge(co[2], co[3]), tensor_product(co[2], co[3]) + tensor_product(co[3], co[2])) * Q(1, 9)
    printed_curv = printed_curv - tensor_product(wedge(co[0], co[3]), tensor_product(co[3], co[3])) * Q(2, 9)
    checks.append(Check(name, "lowered curvature", printed_curv, lower_curvature(d.R, w)))

    Rl = d.Rl
    ell = se.ell
    xs = sample_vectors("r40-planes", 6, lambda v: v[3] != 0)
    rng = rq.make_rng("examples:r40-coeffs")
    printed, computed, nonzero = [], [], True
    kinds = set()
    for x in xs:
        for _ in range(3):
            a, b = rq.random_rational(rng), rq.random_rational(rng)
            if a == 0:
                a = Q(1)
            u = a * x + b * ell
            printed.append(Q(-2, 9) * u[3] ** 2)
            value = scurv(Rl, w, x, ell, u)
            computed.append(value)
            nonzero &= value != 0
        kinds.add(sectional_form(Rl, w, x, ell).kind)
    checks.append(Check(name, "scurv on span{x,ell} = -(2/9)u4^2", printed, computed))
    checks.append(Check(name, "restricted form class", ["degenerate_negative"], sorted(kinds)))
    checks.append(Check(name, "scurv nonzero off the ell line", True, nonzero))

    ric_formula = rq.qarray(
        [
            [
                Q(np.einsum("ijkl,i,j,k,l->", Rl.data, e(1), x, y, e(4)))
                + Q(np.einsum("ijkl,i,j,k,l->", Rl.data, e(2), x, y, e(3)))
                for y in _basis()
            ]
            for x in _basis()
        ]
    )
    nine_ric = poly_tensor({(4, 4): -2}, "dd", Q(1, 9))
    checks.append(Check(name, "9 ric = -2 e^4 (x) e^4", nine_ric, d.ric))
    checks.append(Check(name, "ric(x,y) = Omega(R(e1,x)y,e4) + Omega(R(e2,x)y,e3)", nine_ric, Tensor(ric_formula, "dd")))
    checks.append(Check(name, "Killing form B = x4y4", poly_tensor({(4, 4): 1}, "dd"), killing_form(alg)))
    tr_adstar = einsum("ijk,k->ij", symplectic_adjoint_tensor(alg), trace_form(alg))
    checks.append(Check(name, "-tr ad(ad(x)* y) = x4y4", poly_tensor({(4, 4): 1}, "dd"), -tr_adstar))

    nabla_ric = poly_tensor({(4, 4, 4): -4}, "ddd", Q(1, 27))
    checks.append(Check(name, "nabla ric = -(4/27) x4y4z4", nabla_ric, d.nabla_ric))
    via_sad = -(einsum("ijp,pk->ijk", conn.coefficients, d.ric) + einsum("ikp,jp->ijk", conn.coefficients, d.ric))
    checks.append(Check(name, "nabla ric = -ric(sad(x)y,z) - ric(y,sad(x)z)", nabla_ric, via_sad))
    checks.extend(_common(name, alg, conn, d))
    return checks


EXAMPLES = {"aff1c": aff1c_checks, "r40": r40_checks}


def run_examples(name="all"):
    if name == "all":
        return [c for key in sorted(EXAMPLES) for c in EXAMPLES[key]()]
    if name not in EXAMPLES:
        raise KeyError("unknown example %r (choose from %s or all)" % (name, ", ".join(sorted(EXAMPLES))))
    return EXAMPLES[name]()
