import numpy as np
import pytest

from symcurv import rational as rq
from symcurv.curvature import CurvatureData
from symcurv.kahler import make_kahler_model
from symcurv.rational import Q
from symcurv.submanifold import (
    EmbeddingError,
    PolyEmbedding,
    cricsub_pointwise,
    embedding_from_terms,
    gauss_check,
    induced_connection_and_II,
    linear_inclusion,
    pullback_two_form,
    random_embedding,
    random_normal_pi,
    smc,
)
from symcurv.symplin import standard_form
from symcurv.tensor import Tensor, einsum

PAIRS = [(1, 2), (1, 3), (2, 3)]

# q = x1^2 + 2 x1 x2 - 3 x2^2
Q_TERMS = {(2, 0): 1, (1, 1): 2, (0, 2): -3}


def test_linear_inclusion_pulls_back_standard_form():
    w = pullback_two_form(linear_inclusion(1, 2))
    assert w[0][1] == 1 and w[1][0] == -1
    assert w[0][0] == 0 and w[0][1].coeffs == {(0, 0): 1}


def test_graph_with_linear_correction():
    # (x1, x2, q, x1): omega_12 = 1 - d2 q
    phi = embedding_from_terms(1, 2, {0: {(1, 0): 1}, 1: {(0, 1): 1}, 2: Q_TERMS, 3: {(1, 0): 1}})
    w = pullback_two_form(phi)
    assert w[0][1].coeffs == {(0, 0): 1, (1, 0): -2, (0, 1): 6}
    assert w[1][0] == -w[0][1]


def test_graph_second_fundamental_form_is_hessian():
    phi = embedding_from_terms(1, 2, {0: {(1, 0): 1}, 1: {(0, 1): 1}, 2: Q_TERMS})
    data = induced_connection_and_II(phi)
    assert np.all(data.gamma0 == 0)
    hess = rq.qarray([[2, 2], [2, -6]])
    assert np.all(data.pi0[:, :, 2] == hess)
    assert np.all(data.pi0[:, :, [0, 1, 3]] == 0)


def test_linear_inclusion_is_totally_geodesic():
    data = induced_connection_and_II(linear_inclusion(2, 3))
    assert np.all(data.gamma0 == 0) and np.all(data.pi0 == 0)
    t = smc(data)
    assert t.pi4.is_zero() and t.smc2.is_zero() and t.smc4.is_zero()
    rep = gauss_check(linear_inclusion(2, 3))
    assert rep.gauss_residual_zero and rep.ricci_is_minus_smc


def test_degenerate_pullback_raises():
    # x1 -> e1, x2 -> e3: an isotropic plane in the interleaved form
    phi = embedding_from_terms(1, 2, {0: {(1, 0): 1}, 2: {(0, 1): 1}})
    with pytest.raises(EmbeddingError):
        pullback_two_form(phi)


def test_embedding_validation():
    with pytest.raises(EmbeddingError):
        embedding_from_terms(3, 2, {})
    with pytest.raises(EmbeddingError):
        PolyEmbedding(1, 1, linear_inclusion(1, 2).components)


@pytest.mark.parametrize("k, n", PAIRS)
@pytest.mark.parametrize("tangential", [False, True])
def test_gauss_on_random_embeddings(k, n, tangential):
    for seed in range(6):
        phi = random_embedding(k, n, seed, tangential=tangential)
        rep = gauss_check(phi, planes=3, seed=seed)
        assert rep.ind_zero and rep.gauss_residual_zero and rep.ricci_is_minus_smc
        assert rep.torsion_free and rep.preserves_omega
        assert all(rep.symmetries.values()), rep.symmetries
        assert rep.hereditary_derived_holds
        assert rep.fitted.get("normalized_pi4_coefficient") in (None, 1)
        if k == 1:
            assert rep.smc4_zero


def test_tangential_mode_has_christoffels():
    data = induced_connection_and_II(random_embedding(1, 2, 0, tangential=True))
    assert np.any(data.gamma0 != 0)


def test_written_hereditary_form_fails():
    rep = gauss_check(random_embedding(2, 3, 0), planes=3)
    assert not rep.hereditary_written_holds


def test_trace_of_pi4_is_twice_smc():
    data = induced_connection_and_II(random_embedding(2, 3, 4, tangential=True))
    t = smc(data)
    w = data.domain_form
    assert einsum("pq,pqij->ij", w.inverse, t.pi4) == t.smc2 * 2


def _tangent(rows, n):
    out = rq.qzeros((len(rows), 2 * n))
    for i, a in enumerate(rows):
        out[i, a] = Q(1)
    return out


def test_cricsub_flat_ambient_and_zero_pi():
    ambient = standard_form(3, "block")
    tangent = _tangent([0, 1, 3, 4], 3)
    zero4 = Tensor.zeros(6, "dddd")
    zero2 = Tensor.zeros(6, "dd")
    pi = random_normal_pi(tangent, ambient, rq.make_rng("flat"))
    rep = cricsub_pointwise(3, 2, zero4, zero2, tangent, pi, ambient)
    assert rep.ind_zero and rep.holds  # reduces to ric-bar = -smc
    m = make_kahler_model(3, 1, -1)
    d = CurvatureData(m.connection())
    rep = cricsub_pointwise(3, 2, m.Rl, d.ric, tangent, rq.qzeros((4, 4, 6)), m.omega)
    assert rep.holds and not rep.lhs.is_zero()


@pytest.mark.parametrize("c", [1, -1])
@pytest.mark.parametrize("eps", [-1, 1])
def test_cricsub_model_ambient(c, eps):
    m = make_kahler_model(3, c, eps)
    d = CurvatureData(m.connection())
    tangent = _tangent([0, 1, 3, 4], 3)
    rng = rq.make_rng("cricsub:%s:%s" % (c, eps))
    for _ in range(3):
        pi = random_normal_pi(tangent, m.omega, rng)
        rep = cricsub_pointwise(3, 2, m.Rl, d.ric, tangent, pi, m.omega)
        assert rep.ind_zero and rep.holds


def test_cricsub_checks_dimensions():
    m = make_kahler_model(3, 1, -1)
    with pytest.raises(EmbeddingError):
        cricsub_pointwise(3, 2, m.Rl, m.g, _tangent([0, 3], 3), rq.qzeros((2, 2, 6)), m.omega)
