import itertools

import numpy as np
import pytest

from symcurv import rational as rq
from symcurv.curvature import ricci
from symcurv.liealg import (
    ConnectionError_,
    LieAlgebraError,
    abelian,
    builtin,
    canonical_connection,
    covariant_derivative,
    curvature,
    curvature_from_second_derivatives,
    difference_lowered,
    flat_connection,
    from_brackets,
    half_bracket_connection,
    is_nilpotent,
    is_solvable,
    random_symplectic_connection,
    random_symplectic_lie_algebra,
    solvable_ricci_oracle,
    special_elements,
    symmetrize_connection,
    symplectic_adjoint,
    symplectic_adjoint_tensor,
    validate,
)
from symcurv.symplin import standard_form
from symcurv.tensor import Tensor, contract, einsum, sym_part

E = rq.qeye(4)


def test_builtins_validate():
    aff = validate(builtin("aff1c"))
    assert aff.valid and aff.exact and aff.solvable and not aff.nilpotent
    r40 = validate(builtin("r40"))
    assert r40.valid and r40.cocycle and not r40.exact
    assert r40.solvable and not r40.nilpotent


def test_builtin_brackets():
    aff = builtin("aff1c")
    assert np.all(aff.bracket(E[0], E[2]) == E[2])
    assert np.all(aff.bracket(E[1], E[2]) == E[3])
    r40 = builtin("r40")
    assert np.all(r40.bracket(E[3], E[0]) == E[0])
    assert np.all(r40.bracket(E[3], E[2]) == E[1])


def test_unknown_builtin():
    with pytest.raises(KeyError):
        builtin("x")
    with pytest.raises(KeyError):
        builtin("abelian3")
    assert builtin("abelian6").dim == 6


def test_broken_jacobi_names_triple():
    alg = from_brackets(4, [(0, 1, 2, 1), (1, 2, 3, 1), (0, 3, 1, 1)], standard_form(2).matrix)
    rep = validate(alg)
    assert not rep.jacobi
    with pytest.raises(LieAlgebraError) as info:
        rep.raise_for_errors()
    assert info.value.axiom == "jacobi"
    assert info.value.witness == (0, 1, 2)


def test_nonclosed_omega_detected():
    # [e1, e2] = e3 with Omega = e^1^e^2 + e^3^e^4 is not closed
    alg = from_brackets(4, [(0, 1, 2, 1)], standard_form(2, "interleaved").matrix)
    rep = validate(alg)
    assert rep.jacobi and not rep.cocycle
    assert rep.failures[0][0] == "cocycle"


def test_explicit_nonantisymmetric_entries_flagged():
    alg = from_brackets(2, [(0, 1, 1, 1), (1, 0, 1, 1)], standard_form(1).matrix)
    assert not validate(alg).antisymmetric


@pytest.mark.parametrize("dim", [2, 4, 6])
@pytest.mark.parametrize("seed", range(5))
def test_adjoint_defining_relation(dim, seed):
    alg = random_symplectic_lie_algebra(dim, seed)
    assert validate(alg).valid
    S = symplectic_adjoint_tensor(alg).data
    W = alg.omega.matrix.data
    c = alg.structure.data
    # Omega(ad(e_i)* e_j, e_k) = -Omega(e_j, ad(e_i) e_k)
    lhs = np.einsum("ijp,pk->ijk", S, W)
    rhs = -np.einsum("ikp,jp->ijk", c, W)
    assert np.all(lhs == rhs)


def test_adjoint_of_aff_matches_formula():
    alg = builtin("aff1c")
    rng = rq.make_rng("affstar")
    for _ in range(5):
        x, y = rq.random_vector(rng, 4), rq.random_vector(rng, 4)
        got = rq.normalize(y.dot(symplectic_adjoint(alg, x).data))
        want = rq.qarray([
            x[1] * y[1] - x[0] * y[0],
            -(x[0] * y[1] + x[1] * y[0]),
            x[3] * y[1] - x[2] * y[0],
            -(x[3] * y[0] + x[2] * y[1]),
        ])
        assert np.all(got == want)


def test_abelian_connection_is_zero():
    alg = abelian(4)
    assert symplectic_adjoint(alg, E[0]).is_zero()
    assert canonical_connection(alg).coefficients.is_zero()


def test_r40_canonical_formula():
    conn = canonical_connection(builtin("r40"))
    rng = rq.make_rng("r40sad")
    for _ in range(5):
        x, y = rq.random_vector(rng, 4), rq.random_vector(rng, 4)
        want = rq.qarray([
            x[3] * y[0] - 2 * x[0] * y[3] - x[2] * y[2],
            2 * x[3] * y[2] - x[2] * y[3],
            0,
            -x[3] * y[3],
        ])
        assert np.all(3 * conn.apply(x, y) == want)


@pytest.mark.parametrize("name", ["aff1c", "r40"])
def test_half_bracket_symmetrizes_to_canonical(name):
    alg = builtin(name)
    sym = symmetrize_connection(alg, half_bracket_connection(alg))
    assert sym.coefficients == canonical_connection(alg).coefficients


def test_symmetrize_keeps_symplectic_input():
    alg = builtin("r40")
    conn = random_symplectic_connection(alg, 3)
    assert symmetrize_connection(alg, conn).coefficients == conn.coefficients


def test_symmetrize_random_torsion_free_input():
    alg = builtin("r40")
    rng = rq.make_rng("tf")
    # half bracket plus a symmetric (in i, j) perturbation is torsion-free
    pert = rq.qzeros((4, 4, 4))
    for i, j, k in itertools.product(range(4), repeat=3):
        if i <= j:
            pert[i, j, k] = pert[j, i, k] = rq.random_rational(rng)
    abar = alg.structure / 2 + Tensor(pert, "ddu")
    out = symmetrize_connection(alg, abar)
    assert out.is_torsion_free() and out.is_symplectic()


def test_symmetrize_rejects_torsion():
    alg = builtin("aff1c")
    with pytest.raises(ConnectionError_):
        symmetrize_connection(alg, alg.structure)


@pytest.mark.parametrize("dim", [2, 4, 6])
def test_random_connections_are_symplectic(dim):
    for seed in range(1, 51):
        alg = random_symplectic_lie_algebra(dim, seed)
        conn = random_symplectic_connection(alg, seed)
        assert conn.is_torsion_free(), seed
        assert conn.is_symplectic(), seed
        pi = difference_lowered(conn, canonical_connection(alg))
        assert sym_part(pi, [0, 1, 2]) == pi


def test_zero_perturbation_is_canonical():
    alg = builtin("aff1c")
    conn = random_symplectic_connection(alg, 0, scale=0)
    assert conn.coefficients == canonical_connection(alg).coefficients


def test_covariant_derivative_leibniz():
    conn = random_symplectic_connection(builtin("aff1c"), 5)
    rng = rq.make_rng("leibniz")
    a = Tensor(rq.random_vector(rng, 4), "d")
    b = Tensor(rq.random_vector(rng, 4), "u")
    prod = einsum("i,j->ij", a, b)
    lhs = covariant_derivative(conn, prod)
    rhs = einsum("ai,j->aij", covariant_derivative(conn, a), b) + einsum(
        "i,aj->aij", a, covariant_derivative(conn, b)
    )
    assert lhs == rhs
    # a_i b^i is constant, so the traced derivative vanishes
    assert contract(lhs, 2, 1).is_zero()


@pytest.mark.parametrize("seed", range(5))
def test_curvature_two_ways(seed):
    alg = random_symplectic_lie_algebra(4, seed)
    conn = random_symplectic_connection(alg, seed)
    assert curvature(conn) == curvature_from_second_derivatives(conn)


def test_flat_connection():
    conn = flat_connection(6)
    assert curvature(conn).is_zero()
    assert conn.is_symplectic() and conn.is_torsion_free()


def test_special_elements():
    aff = special_elements(builtin("aff1c"))
    assert np.all(aff.ell == -2 * E[3]) and not aff.unimodular and aff.self_adjoint
    r40 = special_elements(builtin("r40"))
    assert np.all(r40.ell == E[0]) and r40.self_adjoint
    ab = special_elements(abelian(4))
    assert ab.unimodular and ab.nilpotent


@pytest.mark.parametrize("seed", range(6))
def test_ell_is_self_adjoint(seed):
    assert special_elements(random_symplectic_lie_algebra(4, seed)).self_adjoint


@pytest.mark.parametrize("name", ["aff1c", "r40"])
def test_solvable_ricci_oracle(name):
    alg = builtin(name)
    assert solvable_ricci_oracle(alg) == ricci(curvature(canonical_connection(alg)))


def test_solvable_ricci_oracle_on_random_solvable():
    checked = 0
    for seed in range(12):
        alg = random_symplectic_lie_algebra(4, seed)
        if not is_solvable(alg):
            continue
        checked += 1
        assert solvable_ricci_oracle(alg) == ricci(curvature(canonical_connection(alg)))
    assert checked


def test_oracle_refuses_nonsolvable():
    # so(3) + R is not solvable; the oracle does not need a closed form
    alg = from_brackets(4, [(0, 1, 2, 1), (1, 2, 0, 1), (2, 0, 1, 1)], standard_form(2).matrix)
    assert not is_solvable(alg)
    with pytest.raises(LieAlgebraError):
        solvable_ricci_oracle(alg)
    assert solvable_ricci_oracle(abelian(4)).is_zero()
