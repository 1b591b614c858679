import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from symcurv.jets import JetPoly, jet_matrix_inverse, monomials
from symcurv.rational import Q

X = sympy.symbols("x1 x2")
coeff = st.fractions(min_value=-3, max_value=3, max_denominator=4)
polys = st.dictionaries(st.sampled_from(monomials(2, 3)), coeff, max_size=6)


def to_sympy(p):
    return sum(
        (sympy.Rational(str(c)) * X[0] ** e[0] * X[1] ** e[1] for e, c in p.coeffs.items()),
        sympy.Integer(0),
    )


def truncate_sympy(expr, bound):
    poly = sympy.Poly(sympy.expand(expr), *X)
    return sum(
        (c * X[0] ** a * X[1] ** b for (a, b), c in poly.terms() if a + b <= bound),
        sympy.Integer(0),
    )


def test_monomial_count():
    assert len(monomials(2, 3)) == 10
    assert monomials(2, 1) == [(0, 0), (1, 0), (0, 1)]


@given(polys, polys)
@settings(max_examples=40, deadline=None)
def test_product_matches_sympy(a, b):
    p, q = JetPoly(2, 3, a), JetPoly(2, 3, b)
    got = to_sympy(p * q)
    want = truncate_sympy(to_sympy(p) * to_sympy(q), 3)
    assert sympy.expand(got - want) == 0


@given(polys)
@settings(max_examples=30, deadline=None)
def test_derivative_matches_sympy(a):
    p = JetPoly(2, 3, a)
    for i in range(2):
        d = p.derivative(i)
        assert d.bound == 2
        assert sympy.expand(to_sympy(d) - sympy.diff(to_sympy(p), X[i])) == 0


def test_truncation_drops_high_terms():
    x = JetPoly.variable(2, 2, 0)
    assert (x * x * x).is_zero()
    assert (x + 1).value() == 1


def test_matrix_inverse_neumann():
    x, y = JetPoly.variable(2, 3, 0), JetPoly.variable(2, 3, 1)
    one = JetPoly.constant(2, 3, 1)
    M = [[one + x, y * 2], [x * y, one * 3 - y]]
    inv = jet_matrix_inverse(M, 3)
    for i in range(2):
        for j in range(2):
            entry = sum((M[i][p] * inv[p][j] for p in range(2)), JetPoly(2, 3))
            assert entry == (1 if i == j else 0)
    assert inv[1][1].value() == Q(1, 3)
