"""Truncated multivariate polynomials over Q (jets at the origin)."""

import itertools

from .rational import ZERO, Q


def monomials(nvars, degree):
    """Exponent tuples of total degree <= ``degree``, graded then lexicographic."""
    out = []
    for d in range(degree + 1):
        for combo in itertools.combinations_with_replacement(range(nvars), d):
            e = [0] * nvars
            for v in combo:
                e[v] += 1
            out.append(tuple(e))
    return out


class JetPoly:
    """Polynomial in ``nvars`` variables known up to total degree ``bound``.

    Terms above the bound are discarded, so sums and products are those of
    the truncated ring; the derivative of a jet of order d is a jet of
    order d - 1.
    """

    __slots__ = ("nvars", "bound", "coeffs")

    def __init__(self, nvars, bound, coeffs=None):
        self.nvars = nvars
        self.bound = bound
        self.coeffs = {}
        for e, c in (coeffs or {}).items():
            e = tuple(e)
            if len(e) != nvars:
                raise ValueError("exponent %r does not have %d entries" % (e, nvars))
            c = Q(c)
            if c != 0 and sum(e) <= bound:
                self.coeffs[e] = c

    @classmethod
    def constant(cls, nvars, bound, value):
        return cls(nvars, bound, {(0,) * nvars: value})

    @classmethod
    def variable(cls, nvars, bound, i):
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, bound, {tuple(e): 1})

    def _coerce(self, other):
        if isinstance(other, JetPoly):
            if other.nvars != self.nvars:
                raise ValueError("jets in different numbers of variables")
            return other
        return JetPoly.constant(self.nvars, self.bound, other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, ZERO) + c
        return JetPoly(self.nvars, min(self.bound, other.bound), out)

    __radd__ = __add__

    def __neg__(self):
        return JetPoly(self.nvars, self.bound, {e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, JetPoly):
            c = Q(other)
            return JetPoly(self.nvars, self.bound, {e: v * c for e, v in self.coeffs.items()})
        other = self._coerce(other)
        bound = min(self.bound, other.bound)
        out = {}
        for e1, c1 in self.coeffs.items():
            d1 = sum(e1)
            for e2, c2 in other.coeffs.items():
                if d1 + sum(e2) > bound:
                    continue
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, ZERO) + c1 * c2
        return JetPoly(self.nvars, bound, out)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self * (1 / Q(c))

    def derivative(self, i):
        out = {}
        for e, c in self.coeffs.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                out[tuple(f)] = c * e[i]
        return JetPoly(self.nvars, self.bound - 1, out)

    def truncate(self, bound):
        return JetPoly(self.nvars, min(bound, self.bound), self.coeffs)

    def value(self):
        """Value at the origin."""
        return self.coeffs.get((0,) * self.nvars, ZERO)

    def coefficient(self, exponent):
        return self.coeffs.get(tuple(exponent), ZERO)

    def is_zero(self):
        return not self.coeffs

    def __eq__(self, other):
        if not isinstance(other, JetPoly):
            other = self._coerce(other)
        bound = min(self.bound, other.bound)
        return self.truncate(bound).coeffs == other.truncate(bound).coeffs

    __hash__ = None

    def __repr__(self):
        if not self.coeffs:
            return "JetPoly(0, bound=%d)" % self.bound
        terms = []
        for e in sorted(self.coeffs, key=lambda t: (sum(t), t)):
            mono = "*".join(
                "x%d" % (i + 1) if p == 1 else "x%d^%d" % (i + 1, p)
                for i, p in enumerate(e)
                if p
            )
            terms.append("%s%s" % (self.coeffs[e], "*" + mono if mono else ""))
        return "JetPoly(%s, bound=%d)" % (" + ".join(terms), self.bound)


def jet_matrix_inverse(M, bound):
    """Inverse of a square matrix of jets with invertible value at the origin.

    Writes M = M0 + N with N vanishing at the origin and sums the Neumann
    series M0^{-1} sum_s (-N M0^{-1})^s, which terminates after ``bound``
    terms in the truncated ring.
    """
    from . import rational as rq

    size = len(M)
    nvars = M[0][0].nvars
    M0 = rq.qarray([[M[i][j].value() for j in range(size)] for i in range(size)])
    inv0 = rq.inverse(M0)
    zero = JetPoly(nvars, bound)

    def const(v):
        return JetPoly.constant(nvars, bound, v)

    N = [[(M[i][j] - M0[i, j]).truncate(bound) for j in range(size)] for i in range(size)]

    def matmul(a, b):
        return [
            [sum((a[i][p] * b[p][j] for p in range(size)), zero) for j in range(size)]
            for i in range(size)
        ]

    inv0j = [[const(inv0[i, j]) for j in range(size)] for i in range(size)]
    step = [[-x for x in row] for row in matmul(N, inv0j)]  # -N M0^{-1}
    term = [[const(1 if i == j else 0) for j in range(size)] for i in range(size)]
    total = term
    for _ in range(bound):
        term = matmul(term, step)
        total = [[total[i][j] + term[i][j] for j in range(size)] for i in range(size)]
    return matmul(inv0j, total)
