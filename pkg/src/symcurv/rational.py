"""Exact rational scalars and small dense linear algebra over them.

Scalars are ``gmpy2.mpq`` values, which are always stored in reduced form
with a positive denominator.  Matrices are numpy object arrays of scalars.
"""

from fractions import Fraction
import random

import gmpy2
import numpy as np

mpq = gmpy2.mpq

ZERO = mpq(0)
ONE = mpq(1)


def Q(value, den=None):
    """Coerce ``value`` (int, str like ``"2/3"``, Fraction, mpq) to a scalar.

    ``Q(p, q)`` builds p/q directly.
    """
    if den is not None:
        return mpq(value, den)
    if isinstance(value, type(ZERO)):
        return value
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, str):
        return mpq(value.strip())
    if isinstance(value, float):
        raise TypeError("floats are not exact scalars: %r" % value)
    return mpq(value)


def qarray(values):
    """Convert a nested sequence to an object array of scalars."""
    arr = np.array(values, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    flat_in = arr.reshape(-1)
    flat_out = out.reshape(-1)
    for n, v in enumerate(flat_in):
        flat_out[n] = Q(v)
    return out


def qzeros(shape):
    out = np.empty(shape, dtype=object)
    out.fill(ZERO)
    return out


def qeye(n):
    out = qzeros((n, n))
    for i in range(n):
        out[i, i] = ONE
    return out


def normalize(arr):
    """Return ``arr`` with every entry coerced to mpq (einsum may leave ints)."""
    out = np.empty(arr.shape, dtype=object)
    flat_in = arr.reshape(-1)
    flat_out = out.reshape(-1)
    for n, v in enumerate(flat_in):
        flat_out[n] = v if type(v) is type(ZERO) else Q(v)
    return out


def to_str(x):
    return str(Q(x))


def rref(M):
    """Reduced row echelon form of ``M``.  Returns ``(R, pivot_columns)``."""
    R = np.array(M, dtype=object, copy=True)
    rows, cols = R.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = None
        for i in range(r, rows):
            if R[i, c] != 0:
                p = i
                break
        if p is None:
            continue
        if p != r:
            R[[r, p]] = R[[p, r]]
        piv = R[r, c]
        R[r] = [v / piv for v in R[r]]
        for i in range(rows):
            if i != r and R[i, c] != 0:
                f = R[i, c]
                R[i] = [a - f * b for a, b in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
    return R, pivots


def rank(M):
    M = np.asarray(M, dtype=object)
    if M.size == 0:
        return 0
    return len(rref(M)[1])


def inverse(M):
    """Exact inverse; raises ``ZeroDivisionError`` when ``M`` is singular."""
    M = np.asarray(M, dtype=object)
    n = M.shape[0]
    if M.shape != (n, n):
        raise ValueError("inverse needs a square matrix, got shape %s" % (M.shape,))
    aug = np.concatenate([M, qeye(n)], axis=1)
    R, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return R[:, n:]


def det(M):
    M = np.array(M, dtype=object, copy=True)
    n = M.shape[0]
    sign = ONE
    d = ONE
    for c in range(n):
        p = next((i for i in range(c, n) if M[i, c] != 0), None)
        if p is None:
            return ZERO
        if p != c:
            M[[c, p]] = M[[p, c]]
            sign = -sign
        d *= M[c, c]
        for i in range(c + 1, n):
            if M[i, c] != 0:
                f = M[i, c] / M[c, c]
                M[i] = [a - f * b for a, b in zip(M[i], M[c])]
    return sign * d


def nullspace(M):
    """Basis (list of 1-d arrays) of the right kernel of ``M``."""
    M = np.asarray(M, dtype=object)
    cols = M.shape[1]
    if M.shape[0] == 0:
        return [qeye(cols)[i] for i in range(cols)]
    R, pivots = rref(M)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = qzeros(cols)
        v[f] = ONE
        for r, p in enumerate(pivots):
            v[p] = -R[r, f]
        basis.append(v)
    return basis


def solve(M, b):
    """One exact solution ``x`` of ``M x = b`` or ``None`` if inconsistent."""
    M = np.asarray(M, dtype=object)
    b = np.asarray(b, dtype=object).reshape(-1, 1)
    cols = M.shape[1]
    R, pivots = rref(np.concatenate([M, b], axis=1))
    if cols in pivots:
        return None
    x = qzeros(cols)
    for r, p in enumerate(pivots):
        x[p] = R[r, cols]
    return x


def matmul(A, B):
    return normalize(np.dot(np.asarray(A, dtype=object), np.asarray(B, dtype=object)))


def random_rational(rng, bound=3, max_den=4):
    """Seeded rational ``p/q`` with ``q <= max_den`` and ``|p/q| <= bound``."""
    q = rng.randint(1, max_den)
    p = rng.randint(-bound * q, bound * q)
    return mpq(p, q)


def random_vector(rng, dim, bound=3, max_den=4):
    return qarray([random_rational(rng, bound, max_den) for _ in range(dim)])


def make_rng(seed):
    return random.Random(seed)
