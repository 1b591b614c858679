"""JSON input files and report rendering.

Algebra file::

    {"dim": 4,
     "brackets": [[i, j, k, "value"], ...],   # c_{ij}^k, 0-based indices
     "omega": [["0", "0", "0", "1"], ...]}     # 2n x 2n rational strings

Embedding file::

    {"k": 1, "n": 2,
     "components": [[[[1, 0], "1"]], [[[0, 1], "1"]], [[[2, 0], "1/2"]], []]}

Each component is a list of ``[exponent, value]`` monomials in the 2k domain
coordinates.  Indices in files are 0-based: index 0 is e1.
"""

import json

import numpy as np

from . import rational as rq
from .jets import JetPoly
from .liealg import LieAlgebraError, from_brackets
from .rational import Q
from .submanifold import DEGREE, EmbeddingError, PolyEmbedding
from .symplin import SymplecticError
from .tensor import Tensor

SCHEMA = 1


class ParseError(ValueError):
    pass


def scalar(value, where):
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise ParseError("%s: expected a rational string or integer, got %r" % (where, value))
    try:
        return Q(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError("%s: bad rational %r (%s)" % (where, value, exc)) from None


def load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError("cannot read %s: %s" % (path, exc)) from None
    except json.JSONDecodeError as exc:
        raise ParseError("%s is not valid JSON: %s" % (path, exc)) from None


def _index(value, dim, where):
    if isinstance(value, bool) or not isinstance(value, int) or not 0 <= value < dim:
        raise ParseError("%s: index %r out of range 0..%d" % (where, value, dim - 1))
    return value


def parse_algebra(doc, name=""):
    """Algebra from a decoded JSON document.

    Shape problems raise :class:`ParseError`; a degenerate or
    non-antisymmetric omega raises :class:`LieAlgebraError` (a failed axiom,
    not a malformed file).
    """
    if not isinstance(doc, dict):
        raise ParseError("algebra file must hold a JSON object")
    for key in ("dim", "brackets", "omega"):
        if key not in doc:
            raise ParseError("missing key %r" % key)
    dim = doc["dim"]
    if isinstance(dim, bool) or not isinstance(dim, int) or dim <= 0:
        raise ParseError("dim must be a positive integer")
    if dim % 2:
        raise ParseError("dim must be even, got %d" % dim)
    if not isinstance(doc["brackets"], list):
        raise ParseError("brackets must be a list")
    entries = []
    for n, entry in enumerate(doc["brackets"]):
        where = "brackets[%d]" % n
        if not isinstance(entry, list) or len(entry) != 4:
            raise ParseError("%s: expected [i, j, k, value]" % where)
        i, j, k = (_index(v, dim, where) for v in entry[:3])
        entries.append((i, j, k, scalar(entry[3], where)))
    omega = doc["omega"]
    if not isinstance(omega, list) or len(omega) != dim or any(
        not isinstance(row, list) or len(row) != dim for row in omega
    ):
        raise ParseError("omega must be a %d x %d matrix" % (dim, dim))
    matrix = rq.qarray([[scalar(v, "omega[%d][%d]" % (r, c)) for c, v in enumerate(row)] for r, row in enumerate(omega)])
    try:
        return from_brackets(dim, entries, matrix, name or str(doc.get("name", "")))
    except SymplecticError as exc:
        raise LieAlgebraError(str(exc), "nondegenerate") from None


def algebra_document(alg):
    c = alg.structure.data
    brackets = [
        [i, j, k, rq.to_str(c[i, j, k])]
        for i, j, k in zip(*np.nonzero(c != 0))
        if i < j
    ]
    return {
        "schema": SCHEMA,
        "name": alg.name,
        "dim": alg.dim,
        "brackets": [[int(i), int(j), int(k), v] for i, j, k, v in brackets],
        "omega": [[rq.to_str(v) for v in row] for row in alg.omega.matrix.data],
    }


def parse_embedding(doc):
    if not isinstance(doc, dict):
        raise ParseError("embedding file must hold a JSON object")
    for key in ("k", "n", "components"):
        if key not in doc:
            raise ParseError("missing key %r" % key)
    k, n = doc["k"], doc["n"]
    for label, v in (("k", k), ("n", n)):
        if isinstance(v, bool) or not isinstance(v, int) or v < 1:
            raise ParseError("%s must be a positive integer" % label)
    comps = doc["components"]
    if not isinstance(comps, list) or len(comps) != 2 * n:
        raise ParseError("components must be a list of %d polynomials" % (2 * n))
    polys = []
    for a, comp in enumerate(comps):
        if not isinstance(comp, list):
            raise ParseError("components[%d] must be a list of monomials" % a)
        coeffs = {}
        for m, mono in enumerate(comp):
            where = "components[%d][%d]" % (a, m)
            if not isinstance(mono, list) or len(mono) != 2 or not isinstance(mono[0], list):
                raise ParseError("%s: expected [exponent, value]" % where)
            exp = mono[0]
            if len(exp) != 2 * k or any(isinstance(p, bool) or not isinstance(p, int) or p < 0 for p in exp):
                raise ParseError("%s: exponent must list %d nonnegative integers" % (where, 2 * k))
            if sum(exp) > DEGREE:
                raise ParseError("%s: total degree above %d" % (where, DEGREE))
            e = tuple(exp)
            coeffs[e] = coeffs.get(e, rq.ZERO) + scalar(mono[1], where)
        polys.append(JetPoly(2 * k, DEGREE, coeffs))
    try:
        return PolyEmbedding(k, n, polys)
    except EmbeddingError as exc:
        raise ParseError(str(exc)) from None


def embedding_document(phi):
    comps = []
    for c in phi.components:
        comps.append([[list(e), rq.to_str(v)] for e, v in sorted(c.coeffs.items(), key=lambda t: (sum(t[0]), t[0]))])
    return {"schema": SCHEMA, "k": phi.k, "n": phi.n, "components": comps}


# -- rendering -------------------------------------------------------------------


def jsonable(v):
    """Rationals to strings, tensors to sparse ``[[index...], value]`` lists."""
    if isinstance(v, Tensor):
        return sparse(v)
    if isinstance(v, np.ndarray):
        return [jsonable(x) for x in v.tolist()] if v.dtype != object else [jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [jsonable(x) for x in v]
    if v is None or isinstance(v, (bool, str)):
        return v
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, float):
        return v
    return rq.to_str(Q(v))


def sparse(t):
    return [[list(idx), rq.to_str(x)] for idx, x in t.nonzero_items()]


def matrix(t):
    data = t.data if isinstance(t, Tensor) else t
    return [[rq.to_str(x) for x in row] for row in data]


def dumps(doc):
    out = dict(doc)
    out["schema"] = SCHEMA
    return json.dumps(jsonable(out), sort_keys=True, indent=2)
