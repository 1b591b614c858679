"""Dense exact tensors with per-slot variance.

A :class:`Tensor` stores its components in a numpy object array of
``gmpy2.mpq`` scalars together with a variance string such as ``"ddu"``
(``d`` = covariant/down slot, ``u`` = contravariant/up slot).  Components
are indexed from 0; basis vector ``e_1`` of the usual 1-based labelling is
index 0 here.

Index gymnastics follow the symplectic conventions

    X_i = X^p Omega_{pi},    X^i = Omega^{ip} X_p,    Omega^{ip} Omega_{pj} = -delta_j^i,

so that ``X_p Y^p = -X^p Y_p``.
"""

import itertools
from math import factorial

import numpy as np

from .rational import ONE, ZERO, Q, normalize, qarray, qzeros

UP = "u"
DOWN = "d"


class TensorError(ValueError):
    """Invalid slot or variance usage."""


class Tensor:
    __slots__ = ("data", "variance")

    def __init__(self, data, variance):
        data = np.asarray(data, dtype=object)
        variance = "".join(variance)
        if any(v not in (UP, DOWN) for v in variance):
            raise TensorError("variance must use 'u'/'d', got %r" % variance)
        if data.ndim != len(variance):
            raise TensorError(
                "rank %d does not match variance %r" % (data.ndim, variance)
            )
        if data.ndim and len(set(data.shape)) != 1:
            raise TensorError("all slots must share one dimension, got %s" % (data.shape,))
        self.data = normalize(data)
        self.variance = variance

    @classmethod
    def zeros(cls, dim, variance):
        return cls(qzeros((dim,) * len(variance)), variance)

    @classmethod
    def from_values(cls, values, variance):
        return cls(qarray(values), variance)

    @classmethod
    def delta(cls, dim):
        """The identity endomorphism ``delta_i^j``."""
        d = qzeros((dim, dim))
        for i in range(dim):
            d[i, i] = ONE
        return cls(d, "du")

    @classmethod
    def scalar(cls, value):
        return cls(np.array(Q(value), dtype=object), "")

    @property
    def rank(self):
        return len(self.variance)

    @property
    def dim(self):
        return self.data.shape[0] if self.rank else 0

    def __getitem__(self, idx):
        return self.data[idx]

    def item(self):
        if self.rank:
            raise TensorError("item() needs a rank-0 tensor")
        return self.data[()]

    def _check_same(self, other):
        if not isinstance(other, Tensor):
            raise TypeError("expected Tensor, got %s" % type(other).__name__)
        if other.variance != self.variance or other.data.shape != self.data.shape:
            raise TensorError(
                "shape/variance mismatch: %r%s vs %r%s"
                % (self.variance, self.data.shape, other.variance, other.data.shape)
            )

    def __add__(self, other):
        self._check_same(other)
        return Tensor(self.data + other.data, self.variance)

    def __sub__(self, other):
        self._check_same(other)
        return Tensor(self.data - other.data, self.variance)

    def __neg__(self):
        return Tensor(-self.data, self.variance)

    def __mul__(self, c):
        if isinstance(c, Tensor):
            return NotImplemented
        return Tensor(self.data * Q(c), self.variance)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return Tensor(self.data / Q(c), self.variance)

    def __eq__(self, other):
        if not isinstance(other, Tensor):
            return NotImplemented
        return (
            self.variance == other.variance
            and self.data.shape == other.data.shape
            and bool(np.all(self.data == other.data))
        )

    __hash__ = None

    def is_zero(self):
        return bool(np.all(self.data == 0))

    def max_abs(self):
        """Largest absolute component (exact); zero for the zero tensor."""
        if self.data.size == 0:
            return ZERO
        return max(abs(v) for v in self.data.reshape(-1))

    def permute(self, order):
        """Reorder slots: slot ``s`` of the result is slot ``order[s]`` of self."""
        order = list(order)
        if sorted(order) != list(range(self.rank)):
            raise TensorError("not a permutation of the slots: %r" % (order,))
        return Tensor(
            np.transpose(self.data, order), "".join(self.variance[s] for s in order)
        )

    def nonzero_items(self):
        """Sorted ``(index_tuple, value)`` pairs of nonzero components."""
        return [
            (idx, v) for idx, v in np.ndenumerate(self.data) if v != 0
        ]

    def to_float(self):
        return np.array(self.data.tolist(), dtype=float).reshape(self.data.shape)

    def __repr__(self):
        return "Tensor(dim=%d, variance=%r, nonzero=%d)" % (
            self.dim,
            self.variance,
            len(self.nonzero_items()),
        )


def tensor_product(a, b):
    return Tensor(np.multiply.outer(a.data, b.data), a.variance + b.variance)


def einsum(subscripts, *operands):
    """Variance-aware einsum over exact tensors.

    Every summed label must appear exactly once in an up slot and once in a
    down slot, which is the only contraction the index calculus permits.
    Free labels keep the variance of the slot they come from.
    """
    lhs, _, out = subscripts.replace(" ", "").partition("->")
    specs = lhs.split(",")
    if len(specs) != len(operands):
        raise TensorError("%d subscripts for %d operands" % (len(specs), len(operands)))
    seen = {}
    for spec, t in zip(specs, operands):
        if len(spec) != t.rank:
            raise TensorError("subscript %r does not fit rank %d" % (spec, t.rank))
        for label, var in zip(spec, t.variance):
            seen.setdefault(label, []).append(var)
    for label, kinds in seen.items():
        if label in out:
            if len(kinds) != 1:
                raise TensorError("free label %r repeated" % label)
        elif sorted(kinds) != [DOWN, UP]:
            raise TensorError(
                "label %r contracts variances %r; need one up and one down" % (label, kinds)
            )
    variance = "".join(seen[label][0] for label in out)
    data = np.einsum(subscripts, *[t.data for t in operands])
    return Tensor(np.asarray(data, dtype=object), variance)


def contract(t, up_slot, down_slot):
    """Trace slot ``up_slot`` (up) against ``down_slot`` (down)."""
    for s in (up_slot, down_slot):
        if not 0 <= s < t.rank:
            raise TensorError("slot %d out of range for rank %d" % (s, t.rank))
    if up_slot == down_slot:
        raise TensorError("cannot contract a slot with itself")
    if t.variance[up_slot] != UP or t.variance[down_slot] != DOWN:
        raise TensorError(
            "contract needs (up, down) slots, got (%s, %s)"
            % (t.variance[up_slot], t.variance[down_slot])
        )
    data = np.trace(t.data, axis1=up_slot, axis2=down_slot)
    variance = "".join(
        v for s, v in enumerate(t.variance) if s not in (up_slot, down_slot)
    )
    return Tensor(np.asarray(data, dtype=object), variance)


def sym_part(t, slots, mode="symmetric"):
    """Average of ``t`` over permutations of ``slots`` (signed if antisymmetric)."""
    slots = list(slots)
    if len(set(slots)) != len(slots):
        raise TensorError("repeated slot in %r" % (slots,))
    for s in slots:
        if not 0 <= s < t.rank:
            raise TensorError("slot %d out of range for rank %d" % (s, t.rank))
    if len({t.variance[s] for s in slots}) > 1:
        raise TensorError("cannot symmetrize slots of mixed variance")
    if mode not in ("symmetric", "antisymmetric"):
        raise TensorError("mode must be 'symmetric' or 'antisymmetric'")
    if len(slots) < 2:
        return t
    total = None
    for perm in itertools.permutations(range(len(slots))):
        order = list(range(t.rank))
        for a, b in zip(slots, perm):
            order[a] = slots[b]
        term = np.transpose(t.data, order)
        if mode == "antisymmetric" and _parity(perm):
            term = -term
        total = term if total is None else total + term
    return Tensor(total / factorial(len(slots)), t.variance)


def _parity(perm):
    perm = list(perm)
    odd = False
    for i in range(len(perm)):
        while perm[i] != i:
            j = perm[i]
            perm[i], perm[j] = perm[j], perm[i]
            odd = not odd
    return odd


def flip_index(t, slot, direction, omega):
    """Raise or lower one slot with a symplectic form, keeping slot position.

    ``omega`` is either a :class:`~symcurv.symplin.SymplecticForm` or a
    rank-2 ``dd`` tensor.  Lowering uses ``T_..i.. = T^..p.. Omega_pi``;
    raising uses ``T^..i.. = Omega^ip T_..p..``.
    """
    from .symplin import as_symplectic_form

    form = as_symplectic_form(omega)
    if not 0 <= slot < t.rank:
        raise TensorError("slot %d out of range for rank %d" % (slot, t.rank))
    kind = t.variance[slot]
    if direction == "lower":
        if kind != UP:
            raise TensorError("slot %d is already down" % slot)
        # contract slot with first index of Omega_{pi}; new index lands last
        data = np.tensordot(t.data, form.matrix.data, axes=([slot], [0]))
    elif direction == "raise":
        if kind != DOWN:
            raise TensorError("slot %d is already up" % slot)
        data = np.tensordot(t.data, form.inverse.data, axes=([slot], [1]))
    else:
        raise TensorError("direction must be 'raise' or 'lower'")
    data = np.moveaxis(data, -1, slot)
    variance = t.variance[:slot] + (DOWN if kind == UP else UP) + t.variance[slot + 1:]
    return Tensor(np.asarray(data, dtype=object), variance)


def vector(values):
    return Tensor(qarray(values), "u")


def covector(values):
    return Tensor(qarray(values), "d")


def basis_vector(dim, i):
    v = qzeros(dim)
    v[i] = ONE
    return Tensor(v, "u")


def basis_covector(dim, i):
    v = qzeros(dim)
    v[i] = ONE
    return Tensor(v, "d")


def evaluate(t, *vectors):
    """Feed vectors into the leading down slots of ``t`` (in order)."""
    out = t.data
    for v in vectors:
        vec = v.data if isinstance(v, Tensor) else np.asarray(v, dtype=object)
        out = np.tensordot(vec, out, axes=([0], [0]))
    if isinstance(out, np.ndarray) and out.ndim:
        return Tensor(out, t.variance[len(vectors):])
    return Q(out) if not isinstance(out, np.ndarray) else Q(out[()])


def wedge(a, b):
    """``a (x) b - b (x) a`` for one-forms (no 1/2 normalization)."""
    return tensor_product(a, b) - tensor_product(b, a)
