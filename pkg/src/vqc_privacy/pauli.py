"""Sparse algebra over n-qubit Pauli strings.

A Pauli string is stored in symplectic form as two integer bitmasks. Qubit
``q`` (leftmost character of the text form is qubit 0) maps to bit
``n - 1 - q`` so that the masks line up with computational-basis indices of
the dense matrices produced by :func:`to_dense`.

The bracket used throughout the package is the Hermitian-representative
convention ``bracket(a, b) = -i [a, b]``, which keeps every coefficient real.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .errors import DenseCapExceeded, QubitMismatch

PRUNE_TOL = 1e-12
DENSE_CAP = 12

_PHASES = (1, 1j, -1, -1j)
_CHAR = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}
_BITS = {v: k for k, v in _CHAR.items()}


@dataclass(frozen=True, order=True)
class PauliString:
    """Canonical Pauli string ``prod_j i^{x_j z_j} X^{x_j} Z^{z_j}``."""

    n_qubits: int
    x_mask: int
    z_mask: int

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be positive")
        full = (1 << self.n_qubits) - 1
        if self.x_mask & ~full or self.z_mask & ~full:
            raise ValueError("mask wider than n_qubits")

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        n = len(label)
        x = z = 0
        for q, ch in enumerate(label.upper()):
            try:
                xb, zb = _BITS[ch]
            except KeyError:
                raise ValueError(f"invalid Pauli character {ch!r}") from None
            bit = 1 << (n - 1 - q)
            if xb:
                x |= bit
            if zb:
                z |= bit
        return cls(n, x, z)

    @classmethod
    def identity(cls, n_qubits: int) -> "PauliString":
        return cls(n_qubits, 0, 0)

    @classmethod
    def single(cls, n_qubits: int, qubit: int, axis: str) -> "PauliString":
        """The string with ``axis`` on ``qubit`` and identity elsewhere."""
        label = ["I"] * n_qubits
        label[qubit] = axis
        return cls.from_label("".join(label))

    def label(self) -> str:
        out = []
        for q in range(self.n_qubits):
            bit = 1 << (self.n_qubits - 1 - q)
            out.append(_CHAR[(int(bool(self.x_mask & bit)), int(bool(self.z_mask & bit)))])
        return "".join(out)

    def __str__(self) -> str:
        return self.label()

    @property
    def is_identity(self) -> bool:
        return self.x_mask == 0 and self.z_mask == 0

    def support(self) -> tuple[int, ...]:
        """Qubits on which the string acts non-trivially."""
        m = self.x_mask | self.z_mask
        return tuple(q for q in range(self.n_qubits) if m >> (self.n_qubits - 1 - q) & 1)

    @property
    def weight(self) -> int:
        return (self.x_mask | self.z_mask).bit_count()

    def commutes_with(self, other: "PauliString") -> bool:
        _check(self, other)
        return ((self.x_mask & other.z_mask).bit_count() + (self.z_mask & other.x_mask).bit_count()) % 2 == 0

    def restrict(self, qubits: Iterable[int]) -> "PauliString":
        """Sub-string on ``qubits`` (in the given order)."""
        qs = list(qubits)
        return PauliString.from_label("".join(self.label()[q] for q in qs))


def _check(a, b):
    if a.n_qubits != b.n_qubits:
        raise QubitMismatch(f"{a.n_qubits} vs {b.n_qubits} qubits")


def multiply(p: PauliString, q: PauliString) -> tuple[complex, PauliString]:
    """Return ``(phase, r)`` with ``phase * r == p @ q`` exactly."""
    _check(p, q)
    x = p.x_mask ^ q.x_mask
    z = p.z_mask ^ q.z_mask
    k = (
        (p.x_mask & p.z_mask).bit_count()
        + (q.x_mask & q.z_mask).bit_count()
        + 2 * (p.z_mask & q.x_mask).bit_count()
        - (x & z).bit_count()
    )
    return _PHASES[k % 4], PauliString(p.n_qubits, x, z)


class HermitianPauliSum:
    """Real linear combination of Pauli strings (hence Hermitian).

    Instances are treated as immutable; arithmetic returns new objects and
    coefficients with magnitude below ``PRUNE_TOL`` are dropped.
    """

    __slots__ = ("n_qubits", "_terms", "_hash")

    def __init__(self, n_qubits: int, terms: Mapping[PauliString, float] | None = None, *, prune: bool = True):
        if n_qubits < 1:
            raise ValueError("n_qubits must be positive")
        clean = {}
        for p, c in (terms or {}).items():
            if p.n_qubits != n_qubits:
                raise QubitMismatch(f"term {p} does not act on {n_qubits} qubits")
            c = float(np.real(c)) if not isinstance(c, float) else c
            if not prune or abs(c) > PRUNE_TOL:
                clean[p] = c
        self.n_qubits = n_qubits
        self._terms = clean
        self._hash = None

    # construction -----------------------------------------------------
    @classmethod
    def from_pauli(cls, p: PauliString | str, coeff: float = 1.0) -> "HermitianPauliSum":
        if isinstance(p, str):
            p = PauliString.from_label(p)
        return cls(p.n_qubits, {p: coeff})

    @classmethod
    def from_terms(cls, pairs: Iterable[tuple[str | PauliString, float]], n_qubits: int | None = None):
        acc: dict[PauliString, float] = {}
        for s, c in pairs:
            p = PauliString.from_label(s) if isinstance(s, str) else s
            n_qubits = n_qubits or p.n_qubits
            acc[p] = acc.get(p, 0.0) + float(c)
        if n_qubits is None:
            raise ValueError("empty sum needs n_qubits")
        return cls(n_qubits, acc)

    @classmethod
    def zero(cls, n_qubits: int) -> "HermitianPauliSum":
        return cls(n_qubits, {})

    # mapping-ish access -----------------------------------------------
    @property
    def terms(self) -> Mapping[PauliString, float]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coeff(self, p: PauliString) -> float:
        return self._terms.get(p, 0.0)

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def support(self) -> tuple[int, ...]:
        qs = set()
        for p in self._terms:
            qs.update(p.support())
        return tuple(sorted(qs))

    # arithmetic -------------------------------------------------------
    def __add__(self, other: "HermitianPauliSum") -> "HermitianPauliSum":
        _check(self, other)
        acc = dict(self._terms)
        for p, c in other._terms.items():
            acc[p] = acc.get(p, 0.0) + c
        return HermitianPauliSum(self.n_qubits, acc)

    def __neg__(self):
        return self * -1.0

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, s: float) -> "HermitianPauliSum":
        s = float(s)
        return HermitianPauliSum(self.n_qubits, {p: c * s for p, c in self._terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, s: float):
        return self * (1.0 / s)

    def norm(self) -> float:
        """Norm induced by :func:`inner`, i.e. sqrt(Tr(a^2) / 2^n)."""
        return float(np.sqrt(sum(c * c for c in self._terms.values())))

    def __eq__(self, other):
        if not isinstance(other, HermitianPauliSum):
            return NotImplemented
        return self.n_qubits == other.n_qubits and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n_qubits, frozenset(self._terms.items())))
        return self._hash

    def allclose(self, other: "HermitianPauliSum", atol: float = 1e-12) -> bool:
        return (self - other).max_abs_coeff() <= atol if self.n_qubits == other.n_qubits else False

    def max_abs_coeff(self) -> float:
        return max((abs(c) for c in self._terms.values()), default=0.0)

    def __repr__(self):
        if not self._terms:
            return f"HermitianPauliSum({self.n_qubits}, 0)"
        body = " + ".join(f"{c:.6g}*{p}" for p, c in sorted(self._terms.items()))
        return f"HermitianPauliSum({body})"

    # serialization ----------------------------------------------------
    def to_json_obj(self) -> list[dict]:
        return [{"string": p.label(), "coeff": c} for p, c in sorted(self._terms.items())]

    @classmethod
    def from_json_obj(cls, obj: list[dict], n_qubits: int | None = None) -> "HermitianPauliSum":
        if not obj and n_qubits is None:
            raise ValueError("empty sum needs n_qubits")
        return cls.from_terms(((t["string"], t["coeff"]) for t in obj), n_qubits=n_qubits)

    def dumps(self) -> str:
        return json.dumps(self.to_json_obj())


def as_sum(a) -> HermitianPauliSum:
    if isinstance(a, HermitianPauliSum):
        return a
    if isinstance(a, (PauliString, str)):
        return HermitianPauliSum.from_pauli(a)
    raise TypeError(f"cannot interpret {type(a).__name__} as a Pauli sum")


def bracket(a, b) -> HermitianPauliSum:
    """``-i [a, b]``; Hermitian whenever ``a`` and ``b`` are."""
    a, b = as_sum(a), as_sum(b)
    _check(a, b)
    acc: dict[PauliString, float] = {}
    for p, cp in a.items():
        for q, cq in b.items():
            if p.commutes_with(q):
                continue
            phase, r = multiply(p, q)
            # pq - qp = 2 * phase * r for anticommuting strings; phase is +-i
            val = (-1j * 2 * phase).real * cp * cq
            acc[r] = acc.get(r, 0.0) + val
    return HermitianPauliSum(a.n_qubits, acc)


def inner(a, b) -> float:
    """Normalized Frobenius inner product ``Tr(a b) / 2^n``."""
    a, b = as_sum(a), as_sum(b)
    _check(a, b)
    if len(a) > len(b):
        a, b = b, a
    return float(sum(c * b.coeff(p) for p, c in a.items()))


def pauli_matrix(p: PauliString) -> np.ndarray:
    """Dense matrix of a single Pauli string (qubit 0 is the leftmost factor)."""
    n = p.n_qubits
    if n > DENSE_CAP:
        raise DenseCapExceeded(f"{n} qubits exceeds dense cap {DENSE_CAP}")
    dim = 1 << n
    idx = np.arange(dim)
    sign = 1 - 2 * (np.bitwise_count(idx & p.z_mask) & 1).astype(np.int64)
    phase = 1j ** ((p.x_mask & p.z_mask).bit_count() % 4)
    # <b ^ x| P |b> = phase * (-1)^{|z & b|}
    mat = np.zeros((dim, dim), dtype=complex)
    mat[idx ^ p.x_mask, idx] = phase * sign
    return mat


def to_dense(a) -> np.ndarray:
    """Exact dense ``2^n x 2^n`` matrix of a Pauli sum."""
    a = as_sum(a)
    if a.n_qubits > DENSE_CAP:
        raise DenseCapExceeded(f"{a.n_qubits} qubits exceeds dense cap {DENSE_CAP}")
    dim = 1 << a.n_qubits
    out = np.zeros((dim, dim), dtype=complex)
    for p, c in a.items():
        out += c * pauli_matrix(p)
    return out


def restrict_sum(a: HermitianPauliSum, qubits: Iterable[int]) -> HermitianPauliSum:
    """Rewrite ``a`` on the sub-register ``qubits``; every term must be supported there."""
    qs = list(qubits)
    allowed = set(qs)
    acc = {}
    for p, c in a.items():
        if not set(p.support()) <= allowed:
            raise ValueError(f"term {p} not supported on qubits {qs}")
        acc[p.restrict(qs)] = c
    return HermitianPauliSum(len(qs), acc)


def dumps_sums(sums: Iterable[HermitianPauliSum]) -> str:
    return json.dumps([s.to_json_obj() for s in sums])
