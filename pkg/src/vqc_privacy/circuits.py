"""Circuit description for encoding maps ``V(x)`` and ansatze ``U(theta)``.

Every gate is ``exp(-i * angle * generator)``. Pauli rotations use the
generator ``P / 2`` so that ``R_P(phi) = exp(-i phi P / 2)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .errors import DenseCapExceeded, DimensionMismatch
from .pauli import DENSE_CAP, HermitianPauliSum, PauliString


# -- generators -----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class DenseHermitian:
    """Explicit Hermitian matrix acting on ``qubits`` (first listed = most significant)."""

    qubits: tuple[int, ...]
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        dim = 1 << len(self.qubits)
        if m.shape != (dim, dim):
            raise ValueError(f"matrix shape {m.shape} does not match {len(self.qubits)} qubits")
        if not np.allclose(m, m.conj().T, atol=1e-10):
            raise ValueError("matrix is not Hermitian")
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        object.__setattr__(self, "matrix", m)

    def __eq__(self, other):
        return (
            isinstance(other, DenseHermitian)
            and self.qubits == other.qubits
            and np.array_equal(self.matrix, other.matrix)
        )

    def __hash__(self):
        return hash((self.qubits, self.matrix.tobytes()))


Generator = Union[HermitianPauliSum, DenseHermitian]


# -- bindings -------------------------------------------------------------


@dataclass(frozen=True)
class Trainable:
    index: int


@dataclass(frozen=True)
class Input:
    index: int
    scale: float = 1.0


@dataclass(frozen=True)
class Fixed:
    angle: float


Binding = Union[Trainable, Input, Fixed]


@dataclass(frozen=True)
class Gate:
    generator: Generator
    binding: Binding

    def qubits(self) -> tuple[int, ...]:
        if isinstance(self.generator, DenseHermitian):
            return self.generator.qubits
        return self.generator.support()

    def angle(self, x=None, theta=None) -> float:
        b = self.binding
        if isinstance(b, Fixed):
            return b.angle
        if isinstance(b, Input):
            return b.scale * float(x[b.index])
        return float(theta[b.index])

    def spectrum(self) -> np.ndarray:
        """Eigenvalues of the generator (ascending)."""
        return _local_spectrum(self.generator)[0]

    def frequency_spread(self) -> float:
        """``lambda_max - lambda_min`` of the generator: top frequency per unit angle."""
        ev = self.spectrum()
        return float(ev[-1] - ev[0])


def local_generator_matrix(gen: Generator) -> tuple[tuple[int, ...], np.ndarray]:
    """Generator restricted to the qubits it touches."""
    if isinstance(gen, DenseHermitian):
        return gen.qubits, gen.matrix
    from .pauli import restrict_sum, to_dense

    qs = gen.support()
    if not qs:
        # pure identity: global phase only
        return (), np.array([[gen.coeff(PauliString.identity(gen.n_qubits))]], dtype=complex)
    return qs, to_dense(restrict_sum(gen, qs))


_SPEC_CACHE: dict = {}


def _local_spectrum(gen: Generator):
    key = gen
    hit = _SPEC_CACHE.get(key)
    if hit is None:
        qs, m = local_generator_matrix(gen)
        if len(qs) > DENSE_CAP:
            raise DenseCapExceeded(f"generator on {len(qs)} qubits exceeds dense cap")
        ev, vecs = np.linalg.eigh(m)
        hit = (ev, vecs, qs)
        if len(_SPEC_CACHE) > 4096:
            _SPEC_CACHE.clear()
        _SPEC_CACHE[key] = hit
    return hit


def gate_unitary(gate: Gate, angle: float) -> tuple[tuple[int, ...], np.ndarray]:
    ev, vecs, qs = _local_spectrum(gate.generator)
    return qs, (vecs * np.exp(-1j * angle * ev)) @ vecs.conj().T


# -- circuits -------------------------------------------------------------


@dataclass(frozen=True)
class Block:
    """One part of a separable encoding: qubits and the inputs they depend on."""

    qubits: tuple[int, ...]
    inputs: tuple[int, ...]


@dataclass(frozen=True)
class EncodingCircuit:
    n_qubits: int
    input_dim: int
    gates: tuple[Gate, ...]
    partition: tuple[Block, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            if isinstance(g.binding, Trainable):
                raise ValueError("encoding circuits cannot hold trainable gates")
            if isinstance(g.binding, Input) and not 0 <= g.binding.index < self.input_dim:
                raise ValueError(f"input index {g.binding.index} out of range")
            if max(g.qubits(), default=0) >= self.n_qubits:
                raise ValueError("gate acts outside the register")
        if self.partition is not None:
            object.__setattr__(self, "partition", tuple(self.partition))
            _check_partition(self)

    def block_of_input(self, j: int) -> Block:
        if self.partition is None:
            raise ValueError("circuit has no declared partition")
        for blk in self.partition:
            if j in blk.inputs:
                return blk
        raise ValueError(f"input {j} is not in any block")

    def gates_for_input(self, j: int) -> list[Gate]:
        return [g for g in self.gates if isinstance(g.binding, Input) and g.binding.index == j]

    def integer_scales(self, j: int) -> list[int] | None:
        """Scales binding input ``j`` in Pauli rotations, if all are integers."""
        out = []
        for g in self.gates_for_input(j):
            s = g.binding.scale * g.frequency_spread()
            if not np.isclose(s, round(s), atol=1e-9):
                return None
            out.append(abs(int(round(s))))
        return out

    def period(self, j: int) -> float | None:
        """Fundamental period of the state in ``x_j`` (``None`` if not periodic)."""
        scales = self.integer_scales(j)
        if not scales or not all(scales):
            return None if scales is None else 2 * np.pi
        g = int(np.gcd.reduce(scales))
        return 2 * np.pi / g

    def max_frequency(self, j: int) -> float:
        """Upper bound on the highest frequency of any expectation in ``x_j``."""
        return float(sum(abs(g.binding.scale) * g.frequency_spread() for g in self.gates_for_input(j)))


def _check_partition(enc: EncodingCircuit):
    seen: set[int] = set()
    for blk in enc.partition:
        if seen & set(blk.qubits):
            raise ValueError("partition blocks overlap")
        seen |= set(blk.qubits)
    for g in enc.gates:
        qs = set(g.qubits())
        blocks = [b for b in enc.partition if qs & set(b.qubits)]
        if len(blocks) > 1:
            raise ValueError("gate straddles partition blocks")
        if blocks and isinstance(g.binding, Input) and g.binding.index not in blocks[0].inputs:
            raise ValueError("gate binds an input outside its block")


@dataclass(frozen=True)
class AnsatzCircuit:
    n_qubits: int
    n_params: int
    gates: tuple[Gate, ...]

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            if not isinstance(g.binding, Trainable):
                raise ValueError("ansatz gates must be trainable")
            if not isinstance(g.generator, HermitianPauliSum):
                raise ValueError("ansatz generators must be Pauli sums")
            if not 0 <= g.binding.index < self.n_params:
                raise ValueError(f"parameter index {g.binding.index} out of range")

    @property
    def generators(self) -> list[HermitianPauliSum]:
        return [g.generator for g in self.gates]

    @classmethod
    def from_generators(cls, gens: Sequence[HermitianPauliSum]) -> "AnsatzCircuit":
        gens = list(gens)
        return cls(gens[0].n_qubits, len(gens), tuple(Gate(g, Trainable(k)) for k, g in enumerate(gens)))


def check_len(vec, size: int, what: str):
    if len(vec) != size:
        raise DimensionMismatch(f"{what} has length {len(vec)}, expected {size}")


# -- builders -------------------------------------------------------------


def _rot(n: int, q: int, axis: str) -> HermitianPauliSum:
    return HermitianPauliSum.from_pauli(PauliString.single(n, q, axis), 0.5)


def pauli_product_map(n: int, axis: str = "X") -> EncodingCircuit:
    """One ``R_axis(x_j)`` per qubit."""
    if n < 1:
        raise ValueError("n must be positive")
    axis = axis.upper()
    gates = tuple(Gate(_rot(n, j, axis), Input(j, 1.0)) for j in range(n))
    part = tuple(Block((j,), (j,)) for j in range(n))
    return EncodingCircuit(n, n, gates, part)


def fourier_tower_map(d: int, m: int, base: float = 5.0) -> EncodingCircuit:
    """Qubit ``(j, l)`` carries ``R_X(base**l * x_j)``, ``l = 0..m-1``."""
    if d < 1 or m < 1:
        raise ValueError("d and m must be positive")
    n = d * m
    gates = []
    for j in range(d):
        for l in range(m):
            gates.append(Gate(_rot(n, j * m + l, "X"), Input(j, float(base**l))))
    part = tuple(Block(tuple(range(j * m, (j + 1) * m)), (j,)) for j in range(d))
    return EncodingCircuit(n, d, tuple(gates), part)


def gue(dim: int, rng: np.random.Generator) -> np.ndarray:
    """GUE sample with unit-variance real and imaginary entry parts."""
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (a + a.conj().T) / 2


def random_hermitian_encoder(n: int, n_inputs: int = 1, seed: int = 0) -> EncodingCircuit:
    """``n_inputs`` full-register gates ``exp(-i x_j H_j)`` with fresh GUE ``H_j``."""
    if n > DENSE_CAP:
        raise DenseCapExceeded(f"{n} qubits exceeds dense cap {DENSE_CAP}")
    rng = np.random.default_rng(seed)
    qs = tuple(range(n))
    gates = tuple(Gate(DenseHermitian(qs, gue(1 << n, rng)), Input(j, 1.0)) for j in range(n_inputs))
    return EncodingCircuit(n, n_inputs, gates)


def dressed_rotation_encoder(n: int, seed: int = 0, qubit: int = 0) -> EncodingCircuit:
    """``W2 R_X(x) W1`` with fixed random full-register unitaries ``W1, W2``."""
    if n > DENSE_CAP:
        raise DenseCapExceeded(f"{n} qubits exceeds dense cap {DENSE_CAP}")
    rng = np.random.default_rng(seed)
    qs = tuple(range(n))
    w1 = Gate(DenseHermitian(qs, gue(1 << n, rng)), Fixed(1.0))
    w2 = Gate(DenseHermitian(qs, gue(1 << n, rng)), Fixed(1.0))
    return EncodingCircuit(n, 1, (w1, Gate(_rot(n, qubit, "X"), Input(0, 1.0)), w2))


def separable_block_encoder(n_blocks: int, inputs_per_block: int, reps: int, seed: int = 0) -> EncodingCircuit:
    """Two-qubit blocks with re-uploaded rotations and fixed entanglers.

    Block ``b`` holds qubits ``2b, 2b+1`` and inputs
    ``b*k .. b*k + k - 1`` for ``k = inputs_per_block``. Each of the ``reps``
    layers rotates qubit ``i % 2`` by ``x_i`` (axes alternate ``X``/``Y``)
    and then applies ``exp(-i a Z Z) exp(-i c Z_0)`` with random fixed
    angles, so each input reaches frequency ``reps``.
    """
    if inputs_per_block not in (1, 2):
        raise ValueError("inputs_per_block must be 1 or 2")
    rng = np.random.default_rng(seed)
    n = 2 * n_blocks
    d = n_blocks * inputs_per_block
    gates = []
    blocks = []
    for b in range(n_blocks):
        q0, q1 = 2 * b, 2 * b + 1
        ins = tuple(range(b * inputs_per_block, (b + 1) * inputs_per_block))
        blocks.append(Block((q0, q1), ins))
        for _ in range(reps):
            for i in ins:
                q = (q0, q1)[i % 2]
                gates.append(Gate(_rot(n, q, "X" if i % 2 == 0 else "Y"), Input(i, 1.0)))
            zz = ["I"] * n
            zz[q0] = zz[q1] = "Z"
            z0 = ["I"] * n
            z0[q0] = "Z"
            gates.append(Gate(HermitianPauliSum.from_pauli("".join(zz)), Fixed(float(rng.uniform(0.2, 1.2)))))
            gates.append(Gate(HermitianPauliSum.from_pauli("".join(z0)), Fixed(float(rng.uniform(0.2, 1.2)))))
    return EncodingCircuit(n, d, tuple(gates), tuple(blocks))


def block_su4_generators(n_blocks: int) -> list[HermitianPauliSum]:
    """Generators of ``su(4)`` on each two-qubit block."""
    n = 2 * n_blocks
    gens = []
    for b in range(n_blocks):
        q0, q1 = 2 * b, 2 * b + 1
        for q in (q0, q1):
            gens.append(HermitianPauliSum.from_pauli(PauliString.single(n, q, "X")))
            gens.append(HermitianPauliSum.from_pauli(PauliString.single(n, q, "Y")))
        zz = ["I"] * n
        zz[q0] = zz[q1] = "Z"
        gens.append(HermitianPauliSum.from_pauli("".join(zz)))
    return gens


def tfim_generators(n: int) -> list[HermitianPauliSum]:
    """Open-chain ``Z_i Z_{i+1}`` couplings followed by ``X_i`` fields."""
    gens = [
        HermitianPauliSum.from_pauli(PauliString.from_label("I" * i + "ZZ" + "I" * (n - i - 2)))
        for i in range(n - 1)
    ]
    gens += [HermitianPauliSum.from_pauli(PauliString.single(n, i, "X")) for i in range(n)]
    return gens


def su2_block_generators(n: int) -> list[HermitianPauliSum]:
    """``X_i`` and ``Y_i`` on every qubit; the algebra is ``su(2)^n``."""
    gens = []
    for i in range(n):
        gens.append(HermitianPauliSum.from_pauli(PauliString.single(n, i, "X")))
        gens.append(HermitianPauliSum.from_pauli(PauliString.single(n, i, "Y")))
    return gens


def layered_ansatz(gens: Sequence[HermitianPauliSum], layers: int) -> AnsatzCircuit:
    """``layers`` repetitions of ``gens``, one fresh parameter per gate."""
    gens = list(gens) * layers
    return AnsatzCircuit.from_generators(gens)


def tfim_ansatz(n: int, layers: int) -> AnsatzCircuit:
    if n < 2:
        raise ValueError("TFIM ansatz needs at least two qubits")
    return layered_ansatz(tfim_generators(n), layers)


def su2_block_ansatz(n: int, layers: int) -> AnsatzCircuit:
    return layered_ansatz(su2_block_generators(n), layers)


def ansatz_with_params(gens: Sequence[HermitianPauliSum], n_params: int) -> AnsatzCircuit:
    """Cycle through ``gens`` until exactly ``n_params`` gates exist."""
    gens = list(gens)
    return AnsatzCircuit.from_generators([gens[k % len(gens)] for k in range(n_params)])


# -- JSON -----------------------------------------------------------------


def _gen_to_obj(gen: Generator):
    if isinstance(gen, DenseHermitian):
        return {
            "dense": {
                "qubits": list(gen.qubits),
                "matrix": [[[float(v.real), float(v.imag)] for v in row] for row in gen.matrix],
            }
        }
    return {"pauli_sum": gen.to_json_obj()}


def _gen_from_obj(obj, n: int) -> Generator:
    if "dense" in obj:
        d = obj["dense"]
        m = np.array([[complex(re, im) for re, im in row] for row in d["matrix"]])
        return DenseHermitian(tuple(d["qubits"]), m)
    return HermitianPauliSum.from_json_obj(obj["pauli_sum"], n)


def _binding_to_obj(b: Binding):
    if isinstance(b, Trainable):
        return {"trainable": b.index}
    if isinstance(b, Input):
        return {"input": {"j": b.index, "scale": b.scale}}
    return {"fixed": b.angle}


def _binding_from_obj(obj) -> Binding:
    if "trainable" in obj:
        return Trainable(int(obj["trainable"]))
    if "input" in obj:
        return Input(int(obj["input"]["j"]), float(obj["input"].get("scale", 1.0)))
    return Fixed(float(obj["fixed"]))


def circuit_to_obj(circ: EncodingCircuit | AnsatzCircuit) -> dict:
    obj = {
        "n_qubits": circ.n_qubits,
        "gates": [{"generator": _gen_to_obj(g.generator), "binding": _binding_to_obj(g.binding)} for g in circ.gates],
    }
    if isinstance(circ, EncodingCircuit):
        obj["kind"] = "encoding"
        obj["input_dim"] = circ.input_dim
        if circ.partition is not None:
            obj["partition"] = [{"qubits": list(b.qubits), "inputs": list(b.inputs)} for b in circ.partition]
    else:
        obj["kind"] = "ansatz"
        obj["n_params"] = circ.n_params
    return obj


def circuit_from_obj(obj: dict) -> EncodingCircuit | AnsatzCircuit:
    n = int(obj["n_qubits"])
    gates = tuple(Gate(_gen_from_obj(g["generator"], n), _binding_from_obj(g["binding"])) for g in obj["gates"])
    kind = obj.get("kind")
    if kind is None:
        kind = "ansatz" if gates and all(isinstance(g.binding, Trainable) for g in gates) else "encoding"
    if kind == "ansatz":
        n_params = obj.get("n_params")
        if n_params is None:
            n_params = 1 + max(g.binding.index for g in gates)
        return AnsatzCircuit(n, int(n_params), gates)
    input_dim = obj.get("input_dim")
    if input_dim is None:
        input_dim = 1 + max((g.binding.index for g in gates if isinstance(g.binding, Input)), default=-1)
    part = obj.get("partition")
    if part is not None:
        part = tuple(Block(tuple(b["qubits"]), tuple(b["inputs"])) for b in part)
    return EncodingCircuit(n, int(input_dim), gates, part)


def render(circ) -> str:
    return json.dumps(circuit_to_obj(circ))


def parse(text: str):
    return circuit_from_obj(json.loads(text))
