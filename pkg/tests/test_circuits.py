import numpy as np
import pytest

from vqc_privacy import circuits as cz
from vqc_privacy.circuits import Block, EncodingCircuit, Fixed, Gate, Input, Trainable
from vqc_privacy.pauli import HermitianPauliSum


@pytest.mark.parametrize(
    "circ",
    [
        cz.pauli_product_map(3, "Y"),
        cz.fourier_tower_map(2, 3),
        cz.separable_block_encoder(2, 2, 2, seed=3),
        cz.random_hermitian_encoder(2, 2, seed=1),
        cz.tfim_ansatz(3, 2),
    ],
)
def test_json_roundtrip(circ):
    back = cz.parse(cz.render(circ))
    assert cz.render(back) == cz.render(circ)
    assert type(back) is type(circ)


def test_periods():
    enc = cz.fourier_tower_map(2, 3)
    assert np.isclose(enc.period(0), 2 * np.pi)
    assert enc.max_frequency(0) == pytest.approx(1 + 5 + 25)
    enc = cz.pauli_product_map(2)
    assert np.isclose(enc.period(1), 2 * np.pi)
    assert cz.random_hermitian_encoder(2, seed=0).period(0) is None


def test_encoding_rejects_trainable_gates():
    g = Gate(HermitianPauliSum.from_pauli("X"), Trainable(0))
    with pytest.raises(ValueError):
        EncodingCircuit(1, 1, (g,))


def test_partition_rejects_straddling_gate():
    zz = Gate(HermitianPauliSum.from_pauli("ZZ"), Fixed(0.3))
    with pytest.raises(ValueError):
        EncodingCircuit(2, 0, (zz,), (Block((0,), ()), Block((1,), ())))


def test_partition_rejects_foreign_input():
    g = Gate(HermitianPauliSum.from_pauli("XI", 0.5), Input(1))
    with pytest.raises(ValueError):
        EncodingCircuit(2, 2, (g,), (Block((0,), (0,)), Block((1,), (1,))))


def test_ansatz_with_params_cycles():
    gens = cz.su2_block_generators(2)
    ans = cz.ansatz_with_params(gens, 7)
    assert ans.n_params == 7
    assert ans.gates[4].generator == gens[0]


def test_separable_blocks():
    enc = cz.separable_block_encoder(3, 2, 1)
    assert enc.n_qubits == 6 and enc.input_dim == 6
    assert enc.block_of_input(3).qubits == (2, 3)
