"""Gradient-inversion attacks on variational quantum circuits with polynomial DLAs."""

from .pauli import HermitianPauliSum, PauliString, bracket, inner, multiply, to_dense
from .dla import DlaBasis, StructureConstants, ad_matrix, compute_dla_basis, project, structure_constants
from .circuits import (
    AnsatzCircuit,
    EncodingCircuit,
    Gate,
    fourier_tower_map,
    pauli_product_map,
    random_hermitian_encoder,
)
from .oracle import Snapshot, encode, snapshot_of, vqc_gradients, vqc_output
from .gsim import adjoint_of, chi_matrix, gsim_gradients, gsim_output, model_output
from .recovery import RecoveryResult, recover_snapshot, recover_snapshot_ratio

__version__ = "0.1.0"
