"""Snapshot-to-input inversion: analytic, algebraic and black-box methods."""

from .common import Failure, InversionResult, Status, periodic_error
from .trig import TrigPolynomial, fit_trig, trig_grid
from .groebner import GroebnerBasis, Poly, buchberger, is_groebner, reduce, s_polynomial
from .pauli_product import invert_pauli_product, invert_pauli_product_all
from .general_pauli import invert_general_pauli
from .blackbox import direct_input_recovery, grid_search_invert, perturbed_gd_invert, snapshot_cost
from .classical import classical_gradients, classical_trig_recover, trig_features
