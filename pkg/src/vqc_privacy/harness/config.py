"""Experiment configuration: one JSON document per run."""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from ..errors import ConfigError

METHODS = ("pauli-product", "general-pauli", "grid", "pgd", "direct")

EXECUTION_FIELDS = ("workers", "output_dir")

DEFAULT_TOLERANCES = {
    "success": 1e-6,
    "rank": 1e-8,
}


@dataclass
class ExperimentConfig:
    """Everything needed to replay an attack batch.

    ``encoding`` and ``ansatz`` are builder specs (``{"kind": ..., ...}``)
    or ``{"kind": "file", "path": ...}``. Each ``(n, seed)`` pair in
    ``qubits x seeds`` is one instance.
    """

    scenario: str = "pauli_product"
    encoding: dict = field(default_factory=lambda: {"kind": "pauli_product", "axis": "X"})
    ansatz: dict = field(default_factory=lambda: {"kind": "su2_block"})
    observable: list | None = None
    qubits: list = field(default_factory=lambda: [2])
    seeds: list = field(default_factory=lambda: [0])
    method: str = "pauli-product"
    method_params: dict = field(default_factory=dict)
    gradient_rounds: int | str = "auto"
    max_rounds: int = 8
    max_dim: int | None = None
    output_dir: str | None = None
    tolerances: dict = field(default_factory=dict)
    workers: int = 1

    def __post_init__(self):
        if self.method not in METHODS:
            raise ConfigError(f"unknown method {self.method!r}; choose from {METHODS}")
        if not self.qubits or not all(isinstance(n, int) and n >= 1 for n in self.qubits):
            raise ConfigError("qubits must be a non-empty list of positive integers")
        if not self.seeds or not all(isinstance(s, int) for s in self.seeds):
            raise ConfigError("seeds must be a non-empty list of integers")
        if self.gradient_rounds != "auto" and not (isinstance(self.gradient_rounds, int) and self.gradient_rounds >= 1):
            raise ConfigError("gradient_rounds must be 'auto' or a positive integer")
        for spec, what in ((self.encoding, "encoding"), (self.ansatz, "ansatz")):
            if not isinstance(spec, dict) or "kind" not in spec:
                raise ConfigError(f"{what} spec needs a 'kind'")
        unknown = set(self.tolerances) - set(DEFAULT_TOLERANCES)
        if unknown:
            raise ConfigError(f"unknown tolerance keys {sorted(unknown)}")

    def tol(self, key: str) -> float:
        return float(self.tolerances.get(key, DEFAULT_TOLERANCES[key]))

    def budget_for(self, n: int) -> int:
        return self.max_dim if self.max_dim is not None else 64 * n * n

    def to_json_obj(self) -> dict:
        return asdict(self)

    def dumps(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True, separators=(",", ":"))

    def config_hash(self) -> str:
        """Hash of the fields that determine the numbers; where and how fast they run is left out."""
        obj = {k: v for k, v in self.to_json_obj().items() if k not in EXECUTION_FIELDS}
        return hashlib.sha256(json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()).hexdigest()[:16]

    @classmethod
    def from_json_obj(cls, obj: dict) -> "ExperimentConfig":
        if not isinstance(obj, dict):
            raise ConfigError("config must be a JSON object")
        names = {f.name for f in fields(cls)}
        unknown = set(obj) - names
        if unknown:
            raise ConfigError(f"unknown config keys {sorted(unknown)}")
        return cls(**obj)

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        try:
            obj = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as err:
            raise ConfigError(f"cannot read config {path}: {err}") from None
        return cls.from_json_obj(obj)


@dataclass
class LandscapeConfig:
    """Stationary-point spacing sweep; ``encoder`` is ``dressed_rotation`` or ``gue``."""

    encoder: str = "gue"
    qubits: list = field(default_factory=lambda: [2, 3, 4, 5])
    seeds: list = field(default_factory=lambda: list(range(10)))
    x_range: list = field(default_factory=lambda: [0.0, 6.283185307179586])
    samples: int = 4096
    observable_qubit: int = 0
    output_dir: str | None = None

    def __post_init__(self):
        if self.encoder not in ("gue", "dressed_rotation"):
            raise ConfigError(f"unknown landscape encoder {self.encoder!r}")
        if self.samples < 16:
            raise ConfigError("samples must be at least 16")
        if len(self.x_range) != 2 or not self.x_range[1] > self.x_range[0]:
            raise ConfigError("x_range must be [lo, hi] with hi > lo")

    @classmethod
    def from_json_obj(cls, obj: dict) -> "LandscapeConfig":
        names = {f.name for f in fields(cls)}
        unknown = set(obj) - names
        if unknown:
            raise ConfigError(f"unknown landscape config keys {sorted(unknown)}")
        return cls(**obj)
