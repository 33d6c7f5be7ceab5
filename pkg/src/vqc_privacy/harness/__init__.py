"""Experiment configs, the attack pipeline, landscape sweeps and report emission."""

from .config import ExperimentConfig, LandscapeConfig
from .landscape import LandscapeRecord, landscape_record, landscape_sweep, mean_r_by_n
from .pipeline import AttackReport, run_attack_pipeline, run_instance
from .report import emit_report
