"""Argument graph mining: text in, argument graph out, plus agreement metrics against benchmark graphs."""

__version__ = "0.1.0"

from .errors import ArgmineError, NoArgumentFound
from .graph import ArgumentGraph, Inode, Snode, Stance, add_argument, from_aif_json, to_aif_json, to_dot, validate
from .metrics import AgreementReport, evaluate_pair
from .pipeline import Mode, PipelineConfig, Resources, run_evaluation, run_pipeline

__all__ = [
    "ArgmineError",
    "NoArgumentFound",
    "ArgumentGraph",
    "Inode",
    "Snode",
    "Stance",
    "add_argument",
    "from_aif_json",
    "to_aif_json",
    "to_dot",
    "validate",
    "AgreementReport",
    "evaluate_pair",
    "Mode",
    "PipelineConfig",
    "Resources",
    "run_evaluation",
    "run_pipeline",
]
