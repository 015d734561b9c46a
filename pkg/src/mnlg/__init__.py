"""Multimodal dialogue generation from typed feature-structure trees."""

from mnlg.errors import (
    AgreementError,
    FSSyntaxError,
    GenerationFailure,
    GrammarError,
    HierarchyError,
    MnlgError,
    PlanError,
    RealizationError,
    ReferringError,
)
from mnlg.feature_core import FeatureStructure, TypeHierarchy, Var, unify
from mnlg.estimator import MNLGenerator
from mnlg.generator import GenConfig, Generator, enumerate_solutions, expand, select
from mnlg.notation import parse_fs
from mnlg.pipeline_io import emit_script, generate_dialogue, parse_plan, run_pipeline
from mnlg.repository import Repository, load_repository, parse_grammar
from mnlg.semantics import parse_drs

__version__ = "0.1.0"

__all__ = [
    "AgreementError",
    "FSSyntaxError",
    "GenerationFailure",
    "GrammarError",
    "HierarchyError",
    "MnlgError",
    "PlanError",
    "RealizationError",
    "ReferringError",
    "FeatureStructure",
    "TypeHierarchy",
    "Var",
    "unify",
    "MNLGenerator",
    "GenConfig",
    "Generator",
    "enumerate_solutions",
    "expand",
    "select",
    "parse_fs",
    "emit_script",
    "generate_dialogue",
    "parse_plan",
    "run_pipeline",
    "Repository",
    "load_repository",
    "parse_grammar",
    "parse_drs",
]
