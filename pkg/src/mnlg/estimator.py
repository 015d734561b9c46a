"""Estimator-style front end.

``fit`` loads a grammar once; ``predict`` turns dialogue plans into scripts and
``transform`` into script XML. The repository is immutable after ``fit`` so one
fitted generator can serve many dialogues.
"""

from __future__ import annotations

from pathlib import Path
from typing import List, Sequence, Union

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from mnlg.generator import GenConfig
from mnlg.pipeline_io import (
    DialoguePlan,
    Script,
    assign_turn_gestures,
    emit_script,
    generate_dialogue,
    parse_plan,
)
from mnlg.repository import Repository, load_repository, parse_grammar

PlanLike = Union[DialoguePlan, bytes, str, Path]


def demo_grammar_path() -> Path:
    return Path(__file__).parent / "data" / "demo.grammar"


def check_plans(plans, repo: Repository) -> List[DialoguePlan]:
    """Coerce one plan or a sequence of plans (objects, XML or paths)."""
    if isinstance(plans, (DialoguePlan, bytes, str, Path)):
        plans = [plans]
    out = []
    for p in plans:
        if isinstance(p, DialoguePlan):
            out.append(p)
        elif isinstance(p, Path) or (isinstance(p, str) and "\n" not in p and Path(p).is_file()):
            out.append(parse_plan(Path(p).read_bytes(), repo.conditions))
        elif isinstance(p, (bytes, str)):
            out.append(parse_plan(p, repo.conditions))
        else:
            raise TypeError(f"expected a dialogue plan, XML or path, got {type(p).__name__}")
    return out


class MNLGenerator(TransformerMixin, BaseEstimator):
    def __init__(
        self,
        grammar=None,
        max_solutions: int = 1,
        rng_seed: int = 0,
        depth_limit: int = 32,
        require_full_coverage: bool = False,
    ):
        self.grammar = grammar
        self.max_solutions = max_solutions
        self.rng_seed = rng_seed
        self.depth_limit = depth_limit
        self.require_full_coverage = require_full_coverage

    def _config(self) -> GenConfig:
        return GenConfig(self.max_solutions, self.rng_seed, self.depth_limit, self.require_full_coverage)

    def fit(self, X=None, y=None):
        """Load the grammar. ``X`` is ignored."""
        self._config()  # validates parameters
        g = self.grammar
        if g is None:
            self.repository_ = load_repository(demo_grammar_path())
        elif isinstance(g, Repository):
            self.repository_ = g
        elif isinstance(g, Path) or (isinstance(g, str) and "\n" not in g and Path(g).is_file()):
            self.repository_ = load_repository(g)
        else:
            self.repository_ = parse_grammar(g)
        return self

    def predict(self, X: Union[PlanLike, Sequence[PlanLike]]) -> List[Script]:
        check_is_fitted(self, "repository_")
        config = self._config()
        return [
            assign_turn_gestures(generate_dialogue(p, self.repository_, config), p)
            for p in check_plans(X, self.repository_)
        ]

    def transform(self, X) -> List[bytes]:
        return [emit_script(s) for s in self.predict(X)]
