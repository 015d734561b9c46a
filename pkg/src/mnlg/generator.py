"""Top-down generation of deep syntactic structure.

An input node is matched against the mother of every candidate tree (file
order). Daughters of a matching tree that are not yet complete are expanded the
same way, depth first and left to right; noun phrases whose semantics is an
open referent are handed to the referring-expression module. Solutions are
produced lazily, so asking for one solution stops at the first.
"""

from __future__ import annotations

import enum
import logging
import random
from dataclasses import dataclass
from itertools import islice
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from mnlg.derivation import INPUT, REFERRING, DerivationNode
from mnlg.errors import ReferringError
from mnlg.feature_core import (
    CondSet,
    FeatureStructure,
    PList,
    Term,
    TypeHierarchy,
    FLAT,
    Value,
    Var,
    deref,
    get_path,
    unify_iter,
)
from mnlg.repository import GenTree, Repository

log = logging.getLogger(__name__)

__all__ = [
    "Completeness",
    "GenConfig",
    "GenStats",
    "Generator",
    "DerivationNode",
    "is_complete",
    "expand",
    "enumerate_solutions",
    "select",
]


class Completeness(str, enum.Enum):
    COMPLETE_FORM = "complete_form"
    COMPLETE_NP_OPEN = "complete_np_open"
    INCOMPLETE = "incomplete"


@dataclass(frozen=True)
class GenConfig:
    """``max_solutions=None`` enumerates every derivation."""

    max_solutions: Optional[int] = 1
    rng_seed: Optional[int] = 0
    depth_limit: int = 32
    require_full_coverage: bool = False

    def __post_init__(self):
        if self.max_solutions is not None and self.max_solutions < 1:
            raise ValueError("max_solutions must be >= 1")
        if self.depth_limit < 1:
            raise ValueError("depth_limit must be >= 1")


@dataclass
class GenStats:
    depth_pruned: int = 0
    lexicon_pruned: int = 0
    referring_failures: int = 0


def is_complete(node: Value, binds=None, hierarchy: TypeHierarchy = FLAT, np_type: str = "np") -> Completeness:
    """Classify a daughter node.

    A node is lexically complete when ``form`` (or, for lexical leaves,
    ``lemma``) is an atom. A noun phrase whose ``sem`` designates a referent
    (an open variable, a referent name or ``concept(...)``) is complete pending
    referring-expression generation.
    """
    binds = binds or {}
    node = deref(node, binds)
    if not isinstance(node, FeatureStructure):
        return Completeness.INCOMPLETE
    if isinstance(get_path(node, ["form"], binds), str) or isinstance(get_path(node, ["lemma"], binds), str):
        return Completeness.COMPLETE_FORM
    if hierarchy.subsumes(np_type, node.type) and "sem" in node.features:
        sem = get_path(node, ["sem"], binds)
        if isinstance(sem, Var) or isinstance(sem, Term) or (isinstance(sem, str) and sem != "none"):
            return Completeness.COMPLETE_NP_OPEN
    return Completeness.INCOMPLETE


def _deictic(node: Value) -> frozenset:
    out = set()
    name = get_path(node, ["currentAct", "speaker", "name"])
    if isinstance(name, str):
        out.add(name)
    addressees = get_path(node, ["currentAct", "addressees"])
    if isinstance(addressees, PList):
        out.update(a for a in addressees.items if isinstance(a, str))
    return frozenset(out)


class Generator:
    """Depth-first, file-order search over one repository."""

    def __init__(self, repo: Repository, cg_state=None, config: Optional[GenConfig] = None, stats: Optional[GenStats] = None):
        self.repo = repo
        self.h = repo.hierarchy
        self.cg_state = cg_state
        self.config = config or GenConfig()
        self.stats = stats if stats is not None else GenStats()
        self.deictic: frozenset = frozenset()
        self._refer_cache: Dict[str, Optional[DerivationNode]] = {}

    def solutions(self, node: Value, binds=None) -> Iterator[DerivationNode]:
        self.deictic = _deictic(node)
        for deriv, b in self._expand_node(node, dict(binds or {}), 0, INPUT):
            yield deriv.resolved(b)

    def _expand_node(self, fs: Value, binds, depth: int, origin: str) -> Iterator[Tuple[DerivationNode, dict]]:
        if depth >= self.config.depth_limit:
            self.stats.depth_pruned += 1
            return
        for tree in self.repo.candidates(fs, binds):
            t = tree.fresh()
            for b1 in unify_iter(fs, t.mother, binds, self.h):
                if self.config.require_full_coverage:
                    b1 = self._close_rest(t, b1)
                    if b1 is None:
                        continue
                if not t.daughters:
                    if is_complete(fs, b1, self.h) is Completeness.COMPLETE_FORM:
                        yield DerivationNode(fs, (), origin, tree.id), b1
                    continue
                for kids, b2 in self._expand_daughters(t.daughters, b1, depth, tree.id):
                    yield DerivationNode(fs, kids, origin, tree.id), b2

    def _close_rest(self, tree: GenTree, binds):
        if tree.drops_content:
            return None
        for rest in tree.dropped_rest:
            binds = next(unify_iter(rest, CondSet(), binds, self.h), None)
            if binds is None:
                return None
        return binds

    def _expand_daughters(self, daughters: Sequence[GenTree], binds, depth: int, parent: str):
        if not daughters:
            yield (), binds
            return
        for node, b1 in self._expand_daughter(daughters[0], binds, depth, parent):
            for rest, b2 in self._expand_daughters(daughters[1:], b1, depth, parent):
                yield (node,) + rest, b2

    def _expand_daughter(self, d: GenTree, binds, depth: int, parent: str):
        if d.daughters:
            for kids, b in self._expand_daughters(d.daughters, binds, depth, d.id):
                yield DerivationNode(d.mother, kids, parent, d.id), b
            return
        fs = d.mother
        status = is_complete(fs, binds, self.h)
        if status is Completeness.COMPLETE_FORM:
            if self._lexically_available(fs, binds):
                yield DerivationNode(fs, (), parent), binds
        elif status is Completeness.COMPLETE_NP_OPEN:
            yield from self._refer(fs, binds)
        else:
            yield from self._expand_node(fs, binds, depth + 1, parent)

    def _lexically_available(self, fs: Value, binds) -> bool:
        if isinstance(get_path(fs, ["form"], binds), str) or not len(self.repo.lexicon):
            return True
        lemma = get_path(fs, ["lemma"], binds)
        if self.repo.lexicon.has(lemma, deref(fs, binds).type):
            return True
        self.stats.lexicon_pruned += 1
        return False

    def _refer(self, fs: Value, binds):
        from mnlg import referring
        from mnlg.feature_core import canonical, resolve

        sem = resolve(get_path(fs, ["sem"], binds), binds)
        key = canonical(sem)
        if key not in self._refer_cache:
            try:
                self._refer_cache[key] = referring.refer(sem, self.repo, self.cg_state, self.deictic)
            except ReferringError as e:
                log.debug("referring expression failed: %s", e)
                self.stats.referring_failures += 1
                self._refer_cache[key] = None
        np = self._refer_cache[key]
        if np is None:
            return
        agr = np.get("agr")
        b1 = binds
        if isinstance(agr, FeatureStructure):
            b1 = next(unify_iter(fs, FeatureStructure(self.h.top, {"agr": agr}), binds, self.h), None)
            if b1 is None:
                return
        yield DerivationNode(fs, np.children, REFERRING, np.tree, np.referent), b1


def expand(node: Value, repo: Repository, cg_state=None, binds=None, config: Optional[GenConfig] = None, stats: Optional[GenStats] = None) -> Iterator[DerivationNode]:
    """Lazy stream of complete derivations for ``node``."""
    return Generator(repo, cg_state, config, stats).solutions(node, binds)


def enumerate_solutions(node: Value, repo: Repository, cg_state=None, config: Optional[GenConfig] = None, stats: Optional[GenStats] = None) -> List[DerivationNode]:
    """The first ``config.max_solutions`` derivations in backtracking order."""
    config = config or GenConfig()
    return list(islice(expand(node, repo, cg_state, None, config, stats), config.max_solutions))


def select(solutions: Sequence[DerivationNode], rng_seed: Optional[int] = None, rng: Optional[random.Random] = None) -> DerivationNode:
    """Uniform seeded choice among solutions."""
    if not solutions:
        raise ValueError("cannot select from an empty solution list")
    if len(solutions) == 1:
        return solutions[0]
    rng = rng or random.Random(rng_seed)
    return solutions[rng.randrange(len(solutions))]
