"""Referring expressions from the common ground.

Salience is a recency ranking: a referent mentioned in an act jumps to the top
rank and every other referent decays by one. A referent is pronominalized only
while it is strictly the most salient of the referents sharing its head noun
and was mentioned recently. Otherwise a definite description is built by adding
properties in common-ground order until no other referent with the same head
noun fits, then dropping any property that turned out to be unnecessary.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import FrozenSet, Iterable, Mapping, Optional, Tuple

from mnlg.derivation import REFERRING, DerivationNode
from mnlg.errors import ReferringError
from mnlg.feature_core import FeatureStructure, PList, Term, Value, resolve
from mnlg.semantics import drs_referents, empty_drs, properties_of

log = logging.getLogger(__name__)

__all__ = [
    "CgState",
    "Description",
    "resolve_referent",
    "build_description",
    "realize_np",
    "refer",
    "update_salience",
    "is_highly_salient",
    "distinguishes",
]

HEAD_CATEGORIES = ("n", "pro", "pn")


@dataclass(frozen=True)
class CgState:
    cg: object
    participants: Mapping[str, Mapping[str, str]] = field(default_factory=dict)
    salience: Mapping[str, int] = field(default_factory=dict)
    mention_log: Tuple[Tuple[int, str], ...] = ()
    head_types: FrozenSet[str] = frozenset()
    props: Mapping[str, Tuple[str, ...]] = field(default_factory=dict)
    next_act: int = 0
    top_rank: int = 10
    recent_window: int = 2

    @classmethod
    def initial(cls, cg=None, participants: Optional[Mapping[str, Mapping[str, str]]] = None, head_types: Iterable[str] = (), **kwargs) -> "CgState":
        cg = cg if cg is not None else empty_drs()
        participants = dict(participants or {})
        events = {c.args[0] for c in cg.conditions if isinstance(c, Term) and c.functor == "arg1" and c.args}
        refs = [r for r in drs_referents(cg) if r not in events]
        props = {}
        for r in refs:
            seen = []
            for p in properties_of(r, cg):
                if p not in seen:
                    seen.append(p)
            props[r] = tuple(seen)
        salience = {r: 0 for r in list(refs) + list(participants)}
        return cls(cg, participants, salience, (), frozenset(head_types), props, **kwargs)

    @property
    def referents(self) -> Tuple[str, ...]:
        return tuple(self.props)

    def rank(self, referent: str) -> int:
        return self.salience.get(referent, 0)

    def last_mention(self, referent: str) -> Optional[int]:
        for act, r in reversed(self.mention_log):
            if r == referent:
                return act
        return None

    def head(self, referent: str) -> Optional[str]:
        props = self.props.get(referent, ())
        for p in props:
            if p in self.head_types:
                return p
        return props[0] if props else None

    def competitors(self, referent: str) -> Tuple[str, ...]:
        if referent in self.participants:
            return tuple(p for p in self.participants if p != referent)
        head = self.head(referent)
        return tuple(r for r in self.props if r != referent and head in self.props[r])


@dataclass(frozen=True)
class Description:
    referent: str
    properties: Tuple[str, ...] = ()
    kind: str = "object"
    head: Optional[str] = None
    pronoun: bool = False
    flagged: bool = False

    @property
    def empty(self) -> bool:
        return not self.properties


def update_salience(state: CgState, act_index: int, mentioned: Iterable[str]) -> CgState:
    """Promote ``mentioned`` to the top rank; everything else decays by one."""
    mentioned = sorted(set(mentioned))
    salience = {r: max(0, v - 1) for r, v in state.salience.items()}
    for r in mentioned:
        salience[r] = state.top_rank
    log_ = state.mention_log + tuple((act_index, r) for r in mentioned)
    return replace(state, salience=salience, mention_log=log_, next_act=act_index + 1)


def is_highly_salient(referent: str, state: CgState) -> bool:
    rank = state.rank(referent)
    last = state.last_mention(referent)
    if rank <= 0 or last is None or last < state.next_act - state.recent_window:
        return False
    return all(rank > state.rank(o) for o in state.competitors(referent))


def distinguishes(referent: str, properties: Iterable[str], state: CgState) -> bool:
    wanted = set(properties)
    return not any(wanted <= set(state.props[o]) for o in state.props if o != referent)


def resolve_referent(value: Value, binds, state: CgState) -> str:
    """The common-ground referent or participant that ``value`` designates."""
    v = resolve(value, binds)
    if isinstance(v, Term) and v.functor == "concept" and len(v.args) == 1:
        v = v.args[0]
    if isinstance(v, str) and (v in state.props or v in state.participants):
        return v
    raise ReferringError(f"cannot resolve {v!r} to a referent in the common ground")


def build_description(referent: str, state: CgState, deictic: FrozenSet[str] = frozenset()) -> Description:
    if referent in state.participants:
        pronoun = referent not in deictic and is_highly_salient(referent, state)
        return Description(referent, (), "participant", pronoun=pronoun)
    head = state.head(referent)
    if is_highly_salient(referent, state):
        return Description(referent, (), "object", head, pronoun=True)
    props = state.props.get(referent, ())
    if not props:
        raise ReferringError(f"referent {referent!r} has no properties to describe it with")
    chosen = [head]
    distractors = set(state.competitors(referent))
    for p in props:
        if not distractors:
            break
        if p == head:
            continue
        ruled_out = {o for o in distractors if p not in state.props[o]}
        if ruled_out:
            chosen.append(p)
            distractors -= ruled_out
    if distractors:
        log.warning("referent %s is indistinguishable from %s; using all properties", referent, sorted(distractors))
        return Description(referent, props, "object", head, flagged=True)
    for p in reversed(chosen[1:]):
        trial = [q for q in chosen if q != p]
        if distinguishes(referent, trial, state):
            chosen = trial
    return Description(referent, tuple(chosen), "object", head)


def _np_node(desc: Description, state: Optional[CgState], repo) -> FeatureStructure:
    if desc.kind == "participant":
        if desc.pronoun and state is not None:
            gender = state.participants.get(desc.referent, {}).get("gender", "n")
            return FeatureStructure("np", {"desc": FeatureStructure("pronoun"), "gender": gender})
        return FeatureStructure("np", {"desc": FeatureStructure("name"), "name": desc.referent})
    if desc.empty:
        gender = "n"
        for e in repo.lexicon.lookup(desc.head or "", "n"):
            gender = e.features.get("gender", gender)
            break
        return FeatureStructure("np", {"desc": FeatureStructure("pronoun"), "gender": gender})
    mods = tuple(p for p in desc.properties if p != desc.head)
    return FeatureStructure(
        "np",
        {"desc": FeatureStructure("definite"), "head": desc.head, "mods": PList(mods)},
    )


def _agreement_bundle(node: DerivationNode, repo) -> Optional[FeatureStructure]:
    heads = [leaf for leaf in node.leaves() if leaf.type in HEAD_CATEGORIES]
    if not heads:
        return None
    leaf = heads[-1]
    lemma = leaf.get("lemma")
    entries = repo.lexicon.lookup(lemma, leaf.type) if isinstance(lemma, str) else []
    if not entries:
        return None
    feats = {k: v for k, v in entries[0].features.items() if k in ("number", "person", "gender")}
    agr_type = "agr" if "agr" in repo.hierarchy else repo.hierarchy.top
    return FeatureStructure(agr_type, feats)


def realize_np(desc: Description, repo, state: Optional[CgState] = None) -> DerivationNode:
    """Map a description to an NP derivation through the tree repository."""
    from mnlg.generator import GenConfig, Generator

    node = _np_node(desc, state, repo)
    gen = Generator(repo, None, GenConfig(max_solutions=1))
    deriv = next(gen.solutions(node), None)
    if deriv is None:
        raise ReferringError(f"no noun phrase tree realizes {desc}")
    agr = _agreement_bundle(deriv, repo)
    fs = deriv.fs
    if agr is not None:
        fs = FeatureStructure(fs.type, {**fs.features, "agr": agr})
    return DerivationNode(fs, deriv.children, REFERRING, deriv.tree, desc.referent)


def refer(sem: Value, repo, state: Optional[CgState], deictic: FrozenSet[str] = frozenset()) -> DerivationNode:
    """Resolve, describe and realize the referent designated by ``sem``."""
    if state is None:
        state = CgState.initial(head_types=repo.lexicon.nouns())
    referent = resolve_referent(sem, {}, state)
    desc = build_description(referent, state, deictic)
    return realize_np(desc, repo, state)
