"""Surface realization: lexical choice, agreement, inflection, punctuation."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from mnlg.derivation import DerivationNode
from mnlg.errors import AgreementError, RealizationError
from mnlg.feature_core import FLAT, FeatureStructure, TypeHierarchy, Value, get_path, resolve, unify

__all__ = [
    "LexEntry",
    "Lexicon",
    "Token",
    "InflectionWarning",
    "lex_select",
    "leaf_bundle",
    "inflect",
    "apply_agreement",
    "realize_tokens",
    "punctuate",
    "realize",
]

AGREEMENT_FEATURES = ("number", "person", "gender")
BUNDLE_FEATURES = AGREEMENT_FEATURES + ("tense", "polarity")
TERMINAL = {"question": "?"}
DEFAULT_TERMINAL = "."
SENTENCE_END = (".", "!", "?")
ATTACH_LEFT = (".", ",", "!", "?", ";", ":", "'", "n't")


class InflectionWarning(UserWarning):
    """A surface form was guessed by a regular rule that is often wrong."""


@dataclass(frozen=True)
class LexEntry:
    lemma: str
    category: str
    features: Mapping[str, str]
    forms: Tuple[Tuple[Mapping[str, str], str], ...]

    def __post_init__(self):
        if not self.forms:
            raise ValueError(f"lexical entry {self.lemma!r} has no forms")
        bundles = [tuple(sorted(b.items())) for b, _ in self.forms]
        if len(set(bundles)) != len(bundles):
            raise ValueError(f"lexical entry {self.lemma!r} repeats a feature bundle")


class Lexicon:
    def __init__(self, entries: Iterable[LexEntry] = ()):
        self.entries = list(entries)
        self._index: Dict[Tuple[str, str], List[LexEntry]] = {}
        for e in self.entries:
            self._index.setdefault((e.lemma, e.category), []).append(e)

    def lookup(self, lemma: str, category: str) -> List[LexEntry]:
        return self._index.get((lemma, category), [])

    def has(self, lemma: str, category: str) -> bool:
        return (lemma, category) in self._index

    def nouns(self) -> frozenset:
        return frozenset(e.lemma for e in self.entries if e.category == "n")

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


@dataclass(frozen=True)
class Token:
    surface: str
    spacing: str = "normal"
    source: Optional[str] = None

    def __post_init__(self):
        if not self.surface:
            raise ValueError("empty token")


def _atoms(fs: Value, prefix: str = "") -> Dict[str, str]:
    out: Dict[str, str] = {}
    if isinstance(fs, FeatureStructure):
        for k, v in fs.features.items():
            if isinstance(v, str):
                out.setdefault(k, v)
    return out


def _pragmatics(leaf: Value, binds) -> Dict[str, str]:
    act = get_path(leaf, ["currentAct"], binds)
    prag = _atoms(act)
    prag.update(_atoms(get_path(act, ["speaker"], binds) if act is not None else None))
    prag.pop("type", None)
    return prag


def lex_select(leaf: Value, lexicon: Lexicon, binds=None) -> LexEntry:
    """Choose the lexical entry realizing ``leaf``.

    Leaves with a ground ``form`` bypass the lexicon. Among several entries for
    one lemma and category, pragmatic features of the current act (politeness,
    emotion, ...) break the tie; file order breaks remaining ties.
    """
    leaf = resolve(leaf, binds)
    category = leaf.type if isinstance(leaf, FeatureStructure) else "top"
    form = get_path(leaf, ["form"])
    if isinstance(form, str):
        return LexEntry(form, category, {}, (({}, form),))
    lemma = get_path(leaf, ["lemma"])
    if not isinstance(lemma, str):
        raise RealizationError(f"leaf has neither form nor lemma: {leaf}")
    entries = lexicon.lookup(lemma, category)
    if not entries:
        raise RealizationError(f"no lexicon entry for lemma {lemma!r} with category {category!r}")
    if len(entries) == 1:
        return entries[0]
    prag = _pragmatics(leaf, None)

    def score(e: LexEntry) -> int:
        return sum((1 if prag[k] == v else -1) for k, v in e.features.items() if k in prag)

    return max(entries, key=score)


def leaf_bundle(leaf: Value) -> Dict[str, str]:
    """Inflectional features of a leaf: its ``agr`` bundle plus own features."""
    bundle = {k: v for k, v in _atoms(get_path(leaf, ["agr"])).items() if k in BUNDLE_FEATURES}
    bundle.update({k: v for k, v in _atoms(leaf).items() if k in BUNDLE_FEATURES})
    return bundle


def _add_s(word: str) -> str:
    if word.endswith(("s", "x", "z", "ch", "sh")):
        return word + "es"
    if len(word) > 1 and word[-1] == "y" and word[-2] not in "aeiou":
        return word[:-1] + "ies"
    return word + "s"


def _add_ed(word: str) -> str:
    if word.endswith("e"):
        return word + "d"
    if len(word) > 1 and word[-1] == "y" and word[-2] not in "aeiou":
        return word[:-1] + "ied"
    return word + "ed"


def inflect(entry: LexEntry, bundle: Mapping[str, str]) -> str:
    """Surface form of ``entry`` for ``bundle``.

    The most specific listed form whose features all appear in ``bundle`` wins.
    Without one, regular English endings are applied to the lemma.
    """
    best, best_size = None, -1
    for fb, surface in entry.forms:
        if len(fb) > best_size and all(bundle.get(k) == v for k, v in fb.items()):
            best, best_size = surface, len(fb)
    if best_size > 0:
        return best
    lemma = entry.lemma
    if entry.category == "n" and bundle.get("number") == "pl":
        return _add_s(lemma)
    if entry.category in ("v", "aux"):
        tense = bundle.get("tense")
        if tense == "past":
            guess = _add_ed(lemma)
            warnings.warn(
                f"regular past {guess!r} guessed for {lemma!r}; add a form to the lexicon",
                InflectionWarning,
                stacklevel=2,
            )
            return guess
        if tense == "pres" and bundle.get("number", "sg") == "sg" and bundle.get("person") == "3":
            return _add_s(lemma)
    return best if best is not None else lemma


def _is(h: TypeHierarchy, general: str, node: DerivationNode) -> bool:
    return node.type is not None and h.subsumes(general, node.type)


def apply_agreement(node: DerivationNode, rules: Sequence = (), hierarchy: TypeHierarchy = FLAT) -> DerivationNode:
    """Share agreement bundles along the grammar's agreement rules."""
    children = node.children
    for rule in rules:
        if not _is(hierarchy, rule.mother, node):
            continue
        controller = next((c for c in children if _is(hierarchy, rule.controller, c)), None)
        if controller is None:
            continue
        agr = controller.get("agr")
        if not isinstance(agr, FeatureStructure):
            continue

        def push(n: DerivationNode) -> DerivationNode:
            if _is(hierarchy, rule.target, n):
                out = unify(n.fs, FeatureStructure(hierarchy.top, {"agr": agr}), None, hierarchy)
                if out is None:
                    raise AgreementError(
                        f"agreement conflict between {controller.origin} and {n.origin}: "
                        f"{agr} vs {n.get('agr')}"
                    )
                return replace(n, fs=out[0])
            if rule.through and _is(hierarchy, rule.through, n):
                return replace(n, children=tuple(push(c) for c in n.children))
            return n

        children = tuple(c if c is controller else push(c) for c in children)
    return replace(node, children=tuple(apply_agreement(c, rules, hierarchy) for c in children))


def _spacing(surface: str) -> str:
    return "no_space_before" if surface.startswith(ATTACH_LEFT) else "normal"


def realize_tokens(node: DerivationNode, lexicon: Lexicon) -> List[Token]:
    tokens = []
    for leaf in node.leaves():
        try:
            entry = lex_select(leaf.fs, lexicon)
        except RealizationError as e:
            raise RealizationError(f"{e} (leaf from {leaf.origin})") from e
        surface = inflect(entry, leaf_bundle(leaf.fs))
        tokens.append(Token(surface, _spacing(surface), leaf.origin))
    return tokens


def punctuate(tokens: Sequence[Union[Token, str]], act_type: Optional[str] = None) -> str:
    """Join tokens, capitalize each sentence and add the act's terminal mark."""
    words: List[str] = []
    for tok in tokens:
        text = tok.surface if isinstance(tok, Token) else tok
        text = " ".join(text.split())
        if not text:
            continue
        attach = tok.spacing == "no_space_before" if isinstance(tok, Token) else text.startswith(ATTACH_LEFT)
        if attach and words:
            words[-1] += text
        else:
            words.append(text)
    start = True
    for i, w in enumerate(words):
        if start:
            words[i] = w[:1].upper() + w[1:]
        start = w.endswith(SENTENCE_END)
    text = " ".join(words)
    if text and not text.endswith(SENTENCE_END):
        text += TERMINAL.get(act_type, DEFAULT_TERMINAL)
    return text


def realize(node: DerivationNode, repo, act_type: Optional[str] = None) -> Tuple[str, List[Token]]:
    """Agreement, lexical realization and punctuation for one derivation."""
    agreed = apply_agreement(node, repo.agreement, repo.hierarchy)
    tokens = realize_tokens(agreed, repo.lexicon)
    return punctuate(tokens, act_type), tokens
