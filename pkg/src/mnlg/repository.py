"""Tree repository: grammar rules, templates and canned text in one store.

A grammar file has four kinds of sections::

    hierarchy { s < phrase. np < phrase. phrase < top. }
    conditions { type: 2. arg1: 2. }
    agreement { s: np -> v through vp. }
    tree greeting {
      mother: <s & currentAct!type!greeting & sem!"none"
      daughters: [
        - <s & form!"hello!"
        - tree { mother: <fragment daughters: [ - <s & form!"there" ] }
      ]
    }
    lexicon {
      lex car : n { number=sg person=3 forms { number=pl -> "cars" } }
    }

Trees are tried in file order; that order is the backtracking order.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from mnlg.errors import FSSyntaxError, GrammarError, HierarchyError
from mnlg.feature_core import (
    Drs,
    FeatureStructure,
    Renamer,
    TypeHierarchy,
    Value,
    Var,
    deref,
    get_path,
    walk_vars,
)
from mnlg.notation import FSParser, Lexer
from mnlg.realizer import LexEntry, Lexicon
from mnlg.semantics import DEFAULT_CONDITIONS

log = logging.getLogger(__name__)

__all__ = [
    "GenTree",
    "AgreementRule",
    "Repository",
    "load_repository",
    "parse_grammar",
    "candidates",
    "classify",
]


@dataclass(frozen=True)
class GenTree:
    """``(Node, [Tree1, Tree2, ...])``: a mother node and ordered daughters."""

    id: str
    mother: FeatureStructure
    daughters: Tuple["GenTree", ...] = ()
    # rest variables of the mother's DRS pattern that no daughter mentions
    dropped_rest: Tuple[Var, ...] = ()
    # a matched condition variable is never passed to a daughter
    drops_content: bool = False

    def fresh(self, renamer: Optional[Renamer] = None) -> "GenTree":
        r = renamer or Renamer()
        return GenTree(
            self.id,
            r(self.mother),
            tuple(d.fresh(r) for d in self.daughters),
            tuple(r.var(v) for v in self.dropped_rest),
            self.drops_content,
        )

    @property
    def is_leaf(self) -> bool:
        return not self.daughters

    def nodes(self):
        yield self.mother
        for d in self.daughters:
            yield from d.nodes()


@dataclass(frozen=True)
class AgreementRule:
    """At nodes of type ``mother``, the first ``controller`` daughter's ``agr``
    is shared with every ``target`` daughter and with ``target`` nodes found
    inside ``through`` daughters."""

    mother: str
    controller: str
    target: str
    through: Optional[str] = None


def _act_type(fs: Value) -> Optional[str]:
    t = get_path(fs, ["currentAct", "type"])
    return t if isinstance(t, str) else None


@dataclass
class Repository:
    trees: List[GenTree]
    hierarchy: TypeHierarchy
    lexicon: Lexicon = field(default_factory=Lexicon)
    agreement: List[AgreementRule] = field(default_factory=list)
    conditions: Dict[str, int] = field(default_factory=lambda: dict(DEFAULT_CONDITIONS))
    source: Optional[str] = None

    def __post_init__(self):
        self.by_id: Dict[str, GenTree] = {}
        for t in self.trees:
            if t.id in self.by_id:
                raise GrammarError(f"duplicate tree id {t.id!r}")
            self.by_id[t.id] = t
        self.index: Dict[Tuple[str, Optional[str]], List[str]] = {}
        for t in self.trees:
            self.index.setdefault((t.mother.type, _act_type(t.mother)), []).append(t.id)
        self._order = {t.id: i for i, t in enumerate(self.trees)}
        self._cache: Dict[Tuple[str, Optional[str]], Tuple[GenTree, ...]] = {}

    def candidates(self, node: Value, binds=None) -> Tuple[GenTree, ...]:
        node = deref(node, binds or {})
        if not isinstance(node, FeatureStructure):
            return tuple(self.trees)
        act = get_path(node, ["currentAct", "type"], binds)
        key = (node.type, act if isinstance(act, str) else None)
        hit = self._cache.get(key)
        if hit is None:
            ids = []
            for (tree_type, tree_act), tids in self.index.items():
                if self.hierarchy.glb(key[0], tree_type) is None:
                    continue
                if tree_act is not None and key[1] is not None and tree_act != key[1]:
                    continue
                ids.extend(tids)
            ids.sort(key=self._order.__getitem__)
            hit = self._cache[key] = tuple(self.by_id[i] for i in ids)
        return hit

    def __len__(self):
        return len(self.trees)


def candidates(repo: Repository, node: Value, binds=None) -> Tuple[GenTree, ...]:
    return repo.candidates(node, binds)


def classify(tree: GenTree) -> str:
    """``canned``, ``template`` or ``rule`` (diagnostic only)."""
    form = get_path(tree.mother, ["form"])
    if not tree.daughters:
        return "canned" if isinstance(form, str) else "rule"
    sem = get_path(tree.mother, ["sem"])
    pattern = isinstance(sem, Drs)
    has_text = any(isinstance(get_path(d.mother, ["form"]), str) for d in tree.daughters)
    return "template" if has_text and not pattern else "rule"


class _GrammarParser:
    def __init__(self, text: str, source: Optional[str]):
        self.lx = Lexer(text, source)
        self.source = source
        self.edges: List[Tuple[str, str]] = []
        self.declared = False
        self.hierarchy: Optional[TypeHierarchy] = None
        self.trees: List[GenTree] = []
        self.entries: List[LexEntry] = []
        self.agreement: List[AgreementRule] = []
        self.conditions = dict(DEFAULT_CONDITIONS)

    def parse(self) -> Repository:
        lx = self.lx
        while lx.peek().kind != "eof":
            tok = lx.peek()
            word = lx.expect_name()
            if word == "hierarchy":
                self._hierarchy()
            elif word == "conditions":
                self._conditions()
            elif word == "agreement":
                self._agreement()
            elif word == "tree":
                if not self.declared:
                    lx.error("hierarchy must be declared before trees", tok)
                self.trees.append(self._top_tree())
            elif word == "lexicon":
                self._lexicon()
            else:
                lx.error(f"unknown section {word!r}", tok)
        h = self._require_hierarchy()
        for entry in self.entries:
            if entry.category not in h:
                raise GrammarError(f"lexicon entry {entry.lemma!r}: unknown category {entry.category!r}")
        return Repository(self.trees, h, Lexicon(self.entries), self.agreement, self.conditions, self.source)

    def _require_hierarchy(self) -> TypeHierarchy:
        if self.hierarchy is None:
            try:
                self.hierarchy = TypeHierarchy(self.edges)
            except HierarchyError as e:
                raise GrammarError(f"{self.source or 'grammar'}: {e}") from e
        return self.hierarchy

    def _hierarchy(self):
        lx = self.lx
        if self.hierarchy is not None:
            lx.error("hierarchy must be declared before trees")
        self.declared = True
        lx.expect("{")
        while not lx.accept("}"):
            child = lx.expect_name()
            lx.expect("<")
            self.edges.append((child, lx.expect_name()))
            while lx.accept(","):
                self.edges.append((child, lx.expect_name()))
            lx.expect(".")

    def _conditions(self):
        lx = self.lx
        lx.expect("{")
        while not lx.accept("}"):
            name = lx.expect_name()
            lx.expect(":")
            arity = lx.expect_name()
            if not arity.isdigit():
                lx.error("arity must be an integer")
            self.conditions[name] = int(arity)
            lx.expect(".")

    def _agreement(self):
        lx = self.lx
        h = self._require_hierarchy()
        lx.expect("{")
        while not lx.accept("}"):
            names = [lx.expect_name()]
            lx.expect(":")
            names.append(lx.expect_name())
            lx.expect("->")
            names.append(lx.expect_name())
            through = None
            if lx.accept("through"):
                through = lx.expect_name()
                names.append(through)
            for n in names:
                if n not in h:
                    lx.error(f"unknown type {n!r} in agreement rule")
            lx.expect(".")
            self.agreement.append(AgreementRule(names[0], names[1], names[2], through))

    def _top_tree(self) -> GenTree:
        h = self._require_hierarchy()
        tok = self.lx.peek()
        tree_id = self.lx.expect_name()
        parser = FSParser(self.lx, h)
        try:
            raw = self._tree_body(parser, tree_id)
        except FSSyntaxError as e:
            raise GrammarError(f"tree {tree_id!r}: {e}") from e
        flat: List[Value] = []

        def collect(t):
            flat.append(t[1])
            for d in t[2]:
                collect(d)

        collect(raw)
        resolved = iter(parser.finish_all(flat))

        def rebuild(t) -> GenTree:
            mother = next(resolved)
            if not isinstance(mother, FeatureStructure):
                self.lx.error(f"tree {t[0]!r}: node is not a feature structure", tok)
            return GenTree(t[0], mother, tuple(rebuild(d) for d in t[2]))

        tree = rebuild(raw)
        return GenTree(tree.id, tree.mother, tree.daughters, *_coverage_info(tree))

    def _tree_body(self, parser: FSParser, tree_id: str):
        lx = self.lx
        lx.expect("{")
        lx.expect("mother")
        lx.expect(":")
        mother = parser.conj()
        daughters = []
        if lx.accept("daughters"):
            lx.expect(":")
            lx.expect("[")
            while not lx.accept("]"):
                lx.expect("-")
                sub_id = f"{tree_id}.{len(daughters) + 1}"
                if lx.at("tree") and (lx.at("{", 1) or (lx.peek(1).kind == "name" and lx.at("{", 2))):
                    lx.next()
                    if lx.peek().kind == "name":
                        sub_id = lx.next().text
                    daughters.append(self._tree_body(parser, sub_id))
                else:
                    daughters.append((sub_id, parser.conj(), []))
        lx.expect("}")
        return (tree_id, mother, daughters)

    def _lexicon(self):
        lx = self.lx
        lx.expect("{")
        while not lx.accept("}"):
            lx.expect("lex")
            lemma = self._word()
            lx.expect(":")
            category = lx.expect_name()
            lx.expect("{")
            features: Dict[str, str] = {}
            forms: List[Tuple[Dict[str, str], str]] = []
            while not lx.accept("}"):
                if lx.accept("forms"):
                    lx.expect("{")
                    while not lx.accept("}"):
                        bundle: Dict[str, str] = {}
                        if not lx.accept("default"):
                            while not lx.at("->"):
                                k, v = self._feature()
                                bundle[k] = v
                        lx.expect("->")
                        forms.append((bundle, self._word()))
                else:
                    k, v = self._feature()
                    features[k] = v
            if not forms:
                forms.append(({}, lemma))
            self.entries.append(LexEntry(lemma, category, features, tuple(forms)))

    def _feature(self):
        k = self.lx.expect_name()
        self.lx.expect("=")
        return k, self._word()

    def _word(self) -> str:
        tok = self.lx.next()
        if tok.kind == "str":
            return tok.text[1:-1]
        if tok.kind == "name":
            return tok.text
        self.lx.error(f"expected a word, found {tok.text!r}", tok)


def _coverage_info(tree: GenTree) -> Tuple[Tuple[Var, ...], bool]:
    """Rest variables and whole-condition variables the daughters never see."""
    sem = get_path(tree.mother, ["sem"])
    if sem is None:
        return (), False
    rests, items = [], []
    stack = [sem]
    while stack:
        v = stack.pop()
        if isinstance(v, Drs):
            if v.body.rest is not None:
                rests.append(v.body.rest)
            items.extend(c for c in v.body.items if isinstance(c, Var))
            stack.extend(v.body.items)
        elif hasattr(v, "args"):
            stack.extend(v.args)
    used = set()
    for d in tree.daughters:
        for node in d.nodes():
            used.update(x.name for x in walk_vars(node))
    dropped = tuple(r for r in rests if r.name not in used)
    return dropped, any(c.name not in used for c in items)


def parse_grammar(text: str, source: Optional[str] = None) -> Repository:
    try:
        return _GrammarParser(text, source).parse()
    except FSSyntaxError as e:
        raise GrammarError(str(e)) from e


def load_repository(path: Union[str, Path]) -> Repository:
    """Load, validate and index a grammar file."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise GrammarError(f"cannot read grammar {path}: {e}") from e
    repo = parse_grammar(text, str(path))
    log.debug("loaded %d trees and %d lexical entries from %s", len(repo.trees), len(repo.lexicon), path)
    return repo
