"""Derivation trees produced by the generator."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterator, Optional, Tuple

from mnlg.feature_core import FeatureStructure, Value, get_path, resolve

INPUT = "input"
REFERRING = "referring"


@dataclass(frozen=True)
class DerivationNode:
    """A node of the deep syntactic structure.

    ``origin`` is ``"input"`` for the root, ``"referring"`` for noun phrases
    built by the referring-expression module, and otherwise the id of the tree
    (or tree daughter) that introduced the node. ``tree`` names the repository
    tree whose mother this node was matched against, if any.
    """

    fs: Value
    children: Tuple["DerivationNode", ...] = ()
    origin: str = INPUT
    tree: Optional[str] = None
    referent: Optional[str] = None

    def leaves(self) -> Iterator["DerivationNode"]:
        if not self.children:
            yield self
            return
        for c in self.children:
            yield from c.leaves()

    def walk(self) -> Iterator["DerivationNode"]:
        yield self
        for c in self.children:
            yield from c.walk()

    def resolved(self, binds) -> "DerivationNode":
        return replace(
            self,
            fs=resolve(self.fs, binds),
            children=tuple(c.resolved(binds) for c in self.children),
        )

    def get(self, *path: str):
        return get_path(self.fs, path)

    @property
    def type(self) -> Optional[str]:
        return self.fs.type if isinstance(self.fs, FeatureStructure) else None


def leaf_strings(node: DerivationNode) -> Tuple[str, ...]:
    """Literal form or lemma of every leaf, left to right."""
    out = []
    for leaf in node.leaves():
        form = leaf.get("form")
        if isinstance(form, str):
            out.append(form)
        else:
            lemma = leaf.get("lemma")
            out.append(lemma if isinstance(lemma, str) else "?")
    return tuple(out)


def referents_mentioned(node: DerivationNode) -> Tuple[str, ...]:
    return tuple(n.referent for n in node.walk() if n.origin == REFERRING and n.referent)
