"""Typed feature structures with logic variables.

Values are immutable. A :class:`FeatureStructure` carries a node id (``nid``);
two occurrences of the same node id denote one shared (reentrant) node. Bindings
are plain dicts mapping variable names (``str``) and node ids (``int``) to
values, so unification never mutates its inputs and backtracking is simply
dropping a bindings dict.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, Mapping, Optional, Sequence, Tuple, Union

from mnlg.errors import HierarchyError

__all__ = [
    "Var",
    "FeatureStructure",
    "Term",
    "PList",
    "CondSet",
    "Drs",
    "Value",
    "Bindings",
    "TypeHierarchy",
    "FLAT",
    "deref",
    "unify",
    "unify_iter",
    "resolve",
    "resolve_all",
    "subsumes",
    "variant",
    "get_path",
    "rename_fresh",
    "Renamer",
    "fresh_var",
    "canonical",
    "is_ground",
    "walk_vars",
]

_nids = itertools.count(1)
_fresh = itertools.count(1)


def _next_nid() -> int:
    return next(_nids)


@dataclass(frozen=True)
class Var:
    name: str

    def __repr__(self):
        return f"?{self.name}"

    @property
    def anonymous(self) -> bool:
        return self.name.startswith("_")


@dataclass(frozen=True)
class FeatureStructure:
    type: str
    features: Mapping[str, "Value"] = field(default_factory=dict)
    nid: int = field(default_factory=_next_nid, compare=False, repr=False)

    def __repr__(self):
        from mnlg.notation import format_value

        return f"FS({format_value(self)})"

    def __hash__(self):
        return hash(canonical(self))


@dataclass(frozen=True)
class Term:
    functor: str
    args: Tuple["Value", ...] = ()

    def __repr__(self):
        from mnlg.notation import format_value

        return format_value(self)


@dataclass(frozen=True)
class PList:
    """Ordered list with an optional open tail (``[a,b|?T]``)."""

    items: Tuple["Value", ...] = ()
    tail: Optional["Value"] = None

    def __repr__(self):
        from mnlg.notation import format_value

        return format_value(self)


@dataclass(frozen=True)
class CondSet:
    """Multiset of DRS conditions with an optional rest variable."""

    items: Tuple["Value", ...] = ()
    rest: Optional[Var] = None

    def __repr__(self):
        from mnlg.notation import format_value

        return format_value(self)


@dataclass(frozen=True)
class Drs:
    refs: "Value"
    body: CondSet

    @property
    def referents(self) -> Tuple["Value", ...]:
        return self.refs.items if isinstance(self.refs, PList) else ()

    @property
    def conditions(self) -> Tuple["Value", ...]:
        return self.body.items

    def __repr__(self):
        from mnlg.notation import format_value

        return format_value(self)


Value = Union[str, Var, FeatureStructure, Term, PList, CondSet, Drs]
Bindings = Dict[Union[str, int], Value]


def fresh_var(prefix: str = "G") -> Var:
    return Var(f"{prefix}_{next(_fresh)}")


class TypeHierarchy:
    """Finite type hierarchy with precomputed greatest lower bounds."""

    def __init__(self, edges: Iterable[Tuple[str, str]] = (), top: str = "top"):
        self.top = top
        parents: Dict[str, set] = {top: set()}
        for child, parent in edges:
            if child == top:
                raise HierarchyError(f"{top!r} cannot have a parent")
            parents.setdefault(child, set()).add(parent)
            parents.setdefault(parent, set())
        for name, ps in parents.items():
            if name != top and not ps:
                raise HierarchyError(f"type {name!r} is not declared below {top!r}")
        self._parents = parents
        self.types = frozenset(parents)
        self._ancestors = {t: self._collect_ancestors(t) for t in parents}
        self._descendants: Dict[str, set] = {t: set() for t in parents}
        for t, ancs in self._ancestors.items():
            for a in ancs:
                self._descendants[a].add(t)
        self._glb: Dict[Tuple[str, str], Optional[str]] = {}
        types = sorted(parents)
        for i, a in enumerate(types):
            for b in types[i:]:
                g = self._compute_glb(a, b)
                self._glb[a, b] = self._glb[b, a] = g

    def _collect_ancestors(self, t: str) -> frozenset:
        seen = {t}
        stack = [(t, (t,))]
        while stack:
            node, path = stack.pop()
            for p in self._parents[node]:
                if p in path:
                    raise HierarchyError(f"cycle in type hierarchy through {p!r}")
                seen.add(p)
                stack.append((p, path + (p,)))
        if self.top not in seen:
            raise HierarchyError(f"type {t!r} does not reach {self.top!r}")
        return frozenset(seen)

    def _compute_glb(self, a: str, b: str) -> Optional[str]:
        lower = self._descendants[a] & self._descendants[b]
        if not lower:
            return None
        maximal = [x for x in lower if not any(y != x and y in self._ancestors[x] for y in lower)]
        if len(maximal) > 1:
            raise HierarchyError(f"types {a!r} and {b!r} have no unique GLB: {sorted(maximal)}")
        return maximal[0]

    def __contains__(self, name) -> bool:
        return name in self.types

    def glb(self, a: str, b: str) -> Optional[str]:
        if a == b:
            return a
        return self._glb.get((a, b))

    def subsumes(self, general: str, specific: str) -> bool:
        return general in self._ancestors.get(specific, ())

    def __repr__(self):
        return f"TypeHierarchy({len(self.types)} types)"


class _FlatHierarchy(TypeHierarchy):
    """Accepts any type name; distinct non-top types are incompatible."""

    def __init__(self, top: str = "top"):
        self.top = top
        self.types = frozenset([top])

    def __contains__(self, name) -> bool:
        return True

    def glb(self, a, b):
        if a == b or b == self.top:
            return a
        if a == self.top:
            return b
        return None

    def subsumes(self, general, specific):
        return general == self.top or general == specific


FLAT = _FlatHierarchy()


def deref(value: Value, binds: Mapping) -> Value:
    while True:
        if isinstance(value, Var):
            nxt = binds.get(value.name)
        elif isinstance(value, FeatureStructure):
            nxt = binds.get(value.nid)
        else:
            return value
        if nxt is None:
            return value
        value = nxt


def _children(value: Value) -> Iterable[Value]:
    if isinstance(value, FeatureStructure):
        return value.features.values()
    if isinstance(value, Term):
        return value.args
    if isinstance(value, PList):
        return value.items + ((value.tail,) if value.tail is not None else ())
    if isinstance(value, CondSet):
        return value.items + ((value.rest,) if value.rest is not None else ())
    if isinstance(value, Drs):
        return (value.refs, value.body)
    return ()


def _contains(values: Iterable[Value], names: frozenset, nids: frozenset, binds: Mapping) -> bool:
    stack = list(values)
    while stack:
        v = deref(stack.pop(), binds)
        if isinstance(v, Var):
            if v.name in names:
                return True
        elif isinstance(v, FeatureStructure):
            if v.nid in nids:
                return True
            stack.extend(v.features.values())
        else:
            stack.extend(_children(v))
    return False


def _flatten_list(value: PList, binds) -> Tuple[tuple, Optional[Value]]:
    items = list(value.items)
    tail = value.tail
    while tail is not None:
        tail = deref(tail, binds)
        if isinstance(tail, PList):
            items.extend(tail.items)
            tail = tail.tail
        else:
            break
    return tuple(items), tail


def _flatten_conds(value: CondSet, binds) -> Tuple[tuple, Optional[Var]]:
    items = list(value.items)
    rest = value.rest
    while rest is not None:
        r = deref(rest, binds)
        if isinstance(r, CondSet):
            items.extend(r.items)
            rest = r.rest
        else:
            rest = r
            break
    return tuple(items), rest


def _bind_var(var: Var, value: Value, binds) -> Iterator[Bindings]:
    if _contains((value,), frozenset([var.name]), frozenset(), binds):
        return
    nb = dict(binds)
    nb[var.name] = value
    yield nb


def _unify(a: Value, b: Value, binds, h) -> Iterator[Bindings]:
    a = deref(a, binds)
    b = deref(b, binds)
    if a is b:
        yield binds
        return
    if isinstance(a, Var):
        if isinstance(b, Var) and a.name == b.name:
            yield binds
        else:
            yield from _bind_var(a, b, binds)
        return
    if isinstance(b, Var):
        yield from _bind_var(b, a, binds)
        return
    if isinstance(a, str):
        if isinstance(b, str) and a == b:
            yield binds
        return
    if type(a) is not type(b):
        return
    if isinstance(a, FeatureStructure):
        yield from _unify_fs(a, b, binds, h)
    elif isinstance(a, Term):
        if a.functor != b.functor or len(a.args) != len(b.args):
            return
        yield from _unify_pairs(list(zip(a.args, b.args)), binds, h)
    elif isinstance(a, PList):
        yield from _unify_lists(a, b, binds, h)
    elif isinstance(a, Drs):
        for b1 in _unify(a.refs, b.refs, binds, h):
            yield from _unify_conds(a.body, b.body, b1, h)
    elif isinstance(a, CondSet):
        yield from _unify_conds(a, b, binds, h)


def _unify_fs(a: FeatureStructure, b: FeatureStructure, binds, h) -> Iterator[Bindings]:
    if a.nid == b.nid:
        yield binds
        return
    t = h.glb(a.type, b.type)
    if t is None:
        return
    if _contains(
        list(a.features.values()) + list(b.features.values()),
        frozenset(),
        frozenset([a.nid, b.nid]),
        binds,
    ):
        return
    merged = FeatureStructure(t, {**b.features, **a.features})
    nb = dict(binds)
    nb[a.nid] = merged
    nb[b.nid] = merged
    shared = [(a.features[k], b.features[k]) for k in a.features if k in b.features]
    yield from _unify_pairs(shared, nb, h)


def _unify_pairs(pairs: Sequence[Tuple[Value, Value]], binds, h) -> Iterator[Bindings]:
    if not pairs:
        yield binds
        return
    (x, y), rest = pairs[0], pairs[1:]
    for b1 in _unify(x, y, binds, h):
        yield from _unify_pairs(rest, b1, h)


def _unify_lists(a: PList, b: PList, binds, h) -> Iterator[Bindings]:
    ia, ta = _flatten_list(a, binds)
    ib, tb = _flatten_list(b, binds)
    if len(ia) > len(ib):
        ia, ta, ib, tb = ib, tb, ia, ta
    n = len(ia)
    pairs = list(zip(ia, ib[:n]))
    if len(ib) > n:
        if ta is None:
            return
        pairs.append((ta, PList(ib[n:], tb)))
    elif ta is None and tb is None:
        pass
    elif ta is None or tb is None:
        pairs.append((ta if ta is not None else tb, PList()))
    else:
        pairs.append((ta, tb))
    yield from _unify_pairs(pairs, binds, h)


def _match_injective(pats: tuple, targets: tuple, binds, h) -> Iterator[Tuple[Bindings, tuple]]:
    """Map every pattern item to a distinct target item; yield leftovers."""
    if not pats:
        yield binds, targets
        return
    first, rest = pats[0], pats[1:]
    for j, target in enumerate(targets):
        for b1 in _unify(first, target, binds, h):
            yield from _match_injective(rest, targets[:j] + targets[j + 1 :], b1, h)


def _match_partial(pats: tuple, targets: tuple, binds, h) -> Iterator[Tuple[Bindings, tuple, tuple]]:
    """Each pattern item either pairs with a distinct target or stays unmatched."""
    if not pats:
        yield binds, (), targets
        return
    first, rest = pats[0], pats[1:]
    for j, target in enumerate(targets):
        for b1 in _unify(first, target, binds, h):
            yield from _match_partial(rest, targets[:j] + targets[j + 1 :], b1, h)
    for b1, un_p, un_t in _match_partial(rest, targets, binds, h):
        yield b1, (first,) + un_p, un_t


def _unify_conds(a: CondSet, b: CondSet, binds, h) -> Iterator[Bindings]:
    ia, ra = _flatten_conds(a, binds)
    ib, rb = _flatten_conds(b, binds)
    if ra is None and rb is not None:
        ia, ra, ib, rb = ib, rb, ia, ra
    if rb is None:
        if ra is None:
            if len(ia) != len(ib):
                return
            for b1, _ in _match_injective(ia, ib, binds, h):
                yield b1
            return
        if len(ia) > len(ib):
            return
        for b1, leftover in _match_injective(ia, ib, binds, h):
            yield from _unify(ra, CondSet(leftover), b1, h)
        return
    if ra.name == rb.name:
        if len(ia) != len(ib):
            return
        for b1, _ in _match_injective(ia, ib, binds, h):
            yield b1
        return
    for b1, un_a, un_b in _match_partial(ia, ib, binds, h):
        z = fresh_var("R")
        for b2 in _unify(ra, CondSet(un_b, z), b1, h):
            yield from _unify(rb, CondSet(un_a, z), b2, h)


def unify_iter(a: Value, b: Value, binds: Optional[Mapping] = None, hierarchy: TypeHierarchy = FLAT) -> Iterator[Bindings]:
    """Yield every most general unifier of ``a`` and ``b`` as a new bindings dict.

    Only DRS condition sets make unification nondeterministic; everything else
    yields at most once.
    """
    start = dict(binds) if binds else {}
    for nb in _unify(a, b, start, hierarchy):
        yield nb if nb is not start else dict(nb)


def unify(a: Value, b: Value, binds: Optional[Mapping] = None, hierarchy: TypeHierarchy = FLAT):
    """First unifier: ``(merged value, bindings)`` or ``None`` on failure."""
    for nb in unify_iter(a, b, binds, hierarchy):
        return resolve(a, nb), nb
    return None


def resolve(value: Value, binds: Optional[Mapping] = None) -> Value:
    """Fully dereference ``value``; shared nodes stay shared in the copy."""
    return resolve_all([value], binds)[0]


def resolve_all(values: Sequence[Value], binds: Optional[Mapping] = None) -> list:
    """Resolve several values with one memo so nodes shared between them stay shared."""
    binds = binds or {}
    memo: Dict[int, FeatureStructure] = {}

    def walk(v):
        v = deref(v, binds)
        if isinstance(v, FeatureStructure):
            done = memo.get(v.nid)
            if done is None:
                done = FeatureStructure(v.type, {k: walk(x) for k, x in v.features.items()})
                memo[v.nid] = done
            return done
        if isinstance(v, Term):
            return Term(v.functor, tuple(walk(x) for x in v.args))
        if isinstance(v, PList):
            items, tail = _flatten_list(v, binds)
            return PList(tuple(walk(x) for x in items), None if tail is None else walk(tail))
        if isinstance(v, CondSet):
            items, rest = _flatten_conds(v, binds)
            return CondSet(tuple(walk(x) for x in items), rest)
        if isinstance(v, Drs):
            return Drs(walk(v.refs), walk(v.body))
        return v

    return [walk(v) for v in values]


def get_path(value: Value, path: Sequence[str], binds: Optional[Mapping] = None):
    """Follow ``path`` through features; ``None`` when any step is missing."""
    binds = binds or {}
    v = deref(value, binds)
    for attr in path:
        if not isinstance(v, FeatureStructure) or attr not in v.features:
            return None
        v = deref(v.features[attr], binds)
    return v


def walk_vars(value: Value, binds: Optional[Mapping] = None) -> Iterator[Var]:
    """Unbound variables reachable from ``value``, in depth-first order."""
    binds = binds or {}
    seen = set()
    stack = [value]
    while stack:
        v = deref(stack.pop(), binds)
        if isinstance(v, Var):
            if v.name not in seen:
                seen.add(v.name)
                yield v
        elif isinstance(v, FeatureStructure):
            if v.nid in seen:
                continue
            seen.add(v.nid)
            stack.extend(reversed(list(v.features.values())))
        else:
            stack.extend(reversed(list(_children(v))))


def is_ground(value: Value, binds: Optional[Mapping] = None) -> bool:
    return next(walk_vars(value, binds), None) is None


class Renamer:
    """Copies values with fresh variable names and node ids.

    One instance renames several values consistently, e.g. a tree's mother and
    all of its daughters.
    """

    def __init__(self, suffix=None):
        self.suffix = next(_fresh) if suffix is None else suffix
        self._vars: Dict[str, Var] = {}
        self._nodes: Dict[int, FeatureStructure] = {}

    def var(self, v: Var) -> Var:
        new = self._vars.get(v.name)
        if new is None:
            new = self._vars[v.name] = Var(f"{v.name}_{self.suffix}")
        return new

    def __call__(self, value: Value) -> Value:
        if isinstance(value, Var):
            return self.var(value)
        if isinstance(value, FeatureStructure):
            done = self._nodes.get(value.nid)
            if done is None:
                done = FeatureStructure(value.type, {k: self(x) for k, x in value.features.items()})
                self._nodes[value.nid] = done
            return done
        if isinstance(value, Term):
            return Term(value.functor, tuple(self(x) for x in value.args))
        if isinstance(value, PList):
            return PList(tuple(self(x) for x in value.items), None if value.tail is None else self(value.tail))
        if isinstance(value, CondSet):
            return CondSet(tuple(self(x) for x in value.items), None if value.rest is None else self.var(value.rest))
        if isinstance(value, Drs):
            return Drs(self(value.refs), self(value.body))
        return value


def rename_fresh(value: Value, suffix=None) -> Value:
    return Renamer(suffix)(value)


def canonical(value: Value) -> str:
    """Order-insensitive printed form: sorted features and condition sets."""
    if isinstance(value, Var):
        return "?" + value.name
    if isinstance(value, str):
        return repr(value)
    if isinstance(value, FeatureStructure):
        feats = ",".join(f"{k}:{canonical(v)}" for k, v in sorted(value.features.items()))
        return f"<{value.type}{{{feats}}}"
    if isinstance(value, Term):
        return f"{value.functor}({','.join(canonical(a) for a in value.args)})"
    if isinstance(value, PList):
        tail = "" if value.tail is None else "|" + canonical(value.tail)
        return f"[{','.join(canonical(a) for a in value.items)}{tail}]"
    if isinstance(value, CondSet):
        rest = "" if value.rest is None else "|" + canonical(value.rest)
        return "{" + ",".join(sorted(canonical(a) for a in value.items)) + rest + "}"
    if isinstance(value, Drs):
        return f"drs({canonical(value.refs)},{canonical(value.body)})"
    return repr(value)


def _match(g: Value, s: Value, m: dict, h) -> Iterator[dict]:
    """One-way matching: instantiate ``g``'s variables to obtain ``s``."""
    if isinstance(g, Var):
        if g.name in m:
            if canonical(m[g.name]) == canonical(s):
                yield m
            return
        yield {**m, g.name: s}
        return
    if isinstance(s, Var):
        return
    if isinstance(g, str):
        if g == s:
            yield m
        return
    if type(g) is not type(s):
        return
    if isinstance(g, FeatureStructure):
        if not h.subsumes(g.type, s.type) or not set(g.features) <= set(s.features):
            return
        yield from _match_pairs([(g.features[k], s.features[k]) for k in g.features], m, h)
    elif isinstance(g, Term):
        if g.functor == s.functor and len(g.args) == len(s.args):
            yield from _match_pairs(list(zip(g.args, s.args)), m, h)
    elif isinstance(g, PList):
        gi, gt = _flatten_list(g, {})
        si, st = _flatten_list(s, {})
        if len(gi) > len(si) or (gt is None and (len(gi) != len(si) or st is not None)):
            return
        pairs = list(zip(gi, si))
        if gt is not None:
            pairs.append((gt, PList(si[len(gi) :], st) if len(si) > len(gi) or st is None else st))
        yield from _match_pairs(pairs, m, h)
    elif isinstance(g, Drs):
        for m1 in _match(g.refs, s.refs, m, h):
            yield from _match(g.body, s.body, m1, h)
    elif isinstance(g, CondSet):
        yield from _match_condset(g, s, m, h)


def _match_condset(g: CondSet, s: CondSet, m, h) -> Iterator[dict]:
    if g.rest is None and (s.rest is not None or len(g.items) != len(s.items)):
        return
    if len(g.items) > len(s.items):
        return

    def assign(pats, targets, m):
        if not pats:
            yield m, targets
            return
        for j, t in enumerate(targets):
            for m1 in _match(pats[0], t, m, h):
                yield from assign(pats[1:], targets[:j] + targets[j + 1 :], m1)

    for m1, left in assign(g.items, s.items, m):
        if g.rest is None:
            yield m1
        else:
            leftover = CondSet(left, s.rest) if (left or s.rest is None) else s.rest
            yield from _match(g.rest, leftover, m1, h)


def _match_pairs(pairs, m, h) -> Iterator[dict]:
    if not pairs:
        yield m
        return
    (x, y), rest = pairs[0], pairs[1:]
    for m1 in _match(x, y, m, h):
        yield from _match_pairs(rest, m1, h)


def subsumes(general: Value, specific: Value, hierarchy: TypeHierarchy = FLAT, binds: Optional[Mapping] = None) -> bool:
    """True iff ``specific`` is an instance of ``general``."""
    g = resolve(general, binds)
    s = resolve(specific, binds)
    return next(_match(g, s, {}, hierarchy), None) is not None


def variant(a: Value, b: Value, hierarchy: TypeHierarchy = FLAT) -> bool:
    """Alphabetic variants: each subsumes the other."""
    return subsumes(a, b, hierarchy) and subsumes(b, a, hierarchy)
