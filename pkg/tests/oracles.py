"""Reference implementations used as test oracles.

These deliberately share no search code with the package: they work on plain
resolved trees and enumerate exhaustively.
"""

from itertools import permutations

from mnlg.feature_core import Drs, FeatureStructure, PList, Term, Var


def normalize(value, names=None):
    """Print ``value`` with variables renamed in first-occurrence order."""
    names = {} if names is None else names
    if isinstance(value, Var):
        names.setdefault(value.name, f"V{len(names)}")
        return "?" + names[value.name]
    if isinstance(value, str):
        return repr(value)
    if isinstance(value, FeatureStructure):
        inner = ",".join(f"{k}:{normalize(v, names)}" for k, v in sorted(value.features.items()))
        return f"<{value.type}{{{inner}}}"
    if isinstance(value, Term):
        return f"{value.functor}({','.join(normalize(a, names) for a in value.args)})"
    if isinstance(value, PList):
        tail = "" if value.tail is None else "|" + normalize(value.tail, names)
        return f"[{','.join(normalize(a, names) for a in value.items)}{tail}]"
    raise TypeError(type(value))


def _plain(value):
    """Printed form keeping variable names as they are."""
    return normalize(value, _Identity())


class _Identity(dict):
    def setdefault(self, key, default=None):
        return key

    def __getitem__(self, key):
        return key


def tree_subsumes(general, specific, hierarchy, m=None):
    """Naive one-way matcher over resolved FS trees with atoms and variables."""
    m = {} if m is None else m
    if isinstance(general, Var):
        seen = m.get(general.name)
        if seen is None:
            return {**m, general.name: _plain(specific)}
        return m if seen == _plain(specific) else False
    if isinstance(specific, Var):
        return False
    if isinstance(general, str):
        return m if general == specific else False
    if isinstance(general, FeatureStructure):
        if not isinstance(specific, FeatureStructure):
            return False
        if not hierarchy.subsumes(general.type, specific.type):
            return False
        for k, v in general.features.items():
            if k not in specific.features:
                return False
            m = tree_subsumes(v, specific.features[k], hierarchy, m)
            if m is False:
                return False
        return m
    raise TypeError(type(general))


def is_variant(a, b, hierarchy):
    return tree_subsumes(a, b, hierarchy) is not False and tree_subsumes(b, a, hierarchy) is not False


def _match_term(p, t, m):
    """Match a condition pattern against a ground condition (vars are ``Var``)."""
    if isinstance(p, Var):
        if p.name.startswith("_"):
            return m
        if p.name in m:
            return m if m[p.name] == t else None
        return {**m, p.name: t}
    if isinstance(p, str):
        return m if p == t else None
    if isinstance(p, Term) and isinstance(t, Term) and p.functor == t.functor and len(p.args) == len(t.args):
        for a, b in zip(p.args, t.args):
            m = _match_term(a, b, m)
            if m is None:
                return None
        return m
    return None


def drs_selections(pattern: Drs, target: Drs):
    """Every (bindings, leftover) for the pattern's conditions over the target's.

    Brute force: try every ordered choice of distinct target indices.
    """
    pats = pattern.body.items
    targets = target.body.items
    out = []
    for idx in permutations(range(len(targets)), len(pats)):
        m = {}
        for p, i in zip(pats, idx):
            m = _match_term(p, targets[i], m)
            if m is None:
                break
        if m is None:
            continue
        left = tuple(sorted(repr(targets[i]) for i in range(len(targets)) if i not in idx))
        if pattern.body.rest is None and left:
            continue
        key = (tuple(sorted((k, repr(v)) for k, v in m.items())), left)
        out.append(key)
    return sorted(out)


def model_check(properties, cg_props, referent):
    """Referents other than ``referent`` that have every property."""
    return [r for r, ps in cg_props.items() if r != referent and set(properties) <= set(ps)]


def brute_force_leaf_sequences(node, repo, state=None):
    """All derivations of ``node`` as leaf form/lemma tuples (with repeats).

    Tries every tree for every node (no index), builds the complete solution
    list eagerly, and reads leaves off resolved daughter nodes. Noun phrases
    naming a referent are delegated to the referring module, as in the
    generator; their realization is treated as a black box.
    """
    from mnlg.derivation import leaf_strings
    from mnlg.errors import ReferringError
    from mnlg.feature_core import get_path, resolve, unify_iter
    from mnlg.referring import refer

    h = repo.hierarchy
    deictic = set()
    name = get_path(node, ["currentAct", "speaker", "name"])
    if isinstance(name, str):
        deictic.add(name)
    adds = get_path(node, ["currentAct", "addressees"])
    if isinstance(adds, PList):
        deictic.update(a for a in adds.items if isinstance(a, str))

    def leaf_word(fs, b):
        r = resolve(fs, b)
        form, lemma = get_path(r, ["form"]), get_path(r, ["lemma"])
        if isinstance(form, str):
            return form
        if isinstance(lemma, str):
            return lemma
        return None

    def np_open(fs, b):
        r = resolve(fs, b)
        if not (isinstance(r, FeatureStructure) and h.subsumes("np", r.type)) or "sem" not in r.features:
            return False
        sem = r.features["sem"]
        return isinstance(sem, (Var, Term)) or (isinstance(sem, str) and sem != "none")

    def expand(fs, b, depth):
        if depth > 30:
            return []
        out = []
        for tree in repo.trees:
            t = tree.fresh()
            for b1 in unify_iter(fs, t.mother, b, h):
                if not t.daughters:
                    if isinstance(get_path(resolve(fs, b1), ["form"]), str):
                        out.append(([lambda bb, fs=fs: leaf_word(fs, bb)], b1))
                    continue
                out.extend(seq(t.daughters, b1, depth))
        return out

    def seq(daughters, b, depth):
        partial = [([], b)]
        for d in daughters:
            nxt = []
            for words, bb in partial:
                for w2, b2 in daughter(d, bb, depth):
                    nxt.append((words + w2, b2))
            partial = nxt
        return partial

    def daughter(d, b, depth):
        if d.daughters:
            return seq(d.daughters, b, depth)
        word = leaf_word(d.mother, b)
        if word is not None:
            r = resolve(d.mother, b)
            if not isinstance(get_path(r, ["form"]), str) and not repo.lexicon.has(word, r.type):
                return []
            return [([lambda bb, fs=d.mother: leaf_word(fs, bb)], b)]
        if np_open(d.mother, b):
            sem = resolve(get_path(resolve(d.mother, b), ["sem"]), b)
            try:
                np = refer(sem, repo, state, frozenset(deictic))
            except ReferringError:
                return []
            words = leaf_strings(np)
            return [([lambda bb, w=w: w for w in words], b)]
        return expand(d.mother, b, depth + 1)

    results = []
    for words, b in expand(node, {}, 0):
        results.append(tuple(w(b) for w in words))
    return sorted(results)
