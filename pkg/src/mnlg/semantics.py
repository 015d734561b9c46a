"""Discourse Representation Structures.

A DRS is ``drs([r1,...],[cond,...])``; its conditions are a multiset so that
``drs(_,[type(?E,?T)|?R])`` matches whichever condition fits, whatever order the
planner emitted them in. Only ``negation`` nests.
"""

from __future__ import annotations

from typing import Iterator, List, Mapping, Optional, Set

from mnlg.errors import FSSyntaxError, MnlgError
from mnlg.feature_core import FLAT, CondSet, Drs, PList, Term, Value, deref, unify_iter, walk_vars
from mnlg.notation import FSParser, Lexer, format_value

DEFAULT_CONDITIONS = {"type": 2, "arg1": 2, "arg2": 2, "negation": 1}


class DrsError(MnlgError):
    pass


def parse_drs(text: str, pattern: bool = False, registry: Optional[Mapping[str, int]] = None) -> Drs:
    """Parse DRS notation; ``_`` is accepted only when ``pattern`` is true."""
    lx = Lexer(text.strip())
    parser = FSParser(lx, FLAT, allow_anonymous=pattern)
    value = parser.finish(parser.conj())
    if lx.peek().kind != "eof":
        lx.error(f"trailing input {lx.peek().text!r}")
    if not isinstance(value, Drs):
        raise FSSyntaxError(f"expected drs(...), got {format_value(value)}", 1, 1)
    check_drs(value, registry or DEFAULT_CONDITIONS)
    return value


def check_drs(drs: Drs, registry: Mapping[str, int] = DEFAULT_CONDITIONS) -> None:
    refs = [r for r in drs.referents if isinstance(r, str)]
    seen: Set[str] = set()
    for r in refs:
        if r in seen:
            raise DrsError(f"duplicate referent {r!r}")
        seen.add(r)
    for cond in drs.conditions:
        if not isinstance(cond, Term):
            raise DrsError(f"condition is not a predication: {format_value(cond)}")
        arity = registry.get(cond.functor)
        if arity is None:
            raise DrsError(f"unregistered condition {cond.functor}/{len(cond.args)}")
        if arity != len(cond.args):
            raise DrsError(f"{cond.functor} expects {arity} arguments, got {len(cond.args)}")
        if cond.functor == "negation":
            if not isinstance(cond.args[0], Drs):
                raise DrsError("negation must wrap a drs")
            check_drs(cond.args[0], registry)


def format_drs(drs: Drs) -> str:
    return format_value(drs)


def match_pattern(pattern: Value, target: Value, binds: Optional[Mapping] = None) -> Iterator[dict]:
    """One bindings dict per way of selecting target conditions for the pattern."""
    return unify_iter(pattern, target, binds, FLAT)


def free_variables(value: Value, binds: Optional[Mapping] = None) -> Set[str]:
    """Names of unbound, non-anonymous variables reachable from ``value``."""
    return {v.name for v in walk_vars(value, binds) if not v.anonymous}


def _arg(cond: Term, i: int):
    return cond.args[i] if len(cond.args) > i else None


def conditions_about(referent: str, cg: Drs) -> List[Term]:
    """Property conditions of ``referent`` in ``cg``, in condition order.

    Direct predications ``type(r,P)`` count, as do ``type(e,P)`` conditions
    whose eventuality has ``arg1(e,r)``. Negations are skipped.
    """
    if referent not in cg.referents:
        raise DrsError(f"unknown referent {referent!r}")
    conds = [c for c in cg.conditions if isinstance(c, Term) and c.functor != "negation"]
    linked = {_arg(c, 0) for c in conds if c.functor == "arg1" and _arg(c, 1) == referent}
    linked.discard(None)
    out = []
    for c in conds:
        subject = _arg(c, 0)
        if c.functor == "type" and (subject == referent or subject in linked):
            out.append(c)
        elif c.functor not in ("type", "arg1", "arg2") and subject == referent:
            out.append(c)
    return out


def properties_of(referent: str, cg: Drs) -> List[str]:
    """Property names of ``referent`` (second argument of its type conditions)."""
    return [c.args[1] for c in conditions_about(referent, cg) if c.functor == "type" and isinstance(c.args[1], str)]


def drs_referents(drs: Drs) -> List[str]:
    return [r for r in drs.referents if isinstance(r, str)]


def is_drs(value: Value, binds: Optional[Mapping] = None) -> bool:
    return isinstance(deref(value, binds or {}), Drs)


def empty_drs() -> Drs:
    return Drs(PList(), CondSet())
