import pytest
from hypothesis import given, settings

from mnlg.errors import HierarchyError
from mnlg.feature_core import (
    FLAT,
    CondSet,
    FeatureStructure,
    PList,
    Term,
    TypeHierarchy,
    Var,
    canonical,
    get_path,
    is_ground,
    rename_fresh,
    resolve,
    subsumes,
    unify,
    unify_iter,
    variant,
)
from mnlg.notation import parse_fs

from oracles import is_variant, tree_subsumes
from strategies import HIERARCHY, fs_nodes

TOP = FeatureStructure("top", {})


def u(a, b, h=HIERARCHY):
    out = unify(a, b, None, h)
    return None if out is None else out[0]


class TestHierarchy:
    def test_glb_of_diamond(self):
        assert HIERARCHY.glb("a", "b") == "c"
        assert HIERARCHY.glb("c", "a") == "c"
        assert HIERARCHY.glb("d", "b") is None
        assert HIERARCHY.glb("top", "d") == "d"

    def test_subsumes(self):
        assert HIERARCHY.subsumes("top", "c")
        assert HIERARCHY.subsumes("a", "d")
        assert not HIERARCHY.subsumes("b", "d")

    def test_ambiguous_glb_rejected(self):
        with pytest.raises(HierarchyError):
            TypeHierarchy([("a", "top"), ("b", "top"), ("c", "a"), ("c", "b"), ("e", "a"), ("e", "b")])

    def test_cycle_rejected(self):
        with pytest.raises(HierarchyError):
            TypeHierarchy([("a", "b"), ("b", "a")])

    def test_flat_accepts_any_name(self):
        assert FLAT.glb("top", "whatever") == "whatever"
        assert FLAT.glb("p", "q") is None


class TestUnify:
    def test_types_meet(self):
        assert u(FeatureStructure("a"), FeatureStructure("b")).type == "c"

    def test_type_clash(self):
        assert u(FeatureStructure("d"), FeatureStructure("b")) is None

    def test_atom_clash(self):
        assert u(parse_fs("f!x"), parse_fs("f!y")) is None

    def test_features_merge(self):
        out = u(parse_fs("f!x"), parse_fs("g!y"))
        assert out.features == {"f": "x", "g": "y"}

    def test_variables_shared_across_paths(self):
        a = parse_fs("f!?X & g!?X")
        out = u(a, parse_fs("f!x"))
        assert get_path(out, ["g"]) == "x"

    def test_occurs_check(self):
        assert unify(parse_fs("sem!?X"), parse_fs("sem!f(?X)")) is None

    def test_reentrancy_forwarding(self):
        a = parse_fs("f!?N & g!?N")
        out = u(a, parse_fs("f!(h!x) & g!(k!y)"), FLAT)
        assert get_path(out, ["f", "k"]) == "y"
        assert get_path(out, ["g", "h"]) == "x"

    def test_inputs_unchanged(self):
        a, b = parse_fs("f!?X"), parse_fs("f!x")
        before = canonical(a), canonical(b)
        unify(a, b)
        assert (canonical(a), canonical(b)) == before

    def test_terms_and_lists(self):
        assert u(Term("t", ("x", Var("Y"))), Term("t", ("x", "z")), FLAT) == Term("t", ("x", "z"))
        assert u(Term("t", ("x",)), Term("s", ("x",)), FLAT) is None
        out = u(PList(("a",), Var("T")), PList(("a", "b", "c")), FLAT)
        assert out == PList(("a", "b", "c"))

    def test_condset_open_closed_counts(self):
        pat = CondSet((Term("p", (Var("X"),)),), Var("R"))
        tgt = CondSet((Term("p", ("a",)), Term("p", ("b",)), Term("q", ("a",))))
        sols = list(unify_iter(pat, tgt))
        assert len(sols) == 2
        for b in sols:
            assert len(resolve(Var("R"), b).items) == 2

    def test_condset_closed_needs_bijection(self):
        pat = CondSet((Term("p", (Var("X"),)),))
        tgt = CondSet((Term("p", ("a",)), Term("p", ("b",))))
        assert list(unify_iter(pat, tgt)) == []


class TestHelpers:
    def test_get_path_missing(self):
        assert get_path(parse_fs("f!x"), ["g"]) is None
        assert get_path(parse_fs("f!x"), ["f", "g"]) is None

    def test_is_ground(self):
        assert is_ground(parse_fs("f!x & g!t(y)"))
        assert not is_ground(parse_fs("f!?X"))

    def test_rename_fresh_is_variant(self):
        a = parse_fs("f!?X & g!?X & h!t(?Y)")
        b = rename_fresh(a)
        assert canonical(a) != canonical(b)
        assert variant(a, b)

    def test_subsumes(self):
        assert subsumes(parse_fs("f!?X"), parse_fs("f!x & g!y"))
        assert not subsumes(parse_fs("f!x & g!y"), parse_fs("f!x"))
        assert not subsumes(parse_fs("f!?X & g!?X"), parse_fs("f!x & g!y"))


# Algebraic laws, checked with the naive oracle matcher rather than the
# package's own subsumption.


@settings(max_examples=150, deadline=None)
@given(fs_nodes())
def test_identity(a):
    assert is_variant(u(a, TOP), a, HIERARCHY)


@settings(max_examples=150, deadline=None)
@given(fs_nodes())
def test_idempotence(a):
    assert is_variant(u(a, a), a, HIERARCHY)


@settings(max_examples=200, deadline=None)
@given(fs_nodes(), fs_nodes())
def test_commutativity_and_failure_symmetry(a, b):
    ab, ba = u(a, b), u(b, a)
    assert (ab is None) == (ba is None)
    if ab is not None:
        assert is_variant(ab, ba, HIERARCHY)


@settings(max_examples=200, deadline=None)
@given(fs_nodes(), fs_nodes())
def test_specialization(a, b):
    c = u(a, b)
    if c is not None:
        assert tree_subsumes(a, c, HIERARCHY) is not False
        assert tree_subsumes(b, c, HIERARCHY) is not False
        assert subsumes(a, c, HIERARCHY) and subsumes(b, c, HIERARCHY)
