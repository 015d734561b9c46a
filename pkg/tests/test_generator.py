import random

import pytest

from mnlg.derivation import REFERRING, leaf_strings
from mnlg.feature_core import get_path, subsumes
from mnlg.generator import Completeness, GenConfig, GenStats, enumerate_solutions, expand, is_complete, select
from mnlg.notation import parse_fs
from mnlg.repository import parse_grammar

from gen_inputs import CRAFTED, NEG_FAST, node, state
from oracles import brute_force_leaf_sequences

ALL = GenConfig(max_solutions=None)


@pytest.mark.parametrize(
    "text,expected",
    [
        ('<s & form!"hello!"', Completeness.COMPLETE_FORM),
        ("<v & lemma!be", Completeness.COMPLETE_FORM),
        ("<np & sem!?X", Completeness.COMPLETE_NP_OPEN),
        ("<np & sem!concept(john)", Completeness.COMPLETE_NP_OPEN),
        ("<np & sem!x_1", Completeness.COMPLETE_NP_OPEN),
        ('<np & sem!"none"', Completeness.INCOMPLETE),
        ("<vp & sem!?X", Completeness.INCOMPLETE),
        ("<np & desc!<pronoun", Completeness.INCOMPLETE),
        ("<s", Completeness.INCOMPLETE),
    ],
)
def test_is_complete(repo, text, expected):
    assert is_complete(parse_fs(text, repo.hierarchy), None, repo.hierarchy) is expected


@pytest.mark.parametrize("name,inp", CRAFTED, ids=[c[0] for c in CRAFTED])
def test_matches_brute_force_enumerator(repo, name, inp):
    got = sorted(leaf_strings(d) for d in enumerate_solutions(inp, repo, state(), ALL))
    want = brute_force_leaf_sequences(inp, repo, state())
    assert 0 < len(want) <= 200
    assert got == want


def test_first_solution_follows_file_order(repo):
    first = enumerate_solutions(node("greeting", "john"), repo, state())
    assert leaf_strings(first[0]) == ("hello!", "My name is", "john")


def test_max_solutions_caps(repo):
    inp = node("statement", sem=NEG_FAST)
    assert len(enumerate_solutions(inp, repo, state(), GenConfig(max_solutions=1))) == 1
    assert len(enumerate_solutions(inp, repo, state(), GenConfig(max_solutions=10))) == 2


def test_no_match_is_empty(repo):
    assert enumerate_solutions(node("haggle"), repo, state()) == []


@pytest.mark.parametrize("name,inp", CRAFTED, ids=[c[0] for c in CRAFTED])
def test_soundness_and_percolation(repo, name, inp):
    speaker = get_path(inp, ["currentAct", "speaker", "name"])
    for d in enumerate_solutions(inp, repo, state(), ALL):
        assert subsumes(inp, d.fs, repo.hierarchy)
        for leaf in d.leaves():
            ok = isinstance(leaf.get("form"), str) or isinstance(leaf.get("lemma"), str)
            assert ok or leaf.origin == REFERRING
        for n in d.walk():
            if n.origin == REFERRING:
                break
            ca_name = n.get("currentAct", "speaker", "name")
            if ca_name is not None:
                assert ca_name == speaker


def test_referring_nodes_carry_referent(repo):
    d = enumerate_solutions(node("statement", sem=NEG_FAST), repo, state())[0]
    refs = [n.referent for n in d.walk() if n.origin == REFERRING]
    assert refs == ["x_1"]


def test_full_coverage_blocks_dropped_content(repo):
    inp = node("statement", sem="drs([e],[type(e,impress),arg1(e,x_1),arg2(e,mary)])")
    loose = {leaf_strings(d) for d in enumerate_solutions(inp, repo, state(), ALL)}
    strict = {
        leaf_strings(d)
        for d in enumerate_solutions(inp, repo, state(), GenConfig(max_solutions=None, require_full_coverage=True))
    }
    assert ("it", "impress") in loose
    assert strict == {("it", "impress", "mary")}


def test_lexicon_pruning(repo):
    stats = GenStats()
    inp = node("statement", sem="drs([e],[type(e,flies),arg1(e,x_1)])")
    assert enumerate_solutions(inp, repo, state(), ALL, stats) == []
    assert stats.lexicon_pruned > 0


LOOP = """
hierarchy { s < top. w < top. }
tree loop { mother: <s daughters: [ - <s & x!y - <w & form!a ] }
tree end { mother: <s & x!z & form!b }
"""


def test_depth_limit_stops_left_recursion():
    repo = parse_grammar(LOOP)
    stats = GenStats()
    out = list(expand(parse_fs("<s & x!y", repo.hierarchy), repo, None, None, GenConfig(depth_limit=8), stats))
    assert out == []
    assert stats.depth_pruned > 0


def test_referring_failure_is_counted(repo):
    stats = GenStats()
    inp = node("statement", sem="drs([e],[type(e,fast),arg1(e,x_9)])")
    assert enumerate_solutions(inp, repo, state(), ALL, stats) == []
    assert stats.referring_failures > 0


def test_select_is_seeded(repo):
    sols = enumerate_solutions(node("statement", sem=NEG_FAST), repo, state(), ALL)
    picks = {leaf_strings(select(sols, rng_seed=s)) for s in range(20)}
    assert len(picks) == 2
    for s in range(5):
        assert select(sols, rng_seed=s) == select(sols, rng=random.Random(s))
    with pytest.raises(ValueError):
        select([])


def test_config_validation():
    with pytest.raises(ValueError):
        GenConfig(max_solutions=0)
    with pytest.raises(ValueError):
        GenConfig(depth_limit=0)
