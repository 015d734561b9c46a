"""Acceptance criteria. Each test records a PASS/FAIL line, printed at the end
of the run by the hook in conftest.py."""

import random
import subprocess
import sys
import time

import pytest

from mnlg.derivation import leaf_strings
from mnlg.feature_core import FeatureStructure, unify
from mnlg.generator import GenConfig, enumerate_solutions
from mnlg.pipeline_io import generate_dialogue, parse_plan, parse_script, run_benchmark

from cg_random import check_description, random_state
from conftest import BENCH, PLANS
from drs_random import package_selections, random_pattern, random_target
from gen_inputs import CRAFTED, state
from oracles import brute_force_leaf_sequences, drs_selections, is_variant, tree_subsumes
from strategies import HIERARCHY, random_fs_node

pytestmark = pytest.mark.acceptance

CG = (
    "drs([x_1,x_2,c_1,c_2,c_3],[type(x_1,car),type(c_1,red),arg1(c_1,x_1),"
    "type(c_2,prestigious),arg1(c_2,x_1),type(x_2,van),type(c_3,fast),arg1(c_3,x_2)])"
)
NEG = "drs([e],[negation(drs([],[type(e,fast),arg1(e,x_1)]))])"
GOLDEN_PLAN = f"""<dialoguePlan>
  <participants>
    <participant id="john" role="seller" polite="yes" gender="m"/>
    <participant id="mary" role="customer" polite="no" gender="f"/>
  </participants>
  <commonGround><drs>{CG}</drs></commonGround>
  <acts>
    <act id="a1" type="greeting" speaker="john" addressees="mary"><sem>none</sem></act>
    <act id="a2" type="statement" speaker="john" addressees="mary"><sem>drs([e_1],[type(e_1,prestigious),arg1(e_1,x_1)])</sem></act>
    <act id="a3" type="statement" speaker="mary" addressees="john"><sem>{NEG}</sem></act>
  </acts>
</dialoguePlan>""".encode()


def test_1_example_goldens(repo, acceptance):
    with acceptance(1, "example-tree goldens"):
        script = generate_dialogue(parse_plan(GOLDEN_PLAN), repo)
        texts = [u.text for u in script.utterances]
        assert texts[0] == "Hello! My name is John."
        assert texts[2] == "It is not fast."


def test_2_unification_laws(acceptance):
    with acceptance(2, "unification laws on 1000 random pairs"):
        rng = random.Random(20240601)
        top = FeatureStructure("top", {})
        violations = []
        for i in range(1000):
            a, b = random_fs_node(rng, 4), random_fs_node(rng, 4)
            ab, ba = unify(a, b, None, HIERARCHY), unify(b, a, None, HIERARCHY)
            idn = unify(a, top, None, HIERARCHY)
            aa = unify(a, a, None, HIERARCHY)
            if idn is None or not is_variant(idn[0], a, HIERARCHY):
                violations.append((i, "identity"))
            if aa is None or not is_variant(aa[0], a, HIERARCHY):
                violations.append((i, "idempotence"))
            if (ab is None) != (ba is None):
                violations.append((i, "failure symmetry"))
            elif ab is not None:
                if not is_variant(ab[0], ba[0], HIERARCHY):
                    violations.append((i, "commutativity"))
                c = ab[0]
                if tree_subsumes(a, c, HIERARCHY) is False or tree_subsumes(b, c, HIERARCHY) is False:
                    violations.append((i, "specialization"))
        assert violations == []


def test_3_oracle_equivalence(repo, acceptance):
    with acceptance(3, "generator equals brute-force enumerator on 10 inputs"):
        assert len(CRAFTED) == 10
        for name, inp in CRAFTED:
            want = brute_force_leaf_sequences(inp, repo, state())
            got = sorted(
                leaf_strings(d) for d in enumerate_solutions(inp, repo, state(), GenConfig(max_solutions=None))
            )
            assert len(want) <= 200, name
            assert got == want, name


def test_4_drs_matching_oracle(acceptance):
    with acceptance(4, "DRS matching equals exhaustive selection on 500 pairs"):
        rng = random.Random(4242)
        for _ in range(500):
            p, t = random_pattern(rng), random_target(rng, 6)
            assert len(t.conditions) <= 6
            assert package_selections(p, t) == drs_selections(p, t), (p, t)


def test_5_referring_properties(acceptance):
    with acceptance(5, "referring-expression properties on 200 common grounds"):
        rng = random.Random(5555)
        for _ in range(200):
            st, props = random_state(rng, max_refs=8, max_props=4)
            for r in props:
                check_description(st, props, r)


def test_6_bench(repo, acceptance):
    with acceptance(6, "bench: per-act medians and mode ratio") as rec:
        plans = [(p.stem, p.read_bytes()) for p in sorted(BENCH.glob("*.xml"))]
        assert [(n, len(parse_plan(d).acts)) for n, d in plans] == [("A", 19), ("B", 22), ("C", 23), ("D", 31)]
        start = time.perf_counter()
        report = run_benchmark(plans, repo, (1, 10), repetitions=7)
        elapsed = time.perf_counter() - start
        rec.detail = "; ".join(
            f"{r.name}: {r.per_act_s(1) * 1e3:.2f}/{r.per_act_s(10) * 1e3:.2f} ms/act, x{r.ratio():.2f}"
            for r in report.rows
        ) + f"; total {elapsed:.1f}s"
        for r in report.rows:
            assert r.per_act_s(1) <= 0.010, r.name
            assert r.per_act_s(10) <= 0.040, r.name
            assert 1.0 <= r.ratio() <= 10.0, r.name
        assert elapsed < 30


def _cli(*args):
    return subprocess.run([sys.executable, "-m", "mnlg", *map(str, args)], capture_output=True)


def test_7_determinism(grammar_path, acceptance):
    with acceptance(7, "three generate runs are byte-identical"):
        args = ("generate", "--grammar", grammar_path, "--plan", BENCH / "D.xml", "--max-solutions", "10", "--seed", "11")
        runs = [_cli(*args) for _ in range(3)]
        assert all(r.returncode == 0 for r in runs)
        assert runs[0].stdout and runs[0].stdout == runs[1].stdout == runs[2].stdout


def test_8_robustness(grammar_path, acceptance):
    with acceptance(8, "one unmatched act gives one error utterance, exit 0"):
        r = _cli("generate", "--grammar", grammar_path, "--plan", PLANS / "unmatched.xml")
        assert r.returncode == 0
        utts = parse_script(r.stdout).utterances
        assert len(utts) == len(parse_plan((PLANS / "unmatched.xml").read_bytes()).acts)
        assert [u.act for u in utts if u.error is not None] == ["a4"]
        assert all(u.text for u in utts if u.error is None)
