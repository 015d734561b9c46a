"""Dialogue plans in, utterance scripts out.

Input::

    <dialoguePlan>
      <participants>
        <participant id="john" role="seller" polite="yes" gender="m" extraversion="high"/>
      </participants>
      <commonGround><drs>drs([x_1],[type(x_1,car)])</drs></commonGround>
      <acts>
        <act id="a1" type="greeting" speaker="john" addressees="mary"><sem>none</sem></act>
      </acts>
    </dialoguePlan>

Participant attributes other than id, role, polite and gender are personality
traits. Output is one ``<utterance>`` per act, in act order.
"""

from __future__ import annotations

import logging
import random
import statistics
import time
from dataclasses import dataclass, field, replace
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union
from xml.etree import ElementTree as ET
from xml.sax.saxutils import escape, quoteattr

from mnlg.derivation import referents_mentioned
from mnlg.errors import FSSyntaxError, MnlgError, PlanError
from mnlg.feature_core import Drs, FeatureStructure, PList
from mnlg.generator import GenConfig, GenStats, enumerate_solutions, select
from mnlg.realizer import realize
from mnlg.referring import CgState, update_salience
from mnlg.semantics import DEFAULT_CONDITIONS, DrsError, empty_drs, parse_drs

log = logging.getLogger(__name__)

__all__ = [
    "Participant",
    "DialogueAct",
    "DialoguePlan",
    "Gesture",
    "Utterance",
    "Script",
    "parse_plan",
    "build_input_node",
    "generate_dialogue",
    "assign_turn_gestures",
    "emit_script",
    "parse_script",
    "run_pipeline",
    "run_benchmark",
    "BenchRow",
    "BenchReport",
    "REFERENCE_TIMES",
]

_CORE_PARTICIPANT_ATTRS = ("id", "role", "polite", "gender")
NEUTRAL_EMOTION = "neutral"


@dataclass(frozen=True)
class Participant:
    id: str
    role: Optional[str] = None
    polite: Optional[str] = None
    gender: Optional[str] = None
    traits: Mapping[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class DialogueAct:
    id: str
    act_type: str
    speaker: str
    addressees: Tuple[str, ...] = ()
    sem: Optional[Drs] = None
    reaction_to: Optional[str] = None
    emotion: Optional[str] = None


@dataclass(frozen=True)
class DialoguePlan:
    participants: Tuple[Participant, ...]
    common_ground: Drs
    acts: Tuple[DialogueAct, ...]

    def participant(self, pid: str) -> Participant:
        for p in self.participants:
            if p.id == pid:
                return p
        raise KeyError(pid)


@dataclass(frozen=True)
class Gesture:
    type: str
    position: str = "start"


@dataclass(frozen=True)
class Utterance:
    act: str
    speaker: str
    text: str = ""
    gestures: Tuple[Gesture, ...] = ()
    error: Optional[str] = None


@dataclass(frozen=True)
class Script:
    utterances: Tuple[Utterance, ...] = ()
    timing_ms: Mapping[str, float] = field(default_factory=dict, compare=False)
    total_ms: float = field(default=0.0, compare=False)


def _require(el: ET.Element, attr: str, path: str) -> str:
    value = el.get(attr)
    if value is None or not value.strip():
        raise PlanError(f"{path}: missing attribute {attr!r}")
    return value.strip()


def _parse_sem(text: Optional[str], path: str, registry) -> Optional[Drs]:
    text = (text or "").strip()
    if not text or text == "none":
        return None
    try:
        return parse_drs(text, registry=registry)
    except (FSSyntaxError, DrsError) as e:
        raise PlanError(f"{path}: malformed DRS: {e}") from e


def parse_plan(data: Union[bytes, str], registry: Optional[Mapping[str, int]] = None) -> DialoguePlan:
    """Parse and validate a dialogue-plan document."""
    registry = registry or DEFAULT_CONDITIONS
    try:
        root = ET.fromstring(data)
    except ET.ParseError as e:
        raise PlanError(f"not well-formed XML: {e}") from e
    if root.tag != "dialoguePlan":
        raise PlanError(f"root element must be dialoguePlan, found {root.tag}")
    pel = root.find("participants")
    if pel is None:
        raise PlanError("dialoguePlan: missing participants")
    participants = []
    for i, p in enumerate(pel.findall("participant"), 1):
        path = f"dialoguePlan/participants/participant[{i}]"
        pid = _require(p, "id", path)
        if any(q.id == pid for q in participants):
            raise PlanError(f"{path}: duplicate participant id {pid!r}")
        traits = {k: v for k, v in p.attrib.items() if k not in _CORE_PARTICIPANT_ATTRS}
        participants.append(Participant(pid, p.get("role"), p.get("polite"), p.get("gender"), traits))
    ids = {p.id for p in participants}

    cg = empty_drs()
    cgel = root.find("commonGround")
    if cgel is not None:
        drs_el = cgel.find("drs")
        text = drs_el.text if drs_el is not None else cgel.text
        cg = _parse_sem(text, "dialoguePlan/commonGround", registry) or empty_drs()

    acts_el = root.find("acts")
    if acts_el is None:
        raise PlanError("dialoguePlan: missing acts")
    acts: List[DialogueAct] = []
    for i, a in enumerate(acts_el.findall("act"), 1):
        path = f"dialoguePlan/acts/act[{i}]"
        aid = _require(a, "id", path)
        path = f"{path} (id={aid})"
        if any(b.id == aid for b in acts):
            raise PlanError(f"{path}: duplicate act id")
        speaker = _require(a, "speaker", path)
        if speaker not in ids:
            raise PlanError(f"{path}: act {aid!r} has undeclared speaker {speaker!r}")
        addressees = tuple((a.get("addressees") or "").split())
        for ad in addressees:
            if ad not in ids:
                raise PlanError(f"{path}: act {aid!r} has undeclared addressee {ad!r}")
        reaction_to = a.get("reaction_to")
        if reaction_to is not None and not any(b.id == reaction_to for b in acts):
            raise PlanError(f"{path}: reaction_to {reaction_to!r} is not an earlier act")
        sem_el = a.find("sem")
        sem = _parse_sem(sem_el.text if sem_el is not None else None, f"{path}/sem", registry)
        acts.append(DialogueAct(aid, _require(a, "type", path), speaker, addressees, sem, reaction_to, a.get("emotion")))
    return DialoguePlan(tuple(participants), cg, tuple(acts))


def build_input_node(act: DialogueAct, participants: Sequence[Participant]) -> FeatureStructure:
    """Root node: sentence type, semantics and the current-act bundle."""
    by_id = {p.id: p for p in participants}
    p = by_id.get(act.speaker, Participant(act.speaker))
    speaker = {"name": p.id}
    for key in ("polite", "gender", "role"):
        value = getattr(p, key)
        if value is not None:
            speaker[key] = value
    speaker.update(p.traits)
    current = {
        "type": act.act_type,
        "speaker": FeatureStructure("top", speaker),
        "addressees": PList(act.addressees),
        "emotion": act.emotion or NEUTRAL_EMOTION,
    }
    if act.reaction_to:
        current["reactionTo"] = act.reaction_to
    return FeatureStructure(
        "s",
        {"sem": act.sem if act.sem is not None else "none", "currentAct": FeatureStructure("top", current)},
    )


def _participant_info(plan: DialoguePlan) -> Dict[str, Dict[str, str]]:
    return {p.id: {"gender": p.gender or "n"} for p in plan.participants}


def generate_dialogue(plan: DialoguePlan, repo, config: Optional[GenConfig] = None, stats: Optional[GenStats] = None) -> Script:
    """Realize every act in order; a failed act yields an error utterance."""
    config = config or GenConfig()
    rng = random.Random(config.rng_seed)
    state = CgState.initial(plan.common_ground, _participant_info(plan), repo.lexicon.nouns())
    utterances, timing = [], {}
    start_all = time.perf_counter()
    for i, act in enumerate(plan.acts):
        start = time.perf_counter()
        mentioned: Tuple[str, ...] = ()
        try:
            node = build_input_node(act, plan.participants)
            solutions = enumerate_solutions(node, repo, state, config, stats)
            if not solutions:
                raise MnlgError(f"no tree matches act {act.id} ({act.act_type})")
            chosen = select(solutions, rng=rng)
            text, _ = realize(chosen, repo, act.act_type)
            mentioned = referents_mentioned(chosen)
            utterances.append(Utterance(act.id, act.speaker, text))
        except MnlgError as e:
            log.warning("act %s failed: %s", act.id, e)
            utterances.append(Utterance(act.id, act.speaker, "", (), str(e)))
        state = update_salience(state, i, mentioned)
        timing[act.id] = (time.perf_counter() - start) * 1000.0
    total = (time.perf_counter() - start_all) * 1000.0
    return Script(tuple(utterances), timing, total)


def assign_turn_gestures(script: Script, plan: Optional[DialoguePlan] = None) -> Script:
    """``turn_take`` when the floor changes hands, ``turn_give`` before it does."""
    utts = script.utterances
    out = []
    for i, u in enumerate(utts):
        gestures = [g for g in u.gestures if g.type not in ("turn_take", "turn_give")]
        if i == 0 or utts[i - 1].speaker != u.speaker:
            gestures.insert(0, Gesture("turn_take", "start"))
        if i + 1 < len(utts) and utts[i + 1].speaker != u.speaker:
            gestures.append(Gesture("turn_give", "end"))
        out.append(replace(u, gestures=tuple(gestures)))
    return replace(script, utterances=tuple(out))


def emit_script(script: Script) -> bytes:
    """Deterministic UTF-8 serialization (timing is not serialized)."""
    lines = ['<?xml version="1.0" encoding="UTF-8"?>']
    if not script.utterances:
        lines.append("<script/>")
    else:
        lines.append("<script>")
        for u in script.utterances:
            attrs = f"act={quoteattr(u.act)} speaker={quoteattr(u.speaker)}"
            if u.error is not None:
                attrs += ' error="true"'
            body = [f"<gesture type={quoteattr(g.type)}/>" for g in u.gestures if g.position == "start"]
            if u.error is not None:
                body.append(f"<error>{escape(u.error)}</error>")
            else:
                body.append(f"<text>{escape(u.text)}</text>")
            body += [f"<gesture type={quoteattr(g.type)}/>" for g in u.gestures if g.position == "end"]
            lines.append(f"  <utterance {attrs}>{''.join(body)}</utterance>")
        lines.append("</script>")
    return ("\n".join(lines) + "\n").encode("utf-8")


def parse_script(data: Union[bytes, str]) -> Script:
    root = ET.fromstring(data)
    utts = []
    for u in root.findall("utterance"):
        gestures, text, error, seen_body = [], "", None, False
        for child in u:
            if child.tag == "gesture":
                gestures.append(Gesture(child.get("type"), "end" if seen_body else "start"))
            elif child.tag == "text":
                text, seen_body = child.text or "", True
            elif child.tag == "error":
                error, seen_body = child.text or "", True
        utts.append(Utterance(u.get("act"), u.get("speaker"), text, tuple(gestures), error))
    return Script(tuple(utts))


def run_pipeline(data: Union[bytes, str], repo, config: Optional[GenConfig] = None) -> bytes:
    """Plan XML to script XML."""
    plan = parse_plan(data, repo.conditions)
    script = generate_dialogue(plan, repo, config)
    return emit_script(assign_turn_gestures(script, plan))


# Reference response times, in seconds (=1 and <=10 solutions).
REFERENCE_TIMES = {
    "A": (19, 0.230, 0.741),
    "B": (22, 0.290, 0.872),
    "C": (23, 0.290, 0.801),
    "D": (31, 0.431, 1.372),
}


@dataclass
class BenchRow:
    name: str
    acts: int
    median_s: Dict[int, float]

    def per_act_s(self, mode: int) -> float:
        return self.median_s[mode] / self.acts if self.acts else 0.0

    def ratio(self, hi: int = 10, lo: int = 1) -> float:
        return self.median_s[hi] / self.median_s[lo]


@dataclass
class BenchReport:
    rows: List[BenchRow]
    modes: Tuple[int, ...]
    repetitions: int

    def format_table(self) -> str:
        head = ["input", "# acts"] + [f"={m}" if m == 1 else f"<={m}" for m in self.modes]
        head += [f"per act {m}" for m in self.modes]
        lines = [" | ".join(head)]
        for r in self.rows:
            cells = [r.name, str(r.acts)] + [f"{r.median_s[m]:.4f}s" for m in self.modes]
            cells += [f"{r.per_act_s(m) * 1000:.3f}ms" for m in self.modes]
            lines.append(" | ".join(cells))
        return "\n".join(lines)


def run_benchmark(
    plans: Sequence[Tuple[str, bytes]],
    repo,
    modes: Sequence[int] = (1, 10),
    repetitions: int = 5,
    seed: int = 0,
    warmup: int = 1,
) -> BenchReport:
    """Median wall time of the full XML-to-XML pipeline per plan and mode.

    Repetitions of the different modes are interleaved after ``warmup``
    untimed runs, so cache warm-up and clock drift do not favour one mode.
    """
    rows = []
    for name, data in plans:
        acts = len(parse_plan(data, repo.conditions).acts)
        configs = {mode: GenConfig(max_solutions=mode, rng_seed=seed) for mode in modes}
        for _ in range(warmup):
            for config in configs.values():
                run_pipeline(data, repo, config)
        samples: Dict[int, List[float]] = {mode: [] for mode in modes}
        for _ in range(repetitions):
            for mode, config in configs.items():
                start = time.perf_counter()
                run_pipeline(data, repo, config)
                samples[mode].append(time.perf_counter() - start)
        rows.append(BenchRow(name, acts, {m: statistics.median(v) for m, v in samples.items()}))
    return BenchReport(rows, tuple(modes), repetitions)
