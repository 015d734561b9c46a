"""Write the benchmark dialogue plans under src/mnlg/data/bench."""

import random
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "src" / "mnlg" / "data" / "bench"

PEOPLE = [("john", "seller", "yes", "m"), ("mary", "customer", "no", "f")]
CARS = {
    "x_1": ("car", ["red", "prestigious", "expensive"]),
    "x_2": ("car", ["blue", "fast", "sporty"]),
    "x_3": ("van", ["green", "spacious", "reliable"]),
    "x_4": ("truck", ["white", "powerful", "big"]),
}
VERBS_INTRANS = ["accelerate", "brake"]
VERBS_TRANS = ["impress", "suit"]


def common_ground():
    refs, conds, n = list(CARS), [], 0
    for x, (head, props) in CARS.items():
        conds.append(f"type({x},{head})")
        for p in props:
            n += 1
            refs.append(f"c_{n}")
            conds += [f"type(c_{n},{p})", f"arg1(c_{n},{x})"]
    return f"drs([{','.join(refs)}],[{','.join(conds)}])"


def participants():
    return "\n".join(
        f'    <participant id="{i}" role="{r}" polite="{p}" gender="{g}"/>' for i, r, p, g in PEOPLE
    )


def act(aid, kind, speaker, sem="none", **extra):
    other = "mary" if speaker == "john" else "john"
    attrs = "".join(f' {k}="{v}"' for k, v in extra.items())
    return f'    <act id="{aid}" type="{kind}" speaker="{speaker}" addressees="{other}"{attrs}><sem>{sem}</sem></act>'


def plan(acts):
    return (
        '<?xml version="1.0" encoding="UTF-8"?>\n<dialoguePlan>\n  <participants>\n'
        + participants()
        + "\n  </participants>\n  <commonGround><drs>"
        + common_ground()
        + "</drs></commonGround>\n  <acts>\n"
        + "\n".join(acts)
        + "\n  </acts>\n</dialoguePlan>\n"
    )


def middle_act(rng, i, speaker):
    x = rng.choice(list(CARS))
    e = f"e_{i}"
    kind = rng.choice(["adj", "adj", "neg", "intrans", "trans", "question", "question_do", "accept", "refusal", "thanks"])
    if kind == "adj":
        a = rng.choice(CARS[x][1])
        return act(f"a{i}", "statement", speaker, f"drs([{e}],[type({e},{a}),arg1({e},{x})])")
    if kind == "neg":
        others = [p for y, (_, ps) in CARS.items() if y != x for p in ps if p not in CARS[x][1]]
        a = rng.choice(others)
        return act(f"a{i}", "statement", speaker, f"drs([],[negation(drs([{e}],[type({e},{a}),arg1({e},{x})]))])")
    if kind == "intrans":
        v = rng.choice(VERBS_INTRANS)
        return act(f"a{i}", "statement", speaker, f"drs([{e}],[type({e},{v}),arg1({e},{x})])")
    if kind == "trans":
        v = rng.choice(VERBS_TRANS)
        y = "mary"
        return act(f"a{i}", "statement", speaker, f"drs([{e}],[type({e},{v}),arg1({e},{x}),arg2({e},{y})])")
    if kind == "question":
        a = rng.choice(CARS[x][1])
        return act(f"a{i}", "question", speaker, f"drs([{e}],[type({e},{a}),arg1({e},{x})])")
    if kind == "question_do":
        v = rng.choice(VERBS_INTRANS)
        return act(f"a{i}", "question", speaker, f"drs([{e}],[type({e},{v}),arg1({e},{x})])")
    if kind == "refusal":
        return act(f"a{i}", "refusal", speaker, emotion=rng.choice(["angry", "neutral"]))
    return act(f"a{i}", kind, speaker)


def dialogue(n_acts, seed):
    rng = random.Random(seed)
    acts = [act("a1", "greeting", "john"), act("a2", "greeting", "mary")]
    speaker = "john"
    for i in range(3, n_acts):
        if rng.random() < 0.6:
            speaker = "mary" if speaker == "john" else "john"
        acts.append(middle_act(rng, i, speaker))
    acts.append(act(f"a{n_acts}", "farewell", "john"))
    return plan(acts)


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for name, n, seed in [("A", 19, 1), ("B", 22, 2), ("C", 23, 3), ("D", 31, 4)]:
        (OUT / f"{name}.xml").write_text(dialogue(n, seed), encoding="utf-8")


if __name__ == "__main__":
    main()
