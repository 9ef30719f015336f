#!/usr/bin/env python3
"""Generate the checked-in synthetic fixtures (corpora, datasets, configs).

Everything is literal and deterministic; rerunning must reproduce the
checked-in files byte for byte (the test suite asserts this).

Pair-task corpus: ten families (congruent agent, incongruent agent,
verb, 3+3 patient clusters). Each agent transitively combines only with
its own cluster, so structured models can separate the conditions while
the two clusters stay exactly symmetric. Window-only distractor
bigrams (no arcs) then pair one agent per item with the evaluated
patient: for items 1-5 the congruent agent, for items 6-10 the
incongruent one. A window prototype for the boosted agent gains exactly
the candidate's vector, which strictly raises its cosine, so the
window model lands on 5/10 while dependency scoring is untouched.

Role-reversal corpus: fifty families (w, x, y, u) where x is only ever
the subject of w and the object of u, and y the mirror image. The
"x of y" / "y of x" phrases give both nouns direct dependents so that
argument-collapsed rankings are non-empty.
"""

from __future__ import annotations

import os

HERE = os.path.dirname(os.path.abspath(__file__))
ROOT = os.path.dirname(HERE)
DATA_DIR = os.path.join(ROOT, "data", "synthetic")
CONFIG_DIR = os.path.join(ROOT, "configs")

REPS = 3  # repetitions per transitive sentence
DISTRACTOR_REPS = 2

# (congruent agent, incongruent agent, verb, congruent patients, incongruent patients)
BICKNELL_FAMILIES = [
    ("journalist", "mechanic", "check",
     ("spelling", "grammar", "quote"), ("engine", "brake", "oil")),
    ("policeman", "singer", "arrest",
     ("burglar", "thief", "robber"), ("heckler", "stalker", "impostor")),
    ("chef", "builder", "prepare",
     ("soup", "salad", "dessert"), ("mortar", "scaffold", "blueprint")),
    ("farmer", "fisherman", "catch",
     ("piglet", "lamb", "calf"), ("herring", "mackerel", "trout")),
    ("teacher", "conductor", "instruct",
     ("pupil", "student", "freshman"), ("violinist", "cellist", "oboist")),
    ("doctor", "vet", "treat",
     ("patient", "outpatient", "invalid"), ("puppy", "kitten", "foal")),
    ("gardener", "barber", "trim",
     ("hedge", "shrub", "lawn"), ("beard", "fringe", "sideburn")),
    ("plumber", "electrician", "fix",
     ("pipe", "faucet", "drain"), ("fuse", "socket", "wiring")),
    ("librarian", "curator", "catalog",
     ("novel", "paperback", "atlas"), ("sculpture", "painting", "artifact")),
    ("pilot", "captain", "steer",
     ("airplane", "glider", "jet"), ("ship", "yacht", "ferry")),
]


def chow_families() -> list[tuple[str, str, str, str]]:
    """(verb w, agent noun x, patient noun y, reverse verb u) per item."""
    families = [("serve", "waitress", "customer", "pay")]
    for j in range(2, 51):
        families.append((f"w{j:02d}", f"x{j:02d}", f"y{j:02d}", f"u{j:02d}"))
    return families


def conll_sentence(rows: list[tuple[str, str, str, int, str]]) -> str:
    """Rows are (form, lemma, fine tag, 1-based head or 0, relation)."""
    lines = []
    for i, (form, lemma, tag, head, rel) in enumerate(rows, start=1):
        lines.append(f"{i}\t{form}\t{lemma}\t{tag}\t{tag}\t_\t{head}\t{rel}\t_\t_")
    return "\n".join(lines) + "\n\n"


def transitive(agent: str, verb: str, patient: str, adverb: str) -> str:
    return conll_sentence([
        ("the", "the", "DT", 2, "det"),
        (agent, agent, "NN", 3, "sbj"),
        (verb, verb, "VB", 0, "root"),
        ("the", "the", "DT", 5, "det"),
        (patient, patient, "NN", 3, "obj"),
        (adverb, adverb, "RB", 3, "tmod"),
    ])


def bigram(first: str, second: str) -> str:
    """Two unattached nouns: window co-occurrence with no dependency arcs."""
    return conll_sentence([
        (first, first, "NN", 0, "root"),
        (second, second, "NN", 0, "root"),
    ])


def of_phrase(head: str, dependent: str) -> str:
    return conll_sentence([
        (head, head, "NN", 0, "root"),
        ("of", "of", "IN", 1, "prep"),
        (dependent, dependent, "NN", 1, "nmod"),
    ])


def build_bicknell_corpus() -> str:
    parts = []
    for j, (agent_c, agent_i, verb, patients_c, patients_i) in enumerate(BICKNELL_FAMILIES, 1):
        for patient in patients_c:
            parts.extend(transitive(agent_c, verb, patient, "today") for _ in range(REPS))
        for patient in patients_i:
            parts.extend(transitive(agent_i, verb, patient, "today") for _ in range(REPS))
        boosted = agent_c if j <= 5 else agent_i
        parts.extend(bigram(boosted, patients_c[0]) for _ in range(DISTRACTOR_REPS))
    return "".join(parts)


def build_chow_corpus() -> str:
    parts = []
    for w, x, y, u in chow_families():
        parts.extend(transitive(x, w, y, "again") for _ in range(REPS))
        parts.extend(transitive(y, u, x, "again") for _ in range(REPS))
        parts.extend(of_phrase(x, y) for _ in range(REPS))
        parts.extend(of_phrase(y, x) for _ in range(REPS))
    return "".join(parts)


def build_bicknell_acc2() -> str:
    lines = ["item_id\tagent_congruent\tagent_incongruent\tverb\tpatient"]
    for j, (agent_c, agent_i, verb, patients_c, _) in enumerate(BICKNELL_FAMILIES, 1):
        lines.append(f"b{j:02d}\t{agent_c}-n\t{agent_i}-n\t{verb}-v\t{patients_c[0]}-n")
    return "\n".join(lines) + "\n"


def build_bicknell_acc1() -> str:
    lines = ["item_id\tagent\tverb\tpatient_congruent\tpatient_incongruent"]
    for j, (agent_c, _, verb, patients_c, patients_i) in enumerate(BICKNELL_FAMILIES, 1):
        lines.append(f"b{j:02d}\t{agent_c}-n\t{verb}-v\t{patients_c[0]}-n\t{patients_i[0]}-n")
    return "\n".join(lines) + "\n"


def build_chow_dataset() -> str:
    lines = ["item_id\tverb\tnoun1\tnoun2"]
    for j, (w, x, y, _) in enumerate(chow_families(), 1):
        lines.append(f"c{j:02d}\t{w}-v\t{x}-n\t{y}-n")
    return "\n".join(lines) + "\n"


BICKNELL_CONFIG = """\
# Pair-task fixture pipeline.
corpus_paths=data/synthetic/corpus_bicknell.conll
vocab_threshold=3
bicknell_acc1_path=data/synthetic/bicknell_acc1.tsv
bicknell_acc2_path=data/synthetic/bicknell_acc2.tsv
out_dir=out/bicknell
"""

CHOW_CONFIG = """\
# Role-reversal fixture pipeline.
corpus_paths=data/synthetic/corpus_chow.conll
vocab_threshold=3
chow_path=data/synthetic/chow50.tsv
out_dir=out/chow
"""


def fixture_files() -> dict[str, str]:
    return {
        os.path.join(DATA_DIR, "corpus_bicknell.conll"): build_bicknell_corpus(),
        os.path.join(DATA_DIR, "corpus_chow.conll"): build_chow_corpus(),
        os.path.join(DATA_DIR, "bicknell_acc1.tsv"): build_bicknell_acc1(),
        os.path.join(DATA_DIR, "bicknell_acc2.tsv"): build_bicknell_acc2(),
        os.path.join(DATA_DIR, "chow50.tsv"): build_chow_dataset(),
        os.path.join(CONFIG_DIR, "bicknell.conf"): BICKNELL_CONFIG,
        os.path.join(CONFIG_DIR, "chow.conf"): CHOW_CONFIG,
    }


def main() -> int:
    for path, body in fixture_files().items():
        os.makedirs(os.path.dirname(path), exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(body)
        print(f"wrote {os.path.relpath(path, ROOT)} ({len(body)} bytes)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
