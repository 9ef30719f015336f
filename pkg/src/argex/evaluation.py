"""Binary-selection evaluation over the two psycholinguistic task shapes.

Each item yields two condition scores from the same model; the model is
correct when the congruent (or normal) condition strictly outscores the
other. Ties count as incorrect but are tallied separately, since the
unstructured variants tie by construction on role-reversal items.
Items with out-of-vocabulary tokens are skipped, never imputed, and
coverage is reported alongside accuracy.
"""

from __future__ import annotations

import dataclasses
import enum
import io
import json
from dataclasses import dataclass, field
from typing import Sequence

from .datasets import BicknellItem, BicknellMode, ChowItem
from .errors import EmptyPrototypeError
from .expectation import ModelVariant, SlotQuery, expectation_update, map_slot
from .space import WeightedSpace
from .stats import ChiSquareTest, RankSumTest, chi_square_vs_chance, wilcoxon_rank_sum
from .tokens import Token, VERB_LINK, inverse
from .weighting import format_score

TASK_BICKNELL_ACC1 = "bicknell-acc1"
TASK_BICKNELL_ACC2 = "bicknell-acc2"
TASK_CHOW = "chow"

# Condition labels per task, in (a, b) order: a is the condition the
# model should prefer.
CONDITION_LABELS = {
    TASK_BICKNELL_ACC1: ("congruent", "incongruent"),
    TASK_BICKNELL_ACC2: ("congruent", "incongruent"),
    TASK_CHOW: ("normal", "reversed"),
}


@dataclass(frozen=True)
class BicknellSlots:
    """Dependency relations the two pair-task inputs are queried through.

    The agent noun is queried through the subject-object link (its
    typical co-arguments), the verb through its object slot; both
    prototype the patient position.
    """

    agent: str = VERB_LINK
    verb: str = "obj"


@dataclass(frozen=True)
class ChowSlots:
    """Inverse relations for the role-reversal inputs.

    Nouns are queried for their typical predicates: the agent through
    the inverted subject relation, the patient through the inverted
    object relation.
    """

    agent: str = inverse("sbj")
    patient: str = inverse("obj")


class Outcome(enum.Enum):
    WIN = "win"
    LOSS = "loss"
    TIE = "tie"


@dataclass(frozen=True)
class EvalPair:
    item_id: str
    score_a: float
    score_b: float
    degenerate_a: bool
    degenerate_b: bool
    correct: Outcome


@dataclass
class EvalReport:
    task: str
    variant: ModelVariant
    n_items: int
    n_scored: int
    n_wins: int
    n_ties: int
    n_degenerate: int
    n_oov_skipped: int
    n_failed: int
    accuracy: float | None
    coverage: float | None
    all_ties: bool
    chi_square: ChiSquareTest | None
    wilcoxon: RankSumTest | None
    pairs: list[EvalPair] = field(default_factory=list)
    skipped: list[tuple[str, str]] = field(default_factory=list)

    def summary_line(self) -> str:
        acc = "n/a" if self.accuracy is None else f"{self.accuracy:.3f}"
        cov = "n/a" if self.coverage is None else f"{100.0 * self.coverage:.0f}%"
        note = " [all ties]" if self.all_ties else ""
        return (
            f"{self.task} {self.variant.label} accuracy {acc} "
            f"({self.n_wins}/{self.n_scored} correct, {self.n_ties} ties, "
            f"coverage {cov}){note}"
        )


def _missing_tokens(space: WeightedSpace, tokens: Sequence[Token]) -> list[str]:
    missing = sorted({t.canonical for t in tokens if t.canonical not in space.vocabulary})
    return missing


def _score_items(
    space: WeightedSpace,
    variant: ModelVariant,
    task: str,
    conditions,
    index=None,
) -> EvalReport:
    """Shared scoring loop over (item_id, required, inputs_a/b, cand_a/b).

    ``conditions`` yields one tuple per item: the tokens the item needs
    in-vocabulary, then the two (input queries, candidate) conditions.
    """
    pairs: list[EvalPair] = []
    skipped: list[tuple[str, str]] = []
    n_items = n_failed = 0
    for item_id, required, (inputs_a, cand_a), (inputs_b, cand_b) in conditions:
        n_items += 1
        missing = _missing_tokens(space, required)
        if missing:
            skipped.append((item_id, "oov: " + " ".join(missing)))
            continue
        try:
            result_a = expectation_update(space, variant, inputs_a, cand_a, index=index)
            result_b = expectation_update(space, variant, inputs_b, cand_b, index=index)
        except EmptyPrototypeError as exc:
            skipped.append((item_id, f"empty prototype: {exc.query}"))
            n_failed += 1
            continue
        if result_a.score > result_b.score:
            correct = Outcome.WIN
        elif result_a.score == result_b.score:
            correct = Outcome.TIE
        else:
            correct = Outcome.LOSS
        pairs.append(
            EvalPair(
                item_id,
                result_a.score,
                result_b.score,
                result_a.degenerate,
                result_b.degenerate,
                correct,
            )
        )
    n_scored = len(pairs)
    n_oov_skipped = n_items - n_scored - n_failed
    n_wins = sum(1 for p in pairs if p.correct is Outcome.WIN)
    n_ties = sum(1 for p in pairs if p.correct is Outcome.TIE)
    n_degenerate = sum(1 for p in pairs if p.degenerate_a or p.degenerate_b)
    accuracy = n_wins / n_scored if n_scored else None
    coverage = (n_items - n_oov_skipped) / n_items if n_items else None
    chi = chi_square_vs_chance(n_wins, n_scored) if n_scored else None
    wilcoxon = (
        wilcoxon_rank_sum([p.score_a for p in pairs], [p.score_b for p in pairs])
        if n_scored
        else None
    )
    return EvalReport(
        task=task,
        variant=variant,
        n_items=n_items,
        n_scored=n_scored,
        n_wins=n_wins,
        n_ties=n_ties,
        n_degenerate=n_degenerate,
        n_oov_skipped=n_oov_skipped,
        n_failed=n_failed,
        accuracy=accuracy,
        coverage=coverage,
        all_ties=bool(n_scored) and n_ties == n_scored,
        chi_square=chi,
        wilcoxon=wilcoxon,
        pairs=pairs,
        skipped=skipped,
    )


def run_bicknell(
    space: WeightedSpace,
    variant: ModelVariant,
    items: Sequence[BicknellItem],
    mode: BicknellMode,
    slots: BicknellSlots = BicknellSlots(),
    index=None,
) -> EvalReport:
    """Score triple pairs: the patient is the candidate, agent and verb
    are the expectation inputs. Condition a is the congruent one."""
    slot_agent = map_slot(variant.kind, slots.agent)
    slot_verb = map_slot(variant.kind, slots.verb)
    task = TASK_BICKNELL_ACC1 if mode is BicknellMode.ACC1 else TASK_BICKNELL_ACC2

    def conditions():
        for item in items:
            required = [
                item.agent_congruent,
                item.agent_incongruent,
                item.verb,
                item.patient_congruent,
                item.patient_incongruent,
            ]
            inputs_a = [
                SlotQuery(item.agent_congruent, slot_agent),
                SlotQuery(item.verb, slot_verb),
            ]
            inputs_b = [
                SlotQuery(item.agent_incongruent, slot_agent),
                SlotQuery(item.verb, slot_verb),
            ]
            yield (
                item.item_id,
                required,
                (inputs_a, item.patient_congruent),
                (inputs_b, item.patient_incongruent),
            )

    return _score_items(space, variant, task, conditions(), index=index)


def run_chow(
    space: WeightedSpace,
    variant: ModelVariant,
    items: Sequence[ChowItem],
    slots: ChowSlots = ChowSlots(),
    index=None,
) -> EvalReport:
    """Score role reversal: the verb is the candidate; the normal
    condition reads noun1 as agent and noun2 as patient, the reversed
    condition swaps the slot assignment while keeping column order."""
    slot_agent = map_slot(variant.kind, slots.agent)
    slot_patient = map_slot(variant.kind, slots.patient)

    def conditions():
        for item in items:
            required = [item.verb, item.noun1, item.noun2]
            normal = [SlotQuery(item.noun1, slot_agent), SlotQuery(item.noun2, slot_patient)]
            rev = [SlotQuery(item.noun1, slot_patient), SlotQuery(item.noun2, slot_agent)]
            yield (item.item_id, required, (normal, item.verb), (rev, item.verb))

    return _score_items(space, variant, TASK_CHOW, conditions(), index=index)


def k_sweep(
    space: WeightedSpace,
    variant: ModelVariant,
    items,
    k_values: Sequence[int],
    task: str,
    mode: BicknellMode | None = None,
    slots=None,
    index=None,
) -> list[EvalReport]:
    """Rerun one task across filler counts; one report per k."""
    if not k_values:
        raise ValueError("k_values must be non-empty")
    reports = []
    for k in k_values:
        variant_k = dataclasses.replace(variant, k=k)
        if task == TASK_CHOW:
            reports.append(
                run_chow(space, variant_k, items, slots or ChowSlots(), index=index)
            )
        elif task in (TASK_BICKNELL_ACC1, TASK_BICKNELL_ACC2):
            assert mode is not None
            reports.append(
                run_bicknell(space, variant_k, items, mode, slots or BicknellSlots(), index=index)
            )
        else:
            raise ValueError(f"unknown task {task!r}")
    return reports


# -- serialization -------------------------------------------------------


def report_to_dict(report: EvalReport, provenance: dict[str, str] | None = None) -> dict:
    labels = CONDITION_LABELS[report.task]
    out = {
        "task": report.task,
        "variant": {
            "kind": report.variant.kind.value,
            "k": report.variant.k,
            "composition": report.variant.composition.value,
        },
        "conditions": list(labels),
        "counts": {
            "n_items": report.n_items,
            "n_scored": report.n_scored,
            "n_wins": report.n_wins,
            "n_ties": report.n_ties,
            "n_degenerate": report.n_degenerate,
            "n_oov_skipped": report.n_oov_skipped,
            "n_failed": report.n_failed,
        },
        "accuracy": report.accuracy,
        "coverage": report.coverage,
        "all_ties": report.all_ties,
        "chi_square": None
        if report.chi_square is None
        else {
            "statistic": report.chi_square.statistic,
            "p_value": report.chi_square.p_value,
            "yates_statistic": report.chi_square.yates_statistic,
            "yates_p_value": report.chi_square.yates_p_value,
        },
        "wilcoxon": None
        if report.wilcoxon is None
        else {
            "statistic": report.wilcoxon.statistic,
            "p_value": report.wilcoxon.p_value,
            "degenerate": report.wilcoxon.degenerate,
        },
        "items": [
            {
                "item_id": p.item_id,
                "score_a": p.score_a,
                "score_b": p.score_b,
                "degenerate_a": p.degenerate_a,
                "degenerate_b": p.degenerate_b,
                "outcome": p.correct.value,
            }
            for p in report.pairs
        ],
        "skipped": [{"item_id": i, "reason": r} for i, r in report.skipped],
    }
    if provenance:
        out["provenance"] = dict(sorted(provenance.items()))
    return out


def report_to_json(report: EvalReport, provenance: dict[str, str] | None = None) -> str:
    return json.dumps(report_to_dict(report, provenance), sort_keys=True, indent=2) + "\n"


def per_item_csv(report: EvalReport) -> str:
    """One row per scored condition; feeds score-distribution plots."""
    label_a, label_b = CONDITION_LABELS[report.task]
    out = io.StringIO()
    out.write("item_id,condition,score,degenerate\n")
    for p in report.pairs:
        out.write(f"{p.item_id},{label_a},{format_score(p.score_a)},{int(p.degenerate_a)}\n")
        out.write(f"{p.item_id},{label_b},{format_score(p.score_b)},{int(p.degenerate_b)}\n")
    return out.getvalue()


def per_k_csv(reports: Sequence[EvalReport]) -> str:
    """One row per (k, variant) accuracy; feeds the accuracy-vs-k plot."""
    out = io.StringIO()
    out.write("k,task,kind,composition,accuracy,n_ties,n_degenerate,coverage\n")
    for r in reports:
        acc = "" if r.accuracy is None else format_score(r.accuracy)
        cov = "" if r.coverage is None else format_score(r.coverage)
        out.write(
            f"{r.variant.k},{r.task},{r.variant.kind.value},{r.variant.composition.value},"
            f"{acc},{r.n_ties},{r.n_degenerate},{cov}\n"
        )
    return out.getvalue()
