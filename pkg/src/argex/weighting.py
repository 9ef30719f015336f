"""Local Mutual Information weighting of raw counts.

An observed triple count is compared against the count expected if
target, relation, and filler were independent; the weight is
``ln(observed/expected) * observed``, clipped at zero. Triples that are
no more frequent than chance therefore vanish from the weighted space.
"""

from __future__ import annotations

import hashlib
import io
import math
from dataclasses import dataclass, field
from typing import Iterator

from .errors import ConsistencyError, CorpusError, UndefinedModelError
from .tensor import CooccurrenceTensor, Triple, read_sidecar, sidecar_path, write_sidecar
from .tokens import ARG, Token, VERB_LINK, is_inverse, parse_canonical

LOG_BASE_LABEL = "e"  # natural log; base choice rescales scores, never rankings


def format_score(value: float) -> str:
    """17 significant digits: enough for exact float64 round-trips."""
    return f"{value:.17g}"


def expected_count(tensor: CooccurrenceTensor, t: Token, r: str, f: Token) -> float:
    """Count expected under full independence of the three coordinates."""
    n = tensor.total
    if n <= 0:
        raise UndefinedModelError("expected counts are undefined for an empty tensor")
    return n * (tensor.target_marginals.get(t, 0) / n) * (
        tensor.relation_marginals.get(r, 0) / n
    ) * (tensor.filler_marginals.get(f, 0) / n)


def lmi(observed: int, expected: float) -> float:
    """ln(observed/expected) * observed, with the 0*ln(0) limit as 0."""
    if observed < 0 or expected < 0:
        raise ValueError("counts must be non-negative")
    if observed == 0:
        return 0.0
    if expected == 0:
        # Any stored triple forces positive marginals, so this cannot happen
        # for counts drawn from a real tensor.
        raise ConsistencyError("observed > 0 with expected == 0")
    return math.log(observed / expected) * observed


@dataclass
class WeightedTensor:
    """Positive-LMI scores per triple, plus provenance of the source counts."""

    scores: dict[Triple, float] = field(default_factory=dict)
    source_hash: str = ""
    log_base: str = LOG_BASE_LABEL

    def score(self, t: Token, r: str, f: Token) -> float:
        return self.scores.get((t, r, f), 0.0)

    def __len__(self) -> int:
        return len(self.scores)

    def entries(self) -> Iterator[tuple[Triple, float]]:
        for key in sorted(self.scores, key=lambda k: (k[0].canonical, k[1], k[2].canonical)):
            yield key, self.scores[key]

    def to_tsv(self) -> str:
        out = io.StringIO()
        for (t, r, f), score in self.entries():
            out.write(f"{t.canonical}\t{r}\t{f.canonical}\t{format_score(score)}\n")
        return out.getvalue()

    def content_hash(self) -> str:
        return hashlib.sha256(self.to_tsv().encode("utf-8")).hexdigest()

    def save(self, path: str, sidecar: dict[str, str] | None = None) -> str:
        body = self.to_tsv()
        digest = hashlib.sha256(body.encode("utf-8")).hexdigest()
        with io.open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(body)
        meta = {
            "entries": str(len(self.scores)),
            "log_base": self.log_base,
            "source_hash": self.source_hash,
            "content_hash": digest,
        }
        if sidecar:
            meta.update(sidecar)
        write_sidecar(sidecar_path(path), meta)
        return digest

    @classmethod
    def load(cls, path: str) -> "WeightedTensor":
        meta = read_sidecar(sidecar_path(path), missing_ok=True)
        weighted = cls(source_hash=meta.get("source_hash", ""), log_base=meta.get("log_base", LOG_BASE_LABEL))
        try:
            with io.open(path, "r", encoding="utf-8") as fh:
                for lineno, line in enumerate(fh, 1):
                    line = line.rstrip("\n")
                    if not line:
                        continue
                    parts = line.split("\t")
                    if len(parts) != 4:
                        raise CorpusError(f"{path}:{lineno}: expected 4 tab-separated fields")
                    t, r, f, score = parts
                    weighted.scores[(parse_canonical(t), r, parse_canonical(f))] = float(score)
        except OSError as exc:
            raise CorpusError(f"cannot read weighted tensor {path}: {exc}") from exc
        recorded = meta.get("content_hash")
        if recorded and recorded != weighted.content_hash():
            raise ConsistencyError(f"weighted tensor {path} does not match its recorded hash")
        return weighted


def weight_tensor(tensor: CooccurrenceTensor) -> WeightedTensor:
    """Score every triple; keep only strictly positive weights."""
    if tensor.total <= 0:
        raise UndefinedModelError("cannot weight an empty tensor")
    weighted = WeightedTensor(source_hash=tensor.content_hash())
    n = tensor.total
    for (t, r, f), observed in tensor.counts.items():
        expected = n * (tensor.target_marginals[t] / n) * (
            tensor.relation_marginals[r] / n
        ) * (tensor.filler_marginals[f] / n)
        value = lmi(observed, expected)
        if value > 0.0:
            weighted.scores[(t, r, f)] = value
    return weighted


def default_collapse_relations(tensor: CooccurrenceTensor) -> frozenset[str]:
    """All direct dependency relations: no inverses, no synthetic VERB link."""
    return frozenset(
        r for r in tensor.relation_marginals if not is_inverse(r) and r != VERB_LINK
    )


def collapse_relations(
    tensor: CooccurrenceTensor, relation_filter: frozenset[str] | None = None
) -> CooccurrenceTensor:
    """Sum counts over relations into the single ARG pseudo-relation.

    The default filter keeps direct dependency relations only, so each arc
    contributes exactly once per (target, filler) pair. Marginals are those
    of the collapsed tensor itself.
    """
    if relation_filter is None:
        relation_filter = default_collapse_relations(tensor)
    collapsed = CooccurrenceTensor()
    for (t, r, f), count in tensor.counts.items():
        if r in relation_filter:
            collapsed.add(t, ARG, f, count)
    return collapsed


def max_over_relations(
    weighted: WeightedTensor, relation_filter: frozenset[str] | None = None
) -> WeightedTensor:
    """Alternative ARG scoring: each pair keeps its best per-relation score.

    Where collapse_relations pools counts before weighting, this takes the
    already-weighted tensor and ranks a (target, filler) pair by the
    maximum score it reaches under any single kept relation.
    """
    if relation_filter is None:
        relation_filter = frozenset(
            r for (_, r, _) in weighted.scores if not is_inverse(r) and r != VERB_LINK
        )
    out = WeightedTensor(source_hash=weighted.content_hash(), log_base=weighted.log_base)
    for (t, r, f), score in weighted.scores.items():
        if r not in relation_filter:
            continue
        key = (t, ARG, f)
        if score > out.scores.get(key, 0.0):
            out.scores[key] = score
    return out
