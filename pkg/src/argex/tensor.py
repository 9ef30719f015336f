"""Sparse (target, relation, filler) count tensors.

Counts are plain integers keyed by triples; per-coordinate marginals and
the grand total are maintained incrementally so expected-count formulas
never rescan the tensor. Zero entries are never stored. Serialization is
a sorted TSV plus a small sidecar, byte-deterministic for a given input.
"""

from __future__ import annotations

import hashlib
import io
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .errors import ConsistencyError, CorpusError
from .tokens import Token, parse_canonical

Triple = tuple[Token, str, Token]


@dataclass
class CooccurrenceTensor:
    counts: Counter = field(default_factory=Counter)
    total: int = 0
    target_marginals: Counter = field(default_factory=Counter)
    relation_marginals: Counter = field(default_factory=Counter)
    filler_marginals: Counter = field(default_factory=Counter)

    def add(self, target: Token, relation: str, filler: Token, count: int = 1) -> None:
        if count <= 0:
            raise ValueError("count increments must be positive")
        self.counts[(target, relation, filler)] += count
        self.total += count
        self.target_marginals[target] += count
        self.relation_marginals[relation] += count
        self.filler_marginals[filler] += count

    def count(self, target: Token, relation: str, filler: Token) -> int:
        return self.counts.get((target, relation, filler), 0)

    def __len__(self) -> int:
        return len(self.counts)

    def entries(self) -> Iterator[tuple[Triple, int]]:
        """Iterate entries in canonical (target, relation, filler) order."""
        for key in sorted(self.counts, key=_triple_key):
            yield key, self.counts[key]

    def relations(self) -> list[str]:
        return sorted(self.relation_marginals)

    def merge(self, other: "CooccurrenceTensor") -> None:
        """Fold another shard into this tensor (integer addition per key)."""
        for key, count in other.counts.items():
            self.counts[key] += count
        self.total += other.total
        self.target_marginals.update(other.target_marginals)
        self.relation_marginals.update(other.relation_marginals)
        self.filler_marginals.update(other.filler_marginals)

    def validate(self) -> None:
        """Recompute marginals by full summation and compare. O(entries)."""
        targets: Counter = Counter()
        relations: Counter = Counter()
        fillers: Counter = Counter()
        total = 0
        for (t, r, f), count in self.counts.items():
            if count <= 0:
                raise ConsistencyError(f"stored zero/negative count for {(t, r, f)}")
            targets[t] += count
            relations[r] += count
            fillers[f] += count
            total += count
        if (
            total != self.total
            or targets != self.target_marginals
            or relations != self.relation_marginals
            or fillers != self.filler_marginals
        ):
            raise ConsistencyError("tensor marginals disagree with entry sums")

    # -- serialization ---------------------------------------------------

    def to_tsv(self) -> str:
        out = io.StringIO()
        for (t, r, f), count in self.entries():
            out.write(f"{t.canonical}\t{r}\t{f.canonical}\t{count}\n")
        return out.getvalue()

    def content_hash(self) -> str:
        return hashlib.sha256(self.to_tsv().encode("utf-8")).hexdigest()

    def save(self, path: str, sidecar: dict[str, str] | None = None) -> str:
        """Write the sorted TSV and its sidecar; returns the content hash."""
        body = self.to_tsv()
        digest = hashlib.sha256(body.encode("utf-8")).hexdigest()
        with io.open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(body)
        meta = {
            "total": str(self.total),
            "entries": str(len(self.counts)),
            "content_hash": digest,
        }
        if sidecar:
            meta.update(sidecar)
        write_sidecar(sidecar_path(path), meta)
        return digest

    @classmethod
    def load(cls, path: str, verify: bool = True) -> "CooccurrenceTensor":
        tensor = cls()
        try:
            with io.open(path, "r", encoding="utf-8") as fh:
                for lineno, line in enumerate(fh, 1):
                    line = line.rstrip("\n")
                    if not line:
                        continue
                    parts = line.split("\t")
                    if len(parts) != 4:
                        raise CorpusError(f"{path}:{lineno}: expected 4 tab-separated fields")
                    t, r, f, count = parts
                    tensor.add(parse_canonical(t), r, parse_canonical(f), int(count))
        except OSError as exc:
            raise CorpusError(f"cannot read tensor {path}: {exc}") from exc
        if verify:
            meta = read_sidecar(sidecar_path(path), missing_ok=True)
            recorded = meta.get("content_hash")
            if recorded and recorded != tensor.content_hash():
                raise ConsistencyError(f"tensor {path} does not match its recorded hash")
        return tensor

    @classmethod
    def from_entries(cls, entries: Iterable[tuple[Triple, int]]) -> "CooccurrenceTensor":
        tensor = cls()
        for (t, r, f), count in entries:
            tensor.add(t, r, f, count)
        return tensor


def _triple_key(key: Triple):
    t, r, f = key
    return (t.canonical, r, f.canonical)


def merge_tensors(shards: Iterable[CooccurrenceTensor]) -> CooccurrenceTensor:
    merged = CooccurrenceTensor()
    for shard in shards:
        merged.merge(shard)
    return merged


def sidecar_path(path: str) -> str:
    return path + ".meta"


def write_sidecar(path: str, values: dict[str, str]) -> None:
    with io.open(path, "w", encoding="utf-8", newline="\n") as fh:
        for key in sorted(values):
            fh.write(f"{key}={values[key]}\n")


def read_sidecar(path: str, missing_ok: bool = False) -> dict[str, str]:
    try:
        with io.open(path, "r", encoding="utf-8") as fh:
            values = {}
            for line in fh:
                line = line.rstrip("\n")
                if not line:
                    continue
                key, sep, value = line.partition("=")
                if not sep:
                    raise CorpusError(f"bad sidecar line in {path}: {line!r}")
                values[key] = value
            return values
    except OSError as exc:
        if missing_ok:
            return {}
        raise CorpusError(f"cannot read sidecar {path}: {exc}") from exc
