"""Weighted sparse vector space with ranked filler indices.

A space holds one row per target over (relation, filler) dimensions with
positive association scores, plus, for each (target, relation), the
fillers ranked by descending score. Spaces are immutable once built and
round-trip bit-exactly through their on-disk archive (a directory of
sorted TSV files with a hash-verified manifest).
"""

from __future__ import annotations

import hashlib
import io
import math
import os
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

from .corpus import Vocabulary
from .errors import ConsistencyError, CorpusError, OutOfVocabularyError
from .tokens import Token, parse_canonical
from .weighting import WeightedTensor, format_score

FORMAT_VERSION = "1"
_DATA_FILES = ("catalog.tsv", "vocab.tsv", "rows.tsv", "index.tsv")


@dataclass(frozen=True)
class SparseVector:
    """Sorted (dimension id, positive score) pairs with a cached norm."""

    ids: tuple[int, ...] = ()
    scores: tuple[float, ...] = ()
    norm: float = field(init=False, default=0.0)

    def __post_init__(self):
        object.__setattr__(self, "norm", math.sqrt(sum(s * s for s in self.scores)))

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, float]]) -> "SparseVector":
        """Build from unordered pairs; zero scores are dropped as absent."""
        kept = []
        for dim, score in pairs:
            if score < 0:
                raise ValueError(f"negative score for dimension {dim}")
            if score > 0:
                kept.append((dim, score))
        kept.sort()
        ids = tuple(dim for dim, _ in kept)
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate dimension ids")
        return cls(ids, tuple(score for _, score in kept))

    def __len__(self) -> int:
        return len(self.ids)

    def items(self):
        return zip(self.ids, self.scores)

    def dot(self, other: "SparseVector") -> float:
        i = j = 0
        acc = 0.0
        while i < len(self.ids) and j < len(other.ids):
            a, b = self.ids[i], other.ids[j]
            if a == b:
                acc += self.scores[i] * other.scores[j]
                i += 1
                j += 1
            elif a < b:
                i += 1
            else:
                j += 1
        return acc


EMPTY_VECTOR = SparseVector()


class CosineResult(NamedTuple):
    value: float
    degenerate: bool  # True when either operand had zero norm


def cosine(a: SparseVector, b: SparseVector) -> CosineResult:
    """Cosine similarity in [0, 1]; zero-norm operands score 0, flagged."""
    if a.norm == 0.0 or b.norm == 0.0:
        return CosineResult(0.0, True)
    value = a.dot(b) / (a.norm * b.norm)
    return CosineResult(min(1.0, max(0.0, value)), False)


def sum_vectors(vectors: Sequence[SparseVector]) -> SparseVector:
    """Coordinate-wise sum; support is the union of the operand supports."""
    acc: dict[int, float] = {}
    for vector in vectors:
        for dim, score in vector.items():
            acc[dim] = acc.get(dim, 0.0) + score
    return SparseVector.from_pairs(acc.items())


def multiply_vectors(a: SparseVector, b: SparseVector) -> SparseVector:
    """Coordinate-wise product; dimensions not shared by both are zeroed."""
    out = []
    i = j = 0
    while i < len(a.ids) and j < len(b.ids):
        x, y = a.ids[i], b.ids[j]
        if x == y:
            out.append((x, a.scores[i] * b.scores[j]))
            i += 1
            j += 1
        elif x < y:
            i += 1
        else:
            j += 1
    return SparseVector.from_pairs(out)


class DimensionCatalog:
    """Bijection between dimension ids and (relation, filler) pairs."""

    def __init__(self, dimensions: Sequence[tuple[str, str]]):
        self._dims = tuple(dimensions)
        self._by_pair = {pair: i for i, pair in enumerate(self._dims)}
        if len(self._by_pair) != len(self._dims):
            raise ConsistencyError("duplicate dimensions in catalog")

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, str]]) -> "DimensionCatalog":
        return cls(sorted(set(pairs)))

    def __len__(self) -> int:
        return len(self._dims)

    def id_of(self, relation: str, filler: str) -> int | None:
        return self._by_pair.get((relation, filler))

    def pair_of(self, dim_id: int) -> tuple[str, str]:
        return self._dims[dim_id]

    def pairs(self) -> tuple[tuple[str, str], ...]:
        return self._dims


@dataclass
class RankedFillers:
    """Query result for a (target, relation) slot."""

    fillers: list[tuple[Token, float]]
    requested: int
    available: int

    @property
    def shortfall(self) -> bool:
        return self.available < self.requested

    @property
    def empty(self) -> bool:
        return self.available == 0

    def tokens(self) -> list[Token]:
        return [t for t, _ in self.fillers]


class FillerIndex:
    """Per (target, relation) filler rankings: score desc, then lexicographic."""

    def __init__(self, rankings: dict[tuple[str, str], tuple[tuple[Token, float], ...]]):
        self._rankings = rankings

    @classmethod
    def from_weighted(
        cls, weighted: WeightedTensor, extra: WeightedTensor | None = None
    ) -> "FillerIndex":
        groups: dict[tuple[str, str], list[tuple[Token, float]]] = {}
        for source in (weighted, extra):
            if source is None:
                continue
            for (t, r, f), score in source.scores.items():
                groups.setdefault((t.canonical, r), []).append((f, score))
        rankings = {}
        for key, fillers in groups.items():
            fillers.sort(key=lambda pair: (-pair[1], pair[0].canonical))
            rankings[key] = tuple(fillers)
        return cls(rankings)

    def __len__(self) -> int:
        return len(self._rankings)

    def keys(self):
        return self._rankings.keys()

    def ranking(self, target: str, relation: str) -> tuple[tuple[Token, float], ...]:
        return self._rankings.get((target, relation), ())


def top_k_fillers(index: FillerIndex, target: Token, relation: str, k: int) -> RankedFillers:
    """The k best fillers of (target, relation); short lists are flagged."""
    if k < 1:
        raise ValueError("k must be >= 1")
    ranking = index.ranking(target.canonical, relation)
    return RankedFillers(list(ranking[:k]), requested=k, available=len(ranking))


@dataclass
class WeightedSpace:
    catalog: DimensionCatalog
    rows: dict[str, SparseVector]
    index: FillerIndex
    vocabulary: frozenset[str]
    manifest: dict[str, str] = field(default_factory=dict)

    @property
    def space_id(self) -> str:
        return self.manifest.get("space_id", "")

    def __contains__(self, token: Token) -> bool:
        return token.canonical in self.vocabulary


def vector_of(space: WeightedSpace, token: Token) -> SparseVector:
    """Full row of a vocabulary target; rows absent from the space are empty."""
    if token.canonical not in space.vocabulary:
        raise OutOfVocabularyError(token)
    return space.rows.get(token.canonical, EMPTY_VECTOR)


def build_space(
    weighted: WeightedTensor,
    vocabulary: Vocabulary | Iterable[Token],
    extra_index: WeightedTensor | None = None,
    manifest: dict[str, str] | None = None,
) -> WeightedSpace:
    """Assemble rows, catalog, and filler index from weighted counts.

    ``extra_index`` contributes rankings only (e.g. relation-collapsed
    typicality scores); its entries never become vector dimensions.
    """
    catalog = DimensionCatalog.from_pairs(
        (r, f.canonical) for (_, r, f) in weighted.scores
    )
    per_target: dict[str, list[tuple[int, float]]] = {}
    for (t, r, f), score in weighted.scores.items():
        dim = catalog.id_of(r, f.canonical)
        per_target.setdefault(t.canonical, []).append((dim, score))
    rows = {target: SparseVector.from_pairs(pairs) for target, pairs in per_target.items()}
    index = FillerIndex.from_weighted(weighted, extra_index)
    tokens = vocabulary.sorted_tokens() if isinstance(vocabulary, Vocabulary) else vocabulary
    vocab = frozenset(t.canonical for t in tokens)
    info = {
        "format_version": FORMAT_VERSION,
        "source_hash": weighted.source_hash,
        "log_base": weighted.log_base,
        "n_targets": str(len(rows)),
        "n_dims": str(len(catalog)),
        "n_vocab": str(len(vocab)),
    }
    if manifest:
        info.update(manifest)
    space = WeightedSpace(catalog, rows, index, vocab, info)
    space.manifest["space_id"] = _content_hash(space)
    return space


# -- archive -------------------------------------------------------------


def _catalog_tsv(space: WeightedSpace) -> str:
    out = io.StringIO()
    for dim_id, (relation, filler) in enumerate(space.catalog.pairs()):
        out.write(f"{dim_id}\t{relation}\t{filler}\n")
    return out.getvalue()


def _vocab_tsv(space: WeightedSpace) -> str:
    return "".join(f"{t}\n" for t in sorted(space.vocabulary))


def _rows_tsv(space: WeightedSpace) -> str:
    out = io.StringIO()
    for target in sorted(space.rows):
        vector = space.rows[target]
        for dim, score in vector.items():
            out.write(f"{target}\t{dim}\t{format_score(score)}\n")
    return out.getvalue()


def _index_tsv(space: WeightedSpace) -> str:
    out = io.StringIO()
    for target, relation in sorted(space.index.keys()):
        for filler, score in space.index.ranking(target, relation):
            out.write(f"{target}\t{relation}\t{filler.canonical}\t{format_score(score)}\n")
    return out.getvalue()


def _content_hash(space: WeightedSpace) -> str:
    digest = hashlib.sha256()
    for body in (_catalog_tsv(space), _vocab_tsv(space), _rows_tsv(space), _index_tsv(space)):
        digest.update(body.encode("utf-8"))
    return digest.hexdigest()


def save_space(space: WeightedSpace, directory: str) -> str:
    """Write the archive; returns the space id recorded in the manifest."""
    os.makedirs(directory, exist_ok=True)
    bodies = dict(
        zip(_DATA_FILES, (_catalog_tsv(space), _vocab_tsv(space), _rows_tsv(space), _index_tsv(space)))
    )
    for name, body in bodies.items():
        with io.open(os.path.join(directory, name), "w", encoding="utf-8", newline="\n") as fh:
            fh.write(body)
    manifest = dict(space.manifest)
    manifest["space_id"] = _content_hash(space)
    with io.open(os.path.join(directory, "manifest.txt"), "w", encoding="utf-8", newline="\n") as fh:
        for key in sorted(manifest):
            fh.write(f"{key}={manifest[key]}\n")
    return manifest["space_id"]


def load_space(directory: str) -> WeightedSpace:
    """Read an archive back, verifying the manifest hash."""
    manifest = {}
    try:
        with io.open(os.path.join(directory, "manifest.txt"), "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.rstrip("\n")
                if line:
                    key, _, value = line.partition("=")
                    manifest[key] = value
        dims = []
        with io.open(os.path.join(directory, "catalog.tsv"), "r", encoding="utf-8") as fh:
            for line in fh:
                dim_id, relation, filler = line.rstrip("\n").split("\t")
                if int(dim_id) != len(dims):
                    raise ConsistencyError(f"non-contiguous dimension ids in {directory}")
                dims.append((relation, filler))
        catalog = DimensionCatalog(dims)
        vocab = set()
        with io.open(os.path.join(directory, "vocab.tsv"), "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.rstrip("\n")
                if line:
                    vocab.add(line)
        per_target: dict[str, list[tuple[int, float]]] = {}
        with io.open(os.path.join(directory, "rows.tsv"), "r", encoding="utf-8") as fh:
            for line in fh:
                target, dim, score = line.rstrip("\n").split("\t")
                per_target.setdefault(target, []).append((int(dim), float(score)))
        rows = {t: SparseVector.from_pairs(pairs) for t, pairs in per_target.items()}
        rankings: dict[tuple[str, str], list[tuple[Token, float]]] = {}
        with io.open(os.path.join(directory, "index.tsv"), "r", encoding="utf-8") as fh:
            for line in fh:
                target, relation, filler, score = line.rstrip("\n").split("\t")
                rankings.setdefault((target, relation), []).append(
                    (parse_canonical(filler), float(score))
                )
    except OSError as exc:
        raise CorpusError(f"cannot read space archive {directory}: {exc}") from exc
    index = FillerIndex({key: tuple(fillers) for key, fillers in rankings.items()})
    space = WeightedSpace(catalog, rows, index, frozenset(vocab), manifest)
    recorded = manifest.get("space_id", "")
    actual = _content_hash(space)
    if recorded != actual:
        raise ConsistencyError(
            f"space archive {directory} failed verification: "
            f"manifest records {recorded[:12]}.., content is {actual[:12]}.."
        )
    return space


def dump_top_dimensions(space: WeightedSpace, k: int = 10) -> str:
    """Diagnostic TSV: per target, its k heaviest (relation, filler) dims."""
    out = io.StringIO()
    for target in sorted(space.rows):
        vector = space.rows[target]
        heaviest = sorted(
            vector.items(), key=lambda pair: (-pair[1], space.catalog.pair_of(pair[0]))
        )[:k]
        for dim, score in heaviest:
            relation, filler = space.catalog.pair_of(dim)
            out.write(f"{target}\t{relation}:{filler}\t{format_score(score)}\n")
    return out.getvalue()
