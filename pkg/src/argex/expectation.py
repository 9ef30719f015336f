"""Role prototypes and their composition.

A prototype for a slot query (input token, slot relation) is the
unweighted coordinate-wise sum of the vectors of the k most typical
fillers of that slot. Prototypes from several inputs are combined with
vector sum or pointwise multiplication, and a candidate filler is
scored by cosine against the combined expectation.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .errors import ConfigError, EmptyPrototypeError, OutOfVocabularyError, SpaceMismatchError
from .space import (
    CosineResult,
    SparseVector,
    WeightedSpace,
    cosine,
    multiply_vectors,
    sum_vectors,
    top_k_fillers,
    vector_of,
)
from .tokens import ARG, Token, WINDOW

PAPER_K_GRID = (10, 20, 30, 40, 50)


class VariantKind(enum.Enum):
    DEPS = "deps"
    BOA = "boa"
    BOW = "bow"

    @classmethod
    def from_string(cls, text: str) -> "VariantKind":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise ConfigError(f"unknown model variant {text!r}; expected deps, boa, or bow") from None


class Composition(enum.Enum):
    SUM = "sum"
    MULT = "mult"

    @classmethod
    def from_string(cls, text: str) -> "Composition":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise ConfigError(f"unknown composition {text!r}; expected sum or mult") from None


@dataclass(frozen=True)
class ModelVariant:
    kind: VariantKind
    k: int
    composition: Composition

    def __post_init__(self):
        if self.k < 1:
            raise ConfigError(f"k must be >= 1, got {self.k}")

    @property
    def label(self) -> str:
        return f"{self.kind.value}-{self.composition.value}-k{self.k}"


def map_slot(kind: VariantKind, slot: str) -> str:
    """Map a dataset slot label into the variant's index relation.

    DEPS keeps the slot as given; the unstructured variants discard it
    in favor of their single pseudo-relation.
    """
    if kind is VariantKind.BOA:
        return ARG
    if kind is VariantKind.BOW:
        return WINDOW
    return slot


@dataclass(frozen=True)
class SlotQuery:
    input: Token
    slot: str

    def __str__(self) -> str:
        return f"({self.input.canonical}, {self.slot})"


@dataclass(frozen=True)
class Prototype:
    """A composed expectation vector with enough provenance to rebuild it."""

    vector: SparseVector
    space_id: str
    label: str
    # leaf prototypes: the ranked fillers actually summed, with scores
    fillers: tuple[tuple[Token, float], ...] = ()
    requested_k: int = 0
    available: int = 0
    # composed prototypes: the two parents and the operator
    parents: tuple["Prototype", ...] = ()
    op: Composition | None = None

    def __len__(self) -> int:
        return len(self.vector)


def _check_slot(kind: VariantKind, slot: str) -> None:
    if kind is VariantKind.BOA and slot != ARG:
        raise ConfigError(f"BOA queries must use the {ARG} relation, got {slot!r}")
    if kind is VariantKind.BOW and slot != WINDOW:
        raise ConfigError(f"BOW queries must use the {WINDOW} relation, got {slot!r}")
    if kind is VariantKind.DEPS and slot in (ARG, WINDOW):
        raise ConfigError(f"DEPS queries need a dependency relation, got {slot!r}")


def build_prototype(
    space: WeightedSpace,
    variant: ModelVariant,
    query: SlotQuery,
    index=None,
) -> Prototype:
    """Sum the vectors of the top-k fillers of (query.input, query.slot).

    ``index`` overrides the ranking source; vectors always come from
    ``space``. The default is the space's own index.
    """
    _check_slot(variant.kind, query.slot)
    if query.input.canonical not in space.vocabulary:
        raise OutOfVocabularyError(query.input)
    ranked = top_k_fillers(index if index is not None else space.index,
                           query.input, query.slot, variant.k)
    if ranked.empty:
        raise EmptyPrototypeError(str(query))
    vector = sum_vectors([vector_of(space, filler) for filler in ranked.tokens()])
    return Prototype(
        vector=vector,
        space_id=space.space_id,
        label=f"{query.input.canonical}/{query.slot}[k={variant.k}]",
        fillers=tuple(ranked.fillers),
        requested_k=variant.k,
        available=ranked.available,
    )


def compose(p1: Prototype, p2: Prototype, op: Composition) -> Prototype:
    if p1.space_id != p2.space_id:
        raise SpaceMismatchError(
            f"cannot compose prototypes from different spaces "
            f"({p1.space_id[:12]}.. vs {p2.space_id[:12]}..)"
        )
    if op is Composition.SUM:
        vector = sum_vectors([p1.vector, p2.vector])
        joiner = "+"
    else:
        vector = multiply_vectors(p1.vector, p2.vector)
        joiner = "*"
    return Prototype(
        vector=vector,
        space_id=p1.space_id,
        label=f"({p1.label} {joiner} {p2.label})",
        parents=(p1, p2),
        op=op,
    )


def score_filler(space: WeightedSpace, composed: Prototype, candidate: Token) -> CosineResult:
    """Cosine between the candidate's vector and the expectation vector."""
    if composed.space_id != space.space_id:
        raise SpaceMismatchError("prototype was built in a different space")
    return cosine(vector_of(space, candidate), composed.vector)


class ExpectationResult(NamedTuple):
    score: float
    degenerate: bool
    prototype_sizes: tuple[int, ...]
    expectation: Prototype


def expectation_update(
    space: WeightedSpace,
    variant: ModelVariant,
    inputs: Sequence[SlotQuery],
    candidate: Token,
    index=None,
) -> ExpectationResult:
    """Build one prototype per input, left-fold compose, score the candidate."""
    if not inputs:
        raise ConfigError("expectation_update needs at least one input query")
    prototypes = [build_prototype(space, variant, q, index=index) for q in inputs]
    combined = prototypes[0]
    for nxt in prototypes[1:]:
        combined = compose(combined, nxt, variant.composition)
    result = score_filler(space, combined, candidate)
    return ExpectationResult(
        score=result.value,
        degenerate=result.degenerate,
        prototype_sizes=tuple(len(p) for p in prototypes),
        expectation=combined,
    )
