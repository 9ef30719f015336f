"""Vocabulary units: lemma + coarse part-of-speech tokens.

The atomic unit everywhere downstream is a lowercased lemma paired with a
coarse tag, rendered canonically as ``lemma-pos`` (``arrest-v``,
``policeman-n``). Only nouns and verbs are representable; everything else
is outside the model vocabulary by construction.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConfigError

NOUN = "n"
VERB_POS = "v"
COARSE_TAGS = (NOUN, VERB_POS)

# Synthetic relation labels. Inverse relations carry the `_inv` suffix so
# that noun -> verb lookups are first-class index entries.
INVERSE_SUFFIX = "_inv"
VERB_LINK = "VERB"
WINDOW = "WINDOW"
ARG = "ARG"

# Fine-grained tags are collapsed by prefix; tags that match nothing are
# outside the vocabulary (determiners, adverbs, punctuation, ...).
DEFAULT_POS_PREFIXES = (("N", NOUN), ("V", VERB_POS))


@dataclass(frozen=True, order=True)
class Token:
    """A lowercased lemma with its coarse tag (one of ``n``/``v``)."""

    lemma: str
    pos: str

    def __post_init__(self):
        if not self.lemma or any(c.isspace() for c in self.lemma):
            raise ValueError(f"invalid lemma: {self.lemma!r}")
        if self.pos not in COARSE_TAGS:
            raise ValueError(f"invalid coarse tag: {self.pos!r}")

    @property
    def canonical(self) -> str:
        return f"{self.lemma}-{self.pos}"

    def __str__(self) -> str:
        return self.canonical


def parse_canonical(text: str) -> Token:
    """Parse a ``lemma-pos`` rendering back into a Token.

    The split is on the last hyphen, so hyphenated lemmas round-trip.
    """
    lemma, sep, pos = text.rpartition("-")
    if not sep or not lemma:
        raise ValueError(f"not a lemma-pos rendering: {text!r}")
    return Token(lemma, pos)


def inverse(relation: str) -> str:
    return relation + INVERSE_SUFFIX


def is_inverse(relation: str) -> bool:
    return relation.endswith(INVERSE_SUFFIX)


def compile_pos_map(mapping: str) -> tuple[tuple[str, str], ...]:
    """Compile a ``PREFIX:tag,PREFIX:tag`` string into prefix rules.

    Longer prefixes win over shorter ones so e.g. ``NNP:n,N:n`` behaves
    predictably regardless of listing order.
    """
    rules = []
    for part in mapping.split(","):
        part = part.strip()
        if not part:
            continue
        prefix, sep, tag = part.partition(":")
        if not sep or not prefix or tag not in COARSE_TAGS:
            raise ConfigError(f"bad POS mapping entry: {part!r}")
        rules.append((prefix.upper(), tag))
    rules.sort(key=lambda r: (-len(r[0]), r[0]))
    return tuple(rules)


def coarse_pos(fine_tag: str, pos_map=DEFAULT_POS_PREFIXES) -> str | None:
    """Collapse a fine-grained tag to ``n``/``v``, or None if unmapped."""
    tag = fine_tag.upper()
    for prefix, coarse in pos_map:
        if tag.startswith(prefix):
            return coarse
    return None


def normalize(lemma: str, fine_tag: str, pos_map=DEFAULT_POS_PREFIXES) -> Token | None:
    """Turn a raw (lemma, fine tag) pair into a Token, or None.

    None means the surface position still exists but can never enter the
    vocabulary: unmapped POS, empty lemma, or a lemma with whitespace.
    """
    coarse = coarse_pos(fine_tag, pos_map)
    if coarse is None:
        return None
    lemma = lemma.lower()
    if not lemma or any(c.isspace() for c in lemma):
        return None
    return Token(lemma, coarse)
