"""Text normalization pipeline: contraction expansion, punctuation removal,
NOT_ negation tagging, and part-of-speech annotation.

Pipeline order for a document: expand contractions, split into sentences
(one per line), strip punctuation, tokenize and lowercase, tag negation
scopes, tag part-of-speech.
"""

from __future__ import annotations

import re
import string
from dataclasses import dataclass, field

from .corpus import Label, RawDocument
from .tagging import FALLBACK_TAG, PretaggedReader, RuleTagger

NEGATION_PREFIX = "NOT_"

_PUNCT = frozenset(string.punctuation)

# The n't family only; possessives and auxiliaries ("it's", "i'm") stay put.
_CONTRACTIONS = {
    "ain't": "is not",
    "aren't": "are not",
    "can't": "can not",
    "couldn't": "could not",
    "didn't": "did not",
    "doesn't": "does not",
    "don't": "do not",
    "hadn't": "had not",
    "hasn't": "has not",
    "haven't": "have not",
    "isn't": "is not",
    "mightn't": "might not",
    "mustn't": "must not",
    "needn't": "need not",
    "oughtn't": "ought not",
    "shan't": "shall not",
    "shouldn't": "should not",
    "wasn't": "was not",
    "weren't": "were not",
    "won't": "will not",
    "wouldn't": "would not",
}

_CONTRACTION_RE = re.compile(
    r"\b(" + "|".join(re.escape(c) for c in sorted(_CONTRACTIONS, key=len, reverse=True)) + r")\b",
    re.IGNORECASE,
)
# Tokenized corpora split the apostrophe off ("isn ' t"); rejoin before lookup.
_SPLIT_APOSTROPHE_RE = re.compile(r"\b([A-Za-z]+n) ' t\b", re.IGNORECASE)


@dataclass(frozen=True)
class Token:
    """One word with its tag and negation state.

    A negated token's surface carries the NOT_ prefix; ``bare`` recovers the
    original form for lexicon lookups and non-negated feature variants.
    """

    surface: str
    pos: str = ""
    negated: bool = False

    @property
    def bare(self) -> str:
        return self.surface[len(NEGATION_PREFIX):] if self.negated else self.surface


Sentence = list[Token]


@dataclass(frozen=True)
class Document:
    id: str
    label: Label
    sentences: list[Sentence]


@dataclass
class PreprocessConfig:
    apply_negation: bool = True
    negation_triggers: frozenset[str] = frozenset({"not"})
    punctuation_keep: frozenset[str] = frozenset({"!", "?"})
    tagger: object = field(default_factory=RuleTagger)


def expand_contractions(text: str) -> str:
    """Rewrite every n't-family contraction to its two-word form.

    Unknown forms pass through untouched; a leading capital survives
    ("Isn't" becomes "Is not").
    """

    def replace(match: re.Match) -> str:
        found = match.group(1)
        expansion = _CONTRACTIONS[found.lower()]
        if found[0].isupper():
            expansion = expansion[0].upper() + expansion[1:]
        return expansion

    text = _SPLIT_APOSTROPHE_RE.sub(lambda m: m.group(1) + "'t", text)
    return _CONTRACTION_RE.sub(replace, text)


def strip_punctuation(text: str, keep: frozenset[str] = frozenset({"!", "?"})) -> str:
    """Delete punctuation characters except *keep*, which become standalone tokens."""
    out: list[str] = []
    for ch in text:
        if ch in keep:
            out.append(f" {ch} ")
        elif ch in _PUNCT:
            continue
        else:
            out.append(ch)
    return " ".join("".join(out).split())


def tag_negation(sentence: Sentence, triggers: frozenset[str] = frozenset({"not"}),
                 terminators: frozenset[str] = frozenset({"!", "?"})) -> Sentence:
    """Prefix NOT_ to every token after a trigger, up to the next kept
    punctuation token or the end of the sentence.

    The trigger itself stays untagged and already-tagged tokens are never
    double-prefixed, so the operation is idempotent.
    """
    out: Sentence = []
    in_scope = False
    for token in sentence:
        if token.surface in terminators:
            in_scope = False
            out.append(token)
        elif not in_scope and token.surface in triggers:
            in_scope = True
            out.append(token)
        elif in_scope and not token.negated:
            out.append(Token(surface=NEGATION_PREFIX + token.surface, pos=token.pos, negated=True))
        else:
            out.append(token)
    return out


def tag_pos(sentence: Sentence, tagger) -> Sentence:
    """Attach a tag to every token, looking words up by their bare surface.

    With a PretaggedReader the sentence must consist of ``word_TAG`` tokens,
    which are split into surface and tag here.
    """
    if isinstance(tagger, PretaggedReader):
        out = []
        for i, token in enumerate(sentence):
            word, tag = tagger.parse(token.bare, i)
            surface = NEGATION_PREFIX + word if token.negated else word
            out.append(Token(surface=surface, pos=tag, negated=token.negated))
        return out
    tags = tagger.tag([t.bare for t in sentence])
    return [
        Token(surface=t.surface, pos=tag or FALLBACK_TAG, negated=t.negated)
        for t, tag in zip(sentence, tags)
    ]


def _tokenize_plain(line: str, cfg: PreprocessConfig) -> Sentence:
    stripped = strip_punctuation(line, cfg.punctuation_keep)
    return [Token(surface=w) for w in stripped.lower().split()]


def _tokenize_pretagged(line: str, cfg: PreprocessConfig, reader: PretaggedReader) -> Sentence:
    tokens: Sentence = []
    for i, raw in enumerate(line.split()):
        word, tag = reader.parse(raw, i)
        word = word.lower()
        if all(ch in _PUNCT for ch in word):
            if word in cfg.punctuation_keep:
                tokens.append(Token(surface=word, pos=tag))
            continue
        tokens.append(Token(surface=word, pos=tag))
    return tokens


def preprocess_document(doc: RawDocument, cfg: PreprocessConfig | None = None) -> Document:
    """Run the full normalization pipeline over one raw document.

    Pre-tagged input skips contraction expansion and text-level punctuation
    stripping (the external tokenization is authoritative); punctuation is
    filtered token-wise instead and tags are taken from the annotations.
    """
    if cfg is None:
        cfg = PreprocessConfig()
    pretagged = isinstance(cfg.tagger, PretaggedReader)

    text = doc.text if pretagged else expand_contractions(doc.text)
    sentences: list[Sentence] = []
    for line in text.splitlines():
        if pretagged:
            sentence = _tokenize_pretagged(line, cfg, cfg.tagger)
        else:
            sentence = _tokenize_plain(line, cfg)
        if not sentence:
            continue
        if cfg.apply_negation:
            sentence = tag_negation(sentence, cfg.negation_triggers, cfg.punctuation_keep)
        if not pretagged:
            sentence = tag_pos(sentence, cfg.tagger)
        sentences.append(sentence)
    return Document(id=doc.id, label=doc.label, sentences=sentences)
