"""Part-of-speech taggers.

Two implementations behind one interface: a self-contained greedy
lexicon-plus-suffix tagger, and a reader for corpora that already carry
``word_TAG`` annotations from an external tagger.
"""

from __future__ import annotations

import re

from .errors import ConfigError, DataError

# Penn-Treebank-style inventory emitted by the built-in tagger. Externally
# tagged input may carry any tag; only the coarse class (first letter) is
# interpreted downstream.
TAG_INVENTORY = frozenset(
    {
        "CC", "CD", "DT", "EX", "IN", "JJ", "JJR", "JJS", "MD",
        "NN", "NNS", "PRP", "PRP$", "RB", "RBR", "RBS", "TO", "UH",
        "VB", "VBD", "VBG", "VBN", "VBP", "VBZ", "WDT", "WP", "WRB", ".",
    }
)

FALLBACK_TAG = "NN"

ADJECTIVE_TAGS = frozenset({"JJ", "JJR", "JJS"})
ADVERB_TAGS = frozenset({"RB", "RBR", "RBS"})

_NUMBER = re.compile(r"^\d+([.,:/\-]\d+)*$")

_CLOSED_CLASS = {
    "DT": "the a an this that these those some any each every no all both "
          "either neither another such",
    "PRP": "i you he she it we they me him her us them myself yourself himself "
           "herself itself ourselves themselves oneself nothing something "
           "anything everything nobody somebody anybody everybody someone "
           "anyone everyone none",
    "PRP$": "my your his its our their mine yours hers ours theirs",
    "IN": "of in on at by for with about against between among into through "
          "during before after above below from up down over under although "
          "though while whereas because if unless since until as than despite "
          "within without behind beside besides toward towards upon onto near "
          "except albeit",
    "CC": "and but or nor yet plus",
    "MD": "will would can could shall should may might must",
    "TO": "to",
    "EX": "there",
    "WP": "who whom what",
    "WDT": "which",
    "WRB": "when where why how",
    "UH": "oh wow hey yeah yes",
}

_VERB_FORMS = {
    "am": "VBP", "is": "VBZ", "are": "VBP", "was": "VBD", "were": "VBD",
    "be": "VB", "been": "VBN", "being": "VBG",
    "have": "VBP", "has": "VBZ", "had": "VBD", "having": "VBG",
    "do": "VBP", "does": "VBZ", "did": "VBD", "done": "VBN", "doing": "VBG",
}

# Base-form verbs common in review prose; inflections are derived by rule.
_VERBS = (
    "love like hate recommend enjoy think know want need feel believe hope "
    "seem look make take get go come see say tell give find watch play work "
    "try use keep show mean leave put bring begin start stop end call ask "
    "turn follow act direct produce write read hear avoid miss expect suppose "
    "happen appear manage fail deserve suck stink bore entertain impress "
    "disappoint annoy amaze surprise laugh cry care win lose save waste"
).split()

_ADJECTIVES = (
    "good bad great best worst better worse fine nice awful terrible excellent "
    "poor perfect real whole own same other new old big small long short high "
    "low right wrong true happy sad funny hilarious dull interesting "
    "entertaining amazing stunning brilliant superb solid weak strong cheap "
    "flat predictable original fresh stale silly stupid smart clever dumb lame "
    "cool sweet dark deep rich empty full main major minor serious slow fast "
    "hard easy simple complex clear obvious subtle worth able sure favorite "
    "classic mediocre bland annoying disappointing boring compelling charming "
    "decent top many few much little"
).split()

_ADVERBS = (
    "not never very really quite too so just only even still almost always "
    "often sometimes usually nearly rarely seldom here now then once twice "
    "perhaps maybe again away back well far soon already ever instead "
    "rather otherwise however nevertheless nonetheless contrarily conversely "
    "regardless alternatively notwithstanding also indeed pretty enough "
    "somewhat totally completely barely hardly"
).split()

_JJ_SUFFIXES = ("ous", "ful", "able", "ible", "ive", "less", "ish")


def _build_word_tags() -> dict[str, str]:
    table: dict[str, str] = {}
    for tag, words in _CLOSED_CLASS.items():
        for word in words.split():
            table[word] = tag
    table.update(_VERB_FORMS)
    for word in _VERBS:
        table.setdefault(word, "VB")
    for word in _ADJECTIVES:
        table[word] = "JJ"
    for word in _ADVERBS:
        table[word] = "RB"
    table.update({"best": "JJS", "worst": "JJS", "better": "JJR", "worse": "JJR",
                  "more": "RBR", "most": "RBS", "less": "RBR", "least": "RBS"})
    return table


class RuleTagger:
    """Greedy word-lexicon tagger with suffix and -ed/-ing context rules.

    Lookup order: word lexicon, punctuation/number checks, adjective
    suffixes, verb-inflection rules, then the NN/NNS fallback. Read-only
    after construction, so instances are safe to share.
    """

    name = "builtin"

    def __init__(self) -> None:
        self._words = _build_word_tags()
        self._verbs = set(_VERBS) | {"be", "have", "do"}

    def tag(self, words: list[str]) -> list[str]:
        tags: list[str] = []
        prev = ""
        for word in words:
            tags.append(self._tag_one(word, prev))
            prev = word
        return tags

    def _tag_one(self, word: str, prev: str) -> str:
        known = self._words.get(word)
        if known is not None:
            return known
        if not any(ch.isalnum() for ch in word):
            return "."
        if _NUMBER.match(word):
            return "CD"
        if word.endswith("ly") and len(word) > 3:
            return "RB"
        for suffix in _JJ_SUFFIXES:
            if word.endswith(suffix) and len(word) > len(suffix) + 1:
                return "JJ"
        if word.endswith("ing") and len(word) > 4:
            return "VBG"
        if word.endswith("ed") and len(word) > 3:
            return "VBN" if prev in _VERB_FORMS else "VBD"
        if word.endswith("s") and not word.endswith("ss") and len(word) > 3:
            if word[:-1] in self._verbs:
                return "VBZ"
            return "NNS"
        return FALLBACK_TAG


class PretaggedReader:
    """Parses tokens already annotated as ``word_TAG`` by an external tagger."""

    name = "pretagged"

    def parse(self, token: str, position: int) -> tuple[str, str]:
        if "_" not in token:
            if token and not any(ch.isalnum() for ch in token):
                return token, "."
            raise DataError(f"malformed word_TAG token {token!r} at position {position}")
        word, _, tag = token.rpartition("_")
        if not word or not tag:
            raise DataError(f"malformed word_TAG token {token!r} at position {position}")
        return word, tag

    def tag(self, words: list[str]) -> list[str]:
        return [self.parse(token, i)[1] for i, token in enumerate(words)]


def get_tagger(name: str):
    if name == "builtin":
        return RuleTagger()
    if name == "pretagged":
        return PretaggedReader()
    raise ConfigError(f"unknown tagger {name!r} (expected 'builtin' or 'pretagged')")
