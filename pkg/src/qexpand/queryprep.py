"""Query preprocessing: part-of-speech tagging and keyword extraction.

A query turns into a set of expansion units: every content word on its
own, plus every contiguous multiword phrase inside an unbroken run of
content words. Content words are nouns, adjectives, verbs and numbers;
function words break runs and never become units.
"""
import re
from dataclasses import dataclass, field
from importlib import resources

_WORD_RE = re.compile(r"[^\W_]+", re.UNICODE)
_DIGIT_RE = re.compile(r"\d")

# tag prefixes counted as content-bearing
_CONTENT_PREFIXES = ("NN", "JJ", "VB")

_SUFFIX_TAGS = [
    ("ly", "RB"),
    ("ing", "VBG"),
    ("ed", "VBN"),
    ("ous", "JJ"),
    ("ful", "JJ"),
    ("ble", "JJ"),
    ("ive", "JJ"),
    ("ish", "JJ"),
    ("ic", "JJ"),
    ("al", "JJ"),
]


@dataclass
class TaggedToken:
    word: str
    tag: str


def is_content_tag(tag: str) -> bool:
    return tag.startswith(_CONTENT_PREFIXES) or tag == "CD"


def tokenize_query(text: str) -> list[str]:
    """Surface tokens with case preserved, punctuation dropped."""
    return _WORD_RE.findall(text)


def _load_shipped_lexicon() -> dict[str, str]:
    lexicon = {}
    blob = resources.files("qexpand").joinpath("data/tagger_lexicon.txt").read_text()
    for line in blob.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        word, tag = line.split("\t")
        lexicon[word.casefold()] = tag
    return lexicon


class PosTagger:
    """Lexicon lookup with suffix and shape fallbacks.

    Resolution order: lexicon, digit shape, suffix table, capitalization,
    then plain noun. Good enough for short keyword queries, which is the
    only place it is used.
    """

    def __init__(self, lexicon: dict[str, str] | None = None):
        self.lexicon = _load_shipped_lexicon() if lexicon is None else dict(lexicon)

    def tag_word(self, word: str) -> str:
        tag = self.lexicon.get(word.casefold())
        if tag is not None:
            return tag
        if _DIGIT_RE.search(word):
            return "CD"
        lowered = word.casefold()
        if len(lowered) > 4:
            for suffix, tag in _SUFFIX_TAGS:
                if lowered.endswith(suffix):
                    return tag
        if word[:1].isupper():
            return "NNP"
        return "NN"

    def tag(self, words) -> list[TaggedToken]:
        return [TaggedToken(w, self.tag_word(w)) for w in words]


def parse_pretagged(text: str) -> list[TaggedToken]:
    """Parse word_TAG tokens, e.g. "Swine_NN flu_NN vaccine_NN"."""
    tagged = []
    for token in text.split():
        if "_" not in token:
            raise ValueError(f"pretagged token without a tag: {token!r}")
        word, tag = token.rsplit("_", 1)
        if not word or not tag:
            raise ValueError(f"pretagged token without a tag: {token!r}")
        tagged.append(TaggedToken(word, tag))
    return tagged


@dataclass
class KeywordSet:
    """Expansion units extracted from one query."""

    tagged: list[TaggedToken]
    terms: list[str] = field(default_factory=list)
    phrases: list[str] = field(default_factory=list)

    @property
    def units(self) -> list[str]:
        return self.terms + self.phrases


def extract_keywords(tagged) -> KeywordSet:
    """Individual content words plus all intra-run phrases.

    Phrases are every contiguous subsequence of length two or more inside
    a maximal run of content words, listed by where they end and shorter
    first; duplicates collapse case-insensitively, first surface form
    kept.
    """
    terms: list[str] = []
    seen: set[str] = set()
    for token in tagged:
        if is_content_tag(token.tag):
            key = token.word.casefold()
            if key not in seen:
                seen.add(key)
                terms.append(token.word)

    runs: list[list[str]] = []
    current: list[str] = []
    for token in tagged:
        if is_content_tag(token.tag):
            current.append(token.word)
        elif current:
            runs.append(current)
            current = []
    if current:
        runs.append(current)

    phrases: list[str] = []
    seen_phrases: set[str] = set()
    for run in runs:
        for end in range(2, len(run) + 1):
            for length in range(2, end + 1):
                phrase = " ".join(run[end - length : end])
                key = phrase.casefold()
                if key not in seen_phrases:
                    seen_phrases.add(key)
                    phrases.append(phrase)
    return KeywordSet(tagged=list(tagged), terms=terms, phrases=phrases)


def prepare_query(text: str, tagger: PosTagger | None = None) -> KeywordSet:
    """Tag a raw query string and extract its units."""
    if tagger is None:
        tagger = PosTagger()
    return extract_keywords(tagger.tag(tokenize_query(text)))
