"""Shared text normalization: one tokenizer for article bodies, index documents
and query terms, plus title/phrase normalization used by every lookup path.

Keeping a single tokenizer here is load-bearing: term frequencies counted on
the article store must agree with the tokens the retrieval index produces.
"""
import re

# Unicode word characters minus underscore; underscores act as separators
# (titles and multiword lemmas use them interchangeably with spaces).
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


def tokenize_text(text: str) -> list[str]:
    """Case-folded tokens, split on any non-alphanumeric run."""
    return _TOKEN_RE.findall(text.casefold())


def normalize_title(title: str) -> str:
    """Canonical form for titles and multiword units.

    Underscores become spaces, whitespace collapses to single spaces,
    and the result is case-folded. Idempotent.
    """
    return " ".join(title.replace("_", " ").split()).casefold()


def term_tokens(term: str) -> tuple[str, ...]:
    """Token sequence of a (possibly multiword) term; empty for punctuation-only input."""
    return tuple(tokenize_text(term))


def count_occurrences(tokens: list[str] | tuple[str, ...], terms) -> int:
    """Total occurrences of the given terms in a token stream.

    Single-word terms are counted per token; multiword terms count every
    starting position of a contiguous token-sequence match (overlaps
    included). Terms must already be normalized; each term in the set is
    counted independently and the counts summed.
    """
    total = 0
    n = len(tokens)
    for term in terms:
        seq = term_tokens(term)
        if not seq:
            continue
        if len(seq) == 1:
            want = seq[0]
            total += sum(1 for tok in tokens if tok == want)
        else:
            k = len(seq)
            first = seq[0]
            for i in range(n - k + 1):
                if tokens[i] == first and tuple(tokens[i : i + k]) == seq:
                    total += 1
    return total
