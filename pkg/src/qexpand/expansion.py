"""Candidate generation and two-stage scoring for query expansion.

Stage one scores candidates per source. Link candidates for a unit are
the articles that both link to and are linked from the unit's article,
scored by how often the unit (with its direct synonyms) occurs in the
candidate's article, weighted by the candidate title's rarity in the
whole dump. Dictionary candidates are the unit's two-level related
terms, scored by how often the candidate occurs in the unit's own
article, again weighted by rarity.

Stage two re-scores the pooled survivors against the query as a whole:
a candidate is good when it co-occurs, article by article, with every
query term. The top m by that correlation become the expansion terms,
weighted relative to the best correlation.
"""
import math
from dataclasses import dataclass, field

from .queryprep import KeywordSet
from .textnorm import normalize_title

VALID_RELATIONS = ("synonym", "hyponym")


@dataclass
class ExpansionParams:
    n_intermediate: int = 100
    m_final: int = 30
    relations: tuple = VALID_RELATIONS
    expansion_weight: float = 0.5
    use_wiki: bool = True
    use_wordnet: bool = True

    def __post_init__(self):
        if self.n_intermediate < 1:
            raise ValueError("n_intermediate must be at least 1")
        if self.m_final < 1:
            raise ValueError("m_final must be at least 1")
        if self.expansion_weight < 0:
            raise ValueError("expansion_weight must not be negative")
        self.relations = tuple(self.relations)
        for relation in self.relations:
            if relation not in VALID_RELATIONS:
                raise ValueError(f"unknown relation: {relation!r}")


@dataclass
class Candidate:
    term: str
    source: str
    stage1: float
    correlation: float = 0.0
    weight: float = 0.0


def level_one_synonyms(lexicon, unit: str) -> set[str]:
    """Direct co-members of the unit's synsets, unit itself excluded."""
    base = normalize_title(unit)
    synonyms: set[str] = set()
    if lexicon is not None:
        for sid in lexicon.lookup(base):
            synonyms.update(lexicon.lemmas_of(sid))
        synonyms.discard(base)
    return synonyms


def wiki_candidates(store, unit: str) -> list[str]:
    """Titles linked both from and to the unit's article."""
    key = store.resolve(unit)
    if key is None:
        return []
    mutual = set(store.out_links(key)) & set(store.in_links(key))
    return sorted(mutual)


def inlink_score(store, lexicon, unit: str, candidate_title: str) -> float:
    """Unit-and-synonym frequency inside the candidate article, idf-weighted."""
    key = store.resolve(candidate_title)
    if key is None:
        return 0.0
    terms = {normalize_title(unit)} | level_one_synonyms(lexicon, unit)
    tf = store.total_frequency(terms, key)
    return tf * store.idf(key)


def wordnet_candidates(lexicon, unit: str, relations=VALID_RELATIONS) -> list[str]:
    """Two-level related terms of the unit under the given relations."""
    if lexicon is None:
        return []
    terms: set[str] = set()
    for relation in relations:
        terms.update(lexicon.two_level_terms(unit, relation))
    return sorted(terms)


def wordnet_score(store, unit: str, candidate: str) -> float:
    """Candidate frequency inside the unit's own article, idf-weighted."""
    key = store.resolve(unit)
    if key is None:
        return 0.0
    tf = store.term_frequency(candidate, key)
    return tf * store.idf(candidate)


def article_term_weight(store, term: str, article: str, query_articles) -> float:
    """Importance of a term inside one query article.

    Scales the local frequency by how concentrated the term is there,
    relative to its total frequency across all of the query's articles.
    Zero when the term does not occur in the article.
    """
    tf = store.term_frequency(term, article)
    if tf == 0:
        return 0.0
    total = sum(store.term_frequency(term, a) for a in query_articles)
    return tf * math.log(total / tf)


def correlation_score(store, candidate: str, query_terms) -> float:
    """Mean per-term co-importance of the candidate across query articles.

    Each resolvable individual query term contributes the product of its
    own weight and the candidate's weight in that term's article; the sum
    is averaged over the resolvable terms. Queries with no resolvable
    term score zero.
    """
    pairs = []
    articles: list[str] = []
    for term in query_terms:
        key = store.resolve(term)
        if key is not None:
            pairs.append((term, key))
            if key not in articles:
                articles.append(key)
    if not pairs:
        return 0.0
    total = 0.0
    for term, article in pairs:
        own = article_term_weight(store, term, article, articles)
        other = article_term_weight(store, candidate, article, articles)
        total += own * other
    return total / len(pairs)


@dataclass
class ExpansionResult:
    query: KeywordSet
    pool: list = field(default_factory=list)
    selected: list = field(default_factory=list)

    def weighted_query(self) -> list[tuple[str, float]]:
        """Original terms at weight 1.0 plus positively weighted expansions."""
        entries = [(term, 1.0) for term in self.query.terms]
        for cand in self.selected:
            if cand.weight > 0:
                entries.append((cand.term, cand.weight))
        return entries

    def report(self) -> str:
        lines = ["term\tsource\tstage1\tcorrelation\tweight"]
        for cand in self.selected:
            lines.append(
                f"{cand.term}\t{cand.source}\t{cand.stage1:.6f}"
                f"\t{cand.correlation:.6f}\t{cand.weight:.6f}"
            )
        return "\n".join(lines) + "\n"


def _top_n(pool: dict, n: int) -> list:
    return sorted(pool.values(), key=lambda c: (-c.stage1, c.term))[:n]


def expand(store, lexicon, query: KeywordSet, params: ExpansionParams | None = None):
    """Run both candidate sources and the whole-query re-scoring.

    A missing lexicon simply disables the dictionary source (and the
    synonym bonus in link scoring). Candidates that duplicate an
    original unit are dropped; a term proposed by both sources keeps
    the higher stage-one score, the link source winning ties.
    """
    if params is None:
        params = ExpansionParams()
    original_keys = {normalize_title(u) for u in query.units}

    wiki_pool: dict[str, Candidate] = {}
    if params.use_wiki:
        for unit in query.units:
            for title in wiki_candidates(store, unit):
                if title in original_keys:
                    continue
                score = inlink_score(store, lexicon, unit, title)
                prev = wiki_pool.get(title)
                if prev is None or score > prev.stage1:
                    wiki_pool[title] = Candidate(title, "wiki", score)

    wordnet_pool: dict[str, Candidate] = {}
    if params.use_wordnet and lexicon is not None:
        covered: set[str] = set()
        for phrase in query.phrases:
            if lexicon.lookup(phrase):
                covered.update(w.casefold() for w in phrase.split())
        lookup_units = list(query.phrases)
        lookup_units += [t for t in query.terms if t.casefold() not in covered]
        for unit in lookup_units:
            for term in wordnet_candidates(lexicon, unit, params.relations):
                key = normalize_title(term)
                if key in original_keys:
                    continue
                score = wordnet_score(store, unit, key)
                prev = wordnet_pool.get(key)
                if prev is None or score > prev.stage1:
                    wordnet_pool[key] = Candidate(key, "wordnet", score)

    merged: dict[str, Candidate] = {}
    cut = params.n_intermediate
    for cand in _top_n(wiki_pool, cut) + _top_n(wordnet_pool, cut):
        prev = merged.get(cand.term)
        if prev is None or cand.stage1 > prev.stage1:
            merged[cand.term] = cand
    pool = sorted(merged.values(), key=lambda c: (-c.stage1, c.term))

    for cand in pool:
        cand.correlation = correlation_score(store, cand.term, query.terms)
    selected = sorted(pool, key=lambda c: (-c.correlation, c.term))[: params.m_final]
    best = max((c.correlation for c in selected), default=0.0)
    for cand in selected:
        cand.weight = (
            params.expansion_weight * cand.correlation / best if best > 0 else 0.0
        )
    return ExpansionResult(query=query, pool=pool, selected=selected)
