"""
From query text to expansion units
==================================

A query contributes two kinds of units: its individual content terms
and every contiguous phrase of content words. Both feed the expansion
pipeline, which treats them differently when picking data sources.
"""
from qexpand import PosTagger, extract_keywords, prepare_query
from qexpand.queryprep import parse_pretagged

# ----------------------------------------------------------------------
# the built-in tagger: lexicon lookups, then suffix heuristics

tagger = PosTagger()
for word in ("Swine", "flu", "vaccine", "the", "quickly", "1918"):
    print(f"tag({word!r}) = {tagger.tag_word(word)}")
print()

# ----------------------------------------------------------------------
# a full query: terms, then phrases from runs of content words

keywords = prepare_query("Swine flu vaccine")
print("tagged:", [(t.word, t.tag) for t in keywords.tagged])
print("terms: ", keywords.terms)
print("phrases:", keywords.phrases)
print("units: ", keywords.units)
print()

# function words break a run, so no phrase spans 'for'
keywords = prepare_query("Treatment for swine flu")
print("query: 'Treatment for swine flu'")
print("terms: ", keywords.terms)
print("phrases:", keywords.phrases)
print()

# ----------------------------------------------------------------------
# pre-tagged input skips the tagger entirely

tagged = parse_pretagged("Economic_JJ impact_NN of_IN swine_NN flu_NN")
keywords = extract_keywords(tagged)
print("pretagged query: 'Economic impact of swine flu'")
print("terms: ", keywords.terms)
print("phrases:", keywords.phrases)
print("units: ", keywords.units)
