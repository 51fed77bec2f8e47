"""
Two-stage expansion, end to end
===============================

Candidates come from two sources: articles that share links both ways
with a unit's article, and dictionary relations of the unit. Each
candidate first gets a source-specific score, then the whole pool is
re-weighted by how strongly it correlates with the entire query.
"""
import tempfile

from _world import write_world
from qexpand import ExpansionParams, expand, ingest_dump, load_wordnet, prepare_query

with tempfile.TemporaryDirectory() as scratch:
    paths = write_world(scratch)
    graph = ingest_dump(paths["dump"])
    lexicon = load_wordnet(paths["dictionary"])
    print(f"world: {graph.size} articles, {lexicon.size} synsets")
    print()

    keywords = prepare_query("Lantern festival")
    print("units:", keywords.units)
    print()

    result = expand(graph, lexicon, keywords)

    # stage one scores rank candidates inside each source; the
    # correlation column rescores them against the whole query; weight
    # is the correlation normalized to the half-weight ceiling
    print(result.report())

    # 'beacon' arrives through mutual links, 'lamp' through the
    # dictionary, and both correlate with the query because both
    # appear in the articles for 'lantern' and 'festival'
    print("weighted query:")
    for term, weight in result.weighted_query():
        print(f"  {weight:.4f}  {term}")
    print()

    # capping the pool at one intermediate candidate per source still
    # keeps the best of each
    tight = expand(graph, lexicon, keywords, ExpansionParams(n_intermediate=1))
    print("with n_intermediate=1:", [c.term for c in tight.selected])

    # a single-source run: dictionary only
    dict_only = expand(
        graph, lexicon, keywords, ExpansionParams(use_wiki=False)
    )
    print("dictionary only:      ", [c.term for c in dict_only.selected])
