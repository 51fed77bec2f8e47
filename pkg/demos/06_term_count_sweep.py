"""
How many expansion terms to keep
================================

Rerun retrieval while varying the number of expansion terms kept per
query. Selections nest as the budget grows, so each row reuses the
previous row's terms plus the next best ones.
"""
import tempfile

from _world import write_world
from qexpand import ExpansionParams, expand, ingest_dump, load_wordnet, prepare_query
from qexpand.evaluation import evaluate
from qexpand.indexing import build_index, search
from qexpand.trecio import load_qrels, load_topics

with tempfile.TemporaryDirectory() as scratch:
    paths = write_world(scratch)
    graph = ingest_dump(paths["dump"])
    lexicon = load_wordnet(paths["dictionary"])
    index = build_index(paths["corpus"])
    topics = load_topics(paths["topics"])
    qrels = load_qrels(paths["qrels"])

    prepared = [(t.number, prepare_query(t.title)) for t in topics]

    print("m\tmap\tgm_map\tp@10\tselected for topic 1")
    for m in (1, 2, 5, 10, 30, 60):
        params = ExpansionParams(m_final=m)
        run = {}
        shown = []
        for number, keywords in prepared:
            result = expand(graph, lexicon, keywords, params)
            run[number] = search(index, result.weighted_query())
            if number == 1:
                shown = [c.term for c in result.selected if c.weight > 0]
        report = evaluate(run, qrels)
        print(
            f"{m}\t{report.map_score:.4f}\t{report.gm_map:.4f}"
            f"\t{report.mean_precision_at[10]:.4f}\t{', '.join(shown)}"
        )

    # on this miniature world the pool is tiny, so the table flattens
    # after the first rows; on a real collection the middle of the
    # range is where the interesting movement happens
