"""
Retrieval with and without expansion
====================================

Index a small corpus, run each topic as a plain weighted query and as
an expanded one, and score both runs against relevance judgments. The
relevant documents use only neighbor vocabulary, so the plain query
cannot reach them.
"""
import tempfile

from _world import write_world
from qexpand import expand, ingest_dump, load_wordnet, prepare_query
from qexpand.evaluation import evaluate
from qexpand.indexing import build_index, search
from qexpand.trecio import format_run, load_qrels, load_topics

with tempfile.TemporaryDirectory() as scratch:
    paths = write_world(scratch)
    graph = ingest_dump(paths["dump"])
    lexicon = load_wordnet(paths["dictionary"])
    index = build_index(paths["corpus"])
    topics = load_topics(paths["topics"])
    qrels = load_qrels(paths["qrels"])
    print(f"indexed {index.size} documents, average length {index.avgdl:.2f}")
    print()

    plain_run, expanded_run = {}, {}
    for topic in topics:
        keywords = prepare_query(topic.title)
        # the plain query: original terms at weight one
        plain_run[topic.number] = search(index, [(t, 1.0) for t in keywords.terms])
        # the expanded query appends the positively correlated terms
        result = expand(graph, lexicon, keywords)
        expanded_run[topic.number] = search(index, result.weighted_query())

    print("run file lines for the expanded run:")
    print(format_run(expanded_run, tag="demo"))

    # score both runs over the same judgments
    for label, run in (("plain", plain_run), ("expanded", expanded_run)):
        report = evaluate(run, qrels)
        print(f"{label}:")
        print(f"  map    {report.map_score:.4f}")
        print(f"  gm_map {report.gm_map:.4f}")
        print(f"  p@10   {report.mean_precision_at[10]:.4f}")
        print(f"  recall {report.mean_recall:.4f}")

    # the full per-topic table, as the command line tool prints it
    print()
    print(evaluate(expanded_run, qrels).render())
