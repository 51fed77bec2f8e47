"""Corpus parsing, index construction and both ranking models.

Expected scores are written out as explicit arithmetic mirroring the
published formulas, never read back from the implementation.
"""
import math

import pytest

from qexpand.indexing import (
    BM25_B,
    BM25_K1,
    CorpusFormatError,
    InvertedIndex,
    build_index,
    load_default_stopwords,
    parse_trec_corpus,
    search,
)

CORPUS = """
<DOC>
<DOCNO> D1 </DOCNO>
<TEXT>
The swine flu vaccine works.
</TEXT>
</DOC>
<DOC>
<DOCNO> D2 </DOCNO>
<TEXT>
A pig caught influenza.
</TEXT>
</DOC>
<DOC>
<DOCNO> D3 </DOCNO>
<HEAD>Vaccines</HEAD>
<TEXT>
Vaccines for influenza and swine.
</TEXT>
</DOC>
"""


@pytest.fixture()
def index():
    idx = InvertedIndex()
    for docno, body in parse_trec_corpus(CORPUS):
        idx.add_document(docno, body)
    return idx


def test_parse_corpus_order_and_bodies():
    docs = parse_trec_corpus(CORPUS)
    assert [d for d, _ in docs] == ["D1", "D2", "D3"]
    assert "swine flu vaccine" in docs[0][1]
    # tags and docno are gone from the body
    assert "<" not in docs[0][1] and "D1" not in docs[0][1]
    # text outside <TEXT> still counts as body
    assert "Vaccines" in docs[2][1]


def test_parse_corpus_errors():
    with pytest.raises(CorpusFormatError, match="no <DOCNO>"):
        parse_trec_corpus("<DOC><TEXT>x</TEXT></DOC>")
    with pytest.raises(CorpusFormatError, match="duplicate"):
        parse_trec_corpus(
            "<DOC><DOCNO>A</DOCNO>x</DOC><DOC><DOCNO>A</DOCNO>y</DOC>"
        )
    with pytest.raises(CorpusFormatError, match="unterminated"):
        parse_trec_corpus("<DOC><DOCNO>A</DOCNO>x</DOC><DOC><DOCNO>B</DOCNO>")
    with pytest.raises(CorpusFormatError, match="empty"):
        parse_trec_corpus("<DOC><DOCNO>  </DOCNO>x</DOC>")


def test_pipeline_stops_then_stems(index):
    # "the" is removed before stemming; "vaccines" and "vaccine" merge.
    # D3 counts the <HEAD> word as body, so its length is 4.
    assert index.process_text("The vaccines") == ["vaccin"]
    assert index.doc_len == {"D1": 4, "D2": 3, "D3": 4}
    assert index.document_frequency("vaccin") == 2
    assert index.document_frequency("the") == 0


def test_duplicate_docno_on_add(index):
    with pytest.raises(CorpusFormatError, match="duplicate"):
        index.add_document("D1", "again")


def _bm25_expected(tf, df, dl, n, avgdl):
    idf = math.log(1.0 + (n - df + 0.5) / (df + 0.5))
    norm = 1.0 - BM25_B + BM25_B * dl / avgdl
    return idf * tf * (BM25_K1 + 1.0) / (tf + BM25_K1 * norm)


def test_bm25_hand_computed(index):
    n, avgdl = 3, 11 / 3
    results = dict(search(index, ["vaccine"], model="bm25"))
    assert results["D1"] == pytest.approx(_bm25_expected(1, 2, 4, n, avgdl), rel=1e-9)
    assert results["D3"] == pytest.approx(_bm25_expected(2, 2, 4, n, avgdl), rel=1e-9)
    assert set(results) == {"D1", "D3"}
    # higher frequency wins at equal length
    ranked = search(index, ["vaccine"], model="bm25")
    assert [d for d, _ in ranked] == ["D3", "D1"]


def test_bm25_weights_accumulate(index):
    single = dict(search(index, [("vaccine", 1.0)]))
    doubled = dict(search(index, [("vaccine", 2.0)]))
    repeated = dict(search(index, [("vaccine", 1.0), ("vaccines", 1.0)]))
    for doc in single:
        assert doubled[doc] == pytest.approx(2 * single[doc], rel=1e-9)
        assert repeated[doc] == pytest.approx(2 * single[doc], rel=1e-9)


def test_tfidf_hand_computed(index):
    results = dict(search(index, ["influenza swine"], model="tfidf"))
    # influenza: df=2; swine: df=2; D3 has both, D1 swine only, D2 influenza only
    idf = math.log(1.0 + 3 / 2)
    assert results["D3"] == pytest.approx(2 * idf, rel=1e-9)
    assert results["D1"] == pytest.approx(idf, rel=1e-9)
    assert results["D2"] == pytest.approx(idf, rel=1e-9)


def test_multiword_entry_fans_out(index):
    combined = dict(search(index, [("swine influenza", 0.5)], model="tfidf"))
    separate = dict(
        search(index, [("swine", 0.5), ("influenza", 0.5)], model="tfidf")
    )
    assert combined == separate


def test_all_stopword_query_returns_nothing(index):
    assert search(index, ["the and of"]) == []
    assert search(index, []) == []


def test_zero_score_documents_omitted(index):
    for model in ("bm25", "tfidf"):
        for docno, score in search(index, ["pig"], model=model):
            assert score > 0


def test_tie_breaks_by_docno():
    idx = InvertedIndex(stopwords=frozenset())
    idx.add_document("B", "apple banana")
    idx.add_document("A", "apple banana")
    ranked = search(idx, ["apple"])
    assert [d for d, _ in ranked] == ["A", "B"]
    assert ranked[0][1] == pytest.approx(ranked[1][1], rel=1e-12)


def test_depth_cut_and_validation(index):
    assert len(search(index, ["influenza swine vaccine"], k=1)) == 1
    with pytest.raises(ValueError):
        search(index, ["x"], k=0)
    with pytest.raises(ValueError):
        search(index, ["x"], model="cosine")


def test_unstemmed_index_distinguishes_forms():
    idx = InvertedIndex(stem=False, stopwords=frozenset())
    idx.add_document("D1", "vaccine")
    idx.add_document("D2", "vaccines")
    assert {d for d, _ in search(idx, ["vaccine"])} == {"D1"}
    stemmed = InvertedIndex(stem=True, stopwords=frozenset())
    stemmed.add_document("D1", "vaccine")
    stemmed.add_document("D2", "vaccines")
    assert {d for d, _ in search(stemmed, ["vaccine"])} == {"D1", "D2"}


def test_default_stopwords_loaded():
    words = load_default_stopwords()
    assert "the" in words and "of" in words
    assert "swine" not in words


def test_build_save_load_round_trip(tmp_path):
    corpus = tmp_path / "corpus.sgml"
    corpus.write_text(CORPUS)
    idx = build_index(corpus)
    index_dir = tmp_path / "idx"
    idx.save(index_dir)
    loaded = InvertedIndex.load(index_dir)
    assert loaded.postings == idx.postings
    assert loaded.doc_len == idx.doc_len
    assert loaded.stem == idx.stem
    assert loaded.stopwords == idx.stopwords
    assert search(loaded, ["swine flu"]) == search(idx, ["swine flu"])
    again = tmp_path / "again"
    loaded.save(again)
    for name in ("manifest.json", "postings.tsv", "docs.tsv", "stopwords.txt"):
        assert (again / name).read_bytes() == (index_dir / name).read_bytes()


def test_load_rejects_corruption(tmp_path):
    corpus = tmp_path / "corpus.sgml"
    corpus.write_text(CORPUS)
    idx = build_index(corpus)
    index_dir = tmp_path / "idx"
    idx.save(index_dir)
    blob = (index_dir / "postings.tsv").read_bytes()
    (index_dir / "postings.tsv").write_bytes(blob.replace(b"swine", b"bovin", 1))
    with pytest.raises(CorpusFormatError):
        InvertedIndex.load(index_dir)
