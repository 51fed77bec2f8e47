"""Document corpus parsing, inverted index and ranked retrieval.

The corpus format is the classic SGML layout: documents wrapped in
<DOC> elements, identified by a <DOCNO> element, everything else inside
the wrapper treated as body text once tags are removed. Indexing shares
the pipeline tokenizer, then removes stopwords, then stems.

Two ranking models are provided. bm25 uses k1=1.2, b=0.75 with the
non-negative log((N-df+0.5)/(df+0.5)+1) document frequency weight.
tfidf scores tf * ln(1 + N/df) with no length normalization. Query
entries carry weights so expanded queries slot straight in.
"""
import hashlib
import json
import math
import os
import re
from importlib import resources

from .stemming import porter_stem
from .textnorm import tokenize_text

FORMAT_VERSION = 1

BM25_K1 = 1.2
BM25_B = 0.75

_DOC_OPEN_RE = re.compile(r"<DOC>", re.IGNORECASE)
_DOC_RE = re.compile(r"<DOC>(.*?)</DOC>", re.DOTALL | re.IGNORECASE)
_DOCNO_RE = re.compile(r"<DOCNO>(.*?)</DOCNO>", re.DOTALL | re.IGNORECASE)
_TAG_RE = re.compile(r"<[^<>]*>")


class CorpusFormatError(ValueError):
    """Raised for malformed corpus files or conflicting documents."""


def load_default_stopwords() -> frozenset:
    blob = resources.files("qexpand").joinpath("data/stopwords.txt").read_text()
    words = set()
    for line in blob.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.add(line.casefold())
    return frozenset(words)


def parse_trec_corpus(text: str) -> list[tuple[str, str]]:
    """(docno, body) pairs from SGML content, in file order."""
    blocks = _DOC_RE.findall(text)
    opened = len(_DOC_OPEN_RE.findall(text))
    if opened != len(blocks):
        raise CorpusFormatError(
            f"unterminated <DOC>: {opened} opened, {len(blocks)} closed"
        )
    documents = []
    seen = set()
    for ordinal, block in enumerate(blocks, start=1):
        match = _DOCNO_RE.search(block)
        if match is None:
            raise CorpusFormatError(f"document #{ordinal} has no <DOCNO>")
        docno = match.group(1).strip()
        if not docno:
            raise CorpusFormatError(f"document #{ordinal} has an empty <DOCNO>")
        if docno in seen:
            raise CorpusFormatError(f"duplicate <DOCNO>: {docno}")
        seen.add(docno)
        body = _DOCNO_RE.sub(" ", block)
        body = _TAG_RE.sub(" ", body)
        documents.append((docno, body))
    return documents


class InvertedIndex:
    """Term postings with document lengths, plus the query-side pipeline."""

    def __init__(self, stem: bool = True, stopwords=None):
        self.stem = stem
        self.stopwords = (
            load_default_stopwords() if stopwords is None else frozenset(stopwords)
        )
        self.postings: dict[str, dict[str, int]] = {}
        self.doc_len: dict[str, int] = {}

    def process_text(self, text: str) -> list[str]:
        """Tokenize, drop stopwords, then stem. Same path for docs and queries."""
        tokens = [t for t in tokenize_text(text) if t not in self.stopwords]
        if self.stem:
            tokens = [porter_stem(t) for t in tokens]
        return tokens

    def add_document(self, docno: str, text: str):
        docno = docno.strip()
        if docno in self.doc_len:
            raise CorpusFormatError(f"duplicate <DOCNO>: {docno}")
        tokens = self.process_text(text)
        self.doc_len[docno] = len(tokens)
        for token in tokens:
            bucket = self.postings.setdefault(token, {})
            bucket[docno] = bucket.get(docno, 0) + 1

    @property
    def size(self) -> int:
        return len(self.doc_len)

    @property
    def avgdl(self) -> float:
        if not self.doc_len:
            return 0.0
        return sum(self.doc_len.values()) / len(self.doc_len)

    def document_frequency(self, term: str) -> int:
        return len(self.postings.get(term, ()))

    # ------------------------------------------------------------------
    # persistence

    def save(self, directory):
        path = os.fspath(directory)
        os.makedirs(path, exist_ok=True)
        postings_blob = self._postings_blob()
        docs_blob = self._docs_blob()
        stop_blob = ("\n".join(sorted(self.stopwords)) + "\n").encode("utf-8")
        digest = hashlib.sha256()
        for blob in (postings_blob, docs_blob, stop_blob):
            digest.update(blob)
        manifest = {
            "kind": "inverted-index",
            "format_version": FORMAT_VERSION,
            "documents": self.size,
            "terms": len(self.postings),
            "stem": self.stem,
            "checksum": digest.hexdigest(),
        }
        with open(os.path.join(path, "postings.tsv"), "wb") as fh:
            fh.write(postings_blob)
        with open(os.path.join(path, "docs.tsv"), "wb") as fh:
            fh.write(docs_blob)
        with open(os.path.join(path, "stopwords.txt"), "wb") as fh:
            fh.write(stop_blob)
        with open(os.path.join(path, "manifest.json"), "w", encoding="utf-8") as fh:
            json.dump(manifest, fh, ensure_ascii=False, indent=2, sort_keys=True)
            fh.write("\n")

    def _postings_blob(self) -> bytes:
        lines = []
        for term in sorted(self.postings):
            bucket = self.postings[term]
            for docno in sorted(bucket):
                lines.append(f"{term}\t{docno}\t{bucket[docno]}")
        return ("\n".join(lines) + "\n" if lines else "").encode("utf-8")

    def _docs_blob(self) -> bytes:
        lines = [f"{d}\t{self.doc_len[d]}" for d in sorted(self.doc_len)]
        return ("\n".join(lines) + "\n" if lines else "").encode("utf-8")

    @classmethod
    def load(cls, directory) -> "InvertedIndex":
        path = os.fspath(directory)
        manifest_path = os.path.join(path, "manifest.json")
        if not os.path.exists(manifest_path):
            raise CorpusFormatError(f"no index manifest at {manifest_path}")
        with open(manifest_path, encoding="utf-8") as fh:
            manifest = json.load(fh)
        if manifest.get("kind") != "inverted-index":
            raise CorpusFormatError(f"not an index: {manifest_path}")
        version = manifest.get("format_version")
        if version != FORMAT_VERSION:
            raise CorpusFormatError(
                f"unsupported index format_version {version}, expected {FORMAT_VERSION}"
            )
        blobs = {}
        for name in ("postings.tsv", "docs.tsv", "stopwords.txt"):
            with open(os.path.join(path, name), "rb") as fh:
                blobs[name] = fh.read()
        digest = hashlib.sha256()
        for name in ("postings.tsv", "docs.tsv", "stopwords.txt"):
            digest.update(blobs[name])
        if manifest.get("checksum") != digest.hexdigest():
            raise CorpusFormatError(f"index checksum mismatch under {path}")
        stopwords = frozenset(
            line for line in blobs["stopwords.txt"].decode("utf-8").splitlines() if line
        )
        index = cls(stem=bool(manifest.get("stem", True)), stopwords=stopwords)
        for line in blobs["docs.tsv"].decode("utf-8").splitlines():
            if not line:
                continue
            docno, length = line.split("\t")
            index.doc_len[docno] = int(length)
        for line in blobs["postings.tsv"].decode("utf-8").splitlines():
            if not line:
                continue
            term, docno, tf = line.split("\t")
            index.postings.setdefault(term, {})[docno] = int(tf)
        return index


def build_index(corpus_path, stem: bool = True, stopwords=None) -> InvertedIndex:
    """Parse a corpus file and index every document."""
    with open(os.fspath(corpus_path), encoding="utf-8") as fh:
        text = fh.read()
    index = InvertedIndex(stem=stem, stopwords=stopwords)
    for docno, body in parse_trec_corpus(text):
        index.add_document(docno, body)
    return index


def search(index: InvertedIndex, query, model: str = "bm25", k: int = 1000):
    """Ranked (docno, score) list for a weighted query.

    Query entries are (term, weight) pairs; bare strings count at weight
    one. Terms run through the index's own text pipeline, so multiword
    entries fan out into unigrams each carrying the entry weight.
    Documents scoring zero are omitted; ties order by docno.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if model not in ("bm25", "tfidf"):
        raise ValueError(f"unknown model: {model!r}")
    entries = []
    for entry in query:
        if isinstance(entry, str):
            entries.append((entry, 1.0))
        else:
            term, weight = entry
            entries.append((term, float(weight)))
    n = index.size
    avgdl = index.avgdl
    scores: dict[str, float] = {}
    for term, weight in entries:
        for unigram in index.process_text(term):
            bucket = index.postings.get(unigram)
            if not bucket:
                continue
            df = len(bucket)
            if model == "bm25":
                idf = math.log(1.0 + (n - df + 0.5) / (df + 0.5))
                for docno, tf in bucket.items():
                    norm = 1.0 - BM25_B + BM25_B * index.doc_len[docno] / avgdl
                    part = tf * (BM25_K1 + 1.0) / (tf + BM25_K1 * norm)
                    scores[docno] = scores.get(docno, 0.0) + weight * idf * part
            else:
                idf = math.log(1.0 + n / df)
                for docno, tf in bucket.items():
                    scores[docno] = scores.get(docno, 0.0) + weight * tf * idf
    ranked = [(d, s) for d, s in scores.items() if s > 0.0]
    ranked.sort(key=lambda pair: (-pair[1], pair[0]))
    return ranked[:k]
