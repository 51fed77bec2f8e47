"""Query expansion from an encyclopedia link graph and a lexical database."""

__version__ = "0.1.0"

from .expansion import ExpansionParams, ExpansionResult, expand
from .queryprep import KeywordSet, PosTagger, extract_keywords, prepare_query
from .wikigraph import GraphStore, ingest_dump
from .wordnet import LexicalStore, load_wordnet

__all__ = [
    "ExpansionParams",
    "ExpansionResult",
    "expand",
    "KeywordSet",
    "PosTagger",
    "extract_keywords",
    "prepare_query",
    "GraphStore",
    "ingest_dump",
    "LexicalStore",
    "load_wordnet",
    "__version__",
]
