"""Article link graph built from a MediaWiki XML export.

Ingestion walks the dump once with a streaming XML parser, keeps main
namespace pages only, resolves redirects into an alias table, strips the
markup down to plain text and records the out-link adjacency. The in-link
adjacency is the exact transpose. Everything needed for scoring lives
here: per-article term frequencies, corpus document frequencies and
inverse document frequency with natural logarithms.

Stores round-trip through a directory with a versioned manifest; the
bytes written are identical for identical inputs.
"""
import bz2
import hashlib
import json
import math
import os
import re
from collections import OrderedDict
from dataclasses import dataclass
from xml.parsers import expat

from .textnorm import count_occurrences, normalize_title, term_tokens, tokenize_text

FORMAT_VERSION = 1

# bounded caches so large stores do not hold every token list in memory
_TOKEN_CACHE_SIZE = 512
_DF_CACHE_SIZE = 4096

_COMMENT_RE = re.compile(r"<!--.*?-->", re.DOTALL)
_TEMPLATE_RE = re.compile(r"\{\{[^{}]*\}\}", re.DOTALL)
_EXT_LINK_RE = re.compile(r"\[(?:https?|ftp)://[^\s\]]*(?:\s+([^\]]*))?\]")
_TAG_RE = re.compile(r"<[^<>]*>")
_LINK_RE = re.compile(r"\[\[([^\[\]]*)\]\]")
_REDIRECT_TEXT_RE = re.compile(r"\A\s*#redirect\b", re.IGNORECASE)


class DumpFormatError(ValueError):
    """Raised when the export stream cannot be parsed."""


class StoreFormatError(ValueError):
    """Raised when a saved store directory is missing, corrupt or incompatible."""


def strip_markup(text: str) -> str:
    """Reduce wikitext to plain body text for counting.

    Removes comments, templates (innermost first, so nesting unwinds),
    tags and quote markup; internal links keep their visible label and
    external links keep their caption.
    """
    text = _COMMENT_RE.sub(" ", text)
    for _ in range(25):
        text, n = _TEMPLATE_RE.subn(" ", text)
        if n == 0:
            break
    text = _TAG_RE.sub(" ", text)

    def link_label(match: re.Match) -> str:
        inner = match.group(1)
        label = inner.rsplit("|", 1)[-1]
        if not label:
            label = inner.split("#", 1)[0]
        return label

    text = _LINK_RE.sub(link_label, text)
    text = _EXT_LINK_RE.sub(lambda m: m.group(1) or " ", text)
    text = text.replace("'''", "").replace("''", "")
    return text


def extract_link_targets(text: str) -> list[str]:
    """Raw link targets in order of appearance, fragment and label stripped."""
    targets = []
    for match in _LINK_RE.finditer(text):
        target = match.group(1).split("|", 1)[0]
        target = target.split("#", 1)[0].strip()
        targets.append(target)
    return targets


@dataclass
class Article:
    article_id: int
    title: str
    text: str


class _RawPage:
    __slots__ = ("title", "ns", "redirect_target", "text")

    def __init__(self):
        self.title = ""
        self.ns = 0
        self.redirect_target = None
        self.text = ""


class _DumpReader:
    """Streaming expat wrapper collecting main-namespace pages."""

    def __init__(self):
        self.pages: list[_RawPage] = []
        self.skipped_namespace = 0
        self._page = None
        self._path: list[str] = []
        self._chars: list[str] = []
        self.parser = expat.ParserCreate()
        self.parser.buffer_text = True
        self.parser.StartElementHandler = self._start
        self.parser.EndElementHandler = self._end
        self.parser.CharacterDataHandler = self._data

    def _start(self, name, attrs):
        self._path.append(name)
        if name == "page":
            self._page = _RawPage()
        elif name == "redirect" and self._page is not None:
            self._page.redirect_target = attrs.get("title", "")
        self._chars = []

    def _data(self, data):
        self._chars.append(data)

    def _end(self, name):
        self._path.pop()
        page = self._page
        if page is not None:
            if name == "title" and self._path and self._path[-1] == "page":
                page.title = "".join(self._chars)
            elif name == "ns" and self._path and self._path[-1] == "page":
                raw = "".join(self._chars).strip()
                page.ns = int(raw) if raw.lstrip("-").isdigit() else -1
            elif name == "text":
                page.text = "".join(self._chars)
            elif name == "page":
                if page.ns == 0 and page.title:
                    self.pages.append(page)
                else:
                    self.skipped_namespace += 1
                self._page = None
        self._chars = []

    def feed(self, chunk: bytes, final: bool):
        try:
            self.parser.Parse(chunk, final)
        except expat.ExpatError as exc:
            offset = self.parser.ErrorByteIndex
            raise DumpFormatError(
                f"malformed XML at byte {offset}: {expat.errors.messages[exc.code]}"
            ) from None


def _open_dump(source):
    """Yield (stream, should_close) for a path or an already open binary stream."""
    if hasattr(source, "read"):
        return source, False
    path = os.fspath(source)
    if path.endswith(".bz2"):
        return bz2.open(path, "rb"), True
    return open(path, "rb"), True


def ingest_dump(source) -> "GraphStore":
    """Build a GraphStore from an export file path, .bz2 path or binary stream."""
    reader = _DumpReader()
    stream, should_close = _open_dump(source)
    try:
        while True:
            chunk = stream.read(1 << 16)
            if not chunk:
                reader.feed(b"", True)
                break
            reader.feed(chunk, False)
    finally:
        if should_close:
            stream.close()

    store = GraphStore()
    stats = store.stats
    stats["pages_seen"] = len(reader.pages) + reader.skipped_namespace
    stats["skipped_namespace"] = reader.skipped_namespace

    redirects: list[tuple[str, str]] = []
    for page in reader.pages:
        target = page.redirect_target
        if target is None and _REDIRECT_TEXT_RE.match(page.text):
            target = ""
        if target is not None:
            if not target:
                links = extract_link_targets(page.text)
                target = links[0] if links else ""
            redirects.append((page.title, target))
            continue
        key = normalize_title(page.title)
        if key in store.articles:
            stats["duplicate_titles"] = stats.get("duplicate_titles", 0) + 1
            continue
        store.articles[key] = Article(
            article_id=len(store.articles),
            title=page.title,
            text=strip_markup(page.text),
        )
        store._raw_links[key] = extract_link_targets(page.text)
    stats["articles"] = len(store.articles)
    stats["redirects"] = len(redirects)

    # alias table: follow chains to a real article, drop the rest
    raw_alias = {}
    for source_title, target_title in redirects:
        key = normalize_title(source_title)
        if not target_title:
            stats["dangling_aliases"] = stats.get("dangling_aliases", 0) + 1
            continue
        if key in store.articles or key in raw_alias:
            stats["alias_conflicts"] = stats.get("alias_conflicts", 0) + 1
            continue
        raw_alias[key] = normalize_title(target_title)
    for key, target in raw_alias.items():
        seen = {key}
        while target in raw_alias and target not in store.articles:
            if target in seen:
                target = None
                break
            seen.add(target)
            target = raw_alias[target]
        if target in store.articles:
            store.aliases[key] = target
        else:
            stats["dangling_aliases"] = stats.get("dangling_aliases", 0) + 1

    store._build_adjacency()
    store._build_df()
    store._raw_links = {}
    return store


class GraphStore:
    """Articles, redirect aliases, link adjacency and corpus statistics."""

    def __init__(self):
        self.articles: dict[str, Article] = {}
        self.aliases: dict[str, str] = {}
        self.out_adj: dict[str, tuple[str, ...]] = {}
        self.in_adj: dict[str, tuple[str, ...]] = {}
        self.df_table: dict[str, int] = {}
        self.stats: dict[str, int] = {}
        self._raw_links: dict[str, list[str]] = {}
        self._token_cache: OrderedDict[str, tuple[str, ...]] = OrderedDict()
        self._df_cache: OrderedDict[str, int] = OrderedDict()

    # ------------------------------------------------------------------
    # construction helpers

    def _build_adjacency(self):
        stats = self.stats
        for key in self.articles:
            targets = []
            seen = set()
            for raw in self._raw_links.get(key, []):
                if not raw:
                    stats["self_links"] = stats.get("self_links", 0) + 1
                    continue
                resolved = self.resolve(raw)
                if resolved is None:
                    stats["dangling_links"] = stats.get("dangling_links", 0) + 1
                elif resolved == key:
                    stats["self_links"] = stats.get("self_links", 0) + 1
                elif resolved not in seen:
                    seen.add(resolved)
                    targets.append(resolved)
            self.out_adj[key] = tuple(sorted(targets))
        incoming: dict[str, list[str]] = {key: [] for key in self.articles}
        for key, targets in self.out_adj.items():
            for target in targets:
                incoming[target].append(key)
        self.in_adj = {key: tuple(sorted(vals)) for key, vals in incoming.items()}

    def _build_df(self):
        df: dict[str, int] = {}
        for key in self.articles:
            for token in set(tokenize_text(self.articles[key].text)):
                df[token] = df.get(token, 0) + 1
        self.df_table = df

    # ------------------------------------------------------------------
    # lookups

    @property
    def size(self) -> int:
        """Number of real articles (aliases excluded)."""
        return len(self.articles)

    def resolve(self, title: str):
        """Canonical article key for a title or redirect alias, else None."""
        key = normalize_title(title)
        if key in self.articles:
            return key
        return self.aliases.get(key)

    def article(self, title: str) -> Article:
        key = self.resolve(title)
        if key is None:
            raise KeyError(f"unknown article: {title!r}")
        return self.articles[key]

    def titles(self) -> list[str]:
        return sorted(self.articles)

    def out_links(self, title: str) -> tuple[str, ...]:
        key = self.resolve(title)
        if key is None:
            raise KeyError(f"unknown article: {title!r}")
        return self.out_adj[key]

    def in_links(self, title: str) -> tuple[str, ...]:
        key = self.resolve(title)
        if key is None:
            raise KeyError(f"unknown article: {title!r}")
        return self.in_adj[key]

    # ------------------------------------------------------------------
    # statistics

    def tokens(self, title: str) -> tuple[str, ...]:
        key = self.resolve(title)
        if key is None:
            raise KeyError(f"unknown article: {title!r}")
        cached = self._token_cache.get(key)
        if cached is not None:
            self._token_cache.move_to_end(key)
            return cached
        toks = tuple(tokenize_text(self.articles[key].text))
        self._token_cache[key] = toks
        if len(self._token_cache) > _TOKEN_CACHE_SIZE:
            self._token_cache.popitem(last=False)
        return toks

    def term_frequency(self, term: str, title: str) -> int:
        """Occurrences of a (possibly multiword) term in one article body."""
        return count_occurrences(self.tokens(title), {normalize_title(term)})

    def total_frequency(self, terms, title: str) -> int:
        """Summed occurrences of a set of terms in one article body."""
        normalized = {normalize_title(t) for t in terms}
        return count_occurrences(self.tokens(title), normalized)

    def document_frequency(self, term: str) -> int:
        """Number of articles containing the term at least once."""
        normalized = normalize_title(term)
        seq = term_tokens(normalized)
        if not seq:
            return 0
        if len(seq) == 1:
            return self.df_table.get(seq[0], 0)
        cached = self._df_cache.get(normalized)
        if cached is not None:
            self._df_cache.move_to_end(normalized)
            return cached
        df = 0
        for key in self.articles:
            if count_occurrences(self.tokens(key), {normalized}) > 0:
                df += 1
        self._df_cache[normalized] = df
        if len(self._df_cache) > _DF_CACHE_SIZE:
            self._df_cache.popitem(last=False)
        return df

    def idf(self, term: str) -> float:
        """ln(N / df); terms absent from the corpus fall back to ln(N)."""
        n = self.size
        if n == 0:
            raise ValueError("empty store has no idf")
        df = self.document_frequency(term)
        if df == 0:
            self.stats["idf_zero_df"] = self.stats.get("idf_zero_df", 0) + 1
            return math.log(n)
        return math.log(n / df)

    # ------------------------------------------------------------------
    # persistence

    def save(self, directory):
        path = os.fspath(directory)
        os.makedirs(path, exist_ok=True)
        articles_blob = self._articles_blob()
        aliases_blob = self._aliases_blob()
        df_blob = self._df_blob()
        digest = hashlib.sha256()
        for blob in (articles_blob, aliases_blob, df_blob):
            digest.update(blob)
        manifest = {
            "kind": "wiki-graph-store",
            "format_version": FORMAT_VERSION,
            "articles": self.size,
            "aliases": len(self.aliases),
            "checksum": digest.hexdigest(),
            "stats": {k: self.stats[k] for k in sorted(self.stats)},
        }
        with open(os.path.join(path, "articles.jsonl"), "wb") as fh:
            fh.write(articles_blob)
        with open(os.path.join(path, "aliases.tsv"), "wb") as fh:
            fh.write(aliases_blob)
        with open(os.path.join(path, "df.tsv"), "wb") as fh:
            fh.write(df_blob)
        with open(os.path.join(path, "manifest.json"), "w", encoding="utf-8") as fh:
            json.dump(manifest, fh, ensure_ascii=False, indent=2, sort_keys=True)
            fh.write("\n")

    def _articles_blob(self) -> bytes:
        lines = []
        for key in sorted(self.articles):
            art = self.articles[key]
            record = {
                "id": art.article_id,
                "title": art.title,
                "text": art.text,
                "links": list(self.out_adj.get(key, ())),
            }
            lines.append(json.dumps(record, ensure_ascii=False, sort_keys=True))
        return ("\n".join(lines) + "\n" if lines else "").encode("utf-8")

    def _aliases_blob(self) -> bytes:
        lines = [f"{alias}\t{target}" for alias, target in sorted(self.aliases.items())]
        return ("\n".join(lines) + "\n" if lines else "").encode("utf-8")

    def _df_blob(self) -> bytes:
        lines = [f"{token}\t{self.df_table[token]}" for token in sorted(self.df_table)]
        return ("\n".join(lines) + "\n" if lines else "").encode("utf-8")

    @classmethod
    def load(cls, directory) -> "GraphStore":
        path = os.fspath(directory)
        manifest_path = os.path.join(path, "manifest.json")
        if not os.path.exists(manifest_path):
            raise StoreFormatError(f"no store manifest at {manifest_path}")
        with open(manifest_path, encoding="utf-8") as fh:
            manifest = json.load(fh)
        if manifest.get("kind") != "wiki-graph-store":
            raise StoreFormatError(f"not a graph store: {manifest_path}")
        version = manifest.get("format_version")
        if version != FORMAT_VERSION:
            raise StoreFormatError(
                f"unsupported store format_version {version}, expected {FORMAT_VERSION}"
            )
        store = cls()
        blobs = []
        for name in ("articles.jsonl", "aliases.tsv", "df.tsv"):
            with open(os.path.join(path, name), "rb") as fh:
                blobs.append(fh.read())
        digest = hashlib.sha256()
        for blob in blobs:
            digest.update(blob)
        if manifest.get("checksum") != digest.hexdigest():
            raise StoreFormatError(f"store checksum mismatch under {path}")
        for line in blobs[0].decode("utf-8").splitlines():
            if not line.strip():
                continue
            record = json.loads(line)
            key = normalize_title(record["title"])
            store.articles[key] = Article(
                article_id=record["id"], title=record["title"], text=record["text"]
            )
            store.out_adj[key] = tuple(record["links"])
        for line in blobs[1].decode("utf-8").splitlines():
            if not line.strip():
                continue
            alias, target = line.split("\t")
            store.aliases[alias] = target
        for line in blobs[2].decode("utf-8").splitlines():
            if not line.strip():
                continue
            token, count = line.split("\t")
            store.df_table[token] = int(count)
        incoming: dict[str, list[str]] = {key: [] for key in store.articles}
        for key, targets in store.out_adj.items():
            for target in targets:
                incoming[target].append(key)
        store.in_adj = {key: tuple(sorted(vals)) for key, vals in incoming.items()}
        store.stats = {k: int(v) for k, v in manifest.get("stats", {}).items()}
        return store
