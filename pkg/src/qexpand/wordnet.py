"""Lexical database ingestion and two-level term expansion.

Reads the standard dictionary file layout (index.pos / data.pos pairs)
directly. Synsets are keyed by a pos letter plus their zero-padded file
offset. Only the data files are parsed; the matching index file must be
present for each part of speech so a half-copied dictionary fails fast.

Expansion walks the synonym or hyponym relation two levels out from a
term and returns the union of both levels, never echoing the term back.
"""
import hashlib
import json
import os
import re
from dataclasses import dataclass

from .textnorm import normalize_title

FORMAT_VERSION = 1

_POS_FILES = [("n", "noun"), ("v", "verb"), ("a", "adj"), ("r", "adv")]
_HYPONYM_SYMBOL = "~"
# adjective lemmas may carry a syntactic position marker such as (p)
_MARKER_RE = re.compile(r"\([a-z]+\)$")


class WordNetFormatError(ValueError):
    """Raised for missing or malformed dictionary files."""


@dataclass
class Synset:
    synset_id: str
    pos: str
    lemmas: tuple
    hyponyms: tuple


def _clean_lemma(word: str) -> str:
    return normalize_title(_MARKER_RE.sub("", word))


def _target_pos(letter: str) -> str:
    # satellite adjectives live in the adjective file
    return "a" if letter == "s" else letter


def _parse_data_line(line: str, pos: str, path: str, lineno: int) -> Synset:
    fields = line.split("|", 1)[0].split()
    try:
        offset = fields[0]
        ss_type = fields[2]
        word_count = int(fields[3], 16)
        if len(offset) != 8 or not offset.isdigit():
            raise ValueError
        if _target_pos(ss_type) != pos:
            raise ValueError
        lemmas = []
        for i in range(word_count):
            lemmas.append(_clean_lemma(fields[4 + 2 * i]))
        cursor = 4 + 2 * word_count
        pointer_count = int(fields[cursor])
        hyponyms = []
        for i in range(pointer_count):
            base = cursor + 1 + 4 * i
            symbol = fields[base]
            target_offset = fields[base + 1]
            target_pos = fields[base + 2]
            if symbol == _HYPONYM_SYMBOL:
                hyponyms.append(_target_pos(target_pos) + target_offset)
    except (IndexError, ValueError):
        raise WordNetFormatError(f"{path}:{lineno}: malformed synset line") from None
    return Synset(
        synset_id=pos + offset,
        pos=pos,
        lemmas=tuple(dict.fromkeys(lemmas)),
        hyponyms=tuple(hyponyms),
    )


def load_wordnet(directory) -> "LexicalStore":
    """Build a LexicalStore from a dictionary directory."""
    root = os.fspath(directory)
    store = LexicalStore()
    found_any = False
    for pos, suffix in _POS_FILES:
        data_path = os.path.join(root, f"data.{suffix}")
        index_path = os.path.join(root, f"index.{suffix}")
        have_data = os.path.exists(data_path)
        have_index = os.path.exists(index_path)
        if not have_data and not have_index:
            continue
        if not have_data:
            raise WordNetFormatError(f"missing file: {data_path}")
        if not have_index:
            raise WordNetFormatError(f"missing file: {index_path}")
        found_any = True
        with open(data_path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                if not line.strip() or line.startswith(" "):
                    continue
                synset = _parse_data_line(line, pos, data_path, lineno)
                store.synsets[synset.synset_id] = synset
    if not found_any:
        raise WordNetFormatError(f"no dictionary files under {root}")
    store._finalize()
    return store


class LexicalStore:
    """Synsets plus a lemma index, with two-level relation expansion."""

    def __init__(self):
        self.synsets: dict[str, Synset] = {}
        self.lemma_index: dict[str, tuple[str, ...]] = {}
        self.stats: dict[str, int] = {}

    def _finalize(self):
        """Drop dangling pointers and build the lemma index."""
        dangling = 0
        for sid, synset in self.synsets.items():
            kept = tuple(sorted(h for h in synset.hyponyms if h in self.synsets))
            dangling += len(synset.hyponyms) - len(kept)
            self.synsets[sid] = Synset(sid, synset.pos, synset.lemmas, kept)
        if dangling:
            self.stats["dangling_pointers"] = dangling
        index: dict[str, set[str]] = {}
        for sid in self.synsets:
            for lemma in self.synsets[sid].lemmas:
                index.setdefault(lemma, set()).add(sid)
        self.lemma_index = {k: tuple(sorted(v)) for k, v in index.items()}

    @property
    def size(self) -> int:
        return len(self.synsets)

    def lookup(self, term: str) -> tuple[str, ...]:
        """Synset ids whose lemma set contains the term; empty when unknown."""
        return self.lemma_index.get(normalize_title(term), ())

    def lemmas_of(self, synset_id: str) -> tuple[str, ...]:
        return self.synsets[synset_id].lemmas

    def hyponyms_of(self, synset_id: str) -> tuple[str, ...]:
        return self.synsets[synset_id].hyponyms

    def two_level_terms(self, term: str, relation: str) -> list[str]:
        """Terms reachable within two steps of the relation, term excluded.

        synonym: co-members of the term's synsets, then co-members of
        every synset those words belong to.
        hyponym: words of the narrower synsets one and two levels below.
        """
        base = normalize_title(term)
        if relation == "synonym":
            level1: set[str] = set()
            for sid in self.lookup(base):
                level1.update(self.lemmas_of(sid))
            level1.discard(base)
            level2: set[str] = set()
            for lemma in sorted(level1):
                for sid in self.lookup(lemma):
                    level2.update(self.lemmas_of(sid))
        elif relation == "hyponym":
            first_hop: list[str] = []
            seen: set[str] = set()
            for sid in self.lookup(base):
                for hyp in self.hyponyms_of(sid):
                    if hyp not in seen:
                        seen.add(hyp)
                        first_hop.append(hyp)
            level1 = set()
            for sid in first_hop:
                level1.update(self.lemmas_of(sid))
            level2 = set()
            for sid in first_hop:
                for hyp in self.hyponyms_of(sid):
                    level2.update(self.lemmas_of(hyp))
        else:
            raise ValueError(f"unknown relation: {relation!r}")
        terms = (level1 | level2) - {base}
        return sorted(terms)

    # ------------------------------------------------------------------
    # persistence

    def save(self, directory):
        path = os.fspath(directory)
        os.makedirs(path, exist_ok=True)
        blob = self._synsets_blob()
        manifest = {
            "kind": "wordnet-store",
            "format_version": FORMAT_VERSION,
            "synsets": self.size,
            "checksum": hashlib.sha256(blob).hexdigest(),
            "stats": {k: self.stats[k] for k in sorted(self.stats)},
        }
        with open(os.path.join(path, "synsets.jsonl"), "wb") as fh:
            fh.write(blob)
        with open(os.path.join(path, "manifest.json"), "w", encoding="utf-8") as fh:
            json.dump(manifest, fh, ensure_ascii=False, indent=2, sort_keys=True)
            fh.write("\n")

    def _synsets_blob(self) -> bytes:
        lines = []
        for sid in sorted(self.synsets):
            synset = self.synsets[sid]
            record = {
                "id": sid,
                "pos": synset.pos,
                "lemmas": list(synset.lemmas),
                "hyponyms": list(synset.hyponyms),
            }
            lines.append(json.dumps(record, ensure_ascii=False, sort_keys=True))
        return ("\n".join(lines) + "\n" if lines else "").encode("utf-8")

    @classmethod
    def load(cls, directory) -> "LexicalStore":
        path = os.fspath(directory)
        manifest_path = os.path.join(path, "manifest.json")
        if not os.path.exists(manifest_path):
            raise WordNetFormatError(f"no store manifest at {manifest_path}")
        with open(manifest_path, encoding="utf-8") as fh:
            manifest = json.load(fh)
        if manifest.get("kind") != "wordnet-store":
            raise WordNetFormatError(f"not a wordnet store: {manifest_path}")
        version = manifest.get("format_version")
        if version != FORMAT_VERSION:
            raise WordNetFormatError(
                f"unsupported store format_version {version}, expected {FORMAT_VERSION}"
            )
        with open(os.path.join(path, "synsets.jsonl"), "rb") as fh:
            blob = fh.read()
        if manifest.get("checksum") != hashlib.sha256(blob).hexdigest():
            raise WordNetFormatError(f"store checksum mismatch under {path}")
        store = cls()
        for line in blob.decode("utf-8").splitlines():
            if not line.strip():
                continue
            record = json.loads(line)
            store.synsets[record["id"]] = Synset(
                synset_id=record["id"],
                pos=record["pos"],
                lemmas=tuple(record["lemmas"]),
                hyponyms=tuple(record["hyponyms"]),
            )
        store.stats = {k: int(v) for k, v in manifest.get("stats", {}).items()}
        index: dict[str, set[str]] = {}
        for sid in store.synsets:
            for lemma in store.synsets[sid].lemmas:
                index.setdefault(lemma, set()).add(sid)
        store.lemma_index = {k: tuple(sorted(v)) for k, v in index.items()}
        return store
