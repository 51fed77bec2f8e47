import pathlib

import pytest

from qexpand.wikigraph import ingest_dump

DATA = pathlib.Path(__file__).parent / "data"

# fixture dictionary: (name, pos, lemmas, hyponym names)
WN_SYNSETS = [
    ("s1", "n", ["vaccine", "vaccinum", "immunogen"], []),
    ("s2", "n", ["influenza", "flu", "grippe"], ["s3"]),
    ("s3", "n", ["swine_influenza", "swine_flu", "hog_flu"], ["s4"]),
    ("s4", "n", ["h1n1"], []),
    ("s5", "n", ["swine", "pig"], []),
    ("s6", "n", ["pig", "hog", "grunter"], []),
    ("s7", "n", ["bird", "fowl"], []),
    ("s8", "n", ["egg"], []),
    ("s9", "n", ["wing"], []),
    ("s10", "v", ["vaccinate", "immunize", "inoculate"], []),
]

_POS_SUFFIX = {"n": "noun", "v": "verb", "a": "adj", "r": "adv"}
_HEADER = "  1 fixture dictionary generated for the test suite\n"


def build_wordnet_dir(root: pathlib.Path, synsets=WN_SYNSETS):
    """Write index/data file pairs whose offsets are true byte offsets."""
    by_pos: dict[str, list] = {}
    for name, pos, lemmas, hyps in synsets:
        by_pos.setdefault(pos, []).append((name, lemmas, hyps))

    def render(pos, entries, name, lemmas, hyps, offsets):
        blank = "00000000"
        parts = [offsets.get(name, blank), "00", pos, f"{len(lemmas):02x}"]
        for lemma in lemmas:
            parts += [lemma, "0"]
        hypernyms = [n for n, _, hs in entries if name in hs]
        parts.append(f"{len(hyps) + len(hypernyms):03d}")
        for hyp in hyps:
            parts += ["~", offsets.get(hyp, blank), pos, "0000"]
        for hyper in hypernyms:
            parts += ["@", offsets.get(hyper, blank), pos, "0000"]
        if pos == "v":
            parts += ["01", "+", "02", "00"]
        return " ".join(parts) + " | gloss text for " + name + "\n"

    offsets: dict[str, str] = {}
    for pos, entries in by_pos.items():
        cursor = len(_HEADER.encode())
        for name, lemmas, hyps in entries:
            offsets[name] = f"{cursor:08d}"
            cursor += len(render(pos, entries, name, lemmas, hyps, {}).encode())

    for pos, entries in by_pos.items():
        data_lines = [render(pos, entries, n, ls, hs, offsets) for n, ls, hs in entries]
        (root / f"data.{_POS_SUFFIX[pos]}").write_text(_HEADER + "".join(data_lines))
        senses: dict[str, list[str]] = {}
        for name, lemmas, _ in entries:
            for lemma in lemmas:
                senses.setdefault(lemma.lower(), []).append(offsets[name])
        index_lines = [
            f"{lemma} {pos} {len(offs)} 0 {len(offs)} 0 {' '.join(offs)}\n"
            for lemma, offs in sorted(senses.items())
        ]
        (root / f"index.{_POS_SUFFIX[pos]}").write_text(_HEADER + "".join(index_lines))
    return offsets


@pytest.fixture(scope="session")
def mini_store():
    """Graph store built once from the 12-article fixture dump."""
    return ingest_dump(DATA / "mini_dump.xml")


@pytest.fixture(scope="session")
def wordnet_dir(tmp_path_factory):
    root = tmp_path_factory.mktemp("wn")
    build_wordnet_dir(root)
    return root


@pytest.fixture(scope="session")
def lexicon(wordnet_dir):
    from qexpand.wordnet import load_wordnet

    return load_wordnet(wordnet_dir)
