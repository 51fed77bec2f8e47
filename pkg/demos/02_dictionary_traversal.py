"""
Two-level traversal of a lexical dictionary
===========================================

Load a dictionary from its index/data file layout and expand words
through two levels of relations. Synonyms walk lemma to lemma;
hyponyms walk synset to synset before collecting lemmas.
"""
import os
import tempfile

from qexpand import LexicalStore, load_wordnet

# name, part of speech, member lemmas, hyponym names
SYNSETS = [
    ("flu-set", "n", ["influenza", "flu", "grippe"], ["swine-flu-set"]),
    ("swine-flu-set", "n", ["swine_influenza", "swine_flu", "hog_flu"], ["h1n1-set"]),
    ("h1n1-set", "n", ["h1n1"], []),
    ("pig-set", "n", ["swine", "pig"], []),
    ("hog-set", "n", ["pig", "hog", "grunter"], []),
]

_HEADER = "  1 demo dictionary\n"


def write_dictionary(root):
    # data lines carry their own byte offset, so render twice: once to
    # measure, once with the real offsets filled in
    def render(name, pos, lemmas, hyps, offsets):
        parts = [offsets.get(name, "00000000"), "00", pos, f"{len(lemmas):02x}"]
        for lemma in lemmas:
            parts += [lemma, "0"]
        parts.append(f"{len(hyps):03d}")
        for hyp in hyps:
            parts += ["~", offsets.get(hyp, "00000000"), pos, "0000"]
        return " ".join(parts) + " | gloss for " + name + "\n"

    offsets = {}
    cursor = len(_HEADER.encode())
    for name, pos, lemmas, hyps in SYNSETS:
        offsets[name] = f"{cursor:08d}"
        cursor += len(render(name, pos, lemmas, hyps, {}).encode())
    with open(os.path.join(root, "data.noun"), "w") as fh:
        fh.write(_HEADER)
        for name, pos, lemmas, hyps in SYNSETS:
            fh.write(render(name, pos, lemmas, hyps, offsets))
    senses = {}
    for name, _pos, lemmas, _hyps in SYNSETS:
        for lemma in lemmas:
            senses.setdefault(lemma.lower(), []).append(offsets[name])
    with open(os.path.join(root, "index.noun"), "w") as fh:
        fh.write(_HEADER)
        for lemma, offs in sorted(senses.items()):
            fh.write(f"{lemma} n {len(offs)} 0 {len(offs)} 0 {' '.join(offs)}\n")


with tempfile.TemporaryDirectory() as scratch:
    write_dictionary(scratch)
    lexicon = load_wordnet(scratch)
    print(f"synsets loaded: {lexicon.size}")
    print()

    # lookup returns synset ids; lemmas_of expands one synset
    for sid in lexicon.lookup("pig"):
        print(f"lookup('pig') synset {sid}: lemmas {lexicon.lemmas_of(sid)}")
    print()

    # synonym traversal: lemmas of my synsets, then lemmas of theirs.
    # 'pig' pulls in 'swine' at level one and 'hog', 'grunter' through
    # the second hop
    print("two_level_terms('pig', 'synonym') =")
    for term in lexicon.two_level_terms("pig", "synonym"):
        print("   ", term)
    print()

    # hyponym traversal composes the relation before collecting lemmas:
    # influenza -> swine flu synset -> h1n1 synset
    print("two_level_terms('influenza', 'hyponym') =")
    for term in lexicon.two_level_terms("influenza", "hyponym"):
        print("   ", term)
    print()

    # underscores in stored lemmas become spaces, so multiword entries
    # come back ready for term matching
    print("two_level_terms('flu', 'synonym') =")
    for term in lexicon.two_level_terms("flu", "synonym"):
        print("   ", term)

    # stores round-trip like the link graph does
    target = os.path.join(scratch, "saved")
    lexicon.save(target)
    print()
    print("reload size:", LexicalStore.load(target).size)
