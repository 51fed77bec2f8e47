"""Shared miniature world for the walkthrough scripts.

Writes a small article export, a dictionary directory, a retrieval
corpus, topics, and judgments into a directory. The vocabulary is
arranged so that expansion visibly changes retrieval: relevant
documents use neighbor vocabulary (beacon, lamp, scythe) that the
query titles never mention.
"""
import os

DUMP_XML = """<mediawiki version="0.10" xml:lang="en">
  <siteinfo><sitename>DemoPedia</sitename></siteinfo>
  <page>
    <title>Lantern</title>
    <ns>0</ns>
    <id>1</id>
    <revision><id>1</id><text>A lantern glows at the festival. The lantern, a lamp in older books, hangs near the [[Beacon]].</text></revision>
  </page>
  <page>
    <title>Festival</title>
    <ns>0</ns>
    <id>2</id>
    <revision><id>2</id><text>The festival parade begins. A lantern drifts above the festival square. Every lamp stall sells candles. The [[Beacon]] burns all night.</text></revision>
  </page>
  <page>
    <title>Beacon</title>
    <ns>0</ns>
    <id>3</id>
    <revision><id>3</id><text>The beacon stands tall. Shaped like a lantern, the beacon guides ships. See the [[Lantern]] and the [[Festival]].</text></revision>
  </page>
  <page>
    <title>Harvest</title>
    <ns>0</ns>
    <id>4</id>
    <revision><id>4</id><text>The harvest ends well. A harvest feast waits under the moon. A [[Scythe]] rests on the cart.</text></revision>
  </page>
  <page>
    <title>Moon</title>
    <ns>0</ns>
    <id>5</id>
    <revision><id>5</id><text>The moon rises red. Workers watch the moon from the harvest rows. The [[Scythe]] gleams faintly.</text></revision>
  </page>
  <page>
    <title>Scythe</title>
    <ns>0</ns>
    <id>6</id>
    <revision><id>6</id><text>A scythe cuts the harvest under the moon. Stored beside the [[Harvest]] barn and the [[Moon]] gate.</text></revision>
  </page>
  <page>
    <title>Granite</title>
    <ns>0</ns>
    <id>7</id>
    <revision><id>7</id><text>Granite forms slowly underground. Quarries cut blocks near the [[Orchard]] road.</text></revision>
  </page>
  <page>
    <title>Orchard</title>
    <ns>0</ns>
    <id>8</id>
    <revision><id>8</id><text>An orchard grows apples and pears. A wall of [[Granite]] borders the north side.</text></revision>
  </page>
</mediawiki>
"""

CORPUS_SGML = """<DOC>
<DOCNO>B1</DOCNO>
<TEXT>Ships trust the beacon on the headland.</TEXT>
</DOC>
<DOC>
<DOCNO>B2</DOCNO>
<TEXT>The beacon flashes twice a minute in fog.</TEXT>
</DOC>
<DOC>
<DOCNO>L1</DOCNO>
<TEXT>An oil lamp glows on the table.</TEXT>
</DOC>
<DOC>
<DOCNO>L2</DOCNO>
<TEXT>She trims the lamp wick before reading.</TEXT>
</DOC>
<DOC>
<DOCNO>S1</DOCNO>
<TEXT>A scythe hangs sharpened in the barn.</TEXT>
</DOC>
<DOC>
<DOCNO>S2</DOCNO>
<TEXT>The mower swings a scythe across the field.</TEXT>
</DOC>
<DOC>
<DOCNO>S3</DOCNO>
<TEXT>A curved scythe blade cuts tall grass cleanly.</TEXT>
</DOC>
<DOC>
<DOCNO>D1</DOCNO>
<TEXT>A paper lantern drifts down the river at dusk.</TEXT>
</DOC>
<DOC>
<DOCNO>D2</DOCNO>
<TEXT>The spring festival fills the town with music.</TEXT>
</DOC>
<DOC>
<DOCNO>D3</DOCNO>
<TEXT>The moon waxes full over the quiet bay.</TEXT>
</DOC>
<DOC>
<DOCNO>D4</DOCNO>
<TEXT>Farmers stack the harvest carts by the gate.</TEXT>
</DOC>
<DOC>
<DOCNO>N1</DOCNO>
<TEXT>Rain drums on the tin roof all afternoon.</TEXT>
</DOC>
<DOC>
<DOCNO>N2</DOCNO>
<TEXT>The library reading room stays warm in winter.</TEXT>
</DOC>
"""

TOPICS = """<top>
<num> Number: 1
<title> Lantern festival
</top>
<top>
<num> Number: 2
<title> Harvest moon
</top>
"""

QRELS = """1 0 B1 1
1 0 B2 1
1 0 L1 1
1 0 L2 1
1 0 D1 0
1 0 D2 0
1 0 N1 0
2 0 S1 1
2 0 S2 1
2 0 S3 1
2 0 D3 0
2 0 D4 0
2 0 N2 0
"""

# name, part of speech, lemmas, hyponym names
DICT_SYNSETS = [
    ("lamp-set", "n", ["lantern", "lamp"], []),
    ("moon-set", "n", ["moon"], ["harvest-moon-set"]),
    ("harvest-moon-set", "n", ["harvest_moon"], []),
]

_HEADER = "  1 demo dictionary\n"


def write_dictionary(root, synsets=DICT_SYNSETS):
    """Render index/data file pairs with true byte offsets (two passes)."""

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
    for name, pos, lemmas, hyps in synsets:
        offsets[name] = f"{cursor:08d}"
        cursor += len(render(name, pos, lemmas, hyps, {}).encode())

    data_lines = [render(n, p, ls, hs, offsets) for n, p, ls, hs in synsets]
    with open(os.path.join(root, "data.noun"), "w") as fh:
        fh.write(_HEADER + "".join(data_lines))
    senses = {}
    for name, _pos, lemmas, _hyps in synsets:
        for lemma in lemmas:
            senses.setdefault(lemma.lower(), []).append(offsets[name])
    with open(os.path.join(root, "index.noun"), "w") as fh:
        fh.write(_HEADER)
        for lemma, offs in sorted(senses.items()):
            fh.write(f"{lemma} n {len(offs)} 0 {len(offs)} 0 {' '.join(offs)}\n")


def write_world(root):
    """Write every input file and return their paths as a dict."""
    paths = {
        "dump": os.path.join(root, "dump.xml"),
        "dictionary": os.path.join(root, "dictionary"),
        "corpus": os.path.join(root, "corpus.sgml"),
        "topics": os.path.join(root, "topics.txt"),
        "qrels": os.path.join(root, "judge.qrels"),
    }
    with open(paths["dump"], "w") as fh:
        fh.write(DUMP_XML)
    os.makedirs(paths["dictionary"], exist_ok=True)
    write_dictionary(paths["dictionary"])
    with open(paths["corpus"], "w") as fh:
        fh.write(CORPUS_SGML)
    with open(paths["topics"], "w") as fh:
        fh.write(TOPICS)
    with open(paths["qrels"], "w") as fh:
        fh.write(QRELS)
    return paths
