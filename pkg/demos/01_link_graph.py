"""
Building a link graph store from an article export
==================================================

Feed an XML export through the ingester and look at what survives:
articles, redirect aliases, link adjacency in both directions, and
the document frequency table behind the idf scores.
"""
import os
import tempfile

from qexpand import GraphStore, ingest_dump

EXPORT = """<mediawiki version="0.10" xml:lang="en">
  <siteinfo><sitename>TinyPedia</sitename></siteinfo>
  <page>
    <title>Comet</title>
    <ns>0</ns>
    <id>1</id>
    <revision><id>1</id><text>A comet trails ice and dust. It swings past the [[Sun]] on a long orbit. Compare a [[Meteor]].</text></revision>
  </page>
  <page>
    <title>Sun</title>
    <ns>0</ns>
    <id>2</id>
    <revision><id>2</id><text>The sun warms every [[Comet]] that comes near. {{Infobox star}}</text></revision>
  </page>
  <page>
    <title>Meteor</title>
    <ns>0</ns>
    <id>3</id>
    <revision><id>3</id><text>A meteor burns up high. Folk call it a [[Shooting star|shooting star]].</text></revision>
  </page>
  <page>
    <title>Shooting star</title>
    <ns>0</ns>
    <id>4</id>
    <redirect title="Meteor" />
    <revision><id>4</id><text>#REDIRECT [[Meteor]]</text></revision>
  </page>
  <page>
    <title>Talk:Comet</title>
    <ns>1</ns>
    <id>5</id>
    <revision><id>5</id><text>Discussion pages never enter the store.</text></revision>
  </page>
</mediawiki>
"""

with tempfile.TemporaryDirectory() as scratch:
    dump_path = os.path.join(scratch, "export.xml")
    with open(dump_path, "w") as fh:
        fh.write(EXPORT)

    # one call parses the XML, strips the markup, resolves redirects,
    # and builds adjacency in both directions
    store = ingest_dump(dump_path)

    print(f"articles ingested: {store.size}")
    print(f"ingest counters:   {store.stats}")
    print()

    # titles normalize to a single canonical key
    print("resolve('Shooting star') ->", store.resolve("Shooting star"))
    print("resolve('comet')         ->", store.resolve("comet"))
    print()

    # adjacency: out_links reads the wikitext, in_links is its transpose
    for title in store.titles():
        print(f"{title:10s} out={store.out_links(title)} in={store.in_links(title)}")
    print()

    # term statistics over the stripped article text
    print("tf('comet', 'Sun')      =", store.term_frequency("comet", "Sun"))
    print("df('comet')             =", store.document_frequency("comet"))
    print(f"idf('comet')            = {store.idf('comet'):.4f}")
    print(f"idf('shooting star')    = {store.idf('shooting star'):.4f}")
    print()

    # the store round-trips through a checksummed directory
    target = os.path.join(scratch, "wiki")
    store.save(target)
    reloaded = GraphStore.load(target)
    print("saved files:", sorted(os.listdir(target)))
    print("reload matches:", reloaded.out_links("Comet") == store.out_links("Comet"))
