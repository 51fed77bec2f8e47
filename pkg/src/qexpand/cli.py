"""Command line front end.

Subcommands cover the whole pipeline: ingest-wiki and ingest-wordnet
build the two stores, index builds the retrieval index, expand shows
expansion terms, search produces a ranked run file, eval scores a run,
and sweep repeats search/eval across expansion sizes.

Settings resolve in order: explicit flag, then the --config file
(section named after the subcommand, then [global]), then environment
(QEXPAND_STORE_ROOT for the store), then built-in defaults. Config
files are plain key=value lines under [section] headers.

Writers take a lock file inside the store root so two ingests cannot
interleave, and every command removes the outputs it started writing
when it fails partway.
"""
import argparse
import os
import shutil
import sys

from .evaluation import evaluate
from .expansion import ExpansionParams, expand
from .indexing import InvertedIndex, build_index, search
from .queryprep import prepare_query
from .trecio import Topic, format_run, load_qrels, load_run, load_topics
from .wikigraph import GraphStore, ingest_dump
from .wordnet import LexicalStore, load_wordnet

STORE_ENV = "QEXPAND_STORE_ROOT"
LOCK_NAME = ".qexpand.lock"
DEFAULT_DEPTH = 1000
DEFAULT_SWEEP = (10, 20, 30, 40, 50, 60)


class CliError(Exception):
    """User-facing command error; printed without a traceback."""


# ----------------------------------------------------------------------
# configuration

def parse_config(text: str) -> dict[str, dict[str, str]]:
    sections: dict[str, dict[str, str]] = {}
    current = "global"
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if stripped.startswith("[") and stripped.endswith("]"):
            current = stripped[1:-1].strip()
            continue
        if "=" not in stripped:
            raise CliError(f"config line {lineno}: expected key=value")
        key, value = stripped.split("=", 1)
        sections.setdefault(current, {})[key.strip()] = value.strip()
    return sections


def _load_config(args) -> dict[str, dict[str, str]]:
    path = getattr(args, "config", None)
    if path is None:
        return {}
    if not os.path.exists(path):
        raise CliError(f"config file not found: {path}")
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


def _resolve(args, config, key, default=None, env_var=None):
    value = getattr(args, key.replace("-", "_"), None)
    if value is not None:
        return value
    for section in (args.command, "global"):
        table = config.get(section, {})
        if key in table:
            return table[key]
    if env_var is not None:
        value = os.environ.get(env_var)
        if value:
            return value
    return default


def _as_int(value, name: str) -> int:
    try:
        return int(value)
    except (TypeError, ValueError):
        raise CliError(f"invalid integer for {name}: {value!r}") from None


def _expansion_params(args, config) -> ExpansionParams:
    m = _as_int(_resolve(args, config, "m", 30), "--m")
    n = _as_int(_resolve(args, config, "n", 100), "--n")
    raw = _resolve(args, config, "relations", "synonym,hyponym")
    relations = tuple(part.strip() for part in str(raw).split(",") if part.strip())
    try:
        return ExpansionParams(n_intermediate=n, m_final=m, relations=relations)
    except ValueError as exc:
        raise CliError(str(exc)) from None


# ----------------------------------------------------------------------
# filesystem helpers

class StoreLock:
    """Exclusive advisory lock via an O_EXCL lock file in the store root."""

    def __init__(self, root: str):
        self.path = os.path.join(root, LOCK_NAME)

    def __enter__(self):
        os.makedirs(os.path.dirname(self.path), exist_ok=True)
        try:
            fd = os.open(self.path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
        except FileExistsError:
            raise CliError(
                f"another invocation holds {self.path}; remove it if stale"
            ) from None
        os.write(fd, f"{os.getpid()}\n".encode())
        os.close(fd)
        return self

    def __exit__(self, exc_type, exc, tb):
        try:
            os.unlink(self.path)
        except FileNotFoundError:
            pass
        return False


class OutputTracker:
    """Remembers outputs as they start and removes them all on failure."""

    def __init__(self):
        self.paths: list[str] = []

    def add(self, path) -> str:
        path = os.fspath(path)
        self.paths.append(path)
        return path

    def discard_all(self):
        for path in reversed(self.paths):
            if os.path.isdir(path):
                shutil.rmtree(path, ignore_errors=True)
            elif os.path.exists(path):
                try:
                    os.unlink(path)
                except OSError:
                    pass


def _fresh_dir(path: str, what: str) -> str:
    if os.path.exists(path):
        raise CliError(f"{what} already exists: {path}")
    return path


def _write_text(path: str, text: str):
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _emit(out_path, text: str, tracker: OutputTracker):
    if out_path:
        tracker.add(out_path)
        _write_text(out_path, text)
    else:
        sys.stdout.write(text)


# ----------------------------------------------------------------------
# shared loading

def _store_root(args, config, required=True):
    root = _resolve(args, config, "store", env_var=STORE_ENV)
    if root is None and required:
        raise CliError(
            f"no store given: pass --store, set {STORE_ENV}, or use a config file"
        )
    return root


def _open_stores(root: str):
    graph = GraphStore.load(os.path.join(root, "wiki"))
    wordnet_dir = os.path.join(root, "wordnet")
    lexicon = None
    if os.path.exists(os.path.join(wordnet_dir, "manifest.json")):
        lexicon = LexicalStore.load(wordnet_dir)
    return graph, lexicon


def _topics_for(args, config) -> list[Topic]:
    query = getattr(args, "query", None)
    topics_path = _resolve(args, config, "topics")
    if query:
        return [Topic(number=0, title=query)]
    if topics_path:
        return load_topics(topics_path)
    raise CliError("no input: give a query argument or --topics FILE")


def _run_search(index, graph, lexicon, topics, params, model, depth):
    results = {}
    for topic in topics:
        keywords = prepare_query(topic.title)
        if graph is not None:
            expansion = expand(graph, lexicon, keywords, params)
            weighted = expansion.weighted_query()
        else:
            weighted = [(term, 1.0) for term in keywords.terms]
        results[topic.number] = search(index, weighted, model=model, k=depth)
    return results


# ----------------------------------------------------------------------
# subcommands

def cmd_ingest_wiki(args) -> int:
    config = _load_config(args)
    dump = _resolve(args, config, "dump")
    if dump is None:
        raise CliError("ingest-wiki needs --dump FILE")
    root = _store_root(args, config)
    tracker = OutputTracker()
    with StoreLock(root):
        target = _fresh_dir(os.path.join(root, "wiki"), "wiki store")
        try:
            store = ingest_dump(dump)
            tracker.add(target)
            store.save(target)
        except BaseException:
            tracker.discard_all()
            raise
    print(f"ingested {store.size} articles, {len(store.aliases)} aliases -> {target}")
    for key in sorted(store.stats):
        print(f"  {key}: {store.stats[key]}")
    return 0


def cmd_ingest_wordnet(args) -> int:
    config = _load_config(args)
    source = _resolve(args, config, "wordnet")
    if source is None:
        raise CliError("ingest-wordnet needs --wordnet DIR")
    root = _store_root(args, config)
    tracker = OutputTracker()
    with StoreLock(root):
        target = _fresh_dir(os.path.join(root, "wordnet"), "wordnet store")
        try:
            store = load_wordnet(source)
            tracker.add(target)
            store.save(target)
        except BaseException:
            tracker.discard_all()
            raise
    print(f"ingested {store.size} synsets -> {target}")
    return 0


def cmd_index(args) -> int:
    config = _load_config(args)
    corpus = _resolve(args, config, "corpus")
    if corpus is None:
        raise CliError("index needs --corpus FILE")
    target = _resolve(args, config, "index")
    if target is None:
        raise CliError("index needs --index DIR")
    _fresh_dir(target, "index")
    tracker = OutputTracker()
    try:
        built = build_index(corpus)
        tracker.add(target)
        built.save(target)
    except BaseException:
        tracker.discard_all()
        raise
    print(f"indexed {built.size} documents, {len(built.postings)} terms -> {target}")
    return 0


def cmd_expand(args) -> int:
    config = _load_config(args)
    root = _store_root(args, config)
    graph, lexicon = _open_stores(root)
    params = _expansion_params(args, config)
    topics = _topics_for(args, config)
    blocks = []
    for topic in topics:
        keywords = prepare_query(topic.title)
        result = expand(graph, lexicon, keywords, params)
        blocks.append(f"# topic {topic.number}: {topic.title}\n")
        blocks.append(f"# units: {' | '.join(keywords.units)}\n")
        blocks.append(result.report())
        for source in ("wordnet", "wiki"):
            terms = [c.term for c in result.pool if c.source == source]
            blocks.append(f"# {source} terms: {', '.join(terms)}\n")
        blocks.append(
            "# combined: " + ", ".join(c.term for c in result.selected) + "\n"
        )
        weighted = " | ".join(
            f"{term}:{weight:.6f}" for term, weight in result.weighted_query()
        )
        blocks.append(f"# weighted query: {weighted}\n")
        blocks.append("\n")
    tracker = OutputTracker()
    try:
        _emit(_resolve(args, config, "out"), "".join(blocks), tracker)
    except BaseException:
        tracker.discard_all()
        raise
    return 0


def cmd_search(args) -> int:
    config = _load_config(args)
    index_dir = _resolve(args, config, "index")
    if index_dir is None:
        raise CliError("search needs --index DIR")
    index = InvertedIndex.load(index_dir)
    model = str(_resolve(args, config, "model", "bm25"))
    depth = _as_int(_resolve(args, config, "depth", DEFAULT_DEPTH), "--depth")
    root = _store_root(args, config, required=False)
    graph = lexicon = None
    if root is not None:
        graph, lexicon = _open_stores(root)
    params = _expansion_params(args, config)
    topics = _topics_for(args, config)
    results = _run_search(index, graph, lexicon, topics, params, model, depth)
    tag = f"qexpand-{model}"
    tracker = OutputTracker()
    try:
        _emit(_resolve(args, config, "out"), format_run(results, tag), tracker)
    except BaseException:
        tracker.discard_all()
        raise
    return 0


def cmd_eval(args) -> int:
    config = _load_config(args)
    qrels_path = _resolve(args, config, "qrels")
    if qrels_path is None:
        raise CliError("eval needs --qrels FILE")
    run = load_run(args.run)
    qrels = load_qrels(qrels_path)
    report = evaluate(run, qrels)
    sys.stdout.write(report.render())
    out_dir = _resolve(args, config, "out")
    if out_dir:
        tracker = OutputTracker()
        try:
            os.makedirs(out_dir, exist_ok=True)
            report_path = tracker.add(os.path.join(out_dir, "report.tsv"))
            _write_text(report_path, report.render())
            curve_path = tracker.add(os.path.join(out_dir, "curve.tsv"))
            _write_text(curve_path, report.render_curve())
        except BaseException:
            tracker.discard_all()
            raise
    return 0


def _sweep_sizes(args, config):
    raw = _resolve(args, config, "m")
    if raw is None:
        return DEFAULT_SWEEP
    parts = [p.strip() for p in str(raw).split(",") if p.strip()]
    return tuple(_as_int(p, "--m") for p in parts)


def cmd_sweep(args) -> int:
    config = _load_config(args)
    index_dir = _resolve(args, config, "index")
    if index_dir is None:
        raise CliError("sweep needs --index DIR")
    qrels_path = _resolve(args, config, "qrels")
    if qrels_path is None:
        raise CliError("sweep needs --qrels FILE")
    index = InvertedIndex.load(index_dir)
    qrels = load_qrels(qrels_path)
    model = _resolve(args, config, "model")
    models = [str(model)] if model else ["bm25", "tfidf"]
    depth = _as_int(_resolve(args, config, "depth", DEFAULT_DEPTH), "--depth")
    root = _store_root(args, config)
    graph, lexicon = _open_stores(root)
    n = _as_int(_resolve(args, config, "n", 100), "--n")
    raw_relations = _resolve(args, config, "relations", "synonym,hyponym")
    relations = tuple(
        part.strip() for part in str(raw_relations).split(",") if part.strip()
    )
    topics = _topics_for(args, config)
    lines = ["m\t" + "\t".join(f"map_{name}" for name in models)]
    for m in _sweep_sizes(args, config):
        try:
            params = ExpansionParams(
                n_intermediate=n, m_final=m, relations=relations
            )
        except ValueError as exc:
            raise CliError(str(exc)) from None
        # expansion does not depend on the ranking model, so expand
        # once per size and rank once per model
        weighted = {}
        for topic in topics:
            keywords = prepare_query(topic.title)
            result = expand(graph, lexicon, keywords, params)
            weighted[topic.number] = result.weighted_query()
        row = [str(m)]
        for name in models:
            run = {
                number: search(index, entries, model=name, k=depth)
                for number, entries in weighted.items()
            }
            row.append(f"{evaluate(run, qrels).map_score:.4f}")
        lines.append("\t".join(row))
    table = "\n".join(lines) + "\n"
    sys.stdout.write(table)
    out_path = _resolve(args, config, "out")
    if out_path:
        tracker = OutputTracker()
        try:
            tracker.add(out_path)
            _write_text(out_path, table)
        except BaseException:
            tracker.discard_all()
            raise
    return 0


# ----------------------------------------------------------------------
# parser

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qexpand",
        description="Query expansion pipeline: ingest, expand, index, search, eval.",
    )
    sub = parser.add_subparsers(dest="command")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value config file with [sections]")
    common.add_argument("--store", help="store root directory")

    p = sub.add_parser("ingest-wiki", parents=[common], help="build the link graph store")
    p.add_argument("--dump", help="XML export file (.bz2 accepted)")
    p.set_defaults(func=cmd_ingest_wiki)

    p = sub.add_parser(
        "ingest-wordnet", parents=[common], help="build the dictionary store"
    )
    p.add_argument("--wordnet", help="dictionary directory (index.pos/data.pos files)")
    p.set_defaults(func=cmd_ingest_wordnet)

    p = sub.add_parser("index", parents=[common], help="build the retrieval index")
    p.add_argument("--corpus", help="SGML corpus file")
    p.add_argument("--index", help="target index directory")
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("expand", parents=[common], help="show expansion terms")
    p.add_argument("query", nargs="?", help="query text (or use --topics)")
    p.add_argument("--topics", help="topic file")
    p.add_argument("--m", help="final expansion terms per query")
    p.add_argument("--n", help="intermediate candidates per source")
    p.add_argument("--relations", help="comma list: synonym,hyponym")
    p.add_argument("--out", help="write report here instead of stdout")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("search", parents=[common], help="run ranked retrieval")
    p.add_argument("query", nargs="?", help="query text (or use --topics)")
    p.add_argument("--topics", help="topic file")
    p.add_argument("--index", help="index directory")
    p.add_argument("--model", choices=["bm25", "tfidf"], help="ranking model")
    p.add_argument("--m", help="final expansion terms per query")
    p.add_argument("--n", help="intermediate candidates per source")
    p.add_argument("--relations", help="comma list: synonym,hyponym")
    p.add_argument("--depth", help="retrieval depth (default 1000)")
    p.add_argument("--out", help="write the run file here instead of stdout")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("eval", parents=[common], help="score a run file")
    p.add_argument("run", help="run file to evaluate")
    p.add_argument("--qrels", help="relevance judgments")
    p.add_argument("--out", help="directory for report.tsv and curve.tsv")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("sweep", parents=[common], help="search+eval across m values")
    p.add_argument("query", nargs="?", help="query text (or use --topics)")
    p.add_argument("--topics", help="topic file")
    p.add_argument("--index", help="index directory")
    p.add_argument("--qrels", help="relevance judgments")
    p.add_argument(
        "--model", choices=["bm25", "tfidf"], help="restrict to one ranking model"
    )
    p.add_argument("--m", help="comma list of expansion sizes (default 10..60)")
    p.add_argument("--n", help="intermediate candidates per source")
    p.add_argument("--relations", help="comma list: synonym,hyponym")
    p.add_argument("--depth", help="retrieval depth (default 1000)")
    p.add_argument("--out", help="write the table here as well")
    p.set_defaults(func=cmd_sweep)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "func", None) is None:
        parser.print_help()
        return 2
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
