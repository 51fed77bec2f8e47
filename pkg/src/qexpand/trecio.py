"""Reading and writing the retrieval exchange formats.

Three formats: topic files (<top> blocks with num/title/desc/narr),
four-column relevance judgments, and six-column ranked run files
"topic Q0 docno rank score tag". All parse errors carry line numbers.
"""
import os
from dataclasses import dataclass


class TrecFormatError(ValueError):
    """Raised for malformed topic, judgment or run files."""


@dataclass
class Topic:
    number: int
    title: str
    description: str = ""
    narrative: str = ""


def _strip_label(text: str, label: str) -> str:
    if text.lower().startswith(label):
        return text[len(label):].strip()
    return text


def parse_topics(text: str) -> list[Topic]:
    topics: list[Topic] = []
    numbers: set[int] = set()
    current = None
    capture = None
    open_line = 0
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        lowered = stripped.lower()
        if lowered.startswith("<top>"):
            if current is not None:
                raise TrecFormatError(f"line {lineno}: <top> inside <top>")
            current = {"num": None, "title": [], "desc": [], "narr": []}
            capture = None
            open_line = lineno
        elif lowered.startswith("</top>"):
            if current is None:
                raise TrecFormatError(f"line {lineno}: </top> without <top>")
            if current["num"] is None:
                raise TrecFormatError(f"line {open_line}: topic without a number")
            if not current["title"]:
                raise TrecFormatError(
                    f"line {open_line}: topic {current['num']} has no title"
                )
            if current["num"] in numbers:
                raise TrecFormatError(
                    f"line {open_line}: duplicate topic number {current['num']}"
                )
            numbers.add(current["num"])
            topics.append(
                Topic(
                    number=current["num"],
                    title=" ".join(current["title"]),
                    description=" ".join(current["desc"]),
                    narrative=" ".join(current["narr"]),
                )
            )
            current = None
            capture = None
        elif current is None:
            continue
        elif lowered.startswith("<num>"):
            rest = _strip_label(stripped[5:].strip(), "number:")
            if not rest.isdigit():
                raise TrecFormatError(f"line {lineno}: bad topic number {rest!r}")
            current["num"] = int(rest)
            capture = None
        elif lowered.startswith("<title>"):
            rest = _strip_label(stripped[7:].strip(), "topic:")
            if rest:
                current["title"].append(rest)
            capture = "title"
        elif lowered.startswith("<desc>"):
            rest = _strip_label(stripped[6:].strip(), "description:")
            if rest:
                current["desc"].append(rest)
            capture = "desc"
        elif lowered.startswith("<narr>"):
            rest = _strip_label(stripped[6:].strip(), "narrative:")
            if rest:
                current["narr"].append(rest)
            capture = "narr"
        elif lowered.startswith("<"):
            capture = None
        elif capture is not None and stripped:
            current[capture].append(stripped)
    if current is not None:
        raise TrecFormatError(f"line {open_line}: unterminated <top>")
    return topics


def load_topics(path) -> list[Topic]:
    with open(os.fspath(path), encoding="utf-8") as fh:
        return parse_topics(fh.read())


class QRels:
    """Graded judgments; relevance means grade one or higher."""

    def __init__(self):
        self.judgments: dict[int, dict[str, int]] = {}

    def topics(self) -> list[int]:
        return sorted(self.judgments)

    def grade(self, topic: int, docno: str):
        return self.judgments.get(topic, {}).get(docno)

    def is_judged(self, topic: int, docno: str) -> bool:
        return docno in self.judgments.get(topic, {})

    def relevant_docs(self, topic: int) -> set[str]:
        return {
            d for d, g in self.judgments.get(topic, {}).items() if g >= 1
        }

    def judged_nonrelevant(self, topic: int) -> set[str]:
        return {d for d, g in self.judgments.get(topic, {}).items() if g < 1}


def parse_qrels(text: str) -> QRels:
    qrels = QRels()
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        parts = stripped.split()
        if len(parts) != 4:
            raise TrecFormatError(
                f"line {lineno}: expected 4 fields, got {len(parts)}"
            )
        raw_topic, _, docno, raw_grade = parts
        try:
            topic = int(raw_topic)
            grade = int(raw_grade)
        except ValueError:
            raise TrecFormatError(f"line {lineno}: non-numeric field") from None
        existing = qrels.judgments.get(topic, {}).get(docno)
        if existing is not None:
            if existing != grade:
                raise TrecFormatError(
                    f"line {lineno}: conflicting grades for topic {topic} {docno}"
                )
            continue
        qrels.judgments.setdefault(topic, {})[docno] = grade
    return qrels


def load_qrels(path) -> QRels:
    with open(os.fspath(path), encoding="utf-8") as fh:
        return parse_qrels(fh.read())


def format_run(results: dict, tag: str = "qexpand") -> str:
    """Six-column run text, topics ascending, ranks starting at one."""
    lines = []
    for topic in sorted(results):
        for rank, (docno, score) in enumerate(results[topic], start=1):
            lines.append(f"{topic} Q0 {docno} {rank} {score:.6f} {tag}")
    return "\n".join(lines) + "\n" if lines else ""


def write_run(results: dict, path, tag: str = "qexpand"):
    with open(os.fspath(path), "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_run(results, tag))


def parse_run(text: str) -> dict[int, list[tuple[str, float]]]:
    """Topic -> ranked (docno, score) list, preserving file order."""
    results: dict[int, list[tuple[str, float]]] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        parts = stripped.split()
        if len(parts) != 6:
            raise TrecFormatError(
                f"line {lineno}: expected 6 fields, got {len(parts)}"
            )
        raw_topic, _, docno, _, raw_score, _ = parts
        try:
            topic = int(raw_topic)
            score = float(raw_score)
        except ValueError:
            raise TrecFormatError(f"line {lineno}: non-numeric field") from None
        results.setdefault(topic, []).append((docno, score))
    return results


def load_run(path) -> dict[int, list[tuple[str, float]]]:
    with open(os.fspath(path), encoding="utf-8") as fh:
        return parse_run(fh.read())
