"""Ranked-retrieval effectiveness metrics.

Per topic: average precision, bpref, precision and recall at fixed
cutoffs, recall and F1 over the whole retrieved set, and the 11-point
interpolated precision-recall curve. Across topics: arithmetic mean of
everything plus the geometric mean of average precision, floored at
1e-5 so a zero topic cannot annihilate the product.

A topic is evaluated when the judgments list at least one relevant
document for it; a topic absent from the run then scores zero rather
than being skipped. Unjudged retrieved documents count as nonrelevant
for precision purposes, as usual.
"""
import math
from dataclasses import dataclass, field

GM_MAP_FLOOR = 1e-5
PRECISION_CUTOFFS = (5, 10, 20, 30)
RECALL_LEVELS = tuple(i / 10 for i in range(11))


@dataclass
class TopicMetrics:
    topic: int
    num_rel: int
    num_retrieved: int
    num_rel_retrieved: int
    ap: float
    bpref: float
    recall: float
    f1: float
    precision_at: dict = field(default_factory=dict)
    recall_at: dict = field(default_factory=dict)
    interpolated: list = field(default_factory=list)


@dataclass
class EvalReport:
    topics: list
    map_score: float
    gm_map: float
    mean_bpref: float
    mean_recall: float
    mean_f1: float
    mean_precision_at: dict
    mean_recall_at: dict
    mean_interpolated: list

    def render(self) -> str:
        header = ["topic", "rel", "ret", "relret", "ap", "bpref", "recall", "f1"]
        header += [f"p@{k}" for k in PRECISION_CUTOFFS]
        header += [f"r@{k}" for k in PRECISION_CUTOFFS]
        lines = ["\t".join(header)]
        for tm in self.topics:
            row = [
                str(tm.topic),
                str(tm.num_rel),
                str(tm.num_retrieved),
                str(tm.num_rel_retrieved),
                f"{tm.ap:.4f}",
                f"{tm.bpref:.4f}",
                f"{tm.recall:.4f}",
                f"{tm.f1:.4f}",
            ]
            row += [f"{tm.precision_at[k]:.4f}" for k in PRECISION_CUTOFFS]
            row += [f"{tm.recall_at[k]:.4f}" for k in PRECISION_CUTOFFS]
            lines.append("\t".join(row))
        lines.append(f"map\t{self.map_score:.4f}")
        lines.append(f"gm_map\t{self.gm_map:.4f}")
        lines.append(f"bpref\t{self.mean_bpref:.4f}")
        lines.append(f"recall\t{self.mean_recall:.4f}")
        lines.append(f"f1\t{self.mean_f1:.4f}")
        for k in PRECISION_CUTOFFS:
            lines.append(f"p@{k}\t{self.mean_precision_at[k]:.4f}")
        return "\n".join(lines) + "\n"

    def render_curve(self) -> str:
        lines = ["recall_level\tprecision"]
        for level, precision in zip(RECALL_LEVELS, self.mean_interpolated):
            lines.append(f"{level:.1f}\t{precision:.4f}")
        return "\n".join(lines) + "\n"


def average_precision(ranked, relevant) -> float:
    if not relevant:
        return 0.0
    found = 0
    total = 0.0
    for i, docno in enumerate(ranked, start=1):
        if docno in relevant:
            found += 1
            total += found / i
    return total / len(relevant)


def bpref(ranked, relevant, judged_nonrelevant) -> float:
    """Penalizes each relevant hit by the judged nonrelevant mass above it.

    The denominator is min(R, N); when there are no judged nonrelevant
    documents every retrieved relevant contributes fully.
    """
    if not relevant:
        return 0.0
    denom = min(len(relevant), len(judged_nonrelevant))
    nonrel_above = 0
    total = 0.0
    for docno in ranked:
        if docno in relevant:
            if denom == 0:
                total += 1.0
            else:
                total += 1.0 - min(nonrel_above, denom) / denom
        elif docno in judged_nonrelevant:
            nonrel_above += 1
    return total / len(relevant)


def precision_at(ranked, relevant, k: int) -> float:
    hits = sum(1 for docno in ranked[:k] if docno in relevant)
    return hits / k


def recall_at(ranked, relevant, k: int) -> float:
    if not relevant:
        return 0.0
    hits = sum(1 for docno in ranked[:k] if docno in relevant)
    return hits / len(relevant)


def interpolated_precision(ranked, relevant) -> list[float]:
    """Max precision at or beyond each tenth of recall; zero when unreached."""
    points = []
    found = 0
    total_rel = len(relevant)
    for i, docno in enumerate(ranked, start=1):
        if docno in relevant:
            found += 1
        points.append((found / total_rel if total_rel else 0.0, found / i))
    curve = []
    for level in RECALL_LEVELS:
        best = 0.0
        for recall, precision in points:
            if recall >= level and precision > best:
                best = precision
        curve.append(best)
    return curve


def evaluate_topic(topic, ranked, relevant, judged_nonrelevant) -> TopicMetrics:
    rel_retrieved = sum(1 for d in ranked if d in relevant)
    num_rel = len(relevant)
    recall = rel_retrieved / num_rel if num_rel else 0.0
    precision = rel_retrieved / len(ranked) if ranked else 0.0
    f1 = (
        2 * precision * recall / (precision + recall)
        if precision + recall > 0
        else 0.0
    )
    return TopicMetrics(
        topic=topic,
        num_rel=num_rel,
        num_retrieved=len(ranked),
        num_rel_retrieved=rel_retrieved,
        ap=average_precision(ranked, relevant),
        bpref=bpref(ranked, relevant, judged_nonrelevant),
        recall=recall,
        f1=f1,
        precision_at={k: precision_at(ranked, relevant, k) for k in PRECISION_CUTOFFS},
        recall_at={k: recall_at(ranked, relevant, k) for k in PRECISION_CUTOFFS},
        interpolated=interpolated_precision(ranked, relevant),
    )


def evaluate(run: dict, qrels) -> EvalReport:
    """Score a run against judgments over every topic with relevant docs."""
    topic_metrics = []
    for topic in qrels.topics():
        relevant = qrels.relevant_docs(topic)
        if not relevant:
            continue
        ranked = [docno for docno, _ in run.get(topic, [])]
        topic_metrics.append(
            evaluate_topic(topic, ranked, relevant, qrels.judged_nonrelevant(topic))
        )
    count = len(topic_metrics)
    if count == 0:
        return EvalReport(
            topics=[],
            map_score=0.0,
            gm_map=0.0,
            mean_bpref=0.0,
            mean_recall=0.0,
            mean_f1=0.0,
            mean_precision_at={k: 0.0 for k in PRECISION_CUTOFFS},
            mean_recall_at={k: 0.0 for k in PRECISION_CUTOFFS},
            mean_interpolated=[0.0] * len(RECALL_LEVELS),
        )
    map_score = sum(tm.ap for tm in topic_metrics) / count
    gm_map = math.exp(
        sum(math.log(max(tm.ap, GM_MAP_FLOOR)) for tm in topic_metrics) / count
    )
    return EvalReport(
        topics=topic_metrics,
        map_score=map_score,
        gm_map=gm_map,
        mean_bpref=sum(tm.bpref for tm in topic_metrics) / count,
        mean_recall=sum(tm.recall for tm in topic_metrics) / count,
        mean_f1=sum(tm.f1 for tm in topic_metrics) / count,
        mean_precision_at={
            k: sum(tm.precision_at[k] for tm in topic_metrics) / count
            for k in PRECISION_CUTOFFS
        },
        mean_recall_at={
            k: sum(tm.recall_at[k] for tm in topic_metrics) / count
            for k in PRECISION_CUTOFFS
        },
        mean_interpolated=[
            sum(tm.interpolated[i] for tm in topic_metrics) / count
            for i in range(len(RECALL_LEVELS))
        ],
    )
