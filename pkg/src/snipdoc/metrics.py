"""Scoring for linking and summarization predictions.

Linking: exact-match correctness plus statement-level precision/recall.
Summarization: sentence BLEU-n, ROUGE-LCS, and a two-stage (exact, stem)
METEOR without the synonym stage. Aggregation is the arithmetic mean of
sentence scores; a pooled corpus-level BLEU is reported separately.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

from .stemming import stem

BLEU_EPSILON = 1e-9


@dataclass(frozen=True)
class LinkScore:
    correct: bool
    tp: int
    fp: int
    fn: int
    precision: float
    recall: float


def link_scores(pred: set[int], gold: set[int]) -> LinkScore:
    """Exact-set correctness and statement-level precision/recall.

    Empty denominators follow the documented conventions: an empty
    prediction is vacuously precise when the gold set is empty too and
    worthless when it is not; recall is 1 when the gold set is empty.
    A perfect prediction therefore scores 1.0 on both axes even for
    comments whose gold scope is empty.
    """
    pred = set(pred)
    gold = set(gold)
    tp = len(pred & gold)
    fp = len(pred - gold)
    fn = len(gold - pred)
    if tp + fp > 0:
        precision = tp / (tp + fp)
    else:
        precision = 1.0 if not gold else 0.0
    recall = tp / (tp + fn) if tp + fn > 0 else 1.0
    return LinkScore(
        correct=pred == gold, tp=tp, fp=fp, fn=fn,
        precision=precision, recall=recall,
    )


def aggregate_link_scores(scores: list[LinkScore]) -> dict[str, float]:
    """Corpus aggregates: exact-match rate, micro-pooled P/R over all
    statements, and the per-instance means."""
    if not scores:
        return {
            "correct_rate": 0.0,
            "micro_precision": 0.0, "micro_recall": 0.0,
            "mean_precision": 0.0, "mean_recall": 0.0,
        }
    tp = sum(s.tp for s in scores)
    fp = sum(s.fp for s in scores)
    fn = sum(s.fn for s in scores)
    return {
        "correct_rate": sum(s.correct for s in scores) / len(scores),
        "micro_precision": tp / (tp + fp) if tp + fp > 0 else 0.0,
        "micro_recall": tp / (tp + fn) if tp + fn > 0 else 1.0,
        "mean_precision": sum(s.precision for s in scores) / len(scores),
        "mean_recall": sum(s.recall for s in scores) / len(scores),
    }


def _ngrams(tokens: list[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def bleu(candidate: list[str], reference: list[str], max_n: int = 4) -> float:
    """Sentence BLEU: geometric mean of clipped n-gram precisions times the
    brevity penalty. A zero numerator for n > 1 is smoothed to a tiny
    epsilon; a zero unigram numerator or a candidate with no n-grams of
    some order yields 0.
    """
    if max_n < 1:
        raise ValueError("max_n must be >= 1")
    if not candidate:
        return 0.0
    log_sum = 0.0
    for n in range(1, max_n + 1):
        cand_grams = _ngrams(candidate, n)
        total = sum(cand_grams.values())
        if total == 0:
            return 0.0
        ref_grams = _ngrams(reference, n)
        matched = sum(
            min(count, ref_grams[gram]) for gram, count in cand_grams.items()
        )
        if matched == 0:
            if n == 1:
                return 0.0
            matched = BLEU_EPSILON
        log_sum += math.log(matched / total)
    geo_mean = math.exp(log_sum / max_n)
    c, r = len(candidate), len(reference)
    bp = 1.0 if c > r else math.exp(1 - r / c)
    return bp * geo_mean


def bleu_all(candidate: list[str], reference: list[str], max_n: int = 4) -> dict[int, float]:
    return {n: bleu(candidate, reference, n) for n in range(1, max_n + 1)}


def corpus_bleu(pairs: list[tuple[list[str], list[str]]], max_n: int = 4) -> float:
    """Pooled-count BLEU over a corpus of (candidate, reference) pairs."""
    matched = [0] * max_n
    totals = [0] * max_n
    cand_len = ref_len = 0
    for candidate, reference in pairs:
        cand_len += len(candidate)
        ref_len += len(reference)
        for n in range(1, max_n + 1):
            cand_grams = _ngrams(candidate, n)
            ref_grams = _ngrams(reference, n)
            totals[n - 1] += sum(cand_grams.values())
            matched[n - 1] += sum(
                min(count, ref_grams[gram]) for gram, count in cand_grams.items()
            )
    log_sum = 0.0
    for n in range(max_n):
        if totals[n] == 0:
            return 0.0
        num = matched[n]
        if num == 0:
            if n == 0:
                return 0.0
            num = BLEU_EPSILON
        log_sum += math.log(num / totals[n])
    geo_mean = math.exp(log_sum / max_n)
    if cand_len == 0:
        return 0.0
    bp = 1.0 if cand_len > ref_len else math.exp(1 - ref_len / cand_len)
    return bp * geo_mean


def _lcs_length(a: list[str], b: list[str]) -> int:
    if not a or not b:
        return 0
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0] * (len(b) + 1)
        for j, y in enumerate(b, start=1):
            if x == y:
                cur[j] = prev[j - 1] + 1
            else:
                cur[j] = max(prev[j], cur[j - 1])
        prev = cur
    return prev[-1]


def rouge_lcs(candidate: list[str], reference: list[str]) -> dict[str, float]:
    """ROUGE-L: recall = LCS/len(reference), precision = LCS/len(candidate),
    F = harmonic mean. Two empty sequences score 1.0 across the board."""
    if not candidate and not reference:
        return {"precision": 1.0, "recall": 1.0, "fmeasure": 1.0}
    lcs = _lcs_length(candidate, reference)
    precision = lcs / len(candidate) if candidate else 0.0
    recall = lcs / len(reference) if reference else 0.0
    if precision + recall == 0:
        fmeasure = 0.0
    else:
        fmeasure = 2 * precision * recall / (precision + recall)
    return {"precision": precision, "recall": recall, "fmeasure": fmeasure}


def _align(candidate: list[str], reference: list[str]) -> list[tuple[int, int]]:
    """Two-stage unigram alignment: exact matches first, then stem matches,
    each candidate token taking the leftmost unmatched reference token."""
    matched_ref: set[int] = set()
    pairs: dict[int, int] = {}
    for ci, token in enumerate(candidate):
        for ri, ref_token in enumerate(reference):
            if ri in matched_ref:
                continue
            if token == ref_token:
                pairs[ci] = ri
                matched_ref.add(ri)
                break
    cand_stems = [stem(t) for t in candidate]
    ref_stems = [stem(t) for t in reference]
    for ci, token_stem in enumerate(cand_stems):
        if ci in pairs:
            continue
        for ri, ref_stem in enumerate(ref_stems):
            if ri in matched_ref:
                continue
            if token_stem == ref_stem:
                pairs[ci] = ri
                matched_ref.add(ri)
                break
    return sorted(pairs.items())


def _chunk_count(pairs: list[tuple[int, int]]) -> int:
    chunks = 0
    prev = None
    for ci, ri in pairs:
        if prev is None or ci != prev[0] + 1 or ri != prev[1] + 1:
            chunks += 1
        prev = (ci, ri)
    return chunks


def meteor(candidate: list[str], reference: list[str]) -> float:
    """Unigram METEOR with exact and stem stages (no synonym lexicon):
    Fmean = 10PR/(R+9P) discounted by 0.5*(chunks/matches)^3."""
    pairs = _align(candidate, reference)
    m = len(pairs)
    if m == 0:
        return 0.0
    precision = m / len(candidate)
    recall = m / len(reference)
    fmean = 10 * precision * recall / (recall + 9 * precision)
    penalty = 0.5 * (_chunk_count(pairs) / m) ** 3
    return fmean * (1 - penalty)


def summary_scores(candidate: list[str], reference: list[str]) -> dict:
    """All summarization metrics for one candidate/reference pair."""
    rouge = rouge_lcs(candidate, reference)
    return {
        "bleu": bleu_all(candidate, reference),
        "meteor": meteor(candidate, reference),
        "rouge_lcs": rouge,
    }
