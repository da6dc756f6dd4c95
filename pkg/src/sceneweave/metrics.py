"""Alignment metrics: ROUGE-L, instruction-alignment votes, semantic
similarity, and run report assembly.

ROUGE-L is computed from scratch over the LCS kernel; CLIP-style scoring
is adapter-only and never computed in-core.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import kernels
from .checks import BagOfWordsEmbedder, mapped_similarity, tokenize
from .errors import EmbedderUnavailable, EmptyInput, LengthMismatch, NoVotes


def rouge_l(candidate: list[str], reference: list[str], beta: float = 1.0) -> float:
    """LCS-based F-score: ((1+b^2) R P) / (R + b^2 P); 0 when LCS is empty.

    R = LCS/|reference|, P = LCS/|candidate|.
    """
    if not candidate or not reference:
        raise EmptyInput("rouge_l needs non-empty token sequences")
    vocabulary: dict[str, int] = {}

    def ids(tokens: list[str]) -> list[int]:
        out = []
        for token in tokens:
            if token not in vocabulary:
                vocabulary[token] = len(vocabulary)
            out.append(vocabulary[token])
        return out

    lcs = kernels.lcs_length(ids(candidate), ids(reference))
    if lcs == 0:
        return 0.0
    recall = lcs / len(reference)
    precision = lcs / len(candidate)
    b2 = beta * beta
    return ((1.0 + b2) * recall * precision) / (recall + b2 * precision)


def rouge_l_text(candidate: str, reference: str, beta: float = 1.0) -> float:
    return rouge_l(tokenize(candidate), tokenize(reference), beta)


def _flatten_votes(votes) -> list[bool]:
    flat: list[bool] = []
    for item in votes:
        if isinstance(item, bool):
            flat.append(item)
        else:
            flat.extend(bool(v) for v in item)
    return flat


def ins_align(votes) -> float:
    """Mean of all binary alignment judgments (flat or per-fragment lists)."""
    flat = _flatten_votes(votes)
    if not flat:
        raise NoVotes("ins_align needs at least one vote")
    return sum(1.0 for v in flat if v) / len(flat)


def semantic_similarity(a: str, b: str, embedder) -> float:
    """Embedding cosine mapped to [0, 1]; raises when the adapter fails."""
    if embedder is None:
        raise EmbedderUnavailable("no embedder configured")
    try:
        return mapped_similarity(a, b, embedder)
    except EmbedderUnavailable:
        raise
    except Exception as exc:
        raise EmbedderUnavailable(str(exc)) from exc


@dataclass
class FragmentRow:
    index: int
    rouge_l: float
    semantic_sim: float | None
    caption: str
    reference: str

    def record(self) -> dict:
        return {
            "index": self.index,
            "rouge_l": round(self.rouge_l, 6),
            "semantic_sim": (None if self.semantic_sim is None
                             else round(self.semantic_sim, 6)),
            "caption": self.caption,
            "reference": self.reference,
        }


@dataclass
class EvalReport:
    rouge_l: float
    semantic_sim: float | None = None
    ins_align: float | None = None
    clip_t: float | None = None
    per_fragment: list[FragmentRow] = field(default_factory=list)

    def record(self) -> dict:
        return {
            "rouge_l": round(self.rouge_l, 6),
            "semantic_sim": (None if self.semantic_sim is None
                             else round(self.semantic_sim, 6)),
            "ins_align": (None if self.ins_align is None
                          else round(self.ins_align, 6)),
            "clip_t": self.clip_t,
            "per_fragment": [row.record() for row in self.per_fragment],
        }

    def table_text(self) -> str:
        lines = [f"{'idx':>4}  {'rouge_l':>8}  {'semantic':>9}  caption"]
        for row in self.per_fragment:
            semantic = ("-" if row.semantic_sim is None
                        else f"{row.semantic_sim:.4f}")
            lines.append(f"{row.index:>4}  {row.rouge_l:>8.4f}  "
                         f"{semantic:>9}  {row.caption}")
        semantic = "-" if self.semantic_sim is None else f"{self.semantic_sim:.4f}"
        align = "-" if self.ins_align is None else f"{self.ins_align:.4f}"
        clip = "-" if self.clip_t is None else f"{self.clip_t:.3f}"
        lines.append(f"mean  rouge_l={self.rouge_l:.4f}  semantic={semantic}  "
                     f"ins_align={align}  clip_t={clip}")
        return "\n".join(lines)


def evaluate_run(captions: list[str], windows: list, raters=None,
                 embedder=None, clip_scorer=None, beta: float = 1.0) -> EvalReport:
    """Score captions of rendered clips against their story fragments.

    Windows may be EventWindow objects or plain fragment strings, aligned
    index-wise with the captions.
    """
    if len(captions) != len(windows):
        raise LengthMismatch(
            f"{len(captions)} captions vs {len(windows)} windows")
    if not captions:
        raise LengthMismatch("nothing to evaluate")
    if embedder is None:
        embedder = BagOfWordsEmbedder()

    rows: list[FragmentRow] = []
    semantic_available = True
    for index, (caption, window) in enumerate(zip(captions, windows)):
        reference = window if isinstance(window, str) else window.text
        score = rouge_l_text(caption, reference, beta)
        try:
            semantic = semantic_similarity(caption, reference, embedder)
        except EmbedderUnavailable:
            semantic = None
            semantic_available = False
        rows.append(FragmentRow(index=index, rouge_l=score,
                                semantic_sim=semantic, caption=caption,
                                reference=reference))

    mean_rouge = sum(r.rouge_l for r in rows) / len(rows)
    mean_semantic = (sum(r.semantic_sim for r in rows) / len(rows)
                     if semantic_available else None)
    alignment = ins_align(raters) if raters else None
    clip_t = None
    if clip_scorer is not None:
        scores = [clip_scorer(row.caption, row.reference) for row in rows]
        clip_t = sum(scores) / len(scores)
    return EvalReport(rouge_l=mean_rouge, semantic_sim=mean_semantic,
                      ins_align=alignment, clip_t=clip_t, per_fragment=rows)
