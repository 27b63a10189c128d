"""
Unlabeled Attachment Score
==========================

Token-level head accuracy; ROOT is never counted.
"""

from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

from dep_tools.corpus.conll import Example
from dep_tools.corpus.tree import DependencyTree
from dep_tools.decoder.parser import DependencyParser
from dep_tools.exceptions import ContractViolation
from dep_tools.features.config import FeatureConfig
from dep_tools.model.weights import WeightModel
from dep_tools.trainer.config import TrainConfig
from dep_tools.trainer.engine import train
from dep_tools.trainer.trace import EpochRecord, TraceWriter


@dataclass(frozen=True)
class EvalResult:
    correct_heads: int
    total_tokens: int

    @property
    def uas(self) -> float:
        return self.correct_heads / self.total_tokens if self.total_tokens else 0.0

    def __add__(self, other: "EvalResult") -> "EvalResult":
        return EvalResult(
            self.correct_heads + other.correct_heads, self.total_tokens + other.total_tokens
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            'uas': self.uas,
            'correct_heads': self.correct_heads,
            'total_tokens': self.total_tokens,
        }


def uas(pred: DependencyTree, gold: DependencyTree) -> EvalResult:
    if len(pred) != len(gold):
        raise ContractViolation(f"predicted tree has {len(pred)} tokens, gold has {len(gold)}")
    correct = sum(1 for p, g in zip(pred.heads[1:], gold.heads[1:]) if p == g)
    return EvalResult(correct, len(gold))


def corpus_uas(preds: Sequence[DependencyTree], golds: Sequence[DependencyTree]) -> EvalResult:
    """Token-weighted UAS over aligned sequences of trees"""
    if len(preds) != len(golds):
        raise ContractViolation(f"{len(preds)} predicted trees but {len(golds)} gold trees")
    total = EvalResult(0, 0)
    for pred, gold in zip(preds, golds):
        total = total + uas(pred, gold)
    return total


def evaluate_parser(parser: DependencyParser, examples: Sequence[Example]) -> EvalResult:
    preds = parser.parse_all(sentence for sentence, _ in examples)
    return corpus_uas(preds, [tree for _, tree in examples])


def learning_curve(
    corpus: Sequence[Example],
    heldout: Sequence[Example],
    feature_config: FeatureConfig,
    train_config: TrainConfig,
    trace_writer: Optional[TraceWriter] = None,
) -> List[Tuple[int, float]]:
    """Held-out UAS of the averaged weights after every epoch"""
    curve: List[Tuple[int, float]] = []

    def after_epoch(record: EpochRecord, model: WeightModel) -> None:
        parser = DependencyParser(model.averaged_weights(), feature_config)
        curve.append((record.epoch, evaluate_parser(parser, heldout).uas))

    train(corpus, feature_config, train_config, trace_writer, epoch_callback=after_epoch)
    return curve
