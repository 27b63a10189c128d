"""
Separable Corpus Generator
==========================

Builds corpora that are linearly separable in the hashed feature space
with a known margin.

A small planted grammar of (head tag, child tag, direction) rules defines
the separator U: each rule puts weight 1/sqrt(m) on the distance-free
``hp.cp`` feature of that attachment, and U is normalised to unit length.
A tree's U-score is then the number of rule-conforming edges over
sqrt(m). Sentences are grown from the rules, every candidate tree is
enumerated, and a sentence is kept only when its U-optimal tree beats
every other candidate by at least the target margin. The kept gold tree
is always that U-optimal tree.
"""

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from dep_tools.corpus.conll import Example
from dep_tools.corpus.tree import ROOT_POS, DependencyTree, Sentence
from dep_tools.convlab.candidates import CandidateSet, build_candidates
from dep_tools.exceptions import GenerationError
from dep_tools.features.config import FeatureConfig
from dep_tools.features.templates import feature_index
from dep_tools.utils.debug_logger import debug_log

# (head tag, child tag, direction: 1 when the head precedes the child)
Rule = Tuple[str, str, int]

# accepted gap may undershoot the target by this much
MARGIN_TOLERANCE = 1e-9


class SeparableSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    n_sentences: int = Field(default=200, ge=1)
    min_length: int = Field(default=2, ge=1)
    max_length: int = Field(default=6, ge=1, le=6)
    vocab_size: int = Field(default=50, ge=1)
    n_tags: int = Field(default=4, ge=2, le=64)
    delta: float = Field(default=0.5, gt=0.0, le=1.0)
    seed: int = Field(default=1, ge=0)
    hash_bits: int = Field(default=16, ge=16, le=30)
    order: int = Field(default=1, ge=1, le=2)
    max_attempts: int = Field(default=200, ge=1)

    @model_validator(mode='after')
    def _check_lengths(self) -> "SeparableSpec":
        if self.min_length > self.max_length:
            raise ValueError(f"min_length {self.min_length} exceeds max_length {self.max_length}")
        return self

    @property
    def n_rules(self) -> int:
        """Largest m with 1/sqrt(m) >= delta"""
        return max(1, math.floor(1.0 / self.delta**2 + MARGIN_TOLERANCE))

    def feature_config(self) -> FeatureConfig:
        return FeatureConfig(hash_bits=self.hash_bits, order=self.order)


@dataclass
class PlantedGrammar:
    rules: List[Rule]
    separator: np.ndarray = field(repr=False)

    def expansions(self, tag: str) -> List[Rule]:
        return [rule for rule in self.rules if rule[0] == tag]


def _tag_names(count: int) -> List[str]:
    return [f"T{i}" for i in range(count)]


def plant_grammar(spec: SeparableSpec, rng: np.random.Generator) -> PlantedGrammar:
    """
    Draw m distinct rules; the first always attaches tag T0 to ROOT.
    Rules never attach a tag to itself.

    The remaining rules prefer heads that already occur as a child, so
    sentences can grow beyond one token.
    """
    tags = _tag_names(spec.n_tags)
    every_rule = [
        (head, child, direction)
        for head in tags for child in tags for direction in (1, 0)
        if head != child
    ]
    rules: List[Rule] = [(ROOT_POS, tags[0], 1)]
    reachable = {tags[0]}
    while len(rules) < spec.n_rules:
        unused = [rule for rule in every_rule if rule not in rules]
        if not unused:
            break
        growing = [rule for rule in unused if rule[0] in reachable]
        pool = growing or unused
        rule = pool[int(rng.integers(len(pool)))]
        rules.append(rule)
        reachable.add(rule[1])
    return PlantedGrammar(rules=rules, separator=hand_separator(spec.feature_config(), rules))


@dataclass
class _Node:
    tag: str
    left: List["_Node"] = field(default_factory=list)
    right: List["_Node"] = field(default_factory=list)


def _grow(grammar: PlantedGrammar, length: int, rng: np.random.Generator) -> List[str]:
    """Tag sequence of a tree grown from the rules, linearised in order"""
    root = _Node(grammar.rules[0][1])
    nodes = [root]
    while len(nodes) < length:
        expandable = [node for node in nodes if grammar.expansions(node.tag)]
        if not expandable:
            break
        node = expandable[int(rng.integers(len(expandable)))]
        options = grammar.expansions(node.tag)
        _, child_tag, direction = options[int(rng.integers(len(options)))]
        child = _Node(child_tag)
        # new dependents go outermost on their side
        (node.right if direction == 1 else node.left).append(child)
        nodes.append(child)

    tags: List[str] = []

    def linearise(node: _Node) -> None:
        for dependent in reversed(node.left):
            linearise(dependent)
        tags.append(node.tag)
        for dependent in node.right:
            linearise(dependent)

    linearise(root)
    return tags


def u_optimal(candidates: CandidateSet, separator: np.ndarray) -> Tuple[DependencyTree, float]:
    """U-best candidate and its gap to the runner-up (inf for a single candidate)"""
    weights = separator[candidates.feature_ids]
    scores = np.concatenate([phi @ weights for _, phi in candidates.phi_blocks()])
    best = int(np.argmax(scores))
    if scores.size == 1:
        return candidates.trees[best], math.inf
    others = np.delete(scores, best)
    return candidates.trees[best], float(scores[best] - others.max())


def generate_separable_corpus(spec: SeparableSpec) -> Tuple[List[Example], np.ndarray]:
    """
    Corpus whose gold trees are separated from every other candidate by
    at least ``spec.delta`` under the returned unit vector U.

    Raises:
        GenerationError: a sentence could not be drawn within
            ``spec.max_attempts`` attempts; reports the best gap seen
    """
    rng = np.random.default_rng(spec.seed)
    grammar = plant_grammar(spec, rng)
    config = spec.feature_config()
    debug_log.convlab("Planted grammar", extra={
        'rules': [list(rule) for rule in grammar.rules],
        'delta': spec.delta,
    })

    corpus: List[Example] = []
    for position in range(spec.n_sentences):
        best_gap = -math.inf
        for _ in range(spec.max_attempts):
            length = int(rng.integers(spec.min_length, spec.max_length + 1))
            tags = _grow(grammar, length, rng)
            if len(tags) < spec.min_length:
                continue
            words = [f"w{int(rng.integers(spec.vocab_size))}" for _ in tags]
            sentence = Sentence.from_tokens(list(zip(words, tags)))
            tree, gap = u_optimal(build_candidates(sentence, config), grammar.separator)
            if gap >= spec.delta - MARGIN_TOLERANCE:
                corpus.append((sentence, tree))
                break
            best_gap = max(best_gap, gap)
        else:
            raise GenerationError(
                f"sentence {position}: no candidate reached margin {spec.delta} "
                f"in {spec.max_attempts} attempts",
                achieved_margin=best_gap,
            )

    debug_log.convlab(f"Generated {len(corpus)} separable sentences", "INFO", extra={
        'seed': spec.seed,
        'rules': len(grammar.rules),
    })
    return corpus, grammar.separator


def hand_separator(
    config: FeatureConfig, rules: List[Rule], weights: Optional[List[float]] = None
) -> np.ndarray:
    """Unit vector over the distance-free hp.cp features of the given rules"""
    separator = np.zeros(config.table_size)
    for rule, weight in zip(rules, weights or [1.0] * len(rules)):
        head, child, direction = rule
        separator[feature_index(("hp.cp", (head, child), direction, None), config)] += weight
    norm = np.linalg.norm(separator)
    return separator / norm if norm else separator
