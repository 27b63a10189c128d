"""
Edge and Sibling Feature Templates
==================================

First-order templates follow the MSTParser set: head/child word and tag
unigrams, head x child bigrams and larger conjunctions, in-between tag
trigrams and surrounding tag 4-grams. Second-order templates cover
adjacent siblings. Every template is emitted twice, once conjoined with
direction and bucketed distance and once with direction only.

Two views of the same templates are provided:
- symbolic keys (``edge_feature_keys``/``sibling_feature_keys``), used to
  explain features and to plant weights on named features;
- vectorised hashed indices over whole batches of edges, used by the
  decoders and the trainer.
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from dep_tools.corpus.tree import DependencyTree, Sentence, sibling_parts
from dep_tools.exceptions import ContractViolation
from dep_tools.features.config import FeatureConfig
from dep_tools.features.hashing import (
    NO_DISTANCE,
    combine,
    hash_atom,
    hash_atoms,
    reduce_hashes,
)
from dep_tools.features.vector import FeatureVector

# outside the sentence (context tags of the first/last token)
NONE_ATOM = "<none>"
# previous sibling of a head's first child on a side
NULL_ATOM = "<null>"

# (template name, attribute slots)
EDGE_TEMPLATES: Tuple[Tuple[str, Tuple[str, ...]], ...] = (
    ("hw", ("hw",)),
    ("hp", ("hp",)),
    ("hw.hp", ("hw", "hp")),
    ("cw", ("cw",)),
    ("cp", ("cp",)),
    ("cw.cp", ("cw", "cp")),
    ("hw.cw", ("hw", "cw")),
    ("hw.cp", ("hw", "cp")),
    ("hp.cw", ("hp", "cw")),
    ("hp.cp", ("hp", "cp")),
    ("hw.hp.cw.cp", ("hw", "hp", "cw", "cp")),
    ("hp.cw.cp", ("hp", "cw", "cp")),
    ("hw.cw.cp", ("hw", "cw", "cp")),
    ("hw.hp.cp", ("hw", "hp", "cp")),
    ("hw.hp.cw", ("hw", "hp", "cw")),
    ("hp.hp+1.cp-1.cp", ("hp", "hp+1", "cp-1", "cp")),
    ("hp-1.hp.cp-1.cp", ("hp-1", "hp", "cp-1", "cp")),
    ("hp.hp+1.cp.cp+1", ("hp", "hp+1", "cp", "cp+1")),
    ("hp-1.hp.cp.cp+1", ("hp-1", "hp", "cp", "cp+1")),
)

BETWEEN_TEMPLATE: Tuple[str, Tuple[str, ...]] = ("hp.bp.cp", ("hp", "bp", "cp"))

SIBLING_TEMPLATES: Tuple[Tuple[str, Tuple[str, ...]], ...] = (
    ("sib:hp.sp.cp", ("hp", "sp", "cp")),
    ("sib:sp.cp", ("sp", "cp")),
    ("sib:sw.cw", ("sw", "cw")),
    ("sib:sw.cp", ("sw", "cp")),
    ("sib:sp.cw", ("sp", "cw")),
    ("sib:hw.sp.cp", ("hw", "sp", "cp")),
)

TEMPLATE_IDS: Dict[str, int] = {
    name: template_id
    for template_id, (name, _) in enumerate(EDGE_TEMPLATES + (BETWEEN_TEMPLATE,) + SIBLING_TEMPLATES)
}

# (template name, atom strings, direction, distance bucket or None)
FeatureKey = Tuple[str, Tuple[str, ...], int, Optional[int]]


# ---------------------------------------------------------------------------
# Symbolic keys
# ---------------------------------------------------------------------------

def _check_edge(sentence: Sentence, head: int, child: int) -> None:
    n = len(sentence)
    if not 0 <= head <= n or not 1 <= child <= n or head == child:
        raise ContractViolation(f"edge ({head}, {child}) invalid for a {n}-token sentence")


def _check_sibling(head: int, child: int, prev_sibling: Optional[int]) -> None:
    if prev_sibling is None:
        return
    if not min(head, child) < prev_sibling < max(head, child):
        raise ContractViolation(
            f"sibling {prev_sibling} is not between head {head} and child {child}"
        )


def _word(sentence: Sentence, position: int) -> str:
    return sentence.forms[position].lower()


def _tag(sentence: Sentence, position: int) -> str:
    if 0 <= position <= len(sentence):
        return sentence.tags[position]
    return NONE_ATOM


def template_count(sentence: Sentence, head: int, child: int) -> int:
    """Number of edge templates that fire for (head, child)"""
    _check_edge(sentence, head, child)
    between = abs(head - child) - 1
    return 2 * (len(EDGE_TEMPLATES) + between)


def edge_feature_keys(
    sentence: Sentence, head: int, child: int, config: FeatureConfig
) -> List[FeatureKey]:
    """Unhashed feature keys of one edge"""
    _check_edge(sentence, head, child)
    attrs = {
        "hw": _word(sentence, head),
        "hp": _tag(sentence, head),
        "cw": _word(sentence, child),
        "cp": _tag(sentence, child),
        "hp-1": _tag(sentence, head - 1),
        "hp+1": _tag(sentence, head + 1),
        "cp-1": _tag(sentence, child - 1),
        "cp+1": _tag(sentence, child + 1),
    }
    direction = int(head < child)
    bucket = config.bucket(abs(head - child))

    keys: List[FeatureKey] = []
    for name, slots in EDGE_TEMPLATES:
        atoms = tuple(attrs[slot] for slot in slots)
        keys.append((name, atoms, direction, bucket))
        keys.append((name, atoms, direction, None))

    name, _ = BETWEEN_TEMPLATE
    for between in range(min(head, child) + 1, max(head, child)):
        atoms = (attrs["hp"], _tag(sentence, between), attrs["cp"])
        keys.append((name, atoms, direction, bucket))
        keys.append((name, atoms, direction, None))
    return keys


def sibling_feature_keys(
    sentence: Sentence,
    head: int,
    child: int,
    prev_sibling: Optional[int],
    config: FeatureConfig,
) -> List[FeatureKey]:
    """Unhashed feature keys of one adjacent-sibling part"""
    _check_edge(sentence, head, child)
    _check_sibling(head, child, prev_sibling)
    if prev_sibling is None:
        sibling_word = sibling_tag = NULL_ATOM
        distance = abs(head - child)
    else:
        sibling_word = _word(sentence, prev_sibling)
        sibling_tag = _tag(sentence, prev_sibling)
        distance = abs(child - prev_sibling)
    attrs = {
        "hw": _word(sentence, head),
        "hp": _tag(sentence, head),
        "cw": _word(sentence, child),
        "cp": _tag(sentence, child),
        "sw": sibling_word,
        "sp": sibling_tag,
    }
    direction = int(head < child)
    bucket = config.bucket(distance)

    keys: List[FeatureKey] = []
    for name, slots in SIBLING_TEMPLATES:
        atoms = tuple(attrs[slot] for slot in slots)
        keys.append((name, atoms, direction, bucket))
        keys.append((name, atoms, direction, None))
    return keys


def feature_index(key: FeatureKey, config: FeatureConfig) -> int:
    """Hash table index of a symbolic key"""
    name, atoms, direction, bucket = key
    columns = [np.array([hash_atom(atom)], dtype=np.uint64) for atom in atoms]
    columns.append(np.array([direction], dtype=np.uint64))
    columns.append(np.array([NO_DISTANCE if bucket is None else bucket], dtype=np.uint64))
    return int(reduce_hashes(combine(TEMPLATE_IDS[name], columns), config.hash_bits)[0])


# ---------------------------------------------------------------------------
# Vectorised extraction
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SentenceEncoding:
    """Atom hashes of a sentence, computed once and reused for every decode"""
    n: int
    words: np.ndarray
    tags: np.ndarray
    # tags with a NONE atom on both ends: padded[i + 1] == tags[i]
    padded_tags: np.ndarray


_NONE_HASH = np.uint64(hash_atom(NONE_ATOM))
_NULL_HASH = np.uint64(hash_atom(NULL_ATOM))


def encode_sentence(sentence: Sentence) -> SentenceEncoding:
    words = hash_atoms([form.lower() for form in sentence.forms])
    tags = hash_atoms(list(sentence.tags))
    padded = np.concatenate([[_NONE_HASH], tags, [_NONE_HASH]]).astype(np.uint64)
    return SentenceEncoding(n=len(sentence), words=words, tags=tags, padded_tags=padded)


def _emit(
    template: str,
    columns: Sequence[np.ndarray],
    direction: np.ndarray,
    bucket: np.ndarray,
    owners: np.ndarray,
    hashes: List[np.ndarray],
    owner_ids: List[np.ndarray],
) -> None:
    template_id = TEMPLATE_IDS[template]
    no_distance = np.full(direction.shape, NO_DISTANCE, dtype=np.uint64)
    hashes.append(combine(template_id, list(columns) + [direction, bucket]))
    hashes.append(combine(template_id, list(columns) + [direction, no_distance]))
    owner_ids.append(owners)
    owner_ids.append(owners)


def edge_feature_indices(
    encoding: SentenceEncoding,
    heads: np.ndarray,
    children: np.ndarray,
    config: FeatureConfig,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Hashed indices for a batch of edges.

    Returns:
        Tuple of (indices, owner) where owner[i] is the batch position of
        the edge that produced indices[i]
    """
    heads = np.asarray(heads, dtype=np.int64)
    children = np.asarray(children, dtype=np.int64)
    attrs = {
        "hw": encoding.words[heads],
        "hp": encoding.tags[heads],
        "cw": encoding.words[children],
        "cp": encoding.tags[children],
        "hp-1": encoding.padded_tags[heads],
        "hp+1": encoding.padded_tags[heads + 2],
        "cp-1": encoding.padded_tags[children],
        "cp+1": encoding.padded_tags[children + 2],
    }
    direction = (heads < children).astype(np.uint64)
    bucket = config.buckets(np.abs(heads - children)).astype(np.uint64)
    owners = np.arange(heads.size, dtype=np.int64)

    hashes: List[np.ndarray] = []
    owner_ids: List[np.ndarray] = []
    for name, slots in EDGE_TEMPLATES:
        _emit(name, [attrs[s] for s in slots], direction, bucket, owners, hashes, owner_ids)

    positions = np.arange(encoding.n + 1)
    low = np.minimum(heads, children)
    high = np.maximum(heads, children)
    inside = (positions[None, :] > low[:, None]) & (positions[None, :] < high[:, None])
    edge_pos, between = np.nonzero(inside)
    if edge_pos.size:
        name, _ = BETWEEN_TEMPLATE
        columns = [attrs["hp"][edge_pos], encoding.tags[between], attrs["cp"][edge_pos]]
        _emit(name, columns, direction[edge_pos], bucket[edge_pos], edge_pos, hashes, owner_ids)

    return reduce_hashes(np.concatenate(hashes), config.hash_bits), np.concatenate(owner_ids)


def sibling_feature_indices(
    encoding: SentenceEncoding,
    heads: np.ndarray,
    children: np.ndarray,
    siblings: np.ndarray,
    config: FeatureConfig,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Hashed indices for a batch of sibling parts; siblings[i] == heads[i]
    encodes a NULL previous sibling.
    """
    heads = np.asarray(heads, dtype=np.int64)
    children = np.asarray(children, dtype=np.int64)
    siblings = np.asarray(siblings, dtype=np.int64)
    null = siblings == heads
    attrs = {
        "hw": encoding.words[heads],
        "hp": encoding.tags[heads],
        "cw": encoding.words[children],
        "cp": encoding.tags[children],
        "sw": np.where(null, _NULL_HASH, encoding.words[siblings]).astype(np.uint64),
        "sp": np.where(null, _NULL_HASH, encoding.tags[siblings]).astype(np.uint64),
    }
    direction = (heads < children).astype(np.uint64)
    distance = np.where(null, np.abs(heads - children), np.abs(children - siblings))
    bucket = config.buckets(distance).astype(np.uint64)
    owners = np.arange(heads.size, dtype=np.int64)

    hashes: List[np.ndarray] = []
    owner_ids: List[np.ndarray] = []
    for name, slots in SIBLING_TEMPLATES:
        _emit(name, [attrs[s] for s in slots], direction, bucket, owners, hashes, owner_ids)
    return reduce_hashes(np.concatenate(hashes), config.hash_bits), np.concatenate(owner_ids)


def tree_feature_indices(
    encoding: SentenceEncoding, heads: Sequence[int], config: FeatureConfig
) -> np.ndarray:
    """Raw (repeated) indices of Phi(x, y) for a head array"""
    head_array = np.asarray(heads[1:], dtype=np.int64)
    children = np.arange(1, encoding.n + 1, dtype=np.int64)
    indices, _ = edge_feature_indices(encoding, head_array, children, config)
    if config.order == 2:
        parts = np.asarray(sibling_parts(heads), dtype=np.int64).reshape(-1, 3)
        sibling_indices, _ = sibling_feature_indices(
            encoding, parts[:, 0], parts[:, 1], parts[:, 2], config
        )
        indices = np.concatenate([indices, sibling_indices])
    return indices


# ---------------------------------------------------------------------------
# Public extraction API
# ---------------------------------------------------------------------------

def extract_edge_features(
    sentence: Sentence, head: int, child: int, config: FeatureConfig
) -> FeatureVector:
    """f(head, child)"""
    _check_edge(sentence, head, child)
    indices, _ = edge_feature_indices(
        encode_sentence(sentence), np.array([head]), np.array([child]), config
    )
    return FeatureVector.from_indices(indices)


def extract_sibling_features(
    sentence: Sentence,
    head: int,
    child: int,
    prev_sibling: Optional[int],
    config: FeatureConfig,
) -> FeatureVector:
    """Features of the part (head, child, previous sibling or None)"""
    _check_edge(sentence, head, child)
    _check_sibling(head, child, prev_sibling)
    sibling = head if prev_sibling is None else prev_sibling
    indices, _ = sibling_feature_indices(
        encode_sentence(sentence), np.array([head]), np.array([child]), np.array([sibling]), config
    )
    return FeatureVector.from_indices(indices)


def tree_feature_vector(
    sentence: Sentence, tree: DependencyTree, config: FeatureConfig
) -> FeatureVector:
    """Phi(x, y): sum of edge features, plus sibling features for order 2"""
    if len(sentence) != len(tree):
        raise ContractViolation(f"sentence has {len(sentence)} tokens, tree has {len(tree)}")
    indices = tree_feature_indices(encode_sentence(sentence), tree.heads, config)
    return FeatureVector.from_indices(indices)
