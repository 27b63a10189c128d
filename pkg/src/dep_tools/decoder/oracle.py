"""
Exhaustive Candidate Enumeration
================================

Enumerates GEN(x): every projective tree over tokens 1..n in which ROOT
has exactly one dependent. Used as the reference decoder in tests and by
the convergence lab to measure margins and radii exactly.

A subtree over a contiguous span is chosen by picking its head and
splitting each side of the head into consecutive blocks, each block
being one dependent's subtree. There are C(3n-2, n-1)/n such trees.
"""

from functools import lru_cache
from typing import Callable, Iterator, Optional, Tuple

from dep_tools.corpus.tree import NO_HEAD, DependencyTree
from dep_tools.exceptions import ContractViolation, EnumerationLimitError

MAX_ENUMERATION_LENGTH = 8

# (child, head) pairs
_Arcs = Tuple[Tuple[int, int], ...]


def _check_length(n: int) -> None:
    if n < 1:
        raise ContractViolation("cannot enumerate trees of an empty sentence")
    if n > MAX_ENUMERATION_LENGTH:
        raise EnumerationLimitError(
            f"refusing to enumerate trees of {n} tokens (limit {MAX_ENUMERATION_LENGTH})"
        )


@lru_cache(maxsize=None)
def _subtrees(low: int, high: int) -> Tuple[Tuple[int, _Arcs], ...]:
    """(root, arcs) of every projective subtree spanning low..high"""
    result = []
    for root in range(low, high + 1):
        for left in _dependents(low, root - 1, root):
            for right in _dependents(root + 1, high, root):
                result.append((root, left + right))
    return tuple(result)


@lru_cache(maxsize=None)
def _dependents(low: int, high: int, head: int) -> Tuple[_Arcs, ...]:
    """Arcs of every way to cover low..high with subtrees attached to head"""
    if low > high:
        return ((),)
    result = []
    for end in range(low, high + 1):
        for root, arcs in _subtrees(low, end):
            for rest in _dependents(end + 1, high, head):
                result.append(((root, head),) + arcs + rest)
    return tuple(result)


def enumerate_projective_trees(n: int) -> Iterator[DependencyTree]:
    """Every tree in GEN(x) for a sentence of n tokens"""
    _check_length(n)
    for root, arcs in _subtrees(1, n):
        heads = [NO_HEAD] * (n + 1)
        heads[root] = 0
        for child, head in arcs:
            heads[child] = head
        yield DependencyTree(tuple(heads))


def count_projective_trees(n: int) -> int:
    """|GEN(x)| by a counting recurrence, independent of the enumeration"""
    if n < 1:
        return 0
    subtree = [0] * (n + 1)
    cover = [0] * (n + 1)
    cover[0] = 1
    for length in range(1, n + 1):
        subtree[length] = sum(cover[root - 1] * cover[length - root] for root in range(1, length + 1))
        cover[length] = sum(subtree[end] * cover[length - end] for end in range(1, length + 1))
    return subtree[n]


def brute_force_decode(
    score_fn: Callable[[DependencyTree], float], n: int
) -> Tuple[DependencyTree, float]:
    """
    Exact argmax over GEN(x); equal scores go to the lexicographically
    smallest head array.

    Raises:
        EnumerationLimitError: n > 8
    """
    best_tree: Optional[DependencyTree] = None
    best_score = float("-inf")
    for tree in enumerate_projective_trees(n):
        score = score_fn(tree)
        if (
            best_tree is None
            or score > best_score
            or (score == best_score and tree.heads < best_tree.heads)
        ):
            best_tree, best_score = tree, score
    assert best_tree is not None
    return best_tree, best_score
