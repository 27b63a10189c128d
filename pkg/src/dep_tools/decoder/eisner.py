"""
First-order Eisner Decoding
===========================

O(n^3) dynamic program over complete ("tri") and incomplete ("trap")
spans. The chart covers tokens 1..n; ROOT is attached in a final step to
exactly one token, so every returned tree has a single ROOT dependent.

Ties are broken by iteration order: leftmost split point, then the
lowest-numbered ROOT dependent.
"""

from typing import List, Optional, Sequence, Tuple

import numpy as np

from dep_tools.corpus.tree import NO_HEAD, DependencyTree, sibling_parts
from dep_tools.exceptions import ContractViolation

# span directions: LEFT spans are headed at their right end
LEFT, RIGHT = 0, 1


def check_matrix(matrix: np.ndarray) -> int:
    """Return n for a valid (n+1)x(n+1) edge score matrix"""
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ContractViolation(f"edge score matrix must be square, got shape {matrix.shape}")
    n = matrix.shape[0] - 1
    if n < 1:
        raise ContractViolation("cannot decode an empty sentence")
    return n


def check_siblings(siblings: np.ndarray, n: int) -> None:
    if siblings.shape != (n + 1, n + 1, n + 1):
        raise ContractViolation(
            f"sibling table must have shape {(n + 1,) * 3}, got {siblings.shape}"
        )


def tree_score(
    matrix: np.ndarray, heads: Sequence[int], siblings: Optional[np.ndarray] = None
) -> float:
    """
    Score of a head array: edges in child order, then sibling parts in
    ``sibling_parts`` order. Every decoder reports its total through this
    function so equal trees always get bit-equal scores.
    """
    total = 0.0
    for child in range(1, len(heads)):
        total += float(matrix[heads[child], child])
    if siblings is not None:
        for head, child, prev in sibling_parts(heads):
            total += float(siblings[head, child, prev])
    return total


def _best(candidates: np.ndarray) -> Tuple[float, int]:
    position = int(np.argmax(candidates))
    return float(candidates[position]), position


def eisner_decode(matrix: np.ndarray) -> Tuple[DependencyTree, float]:
    """
    Highest scoring projective tree under edge scores matrix[head, child].

    Raises:
        ContractViolation: n == 0 or a non-square matrix
    """
    n = check_matrix(matrix)
    tri = np.zeros((n + 2, n + 2, 2))
    trap = np.zeros((n + 2, n + 2, 2))
    tri_path = np.zeros((n + 2, n + 2, 2), dtype=np.int64)
    trap_path = np.zeros((n + 2, n + 2, 2), dtype=np.int64)

    for width in range(1, n):
        for left in range(1, n - width + 1):
            right = left + width

            # trap[l][r] = max_{l<=k<r} tri[l][k][R] + tri[k+1][r][L] + edge
            score, k = _best(tri[left, left:right, RIGHT] + tri[left + 1:right + 1, right, LEFT])
            trap[left, right, LEFT] = score + matrix[right, left]
            trap[left, right, RIGHT] = score + matrix[left, right]
            trap_path[left, right, :] = k + left

            # tri[l][r][L] = max_{l<=k<r} tri[l][k][L] + trap[k][r][L]
            score, k = _best(tri[left, left:right, LEFT] + trap[left:right, right, LEFT])
            tri[left, right, LEFT] = score
            tri_path[left, right, LEFT] = k + left

            # tri[l][r][R] = max_{l<k<=r} trap[l][k][R] + tri[k][r][R]
            score, k = _best(
                trap[left, left + 1:right + 1, RIGHT] + tri[left + 1:right + 1, right, RIGHT]
            )
            tri[left, right, RIGHT] = score
            tri_path[left, right, RIGHT] = k + left + 1

    roots = np.arange(1, n + 1)
    _, best = _best(matrix[0, roots] + tri[1, roots, LEFT] + tri[roots, n, RIGHT])
    root = best + 1

    heads = [NO_HEAD] * (n + 1)
    heads[root] = 0
    _backtrack(heads, tri_path, trap_path, [(1, root, LEFT, True), (root, n, RIGHT, True)])
    tree = DependencyTree(tuple(heads))
    return tree, tree_score(matrix, tree.heads)


def _backtrack(
    heads: List[int],
    tri_path: np.ndarray,
    trap_path: np.ndarray,
    stack: List[Tuple[int, int, int, bool]],
) -> None:
    while stack:
        left, right, direction, complete = stack.pop()
        if left == right:
            continue
        if complete:
            k = int(tri_path[left, right, direction])
            if direction == RIGHT:
                stack.append((left, k, RIGHT, False))
                stack.append((k, right, RIGHT, True))
            else:
                stack.append((left, k, LEFT, True))
                stack.append((k, right, LEFT, False))
        else:
            k = int(trap_path[left, right, direction])
            if direction == RIGHT:
                heads[right] = left
            else:
                heads[left] = right
            stack.append((left, k, RIGHT, True))
            stack.append((k + 1, right, LEFT, True))
