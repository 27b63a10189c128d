"""
Second-order (adjacent sibling) Eisner decoding, O(n^3).

Besides complete and incomplete spans the chart holds sibling spans
sib[r][t]: two adjacent dependents r < t of a head outside the span, with
r's right half and t's left half meeting at a split point. An incomplete
span adds the outermost dependent of a head next to its previous sibling,
or next to the head itself when it is the first dependent on that side.
"""

from typing import List, Tuple

import numpy as np

from dep_tools.corpus.tree import NO_HEAD, DependencyTree
from dep_tools.decoder.eisner import LEFT, RIGHT, check_matrix, check_siblings, tree_score

# trap_path value for "first dependent on this side"
FIRST = -1


def eisner_decode_second_order(
    matrix: np.ndarray, siblings: np.ndarray
) -> Tuple[DependencyTree, float]:
    """
    Highest scoring projective tree under edge plus adjacent-sibling
    scores; ``siblings[h, c, h]`` scores c as h's first dependent on its side.
    """
    n = check_matrix(matrix)
    check_siblings(siblings, n)
    size = n + 2
    tri = np.zeros((size, size, 2))
    trap = np.zeros((size, size, 2))
    sib = np.zeros((size, size))
    tri_path = np.zeros((size, size, 2), dtype=np.int64)
    trap_path = np.zeros((size, size, 2), dtype=np.int64)
    sib_path = np.zeros((size, size), dtype=np.int64)

    for width in range(1, n):
        for s in range(1, n - width + 1):
            t = s + width
            inner = np.arange(s + 1, t)

            candidates = tri[s, s:t, RIGHT] + tri[s + 1:t + 1, t, LEFT]
            k = int(np.argmax(candidates))
            sib[s, t] = candidates[k]
            sib_path[s, t] = s + k

            # s takes t as its next right dependent
            candidates = np.concatenate([
                [tri[s + 1, t, LEFT] + siblings[s, t, s]],
                trap[s, inner, RIGHT] + sib[inner, t] + siblings[s, t, inner],
            ])
            k = int(np.argmax(candidates))
            trap[s, t, RIGHT] = matrix[s, t] + candidates[k]
            trap_path[s, t, RIGHT] = FIRST if k == 0 else s + k

            # t takes s as its next left dependent
            candidates = np.concatenate([
                [tri[s, t - 1, RIGHT] + siblings[t, s, t]],
                sib[s, inner] + trap[inner, t, LEFT] + siblings[t, s, inner],
            ])
            k = int(np.argmax(candidates))
            trap[s, t, LEFT] = matrix[t, s] + candidates[k]
            trap_path[s, t, LEFT] = FIRST if k == 0 else s + k

            candidates = trap[s, s + 1:t + 1, RIGHT] + tri[s + 1:t + 1, t, RIGHT]
            k = int(np.argmax(candidates))
            tri[s, t, RIGHT] = candidates[k]
            tri_path[s, t, RIGHT] = s + 1 + k

            candidates = tri[s, s:t, LEFT] + trap[s:t, t, LEFT]
            k = int(np.argmax(candidates))
            tri[s, t, LEFT] = candidates[k]
            tri_path[s, t, LEFT] = s + k

    roots = np.arange(1, n + 1)
    candidates = matrix[0, roots] + siblings[0, roots, 0] + tri[1, roots, LEFT] + tri[roots, n, RIGHT]
    root = int(np.argmax(candidates)) + 1

    heads = [NO_HEAD] * (n + 1)
    heads[root] = 0
    _backtrack(heads, tri_path, trap_path, sib_path, [("tri", 1, root, LEFT), ("tri", root, n, RIGHT)])
    tree = DependencyTree(tuple(heads))
    return tree, tree_score(matrix, tree.heads, siblings)


def _backtrack(
    heads: List[int],
    tri_path: np.ndarray,
    trap_path: np.ndarray,
    sib_path: np.ndarray,
    stack: List[Tuple[str, int, int, int]],
) -> None:
    while stack:
        kind, s, t, direction = stack.pop()
        if s == t:
            continue
        if kind == "tri":
            r = int(tri_path[s, t, direction])
            if direction == RIGHT:
                stack.append(("trap", s, r, RIGHT))
                stack.append(("tri", r, t, RIGHT))
            else:
                stack.append(("tri", s, r, LEFT))
                stack.append(("trap", r, t, LEFT))
        elif kind == "trap":
            r = int(trap_path[s, t, direction])
            if direction == RIGHT:
                heads[t] = s
                if r == FIRST:
                    stack.append(("tri", s + 1, t, LEFT))
                else:
                    stack.append(("trap", s, r, RIGHT))
                    stack.append(("sib", r, t, RIGHT))
            else:
                heads[s] = t
                if r == FIRST:
                    stack.append(("tri", s, t - 1, RIGHT))
                else:
                    stack.append(("sib", s, r, LEFT))
                    stack.append(("trap", r, t, LEFT))
        else:
            u = int(sib_path[s, t])
            stack.append(("tri", s, u, RIGHT))
            stack.append(("tri", u + 1, t, LEFT))
