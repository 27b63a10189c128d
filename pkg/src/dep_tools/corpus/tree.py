"""
Sentences and Dependency Trees
==============================

Token sequences with an artificial ROOT at index 0, head arrays, and the
structural checks (single tree rooted at 0, projectivity) every loaded
tree has to pass.
"""

from dataclasses import dataclass
from typing import Iterator, List, Sequence, Tuple

from dep_tools.exceptions import TreeStructureError

ROOT_FORM = "<root>"
ROOT_POS = "<root-pos>"

# heads[0] placeholder; ROOT has no head
NO_HEAD = -1

_FORBIDDEN_CHARS = ("\t", "\n", "\r")


@dataclass(frozen=True)
class Sentence:
    """Word forms and POS tags; position 0 is the ROOT sentinel"""
    forms: Tuple[str, ...]
    tags: Tuple[str, ...]

    def __post_init__(self) -> None:
        if len(self.forms) != len(self.tags):
            raise ValueError(f"{len(self.forms)} forms but {len(self.tags)} tags")
        if len(self.forms) < 2:
            raise ValueError("a sentence needs at least one real token")
        if self.forms[0] != ROOT_FORM or self.tags[0] != ROOT_POS:
            raise ValueError("token 0 must be the ROOT sentinel")
        for position, (form, tag) in enumerate(zip(self.forms, self.tags)):
            if not form or not tag:
                raise ValueError(f"token {position} has an empty form or tag")
            if any(ch in form or ch in tag for ch in _FORBIDDEN_CHARS):
                raise ValueError(f"token {position} contains a tab or line break")

    @classmethod
    def from_tokens(cls, tokens: Sequence[Tuple[str, str]]) -> "Sentence":
        """Build a sentence from real (form, pos) tokens; ROOT is prepended"""
        forms = (ROOT_FORM,) + tuple(form for form, _ in tokens)
        tags = (ROOT_POS,) + tuple(tag for _, tag in tokens)
        return cls(forms, tags)

    def __len__(self) -> int:
        return len(self.forms) - 1

    @property
    def tokens(self) -> List[Tuple[str, str]]:
        """Real tokens as (form, pos), ROOT excluded"""
        return list(zip(self.forms[1:], self.tags[1:]))

    def mirrored(self) -> "Sentence":
        """Same tokens in reverse order"""
        return Sentence.from_tokens(self.tokens[::-1])


def validate_heads(heads: Sequence[int]) -> None:
    """
    Check that heads[1..n] form one tree rooted at 0.

    Raises:
        TreeStructureError: out-of-range head, self-loop, or cycle
    """
    n = len(heads) - 1
    if n < 1:
        raise TreeStructureError("tree has no tokens")

    state = [0] * (n + 1)  # 0 unseen, 1 on current path, 2 reaches root
    state[0] = 2
    for start in range(1, n + 1):
        path = []
        node = start
        while state[node] == 0:
            head = heads[node]
            if not 0 <= head <= n:
                raise TreeStructureError(f"token {node} has head {head} outside 0..{n}")
            if head == node:
                raise TreeStructureError(f"token {node} is its own head")
            state[node] = 1
            path.append(node)
            node = head
        if state[node] == 1:
            raise TreeStructureError(f"cycle through token {node}")
        for visited in path:
            state[visited] = 2


@dataclass(frozen=True)
class DependencyTree:
    """heads[j] is the head of token j; heads[0] is NO_HEAD"""
    heads: Tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.heads or self.heads[0] != NO_HEAD:
            raise TreeStructureError("heads[0] must be the ROOT placeholder")
        validate_heads(self.heads)

    @classmethod
    def from_heads(cls, heads: Sequence[int]) -> "DependencyTree":
        """Build from the heads of tokens 1..n"""
        return cls((NO_HEAD,) + tuple(int(h) for h in heads))

    def __len__(self) -> int:
        return len(self.heads) - 1

    def edges(self) -> Iterator[Tuple[int, int]]:
        """(head, child) pairs in child order"""
        for child in range(1, len(self.heads)):
            yield self.heads[child], child

    def children_of(self, head: int) -> List[int]:
        return [child for child in range(1, len(self.heads)) if self.heads[child] == head]

    @property
    def root_children(self) -> List[int]:
        return self.children_of(0)


def _is_descendant(heads: Sequence[int], node: int, ancestor: int) -> bool:
    while node != 0:
        if node == ancestor:
            return True
        node = heads[node]
    return ancestor == 0


def is_projective(tree: DependencyTree) -> bool:
    """True iff every token strictly inside an arc descends from that arc's head"""
    heads = tree.heads
    for head, child in tree.edges():
        low, high = min(head, child), max(head, child)
        for between in range(low + 1, high):
            if not _is_descendant(heads, between, head):
                return False
    return True


def sibling_parts(heads: Sequence[int]) -> List[Tuple[int, int, int]]:
    """
    Adjacent-sibling parts (head, child, previous sibling) of a head array.

    Children are visited outward from their head on each side; the first
    child on a side gets the head itself as its previous sibling (NULL).
    """
    n = len(heads) - 1
    left: List[List[int]] = [[] for _ in range(n + 1)]
    right: List[List[int]] = [[] for _ in range(n + 1)]
    for child in range(1, n + 1):
        head = heads[child]
        (right if child > head else left)[head].append(child)

    parts = []
    for head in range(n + 1):
        previous = head
        for child in reversed(left[head]):
            parts.append((head, child, previous))
            previous = child
        previous = head
        for child in right[head]:
            parts.append((head, child, previous))
            previous = child
    return parts
