"""
CoNLL-X Reader and Writer
=========================

Ten tab-separated columns per token, blank line between sentences.
Only FORM, POSTAG and HEAD are consumed; everything else is written
back as "_".
"""

from pathlib import Path
from typing import Dict, Iterator, List, Sequence, Tuple, Union

from dep_tools.corpus.tree import DependencyTree, Sentence, is_projective
from dep_tools.exceptions import ConllFormatError, ContractViolation, TreeStructureError
from dep_tools.utils.debug_logger import debug_log

Example = Tuple[Sentence, DependencyTree]

N_COLUMNS = 10
ID, FORM, LEMMA, CPOSTAG, POSTAG, FEATS, HEAD, DEPREL, PHEAD, PDEPREL = range(N_COLUMNS)


def _iter_blocks(text: str) -> Iterator[List[Tuple[int, List[str]]]]:
    """Yield sentence blocks as lists of (1-based line number, columns)"""
    block: List[Tuple[int, List[str]]] = []
    for line_number, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            if block:
                yield block
                block = []
            continue
        if line.startswith("#") and not block:
            continue
        columns = line.split("\t")
        if len(columns) != N_COLUMNS:
            raise ConllFormatError(
                f"expected {N_COLUMNS} tab-separated columns, found {len(columns)}", line_number
            )
        block.append((line_number, columns))
    if block:
        yield block


def _read_sentence(block: List[Tuple[int, List[str]]]) -> Sentence:
    tokens = []
    for position, (line_number, columns) in enumerate(block, start=1):
        if columns[ID].strip() != str(position):
            raise ConllFormatError(
                f"token ID {columns[ID]!r} out of sequence, expected {position}", line_number
            )
        form, tag = columns[FORM], columns[POSTAG]
        if not form or not tag:
            raise ConllFormatError("empty FORM or POSTAG", line_number)
        tokens.append((form, tag))
    return Sentence.from_tokens(tokens)


def _read_heads(block: List[Tuple[int, List[str]]]) -> List[int]:
    n = len(block)
    heads = []
    for line_number, columns in block:
        try:
            head = int(columns[HEAD])
        except ValueError:
            raise ConllFormatError(f"HEAD {columns[HEAD]!r} is not an integer", line_number)
        if not 0 <= head <= n:
            raise ConllFormatError(f"HEAD {head} outside 0..{n}", line_number)
        heads.append(head)
    return heads


def parse_conll(text: str) -> List[Example]:
    """
    Parse CoNLL-X text into (Sentence, DependencyTree) pairs.

    Raises:
        ConllFormatError: malformed line, non-integer or out-of-range HEAD
        TreeStructureError: cyclic or disconnected head assignment
    """
    examples = []
    for block in _iter_blocks(text):
        sentence = _read_sentence(block)
        heads = _read_heads(block)
        try:
            tree = DependencyTree.from_heads(heads)
        except TreeStructureError as e:
            raise TreeStructureError(f"sentence starting at line {block[0][0]}: {e}") from e
        examples.append((sentence, tree))
    return examples


def parse_conll_sentences(text: str) -> List[Sentence]:
    """Parse CoNLL-X text ignoring the HEAD column"""
    return [_read_sentence(block) for block in _iter_blocks(text)]


def write_conll(pairs: Sequence[Example]) -> str:
    """Serialize pairs as CoNLL-X; unread columns become "_" """
    lines = []
    for sentence, tree in pairs:
        if len(sentence) != len(tree):
            raise ContractViolation(
                f"sentence has {len(sentence)} tokens, tree has {len(tree)}"
            )
        for index, (form, tag) in enumerate(sentence.tokens, start=1):
            columns = ["_"] * N_COLUMNS
            columns[ID] = str(index)
            columns[FORM] = form
            columns[POSTAG] = tag
            columns[HEAD] = str(tree.heads[index])
            lines.append("\t".join(columns))
        lines.append("")
    return "\n".join(lines) + "\n" if lines else ""


def read_conll_file(path: Union[str, Path]) -> List[Example]:
    examples = parse_conll(Path(path).read_text(encoding="utf-8"))
    debug_log.corpus(f"Read {len(examples)} sentences from {path}")
    return examples


def write_conll_file(path: Union[str, Path], pairs: Sequence[Example]) -> None:
    Path(path).write_text(write_conll(pairs), encoding="utf-8")


def trainable_examples(pairs: Sequence[Example]) -> Tuple[List[Example], Dict[str, int]]:
    """
    Keep the trees the decoder can produce: projective with one ROOT dependent.

    Returns:
        Tuple of (kept examples, counts by reason)
    """
    kept = []
    stats = {'total': len(pairs), 'non_projective': 0, 'multi_root': 0, 'kept': 0}
    for sentence, tree in pairs:
        if not is_projective(tree):
            stats['non_projective'] += 1
            continue
        if len(tree.root_children) != 1:
            stats['multi_root'] += 1
            continue
        kept.append((sentence, tree))
    stats['kept'] = len(kept)

    if stats['non_projective'] or stats['multi_root']:
        debug_log.corpus(
            f"Excluded {stats['total'] - stats['kept']} of {stats['total']} sentences from training",
            level="INFO",
            extra=stats
        )
    return kept, stats
