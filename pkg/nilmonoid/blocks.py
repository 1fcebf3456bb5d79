from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

from .errors import HirschLengthError, InvariantError
from .gaps import FiniteAbelian, TorsionGapSet, TorsionValue, concentrate_torsion
from .group import GroupElement, GroupPresentation, Word
from .lattice import SubgroupLattice, commutator_lattice

__all__ = [
    'CommutatorStructure',
    'Block',
    'BlockWord',
    'BoundedGenSequence',
    'commutator_structure',
    'commutator_bound',
    'prefix_commutator_set',
    'reorder_single',
    'reorder_full',
    'bounded_sequence'
]

logger = logging.getLogger(__name__)


class CommutatorStructure(object):
    """
    `[G,G]` identified with `Z^h x G_0`.

    Attributes:
        presentation (GroupPresentation): The group G.
        lattice (SubgroupLattice): The commutator lattice inside the central group.
        h (int): Hirsch length of `[G,G]`.
        torsion (FiniteAbelian): The finite part `G_0`.
        size_e (int): `|G_0|`.
    """
    def __init__(self, presentation:GroupPresentation, lattice:SubgroupLattice):
        self.presentation = presentation
        self.lattice = lattice
        self.h = lattice.free_rank
        self.torsion: FiniteAbelian = lattice.torsion
        self.size_e = self.torsion.size

    def __repr__(self) -> str:
        return f"CommutatorStructure(h={self.h}, torsion={self.torsion.orders})"

    def require_h1(self) -> CommutatorStructure:
        if self.h != 1:
            raise HirschLengthError(
                f"bounded generation needs h([G,G]) = 1, this group has h([G,G]) = {self.h}")
        return self

    def split(self, g:GroupElement) -> TorsionValue:
        """Image `(proj, torsion)` of a commutator element in `Z x G_0`."""
        self.require_h1()
        if not g.is_central:
            raise ValueError(f"{g} is not central")
        free, torsion = self.lattice.coordinates(g.f)
        return free[0], torsion

    def proj(self, g:GroupElement) -> int:
        return self.split(g)[0]


def commutator_structure(P:GroupPresentation) -> CommutatorStructure:
    """
    Hirsch length, torsion and projection of `[G,G]`.

    Example:
    ```python
    commutator_structure(h3)   # CommutatorStructure(h=1, torsion=())
    ```
    """
    P.require_consistent()
    return CommutatorStructure(P, commutator_lattice(P))


def _structure(P:GroupPresentation, cs:Optional[CommutatorStructure]) -> CommutatorStructure:
    return (commutator_structure(P) if cs is None else cs).require_h1()


def commutator_bound(xs:Sequence[GroupElement], cs:CommutatorStructure) -> int:
    """`b = max(1, max |proj [x_i, x_j]|)` over all pairs of generators."""
    cs.require_h1()
    P = cs.presentation
    values = [abs(cs.proj(P.commutator(x, y))) for x in xs for y in xs]
    return max([1] + values)


def prefix_commutator_set(P:GroupPresentation, w:Word, x:GroupElement,
                          cs:Optional[CommutatorStructure]=None) -> TorsionGapSet:
    """
    The set `{[x, val(w_<=i)] | 0 <= i <= l}` in `Z x G_0`.

    Consecutive values differ by `[x, w_i]`, which bounds the gaps of the projection.
    """
    cs = _structure(P, cs)
    values = [cs.split(P.commutator(x, v)) for v in P.prefix_values(w)]
    return TorsionGapSet(values, cs.torsion)


@dataclass(frozen=True)
class Block(object):
    """A power `element^exponent` tagged with the generator it belongs to."""
    element: GroupElement
    exponent: int
    label: Hashable = None


class BlockWord(object):
    """
    A word written as a sequence of blocks. Neighbouring blocks never share element and label.

    Args:
        blocks (Sequence[Block]): The blocks, merged on construction.
    """
    def __init__(self, blocks:Sequence[Block]=()):
        merged: List[Block] = []
        for block in blocks:
            if block.exponent < 1:
                raise ValueError(f"block exponents must be positive, got {block.exponent}")
            last = merged[-1] if merged else None
            if last is not None and last.element == block.element and last.label == block.label:
                merged[-1] = Block(last.element, last.exponent + block.exponent, last.label)
            else:
                merged.append(block)
        self.blocks: Tuple[Block, ...] = tuple(merged)

    @classmethod
    def from_letters(cls, letters:Sequence[GroupElement],
                     labels:Optional[Sequence[Hashable]]=None) -> BlockWord:
        labels = [None] * len(letters) if labels is None else list(labels)
        if len(labels) != len(letters):
            raise ValueError("every letter needs a label")
        return cls([Block(g, 1, label) for g, label in zip(letters, labels)])

    def __repr__(self) -> str:
        return "BlockWord(" + " ".join(f"{b.element}^{b.exponent}" for b in self.blocks) + ")"

    def __len__(self) -> int:
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)

    def __eq__(self, other) -> bool:
        return isinstance(other, BlockWord) and self.blocks == other.blocks

    def letters(self) -> List[GroupElement]:
        return [b.element for b in self.blocks for _ in range(b.exponent)]

    def labels(self) -> List[Hashable]:
        return [b.label for b in self.blocks for _ in range(b.exponent)]

    def evaluate(self, P:GroupPresentation) -> GroupElement:
        value = P.identity()
        for b in self.blocks:
            value = P.multiply(value, P.power(b.element, b.exponent))
        return value

    def block_count(self, label:Hashable) -> int:
        """Number of maximal runs carrying `label`."""
        count, previous = 0, object()
        for b in self.blocks:
            if b.label == label and previous != label:
                count += 1
            previous = b.label
        return count


def _reorder_labelled(P:GroupPresentation, letters:List[Tuple[Hashable, GroupElement]],
                      target:Hashable, cs:CommutatorStructure) -> List[Tuple[Hashable, GroupElement]]:
    """
    Gather the occurrences labelled `target` into few blocks without changing the value.

    With `v_k` the value of the first k remaining letters, moving `x` from behind `v_k`
    to the front multiplies by `[x, v_k]^-1`. The multiset of these displacements is
    concentrated and every value is realized at the smallest k carrying it.
    """
    x = next((g for label, g in letters if label == target), None)
    if x is None:
        return letters
    rest = [(label, g) for label, g in letters if label != target]
    slots = []
    seen = 0
    for label, g in letters:
        if label == target:
            slots.append(seen)
        else:
            seen += 1
    n = len(slots)

    values = [cs.split(P.commutator(x, v)) for v in P.prefix_values([g for _, g in rest])]
    A = TorsionGapSet(values, cs.torsion)
    total = A.total(values[k] for k in slots)
    first_slot: Dict[TorsionValue, int] = {}
    for k, a in enumerate(values):
        first_slot.setdefault(a, k)

    single = next((a for a in values
                   if (n * a[0], cs.torsion.scale(a[1], n)) == total), None)
    if single is not None:
        counts = {single: n}
    else:
        concentrated = concentrate_torsion(sorted(values[k] for k in slots), A)
        counts = {}
        for a in concentrated:
            counts[a] = counts.get(a, 0) + 1

    insertions: Dict[int, int] = {}
    for a, c in counts.items():
        insertions[first_slot[a]] = insertions.get(first_slot[a], 0) + c
    out: List[Tuple[Hashable, GroupElement]] = []
    for k in range(len(rest) + 1):
        out.extend([(target, x)] * insertions.get(k, 0))
        if k < len(rest):
            out.append(rest[k])
    logger.debug("gathered %d occurrences of %s into %d blocks", n, x, len(insertions))
    return out


def _blocks(letters:Sequence[Tuple[Hashable, GroupElement]]) -> BlockWord:
    return BlockWord.from_letters([g for _, g in letters], [label for label, _ in letters])


def reorder_single(P:GroupPresentation, u:Word, x:GroupElement,
                   cs:Optional[CommutatorStructure]=None) -> BlockWord:
    """
    Rearrange the occurrences of `x` in `u` into at most `2e + 2b^2e` blocks.

    Every letter equal to `x` counts as an occurrence, the remaining letters keep their order.

    Args:
        P (GroupPresentation): A group with `h([G,G]) = 1`.
        u (Word): The word.
        x (GroupElement): The letter to gather.
        cs (Optional[CommutatorStructure]): Precomputed structure of `[G,G]`.

    Returns:
        BlockWord: A word with the same value. Blocks of `x` carry the label `x`.

    Example:
    ```python
    x, y = h3.main_generator(0), h3.main_generator(1)
    reorder_single(h3, [x, y, x, y, x], x).letters()   # [y, x, x, x, y]
    ```
    """
    cs = _structure(P, cs)
    letters = [(x if g == x else None, g) for g in u]
    result = _reorder_labelled(P, letters, x, cs)
    word = _blocks(result)
    if word.evaluate(P) != P.eval_word(u):
        raise InvariantError("reordering changed the value of the word")
    return word


def reorder_full(P:GroupPresentation, w:Word, cs:Optional[CommutatorStructure]=None,
                 xs:Optional[Sequence[GroupElement]]=None) -> BlockWord:
    """
    Reorder a word over `x_1..x_n` so that `x_1..x_m` occupy at most `4me(b^2+1)` blocks for every m.

    The generators are gathered one after another in the order of `xs`.

    Args:
        P (GroupPresentation): A group with `h([G,G]) = 1`.
        w (Word): A word over the generators.
        cs (Optional[CommutatorStructure]): Precomputed structure of `[G,G]`.
        xs (Optional[Sequence[GroupElement]]): The generators, defaults to the letters of `w`
            in order of first appearance.

    Returns:
        BlockWord: A word with the same value, blocks are labelled with generator indices.
    """
    cs = _structure(P, cs)
    if xs is None:
        xs = list(dict.fromkeys(w))
    index = {}
    for i, g in enumerate(xs):
        index.setdefault(g, i)
    if any(g not in index for g in w):
        raise ValueError("the word uses letters outside the generators")

    b = commutator_bound(xs, cs)
    per_step = 4 * cs.size_e * (b * b + 1)
    letters = [(index[g], g) for g in w]
    for m in range(1, len(xs) + 1):
        letters = _reorder_labelled(P, letters, m - 1, cs)
        word = _blocks(letters)
        blocks = sum(word.block_count(i) for i in range(m))
        if blocks > m * per_step:
            raise InvariantError(f"{blocks} blocks of the first {m} generators exceed {m * per_step}")

    word = _blocks(letters)
    if word.evaluate(P) != P.eval_word(w):
        raise InvariantError("reordering changed the value of the word")
    logger.debug("reordered a word of length %d into %d blocks", len(w), len(word))
    return word


class BoundedGenSequence(object):
    """
    A sequence `y_1..y_N` with `M = y_1^* ... y_N^*` for the monoid `M` generated by `x_1..x_n`.

    Attributes:
        generators (List[GroupElement]): The monoid generators.
        b (int): The commutator bound.
        e (int): `|G_0|`.
        K (int): `4ne(b^2+1)`.
        sequence (List[GroupElement]): The generators repeated K times.
    """
    def __init__(self, generators:Sequence[GroupElement], b:int, e:int):
        self.generators = list(generators)
        self.b = b
        self.e = e
        self.K = 4 * len(self.generators) * e * (b * b + 1)
        self.sequence = self.generators * self.K

    def __len__(self) -> int:
        return len(self.sequence)

    def __repr__(self) -> str:
        return f"BoundedGenSequence(n={len(self.generators)}, b={self.b}, e={self.e}, K={self.K})"

    def word(self, alpha:Sequence[int]) -> List[GroupElement]:
        """The generator word `y_1^{alpha_1} ... y_N^{alpha_N}`."""
        if len(alpha) != len(self.sequence):
            raise ValueError(f"expected {len(self.sequence)} exponents, got {len(alpha)}")
        return [y for y, a in zip(self.sequence, alpha) for _ in range(a)]

    def embed(self, word:BlockWord) -> List[int]:
        """
        Exponents along the sequence realizing a block word labelled with generator indices.

        Raises:
            ValueError: If the block word has more blocks than the sequence can absorb.
        """
        n = len(self.generators)
        alpha = [0] * len(self.sequence)
        position = 0
        for block in word:
            while position < len(alpha) and position % n != block.label:
                position += 1
            if position >= len(alpha):
                raise ValueError("the block word does not fit into the sequence")
            alpha[position] = block.exponent
            position += 1
        return alpha


def bounded_sequence(xs:Sequence[GroupElement], cs:CommutatorStructure) -> BoundedGenSequence:
    """
    Emit the pattern `(x_1, ..., x_n)` repeated `K = 4ne(b^2+1)` times.

    Example:
    ```python
    seq = bounded_sequence([x, y], commutator_structure(h3))
    seq.K, len(seq)   # (16, 32)
    ```
    """
    if not xs:
        raise ValueError("need at least one generator")
    cs.require_h1()
    seq = BoundedGenSequence(xs, commutator_bound(xs, cs), cs.size_e)
    logger.info("bounded generation: %r", seq)
    return seq
