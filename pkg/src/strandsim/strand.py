"""The shared strand: a fixed-length array of tri-state cells.

Each cell is Empty, 0 or 1. The only legal transitions are a write
(Empty -> v, by a v-writer) and an erase (v -> Empty, by a v-eraser);
a cell never flips directly between 0 and 1. All mutation goes through
``try_write`` / ``try_erase`` so that legality is enforced at a single
choke point, and zero/one/empty tallies are maintained incrementally.
"""

from __future__ import annotations

import numpy as np

EMPTY = -1
ZERO = 0
ONE = 1

_CHARS = {EMPTY: "V", ZERO: "0", ONE: "1"}
_STATES = {"V": EMPTY, "0": ZERO, "1": ONE}


def complement(v: int) -> int:
    """The other binary mark: complement(0) == 1 and complement(1) == 0."""
    if v not in (ZERO, ONE):
        raise ValueError(f"not a binary mark: {v!r}")
    return 1 - v


class Strand:
    """A length-N sequence of cells, each Empty (V), 0 or 1.

    The length is fixed at construction and every cell starts Empty
    unless built via ``from_text``. Instances are mutated in place by a
    single owner; concurrent use requires external coordination.
    """

    __slots__ = ("cells", "_zeros", "_ones", "_empties", "erase_count")

    def __init__(self, n: int):
        if n < 2:
            raise ValueError(f"strand needs at least 2 cells, got {n}")
        self.cells = np.full(n, EMPTY, dtype=np.int8)
        self._zeros = 0
        self._ones = 0
        self._empties = n
        self.erase_count = 0

    @classmethod
    def from_text(cls, text: str) -> "Strand":
        """Build a strand from its serialized form, e.g. ``"10V1"``."""
        strand = cls(len(text))
        for i, ch in enumerate(text):
            try:
                strand.cells[i] = _STATES[ch]
            except KeyError:
                raise ValueError(f"bad cell character {ch!r} at index {i}") from None
        strand._empties = int(np.count_nonzero(strand.cells == EMPTY))
        strand._zeros = int(np.count_nonzero(strand.cells == ZERO))
        strand._ones = int(np.count_nonzero(strand.cells == ONE))
        return strand

    def to_text(self) -> str:
        return "".join(_CHARS[int(c)] for c in self.cells)

    def __len__(self) -> int:
        return len(self.cells)

    def __eq__(self, other) -> bool:
        return isinstance(other, Strand) and np.array_equal(self.cells, other.cells)

    def __repr__(self) -> str:
        return f"Strand({self.to_text()!r})"

    def copy(self) -> "Strand":
        dup = Strand.__new__(Strand)
        dup.cells = self.cells.copy()
        dup._zeros = self._zeros
        dup._ones = self._ones
        dup._empties = self._empties
        dup.erase_count = self.erase_count
        return dup

    def _check_index(self, index: int) -> None:
        if not 0 <= index < len(self.cells):
            raise IndexError(f"cell index {index} out of range [0, {len(self.cells)})")

    def try_write(self, index: int, v: int) -> bool:
        """Write mark v into the cell if it is Empty.

        Returns True when the write happened. An occupied cell is left
        untouched: a 0/1 cell can never flip to the other mark here.
        """
        self._check_index(index)
        if v not in (ZERO, ONE):
            raise ValueError(f"not a binary mark: {v!r}")
        if self.cells[index] != EMPTY:
            return False
        self.cells[index] = v
        self._empties -= 1
        if v == ONE:
            self._ones += 1
        else:
            self._zeros += 1
        return True

    def try_erase(self, index: int, v: int) -> bool:
        """Erase the cell if it holds mark v; a v-eraser never removes 1-v."""
        self._check_index(index)
        if v not in (ZERO, ONE):
            raise ValueError(f"not a binary mark: {v!r}")
        if self.cells[index] != v:
            return False
        self.cells[index] = EMPTY
        self._empties += 1
        if v == ONE:
            self._ones -= 1
        else:
            self._zeros -= 1
        self.erase_count += 1
        return True

    def census(self) -> tuple[int, int, int]:
        """(zeros, ones, empties); the three always sum to N."""
        return self._zeros, self._ones, self._empties

    def count_collisions(self) -> int:
        """Number of adjacent pairs holding different non-empty marks.

        A pair separated by an Empty cell is not a collision.
        """
        c = self.cells
        left, right = c[:-1], c[1:]
        return int(np.count_nonzero((left != EMPTY) & (right != EMPTY) & (left != right)))

    def consensus_value(self) -> int | None:
        """The common mark if every cell holds it, else None."""
        if self._empties > 0:
            return None
        if self._zeros == 0:
            return ONE
        if self._ones == 0:
            return ZERO
        return None


def new_strand(n: int) -> Strand:
    """An all-Empty strand of n cells (n >= 2)."""
    return Strand(n)
