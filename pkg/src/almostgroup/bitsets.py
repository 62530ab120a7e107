"""Integer bitmask helpers for subsets of ``range(n)``."""

from __future__ import annotations

from typing import Iterable, Sequence


def to_mask(states: Iterable[int]) -> int:
    mask = 0
    for q in states:
        mask |= 1 << q
    return mask


def from_mask(mask: int) -> frozenset[int]:
    out = []
    q = 0
    while mask:
        if mask & 1:
            out.append(q)
        mask >>= 1
        q += 1
    return frozenset(out)


def full_mask(n: int) -> int:
    return (1 << n) - 1


class MaskImage:
    """Maps a subset bitmask through a total map on states.

    Uses one 256-entry lookup table per byte of the mask, so an image costs
    ``ceil(n / 8)`` lookups regardless of the subset size.
    """

    __slots__ = ("tables", "chunks")

    def __init__(self, images: Sequence[int]):
        n = len(images)
        self.chunks = (n + 7) // 8
        self.tables = []
        for c in range(self.chunks):
            base = 8 * c
            width = min(8, n - base)
            table = [0] * 256
            for byte in range(1, 1 << width):
                low = byte & -byte
                bit = low.bit_length() - 1
                table[byte] = table[byte ^ low] | (1 << images[base + bit])
            self.tables.append(table)

    def __call__(self, mask: int) -> int:
        out = 0
        for table in self.tables:
            out |= table[mask & 0xFF]
            mask >>= 8
        return out
