"""Uniform sampling from agreement-consistent hypothesis sets.

Given queried points x^1..x^t and their observed agreement counts u^1..u^t,
the consistent set is every z with agreement(z, x^i) = u^i for all i.  The
samplers here enumerate that set exhaustively (the enumeration is the
correctness oracle, not an approximation) and draw from it with a single
uniform index, which makes the draw exactly uniform rather than
approximately so.  Enumeration is bounded at dimension 24; beyond that the
operations fail loudly instead of degrading.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bitcore import BitString, differing_positions

__all__ = [
    "ExactEnumerationUnavailable",
    "ConsistencyQuery",
    "consistent_set",
    "choose_consistent",
    "choose_consistent_sub",
    "ENUMERATION_DIM_LIMIT",
]

ENUMERATION_DIM_LIMIT = 24


class ExactEnumerationUnavailable(ValueError):
    """The requested exact enumeration exceeds the supported dimension."""


@dataclass(frozen=True)
class ConsistencyQuery:
    """Observed points and agreement values constraining the hidden string."""

    dim: int
    points: tuple[BitString, ...] = ()
    values: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise ValueError(f"dim must be positive, got {self.dim}")
        if len(self.points) != len(self.values):
            raise ValueError(
                f"{len(self.points)} points vs {len(self.values)} values"
            )
        for p in self.points:
            if p.n != self.dim:
                raise ValueError(f"point length {p.n} != dim {self.dim}")
        for u in self.values:
            if not 0 <= u <= self.dim:
                raise ValueError(f"value {u} outside 0..{self.dim}")


def _require_enumerable(dim: int) -> None:
    if dim > ENUMERATION_DIM_LIMIT:
        raise ExactEnumerationUnavailable(
            f"dimension {dim} exceeds enumeration limit {ENUMERATION_DIM_LIMIT}"
        )


def consistent_words(dim: int, point_words, values) -> np.ndarray:
    """All words z with agreement(z, x_i) = u_i for every constraint, ascending.

    Agreement is dim minus Hamming distance, so the filter keeps z with
    popcount(z ^ x_i) == dim - u_i.  Constraints are applied incrementally;
    the survivor array shrinks fast for informative constraints.
    """
    _require_enumerable(dim)
    z = np.arange(1 << dim, dtype=np.uint32)
    for x, u in zip(point_words, values):
        z = z[np.bitwise_count(z ^ np.uint32(x)) == np.uint32(dim - u)]
        if z.size == 0:
            break
    return z


def consistent_set(q: ConsistencyQuery) -> set[BitString]:
    """The exact consistent set for the query, as a set of bitstrings."""
    words = consistent_words(q.dim, [p.word for p in q.points], q.values)
    return {BitString(q.dim, int(w)) for w in words}


def choose_consistent_word(
    dim: int, point_words, values, rng: np.random.Generator
) -> tuple[int, int]:
    """Uniform consistent word, or uniform over all words if none is consistent.

    Returns (word, draw) where draw records the uniform index or fallback word.
    """
    survivors = consistent_words(dim, point_words, values)
    if survivors.size == 0:
        word = int.from_bytes(rng.bytes((dim + 7) // 8), "little") & ((1 << dim) - 1)
        return word, word
    idx = int(rng.integers(survivors.size))
    return int(survivors[idx]), idx


def choose_consistent(q: ConsistencyQuery, rng: np.random.Generator) -> BitString:
    """Uniform draw from consistent_set(q); uniform over {0,1}^dim if empty."""
    word, _ = choose_consistent_word(q.dim, [p.word for p in q.points], q.values, rng)
    return BitString(q.dim, word)


def project_word(word: int, positions) -> int:
    """Compress the bits of ``word`` at ``positions`` into a small word."""
    out = 0
    for j, p in enumerate(positions):
        if (word >> p) & 1:
            out |= 1 << j
    return out


def embed_word(small: int, positions, base: int) -> int:
    """Write the bits of ``small`` into ``base`` at ``positions``."""
    out = base
    for j, p in enumerate(positions):
        if (small >> j) & 1:
            out |= 1 << p
        else:
            out &= ~(1 << p)
    return out


def choose_consistent_sub_word(
    n: int,
    point_words,
    values,
    anchor_lo: int,
    anchor_hi: int,
    rng: np.random.Generator,
) -> tuple[int, int, tuple[int, ...]]:
    """Block-restricted consistent draw; the block is where the anchors differ.

    The anchors must agree outside the block and every history point must
    agree with them there; the values are block-level agreement counts.
    Returns (word, block_draw, block_positions); the output always carries the
    anchors' bits outside the block.
    """
    block = tuple(int(p) for p in differing_positions(anchor_lo, anchor_hi, n))
    ell = len(block)
    _require_enumerable(ell)
    block_mask = 0
    for p in block:
        block_mask |= 1 << p
    outside = anchor_lo & ~block_mask
    proj_points = []
    for w in point_words:
        if w & ~block_mask & ((1 << n) - 1) != outside:
            raise ValueError("history point disagrees with the anchors outside the block")
        proj_points.append(project_word(w, block))
    for u in values:
        if not 0 <= u <= ell:
            raise ValueError(f"block value {u} outside 0..{ell}")
    small, draw = choose_consistent_word(ell, proj_points, values, rng) if ell else (0, 0)
    return outside | embed_word(small, block, 0), draw, block


def choose_consistent_sub(
    block: tuple[int, ...] | frozenset,
    history: list[tuple[BitString, int]],
    anchor_pair: tuple[BitString, BitString],
    rng: np.random.Generator,
) -> BitString:
    """Uniform block-level consistent draw embedded in the anchors' suffix.

    ``block`` must be exactly the positions where the two anchors differ;
    ``history`` pairs each observed point with its block-level agreement
    count (any shared offset already subtracted by the caller).
    """
    a_lo, a_hi = anchor_pair
    if a_lo.n != a_hi.n:
        raise ValueError(f"length mismatch: {a_lo.n} != {a_hi.n}")
    actual = tuple(int(p) for p in differing_positions(a_lo.word, a_hi.word, a_lo.n))
    if tuple(sorted(block)) != actual:
        raise ValueError("block is not the set of positions where the anchors differ")
    word, _, _ = choose_consistent_sub_word(
        a_lo.n,
        [p.word for p, _ in history],
        [u for _, u in history],
        a_lo.word,
        a_hi.word,
        rng,
    )
    return BitString(a_lo.n, word)
