"""Thue-Morse sign sequence, its periodic truncations, blocks, and the
block-decomposition parser.

All functions are pure.  epsilon(n) is the +-1 Thue-Morse sequence
(parity of binary ones); block(k) is its prefix of length 2^k and
satisfies block(k+1) = block(k) + negated block(k).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import ResourceLimitError

__all__ = [
    "epsilon",
    "f_periodic",
    "block",
    "parse_blocks",
    "BlockDecomposition",
]

_MAX_BLOCK_ORDER = 30


def epsilon(n: int) -> int:
    """+1 if n has an even number of binary ones, else -1."""
    if n < 0:
        raise ValueError("epsilon is defined on nonnegative integers")
    return -1 if n.bit_count() & 1 else 1


def f_periodic(k: int, n: int) -> int:
    """The 2^k-periodic truncation: epsilon(n mod 2^k).

    Accepts any integer n; the representative is taken in [0, 2^k).
    """
    if k < 0:
        raise ValueError("period exponent must be nonnegative")
    return epsilon(n & ((1 << k) - 1))


@lru_cache(maxsize=None)
def _block(k: int) -> tuple:
    if k == 0:
        return (1,)
    prev = _block(k - 1)
    return prev + tuple(-s for s in prev)


def block(k: int) -> list:
    """The sign block (epsilon(0), ..., epsilon(2^k - 1))."""
    if k < 0:
        raise ValueError("block order must be nonnegative")
    if k > _MAX_BLOCK_ORDER:
        raise ResourceLimitError(f"block order {k} exceeds {_MAX_BLOCK_ORDER}")
    return list(_block(k))


@dataclass(frozen=True)
class BlockDecomposition:
    """Parse of a sign prefix into signed blocks kappa_i * B_{k_i}.

    entries is a list of (kappa, k) pairs; consumed_len is the total
    length covered (a trailing remainder that does not complete a block
    at the parser's current level is left unconsumed).
    """

    entries: tuple
    consumed_len: int

    def expand(self) -> list:
        out = []
        for kappa, k in self.entries:
            out.extend(kappa * s for s in _block(k))
        return out


def parse_blocks(signs: list) -> BlockDecomposition:
    """Deterministic left-to-right block parse of a +-1 sequence.

    The parser tiles the input into signed copies of B_k, starting at
    k = 0.  Whenever a tile +B_k is immediately followed by -B_k, the
    pair is a copy of B_{k+1}: tiles before that point are emitted at
    level k and parsing continues at level k+1 from the pair.  Levels
    therefore never decrease.  Parsing stops at the first position that
    is not a signed copy of the current block (or at a trailing partial
    tile); consumed_len reports how far it got.
    """
    if not signs:
        raise ValueError("parse_blocks requires a non-empty sequence")
    if any(s not in (1, -1) for s in signs):
        raise ValueError("signs must be +1 or -1")

    total = len(signs)
    entries = []
    k = 0
    pos = 0
    while True:
        width = 1 << k
        base = _block(k)
        neg = tuple(-s for s in base)
        deltas = []
        p = pos
        while p + width <= total:
            chunk = tuple(signs[p:p + width])
            if chunk == base:
                deltas.append(1)
            elif chunk == neg:
                deltas.append(-1)
            else:
                break
            p += width
        upgrade = None
        for i in range(len(deltas) - 1):
            if deltas[i] == 1 and deltas[i + 1] == -1:
                upgrade = i
                break
        if upgrade is None:
            entries.extend((d, k) for d in deltas)
            pos += len(deltas) * width
            return BlockDecomposition(tuple(entries), pos)
        entries.extend((d, k) for d in deltas[:upgrade])
        pos += upgrade * width
        k += 1
