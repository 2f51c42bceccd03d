"""Symmetric group combinatorics on one-line notation.

A permutation of {1..n} is a plain tuple (w(1), ..., w(n)).  The product
compose(u, v) is the function composition u after v.  Multiplying by the
adjacent transposition s_i on the right swaps positions i, i+1 of the word;
on the left it swaps the values i, i+1.

Standard parabolic subgroups are block products of smaller symmetric groups
and are described by a ParabolicShape, the tuple of block sizes.  Cosets
are represented throughout by their minimal-length representatives, never
by a separate coset type.
"""

from __future__ import annotations

import itertools
import math
from bisect import insort
from dataclasses import dataclass
from typing import Iterator

Perm = tuple[int, ...]


class NotComparable(ValueError):
    """The two permutations are not comparable in Bruhat order."""


class EmptyInterval(ValueError):
    """Requested the Bruhat interval [x, y] with x not below y."""


def identity(n: int) -> Perm:
    return tuple(range(1, n + 1))


def longest_element(n: int) -> Perm:
    return tuple(range(n, 0, -1))


def compose(u: Perm, v: Perm) -> Perm:
    """(u o v)(i) = u(v(i))."""
    return tuple(u[j - 1] for j in v)


def inverse(w: Perm) -> Perm:
    out = [0] * len(w)
    for i, val in enumerate(w):
        out[val - 1] = i + 1
    return tuple(out)


def length(w: Perm) -> int:
    """Inversion count of the one-line word."""
    n = len(w)
    inv = 0
    for i in range(n):
        wi = w[i]
        for j in range(i + 1, n):
            if wi > w[j]:
                inv += 1
    return inv


def parity(w: Perm) -> int:
    """(-1)**length(w)."""
    return -1 if length(w) % 2 else 1


def apply_s_right(w: Perm, i: int) -> Perm:
    """w * s_i: swap positions i, i+1 (1-based)."""
    return w[: i - 1] + (w[i], w[i - 1]) + w[i + 1 :]


def apply_s_left(w: Perm, i: int) -> Perm:
    """s_i * w: swap the values i, i+1 wherever they occur."""
    a = w.index(i)
    b = w.index(i + 1)
    out = list(w)
    out[a] = i + 1
    out[b] = i
    return tuple(out)


def right_descents(w: Perm) -> list[int]:
    return [i for i in range(1, len(w)) if w[i - 1] > w[i]]


def left_descents(w: Perm) -> list[int]:
    pos = inverse(w)
    return [i for i in range(1, len(w)) if pos[i - 1] > pos[i]]


def reduced_word(w: Perm) -> list[int]:
    """Indices i_1, ..., i_l with w = s_{i_1} * ... * s_{i_l}, l = length(w)."""
    word: list[int] = []
    cur = w
    n = len(w)
    while True:
        for i in range(1, n):
            if cur[i - 1] > cur[i]:
                cur = apply_s_right(cur, i)
                word.append(i)
                break
        else:
            break
    word.reverse()
    return word


def bruhat_leq(x: Perm, y: Perm) -> bool:
    """Bruhat order via the tableau criterion.

    x <= y iff for every i the increasing rearrangement of x(1..i) is
    entrywise at most that of y(1..i).
    """
    if len(x) != len(y):
        raise ValueError("permutations must have the same n")
    if x == y:
        return True
    n = len(x)
    xs: list[int] = []
    ys: list[int] = []
    for i in range(n - 1):
        insort(xs, x[i])
        insort(ys, y[i])
        for a, b in zip(xs, ys):
            if a > b:
                return False
    return True


def permutations_of(n: int) -> Iterator[Perm]:
    return itertools.permutations(range(1, n + 1))


def permutations_with_length(n: int) -> Iterator[tuple[Perm, int]]:
    """All of S_n as (word, length) pairs.

    Builds each permutation by inserting the largest value into a shorter
    one; placing n with p elements to its right adds p inversions, so the
    length comes for free instead of costing a quadratic scan per word.
    """
    if n < 1:
        yield (), 0
        return
    level: list[tuple[Perm, int]] = [((1,), 0)]
    for k in range(2, n):
        level = [(w[: k - 1 - p] + (k,) + w[k - 1 - p :], l + p)
                 for w, l in level for p in range(k)]
    if n == 1:
        yield from level
        return
    for w, l in level:
        for p in range(n):
            yield w[: n - 1 - p] + (n,) + w[n - 1 - p :], l + p


def enumerate_interval(x: Perm, y: Perm) -> set[Perm]:
    """All z with x <= z <= y.

    The lower cone of y is generated as the set of products of subwords of
    one reduced word for y, so the cost is proportional to the answer, not
    to n!.
    """
    if not bruhat_leq(x, y):
        raise EmptyInterval(f"{x} is not below {y}")
    lower: set[Perm] = {identity(len(y))}
    for i in reduced_word(y):
        lower |= {apply_s_right(z, i) for z in lower}
    return {z for z in lower if bruhat_leq(x, z)}


@dataclass(frozen=True)
class ParabolicShape:
    """Block sizes of a standard parabolic subgroup of S_n."""

    block_sizes: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "block_sizes", tuple(self.block_sizes))
        if not self.block_sizes or any(b < 1 for b in self.block_sizes):
            raise ValueError("block sizes must be positive integers")

    @property
    def n(self) -> int:
        return sum(self.block_sizes)

    def blocks(self) -> list[tuple[int, int]]:
        """Half-open 0-based position ranges of the blocks."""
        out = []
        start = 0
        for b in self.block_sizes:
            out.append((start, start + b))
            start += b
        return out

    def generator_indices(self) -> list[int]:
        """The i for which s_i lies in the subgroup (1-based)."""
        out = []
        for start, stop in self.blocks():
            out.extend(range(start + 1, stop))
        return out

    def size(self) -> int:
        return math.prod(math.factorial(b) for b in self.block_sizes)

    def longest(self) -> Perm:
        """The longest element: each block reversed in place."""
        word: list[int] = []
        for start, stop in self.blocks():
            word.extend(range(stop, start, -1))
        return tuple(word)

    def elements(self) -> Iterator[Perm]:
        """All members of the subgroup, as permutations of {1..n}."""
        per_block = [
            list(itertools.permutations(range(start + 1, stop + 1)))
            for start, stop in self.blocks()
        ]
        for combo in itertools.product(*per_block):
            yield tuple(itertools.chain.from_iterable(combo))


def min_coset_rep(w: Perm, shape: ParabolicShape) -> Perm:
    """Shortest element of w * W_shape: sort values inside each block."""
    if len(w) != shape.n:
        raise ValueError("shape does not match the permutation")
    out: list[int] = []
    for start, stop in shape.blocks():
        out.extend(sorted(w[start:stop]))
    return tuple(out)


def min_left_coset_rep(w: Perm, shape: ParabolicShape) -> Perm:
    """Shortest element of W_shape * w."""
    return inverse(min_coset_rep(inverse(w), shape))


def min_double_coset_rep(w: Perm, left: ParabolicShape, right: ParabolicShape) -> Perm:
    """Shortest element of W_left * w * W_right, by alternating descents."""
    cur = w
    while True:
        nxt = min_left_coset_rep(min_coset_rep(cur, right), left)
        if nxt == cur:
            return cur
        cur = nxt


def is_quotient_minimal(w: Perm, shape: ParabolicShape) -> bool:
    """Whether w is the minimal representative of w * W_shape."""
    return all(
        w[i] < w[i + 1] for start, stop in shape.blocks() for i in range(start, stop - 1)
    )


def replicate_perm(x: Perm, m: int) -> Perm:
    """The block permutation sending block i of size m onto block x(i).

    The result is the minimal coset representative of the block-replication
    of x inside S_{m*len(x)}, with length m**2 * length(x).
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    word: list[int] = []
    for target in x:
        base = (target - 1) * m
        word.extend(range(base + 1, base + m + 1))
    return tuple(word)


def is_pattern_avoiding(w: Perm, pattern: Perm) -> bool:
    """True iff no subsequence of w is ordered like the pattern."""
    p = len(pattern)
    if p > len(w):
        return True
    rank = tuple(sorted(range(p), key=lambda i: pattern[i]))
    want = [0] * p
    for r, i in enumerate(rank):
        want[i] = r
    for positions in itertools.combinations(range(len(w)), p):
        vals = [w[i] for i in positions]
        order = sorted(range(p), key=lambda i: vals[i])
        got = [0] * p
        for r, i in enumerate(order):
            got[i] = r
        if got == want:
            return False
    return True
