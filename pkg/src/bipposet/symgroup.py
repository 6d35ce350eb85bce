"""Symmetric group combinatorics in one-line notation.

Permutations act on ``{1, ..., n}``.  Composition is right-to-left:
``(u * t)(k) == u(t(k))``, so multiplying by a transposition on the right
swaps two *positions* of the one-line word.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence


class SizeMismatchError(ValueError):
    """Two permutations from different symmetric groups were combined."""


class EmptyIntervalError(ValueError):
    """A Bruhat interval ``[u, w]`` was requested with ``u`` not below ``w``."""


@dataclass(frozen=True, order=True)
class Permutation:
    oneline: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.oneline) != list(range(1, len(self.oneline) + 1)):
            raise ValueError(f"not a permutation of 1..n: {self.oneline!r}")

    @classmethod
    def parse(cls, text: str | Sequence[int] | Permutation) -> Permutation:
        """Parse ``"3412"`` (n <= 9) or ``"3,4,1,2"`` / ``"3 4 1 2"``."""
        if isinstance(text, Permutation):
            return text
        if not isinstance(text, str):
            return cls(tuple(int(x) for x in text))
        text = text.strip()
        if "," in text or " " in text:
            parts = [p for p in text.replace(",", " ").split() if p]
            return cls(tuple(int(p) for p in parts))
        return cls(tuple(int(ch) for ch in text))

    @property
    def n(self) -> int:
        return len(self.oneline)

    def __call__(self, k: int) -> int:
        return self.oneline[k - 1]

    def __str__(self) -> str:
        if self.n <= 9:
            return "".join(map(str, self.oneline))
        return ",".join(map(str, self.oneline))

    def __repr__(self) -> str:
        return f"Permutation({str(self)!r})"

    def __mul__(self, other: Permutation) -> Permutation:
        return compose(self, other)

    def inverse(self) -> Permutation:
        inv = [0] * self.n
        for pos, val in enumerate(self.oneline, start=1):
            inv[val - 1] = pos
        return Permutation(tuple(inv))

    def length(self) -> int:
        return length(self)


@dataclass(frozen=True, order=True)
class Transposition:
    """The transposition exchanging ``i`` and ``j`` (``1 <= i < j``)."""

    i: int
    j: int

    def __post_init__(self) -> None:
        if not 1 <= self.i < self.j:
            raise ValueError(f"transposition needs 1 <= i < j, got ({self.i}, {self.j})")

    def as_permutation(self, n: int) -> Permutation:
        if self.j > n:
            raise SizeMismatchError(f"({self.i},{self.j}) does not live in S_{n}")
        word = list(range(1, n + 1))
        word[self.i - 1], word[self.j - 1] = word[self.j - 1], word[self.i - 1]
        return Permutation(tuple(word))

    def to_list(self) -> list[int]:
        return [self.i, self.j]


def identity(n: int) -> Permutation:
    return Permutation(tuple(range(1, n + 1)))


def longest(n: int) -> Permutation:
    return Permutation(tuple(range(n, 0, -1)))


def all_permutations(n: int) -> list[Permutation]:
    return [Permutation(p) for p in itertools.permutations(range(1, n + 1))]


def _check_same_n(u: Permutation, w: Permutation) -> None:
    if u.n != w.n:
        raise SizeMismatchError(f"{u} is in S_{u.n} but {w} is in S_{w.n}")


def compose(u: Permutation, t: Permutation) -> Permutation:
    _check_same_n(u, t)
    return Permutation(tuple(u.oneline[k - 1] for k in t.oneline))


def swap_positions(u: Permutation, i: int, j: int) -> Permutation:
    """``u * (i j)``: exchange the entries in positions ``i`` and ``j``."""
    word = list(u.oneline)
    word[i - 1], word[j - 1] = word[j - 1], word[i - 1]
    return Permutation(tuple(word))


def length(w: Permutation) -> int:
    """Coxeter length, i.e. the number of inversions."""
    word = w.oneline
    return sum(1 for a, b in itertools.combinations(word, 2) if a > b)


def vertex_vector(w: Permutation) -> tuple[int, ...]:
    """The point ``(w^-1(1), ..., w^-1(n))`` of the Bruhat interval polytope."""
    return w.inverse().oneline


def bruhat_leq(u: Permutation, w: Permutation) -> bool:
    """Bruhat comparison by the rank-matrix criterion.

    ``u <= w`` iff for every prefix length ``i`` and threshold ``k`` the
    number of entries ``>= k`` among the first ``i`` entries of ``u`` is at
    most the corresponding count for ``w``.
    """
    _check_same_n(u, w)
    n = u.n
    cu = [0] * (n + 2)
    cw = [0] * (n + 2)
    for i in range(n):
        # cu[k] counts prefix entries >= k
        for k in range(1, u.oneline[i] + 1):
            cu[k] += 1
        for k in range(1, w.oneline[i] + 1):
            cw[k] += 1
        for k in range(1, n + 1):
            if cu[k] > cw[k]:
                return False
    return True


def bruhat_lower_covers(w: Permutation) -> Iterator[Permutation]:
    """All ``z`` with ``z * t == w`` and ``length(z) == length(w) - 1``."""
    word = w.oneline
    n = w.n
    for i in range(n):
        for j in range(i + 1, n):
            if word[i] > word[j] and not any(
                word[j] < word[k] < word[i] for k in range(i + 1, j)
            ):
                yield swap_positions(w, i + 1, j + 1)


def bruhat_interval(u: Permutation, w: Permutation) -> frozenset[Permutation]:
    """All ``z`` with ``u <= z <= w`` in Bruhat order."""
    _check_same_n(u, w)
    if not bruhat_leq(u, w):
        raise EmptyIntervalError(f"{u} is not below {w} in Bruhat order")
    seen = {w}
    frontier = [w]
    while frontier:
        nxt = []
        for z in frontier:
            for y in bruhat_lower_covers(z):
                if y not in seen and bruhat_leq(u, y):
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(seen)


def cover_transposition(u: Permutation, v: Permutation) -> Transposition | None:
    """The transposition ``t`` with ``v == u * t`` if ``u`` is covered by ``v``."""
    _check_same_n(u, v)
    moved = [k for k in range(1, u.n + 1) if u(k) != v(k)]
    if len(moved) != 2:
        return None
    i, j = moved
    if u(i) != v(j) or u(j) != v(i):
        return None
    if length(v) != length(u) + 1:
        return None
    return Transposition(i, j)


def right_descents(w: Permutation) -> frozenset[int]:
    return frozenset(i for i in range(1, w.n) if w(i) > w(i + 1))


descents = right_descents


def is_grassmannian(w: Permutation) -> bool:
    return len(descents(w)) <= 1


@lru_cache(maxsize=None)
def _reduced_words(word: tuple[int, ...]) -> frozenset[tuple[int, ...]]:
    w = Permutation(word)
    desc = right_descents(w)
    if not desc:
        return frozenset({()})
    out = set()
    for i in desc:
        for prefix in _reduced_words(swap_positions(w, i, i + 1).oneline):
            out.add(prefix + (i,))
    return frozenset(out)


def reduced_words(w: Permutation) -> frozenset[tuple[int, ...]]:
    """All reduced words ``(i_1, ..., i_l)`` with ``w = s_{i_1} ... s_{i_l}``."""
    return _reduced_words(w.oneline)


def word_to_permutation(word: Iterable[int], n: int) -> Permutation:
    w = identity(n)
    for i in word:
        w = swap_positions(w, i, i + 1)
    return w


def support(w: Permutation) -> frozenset[int]:
    """Simple reflections occurring in (every) reduced word of ``w``.

    ``s_i`` occurs iff ``w`` does not stabilise ``{1, ..., i}``.
    """
    out = set()
    running_max = 0
    for i in range(1, w.n):
        running_max = max(running_max, w(i))
        if running_max > i:
            out.add(i)
    return frozenset(out)
