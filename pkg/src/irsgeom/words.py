"""Reduced words in a free group.

A word is a tuple of nonzero ints: ``i`` stands for the i-th generator and
``-i`` for its inverse.  The string form uses ``a, b, c, ...`` for generators
and upper case for inverses, with ``1`` for the empty word.
"""

from __future__ import annotations

import math
import random
from typing import Iterable, Iterator, Sequence

Word = tuple

_LETTERS = "abcdefghijklmnopqrstuvwxyz"


def reduce_word(w: Iterable[int]) -> Word:
    out: list[int] = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def inverse(w: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(w))


def multiply(*words: Sequence[int]) -> Word:
    out: list[int] = []
    for w in words:
        for x in w:
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
    return tuple(out)


def power(w: Sequence[int], n: int) -> Word:
    if n < 0:
        return power(inverse(w), -n)
    if n == 0 or not w:
        return ()
    u, c = cyclic_decomposition(w)
    return u + c * n + inverse(u)


def is_reduced(w: Sequence[int]) -> bool:
    return all(w[i] != -w[i + 1] for i in range(len(w) - 1)) and 0 not in w


def is_cyclically_reduced(w: Sequence[int]) -> bool:
    return is_reduced(w) and (len(w) < 2 or w[0] != -w[-1])


def cyclic_decomposition(w: Sequence[int]) -> tuple[Word, Word]:
    """Split a reduced word as ``u c u^-1`` with ``c`` cyclically reduced."""
    w = tuple(w)
    i, j = 0, len(w) - 1
    while i < j and w[i] == -w[j]:
        i += 1
        j -= 1
    return w[:i], w[i:j + 1]


def conjugate(w: Sequence[int], g: Sequence[int]) -> Word:
    """Return ``g w g^-1``."""
    return multiply(g, w, inverse(g))


def common_prefix_length(u: Sequence[int], v: Sequence[int]) -> int:
    n = min(len(u), len(v))
    for i in range(n):
        if u[i] != v[i]:
            return i
    return n


def primitive_root(w: Sequence[int]) -> Word:
    """Shortest ``r`` with ``w == r * k`` as sequences."""
    w = tuple(w)
    n = len(w)
    for p in range(1, n + 1):
        if n % p == 0 and w[:p] * (n // p) == w:
            return w[:p]
    return w


def letters(rank: int) -> list[int]:
    """Generators and inverses in shortlex order ``a < A < b < B < ...``."""
    out = []
    for i in range(1, rank + 1):
        out += [i, -i]
    return out


def letter_key(x: int) -> tuple[int, int]:
    return (abs(x), 0 if x > 0 else 1)


def shortlex_key(w: Sequence[int]) -> tuple:
    return (len(w), tuple(letter_key(x) for x in w))


def reduced_words(rank: int, length: int) -> Iterator[Word]:
    """All reduced words of exactly ``length`` letters, in shortlex order."""
    alphabet = letters(rank)

    def extend(prefix: tuple):
        if len(prefix) == length:
            yield prefix
            return
        for x in alphabet:
            if prefix and prefix[-1] == -x:
                continue
            yield from extend(prefix + (x,))

    yield from extend(())


def ball(rank: int, radius: int) -> list[Word]:
    out: list[Word] = []
    for n in range(radius + 1):
        out.extend(reduced_words(rank, n))
    return out


def ball_size(rank: int, radius: int) -> int:
    k = 2 * rank
    return 1 + sum(k * (k - 1) ** (n - 1) for n in range(1, radius + 1))


def random_reduced_word(rng: random.Random, rank: int, length: int) -> Word:
    alphabet = letters(rank)
    out: list[int] = []
    while len(out) < length:
        x = rng.choice(alphabet)
        if out and out[-1] == -x:
            continue
        out.append(x)
    return tuple(out)


def format_word(w: Sequence[int]) -> str:
    if not w:
        return "1"
    return "".join(_LETTERS[abs(x) - 1] if x > 0 else _LETTERS[abs(x) - 1].upper() for x in w)


def parse_word(s: str) -> Word:
    """Parse ``"abA"``-style strings; ``"1"``, ``"e"`` and ``""`` are the identity.

    ``x^-1`` and ``x^n`` suffixes are accepted for single letters.
    """
    s = s.strip()
    if s in ("", "1", "e"):
        return ()
    out: list[int] = []
    i = 0
    while i < len(s):
        ch = s[i]
        if ch.isspace() or ch == "*":
            i += 1
            continue
        if ch.lower() not in _LETTERS:
            raise ValueError(f"bad letter {ch!r} in {s!r}")
        x = _LETTERS.index(ch.lower()) + 1
        if ch.isupper():
            x = -x
        i += 1
        exp = 1
        if i < len(s) and s[i] == "^":
            j = i + 1
            if j < len(s) and s[j] in "+-":
                j += 1
            k = j
            while k < len(s) and s[k].isdigit():
                k += 1
            exp = int(s[i + 1:k])
            i = k
        out.extend([x] * exp if exp >= 0 else [-x] * (-exp))
    return reduce_word(out)


def lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)
