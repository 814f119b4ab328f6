"""Words over a marked generating set.

A word is a plain ``tuple`` of non-zero ints: generator ``i`` is the letter
``i + 1`` and its inverse is ``-(i + 1)``.  Strings use ``a, b, c, ...`` for
generators and capitals for inverses; an integer after a letter is an
exponent (``a10`` is ten ``a``'s, ``b-2`` is ``BB``).
"""
from __future__ import annotations

import re
from typing import Iterable, NamedTuple, Sequence

from .errors import InputError

Word = tuple  # tuple[int, ...]

IDENTITY: Word = ()

_TOKEN = re.compile(r"([A-Za-z])\^?(-?\d+)?")


class Generator(NamedTuple):
    index: int
    sign: int

    @property
    def code(self) -> int:
        return self.sign * (self.index + 1)

    @classmethod
    def from_code(cls, code: int) -> "Generator":
        if code == 0:
            raise InputError("letter code 0 is not a generator")
        return cls(abs(code) - 1, 1 if code > 0 else -1)


def letter_order(rank: int) -> list[int]:
    """Fixed generator order used for BFS and shortlex: a, A, b, B, ..."""
    out = []
    for i in range(1, rank + 1):
        out += [i, -i]
    return out


def invert(w: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(w))


def free_reduce(w: Iterable[int]) -> Word:
    out: list[int] = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def concat_reduced(x: Word, y: Word) -> Word:
    """Product of two freely reduced words, reduced."""
    k = 0
    n = min(len(x), len(y))
    lx = len(x)
    while k < n and x[lx - 1 - k] == -y[k]:
        k += 1
    return x[: lx - k] + y[k:]


def common_prefix(x: Sequence[int], y: Sequence[int]) -> int:
    n = min(len(x), len(y))
    k = 0
    while k < n and x[k] == y[k]:
        k += 1
    return k


_ALPHABETS: dict = {}


def check_letters(w: Iterable[int], rank: int) -> Word:
    w = tuple(w)
    alpha = _ALPHABETS.get(rank)
    if alpha is None:
        alpha = _ALPHABETS[rank] = frozenset(letter_order(rank))
    if alpha.issuperset(w) and not any(isinstance(x, bool) for x in w[:1]):
        return w
    for x in w:
        if not isinstance(x, (int,)) or x == 0 or abs(x) > rank:
            raise InputError(f"letter {x!r} is not a generator of a rank-{rank} model")
    return w


def parse_word(text: str, rank: int | None = None) -> Word:
    """Parse ``'aB'``, ``'a10 b-2'`` or ``'1'`` (identity)."""
    s = text.strip().replace(" ", "").replace("*", "").replace(".", "")
    if s in ("", "1", "e()", "()"):
        return IDENTITY
    out: list[int] = []
    pos = 0
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if m is None:
            raise InputError(f"cannot parse word {text!r} at position {pos}")
        ch, exp = m.group(1), m.group(2)
        code = ord(ch.lower()) - ord("a") + 1
        if ch.isupper():
            code = -code
        k = int(exp) if exp is not None else 1
        if k < 0:
            code, k = -code, -k
        out.extend([code] * k)
        pos = m.end()
    if rank is not None:
        check_letters(out, rank)
    return tuple(out)


def format_word(w: Sequence[int]) -> str:
    if not w:
        return "1"
    return "".join(
        chr(ord("a") + x - 1) if x > 0 else chr(ord("A") - x - 1) for x in w
    )
