"""Marked group models: normal forms, products and word length.

Every model stores elements as ``Word`` tuples in a canonical normal form,
so equality of elements is equality of tuples.  Normal forms are always
geodesic words, which lets the rest of the library read a geodesic
``[o, g o]`` straight off the normal form of ``g``.
"""
from __future__ import annotations

import hashlib
from fractions import Fraction
import itertools
from collections import deque
from typing import Iterable, Sequence

from .errors import InputError, ModelMismatch, RangeExceeded
from .words import (
    IDENTITY,
    Word,
    check_letters,
    common_prefix,
    concat_reduced,
    format_word,
    free_reduce,
    invert as invert_word,
    letter_order,
    parse_word,
)


def letter_key(x: int) -> int:
    """Position of a letter in the order a < A < b < B < ..."""
    return 2 * (abs(x) - 1) + (0 if x > 0 else 1)


def shortlex_key(w: Sequence[int]):
    return (len(w), tuple(letter_key(x) for x in w))


class GroupModel:
    family = "abstract"
    is_tree = False

    def __init__(self, rank: int):
        if not isinstance(rank, int) or rank < 1:
            raise InputError(f"rank must be a positive integer, got {rank!r}")
        self.rank = rank
        self.letters = tuple(letter_order(rank))

    # -- identity and hashing -------------------------------------------
    def spec_string(self) -> str:
        return f"{self.family}:{self.rank}"

    def model_hash(self) -> bytes:
        return hashlib.sha256(self.spec_string().encode()).digest()

    def __eq__(self, other):
        return isinstance(other, GroupModel) and self.spec_string() == other.spec_string()

    def __hash__(self):
        return hash(self.spec_string())

    def __repr__(self):
        return f"<{type(self).__name__} {self.spec_string()}>"

    # -- element input ----------------------------------------------------
    def word(self, w) -> Word:
        """Coerce a string or letter sequence into a normal form."""
        if isinstance(w, str):
            w = parse_word(w, self.rank)
        return self.normalize(w)

    def check(self, w: Iterable[int]) -> Word:
        return check_letters(w, self.rank)

    def same_model(self, other: "GroupModel"):
        if other != self:
            raise ModelMismatch(f"model mismatch: {self} vs {other}")

    # -- group operations ---------------------------------------------------
    def normalize(self, w: Iterable[int]) -> Word:
        raise NotImplementedError

    def multiply(self, x: Word, y: Word) -> Word:
        return self.normalize(tuple(x) + tuple(y))

    def invert(self, x: Word) -> Word:
        return self.normalize(invert_word(x))

    def power(self, x: Word, k: int) -> Word:
        base = x if k >= 0 else self.invert(x)
        out = IDENTITY
        for _ in range(abs(k)):
            out = self.multiply(out, base)
        return out

    def word_length(self, x: Word) -> int:
        return len(self.normalize(x))

    def distance(self, x: Word, y: Word) -> int:
        return self.word_length(self.multiply(self.invert(x), y))

    def equal(self, x, y) -> bool:
        return self.normalize(x) == self.normalize(y)

    def commutes(self, x: Word, y: Word) -> bool:
        return self.multiply(x, y) == self.multiply(y, x)

    def geodesic_word(self, x: Word) -> Word:
        """A geodesic spelling of ``x``; normal forms are geodesic."""
        return self.normalize(x)

    def format(self, x: Word) -> str:
        return format_word(x)


class FreeGroup(GroupModel):
    family = "free"
    is_tree = True

    def normalize(self, w):
        return free_reduce(self.check(w))

    def multiply(self, x, y):
        return concat_reduced(self.normalize(x), self.normalize(y))

    def invert(self, x):
        return invert_word(self.normalize(x))

    def distance(self, x, y):
        x = self.normalize(x)
        y = self.normalize(y)
        return len(x) + len(y) - 2 * common_prefix(x, y)


class FreeAbelianGroup(GroupModel):
    """Z^r; normal form lists the a-letters, then the b-letters, and so on."""

    family = "free-abelian"

    def exponents(self, w) -> tuple:
        vec = [0] * self.rank
        for x in self.check(w):
            vec[abs(x) - 1] += 1 if x > 0 else -1
        return tuple(vec)

    def from_exponents(self, vec: Sequence[int]) -> Word:
        if len(vec) != self.rank:
            raise InputError(f"exponent vector must have length {self.rank}")
        out = []
        for i, e in enumerate(vec):
            out.extend([(i + 1) if e > 0 else -(i + 1)] * abs(int(e)))
        return tuple(out)

    def normalize(self, w):
        return self.from_exponents(self.exponents(w))

    def distance(self, x, y):
        ex, ey = self.exponents(x), self.exponents(y)
        return sum(abs(a - b) for a, b in zip(ex, ey))


class RAAG(GroupModel):
    """Right-angled Artin group; an edge i-j means generators i and j commute.

    Normal form: greedily cancel pairs x ... x^-1 whose in-between letters
    all commute with x (this leaves a geodesic word), then take the
    lexicographically least word in the commutation class.
    """

    family = "raag"

    def __init__(self, rank: int, edges: Iterable[tuple[int, int]] = ()):
        super().__init__(rank)
        norm = set()
        for i, j in edges:
            if not (0 <= i < rank and 0 <= j < rank) or i == j:
                raise InputError(f"bad edge {i}-{j} for rank {rank}")
            norm.add((min(i, j), max(i, j)))
        self.edges = tuple(sorted(norm))
        self._adj = {(i + 1, j + 1) for i, j in self.edges} | {
            (j + 1, i + 1) for i, j in self.edges
        }

    def spec_string(self):
        e = ",".join(f"{i}-{j}" for i, j in self.edges)
        return f"raag:{self.rank}:{e}"

    def letters_commute(self, x: int, y: int) -> bool:
        return abs(x) == abs(y) or (abs(x), abs(y)) in self._adj

    def _cancel(self, w: list) -> list:
        changed = True
        while changed:
            changed = False
            for i in range(len(w)):
                x = w[i]
                for j in range(i + 1, len(w)):
                    y = w[j]
                    if y == -x:
                        del w[j]
                        del w[i]
                        changed = True
                        break
                    if not self.letters_commute(x, y):
                        break
                if changed:
                    break
        return w

    def normalize(self, w):
        rest = self._cancel(list(self.check(w)))
        out = []
        while rest:
            best = None
            seen = set()
            for i, x in enumerate(rest):
                if x not in seen and all(self.letters_commute(x, y) for y in rest[:i]):
                    if best is None or letter_key(x) < letter_key(rest[best]):
                        best = i
                seen.add(x)
            out.append(rest.pop(best))
        return tuple(out)


class SmallCancellationGroup(GroupModel):
    """A C'(1/6) presentation.

    Dehn's algorithm decides equality.  Word length is the BFS distance in a
    lazily enumerated ball of radius ``max_radius``, and the normal form of
    an element is its shortlex-least geodesic (the first BFS discovery).
    Elements beyond the enumerated radius raise ``RangeExceeded``.
    """

    family = "small-cancellation"

    def __init__(self, rank: int, relators: Iterable, max_radius: int = 6,
                 check_condition: bool = True):
        super().__init__(rank)
        rels = []
        for r in relators:
            r = parse_word(r, rank) if isinstance(r, str) else self.check(r)
            r = _cyclic_reduce(free_reduce(r))
            if not r:
                raise InputError("relators must be nontrivial after cyclic reduction")
            rels.append(r)
        if not rels:
            raise InputError("a small-cancellation presentation needs relators")
        self.relators = tuple(rels)
        self.max_radius = int(max_radius)
        sym = set()
        for r in rels:
            for rr in (r, invert_word(r)):
                for k in range(len(rr)):
                    sym.add(rr[k:] + rr[:k])
        self.symmetrized = tuple(sorted(sym, key=shortlex_key))
        if check_condition:
            bad = self.small_cancellation_violation(Fraction(1, 6))
            if bad is not None:
                raise InputError(
                    f"presentation is not C'(1/6): piece {format_word(bad)}")
        self._basis = self._abelian_invariant_basis()
        self._layers: list[list[Word]] = [[IDENTITY]]
        self._buckets: dict = {self._bucket(IDENTITY): [(IDENTITY, 0)]}

    def spec_string(self):
        rs = ",".join(format_word(r) for r in self.relators)
        return f"small-cancellation:{self.rank}:{rs}:R{self.max_radius}"

    # -- presentation checks -------------------------------------------------
    def small_cancellation_violation(self, lam):
        for r1, r2 in itertools.combinations(self.symmetrized, 2):
            p = common_prefix(r1, r2)
            if p and (p >= lam * len(r1) or p >= lam * len(r2)):
                return r1[:p]
        return None

    # -- Dehn's algorithm ----------------------------------------------------
    def dehn_reduce(self, w) -> Word:
        w = list(free_reduce(self.check(w)))
        progress = True
        while progress:
            progress = False
            for r in self.symmetrized:
                L = len(r)
                half = L // 2 + 1
                for i in range(len(w) - half + 1):
                    # longest piece of r starting at i, at least past half
                    k = 0
                    while i + k < len(w) and k < L and w[i + k] == r[k]:
                        k += 1
                    if k >= half:
                        w[i:i + k] = list(invert_word(r[k:]))
                        w = list(free_reduce(w))
                        progress = True
                        break
                if progress:
                    break
        return tuple(w)

    def is_identity(self, w) -> bool:
        return not self.dehn_reduce(w)

    # -- lazy ball -------------------------------------------------------------
    def _abelian_invariant_basis(self):
        import sympy

        rows = []
        for r in self.relators:
            vec = [0] * self.rank
            for x in r:
                vec[abs(x) - 1] += 1 if x > 0 else -1
            rows.append(vec)
        ns = sympy.Matrix(rows).nullspace()
        basis = []
        for v in ns:
            den = sympy.ilcm(*[sympy.fraction(c)[1] for c in v]) if len(v) else 1
            basis.append(tuple(int(c * den) for c in v))
        return tuple(basis)

    def _bucket(self, w):
        vec = [0] * self.rank
        for x in w:
            vec[abs(x) - 1] += 1 if x > 0 else -1
        return tuple(sum(a * b for a, b in zip(vec, bvec)) for bvec in self._basis)

    def _lookup(self, w):
        for cand, layer in self._buckets.get(self._bucket(w), ()):
            if not self.dehn_reduce(tuple(cand) + invert_word(w)):
                return cand, layer
        return None

    def _extend(self, radius: int):
        if radius > self.max_radius:
            raise RangeExceeded(
                f"radius {radius} exceeds the model's enumeration radius {self.max_radius}",
                needed=radius, available=self.max_radius)
        while len(self._layers) <= radius:
            k = len(self._layers)
            new: list[Word] = []
            for w in self._layers[-1]:
                for x in self.letters:
                    if w and w[-1] == -x:
                        continue
                    cand = w + (x,)
                    if self._lookup(cand) is None:
                        self._buckets.setdefault(self._bucket(cand), []).append((cand, k))
                        new.append(cand)
            self._layers.append(new)

    @property
    def enumerated_radius(self):
        return len(self._layers) - 1

    def layer(self, k: int) -> list[Word]:
        self._extend(k)
        return list(self._layers[k])

    def normalize(self, w):
        w = free_reduce(self.check(w))
        d = self.dehn_reduce(w)
        self._extend(min(len(d), self.max_radius))
        hit = self._lookup(d)
        if hit is None:
            self._extend(self.max_radius)
            hit = self._lookup(d)
        if hit is None:
            raise RangeExceeded(
                f"element {format_word(d)} lies beyond radius {self.max_radius}",
                needed=len(d), available=self.max_radius)
        return hit[0]

    def word_length(self, x):
        return len(self.normalize(x))


def _cyclic_reduce(w: Word) -> Word:
    while len(w) >= 2 and w[0] == -w[-1]:
        w = w[1:-1]
    return w


def cyclic_reduce(w: Word) -> Word:
    return _cyclic_reduce(free_reduce(w))


# -- model specs ---------------------------------------------------------------

def _parse_edges(text: str, rank: int):
    edges = []
    for tok in filter(None, (t.strip() for t in text.split(","))):
        if "-" not in tok:
            raise InputError(f"edge {tok!r} must look like i-j")
        i, j = tok.split("-", 1)
        edges.append((_gen_index(i, rank), _gen_index(j, rank)))
    return edges


def _gen_index(tok: str, rank: int) -> int:
    tok = tok.strip()
    if tok.isdigit():
        return int(tok)
    if len(tok) == 1 and tok.isalpha():
        return ord(tok.lower()) - ord("a")
    raise InputError(f"cannot read generator {tok!r}")


def surface_relator(genus: int) -> Word:
    out = []
    for i in range(genus):
        a, b = 2 * i + 1, 2 * i + 2
        out += [a, b, -a, -b]
    return tuple(out)


def model_from_spec(spec: str, max_radius: int = 6) -> GroupModel:
    """Build a model from a short spec.

    ``free2``, ``abelian2`` (or ``free-abelian2``), ``raag3:0-1,1-2``,
    ``surface2`` and ``sc4:aBAbcDCd`` (relators comma-separated).
    """
    s = spec.strip()
    low = s.lower()
    try:
        if low.startswith("free-abelian"):
            return FreeAbelianGroup(int(low[len("free-abelian"):]))
        if low.startswith("abelian"):
            return FreeAbelianGroup(int(low[len("abelian"):]))
        if low.startswith("free"):
            return FreeGroup(int(low[4:]))
        if low.startswith("raag"):
            head, _, edges = s[4:].partition(":")
            rank = int(head)
            return RAAG(rank, _parse_edges(edges, rank))
        if low.startswith("surface"):
            g = int(low[7:])
            return SmallCancellationGroup(2 * g, [surface_relator(g)], max_radius=max_radius)
        if low.startswith("sc"):
            head, _, rels = s[2:].partition(":")
            return SmallCancellationGroup(int(head), [r for r in rels.split(",") if r],
                                          max_radius=max_radius)
    except ValueError as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"cannot parse model spec {spec!r}: {exc}") from None
    raise InputError(f"unknown model spec {spec!r}")


class PresentationError(InputError):
    def __init__(self, message, line=None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


def parse_presentation(text: str, max_radius: int = 6) -> GroupModel:
    """Read the line-oriented presentation format (``key=value`` lines)."""
    fields: dict[str, tuple[str, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise PresentationError(f"expected key=value, got {line!r}", lineno)
        key, value = (p.strip() for p in line.split("=", 1))
        if key not in ("family", "rank", "edges", "relators", "max_radius"):
            raise PresentationError(f"unknown key {key!r}", lineno)
        fields[key] = (value, lineno)
    if "family" not in fields:
        raise PresentationError("missing family=")
    family, fline = fields["family"]
    if "rank" not in fields:
        raise PresentationError("missing rank=")
    rank_s, rline = fields["rank"]
    try:
        rank = int(rank_s)
    except ValueError:
        raise PresentationError(f"rank must be an integer, got {rank_s!r}", rline) from None
    if "max_radius" in fields:
        max_radius = int(fields["max_radius"][0])
    try:
        if family == "free":
            return FreeGroup(rank)
        if family in ("free-abelian", "abelian"):
            return FreeAbelianGroup(rank)
        if family == "raag":
            text_e, eline = fields.get("edges", ("", fline))
            try:
                return RAAG(rank, _parse_edges(text_e, rank))
            except InputError as exc:
                raise PresentationError(str(exc), eline) from None
        if family in ("small-cancellation", "sc"):
            if "relators" not in fields:
                raise PresentationError("small-cancellation needs relators=", fline)
            text_r, rl = fields["relators"]
            try:
                return SmallCancellationGroup(
                    rank, [r.strip() for r in text_r.split(",") if r.strip()],
                    max_radius=max_radius)
            except InputError as exc:
                raise PresentationError(str(exc), rl) from None
    except PresentationError:
        raise
    except InputError as exc:
        raise PresentationError(str(exc), fline) from None
    raise PresentationError(f"unknown family {family!r}", fline)


def load_model(spec_or_path: str, max_radius: int = 6) -> GroupModel:
    import os

    if os.path.exists(spec_or_path) and not spec_or_path.lower().startswith(("free", "abelian")):
        with open(spec_or_path) as fh:
            return parse_presentation(fh.read(), max_radius=max_radius)
    return model_from_spec(spec_or_path, max_radius=max_radius)
