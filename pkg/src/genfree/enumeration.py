"""Ball enumeration, regions, growth statistics, the O-set and DOP sums."""
from __future__ import annotations

import io
import math
import struct
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import BudgetExceeded, InputError, RangeExceeded, UndefinedGrowth
from .groups import FreeGroup, GroupModel
from .words import IDENTITY, Word, format_word

DEFAULT_MAX_ELEMENTS = 20_000_000


class BallIndex:
    """An enumerated ball B_n with exact distances.

    Elements are integer ids in BFS order; ``layer_offsets[k]`` is the id of
    the first element at distance k.  ``parent[e]`` is a BFS predecessor and
    ``letter[e]`` the generator with ``word(e) = word(parent[e]) * letter[e]``.
    """

    def __init__(self, model: GroupModel, radius: int, parent: np.ndarray,
                 letter: np.ndarray, layer_offsets: np.ndarray,
                 words: list | None = None, letters_matrix: np.ndarray | None = None):
        self.model = model
        self.radius = int(radius)
        self.parent = parent
        self.letter = letter
        self.layer_offsets = layer_offsets
        self._words = words
        self._matrix = letters_matrix
        self._id_of = None
        n = len(parent)
        self.lengths = np.repeat(np.arange(self.radius + 1, dtype=np.int16),
                                 np.diff(layer_offsets))
        assert len(self.lengths) == n

    # -- sizes -----------------------------------------------------------
    def __len__(self):
        return int(self.layer_offsets[-1])

    @property
    def size(self) -> int:
        return len(self)

    def sphere_size(self, k: int) -> int:
        self._check_radius(k)
        return int(self.layer_offsets[k + 1] - self.layer_offsets[k])

    def ball_size(self, k: int) -> int:
        self._check_radius(k)
        return int(self.layer_offsets[k + 1])

    def sphere_sizes(self) -> list[int]:
        return [int(x) for x in np.diff(self.layer_offsets)]

    def layer(self, k: int) -> range:
        self._check_radius(k)
        return range(int(self.layer_offsets[k]), int(self.layer_offsets[k + 1]))

    def _check_radius(self, k: int):
        if k < 0 or k > self.radius:
            raise RangeExceeded(f"radius {k} exceeds the enumerated radius {self.radius}",
                                needed=k, available=self.radius)

    # -- element access ----------------------------------------------------
    @property
    def letters_matrix(self) -> np.ndarray:
        """Padded (N, radius) int8 matrix of normal-form letters (free groups)."""
        if self._matrix is None:
            if not self.model.is_tree:
                raise InputError("letters matrix is only defined for free groups")
            self._matrix = _matrix_from_parents(self.parent, self.letter,
                                                self.layer_offsets, self.radius)
        return self._matrix

    def word(self, i: int) -> Word:
        if self._words is not None:
            return self._words[i]
        if self._matrix is not None or self.model.is_tree:
            row = self.letters_matrix[i]
            return tuple(int(x) for x in row[: self.lengths[i]])
        self._materialize()
        return self._words[i]

    def words(self) -> list:
        if self._words is None:
            self._materialize()
        return self._words

    def _materialize(self):
        if self.model.is_tree:
            m = self.letters_matrix
            self._words = [tuple(int(x) for x in m[i, : self.lengths[i]])
                           for i in range(len(self))]
            return
        out = [IDENTITY]
        for i in range(1, len(self)):
            out.append(self.model.normalize(out[self.parent[i]] + (int(self.letter[i]),)))
        self._words = out

    def id_of(self, w) -> int:
        w = self.model.word(w)
        if len(w) > self.radius:
            raise RangeExceeded(f"|{format_word(w)}| = {len(w)} exceeds radius {self.radius}",
                                needed=len(w), available=self.radius)
        if self._id_of is None:
            self._id_of = {x: i for i, x in enumerate(self.words())}
        return self._id_of[w]

    def contains(self, w) -> bool:
        return self.model.word_length(self.model.word(w)) <= self.radius

    def require(self, length: int, what: str = "element"):
        if length > self.radius:
            raise RangeExceeded(f"{what} needs radius {length}, ball has {self.radius}",
                                needed=length, available=self.radius)

    def __repr__(self):
        return f"<BallIndex {self.model.spec_string()} radius={self.radius} size={len(self)}>"


def _matrix_from_parents(parent, letter, offsets, radius):
    n = int(offsets[-1])
    m = np.zeros((n, max(radius, 1)), dtype=np.int8)
    for k in range(1, radius + 1):
        lo, hi = int(offsets[k]), int(offsets[k + 1])
        par = parent[lo:hi]
        if k > 1:
            m[lo:hi, : k - 1] = m[par, : k - 1]
        m[lo:hi, k - 1] = letter[lo:hi]
    return m


def enumerate_ball(model: GroupModel, n: int, max_elements: int = DEFAULT_MAX_ELEMENTS) -> BallIndex:
    """Exact BFS enumeration of B_n in the fixed generator order."""
    if not isinstance(n, (int, np.integer)) or n < 0:
        raise InputError(f"radius must be a non-negative integer, got {n!r}")
    if isinstance(model, FreeGroup):
        return _enumerate_free(model, int(n), max_elements)
    return _enumerate_generic(model, int(n), max_elements)


def _enumerate_free(model: FreeGroup, n: int, max_elements: int) -> BallIndex:
    r2 = 2 * model.rank
    total = 1
    for k in range(1, n + 1):
        total += r2 * (r2 - 1) ** (k - 1)
        if total > max_elements:
            raise BudgetExceeded(
                f"ball of radius {k} exceeds the element budget {max_elements}; "
                f"achieved radius {k - 1}", achieved=k - 1)
    letters = np.array(model.letters, dtype=np.int8)
    parents = [np.zeros(1, dtype=np.int32)]
    lets = [np.zeros(1, dtype=np.int8)]
    offsets = [0, 1]
    last = np.zeros(1, dtype=np.int8)
    start = 0
    for k in range(1, n + 1):
        cnt = len(last)
        ids = np.arange(start, start + cnt, dtype=np.int32)
        cand = np.broadcast_to(letters, (cnt, r2))
        keep = cand != -last[:, None]
        par = np.repeat(ids, r2).reshape(cnt, r2)[keep]
        new = cand[keep]
        parents.append(par.astype(np.int32))
        lets.append(new.astype(np.int8))
        start = offsets[-1]
        offsets.append(offsets[-1] + len(new))
        last = new
    return BallIndex(model, n, np.concatenate(parents), np.concatenate(lets),
                     np.array(offsets, dtype=np.int64))


def _enumerate_generic(model: GroupModel, n: int, max_elements: int) -> BallIndex:
    words = [IDENTITY]
    index = {IDENTITY: 0}
    parent = [0]
    letter = [0]
    offsets = [0, 1]
    for k in range(1, n + 1):
        lo, hi = offsets[k - 1], offsets[k]
        for i in range(lo, hi):
            w = words[i]
            for x in model.letters:
                c = model.normalize(w + (x,))
                if c in index:
                    continue
                index[c] = len(words)
                words.append(c)
                parent.append(i)
                letter.append(x)
                if len(words) > max_elements:
                    raise BudgetExceeded(
                        f"ball of radius {k} exceeds the element budget {max_elements}; "
                        f"achieved radius {k - 1}", achieved=k - 1)
        offsets.append(len(words))
    ball = BallIndex(model, n, np.array(parent, dtype=np.int32), np.array(letter, dtype=np.int8),
                     np.array(offsets, dtype=np.int64), words=words)
    ball._id_of = index
    return ball


# -- regions -------------------------------------------------------------------

@dataclass(frozen=True)
class Region:
    kind: str
    params: tuple
    lo_layer: int
    hi_layer: int
    ball: BallIndex = field(repr=False, compare=False)

    @property
    def start(self) -> int:
        return int(self.ball.layer_offsets[self.lo_layer])

    @property
    def stop(self) -> int:
        return int(self.ball.layer_offsets[self.hi_layer + 1])

    @property
    def ids(self) -> np.ndarray:
        return np.arange(self.start, self.stop, dtype=np.int64)

    def __len__(self):
        return max(self.stop - self.start, 0)

    def layers(self) -> range:
        return range(self.lo_layer, self.hi_layer + 1)

    def words(self) -> list:
        return [self.ball.word(i) for i in range(self.start, self.stop)]

    def describe(self) -> str:
        return f"{self.kind}{self.params}"


def region(ball: BallIndex, kind: str, n: int, delta: int = 0, rho=None) -> Region:
    """``ball``: |g| <= n.  ``annulus``: ||g| - n| <= delta.
    ``big_annulus``: floor(rho n) - delta <= |g| <= n + delta."""
    if n < 0 or delta < 0:
        raise InputError("n and delta must be non-negative")
    if kind == "ball":
        lo, hi, params = 0, n, (n,)
    elif kind in ("annulus", "sphere"):
        lo, hi, params = max(n - delta, 0), n + delta, (n, delta)
    elif kind == "big_annulus":
        if rho is None:
            raise InputError("big_annulus needs rho")
        r = Fraction(str(rho)) if isinstance(rho, float) else Fraction(rho)
        if not (0 < r <= 1):
            raise InputError("rho must lie in (0, 1]")
        lo, hi, params = max(math.floor(r * n) - delta, 0), n + delta, (rho, n, delta)
    else:
        raise InputError(f"unknown region kind {kind!r}")
    if hi > ball.radius:
        raise RangeExceeded(f"region {kind}{params} needs radius {hi}, ball has {ball.radius}",
                            needed=hi, available=ball.radius)
    return Region(kind, params, lo, hi, ball)


def sphere(ball, n):
    return region(ball, "annulus", n, 0)


def big_annulus(ball, rho, n, delta=0):
    return region(ball, "big_annulus", n, delta, rho)


# -- growth --------------------------------------------------------------------

@dataclass
class GrowthEstimate:
    sequence: list
    tail: float
    slope: float


def growth_rate_estimate(series: Sequence[int], start: int = 1) -> GrowthEstimate:
    """ln|X ∩ B_n| / n for n = start, start+1, ... plus a least-squares slope.

    The slope is fitted over the second half of the series, where the
    lower-order terms of |X ∩ B_n| have died out.
    """
    vals = [int(v) for v in series]
    if not vals:
        raise InputError("empty series")
    if any(v < 0 for v in vals):
        raise InputError("series must be non-negative")
    if all(v == 0 for v in vals):
        raise UndefinedGrowth("growth rate of an empty set is undefined")
    ns = np.arange(start, start + len(vals), dtype=float)
    logs = np.array([math.log(v) if v > 0 else -math.inf for v in vals])
    seq = [float(l / n) if n > 0 else float("nan") for l, n in zip(logs, ns)]
    ok = np.isfinite(logs)
    half = len(vals) // 2
    mask = ok.copy()
    mask[:half] = False
    if mask.sum() < 2:
        mask = ok
    if mask.sum() >= 2:
        slope = float(np.polyfit(ns[mask], logs[mask], 1)[0])
    else:
        slope = 0.0
    return GrowthEstimate(seq, seq[-1], slope)


# -- sampling ------------------------------------------------------------------

def sample_uniform(reg: Region, seed, size: int | None = None):
    """Uniform element id(s) of ``reg``; reproducible for a given seed."""
    if len(reg) == 0:
        raise InputError("cannot sample from an empty region")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    draw = rng.integers(reg.start, reg.stop, size=size)
    return int(draw) if size is None else draw


# -- suborbits -----------------------------------------------------------------

class SuborbitPredicate:
    """A distinguished subset of vertices with a distance oracle."""

    everything = False
    label = "suborbit"

    def contains(self, model: GroupModel, w: Word) -> bool:
        return self.distance(model, w) == 0

    def distance(self, model: GroupModel, w: Word) -> int:
        raise NotImplementedError

    def mask(self, ball: BallIndex) -> np.ndarray:
        return np.array([self.contains(ball.model, ball.word(i)) for i in range(len(ball))])


class AllVertices(SuborbitPredicate):
    everything = True
    label = "all"

    def distance(self, model, w):
        return 0

    def mask(self, ball):
        return np.ones(len(ball), dtype=bool)


class CyclicSuborbit(SuborbitPredicate):
    """The orbit <h>.o of a cyclic subgroup."""

    def __init__(self, model: GroupModel, h):
        self.h = model.word(h)
        if not self.h:
            raise InputError("h must be non-trivial")
        self.label = f"<{format_word(self.h)}>"
        self._single = model.is_tree and len(self.h) == 1
        self._powers = {0: IDENTITY}
        self._model = model

    def power(self, k: int) -> Word:
        if k not in self._powers:
            step = 1 if k > 0 else -1
            base = self.h if k > 0 else self._model.invert(self.h)
            j = k - step
            while j not in self._powers:
                j -= step
            while j != k:
                self._powers[j + step] = self._model.multiply(self._powers[j], base)
                j += step
        return self._powers[k]

    def powers_within(self, length: int) -> list:
        """Powers h^k with |h^k| <= length (|k| <= 2 length + 2)."""
        out = []
        for k in range(-2 * length - 2, 2 * length + 3):
            p = self.power(k)
            if len(p) <= length:
                out.append(p)
        return out

    def distance(self, model, w):
        w = model.word(w)
        if self._single:
            a = self.h[0]
            k = 0
            while k < len(w) and abs(w[k]) == abs(a):
                k += 1
            return len(w) - k
        return min(model.distance(w, p) for p in self.powers_within(2 * len(w)))

    def contains(self, model, w):
        return self.distance(model, w) == 0


class FiniteSuborbit(SuborbitPredicate):
    def __init__(self, model: GroupModel, words: Iterable, label="finite"):
        self.words = frozenset(model.word(w) for w in words)
        if not self.words:
            raise InputError("empty suborbit")
        self.label = label

    def distance(self, model, w):
        return min(model.distance(w, s) for s in self.words)


# -- O-set and DOP ---------------------------------------------------------------

def _interval_step(model, v, y, d_vy):
    for x in model.letters:
        nxt = model.multiply(v, (x,))
        if model.distance(nxt, y) == d_vy - 1:
            yield nxt


def _exists_good_geodesic(model, x, y, good: Callable[[Word], bool]) -> bool:
    """Is there a geodesic x -> y whose interior vertices all satisfy ``good``?"""
    dead = set()

    def dfs(v, d):
        if d == 1:
            return True
        for nxt in _interval_step(model, v, y, d):
            if nxt in dead:
                continue
            if good(nxt) and dfs(nxt, d - 1):
                return True
            dead.add(nxt)
        return False

    d = model.distance(x, y)
    return d >= 2 and dfs(x, d)


def in_O(g, M1: int, M2: int, suborbit: SuborbitPredicate, ball: BallIndex) -> bool:
    """Some geodesic from B(o, M2) to B(g o, M2), of length at least 2, has its
    interior outside the M1-neighborhood of the suborbit."""
    model = ball.model
    g = model.word(g)
    ball.require(len(g) + M2, "in_O")
    if not g or suborbit.everything:
        return False
    if model.is_tree and isinstance(suborbit, CyclicSuborbit) and suborbit._single and M2 == 0:
        return _in_O_tree_line(g, M1, suborbit.h[0])
    small = [ball.word(i) for i in range(ball.ball_size(M2))]
    good = lambda v: suborbit.distance(model, v) > M1
    for w1 in small:
        for w2 in small:
            if _exists_good_geodesic(model, w1, model.multiply(g, w2), good):
                return True
    return False


def _in_O_tree_line(g: Word, M1: int, a: int) -> bool:
    # interior vertices are the proper prefixes; their distance to the line is
    # i - min(i, r) with r the initial a-run
    n = len(g)
    if n < 2:
        return False
    r = 0
    while r < n and abs(g[r]) == abs(a):
        r += 1
    return all(i - min(i, r) > M1 for i in range(1, n))


@dataclass
class DOPReport:
    delta: float
    counts: list           # |O ∩ S_k| for k = 0..N
    partial_sums: list     # sum_{|g| <= n} |g| exp(-delta |g|)
    annulus_sums: list     # sum_{k <= n} k |O ∩ A(k, Delta)| exp(-k delta)
    annulus_delta: int
    non_summable: bool


def o_counts(suborbit, M1, M2, ball) -> list:
    model = ball.model
    top = ball.radius - M2
    if top < 0:
        raise RangeExceeded("ball too small for the O-set", needed=M2, available=ball.radius)
    if suborbit.everything:
        return [0] * (top + 1)
    if model.is_tree and isinstance(suborbit, CyclicSuborbit) and suborbit._single and M2 == 0:
        if M1 > 0:
            return [0] * (top + 1)
        m = ball.letters_matrix
        a = abs(suborbit.h[0])
        out = []
        for k in range(top + 1):
            lay = ball.layer(k)
            if k < 2:
                out.append(0)
            else:
                out.append(int(np.count_nonzero(np.abs(m[lay.start:lay.stop, 0]) != a)))
        return out
    return [sum(in_O(ball.word(i), M1, M2, suborbit, ball) for i in ball.layer(k))
            for k in range(top + 1)]


def dop_partial_sums(suborbit, M1: int, M2: int, delta: float, ball: BallIndex,
                     annulus_delta: int | None = None) -> DOPReport:
    if delta < 0:
        raise InputError("delta must be non-negative")
    counts = o_counts(suborbit, M1, M2, ball)
    terms = [k * c * math.exp(-delta * k) for k, c in enumerate(counts)]
    partial = list(np.cumsum(terms)) if terms else []
    D = 2 * max(M1, M2) if annulus_delta is None else annulus_delta
    ann = []
    acc = 0.0
    for k in range(len(counts)):
        c = sum(counts[j] for j in range(max(k - D, 0), min(k + D, len(counts) - 1) + 1))
        acc += k * c * math.exp(-k * delta)
        ann.append(acc)
    half = len(terms) // 2
    non_summable = bool(terms and terms[-1] > 0 and terms[-1] >= terms[half])
    return DOPReport(delta, counts, [float(x) for x in partial], ann, D, non_summable)


# -- cache -----------------------------------------------------------------------

MAGIC = b"GFBALL\x00\x01"
CACHE_VERSION = 1


def save_ball(ball: BallIndex, path) -> None:
    with open(path, "wb") as fh:
        fh.write(ball_bytes(ball))


def ball_bytes(ball: BallIndex) -> bytes:
    buf = io.BytesIO()
    buf.write(MAGIC)
    buf.write(struct.pack("<I", CACHE_VERSION))
    buf.write(ball.model.model_hash())
    buf.write(struct.pack("<I", ball.radius))
    for k in range(ball.radius + 1):
        lay = ball.layer(k)
        par = ball.parent[lay.start:lay.stop].astype(np.int64)
        delta = np.diff(par, prepend=par[:1] if len(par) else par).astype(np.int32)
        if len(par):
            delta[0] = par[0]
        buf.write(struct.pack("<Q", len(lay)))
        buf.write(delta.astype("<i4").tobytes())
        buf.write(ball.letter[lay.start:lay.stop].astype(np.int8).tobytes())
    return buf.getvalue()


def load_ball(path, model: GroupModel) -> BallIndex:
    with open(path, "rb") as fh:
        data = fh.read()
    mv = memoryview(data)
    if bytes(mv[:8]) != MAGIC:
        raise InputError(f"{path}: not a ball cache file")
    (version,) = struct.unpack_from("<I", mv, 8)
    if version != CACHE_VERSION:
        raise InputError(f"{path}: unsupported cache version {version}")
    h = bytes(mv[12:44])
    if h != model.model_hash():
        raise InputError(f"{path}: cache was written for a different model")
    (radius,) = struct.unpack_from("<I", mv, 44)
    pos = 48
    parents, lets, offsets = [], [], [0]
    for _ in range(radius + 1):
        (cnt,) = struct.unpack_from("<Q", mv, pos)
        pos += 8
        delta = np.frombuffer(mv, dtype="<i4", count=cnt, offset=pos)
        pos += 4 * cnt
        let = np.frombuffer(mv, dtype=np.int8, count=cnt, offset=pos)
        pos += cnt
        parents.append(np.cumsum(delta, dtype=np.int64).astype(np.int32))
        lets.append(let.copy())
        offsets.append(offsets[-1] + cnt)
    return BallIndex(model, radius, np.concatenate(parents), np.concatenate(lets),
                     np.array(offsets, dtype=np.int64))


def growth_csv(ball: BallIndex) -> str:
    lines = ["n,|B_n|,|A(n,0)|"]
    for k in range(ball.radius + 1):
        lines.append(f"{k},{ball.ball_size(k)},{ball.sphere_size(k)}")
    return "\n".join(lines) + "\n"
