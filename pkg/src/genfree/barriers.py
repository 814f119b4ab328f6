"""Barriers and the negligible sets U, W, V, Z, T, with density estimation.

Subsegment windows alpha_[e1, e2] of a geodesic of length n are taken on
vertex positions ceil(e1 n) .. floor(e2 n), computed with exact rationals.
Membership predicates return True/False; when a geodesic search runs out
of budget without a witness they raise ``BudgetExceeded`` and densities
count the element as unknown.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .enumeration import AllVertices, BallIndex, CyclicSuborbit, Region, SuborbitPredicate
from .errors import BudgetExceeded, InputError
from .geometry import (
    AxisNeighborhood,
    GeodesicPath,
    _model,
    _small_ball,
    iter_geodesics,
    normal_form_path,
    set_distance,
)
from .groups import FreeGroup, GroupModel
from .words import IDENTITY, Word, common_prefix, format_word, invert as invert_word

GEODESIC_BUDGET = 2000


def frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(str(x))
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(x)


def window(n: int, e1, e2) -> tuple[int, int]:
    """Vertex positions of the window [e1 n, e2 n]; lo > hi means empty."""
    return math.ceil(frac(e1) * n), math.floor(frac(e2) * n)


@dataclass(frozen=True)
class BarrierSpec:
    h: Word
    m: int
    nu: int
    M: int = 0

    def __post_init__(self):
        if not self.h:
            raise InputError("barrier element h must be non-trivial")
        if self.m < 1 or self.nu < 0 or self.M < 0:
            raise InputError("need m >= 1, nu >= 0, M >= 0")

    def element(self, model) -> Word:
        return _model(model).power(self.h, self.m)

    def check(self, model, D) -> None:
        L = len(self.element(model))
        if not L > D + 2 * self.nu:
            raise InputError(f"|h^m| > D + 2 nu violated: |h^m| = {L}, D + 2 nu = {D + 2 * self.nu}")

    @classmethod
    def minimal(cls, model, h, D, nu, M=0) -> "BarrierSpec":
        """Smallest m with |h^m| > D + 2 nu."""
        model = _model(model)
        h = model.word(h)
        m = 1
        while len(model.power(h, m)) <= D + 2 * nu:
            m += 1
            if m > 10_000:
                raise InputError("h does not seem to have positive translation length")
        return cls(h, m, nu, M)


@dataclass(frozen=True)
class NegligibleParams:
    eps: Fraction = Fraction(1, 5)
    eps1: Fraction = Fraction(1, 4)
    eps2: Fraction = Fraction(3, 4)
    rho: Fraction = Fraction(9, 10)
    C: int = 1
    Delta: int = 0
    M: int = 0

    def __post_init__(self):
        for name in ("eps", "eps1", "eps2", "rho"):
            object.__setattr__(self, name, frac(getattr(self, name)))
        if not self.eps1 < self.eps2:
            raise InputError("eps1 < eps2 required")
        for name in ("eps", "eps1", "eps2"):
            v = getattr(self, name)
            if not 0 < v < 1:
                raise InputError(f"{name} must lie in (0, 1)")
        if not 0 < self.rho <= 1:
            raise InputError("rho must lie in (0, 1]")
        if self.C < 0 or self.Delta < 0 or self.M < 0:
            raise InputError("C, Delta, M must be non-negative")

    def check_generic_regime(self):
        if not self.rho > Fraction(8, 9) or not self.rho < 1:
            raise InputError(f"regime violated: 8/9 < rho < 1 (rho = {self.rho})")
        if not (1 - self.rho < self.eps < Fraction(1, 4)):
            raise InputError(f"regime violated: 1 - rho < eps < 1/4 (eps = {self.eps}, rho = {self.rho})")


@dataclass
class DensityReport:
    region: str
    n: int | None
    count: int
    unknown: int
    total: int
    density: float
    se: float
    mode: str
    exact: Fraction | None = None

    def row(self) -> str:
        return f"{self.n},{self.count},{self.total},{self.density!r},{self.se!r}"


# -- tree fast paths -----------------------------------------------------------

def _single_letter(model, h) -> int | None:
    if model.is_tree and len(h) == 1:
        return abs(h[0])
    return None


def _runs_of(g: Word, a: int):
    """Vertex intervals [i, j] of maximal runs of a^{±1} letters, including
    trivial runs at vertices touching no such letter."""
    n = len(g)
    out = []
    p = 0
    while p <= n:
        if p < n and abs(g[p]) == a:
            j = p
            while j < n and abs(g[j]) == a:
                j += 1
            out.append((p, j))
            p = j + 1
        else:
            if not (p > 0 and abs(g[p - 1]) == a):
                out.append((p, p))
            p += 1
    return out


def _dist_to(t, lo, hi):
    return max(lo - t, 0, t - hi)


def _w_tree(g, eps, a, C) -> bool:
    n = len(g)
    if n == 0:
        return False
    best = max(min(j + C, n) - max(i - C, 0) for i, j in _runs_of(g, a))
    return best >= frac(eps) * n


def _barrier_length_tree(g, a, lo, hi, nu):
    best = -1
    for i, j in _runs_of(g, a):
        s1, s2 = max(i, lo - nu), min(j, hi + nu)
        if s1 > s2:
            continue
        ext_r = nu - _dist_to(j, lo, hi) if s2 == j else 0
        ext_l = nu - _dist_to(i, lo, hi) if s1 == i else 0
        best = max(best, s2 - s1 + ext_r + ext_l)
    return best


def _v_tree(g, e1, e2, a, m, nu) -> bool:
    lo, hi = window(len(g), e1, e2)
    if lo > hi:
        return True
    return _barrier_length_tree(g, a, lo, hi, nu) < m


def _z_tree(u, e1, e2, C) -> bool:
    n = len(u)
    lo, hi = window(n, e1, e2)
    if n == 0 or lo > hi:
        return False
    p = common_prefix(u, invert_word(u))
    return lo - p <= C


def _t_tree(u1, u2, e1, e2, C) -> bool:
    if not u1 or not u2:
        return False
    p = common_prefix(u1, u2)
    for u in (u2, u1):
        lo, hi = window(len(u), e1, e2)
        if lo <= hi and lo - p <= C:
            return True
    return False


# -- barrier predicates ----------------------------------------------------------

def _vertices(gamma):
    if isinstance(gamma, GeodesicPath):
        return list(gamma.vertices)
    return list(gamma)


def find_barrier(gamma, nu: int, g, model):
    """A z with d(z o, gamma) <= nu and d(z g o, gamma) <= nu, or None.

    Candidates are z = v w with v on gamma and |w| <= nu, searched in path
    order and then ball order, so the choice is deterministic.
    """
    model = _model(model)
    verts = _vertices(gamma)
    if not verts:
        return None
    g = model.word(g)
    small = _small_ball(model, nu)
    for v in verts:
        for w in small:
            z = model.multiply(v, w)
            zg = model.multiply(z, g)
            if min(model.distance(zg, x) for x in verts) <= nu:
                return z
    return None


def is_barrier_free_geodesic(gamma, nu: int, g, ball) -> bool:
    return find_barrier(gamma, nu, g, _model(ball)) is None


def is_barrier_free_element(f, nu: int, M: int, g, ball, budget: int = GEODESIC_BUDGET) -> bool:
    """Some geodesic between B(o, M) and B(f o, M) is (nu, g)-barrier-free."""
    model = _model(ball)
    f = model.word(f)
    small = _small_ball(model, M)
    cut = False
    for w1 in small:
        for w2 in small:
            try:
                for gam in iter_geodesics(model, w1, model.multiply(f, w2), budget):
                    if is_barrier_free_geodesic(gam, nu, g, model):
                        return True
            except BudgetExceeded:
                cut = True
    if cut:
        raise BudgetExceeded("geodesic budget exhausted without a barrier-free witness")
    return False


def _exists_geodesic(model, g, test, budget):
    """∃ geodesic [o, g o] with test(path); ternary via BudgetExceeded."""
    try:
        for gam in iter_geodesics(model, IDENTITY, g, budget):
            if test(gam):
                return True
    except BudgetExceeded:
        raise BudgetExceeded("geodesic budget exhausted without a witness") from None
    return False


def _longest_run(mask) -> int:
    best = cur = 0
    for b in mask:
        cur = cur + 1 if b else 0
        best = max(best, cur)
    return best


def in_U(u, eps, M: int, suborbit: SuborbitPredicate, ball, budget: int = GEODESIC_BUDGET) -> bool:
    """Some geodesic [o, u o] has a subsegment of length >= eps |u| outside N_M(suborbit)."""
    model = _model(ball)
    u = model.word(u)
    if not u or suborbit.everything:
        return False
    need = frac(eps) * len(u)

    def test(gam):
        mask = [suborbit.distance(model, v) > M for v in gam.vertices]
        return _longest_run(mask) - 1 >= need

    return _exists_geodesic(model, u, test, budget)


def in_W(g, eps, h, C: int, ball, budget: int = GEODESIC_BUDGET) -> bool:
    """Some geodesic [o, g o] has a subsegment of length >= eps |g| inside
    N_C(f Ax(h)) for some f."""
    model = _model(ball)
    g, h = model.word(g), model.word(h)
    if not g or frac(eps) > 1:
        return False
    a = _single_letter(model, h)
    if a is not None:
        return _w_tree(g, eps, a, C)
    need = frac(eps) * len(g)
    small = _small_ball(model, C)

    def test(gam):
        seen = set()
        for v in gam.vertices:
            for w in small:
                f = model.multiply(v, w)
                if f in seen:
                    continue
                seen.add(f)
                X = AxisNeighborhood(model, f, h, 0)
                mask = [X.axis_distance(x) <= C for x in gam.vertices]
                if _longest_run(mask) - 1 >= need:
                    return True
        return False

    return _exists_geodesic(model, g, test, budget)


def in_V(g, e1, e2, spec: BarrierSpec, ball, budget: int = GEODESIC_BUDGET) -> bool:
    """Some geodesic [o, g o] has a (nu, h^m)-barrier-free window alpha_[e1, e2]."""
    model = _model(ball)
    g = model.word(g)
    if not g:
        return False
    a = _single_letter(model, spec.h)
    if a is not None:
        return _v_tree(g, e1, e2, a, spec.m, spec.nu)
    hm = spec.element(model)
    lo, hi = window(len(g), e1, e2)

    def test(gam):
        return is_barrier_free_geodesic(gam.vertices[lo:hi + 1] if lo <= hi else [],
                                        spec.nu, hm, model)

    return _exists_geodesic(model, g, test, budget)


def _near(model, A, B, C) -> bool:
    return any(model.distance(x, y) <= C for x in A for y in B)


def in_Z(u, e1, e2, C: int, ball, budget: int = GEODESIC_BUDGET) -> bool:
    """With alpha-bar(t) = u^-1 alpha(|u| - t): alpha-bar meets N_C(alpha_[e1,e2])
    or alpha meets N_C(alpha-bar_[e1,e2]), for some geodesic alpha."""
    model = _model(ball)
    u = model.word(u)
    if not u:
        return False
    n = len(u)
    lo, hi = window(n, e1, e2)
    if lo > hi:
        return False
    if model.is_tree:
        return _z_tree(u, e1, e2, C)
    uinv = model.invert(u)

    def test(gam):
        a = list(gam.vertices)
        abar = [model.multiply(uinv, a[n - t]) for t in range(n + 1)]
        return _near(model, abar, a[lo:hi + 1], C) or _near(model, a, abar[lo:hi + 1], C)

    return _exists_geodesic(model, u, test, budget)


def in_T(u1, u2, e1, e2, C: int, ball, budget: int = GEODESIC_BUDGET) -> bool:
    """Some alpha = [o, u1 o], beta = [o, u2 o] with alpha meeting
    N_C(beta_[e1,e2]) or beta meeting N_C(alpha_[e1,e2])."""
    model = _model(ball)
    u1, u2 = model.word(u1), model.word(u2)
    if not u1 or not u2:
        return False
    if model.is_tree:
        return _t_tree(u1, u2, e1, e2, C)
    lo1, hi1 = window(len(u1), e1, e2)
    lo2, hi2 = window(len(u2), e1, e2)
    try:
        betas = list(iter_geodesics(model, IDENTITY, u2, budget))
    except BudgetExceeded:
        raise BudgetExceeded("geodesic budget exhausted") from None

    def test(alpha):
        a = list(alpha.vertices)
        for beta in betas:
            b = list(beta.vertices)
            if _near(model, a, b[lo2:hi2 + 1], C) or _near(model, b, a[lo1:hi1 + 1], C):
                return True
        return False

    return _exists_geodesic(model, u1, test, budget)


# -- vectorized layer kernels (free groups, single-letter h) ---------------------

def _run_extents(mat: np.ndarray, n: int, a: int):
    """For every vertex p = 0..n of each row: the run [i(p), j(p)] through p."""
    cnt = mat.shape[0]
    isA = np.abs(mat[:, :n].astype(np.int16)) == a
    left = np.zeros((cnt, n + 1), dtype=np.int16)
    right = np.zeros((cnt, n + 1), dtype=np.int16)
    left[:, 0] = 0
    for p in range(1, n + 1):
        left[:, p] = np.where(isA[:, p - 1], left[:, p - 1], p)
    right[:, n] = n
    for p in range(n - 1, -1, -1):
        right[:, p] = np.where(isA[:, p], right[:, p + 1], p)
    return left, right


def w_layer(mat, n, eps, a, C) -> np.ndarray:
    if n == 0:
        return np.zeros(mat.shape[0], dtype=bool)
    left, right = _run_extents(mat, n, a)
    val = np.minimum(right + C, n) - np.maximum(left - C, 0)
    best = val.max(axis=1).astype(np.int64)
    e = frac(eps)
    return best * e.denominator >= e.numerator * n


def v_layer(mat, n, e1, e2, a, m, nu) -> np.ndarray:
    cnt = mat.shape[0]
    if n == 0:
        return np.zeros(cnt, dtype=bool)
    lo, hi = window(n, e1, e2)
    if lo > hi:
        return np.ones(cnt, dtype=bool)
    left, right = _run_extents(mat, n, a)
    left = left.astype(np.int32)
    right = right.astype(np.int32)
    s1 = np.maximum(left, lo - nu)
    s2 = np.minimum(right, hi + nu)
    valid = s1 <= s2

    def dist(t):
        return np.maximum(np.maximum(lo - t, 0), t - hi)

    ext_r = np.where(s2 == right, nu - dist(right), 0)
    ext_l = np.where(s1 == left, nu - dist(left), 0)
    length = s2 - s1 + ext_r + ext_l
    barrier = (valid & (length >= m)).any(axis=1)
    return ~barrier


def lcp_rows(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    eq = (x == y)
    return np.cumprod(eq, axis=1, dtype=np.int8).sum(axis=1)


def z_layer(mat, n, e1, e2, C) -> np.ndarray:
    cnt = mat.shape[0]
    lo, hi = window(n, e1, e2)
    if n == 0 or lo > hi:
        return np.zeros(cnt, dtype=bool)
    w = mat[:, :n]
    inv = -w[:, ::-1]
    p = lcp_rows(w, inv)
    return lo - p <= C


def t_pair_count(rank: int, lengths: Sequence[int], e1, e2, C) -> tuple[int, int]:
    """Exact count of ordered pairs in T over the union of spheres ``lengths``
    of the free group of the given rank; returns (count, total)."""
    r2 = 2 * rank

    def sph(l):
        return 1 if l == 0 else r2 * (r2 - 1) ** (l - 1)

    def at_least(l1, l2, p):
        if p <= 0:
            return sph(l1) * sph(l2)
        if p > min(l1, l2):
            return 0
        return r2 * (r2 - 1) ** (p - 1) * (r2 - 1) ** (l1 - p) * (r2 - 1) ** (l2 - p)

    count = total = 0
    for l1 in lengths:
        for l2 in lengths:
            total += sph(l1) * sph(l2)
            if l1 == 0 or l2 == 0:
                continue
            need = []
            for l in (l1, l2):
                lo, hi = window(l, e1, e2)
                if lo <= hi:
                    need.append(lo - C)
            if need:
                count += at_least(l1, l2, min(need))
    return count, total


# -- predicate objects ----------------------------------------------------------------

class Predicate:
    arity = 1
    name = "predicate"

    def __call__(self, *words) -> bool:
        raise NotImplementedError

    def layer_mask(self, ball, k):
        return None

    def pair_count(self, ball, layers):
        return None

    def params(self) -> dict:
        return {}


class Constant(Predicate):
    def __init__(self, value=True):
        self.value = bool(value)
        self.name = f"const-{self.value}"

    def __call__(self, *words):
        return self.value

    def layer_mask(self, ball, k):
        return np.full(ball.sphere_size(k), self.value)


class UPred(Predicate):
    name = "U"

    def __init__(self, model, eps, M, suborbit=None):
        self.model, self.eps, self.M = _model(model), frac(eps), M
        self.suborbit = suborbit or AllVertices()

    def __call__(self, u):
        return in_U(u, self.eps, self.M, self.suborbit, self.model)

    def layer_mask(self, ball, k):
        if self.suborbit.everything:
            return np.zeros(ball.sphere_size(k), dtype=bool)
        return None

    def params(self):
        return {"eps": str(self.eps), "M": self.M, "suborbit": self.suborbit.label}


class WPred(Predicate):
    name = "W"

    def __init__(self, model, eps, h, C):
        self.model, self.eps, self.C = _model(model), frac(eps), C
        self.h = self.model.word(h)

    def __call__(self, g):
        return in_W(g, self.eps, self.h, self.C, self.model)

    def layer_mask(self, ball, k):
        a = _single_letter(self.model, self.h)
        if a is None:
            return None
        lay = ball.layer(k)
        return w_layer(ball.letters_matrix[lay.start:lay.stop], k, self.eps, a, self.C)

    def params(self):
        return {"eps": str(self.eps), "h": format_word(self.h), "C": self.C}


class VPred(Predicate):
    name = "V"

    def __init__(self, model, e1, e2, spec: BarrierSpec):
        self.model, self.e1, self.e2, self.spec = _model(model), frac(e1), frac(e2), spec

    def __call__(self, g):
        return in_V(g, self.e1, self.e2, self.spec, self.model)

    def layer_mask(self, ball, k):
        a = _single_letter(self.model, self.spec.h)
        if a is None:
            return None
        lay = ball.layer(k)
        return v_layer(ball.letters_matrix[lay.start:lay.stop], k, self.e1, self.e2, a,
                       self.spec.m, self.spec.nu)

    def params(self):
        s = self.spec
        return {"eps1": str(self.e1), "eps2": str(self.e2), "h": format_word(s.h),
                "m": s.m, "nu": s.nu}


class ZPred(Predicate):
    name = "Z"

    def __init__(self, model, e1, e2, C):
        self.model, self.e1, self.e2, self.C = _model(model), frac(e1), frac(e2), C

    def __call__(self, u):
        return in_Z(u, self.e1, self.e2, self.C, self.model)

    def layer_mask(self, ball, k):
        if not self.model.is_tree:
            return None
        lay = ball.layer(k)
        return z_layer(ball.letters_matrix[lay.start:lay.stop], k, self.e1, self.e2, self.C)

    def params(self):
        return {"eps1": str(self.e1), "eps2": str(self.e2), "C": self.C}


class TPred(Predicate):
    name = "T"
    arity = 2

    def __init__(self, model, e1, e2, C):
        self.model, self.e1, self.e2, self.C = _model(model), frac(e1), frac(e2), C

    def __call__(self, u1, u2):
        return in_T(u1, u2, self.e1, self.e2, self.C, self.model)

    def pair_count(self, ball, layers):
        if not isinstance(self.model, FreeGroup):
            return None
        return t_pair_count(self.model.rank, list(layers), self.e1, self.e2, self.C)

    def params(self):
        return {"eps1": str(self.e1), "eps2": str(self.e2), "C": self.C}


class OPred(Predicate):
    name = "O"

    def __init__(self, ball, M1, M2, suborbit=None):
        self.ball, self.M1, self.M2 = ball, M1, M2
        self.model = ball.model
        self.suborbit = suborbit or AllVertices()

    def __call__(self, g):
        from .enumeration import in_O

        return in_O(g, self.M1, self.M2, self.suborbit, self.ball)

    def layer_mask(self, ball, k):
        if self.suborbit.everything:
            return np.zeros(ball.sphere_size(k), dtype=bool)
        return None

    def params(self):
        return {"M1": self.M1, "M2": self.M2, "suborbit": self.suborbit.label}


class CommutingPairs(Predicate):
    name = "commuting"
    arity = 2

    def __init__(self, model):
        self.model = _model(model)

    def __call__(self, u, v):
        return self.model.commutes(u, v)

    def pair_count(self, ball, layers):
        if not isinstance(self.model, FreeGroup):
            return None
        from .freeness import commuting_pair_count

        words = [ball.word(i) for k in layers for i in ball.layer(k)]
        return commuting_pair_count(words), len(words) ** 2


# -- density ---------------------------------------------------------------------------

def _eval(pred, args):
    try:
        return 1 if pred(*args) else 0
    except BudgetExceeded:
        return -1


def _chunk_single(pred, words):
    hits = unk = 0
    for w in words:
        r = _eval(pred, (w,))
        if r < 0:
            unk += 1
        else:
            hits += r
    return hits, unk


def _chunk_pairs(pred, rows, cols):
    hits = unk = 0
    for u in rows:
        for v in cols:
            r = _eval(pred, (u, v))
            if r < 0:
                unk += 1
            else:
                hits += r
    return hits, unk


def _chunks(seq, parts):
    size = max(1, math.ceil(len(seq) / parts))
    return [seq[i:i + size] for i in range(0, len(seq), size)]


def density(pred: Predicate, reg: Region, mode: str = "exact", samples: int = 10_000,
            seed: int = 0, workers: int = 1) -> DensityReport:
    """Exact or Monte Carlo density of ``pred`` over ``reg`` (or reg x reg for pairs)."""
    ball = reg.ball
    n = reg.params[0] if reg.kind != "big_annulus" else reg.params[1]
    label = reg.describe()
    if mode == "exact":
        if pred.arity == 1:
            masks = [pred.layer_mask(ball, k) for k in reg.layers()]
            if all(m is not None for m in masks):
                hits = int(sum(int(np.count_nonzero(m)) for m in masks))
                return _report(label, n, hits, 0, len(reg), "exact")
            words = reg.words()
            if workers > 1:
                with ProcessPoolExecutor(workers) as ex:
                    parts = list(ex.map(_chunk_single, [pred] * workers, _chunks(words, workers)))
            else:
                parts = [_chunk_single(pred, words)]
            hits = sum(p[0] for p in parts)
            unk = sum(p[1] for p in parts)
            return _report(label, n, hits, unk, len(words), "exact")
        fast = pred.pair_count(ball, list(reg.layers()))
        if fast is not None:
            return _report(label, n, fast[0], 0, fast[1], "exact")
        words = reg.words()
        if workers > 1:
            with ProcessPoolExecutor(workers) as ex:
                blocks = _chunks(words, workers)
                parts = list(ex.map(_chunk_pairs, [pred] * len(blocks), blocks,
                                    [words] * len(blocks)))
        else:
            parts = [_chunk_pairs(pred, words, words)]
        hits = sum(p[0] for p in parts)
        unk = sum(p[1] for p in parts)
        return _report(label, n, hits, unk, len(words) ** 2, "exact")
    if mode != "sampled":
        raise InputError(f"unknown mode {mode!r}")
    if samples < 1:
        raise InputError("samples must be positive")
    rng = np.random.default_rng(seed)
    draws = rng.integers(reg.start, reg.stop, size=(samples, pred.arity))
    hits = unk = 0
    for row in draws:
        r = _eval(pred, tuple(ball.word(int(i)) for i in row))
        if r < 0:
            unk += 1
        else:
            hits += r
    return _report(label, n, hits, unk, samples, "sampled")


def _report(label, n, hits, unk, total, mode):
    p = hits / total if total else 0.0
    se = 0.0 if mode == "exact" else math.sqrt(max(p * (1 - p), 0.0) / total)
    ex = Fraction(hits, total) if mode == "exact" and total else None
    return DensityReport(label, n, hits, unk, total, p, se, mode, ex)


def density_series(pred: Predicate, ball: BallIndex, kind: str, ns, delta: int = 0, rho=None,
                   mode: str = "exact", samples: int = 10_000, seed: int = 0,
                   workers: int = 1) -> list[DensityReport]:
    from .enumeration import region

    out = []
    for n in ns:
        reg = region(ball, kind, n, delta, rho)
        out.append(density(pred, reg, mode, samples, seed + n, workers))
    return out


def density_csv(reports: Sequence[DensityReport]) -> str:
    lines = ["n,count,total,density,se"]
    lines += [r.row() for r in reports]
    return "\n".join(lines) + "\n"
