"""Projections, contraction, quasi-convexity, axes and quasi-geodesic constants."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .enumeration import BallIndex, CyclicSuborbit
from .errors import BudgetExceeded, InputError
from .groups import GroupModel
from .words import IDENTITY, Word, format_word, invert as invert_word


def _model(obj) -> GroupModel:
    return obj.model if isinstance(obj, BallIndex) else obj


class VertexSet:
    """A finite set of group elements (vertices g.o) in one model."""

    def __init__(self, model: GroupModel, words: Iterable, label: str = ""):
        self.model = _model(model)
        ws = {self.model.word(w) for w in words}
        self.words = tuple(sorted(ws, key=lambda w: (len(w), w)))
        self._set = frozenset(ws)
        self.label = label

    def __len__(self):
        return len(self.words)

    def __iter__(self):
        return iter(self.words)

    def __contains__(self, w):
        return w in self._set

    def __eq__(self, other):
        return isinstance(other, VertexSet) and self._set == other._set

    def __hash__(self):
        return hash(self._set)

    def translate(self, g) -> "VertexSet":
        g = self.model.word(g)
        return VertexSet(self.model, (self.model.multiply(g, w) for w in self.words),
                         f"{format_word(g)}.{self.label}")

    def ids(self, ball: BallIndex) -> list:
        return sorted(ball.id_of(w) for w in self.words)

    def __repr__(self):
        return f"<VertexSet {self.label or ''} |{len(self)}|>"


class GeodesicPath:
    def __init__(self, model: GroupModel, vertices: Sequence, check: bool = True):
        self.model = _model(model)
        self.vertices = tuple(self.model.word(v) for v in vertices)
        if not self.vertices:
            raise InputError("a path needs at least one vertex")
        if check:
            for u, v in zip(self.vertices, self.vertices[1:]):
                if self.model.distance(u, v) != 1:
                    raise InputError("consecutive vertices are not adjacent")
            if self.model.distance(self.start, self.end) != len(self):
                raise InputError("path is not a geodesic")

    @property
    def start(self):
        return self.vertices[0]

    @property
    def end(self):
        return self.vertices[-1]

    def __len__(self):
        return len(self.vertices) - 1

    def subpath(self, i, j) -> "GeodesicPath":
        return GeodesicPath(self.model, self.vertices[i:j + 1], check=False)

    def translate(self, g) -> "GeodesicPath":
        return GeodesicPath(self.model, [self.model.multiply(g, v) for v in self.vertices],
                            check=False)

    def as_set(self) -> VertexSet:
        return VertexSet(self.model, self.vertices)


def normal_form_path(model: GroupModel, x, y=None) -> GeodesicPath:
    """The geodesic from x to y spelled by the normal form of x^-1 y."""
    model = _model(model)
    if y is None:
        x, y = IDENTITY, x
    x, y = model.word(x), model.word(y)
    w = model.multiply(model.invert(x), y)
    verts = [x]
    for letter in w:
        verts.append(model.multiply(verts[-1], (letter,)))
    return GeodesicPath(model, verts, check=False)


def geodesics(model, x, y, budget: int = 10_000):
    """All geodesics from x to y (interval test and DFS).

    Returns ``(paths, exhaustive)``; once ``budget`` paths have been produced
    the search stops and ``exhaustive`` is False.
    """
    model = _model(model)
    x, y = model.word(x), model.word(y)
    if model.is_tree:
        return [normal_form_path(model, x, y)], True
    out = []
    stack = [(x, (x,))]
    dist_cache = {}

    def d(v):
        if v not in dist_cache:
            dist_cache[v] = model.distance(v, y)
        return dist_cache[v]

    exhaustive = True
    while stack:
        v, path = stack.pop()
        dv = d(v)
        if dv == 0:
            out.append(GeodesicPath(model, path, check=False))
            if len(out) >= budget:
                exhaustive = not stack
                break
            continue
        nxt = []
        for s in model.letters:
            u = model.multiply(v, (s,))
            if d(u) == dv - 1:
                nxt.append(u)
        for u in reversed(nxt):
            stack.append((u, path + (u,)))
    return out, exhaustive


def iter_geodesics(model, x, y, budget: int = 10_000):
    """Yield geodesics lazily; raises BudgetExceeded after ``budget`` paths."""
    model = _model(model)
    x, y = model.word(x), model.word(y)
    if model.is_tree:
        yield normal_form_path(model, x, y)
        return
    stack = [(x, (x,))]
    dist_cache = {}
    count = 0

    def d(v):
        if v not in dist_cache:
            dist_cache[v] = model.distance(v, y)
        return dist_cache[v]

    while stack:
        v, path = stack.pop()
        dv = d(v)
        if dv == 0:
            count += 1
            if count > budget:
                raise BudgetExceeded(f"more than {budget} geodesics", achieved=budget)
            yield GeodesicPath(model, path, check=False)
            continue
        nxt = [u for u in (model.multiply(v, (s,)) for s in model.letters) if d(u) == dv - 1]
        for u in reversed(nxt):
            stack.append((u, path + (u,)))


# -- projections ---------------------------------------------------------------

def _points(A, model):
    if isinstance(A, (VertexSet, GeodesicPath)):
        return A.words if isinstance(A, VertexSet) else A.vertices
    if isinstance(A, tuple) and (not A or isinstance(A[0], int)):
        return [model.word(A)]
    return [model.word(a) for a in A]


def set_distance(model, y, X) -> int:
    model = _model(model)
    if hasattr(X, "distance") and not isinstance(X, VertexSet):
        return X.distance(y)
    pts = _points(X, model)
    if not pts:
        raise InputError("distance to an empty set")
    return min(model.distance(y, x) for x in pts)


def project(y, X, model=None) -> VertexSet:
    """Nearest-point projection Π_X(y) (full tie set); y may be a point or a set."""
    if hasattr(X, "project") and not isinstance(X, VertexSet):
        model = X.model
        pts = _points(y, model)
        out = set()
        for p in pts:
            out |= set(X.project(p))
        return VertexSet(model, out, "proj")
    model = _model(model) if model is not None else X.model
    if not len(X):
        raise InputError("projection onto an empty set")
    out = set()
    for p in _points(y, model):
        ds = [(model.distance(p, x), x) for x in X.words]
        m = min(d for d, _ in ds)
        out |= {x for d, x in ds if d == m}
    return VertexSet(model, out, "proj")


def diameter(model, pts) -> int:
    model = _model(model)
    pts = list(pts)
    if not pts:
        raise InputError("diameter of an empty set")
    best = 0
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            best = max(best, model.distance(pts[i], pts[j]))
    return best


def projection_diameter(A, X, model=None) -> int:
    model = _model(model) if model is not None else X.model
    if isinstance(A, (VertexSet, GeodesicPath)) and len(_points(A, model)) == 0:
        raise InputError("empty set")
    P = project(A, X, model)
    return diameter(model, P.words)


def hausdorff_distance(A: VertexSet, B: VertexSet, model=None) -> int:
    model = _model(model) if model is not None else A.model
    pa, pb = _points(A, model), _points(B, model)
    if not pa or not pb:
        raise InputError("Hausdorff distance needs non-empty sets")
    one = max(min(model.distance(a, b) for b in pb) for a in pa)
    two = max(min(model.distance(a, b) for a in pa) for b in pb)
    return max(one, two)


def neighborhood(X, r: int, ball: BallIndex | None = None) -> VertexSet:
    """N_r(X) = {x w : x in X, |w| <= r}, clipped to ``ball`` if given."""
    model = X.model
    small = _small_ball(model, r)
    out = set()
    for x in X.words:
        for w in small:
            p = model.multiply(x, w)
            if ball is None or len(p) <= ball.radius:
                out.add(p)
    return VertexSet(model, out, f"N_{r}({X.label})")


_SMALL = {}


def _small_ball(model, r):
    key = (model.spec_string(), r)
    if key not in _SMALL:
        from .enumeration import enumerate_ball

        _SMALL[key] = enumerate_ball(model, r).words()
    return _SMALL[key]


def sphere_words(model, r):
    return [w for w in _small_ball(model, r) if len(w) == r]


def axis(h, ball) -> VertexSet:
    """<h>.o ∩ B_radius (the axis is approximated by the cyclic orbit)."""
    model = _model(ball)
    h = model.word(h)
    if not h:
        raise InputError("axis of the identity is undefined")
    radius = ball.radius if isinstance(ball, BallIndex) else None
    if radius is None:
        raise InputError("axis needs a BallIndex to bound the powers")
    orb = CyclicSuborbit(model, h)
    return VertexSet(model, orb.powers_within(radius), f"Ax({format_word(h)})")


def entry_exit(gamma: GeodesicPath, X, C: int):
    """First and last vertices of gamma within C of X, or None."""
    model = gamma.model
    hits = [i for i, v in enumerate(gamma.vertices) if set_distance(model, v, X) <= C]
    if not hits:
        return None
    return gamma.vertices[hits[0]], gamma.vertices[hits[-1]]


def entry_exit_index(gamma: GeodesicPath, X, C: int):
    model = gamma.model
    hits = [i for i, v in enumerate(gamma.vertices) if set_distance(model, v, X) <= C]
    if not hits:
        return None
    return hits[0], hits[-1]


class AxisNeighborhood:
    """The contracting set g . N_C(<h>.o), unbounded; exact distances and projections."""

    def __init__(self, model: GroupModel, g, h, C: int):
        self.model = _model(model)
        self.g = self.model.word(g)
        self.h = self.model.word(h)
        if not self.h:
            raise InputError("h must be non-trivial")
        self.C = int(C)
        self._orbit = CyclicSuborbit(self.model, self.h)
        self._ginv = self.model.invert(self.g)

    def _local(self, y):
        return self.model.multiply(self._ginv, self.model.word(y))

    def axis_distance(self, y) -> int:
        return self._orbit.distance(self.model, self._local(y))

    def distance(self, y) -> int:
        return max(self.axis_distance(y) - self.C, 0)

    def contains(self, y) -> bool:
        return self.axis_distance(y) <= self.C

    def _axis_projection(self, z):
        m = self.model
        if self._orbit._single:
            a = self.h[0]
            k = 0
            while k < len(z) and abs(z[k]) == abs(a):
                k += 1
            return [z[:k]]
        pw = self._orbit.powers_within(2 * len(z))
        ds = [(m.distance(z, p), p) for p in pw]
        best = min(d for d, _ in ds)
        return [p for d, p in ds if d == best]

    def project(self, y) -> list:
        m = self.model
        z = self._local(y)
        dz = self._orbit.distance(m, z)
        if dz <= self.C:
            local = [z]
        elif self._orbit._single:
            p = self._axis_projection(z)[0]
            local = [z[: len(p) + self.C]]
        else:
            target = dz - self.C
            local = set()
            for p in self._axis_projection(z):
                for w in sphere_words(m, self.C):
                    q = m.multiply(p, w)
                    if m.distance(z, q) == target:
                        local.add(q)
            local = sorted(local)
        return [m.multiply(self.g, q) for q in local]

    def same_set(self, other: "AxisNeighborhood") -> bool:
        if self.model != other.model or self.C != other.C:
            return False
        if self.h != other.h and self.h != self.model.invert(other.h):
            return False
        return in_cyclic(self.model, self.model.multiply(self._ginv, other.g), self.h)

    def __repr__(self):
        return f"<{format_word(self.g)}.N_{self.C}(<{format_word(self.h)}>)>"


def in_cyclic(model, g, h) -> bool:
    model = _model(model)
    g = model.word(g)
    if not g:
        return True
    orbit = CyclicSuborbit(model, h)
    if orbit._single:
        return orbit.distance(model, g) == 0
    return g in set(orbit.powers_within(len(g)))


# -- contraction -------------------------------------------------------------------

@dataclass
class ContractionResult:
    kappa: int | None
    profile: dict
    exhaustive: bool
    tested: int
    records: list = field(default_factory=list, repr=False)

    @property
    def found(self) -> bool:
        return self.kappa is not None

    def describe(self) -> str:
        return "none within radius" if self.kappa is None else str(self.kappa)

    def csv(self) -> str:
        lines = ["r,kappa"]
        for r, k in sorted(self.profile.items()):
            lines.append(f"{r},{k}")
        return "\n".join(lines) + "\n"


def _kappa_from_records(records, r):
    sub = [(d, p) for (rad, d, p) in records if rad <= r]
    if not sub:
        return 0
    top = max(max(d, p) for d, p in sub) + 1
    for kappa in range(0, top + 1):
        if all(p <= kappa for d, p in sub if d >= kappa):
            return kappa
    return top


def _endpoint_pairs(ball, X, samples, rng):
    model = ball.model
    R = ball.radius
    n = len(ball)
    xs = X.words
    pairs = []
    # pairs of points of X
    for i in range(len(xs)):
        for j in range(i + 1, len(xs)):
            pairs.append((xs[i], xs[j]))
    # parallel translates x1 w, x2 w
    for _ in range(samples // 2):
        w = ball.word(int(rng.integers(0, n)))
        x1, x2 = xs[int(rng.integers(0, len(xs)))], xs[int(rng.integers(0, len(xs)))]
        pairs.append((model.multiply(x1, w), model.multiply(x2, w)))
    # one endpoint near X, one anywhere; and two uniform endpoints
    for _ in range(samples // 4):
        x = xs[int(rng.integers(0, len(xs)))]
        w = ball.word(int(rng.integers(0, ball.ball_size(min(3, R)))))
        pairs.append((model.multiply(x, w), ball.word(int(rng.integers(0, n)))))
    for _ in range(samples - samples // 2 - samples // 4):
        pairs.append((ball.word(int(rng.integers(0, n))), ball.word(int(rng.integers(0, n)))))
    return [(p, q) for p, q in pairs if len(p) <= R and len(q) <= R and p != q]


def contraction_constant(X: VertexSet, ball: BallIndex, samples: int = 600, seed: int = 0,
                         geodesic_budget: int = 64) -> ContractionResult:
    """Empirical contraction constant of X inside ``ball``.

    For tested geodesics gamma we record d(gamma, X) and diam Π_X(gamma).
    kappa(r) is the least kappa such that every tested geodesic inside B_r
    with d(gamma, X) >= kappa has projection diameter <= kappa.  A value is
    reported only when kappa(r) is constant for r in [R/2, R]; a profile that
    keeps growing with r means X is not contracting at this scale.
    """
    if not len(X):
        raise InputError("X must be non-empty")
    model = ball.model
    rng = np.random.default_rng(seed)
    records = []
    exhaustive = True
    dcache = {}

    def dX(v):
        if v not in dcache:
            dcache[v] = set_distance(model, v, X)
        return dcache[v]

    pcache = {}

    def proj(v):
        if v not in pcache:
            pcache[v] = project(v, X).words
        return pcache[v]

    for p, q in _endpoint_pairs(ball, X, samples, rng):
        paths, exh = geodesics(model, p, q, budget=geodesic_budget)
        exhaustive &= exh
        for g in paths:
            rad = max(len(v) for v in g.vertices)
            if rad > ball.radius:
                continue
            d = min(dX(v) for v in g.vertices)
            pts = set()
            for v in g.vertices:
                pts.update(proj(v))
            records.append((rad, d, diameter(model, pts)))
    R = ball.radius
    profile = {r: _kappa_from_records(records, r) for r in range((R + 1) // 2, R + 1)}
    vals = set(profile.values())
    kappa = vals.pop() if len(vals) == 1 else None
    return ContractionResult(kappa, profile, exhaustive, len(records), records)


def quasi_convexity_profile(X: VertexSet, r: int, ball: BallIndex, samples: int = 4000,
                            seed: int = 0, geodesic_budget: int = 64):
    """σ(r): the largest distance to X of a tested geodesic with endpoints in N_r(X).

    Returns ``(sigma, witness)`` where the witness is a GeodesicPath attaining it.
    """
    model = ball.model
    N = neighborhood(X, r, ball).words
    pairs = [(N[i], N[j]) for i in range(len(N)) for j in range(i + 1, len(N))]
    if len(pairs) > samples:
        rng = np.random.default_rng(seed)
        pick = rng.choice(len(pairs), size=samples, replace=False)
        pairs = [pairs[i] for i in sorted(pick)]
    best, witness = 0, None
    for p, q in pairs:
        paths, _ = geodesics(model, p, q, budget=geodesic_budget)
        for g in paths:
            s = max(set_distance(model, v, X) for v in g.vertices)
            if witness is None or s > best:
                best, witness = s, g
    if witness is None and N:
        witness = GeodesicPath(model, [N[0]], check=False)
        best = set_distance(model, N[0], X)
    return best, witness


def bounded_projection_constant(h, ball: BallIndex, C: int = 0, translates: int = 200,
                                seed: int = 0) -> int:
    """Largest diam Π_X(f X ∩ ball) seen over translates f X ≠ X, X = N_C(Ax(h))."""
    model = ball.model
    X = neighborhood(axis(h, ball), C, ball) if C else axis(h, ball)
    rng = np.random.default_rng(seed)
    best = 0
    for _ in range(translates):
        f = ball.word(int(rng.integers(0, len(ball))))
        if in_cyclic(model, f, model.word(h)):
            continue
        fX = [w for w in X.translate(f).words if len(w) <= ball.radius]
        if fX:
            best = max(best, projection_diameter(VertexSet(model, fX), X))
    return best


# -- quasi-geodesics ----------------------------------------------------------------

@dataclass
class QIConstants:
    lam: Fraction | float
    c: int
    exhaustive: bool
    tested: int


def _path_steps(model, verts):
    steps = []
    for u, v in zip(verts, verts[1:]):
        s = model.multiply(model.invert(u), v)
        if len(s) != 1:
            raise InputError("consecutive path vertices are not adjacent")
        steps.append(s[0])
    return steps


def _tree_row(steps, i):
    """d(v_i, v_j) for all j > i along a path in a tree."""
    stack = []
    out = []
    for s in steps[i:]:
        if stack and stack[-1] == -s:
            stack.pop()
        else:
            stack.append(s)
        out.append(len(stack))
    return out


def _pairs(model, verts, budget, seed):
    n = len(verts)
    total = n * (n - 1) // 2
    if model.is_tree:
        steps = _path_steps(model, verts)
        for i in range(n - 1):
            for off, d in enumerate(_tree_row(steps, i)):
                yield i, i + off + 1, d
        return
    _path_steps(model, verts)
    if total <= budget:
        for i in range(n):
            for j in range(i + 1, n):
                yield i, j, model.distance(verts[i], verts[j])
        return
    rng = np.random.default_rng(seed)
    for _ in range(budget):
        i, j = sorted(rng.choice(n, size=2, replace=False))
        yield int(i), int(j), model.distance(verts[i], verts[j])


def _verts(path, model):
    if isinstance(path, GeodesicPath):
        return path.model, list(path.vertices)
    if model is None:
        raise InputError("a model is needed for a raw vertex list")
    model = _model(model)
    return model, [model.word(v) for v in path]


def qi_constants(path, model=None, budget: int = 200_000, seed: int = 0) -> QIConstants:
    """Best λ (with c = 0) and best c (with λ = 1) over tested subpaths."""
    model, verts = _verts(path, model)
    if len(verts) < 2:
        _path_steps(model, verts)
        return QIConstants(Fraction(1), 0, True, 0)
    num, den = 1, 1
    inf = False
    c = 0
    tested = 0
    n = len(verts)
    for i, j, d in _pairs(model, verts, budget, seed):
        tested += 1
        ell = j - i
        if d == 0:
            inf = True
        elif ell * den > num * d:
            num, den = ell, d
        if ell - d > c:
            c = ell - d
    lam = float("inf") if inf else Fraction(num, den)
    exhaustive = model.is_tree or n * (n - 1) // 2 <= budget
    return QIConstants(lam, c, exhaustive, tested)


def qi_check(path, lam, c=0, model=None, budget: int = 200_000, seed: int = 0):
    """First subpath (i, j) with j - i > λ d(v_i, v_j) + c, or None."""
    model, verts = _verts(path, model)
    if len(verts) < 2:
        _path_steps(model, verts)
        return None
    if isinstance(lam, float) and math.isinf(lam):
        return None
    lam = Fraction(lam)
    c = Fraction(c)
    p, q = lam.numerator * c.denominator, lam.denominator * c.denominator
    r = c.numerator * lam.denominator
    for i, j, d in _pairs(model, verts, budget, seed):
        if q * (j - i) > p * d + r:
            return (i, j)
    return None


def concat_vertices(model, *paths) -> list:
    """Concatenate vertex lists that share endpoints."""
    out = []
    for p in paths:
        vs = list(p.vertices if isinstance(p, GeodesicPath) else p)
        if out and vs:
            if out[-1] != vs[0]:
                raise InputError("paths do not share endpoints")
            vs = vs[1:]
        out.extend(vs)
    return out
