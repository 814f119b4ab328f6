"""Admissible-path construction, freeness certification and relation search."""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import __version__
from .barriers import (
    BarrierSpec,
    NegligibleParams,
    find_barrier,
    frac,
    in_T,
    in_V,
    in_W,
    in_Z,
    window,
)
from .enumeration import BallIndex, Region
from .errors import BudgetExceeded, ConstructionFailure, InputError, RangeExceeded
from .geometry import (
    AxisNeighborhood,
    GeodesicPath,
    _model,
    concat_vertices,
    diameter,
    normal_form_path,
    qi_check,
    qi_constants,
)
from .groups import FreeGroup, GroupModel, shortlex_key
from .words import IDENTITY, Word, common_prefix, concat_reduced, format_word, free_reduce, invert as invert_word

DEFAULT_L = 6
DEFAULT_LAMBDA = 4


def tuple_letter_name(x: int) -> str:
    base = f"u{abs(x)}"
    return base if x > 0 else base + "^-1"


def format_tuple_word(W) -> str:
    return " ".join(tuple_letter_name(x) for x in W) if W else "1"


def evaluate(model, tup: Sequence[Word], W: Sequence[int]) -> Word:
    out = IDENTITY
    for x in W:
        u = tup[abs(x) - 1]
        out = model.multiply(out, u if x > 0 else model.invert(u))
    return out


def reduced_words(k: int, max_len: int, min_len: int = 1):
    """Freely reduced words over u1^±1 .. uk^±1 in shortlex order."""
    letters = []
    for i in range(1, k + 1):
        letters += [i, -i]
    layer = [()]
    if min_len <= 0:
        yield ()
    for n in range(1, max_len + 1):
        nxt = []
        for w in layer:
            for x in letters:
                if w and w[-1] == -x:
                    continue
                nxt.append(w + (x,))
        layer = nxt
        if n >= min_len:
            yield from layer


def is_cyclically_reduced(W) -> bool:
    return len(W) <= 1 or W[0] != -W[-1]


def cyclic_class_rep(W) -> tuple:
    cands = []
    for w in (tuple(W), invert_word(W)):
        for i in range(len(w)):
            cands.append(w[i:] + w[:i])
    return min(cands, key=lambda w: tuple((abs(x), x < 0) for x in w))


def cyclic_words(k: int, max_len: int) -> list:
    """Cyclically reduced words up to rotation and inversion."""
    out = {}
    for W in reduced_words(k, max_len):
        if is_cyclically_reduced(W):
            rep = cyclic_class_rep(W)
            out.setdefault(rep, None)
    return sorted(out, key=lambda w: (len(w), tuple((abs(x), x < 0) for x in w)))


# -- the generic set of tuples ------------------------------------------------------

@dataclass
class MembershipResult:
    length_condition: bool
    element_condition: bool
    pair_condition: bool
    details: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.length_condition and self.element_condition and self.pair_condition

    def __bool__(self):
        return self.holds


def generic_membership(tup, params: NegligibleParams, spec: BarrierSpec, ball,
                       zt_constant: int | None = None) -> MembershipResult:
    """Evaluate the three conditions defining the generic set of tuples.

    (1) |u_i| >= rho max_j |u_j|;
    (2) u_i^{±1} avoids V(2 eps, 1 - 2 eps, h^m), W(eps, h, C), Z(eps, 1 - eps, C');
    (3) (u_i^{±1}, u_j^{±1}) avoids T(eps, 1 - eps, C') for i != j.
    C' is ``zt_constant`` (default C).
    """
    params.check_generic_regime()
    model = _model(ball)
    tup = [model.word(u) for u in tup]
    if not tup:
        raise InputError("empty tuple")
    eps, C = params.eps, params.C
    Czt = C if zt_constant is None else zt_constant
    top = max(len(u) for u in tup)
    cond1 = all(len(u) >= params.rho * top for u in tup)
    details = {"lengths": [len(u) for u in tup], "V": [], "W": [], "Z": [], "T": []}
    signed = []
    for i, u in enumerate(tup):
        for s, x in ((1, u), (-1, model.invert(u))):
            signed.append((i, s, x))
    cond2 = True
    for i, s, x in signed:
        v = in_V(x, 2 * eps, 1 - 2 * eps, spec, model)
        w = in_W(x, eps, spec.h, C, model)
        z = in_Z(x, eps, 1 - eps, Czt, model)
        if v:
            details["V"].append((i + 1) * s)
        if w:
            details["W"].append((i + 1) * s)
        if z:
            details["Z"].append((i + 1) * s)
        cond2 &= not (v or w or z)
    cond3 = True
    for (i, s, x), (j, t, y) in itertools.product(signed, signed):
        if i == j:
            continue
        if in_T(x, y, eps, 1 - eps, Czt, model):
            details["T"].append(((i + 1) * s, (j + 1) * t))
            cond3 = False
    return MembershipResult(cond1, cond2, cond3, details)


# -- admissible paths -----------------------------------------------------------------

@dataclass
class PathWitness:
    model: GroupModel = field(repr=False)
    p: list                  # GeodesicPath segments p_0 .. p_n
    q: list                  # GeodesicPath segments q_1 .. q_n (q[i] joins p[i], p[i+1])
    sets: list               # AxisNeighborhood attached to each p_i
    barriers: list           # barrier elements g_j
    entries: list            # v_j
    exits: list              # w_j
    letters: tuple = ()
    cyclic: bool = False

    @property
    def start(self):
        return self.p[0].start

    @property
    def end(self):
        return self.p[-1].end

    def vertices(self) -> list:
        parts = [self.p[0]]
        for qi, pi in zip(self.q, self.p[1:]):
            parts += [qi, pi]
        return concat_vertices(self.model, *parts)

    def length(self) -> int:
        return sum(len(x) for x in self.p) + sum(len(x) for x in self.q)


@dataclass
class _LetterData:
    path: GeodesicPath
    barrier: Word
    entry: int
    exit: int


def _letter_data(model, u, spec: BarrierSpec, C: int, eps, hm, letter) -> _LetterData:
    alpha = normal_form_path(model, u)
    n = len(alpha)
    lo, hi = window(n, 2 * frac(eps), 1 - 2 * frac(eps))
    win = list(alpha.vertices[lo:hi + 1]) if lo <= hi else []
    z = find_barrier(win, spec.nu, hm, model)
    if z is None:
        raise ConstructionFailure(
            f"no ({spec.nu}, h^{spec.m})-barrier in the window of {tuple_letter_name(letter)}",
            segment=letter)
    X = AxisNeighborhood(model, z, spec.h, C)
    hits = [i for i, v in enumerate(alpha.vertices) if X.contains(v)]
    if not hits:
        raise ConstructionFailure(
            f"{tuple_letter_name(letter)} misses N_C of its barrier axis", segment=letter)
    return _LetterData(alpha, z, hits[0], hits[-1])


def build_admissible_path(tup, W, spec: BarrierSpec, C: int, ball, eps=Fraction(1, 5),
                          cyclic: bool = False) -> PathWitness:
    """Truncated concatenation p q p ... q p for the word W over the tuple.

    Each letter segment gamma^j is the prefix translate of the normal-form
    geodesic of its letter.  A (nu, h^m)-barrier g_j in the window
    [2 eps, 1 - 2 eps] fixes X_j = g_j N_C(<h>.o); v_j, w_j are the entry and
    exit of gamma^j into X_j, and consecutive ones are joined by geodesics.
    With ``cyclic`` the path runs from v_1 to W v_1 (one extra letter).
    """
    model = _model(ball)
    tup = [model.word(u) for u in tup]
    W = tuple(W)
    if not W:
        raise InputError("W must be non-empty")
    if any(x == 0 or abs(x) > len(tup) for x in W):
        raise InputError("W uses a letter outside the tuple")
    if free_reduce(W) != W:
        raise InputError("W must be freely reduced")
    if cyclic and not is_cyclically_reduced(W):
        raise InputError("cyclic construction needs a cyclically reduced W")
    hm = spec.element(model)
    cache = {}
    seq = W + (W[0],) if cyclic else W
    p, q, sets, bars, ent, ext = [], [], [], [], [], []
    prefix = IDENTITY
    for j, x in enumerate(seq):
        if x not in cache:
            u = tup[abs(x) - 1] if x > 0 else model.invert(tup[abs(x) - 1])
            cache[x] = _letter_data(model, u, spec, C, eps, hm, x)
        d = cache[x]
        gamma = d.path.translate(prefix)
        g = model.multiply(prefix, d.barrier)
        X = AxisNeighborhood(model, g, spec.h, C)
        v, w = gamma.vertices[d.entry], gamma.vertices[d.exit]
        last = cyclic and j == len(seq) - 1
        seg = gamma.subpath(d.entry, d.entry if last else d.exit)
        if p:
            q.append(normal_form_path(model, ext[-1], v))
        p.append(seg)
        sets.append(X)
        bars.append(g)
        ent.append(v)
        ext.append(v if last else w)
        u = tup[abs(x) - 1] if x > 0 else model.invert(tup[abs(x) - 1])
        prefix = model.multiply(prefix, u)
    return PathWitness(model, p, q, sets, bars, ent, ext, W, cyclic)


@dataclass
class AdmissibleResult:
    ok: bool
    condition: str | None = None
    index: int | None = None

    def __bool__(self):
        return self.ok


def check_admissible(witness: PathWitness, D, tau) -> AdmissibleResult:
    """Check (LL1), (BP) and (LL2) with exact projections."""
    model = witness.model
    p, q, X = witness.p, witness.q, witness.sets
    if len(q) != len(p) - 1 or len(X) != len(p) or not p:
        raise InputError("malformed witness: segment counts do not match")
    for i in range(len(q)):
        if q[i].start != p[i].end or q[i].end != p[i + 1].start:
            raise InputError(f"malformed witness: q_{i + 1} does not join p_{i} and p_{i + 1}")
    for i, (pi, Xi) in enumerate(zip(p, X)):
        if not (Xi.contains(pi.start) and Xi.contains(pi.end)):
            raise InputError(f"malformed witness: p_{i} has an endpoint outside X_{i}")
    g_start, g_end = witness.start, witness.end
    for i, pi in enumerate(p):
        if pi.start == g_start or pi.end == g_end:
            continue
        if not len(pi) > D:
            return AdmissibleResult(False, "LL1", i)
    for i, Xi in enumerate(X):
        before = [g_start] if i == 0 else list(q[i - 1].vertices)
        after = [g_end] if i == len(p) - 1 else list(q[i].vertices)
        for seg in (before, after):
            pts = set()
            for v in seg:
                pts.update(Xi.project(v))
            if diameter(model, pts) > tau:
                return AdmissibleResult(False, "BP", i)
    for i in range(len(p) - 1):
        if X[i].same_set(X[i + 1]) and not len(q[i]) > D:
            return AdmissibleResult(False, "LL2", i)
    return AdmissibleResult(True)


# -- relation search --------------------------------------------------------------------

@dataclass
class FalsifyResult:
    relation: tuple | None
    distortion: float | None
    tested: int

    @property
    def found(self) -> bool:
        return self.relation is not None


def falsify_freeness(tup, L: int, ball) -> FalsifyResult:
    """Evaluate every freely reduced word up to length L; report the first
    relation (shortlex order) and min |W(u)| / |W| over the tested words."""
    if L < 1:
        raise InputError("L >= 1 required")
    model = _model(ball)
    tup = [model.word(u) for u in tup]
    k = len(tup)
    vals = {}
    for i in range(1, k + 1):
        vals[i] = tup[i - 1]
        vals[-i] = model.invert(tup[i - 1])
    layer = [((), IDENTITY)]
    best = None
    tested = 0
    letters = [x for i in range(1, k + 1) for x in (i, -i)]
    for n in range(1, L + 1):
        nxt = []
        for w, val in layer:
            for x in letters:
                if w and w[-1] == -x:
                    continue
                nv = model.multiply(val, vals[x])
                nw = w + (x,)
                tested += 1
                if not nv:
                    return FalsifyResult(nw, 0.0, tested)
                r = len(nv) / n
                best = r if best is None else min(best, r)
                nxt.append((nw, nv))
        layer = nxt
    return FalsifyResult(None, best, tested)


def has_relation(tup, L: int, model) -> bool:
    """Meet in the middle: a relation of length <= L exists iff two distinct
    reduced words of lengths <= ceil(L/2) and <= floor(L/2) agree."""
    model = _model(model)
    tup = [model.word(u) for u in tup]
    k = len(tup)
    if any(not u for u in tup):
        return True
    vals = {}
    for i in range(1, k + 1):
        vals[i] = tup[i - 1]
        vals[-i] = model.invert(tup[i - 1])
    big, small = (L + 1) // 2, L // 2
    layer = [((), IDENTITY)]
    seen = {IDENTITY: ()}
    allw = [((), IDENTITY)]
    for n in range(1, big + 1):
        nxt = []
        for w, val in layer:
            for x in vals:
                if w and w[-1] == -x:
                    continue
                nv = model.multiply(val, vals[x])
                nw = w + (x,)
                if n <= small:
                    if nv in seen:
                        return True
                    seen[nv] = nw
                else:
                    if nv in seen:
                        return True
                nxt.append((nw, nv))
        layer = nxt
    return False


# -- commuting oracle (free groups) ---------------------------------------------------

def primitive_root(w: Word) -> Word:
    """Primitive root of a non-trivial reduced word, normalised up to inversion."""
    c = 0
    while c < len(w) // 2 and w[c] == -w[len(w) - 1 - c]:
        c += 1
    core = w[c:len(w) - c]
    n = len(core)
    p = n
    for d in range(1, n + 1):
        if n % d == 0 and core == core[:d] * (n // d):
            p = d
            break
    root = w[:c] + core[:p] + w[len(w) - c:]
    inv = invert_word(root)
    return min(root, inv, key=shortlex_key)


def commuting_pair_count(words: Sequence[Word]) -> int:
    """Ordered pairs (u, v) of the list that commute in the free group."""
    ident = sum(1 for w in words if not w)
    groups = {}
    for w in words:
        if w:
            r = primitive_root(w)
            groups[r] = groups.get(r, 0) + 1
    n = len(words)
    return sum(c * c for c in groups.values()) + (2 * ident * n - ident * ident)


# -- Nielsen filter ---------------------------------------------------------------------

def _lcp_block(X, lx, Y, ly):
    """LCP matrix between padded rows X (b, R) and Y (N, R)."""
    eq = X[:, None, :] == Y[None, :, :]
    lcp = np.cumprod(eq, axis=2, dtype=np.int8).sum(axis=2, dtype=np.int16)
    return np.minimum(lcp, np.minimum(lx[:, None], ly[None, :]))


def _inverse_matrix(mat, lengths):
    R = mat.shape[1]
    out = np.zeros_like(mat)
    for l in np.unique(lengths):
        rows = np.nonzero(lengths == l)[0]
        if l:
            out[np.ix_(rows, np.arange(l))] = -mat[np.ix_(rows, np.arange(l - 1, -1, -1))]
    return out


def nielsen_proven_free(mat_u, lu, inv_u, mat_v, lv, inv_v, s_u, s_v):
    """Boolean matrix: {u, v} is Nielsen reduced, hence a free basis."""
    A = _lcp_block(mat_u, lu, mat_v, lv)
    B = _lcp_block(mat_u, lu, inv_v, lv)
    Cm = _lcp_block(inv_u, lu, mat_v, lv)
    Dm = _lcp_block(inv_u, lu, inv_v, lv)
    LU = lu[:, None].astype(np.int32)
    LV = lv[None, :].astype(np.int32)
    SU = s_u[:, None].astype(np.int32)
    SV = s_v[None, :].astype(np.int32)
    cross = np.maximum(np.maximum(A, B), np.maximum(Cm, Dm)).astype(np.int32)
    ok = (2 * SU <= LU) & (2 * SV <= LV) & (2 * cross <= np.minimum(LU, LV))
    ok &= np.maximum(SU, np.maximum(A, B)) + np.maximum(SU, np.maximum(Cm, Dm)) < LU
    ok &= np.maximum(SV, np.maximum(A, Cm)) + np.maximum(SV, np.maximum(B, Dm)) < LV
    ok &= (LU > 0) & (LV > 0)
    return ok


def free_pair_relation_count(reg: Region, L: int, block: int = 64) -> int:
    """Exact number of ordered pairs of ``reg`` (free group) with a relation of length <= L."""
    ball = reg.ball
    model = ball.model
    mat = ball.letters_matrix[reg.start:reg.stop]
    lengths = ball.lengths[reg.start:reg.stop].astype(np.int16)
    inv = _inverse_matrix(mat, lengths)
    s = _lcp_block(mat, lengths, inv, lengths).diagonal() if len(mat) <= 2048 else \
        np.array([common_prefix(tuple(mat[i, :lengths[i]]), tuple(inv[i, :lengths[i]]))
                  for i in range(len(mat))], dtype=np.int16)
    rows = np.nonzero((mat[:, 0] == 1) & (lengths > 0))[0]
    ident = np.nonzero(lengths == 0)[0]
    words = None
    count = 0
    for b0 in range(0, len(rows), block):
        r = rows[b0:b0 + block]
        ok = nielsen_proven_free(mat[r], lengths[r], inv[r], mat, lengths, inv, s[r], s)
        bad_i, bad_j = np.nonzero(~ok)
        if len(bad_i):
            if words is None:
                words = [tuple(int(x) for x in mat[i, :lengths[i]]) for i in range(len(mat))]
            for i, j in zip(bad_i, bad_j):
                if has_relation((words[r[i]], words[j]), L, model):
                    count += 1
    count *= 2 * model.rank
    # identity rows: (1, v) always satisfies the relation u1 = 1
    count += len(ident) * len(mat)
    return count


# -- certification -------------------------------------------------------------------------

@dataclass
class WordResult:
    word: str
    admissible: bool
    failure: str | None
    qi_ok: bool | None
    lam: str | None


@dataclass
class FreenessCertificate:
    tuple: list
    params: dict
    words: list
    verdict: str
    relation: str | None = None
    diagnostic: str | None = None
    membership: dict | None = None
    version: str = __version__
    seed: int | None = None

    @property
    def certified(self) -> bool:
        return self.verdict == "certified"

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=2, default=str)


def default_spec(model, C, D, h=None, nu=None) -> BarrierSpec:
    model = _model(model)
    h = model.word(h) if h is not None else (1,)
    nu = C if nu is None else nu
    return BarrierSpec.minimal(model, h, D, nu)


def certify_tuple(tup, params: NegligibleParams | None = None, L: int = DEFAULT_L, ball=None,
                  spec: BarrierSpec | None = None, D=None, tau=None, Lambda=DEFAULT_LAMBDA,
                  zt_constant=None, seed=None, qi_budget: int = 200_000) -> FreenessCertificate:
    """Certified up to L, falsified by a relation, or inconclusive.

    Order: brute-force relation search, the generic-set conditions, then for
    each cyclically reduced word up to L (up to rotation and inversion) the
    cyclic admissible path, the (LL1, BP, LL2) check and a (Lambda, 0)
    quasi-geodesic check.
    """
    model = _model(ball)
    params = params or NegligibleParams()
    C = params.C
    D = 16 * C + 1 if D is None else D
    tau = 9 * C if tau is None else tau
    spec = spec or default_spec(model, C, D)
    zt = 4 * C if zt_constant is None else zt_constant
    tup = [model.word(u) for u in tup]
    names = [model.format(u) for u in tup]
    pdict = {"eps": str(params.eps), "rho": str(params.rho), "C": C, "D": D, "tau": tau,
             "h": model.format(spec.h), "m": spec.m, "nu": spec.nu, "L": L,
             "Lambda": str(Lambda), "zt_constant": zt, "model": model.spec_string()}
    cert = FreenessCertificate(names, pdict, [], "inconclusive", seed=seed)
    try:
        fal = falsify_freeness(tup, L, model)
    except RangeExceeded as exc:
        cert.diagnostic = f"range: {exc}"
        return cert
    if fal.found:
        cert.verdict = "falsified"
        cert.relation = format_tuple_word(fal.relation)
        return cert
    try:
        mem = generic_membership(tup, params, spec, model, zt_constant=zt)
    except (RangeExceeded, BudgetExceeded) as exc:
        cert.diagnostic = f"membership undecided: {exc}"
        return cert
    except InputError as exc:
        cert.diagnostic = str(exc)
        return cert
    cert.membership = {"length": mem.length_condition, "elements": mem.element_condition,
                       "pairs": mem.pair_condition,
                       "details": {k: v for k, v in mem.details.items()}}
    if not mem.holds:
        cert.diagnostic = "tuple is outside the generic set (membership is one-sided)"
        return cert
    all_ok = True
    for W in cyclic_words(len(tup), L):
        name = format_tuple_word(W)
        try:
            wit = build_admissible_path(tup, W, spec, C, model, params.eps, cyclic=True)
        except ConstructionFailure as exc:
            cert.words.append(WordResult(name, False, f"construction: {exc}", None, None))
            all_ok = False
            continue
        except RangeExceeded as exc:
            cert.words.append(WordResult(name, False, f"range: {exc}", None, None))
            all_ok = False
            continue
        res = check_admissible(wit, D, tau)
        verts = wit.vertices()
        viol = qi_check(verts, Lambda, 0, model=model, budget=qi_budget)
        lam = qi_constants(verts, model=model, budget=qi_budget).lam
        failure = None if res.ok else f"{res.condition} at {res.index}"
        if viol is not None:
            failure = (failure + "; " if failure else "") + f"QI violated on {viol}"
        cert.words.append(WordResult(name, res.ok, failure, viol is None, str(lam)))
        all_ok &= res.ok and viol is None
    if all_ok:
        cert.verdict = "certified"
    else:
        cert.diagnostic = "some word failed the construction or its checks"
    return cert


def _is_proper_power(r: Word) -> bool:
    n = len(r)
    return any(n % d == 0 and r == r[:d] * (n // d) for d in range(1, n))


def torsion_free(model) -> bool:
    """Free, free abelian and right-angled Artin groups are torsion-free, and so
    is a C'(1/6) group whose relators are not proper powers."""
    rels = getattr(model, "relators", None)
    if rels is None:
        return True
    return not any(_is_proper_power(r) for r in rels)


def single_element_certificate(u, ball, L: int = DEFAULT_L, seed=None) -> FreenessCertificate:
    """k = 1: a non-trivial element of a torsion-free group generates Z."""
    model = _model(ball)
    u = model.word(u)
    cert = FreenessCertificate([model.format(u)], {"L": L, "model": model.spec_string()}, [],
                               "inconclusive", seed=seed)
    if not u:
        cert.verdict = "falsified"
        cert.relation = "u1"
        return cert
    if torsion_free(model):
        cert.verdict = "certified"
        cert.diagnostic = "non-trivial element of a torsion-free group"
        return cert
    fal = falsify_freeness([u], L, model)
    if fal.found:
        cert.verdict = "falsified"
        cert.relation = format_tuple_word(fal.relation)
    else:
        cert.diagnostic = f"no torsion relation up to length {L}; the model may have torsion"
    return cert


# -- genericity ------------------------------------------------------------------------------

@dataclass
class GenericityRow:
    n: int
    total: int
    falsified: int
    certified: int
    inconclusive: int
    mode: str
    se: float = 0.0

    @property
    def relation_fraction(self) -> float:
        return self.falsified / self.total if self.total else 0.0

    @property
    def certified_fraction(self) -> float:
        return self.certified / self.total if self.total else 0.0

    @property
    def exact_relation_fraction(self) -> Fraction:
        return Fraction(self.falsified, self.total)


def genericity_experiment(k: int, ns, ball: BallIndex, mode: str = "exact", samples: int = 1000,
                          seed: int = 0, L: int = DEFAULT_L, kind: str = "annulus",
                          certify: bool = False, params: NegligibleParams | None = None,
                          spec: BarrierSpec | None = None, **certify_kw) -> list[GenericityRow]:
    """Per-n counts of k-tuples from the region with a relation of length <= L
    (and, with ``certify``, of certified / inconclusive tuples)."""
    from .enumeration import region as make_region

    model = ball.model
    rows = []
    for n in ns:
        reg = make_region(ball, kind, n, 0)
        N = len(reg)
        if mode == "exact":
            if certify:
                raise InputError("exact certification over a region is not supported; use sampled")
            if k == 1:
                fal = sum(1 for w in reg.words() if not w)
                rows.append(GenericityRow(n, N, fal, 0, N - fal, "exact"))
                continue
            if k == 2 and isinstance(model, FreeGroup):
                fal = free_pair_relation_count(reg, L)
            else:
                words = reg.words()
                fal = sum(1 for t in itertools.product(words, repeat=k) if has_relation(t, L, model))
            rows.append(GenericityRow(n, N ** k, fal, 0, N ** k - fal, "exact"))
            continue
        rng = np.random.default_rng(seed + n)
        fal = cer = 0
        for _ in range(samples):
            t = tuple(reg.ball.word(int(i)) for i in rng.integers(reg.start, reg.stop, size=k))
            if certify:
                c = certify_tuple(t, params, L, model, spec=spec, seed=seed, **certify_kw)
                fal += c.verdict == "falsified"
                cer += c.verdict == "certified"
            else:
                fal += has_relation(t, L, model)
        p = fal / samples
        rows.append(GenericityRow(n, samples, fal, cer, samples - fal - cer, "sampled",
                                  math.sqrt(p * (1 - p) / samples)))
    return rows
