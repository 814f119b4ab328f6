"""Average pairwise distance over balls and annuli (statistical hyperbolicity)."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .enumeration import BallIndex, Region, region
from .errors import InputError
from .groups import FreeAbelianGroup, GroupModel

log = logging.getLogger(__name__)

EXACT_CUTOFF = 30_000


# -- exact double sums ------------------------------------------------------------

def _structural_sum(reg: Region) -> int:
    """Sum over ordered pairs of d(x, y) = |x| + |y| - 2 lcp(x, y) in a tree.

    sum lcp = sum_k sum_P cnt_P^2 with P running over length-k prefixes.
    """
    ball = reg.ball
    mat = ball.letters_matrix[reg.start:reg.stop]
    lengths = ball.lengths[reg.start:reg.stop].astype(np.int64)
    N = len(lengths)
    total = 2 * N * int(lengths.sum())
    code = np.zeros(N, dtype=np.int64)
    alive = np.ones(N, dtype=bool)
    width = 2 * ball.model.rank + 1
    lcp_sum = 0
    for k in range(int(lengths.max(initial=0))):
        alive &= lengths > k
        if not alive.any():
            break
        idx = np.nonzero(alive)[0]
        key = code[idx] * width + (mat[idx, k].astype(np.int64) + ball.model.rank)
        uniq, inv, cnt = np.unique(key, return_inverse=True, return_counts=True)
        lcp_sum += int((cnt.astype(np.int64) ** 2).sum())
        code[idx] = inv
    return total - 2 * lcp_sum


def _pairwise_tree_sum(reg: Region, block: int = 256) -> int:
    ball = reg.ball
    mat = ball.letters_matrix[reg.start:reg.stop]
    lengths = ball.lengths[reg.start:reg.stop].astype(np.int64)
    total = 0
    for b0 in range(0, len(mat), block):
        X = mat[b0:b0 + block]
        lx = lengths[b0:b0 + block]
        eq = X[:, None, :] == mat[None, :, :]
        lcp = np.cumprod(eq, axis=2, dtype=np.int8).sum(axis=2, dtype=np.int64)
        lcp = np.minimum(lcp, np.minimum(lx[:, None], lengths[None, :]))
        total += int((lx[:, None] + lengths[None, :] - 2 * lcp).sum())
    return total


def _abelian_sum(model: FreeAbelianGroup, words) -> int:
    """Sum of L1 distances through sorted coordinates."""
    N = len(words)
    if N == 0:
        return 0
    coords = np.array([model.exponents(w) for w in words], dtype=np.int64).reshape(N, model.rank)
    total = 0
    j = np.arange(N, dtype=np.int64)
    for col in coords.T:
        v = np.sort(col)
        total += int((v * (2 * j - (N - 1))).sum())
    return 2 * total


def _generic_sum(model: GroupModel, words) -> int:
    inv = [model.invert(w) for w in words]
    total = 0
    for i, x in enumerate(words):
        for y in words[i + 1:]:
            total += model.word_length(model.multiply(inv[i], y))
    return 2 * total


def distance_sum(reg: Region, method: str = "auto") -> int:
    """Exact sum of d(x, y) over ordered pairs of the region."""
    model = reg.ball.model
    if method == "auto":
        if model.is_tree:
            method = "structural"
        elif isinstance(model, FreeAbelianGroup):
            method = "abelian"
        else:
            method = "generic"
    if method == "structural":
        if not model.is_tree:
            raise InputError("structural sums need a free group")
        return _structural_sum(reg)
    if method == "pairwise":
        if not model.is_tree:
            raise InputError("pairwise tree sums need a free group")
        return _pairwise_tree_sum(reg)
    if method == "abelian":
        return _abelian_sum(model, reg.words())
    if method == "generic":
        return _generic_sum(model, reg.words())
    raise InputError(f"unknown method {method!r}")


def _needs_cutoff(model, method) -> bool:
    if method == "auto":
        return not (model.is_tree or isinstance(model, FreeAbelianGroup))
    return method in ("generic", "pairwise")


# -- e(n) ----------------------------------------------------------------------------------

@dataclass
class SprawlValue:
    n: int
    value: float
    se: float
    mode: str
    exact: Fraction | None = None


def _sampled(reg: Region, n: int, samples: int, seed) -> SprawlValue:
    model = reg.ball.model
    rng = np.random.default_rng(seed)
    xs = rng.integers(reg.start, reg.stop, size=samples)
    ys = rng.integers(reg.start, reg.stop, size=samples)
    ball = reg.ball
    d = np.empty(samples, dtype=np.float64)
    for t, (i, j) in enumerate(zip(xs, ys)):
        x, y = ball.word(int(i)), ball.word(int(j))
        d[t] = model.word_length(model.multiply(model.invert(x), y))
    vals = d / n
    se = float(vals.std(ddof=1) / math.sqrt(samples)) if samples > 1 else float("nan")
    return SprawlValue(n, float(vals.mean()), se, "sampled")


def sprawl(reg: Region, n: int, mode: str = "exact", samples: int = 10_000, seed=0,
           method: str = "auto", cutoff: int = EXACT_CUTOFF) -> SprawlValue:
    """e(n) = (1/|R|^2) sum_{x,y in R} d(x, y) / n."""
    N = len(reg)
    if N == 0:
        raise InputError("empty region")
    if n <= 0:
        raise InputError("n >= 1 required")
    if mode == "exact" and N > cutoff and _needs_cutoff(reg.ball.model, method):
        log.warning("region of %d elements exceeds the exact cutoff %d; sampling instead", N, cutoff)
        mode = "sampled"
    if mode == "sampled":
        return _sampled(reg, n, samples, seed)
    if mode != "exact":
        raise InputError(f"unknown mode {mode!r}")
    s = distance_sum(reg, method)
    ex = Fraction(s, N * N * n)
    return SprawlValue(n, float(ex), 0.0, "exact", ex)


def e_ball(n: int, ball: BallIndex, mode: str = "exact", **kw) -> SprawlValue:
    if n == 0:
        return SprawlValue(0, 0.0, 0.0, mode, Fraction(0))
    return sprawl(region(ball, "ball", n), n, mode, **kw)


def e_annulus(n: int, delta: int, ball: BallIndex, mode: str = "exact", **kw) -> SprawlValue:
    if n == 0:
        raise InputError("n >= 1 required")
    return sprawl(region(ball, "annulus", n, delta), n, mode, **kw)


@dataclass
class SprawlSeries:
    kind: str
    delta: int
    ns: list
    values: list
    se: list
    mode: str
    exact: list = field(default_factory=list)

    def __len__(self):
        return len(self.ns)

    def check_bounds(self) -> bool:
        top = [2 + 2 * self.delta / n for n in self.ns] if self.kind == "annulus" else [2.0] * len(self.ns)
        return all(0 <= v <= t + 1e-12 for v, t in zip(self.values, top))


def sprawl_series(ball: BallIndex, kind: str, ns: Sequence[int], delta: int = 0,
                  mode: str = "exact", samples: int = 10_000, seed=0, **kw) -> SprawlSeries:
    vals, ses, exs = [], [], []
    modes = set()
    for n in ns:
        if kind == "ball":
            v = e_ball(n, ball, mode, samples=samples, seed=seed + n, **kw)
        else:
            v = e_annulus(n, delta, ball, mode, samples=samples, seed=seed + n, **kw)
        vals.append(v.value)
        ses.append(v.se)
        exs.append(v.exact)
        modes.add(v.mode)
    return SprawlSeries(kind, delta, list(ns), vals, ses, "exact" if modes == {"exact"} else "sampled", exs)


def sprawl_csv(ball_series: SprawlSeries | None, annulus_series: SprawlSeries | None) -> str:
    """Rows ``n,e_ball,e_annulus,se,mode``; missing values are blank."""
    rows = {}
    for s, col in ((ball_series, 0), (annulus_series, 1)):
        if s is None:
            continue
        for n, v, se in zip(s.ns, s.values, s.se):
            r = rows.setdefault(n, ["", "", 0.0, s.mode])
            r[col] = repr(v)
            r[2] = max(r[2], se)
            if s.mode == "sampled":
                r[3] = "sampled"
    lines = ["n,e_ball,e_annulus,se,mode"]
    for n in sorted(rows):
        b, a, se, mode = rows[n]
        lines.append(f"{n},{b},{a},{se!r},{mode}")
    return "\n".join(lines) + "\n"


# -- rank-2 free group oracle ---------------------------------------------------------------

@dataclass(frozen=True)
class F2ClosedForm:
    n: int
    mean: Fraction
    deviation: Fraction

    @property
    def e(self) -> Fraction:
        return self.mean / self.n


def f2_closed_form(n: int) -> F2ClosedForm:
    """Mean distance between two uniform points of the n-sphere of F(a, b).

    The common prefix has length j with probability 3/4 (j = 0) and
    (1/4)(1/3)^(j-1)(2/3) for 0 < j < n; the distance is then 2n - 2j.
    """
    if n < 1:
        raise InputError("n >= 1 required")
    mean = Fraction(3, 4) * 2 * n
    for j in range(1, n):
        mean += Fraction(1, 4) * Fraction(1, 3) ** (j - 1) * Fraction(2, 3) * (2 * n - 2 * j)
    dev = Fraction(1, 2 * n) + Fraction(3, 4 * n) * (Fraction(1, 3) - Fraction(1, 3 ** n))
    return F2ClosedForm(n, mean, dev)


# -- convergence fit --------------------------------------------------------------------------

@dataclass
class ConvergenceFit:
    verdict: str               # "inverse_n" or "plateau"
    c: float                   # (2 - e(n)) n -> c
    d: float
    rate: float
    residual: float
    plateau: float             # v in e(n) = v + b / n
    plateau_b: float
    plateau_residual: float

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def _inverse_fit(ns, es, rate):
    y = (2 - es) * ns
    A = np.column_stack([np.ones_like(ns), np.exp(-rate * ns)])
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    model_e = 2 - (A @ coef) / ns
    return coef, float(np.linalg.norm(model_e - es))


def convergence_fit(series, rate: float | None = None, plateau_below: float = 1.95) -> ConvergenceFit:
    """Fit e(n) = 2 - (c + d exp(-rate n)) / n and the plateau e(n) = v + b / n.

    With ``rate=None`` the exponential rate is optimised.  The verdict is
    ``plateau`` when the plateau value sits below ``plateau_below`` and fits no
    worse than the 1/n model.
    """
    from scipy.optimize import least_squares, minimize_scalar

    ns = np.asarray(series.ns if hasattr(series, "ns") else [p[0] for p in series], dtype=np.float64)
    es = np.asarray(series.values if hasattr(series, "values") else [p[1] for p in series],
                    dtype=np.float64)
    if len(ns) < 4:
        raise InputError("convergence_fit needs at least 4 points")
    if rate is None:
        res = minimize_scalar(lambda r: _inverse_fit(ns, es, r)[1], bounds=(1e-3, 10.0),
                              method="bounded", options={"xatol": 1e-12, "maxiter": 500})
        rate = float(res.x)
        coef, _ = _inverse_fit(ns, es, rate)

        def fun(p):
            return 2 - (p[0] + p[1] * np.exp(-p[2] * ns)) / ns - es

        pol = least_squares(fun, [coef[0], coef[1], rate], xtol=1e-15, ftol=1e-15, gtol=1e-15)
        if np.linalg.norm(pol.fun) < _inverse_fit(ns, es, rate)[1]:
            rate = float(pol.x[2])
    coef, resid = _inverse_fit(ns, es, rate)
    P = np.column_stack([np.ones_like(ns), 1 / ns])
    pc, *_ = np.linalg.lstsq(P, es, rcond=None)
    presid = float(np.linalg.norm(P @ pc - es))
    plateau = pc[0] < plateau_below and presid <= resid + 1e-12
    return ConvergenceFit("plateau" if plateau else "inverse_n", float(coef[0]), float(coef[1]),
                          float(rate), resid, float(pc[0]), float(pc[1]), presid)
