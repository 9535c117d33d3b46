"""Homogeneous model quasi-metrics on the boundary group and sampling experiments.

The model replaces the horospherical visual quasi-metric by

    rho(x, y) = max_i |pi_i(log(x^{-1} y))| ** (1 / lam_i)

where ``pi_i`` projects onto the generalized eigenspace of ``lam_i``.  For a
diagonalizable derivation this is exactly homogeneous under the flow
``exp(t alpha)``.  For a non-diagonalizable derivation a second gauge
(``jordan_flow=True``) keeps exact homogeneity by following the flow until
the semisimple gauge reaches one.

All experiments draw from ``numpy.random.default_rng(seed)`` and are
bit-reproducible for fixed arguments.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize

from . import linalg as la
from .algebra import is_subalgebra, normalizer
from .errors import DegenerateCurve, HeintzeError, MuTooSmall, NotASubalgebra, ParameterOutOfRange
from .groups import GroupElement, NumericGroup, conjugate
from .invariants import HeintzeData
from .spectral import semisimple_nilpotent_split
from .subspace import Subspace


def _as_points(x) -> np.ndarray:
    if isinstance(x, GroupElement):
        return x.as_array()
    if isinstance(x, (tuple, list)) and x and isinstance(x[0], Fraction):
        return np.array([float(t) for t in x])
    return np.asarray(x, dtype=float)


class JordanFlow:
    """``exp(t alpha)`` in closed form on each Jordan chain."""

    def __init__(self, h: HeintzeData):
        self.heintze = h
        p = h.jordan.basis_matrix()
        self.basis = np.array([[float(x) for x in row] for row in p])
        self.inverse = np.array([[float(x) for x in row] for row in la.inverse(p)])
        self.chains = []
        pos = 0
        for c in h.jordan.chains:
            self.chains.append((pos, c.size, float(c.eigenvalue)))
            pos += c.size

    def apply(self, t, x) -> np.ndarray:
        x = _as_points(x)
        t = np.asarray(t, dtype=float)
        coords = x @ self.inverse.T
        out = np.zeros_like(coords)
        tt = t[..., None] if t.ndim else t
        for pos, size, lam in self.chains:
            growth = np.exp(tt * lam) if t.ndim else math.exp(float(t) * lam)
            for k in range(size):
                acc = np.zeros(coords.shape[:-1])
                for j in range(size - k):
                    w = (t ** j) / math.factorial(j)
                    acc = acc + w * coords[..., pos + k + j]
                out[..., pos + k] = acc * (growth[..., 0] if t.ndim else growth)
        return out @ self.basis.T


def tau_action(h: HeintzeData, t, x) -> np.ndarray:
    """``exp(t alpha) x`` in double precision."""
    return JordanFlow(h).apply(t, x)


@dataclass
class QuasiMetricModel:
    heintze: HeintzeData
    mu: float = 2.0
    gram: np.ndarray | None = None
    jordan_flow: bool = False
    projections: list = field(init=False, repr=False)

    def __post_init__(self):
        if self.mu <= 1:
            raise ParameterOutOfRange("mu must exceed 1")
        h = self.heintze
        self.projections = h.eigen.projections()
        self._proj = [np.array([[float(x) for x in row] for row in p]) for p in self.projections]
        self._proj_stack = np.stack(self._proj)
        self._lams = np.array([float(lam) for lam in h.eigen.eigenvalues])
        self.group = NumericGroup(h.algebra)
        self.flow = JordanFlow(h)
        split = semisimple_nilpotent_split(h.derivation)
        self._nu = np.array([[float(x) for x in row] for row in split.nu.matrix])
        self.diagonalizable = not np.any(self._nu)
        if self.gram is None:
            self._chol = None
        else:
            g = np.asarray(self.gram, dtype=float)
            self._chol = np.linalg.cholesky(g).T
        self._nu_norm = self._opnorm(self._nu)
        self._nu_order = max(max(s) for _, s in h.jordan.blocks)

    def _opnorm(self, m) -> float:
        if self._chol is None:
            return float(np.linalg.norm(m, 2))
        r = self._chol
        return float(np.linalg.norm(r @ m @ np.linalg.inv(r), 2))

    def norm(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        if self._chol is not None:
            v = v @ self._chol.T
        return np.linalg.norm(v, axis=-1)

    def component_norms(self, w: np.ndarray) -> np.ndarray:
        """``|pi_i w|`` stacked on the last axis."""
        parts = np.einsum("rij,...j->...ri", self._proj_stack, np.asarray(w, dtype=float))
        if self._chol is not None:
            parts = parts @ self._chol.T
        return np.sqrt(np.einsum("...i,...i->...", parts, parts))

    def semisimple_gauge(self, w) -> np.ndarray:
        w = _as_points(w)
        return np.max(self.component_norms(w) ** (1.0 / self._lams), axis=-1)

    def semisimple_flow(self, t, w) -> np.ndarray:
        """``exp(t delta) w``."""
        w = _as_points(w)
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(w)
        for lam, p in zip(self._lams, self._proj):
            scale = np.exp(t * lam)
            out = out + (scale[..., None] if t.ndim else scale) * (w @ p.T)
        return out

    def homogeneity_flow(self, t, w) -> np.ndarray:
        """The flow under which :meth:`gauge` scales by ``e^t``."""
        if self.jordan_flow and not self.diagonalizable:
            return self.flow.apply(t, w)
        return self.semisimple_flow(t, w)

    def gauge(self, w) -> np.ndarray:
        w = _as_points(w)
        if self.jordan_flow and not self.diagonalizable:
            return self._jordan_gauge(w)
        return self.semisimple_gauge(w)

    def _unit_level(self, s, w) -> np.ndarray:
        moved = self.flow.apply(-s, w)
        return np.max(self.component_norms(moved), axis=-1)

    def _jordan_gauge(self, w: np.ndarray, step: float = 0.02, iters: int = 48) -> np.ndarray:
        # exp(sup{s : max_i |pi_i exp(-s alpha) w| >= 1})
        flat = np.atleast_2d(w)
        out = np.zeros(flat.shape[0])
        base = self.semisimple_gauge(flat)
        alive = base > 0
        if not np.any(alive):
            return out.reshape(np.shape(w)[:-1]) if np.ndim(w) > 1 else out[0]
        ww = flat[alive]
        comp0 = self.component_norms(ww)
        t_d = np.log(np.max(comp0 ** (1.0 / self._lams), axis=-1))
        lam1 = self._lams.min()
        s0 = np.maximum(np.maximum(t_d, 0.0), (self._nu_order - 1) / lam1)
        a = self._nu_norm
        # guaranteed upper bound: e^{-s lam_i} q(s) |pi_i w| < 1 beyond s_hi
        s_hi = s0.copy()
        for _ in range(4000):
            q = sum((s_hi * a) ** j / math.factorial(j) for j in range(self._nu_order))
            bound = np.max(np.exp(-s_hi[:, None] * self._lams) * comp0, axis=-1) * q
            todo = bound >= 1
            if not np.any(todo):
                break
            s_hi = np.where(todo, s_hi + 0.25, s_hi)
        lo = s_hi.copy()
        hi = s_hi.copy()
        found = np.zeros(len(ww), dtype=bool)
        for _ in range(200000):
            cand = lo - step
            val = self._unit_level(cand, ww)
            hit = (val >= 1) & ~found
            hi = np.where(hit, lo, hi)
            lo = np.where(found, lo, cand)
            found |= hit
            if np.all(found):
                break
        for _ in range(iters):
            mid = 0.5 * (lo + hi)
            above = self._unit_level(mid, ww) >= 1
            lo = np.where(above, mid, lo)
            hi = np.where(above, hi, mid)
        out[alive] = np.exp(0.5 * (lo + hi))
        if np.ndim(w) == 1:
            return out[0]
        return out.reshape(np.shape(w)[:-1])

    def distance(self, x, y) -> np.ndarray:
        return self.gauge(self.group.difference(_as_points(x), _as_points(y)))


def model_quasimetric(m: QuasiMetricModel, x, y):
    """``rho(x, y) = gauge(log(x^{-1} y))``; scalar for single points, array for batches."""
    d = m.distance(x, y)
    return float(d) if np.ndim(d) == 0 else d


def _random_points(rng, n: int, count: int, spread: float = 3.0) -> np.ndarray:
    scales = np.exp(rng.uniform(-spread, spread, size=(count, 1)))
    return rng.standard_normal((count, n)) * scales


def quasi_triangle_constant(m: QuasiMetricModel, sample_count: int = 10000, seed: int = 0) -> float:
    """Largest sampled ``rho(x,z) / (rho(x,y) + rho(y,z))``."""
    rng = np.random.default_rng(seed)
    n = m.heintze.dim
    x = _random_points(rng, n, sample_count)
    y = _random_points(rng, n, sample_count)
    z = _random_points(rng, n, sample_count)
    num = m.distance(x, z)
    den = m.distance(x, y) + m.distance(y, z)
    ok = den > 0
    return float(np.max(num[ok] / den[ok]))


def sample_at_gauge(m: QuasiMetricModel, rng, log_gauge: np.ndarray) -> np.ndarray:
    """Random directions pushed by the homogeneity flow to prescribed gauge values."""
    w0 = rng.standard_normal((len(log_gauge), m.heintze.dim))
    g0 = m.gauge(w0)
    return m.homogeneity_flow(log_gauge - np.log(g0), w0)


@dataclass
class GrowthFloorReport:
    mu: float
    c_hat: float
    violations: int
    trend_slope: float
    samples: int
    bin_minima: list

    @property
    def downward_trend(self) -> bool:
        return self.violations > 0

    def to_dict(self) -> dict:
        return {
            "mu": self.mu,
            "c_hat": self.c_hat,
            "violations": self.violations,
            "trend_slope": self.trend_slope,
            "samples": self.samples,
            "bin_minima": self.bin_minima,
        }


def lemma31_check(m: QuasiMetricModel, mu: float, sample_count: int = 100000, seed: int = 0,
                  max_log_gauge: float = 5.0, bins: int = 10) -> GrowthFloorReport:
    """Sample ``c_hat = min rho(e, exp X)^mu / |X|`` over ``rho >= 1``.

    Samples are binned by ``log rho``; a bin whose minimum ratio drops below
    the minimum of the innermost bin counts as a violation (decay of the
    ratio with distance), and ``trend_slope`` is the least-squares slope of
    the log bin minima.
    """
    lam_d = float(m.heintze.largest_eigenvalue)
    if mu <= lam_d:
        raise MuTooSmall(f"mu = {mu} must exceed the largest eigenvalue {lam_d}")
    rng = np.random.default_rng(seed)
    u = rng.uniform(0.0, max_log_gauge, size=sample_count)
    x = sample_at_gauge(m, rng, u)
    rho = m.gauge(x)
    ratio = rho ** mu / m.norm(x)
    edges = np.linspace(0.0, max_log_gauge, bins + 1)
    idx = np.clip(np.digitize(np.log(rho), edges) - 1, 0, bins - 1)
    minima, centers = [], []
    for b in range(bins):
        sel = ratio[idx == b]
        if sel.size:
            minima.append(float(sel.min()))
            centers.append(0.5 * (edges[b] + edges[b + 1]))
    floor = minima[0]
    violations = int(sum(1 for v in minima[1:] if v < floor))
    slope = float(np.polyfit(centers, np.log(minima), 1)[0]) if len(minima) > 1 else 0.0
    return GrowthFloorReport(mu, float(ratio.min()), violations, slope, sample_count, minima)


@dataclass
class DimensionEstimate:
    value: float
    scale_range: tuple
    regression_points: list
    residual: float

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "scale_range": list(self.scale_range),
            "regression_points": [list(p) for p in self.regression_points],
            "residual": self.residual,
        }


def covering_number(m: QuasiMetricModel, points: np.ndarray, r: float) -> int:
    """Greedy cover of curve samples (in curve order) by balls of radius ``r``."""
    count = 0
    i = 0
    total = len(points)
    window = 64
    while i < total:
        count += 1
        center = points[i][None, :]
        j = i + 1
        nxt = total
        step = window
        while j < total:
            stop = min(total, j + step)
            out = np.nonzero(m.distance(center, points[j:stop]) > r)[0]
            if out.size:
                nxt = j + int(out[0])
                break
            j = stop
            step *= 2
        # the next ball usually needs a similar window
        window = max(16, 2 * (nxt - i))
        i = nxt
    return count


def _radius_for_count(m, points, target, r_lo, r_hi, iters=10) -> float:
    # bisection in log r; covering numbers decrease with r
    for _ in range(iters):
        mid = math.sqrt(r_lo * r_hi)
        if covering_number(m, points, mid) > target:
            r_lo = mid
        else:
            r_hi = mid
    return math.sqrt(r_lo * r_hi)


def hausdorff_dim_estimate(m: QuasiMetricModel, curve, scales: Sequence[float] | None = None,
                           samples: int = 20000, counts: tuple = (10, 1000), levels: int = 9) -> DimensionEstimate:
    """Box-counting slope of ``log N(r)`` against ``log(1/r)``.

    ``curve`` is either a callable mapping parameters in [0, 1] to points in
    exponential coordinates or an array of ordered samples.  Without explicit
    ``scales`` the radii are chosen so that covering numbers span ``counts``.
    """
    if callable(curve):
        pts = np.asarray(curve(np.linspace(0.0, 1.0, samples)), dtype=float)
    else:
        pts = np.asarray(curve, dtype=float)
    diam = float(np.max(m.distance(pts[0][None, :], pts)))
    if not diam > 0:
        raise DegenerateCurve("all curve samples coincide")
    if scales is None:
        tiny = diam * 1e-9
        r_big = _radius_for_count(m, pts, counts[0], tiny, diam)
        r_small = _radius_for_count(m, pts, counts[1], tiny, r_big)
        scales = np.geomspace(r_big, r_small, levels)
    scales = [float(r) for r in scales]
    reg = []
    for r in scales:
        reg.append((math.log(1.0 / r), math.log(covering_number(m, pts, r))))
    xs = np.array([p[0] for p in reg])
    ys = np.array([p[1] for p in reg])
    slope, icpt = np.polyfit(xs, ys, 1)
    resid = float(np.sqrt(np.mean((ys - (slope * xs + icpt)) ** 2)))
    return DimensionEstimate(float(slope), (min(scales), max(scales)), reg, resid)


def segment(direction: Sequence, start: Sequence | None = None, length: float = 1.0) -> Callable:
    """Straight segment ``start + s * length * direction`` in exponential coordinates."""
    d = np.asarray([float(t) for t in direction])
    s0 = np.zeros_like(d) if start is None else np.asarray([float(t) for t in start])
    return lambda s: s0[None, :] + np.asarray(s)[:, None] * length * d[None, :]


@dataclass
class SandwichReport:
    mu: float
    constant: float
    samples: int
    violations: int
    diagonalizable: bool

    def to_dict(self) -> dict:
        return {
            "mu": self.mu,
            "C": self.constant,
            "samples": self.samples,
            "violations": self.violations,
            "diagonalizable": self.diagonalizable,
        }


def diag_comparison_check(h: HeintzeData, mu: float, sample_count: int = 2000, seed: int = 0,
                          min_log_scale: float = -12.0) -> SandwichReport:
    """Smallest ``C`` with ``rho_d^mu / C <= rho_a <= C rho_d^(1/mu)`` on the samples.

    ``rho_a`` follows the Jordan flow, ``rho_d`` the semisimple part.  Pairs
    are drawn at semisimple distances in ``[e^min_log_scale, 1]``.
    """
    if mu <= 1:
        raise ParameterOutOfRange("mu must exceed 1")
    alpha_model = QuasiMetricModel(h, mu=max(mu, 1.0 + 1e-9), jordan_flow=True)
    delta_model = QuasiMetricModel(h, mu=max(mu, 1.0 + 1e-9), jordan_flow=False)
    rng = np.random.default_rng(seed)
    n = h.dim
    base = _random_points(rng, n, sample_count, spread=1.0)
    u = rng.uniform(min_log_scale, 0.0, size=sample_count)
    w = sample_at_gauge(delta_model, rng, u)
    other = alpha_model.group.product(base, w)
    r_d = delta_model.distance(base, other)
    r_a = alpha_model.distance(base, other)
    good = np.isfinite(r_a) & np.isfinite(r_d) & (r_a > 0) & (r_d > 0)
    lower = r_d[good] ** mu / r_a[good]
    upper = r_a[good] / r_d[good] ** (1.0 / mu)
    c = float(max(1.0, lower.max(), upper.max()))
    return SandwichReport(mu, c, int(good.sum()), int((~good).sum()), alpha_model.diagonalizable)


@dataclass
class CosetReport:
    branch: str
    t_grid: list
    distances: list
    obstruction: list | None = None
    growth_exponent: float | None = None
    lower_bound_exponent: float | None = None

    @property
    def bounded(self) -> bool:
        return self.branch == "finite"

    def to_dict(self) -> dict:
        return {
            "branch": self.branch,
            "t_grid": self.t_grid,
            "distances": self.distances,
            "obstruction": self.obstruction,
            "growth_exponent": self.growth_exponent,
            "lower_bound_exponent": self.lower_bound_exponent,
        }


def _min_distance_to_subgroup(m: QuasiMetricModel, basis: np.ndarray, target: np.ndarray,
                              guess: np.ndarray, rng, restarts: int = 6) -> float:
    if basis.shape[0] == 0:
        return float(m.gauge(target))

    def f(c):
        y = c @ basis
        return float(m.gauge(m.group.difference(y, target)))

    starts = [guess, np.zeros_like(guess)]
    scale = max(1.0, float(np.linalg.norm(guess)))
    starts += [guess + scale * 0.1 * rng.standard_normal(guess.shape) for _ in range(restarts)]
    best = min(f(s) for s in starts)
    for s in starts:
        res = minimize(f, s, method="Nelder-Mead", options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 4000})
        best = min(best, float(res.fun))
    return best


def coset_divergence_experiment(h: HeintzeData, subgroup: Subspace, x, t_grid: Sequence[float],
                                mu: float | None = None, seed: int = 0) -> CosetReport:
    """Distance between ``xH`` and ``H`` along a one-parameter family.

    If ``log x`` normalizes ``h`` the witness ``x h x^{-1}`` gives the bounded
    distance ``rho(e, x)``.  Otherwise the conjugated curve
    ``t -> exp(t (Y0 + W))`` leaves ``H`` and its distance to ``H`` is
    minimised numerically; its log-log slope is the growth exponent.
    """
    a = h.algebra
    if not is_subalgebra(a, subgroup):
        raise NotASubalgebra("coset experiment needs a subalgebra")
    coords = x.coords if isinstance(x, GroupElement) else x
    xq = la.vec(coords)
    mu = float(h.largest_eigenvalue) + 1.0 if mu is None else mu
    model = QuasiMetricModel(h)
    rng = np.random.default_rng(seed)
    xf = np.array([float(t) for t in xq])
    ts = [float(t) for t in t_grid]
    if normalizer(a, subgroup).contains(xq) or subgroup.is_zero():
        dist = []
        y0 = subgroup.basis[0] if subgroup.dim else la.zeros(a.dim)
        for t in ts:
            ht = np.array([float(c) * t for c in y0])
            moved = model.group.product(xf, ht)
            witness = model.group.product(model.group.product(xf, ht), -xf)
            dist.append(float(model.distance(witness, moved)))
        return CosetReport("finite", ts, dist)
    y0 = w = None
    candidates = list(subgroup.basis)
    candidates += [la.add(u, v) for i, u in enumerate(subgroup.basis) for v in subgroup.basis[i + 1:]]
    for cand in candidates:
        conj = conjugate(a, xq, cand)
        diff = la.sub(conj, cand)
        if not subgroup.contains(diff):
            y0, w = cand, diff
            break
    if y0 is None:
        raise HeintzeError("no basis element of the subgroup exhibits the obstruction")
    basis = np.array([[float(c) for c in b] for b in subgroup.basis])
    direction = np.array([float(c) for c in la.add(y0, w)])
    y0_coords = np.array([float(c) for c in subgroup.coordinates(y0)])
    dist = []
    for t in ts:
        target = t * direction
        dist.append(_min_distance_to_subgroup(model, basis, target, t * y0_coords, rng))
    pos = [(t, d) for t, d in zip(ts, dist) if t > 0 and d > 0]
    slope = float(np.polyfit(np.log([p[0] for p in pos]), np.log([p[1] for p in pos]), 1)[0]) if len(pos) > 1 else None
    return CosetReport("divergent", ts, dist, [la.format_fraction(c) for c in w], slope, 1.0 / mu)
