"""Pairwise comparison matrix numerics.

Generation of consistent matrices from random weights, element-wise
perturbation at three named inconsistency levels, Saaty consistency
reporting, weight extraction for complete and incomplete matrices
(row geometric mean / Laplacian least squares / principal eigenvector /
eigenvalue-minimal completion), and the two vector comparison metrics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DisconnectedGraphError
from .graphs import LabeledGraph, is_connected

MIN_ITEMS = 2
MAX_ITEMS = 10

# Saaty random indices.  n = 3..8 are the published values the consistency
# ratio calibration assumes; 9 and 10 are the standard continuation needed
# for calibration up to ten items.  Override per call if a different table
# is preferred.
DEFAULT_RI = {
    1: 0.0,
    2: 0.0,
    3: 0.58,
    4: 0.90,
    5: 1.12,
    6: 1.24,
    7: 1.32,
    8: 1.41,
    9: 1.45,
    10: 1.49,
}

POWER_TOL = 1e-12
POWER_MAXITER = 100_000


@dataclass(frozen=True)
class PerturbationLevel:
    """Uniform half-width of the additive element-wise perturbation."""

    name: str
    delta_halfwidth: float

    def __post_init__(self):
        if not self.delta_halfwidth > 0:
            raise ValueError("delta_halfwidth must be positive")


WEAK = PerturbationLevel("weak", 1.0)
MODEST = PerturbationLevel("modest", 1.5)
STRONG = PerturbationLevel("strong", 2.0)
NAMED_LEVELS = {lv.name: lv for lv in (WEAK, MODEST, STRONG)}


def _as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("comparison matrix must be square")
    return m


@dataclass(frozen=True, eq=False)
class Pcm:
    """Positive reciprocal matrix; a[i, j] says how many times item i beats item j."""

    a: np.ndarray

    def __post_init__(self):
        m = _as_matrix(self.a).copy()
        m.setflags(write=False)
        object.__setattr__(self, "a", m)
        n = m.shape[0]
        if not MIN_ITEMS <= n <= MAX_ITEMS:
            raise ValueError(f"item count {n} outside {MIN_ITEMS}..{MAX_ITEMS}")
        if not np.all(m > 0):
            raise ValueError("all entries must be positive")
        if not np.allclose(m * m.T, 1.0, rtol=1e-9, atol=0):
            raise ValueError("matrix is not reciprocal")

    @property
    def n(self) -> int:
        return self.a.shape[0]


@dataclass(frozen=True, eq=False)
class IncompletePcm:
    """Positive reciprocal matrix with a symmetric known-entry mask."""

    a: np.ndarray
    mask: np.ndarray

    def __post_init__(self):
        m = _as_matrix(self.a).astype(float).copy()
        known = np.asarray(self.mask, dtype=bool).copy()
        if known.shape != m.shape:
            raise ValueError("mask shape must match matrix shape")
        n = m.shape[0]
        if not MIN_ITEMS <= n <= MAX_ITEMS:
            raise ValueError(f"item count {n} outside {MIN_ITEMS}..{MAX_ITEMS}")
        if not np.array_equal(known, known.T):
            raise ValueError("mask must be symmetric")
        if not np.all(np.diag(known)):
            raise ValueError("diagonal entries must be known")
        vals = m[known]
        if not np.all(np.isfinite(vals)) or not np.all(vals > 0):
            raise ValueError("known entries must be positive")
        if not np.allclose((m * m.T)[known & known.T], 1.0, rtol=1e-9, atol=0):
            raise ValueError("known entries must be reciprocal")
        m[~known] = np.nan
        m.setflags(write=False)
        known.setflags(write=False)
        object.__setattr__(self, "a", m)
        object.__setattr__(self, "mask", known)

    @property
    def n(self) -> int:
        return self.a.shape[0]

    def known_pairs(self) -> list[tuple[int, int]]:
        n = self.n
        return [(i, j) for i in range(n) for j in range(i + 1, n) if self.mask[i, j]]

    def representing_graph(self) -> LabeledGraph:
        return LabeledGraph(self.n, frozenset(self.known_pairs()))


@dataclass(frozen=True, eq=False)
class WeightVector:
    """Positive priority vector normalized to sum one."""

    w: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.w, dtype=float).copy()
        if v.ndim != 1:
            raise ValueError("weights must be one-dimensional")
        if not np.all(v > 0):
            raise ValueError("weights must be positive")
        if abs(v.sum() - 1.0) > 1e-12:
            raise ValueError("weights must sum to one within 1e-12")
        v.setflags(write=False)
        object.__setattr__(self, "w", v)

    @property
    def n(self) -> int:
        return self.w.shape[0]


@dataclass(frozen=True)
class ConsistencyReport:
    lambda_max: float
    ci: float
    cr: float
    ri_used: float


@dataclass(frozen=True)
class MetricPair:
    d_euc: float
    tau: float


def _normalized(v: np.ndarray) -> WeightVector:
    v = np.asarray(v, dtype=float)
    return WeightVector(v / v.sum())


def _weights_array(u) -> np.ndarray:
    if isinstance(u, WeightVector):
        return u.w
    return np.asarray(u, dtype=float)


def pcm_from_weights(w) -> Pcm:
    """Consistent matrix with entries w_i / w_j."""
    v = np.asarray(w, dtype=float)
    if not np.all(v > 0):
        raise ValueError("weights must be positive")
    return Pcm(v[:, None] / v[None, :])


def generate_consistent_pcm(n: int, rng: np.random.Generator) -> tuple[Pcm, WeightVector]:
    """Draw item weights uniformly from [1, 9] and build the consistent matrix."""
    if not MIN_ITEMS <= n <= MAX_ITEMS:
        raise ValueError(f"item count {n} outside {MIN_ITEMS}..{MAX_ITEMS}")
    w = rng.uniform(1.0, 9.0, n)
    return pcm_from_weights(w), _normalized(w)


def upper_pairs(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def apply_perturbation(pcm: Pcm, deltas) -> Pcm:
    """Perturb each pair's representative (>= 1) entry by the given delta.

    deltas follows the row-major order of upper_pairs(n).  The entry below
    one is rewritten as the exact reciprocal of its perturbed mirror, so
    reciprocity is preserved bit for bit.
    """
    n = pcm.n
    pairs = upper_pairs(n)
    d = np.asarray(deltas, dtype=float)
    if d.shape != (len(pairs),):
        raise ValueError(f"expected {len(pairs)} deltas, got {d.shape}")
    out = np.array(pcm.a)
    for (i, j), delta in zip(pairs, d):
        val = out[i, j]
        # the representative of the pair is the entry >= 1; ties go to a_ij
        rep = val if val >= 1.0 else 1.0 / val
        moved = rep + delta
        hat = moved if moved >= 1.0 else 1.0 / (1.0 - delta - (rep - 1.0))
        if val >= 1.0:
            out[i, j] = hat
            out[j, i] = 1.0 / hat
        else:
            out[j, i] = hat
            out[i, j] = 1.0 / hat
    return Pcm(out)


def perturb(pcm: Pcm, level: PerturbationLevel, rng: np.random.Generator) -> Pcm:
    """Randomly perturb every off-diagonal pair at the given level."""
    h = level.delta_halfwidth
    deltas = rng.uniform(-h, h, pcm.n * (pcm.n - 1) // 2)
    return apply_perturbation(pcm, deltas)


def principal_eigen(a: np.ndarray, tol: float = POWER_TOL, maxiter: int = POWER_MAXITER):
    """Perron eigenpair of a positive matrix by power iteration."""
    n = a.shape[0]
    v = np.full(n, 1.0 / n)
    lam = 0.0
    for _ in range(maxiter):
        av = a @ v
        lam_new = av.sum()  # v is L1-normalized and positive
        v = av / lam_new
        if abs(lam_new - lam) <= tol * lam_new:
            return lam_new, v
        lam = lam_new
    raise ConvergenceError(f"power iteration did not converge in {maxiter} steps")


def consistency_report(pcm: Pcm, ri_table=None) -> ConsistencyReport:
    """Saaty consistency: CI = (lambda_max - n) / (n - 1), CR = CI / RI."""
    table = DEFAULT_RI if ri_table is None else ri_table
    if pcm.n not in table:
        raise ValueError(f"random index undefined for n={pcm.n}")
    ri = table[pcm.n]
    lam, _ = principal_eigen(pcm.a)
    ci = (lam - pcm.n) / (pcm.n - 1)
    if ri == 0.0:
        if abs(ci) > 1e-9:
            raise ValueError(f"nonzero CI with zero RI at n={pcm.n}")
        cr = 0.0
    else:
        cr = ci / ri
    return ConsistencyReport(lambda_max=lam, ci=ci, cr=cr, ri_used=ri)


def llsm_complete(pcm: Pcm) -> WeightVector:
    """Row geometric mean, the closed-form log least squares minimizer."""
    return _normalized(np.exp(np.log(pcm.a).mean(axis=1)))


def incomplete_llsm_system(n: int, pairs) -> tuple[np.ndarray, list[tuple[int, int]]]:
    """Graph Laplacian of the known pairs (right-hand side built per matrix)."""
    lap = np.zeros((n, n))
    for i, j in pairs:
        lap[i, i] += 1
        lap[j, j] += 1
        lap[i, j] -= 1
        lap[j, i] -= 1
    return lap, list(pairs)


def llsm_incomplete(ipcm: IncompletePcm, ground: int = 0) -> WeightVector:
    """Log least squares over the known entries via the Laplacian system.

    One log-weight coordinate is grounded to zero to fix the additive gauge;
    the normalized result does not depend on which one.
    """
    graph = ipcm.representing_graph()
    if not is_connected(graph):
        raise DisconnectedGraphError("incomplete LLSM requires a connected comparison graph")
    n = ipcm.n
    pairs = ipcm.known_pairs()
    lap, _ = incomplete_llsm_system(n, pairs)
    r = np.zeros(n)
    for i, j in pairs:
        lij = math.log(ipcm.a[i, j])
        r[i] += lij
        r[j] -= lij
    keep = [k for k in range(n) if k != ground]
    y = np.zeros(n)
    y[keep] = np.linalg.solve(lap[np.ix_(keep, keep)], r[keep])
    return _normalized(np.exp(y - y.max()))


def ev_complete(pcm: Pcm) -> WeightVector:
    """Normalized principal right eigenvector."""
    _, v = principal_eigen(pcm.a)
    return _normalized(v)


def _golden_min(f, lo: float, hi: float, tol: float = 1e-11):
    """Golden-section minimum of a unimodal function on [lo, hi]."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return (a + b) / 2.0


def crev_completion(ipcm: IncompletePcm) -> Pcm:
    """Complete the missing entries so the principal eigenvalue is minimal.

    Cyclic coordinate descent, one missing pair at a time: golden-section
    search on the log of the entry (lambda_max is unimodal in it), sweeps
    until the eigenvalue improves by less than 1e-10.
    """
    graph = ipcm.representing_graph()
    if not is_connected(graph):
        raise DisconnectedGraphError("CR-minimal completion requires a connected comparison graph")
    n = ipcm.n
    missing = [(i, j) for i, j in upper_pairs(n) if not ipcm.mask[i, j]]
    # start from the log least squares completion; it is already close
    w = llsm_incomplete(ipcm).w
    a = np.array(ipcm.a)
    a[~ipcm.mask] = (w[:, None] / w[None, :])[~ipcm.mask]
    if not missing:
        return Pcm(a)

    def lam_for(i, j, x):
        a[i, j] = math.exp(x)
        a[j, i] = math.exp(-x)
        lam, _ = principal_eigen(a, tol=1e-13)
        return lam

    lam_prev, _ = principal_eigen(a, tol=1e-13)
    for _ in range(200):
        for i, j in missing:
            x0 = math.log(a[i, j])
            lo, hi = x0 - 1.0, x0 + 1.0
            # widen until the valley is bracketed (unimodal, min is finite)
            while lam_for(i, j, lo) <= lam_for(i, j, lo + 1e-6):
                lo -= 1.0
                if lo < x0 - 60:
                    break
            while lam_for(i, j, hi) <= lam_for(i, j, hi - 1e-6):
                hi += 1.0
                if hi > x0 + 60:
                    break
            xbest = _golden_min(lambda x: lam_for(i, j, x), lo, hi)
            lam_for(i, j, xbest)
        lam_now, _ = principal_eigen(a, tol=1e-13)
        if lam_prev - lam_now < 1e-10:
            break
        lam_prev = lam_now
    return Pcm(a)


def crev_incomplete(ipcm: IncompletePcm) -> WeightVector:
    """Principal eigenvector of the eigenvalue-minimal completion."""
    return ev_complete(crev_completion(ipcm))


def euclidean_distance(u, v) -> float:
    """Euclidean distance between two normalized weight vectors."""
    a, b = _weights_array(u), _weights_array(v)
    if a.shape != b.shape:
        raise ValueError("weight vectors must have equal length")
    return float(np.sqrt(np.sum((a - b) ** 2)))


def kendall_tau(u, v) -> float:
    """Kendall rank correlation with the fixed n(n-1)/2 denominator.

    Ties count as neither concordant nor discordant; with continuous weights
    they occur with probability zero.
    """
    a, b = _weights_array(u), _weights_array(v)
    if a.shape != b.shape:
        raise ValueError("weight vectors must have equal length")
    n = a.shape[0]
    if n < 2:
        raise ValueError("need at least two items")
    s = 0
    for i in range(n):
        for j in range(i + 1, n):
            s += int(np.sign(a[i] - a[j]) * np.sign(b[i] - b[j]))
    return s / (n * (n - 1) / 2)


def metric_pair(u, v) -> MetricPair:
    return MetricPair(d_euc=euclidean_distance(u, v), tau=kendall_tau(u, v))
