"""Monte Carlo scoring of filling patterns.

For every sample: draw a consistent matrix, perturb it at a named level,
mask it down to a comparison graph, solve the incomplete matrix, and compare
the weights against those of the complete perturbed matrix.  All kernels are
vectorized over blocks of samples; randomness is derived per
(master seed, class, level, block) so any cell can be recomputed
independently and results never depend on how work was parallelized.
"""

from __future__ import annotations

import hashlib
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, DisconnectedGraphError
from .graphs import GraphClass, class_from_graph6, enumerate_connected_classes, is_connected
from .pcm import NAMED_LEVELS, DEFAULT_RI, PerturbationLevel

# Samples per seeded block.  Part of the algorithm definition: results are a
# pure function of (config, master_seed) and never of worker count.
BLOCK_SIZE = 20_000

# Default upper bounds on per-sample standard deviations, obtained by
# inverting the published (sample size, margin, significance) triples.
DEFAULT_SIGMA_D_EUC = 0.05
DEFAULT_SIGMA_TAU = 0.2236
DEFAULT_ALPHA_D_EUC = 0.01
DEFAULT_ALPHA_TAU = 0.05

CREV_DEFAULT_MAX_N = 5


@dataclass(frozen=True)
class SampleSizePlan:
    """Chebyshev sample-size plan: alpha = sigma^2 / (n * epsilon^2)."""

    sigma_upper: float
    epsilon: float
    alpha: float
    n_samples: int


def plan_sample_size(sigma_upper: float, epsilon: float, alpha: float) -> SampleSizePlan:
    """Smallest n with sigma^2 / (n * epsilon^2) <= alpha."""
    if sigma_upper <= 0 or epsilon <= 0 or alpha <= 0:
        raise ValueError("sigma_upper, epsilon and alpha must all be positive")
    ratio = sigma_upper**2 / (alpha * epsilon**2)
    # 1e-12 relative slack absorbs float dust on exact-integer ratios
    n = math.ceil(ratio * (1.0 - 1e-12))
    return SampleSizePlan(sigma_upper, epsilon, alpha, max(1, n))


def margin_of_error(sigma_upper: float, alpha: float, n_samples: int) -> float:
    """Margin epsilon implied by a sample count: epsilon = sigma / sqrt(alpha n)."""
    return sigma_upper / math.sqrt(alpha * n_samples)


def default_margins(n_samples: int) -> dict[str, float]:
    return {
        "d_euc": margin_of_error(DEFAULT_SIGMA_D_EUC, DEFAULT_ALPHA_D_EUC, n_samples),
        "tau": margin_of_error(DEFAULT_SIGMA_TAU, DEFAULT_ALPHA_TAU, n_samples),
    }


def _resolve_level(level) -> PerturbationLevel:
    if isinstance(level, PerturbationLevel):
        return level
    if isinstance(level, str):
        if level not in NAMED_LEVELS:
            raise ValueError(f"unknown perturbation level {level!r}")
        return NAMED_LEVELS[level]
    raise ValueError(f"cannot interpret perturbation level {level!r}")


@dataclass(frozen=True)
class SimConfig:
    """One simulation run: which classes, which levels, how many samples."""

    n: int
    n_samples: int
    master_seed: int
    e: int | None = None
    classes: tuple[str, ...] | None = None
    levels: tuple = ("weak", "modest", "strong")
    method: str = "llsm"
    n_jobs: int = 1
    allow_large_crev: bool = False

    def __post_init__(self):
        if self.n_samples < 1:
            raise ValueError("n_samples must be at least 1")
        if self.method not in ("llsm", "crev"):
            raise ValueError(f"unknown method {self.method!r}")
        if self.method == "crev" and self.n > CREV_DEFAULT_MAX_N and not self.allow_large_crev:
            raise ValueError(
                f"crev runs are limited to n <= {CREV_DEFAULT_MAX_N} unless allow_large_crev is set"
            )
        for level in self.levels:
            _resolve_level(level)

    def resolved_levels(self) -> list[PerturbationLevel]:
        return [_resolve_level(level) for level in self.levels]

    def target_classes(self) -> list[GraphClass]:
        if self.classes is not None:
            out = [class_from_graph6(g6) for g6 in self.classes]
            for cls in out:
                if cls.n != self.n:
                    raise ValueError(f"class {cls.g6} has {cls.n} vertices, config says {self.n}")
            return out
        if self.e is not None:
            return enumerate_connected_classes(self.n, self.e)
        out = []
        for e in range(self.n - 1, self.n * (self.n - 1) // 2 + 1):
            out.extend(enumerate_connected_classes(self.n, e))
        return out

    def to_dict(self) -> dict:
        levels = []
        for level in self.resolved_levels():
            levels.append({"name": level.name, "delta_halfwidth": level.delta_halfwidth})
        return {
            "n": self.n,
            "n_samples": self.n_samples,
            "master_seed": self.master_seed,
            "e": self.e,
            "classes": list(self.classes) if self.classes is not None else None,
            "levels": levels,
            "method": self.method,
            "allow_large_crev": self.allow_large_crev,
        }

    @staticmethod
    def from_dict(d: dict) -> "SimConfig":
        levels = []
        for level in d["levels"]:
            if isinstance(level, str):
                levels.append(level)
            else:
                levels.append(PerturbationLevel(level["name"], level["delta_halfwidth"]))
        return SimConfig(
            n=d["n"],
            n_samples=d["n_samples"],
            master_seed=d["master_seed"],
            e=d.get("e"),
            classes=tuple(d["classes"]) if d.get("classes") else None,
            levels=tuple(levels),
            method=d.get("method", "llsm"),
            n_jobs=d.get("n_jobs", 1),
            allow_large_crev=d.get("allow_large_crev", False),
        )


@dataclass(frozen=True)
class LevelStats:
    mean_d_euc: float
    sd_d_euc: float
    mean_tau: float
    sd_tau: float
    n_samples: int

    def to_dict(self) -> dict:
        return {
            "mean_d_euc": self.mean_d_euc,
            "sd_d_euc": self.sd_d_euc,
            "mean_tau": self.mean_tau,
            "sd_tau": self.sd_tau,
            "n_samples": self.n_samples,
        }

    @staticmethod
    def from_dict(d: dict) -> "LevelStats":
        return LevelStats(
            mean_d_euc=d["mean_d_euc"],
            sd_d_euc=d["sd_d_euc"],
            mean_tau=d["mean_tau"],
            sd_tau=d["sd_tau"],
            n_samples=d["n_samples"],
        )


@dataclass(frozen=True)
class GraphScore:
    """Per-class Monte Carlo aggregates, one stats row per perturbation level."""

    g6: str
    levels: dict[str, LevelStats] = field(compare=False)

    @property
    def graph_class(self) -> GraphClass:
        return class_from_graph6(self.g6)

    def avg_mean_d_euc(self) -> float:
        return sum(s.mean_d_euc for s in self.levels.values()) / len(self.levels)

    def avg_mean_tau(self) -> float:
        return sum(s.mean_tau for s in self.levels.values()) / len(self.levels)

    def to_dict(self) -> dict:
        return {
            "g6": self.g6,
            "levels": {name: s.to_dict() for name, s in sorted(self.levels.items())},
        }

    @staticmethod
    def from_dict(d: dict) -> "GraphScore":
        return GraphScore(
            g6=d["g6"],
            levels={name: LevelStats.from_dict(s) for name, s in d["levels"].items()},
        )


def _block_rng(master_seed: int, g6: str, level: PerturbationLevel, block: int) -> np.random.Generator:
    key = f"{master_seed}|{g6}|{level.name}:{level.delta_halfwidth:.17g}|{block}"
    digest = hashlib.sha256(key.encode()).digest()
    return np.random.Generator(np.random.Philox(key=np.frombuffer(digest[:16], dtype=np.uint64)))


def _batch_perturbed(n: int, halfwidth: float, rng: np.random.Generator, b: int):
    """Draw b consistent matrices and perturb every pair's representative entry."""
    w = rng.uniform(1.0, 9.0, (b, n))
    a = w[:, :, None] / w[:, None, :]
    iu, ju = np.triu_indices(n, 1)
    vals = a[:, iu, ju]
    delta = rng.uniform(-halfwidth, halfwidth, (b, iu.size))
    rep = np.where(vals >= 1.0, vals, 1.0 / vals)
    moved = rep + delta
    hat = np.where(moved >= 1.0, moved, 1.0 / (2.0 - delta - rep))
    new_vals = np.where(vals >= 1.0, hat, 1.0 / hat)
    a[:, iu, ju] = new_vals
    a[:, ju, iu] = 1.0 / new_vals
    return a


def _batch_llsm_complete(log_a: np.ndarray) -> np.ndarray:
    y = log_a.mean(axis=2)
    u = np.exp(y - y.max(axis=1, keepdims=True))
    return u / u.sum(axis=1, keepdims=True)


def _reduced_laplacian_inverse(n: int, pairs) -> np.ndarray:
    lap = np.zeros((n, n))
    for i, j in pairs:
        lap[i, i] += 1
        lap[j, j] += 1
        lap[i, j] -= 1
        lap[j, i] -= 1
    return np.linalg.inv(lap[1:, 1:])


def _batch_llsm_incomplete(log_a: np.ndarray, pairs, lap_inv: np.ndarray) -> np.ndarray:
    b, n, _ = log_a.shape
    r = np.zeros((b, n))
    for i, j in pairs:
        lij = log_a[:, i, j]
        r[:, i] += lij
        r[:, j] -= lij
    y = np.zeros((b, n))
    y[:, 1:] = r[:, 1:] @ lap_inv.T
    u = np.exp(y - y.max(axis=1, keepdims=True))
    return u / u.sum(axis=1, keepdims=True)


def _batch_perron(a: np.ndarray, v0=None, tol: float = 1e-12, maxiter: int = 5000, strict: bool = True):
    b, n, _ = a.shape
    v = np.full((b, n), 1.0 / n) if v0 is None else v0
    lam = np.zeros(b)
    for _ in range(maxiter):
        av = np.einsum("bij,bj->bi", a, v)
        lam_new = av.sum(axis=1)
        v = av / lam_new[:, None]
        if np.all(np.abs(lam_new - lam) <= tol * lam_new):
            return lam_new, v
        lam = lam_new
    if strict:
        raise ConvergenceError(f"batched power iteration hit the {maxiter}-step cap")
    return lam, v


def _batch_tau(u: np.ndarray, v: np.ndarray, iu, ju) -> np.ndarray:
    s = np.sign(u[:, iu] - u[:, ju]) * np.sign(v[:, iu] - v[:, ju])
    return s.sum(axis=1) / iu.size


def _batch_crev_weights(a: np.ndarray, known_pairs, missing_pairs, lap_inv,
                        tol: float = 1e-9, max_sweeps: int = 80):
    """Weights of the eigenvalue-minimal completion for a block of matrices.

    Coordinate updates from the eigenvalue gradient: at the per-entry minimum
    x^2 = (l_j r_i) / (l_i r_j) for left/right Perron vectors l, r.  Entries
    are swept Gauss-Seidel style with warm-started power iterations.
    """
    ac = a.copy()
    log_a = np.log(a)
    u0 = _batch_llsm_incomplete(log_a, known_pairs, lap_inv)
    for i, j in missing_pairs:
        ratio = u0[:, i] / u0[:, j]
        ac[:, i, j] = ratio
        ac[:, j, i] = 1.0 / ratio
    r = None
    left = None
    for _ in range(max_sweeps):
        shift = 0.0
        for i, j in missing_pairs:
            _, r = _batch_perron(ac, v0=r, tol=1e-12, maxiter=2000, strict=False)
            _, left = _batch_perron(ac.transpose(0, 2, 1), v0=left, tol=1e-12, maxiter=2000, strict=False)
            x = np.sqrt((left[:, j] * r[:, i]) / (left[:, i] * r[:, j]))
            shift = max(shift, float(np.max(np.abs(np.log(x) - np.log(ac[:, i, j])))))
            ac[:, i, j] = x
            ac[:, j, i] = 1.0 / x
        if shift < tol:
            break
    _, w = _batch_perron(ac, v0=r, tol=1e-13, maxiter=5000, strict=False)
    return w / w.sum(axis=1, keepdims=True)


def _cell_stats(n: int, g6: str, mask_pairs, level: PerturbationLevel, n_samples: int,
                master_seed: int, method: str) -> LevelStats:
    """Accumulate the metric moments for one (class, level) cell."""
    complete = len(mask_pairs) == n * (n - 1) // 2
    iu, ju = np.triu_indices(n, 1)
    if not complete:
        lap_inv = _reduced_laplacian_inverse(n, mask_pairs)
        missing = [(i, j) for i, j in zip(iu.tolist(), ju.tolist()) if (i, j) not in set(mask_pairs)]
    sums = np.zeros(4)  # d, d^2, tau, tau^2
    done = 0
    block = 0
    while done < n_samples:
        b = min(BLOCK_SIZE, n_samples - done)
        rng = _block_rng(master_seed, g6, level, block)
        a = _batch_perturbed(n, level.delta_halfwidth, rng, b)
        if complete:
            d = np.zeros(b)
            tau = np.ones(b)
        elif method == "llsm":
            log_a = np.log(a)
            v = _batch_llsm_complete(log_a)
            u = _batch_llsm_incomplete(log_a, mask_pairs, lap_inv)
            d = np.sqrt(((u - v) ** 2).sum(axis=1))
            tau = _batch_tau(u, v, iu, ju)
        else:
            _, v = _batch_perron(a)
            v = v / v.sum(axis=1, keepdims=True)
            u = _batch_crev_weights(a, mask_pairs, missing, lap_inv)
            d = np.sqrt(((u - v) ** 2).sum(axis=1))
            tau = _batch_tau(u, v, iu, ju)
        sums += np.array([d.sum(), (d**2).sum(), tau.sum(), (tau**2).sum()])
        done += b
        block += 1
    mean_d = sums[0] / n_samples
    mean_tau = sums[2] / n_samples
    var_d = max(0.0, sums[1] / n_samples - mean_d**2)
    var_tau = max(0.0, sums[3] / n_samples - mean_tau**2)
    return LevelStats(
        mean_d_euc=float(mean_d),
        sd_d_euc=float(math.sqrt(var_d)),
        mean_tau=float(mean_tau),
        sd_tau=float(math.sqrt(var_tau)),
        n_samples=n_samples,
    )


def run_cell(config: SimConfig, cls: GraphClass) -> GraphScore:
    """Score one comparison-graph class at every configured level."""
    if not is_connected(cls.representative):
        raise DisconnectedGraphError(f"class {cls.g6} is not connected")
    mask_pairs = sorted(cls.representative.edges)
    levels = {}
    for level in config.resolved_levels():
        levels[level.name] = _cell_stats(
            cls.n, cls.g6, mask_pairs, level, config.n_samples, config.master_seed, config.method
        )
    return GraphScore(g6=cls.g6, levels=levels)


def _run_cell_worker(args):
    config_dict, g6 = args
    config = SimConfig.from_dict(config_dict)
    return g6, run_cell(config, class_from_graph6(g6))


def run_level_sweep(config: SimConfig, progress=None) -> dict[str, GraphScore]:
    """run_cell over every target class, keyed by canonical graph6 string.

    Cells are the unit of parallelism; randomness is derived per cell, so the
    result is byte-identical for any n_jobs.
    """
    classes = config.target_classes()
    order = [cls.g6 for cls in sorted(classes, key=lambda c: (c.e, c.canon))]
    results: dict[str, GraphScore] = {}
    if config.n_jobs > 1:
        with ProcessPoolExecutor(max_workers=config.n_jobs) as pool:
            for g6, score in pool.map(_run_cell_worker, [(config.to_dict(), g6) for g6 in order]):
                results[g6] = score
                if progress:
                    progress(g6)
    else:
        for g6 in order:
            results[g6] = run_cell(config, class_from_graph6(g6))
            if progress:
                progress(g6)
    return {g6: results[g6] for g6 in order}


def significant_difference(a: GraphScore, b: GraphScore, plan=None) -> dict[str, dict[str, str]]:
    """Per-level, per-metric verdict from a's point of view: better / worse / tie.

    A difference is significant when it exceeds twice the margin of error the
    plan implies at the actual sample count.
    """
    verdicts: dict[str, dict[str, str]] = {}
    for name in a.levels:
        if name not in b.levels:
            continue
        sa, sb = a.levels[name], b.levels[name]
        if sa.n_samples != sb.n_samples:
            raise ValueError("scores must come from equal sample counts")
        n = sa.n_samples
        if plan is None:
            eps_d = margin_of_error(DEFAULT_SIGMA_D_EUC, DEFAULT_ALPHA_D_EUC, n)
            eps_tau = margin_of_error(DEFAULT_SIGMA_TAU, DEFAULT_ALPHA_TAU, n)
        else:
            eps_d = eps_tau = margin_of_error(plan.sigma_upper, plan.alpha, n)
        out = {}
        dd = sa.mean_d_euc - sb.mean_d_euc
        if abs(dd) <= 2 * eps_d:
            out["d_euc"] = "tie"
        else:
            out["d_euc"] = "better" if dd < 0 else "worse"
        dt = sa.mean_tau - sb.mean_tau
        if abs(dt) <= 2 * eps_tau:
            out["tau"] = "tie"
        else:
            out["tau"] = "better" if dt > 0 else "worse"
        verdicts[name] = out
    return verdicts


@dataclass(frozen=True)
class CrSummary:
    """Five-number summary of consistency ratios; whiskers are the extremes."""

    minimum: float
    lower_quartile: float
    median: float
    upper_quartile: float
    maximum: float


def cr_calibration(n: int, level, n_matrices: int, rng: np.random.Generator,
                   ri_table=None) -> CrSummary:
    """Distribution of CR over freshly generated-then-perturbed matrices."""
    table = DEFAULT_RI if ri_table is None else ri_table
    if n not in table:
        raise ValueError(f"random index undefined for n={n}")
    level = _resolve_level(level)
    a = _batch_perturbed(n, level.delta_halfwidth, rng, n_matrices)
    lam, _ = _batch_perron(a)
    cr = (lam - n) / (n - 1) / table[n]
    q = np.percentile(cr, [0, 25, 50, 75, 100])
    return CrSummary(*(float(x) for x in q))
