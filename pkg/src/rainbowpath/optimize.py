"""Multi-start local ascent for max of min_i d_i over the weight simplex.

The objective is a min of indefinite quadratics, so the search is local
ascent with several exact move families and many restarts; results are
always "best found", never claimed optimal. The guaranteed ceiling is the
threshold f(k): every iterate is a valid clustered graph, so values above
f(k) + float noise would contradict the proven bound.

Moves:
  transfer     - move mass between two coordinates; the objective along the
                 segment is a piecewise quadratic min of quadratics, so the
                 exact maximizer lies at an endpoint, a quadratic crossing,
                 or a concave vertex (scanned over all coordinate pairs by
                 the kernel backend).
  redistribute - the proportional-redistribution direction from the
                 perturbation calculus, with the same exact line search.
  claim7       - the pair shift direction (b_ij mass onto a_i, a_j), both
                 orientations.
  softmin      - projected gradient ascent on softmin_tau(d) with an
                 annealed temperature, to slide along ties.
"""

from __future__ import annotations

import csv
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import kernels
from .model import (
    ClusteredGraph,
    Layout,
    densities,
    extremal,
    f,
    families_for,
    min_density,
    require_valid,
)

POS_TOL = 1e-15


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 50
    max_iterations: int = 250
    step_tol: float = 1e-12
    value_tol: float = 1e-10
    seed: int = 0
    softmin_temperature: float = 0.1   # initial tau
    softmin_decay: float = 0.9         # applied every 100 iterations
    use_transfer: bool = True
    use_redistribution: bool = True
    use_claim7: bool = True
    use_softmin: bool = True
    workers: int = 1

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.step_tol <= 0 or self.value_tol <= 0:
            raise ValueError("tolerances must be > 0")
        if self.softmin_temperature <= 0:
            raise ValueError("softmin temperature must be > 0")
        if not (0 < self.softmin_decay < 1):
            raise ValueError("softmin decay must be in (0, 1)")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


@dataclass(frozen=True)
class TraceRow:
    restart: int
    iteration: int
    min_density: float
    move_kind: str


@dataclass(frozen=True)
class OptimizerResult:
    k: int
    best_graph: ClusteredGraph
    best_value: float              # min_i d_i(best_graph), recomputed independently
    best_restart: int
    trace: tuple[TraceRow, ...]
    wall_time: float


class _Problem:
    """Layout-bound evaluation helpers shared by all moves."""

    def __init__(self, k: int):
        self.k = k
        self.layout = Layout(k)
        self.pi = np.array([i - 1 for i, j in self.layout.pairs], dtype=np.int32)
        self.pj = np.array([j - 1 for i, j in self.layout.pairs], dtype=np.int32)
        m = self.layout.m
        self.inc = np.zeros((m, k))
        if m:
            self.inc[np.arange(m), self.pi] = 1.0
            self.inc[np.arange(m), self.pj] = 1.0

    def densities_vec(self, w: np.ndarray) -> np.ndarray:
        return kernels.densities_batch(w[None, :], self.k, self.pi, self.pj)[0]

    def value(self, w: np.ndarray) -> float:
        return float(self.densities_vec(w).min())

    def aggregates(self, w: np.ndarray):
        m = self.layout.m
        a, x = w[m:m + self.k], w[-1]
        b_row = self.inc.T @ w[:m] if m else np.zeros(self.k)
        c = a + b_row + x
        return a, x, b_row, c

    def direction_coeffs(self, w: np.ndarray, u: np.ndarray):
        """(beta, gamma): per-color linear and quadratic coefficients along u."""
        m = self.layout.m
        a, x, _, c = self.aggregates(w)
        ua, ux = u[m:m + self.k], u[-1]
        s1 = self.inc.T @ u[:m] if m else np.zeros(self.k)
        swb = self.inc.T @ (w[:m] * u[:m]) if m else np.zeros(self.k)
        ssq = self.inc.T @ (u[:m] ** 2) if m else np.zeros(self.k)
        beta = 2 * c * ua + 2 * (swb + a * s1) + 2 * a * ux
        gamma = ua ** 2 + ssq + 2 * ua * s1 + 2 * ua * ux
        return beta, gamma

    def gradient_matrix(self, w: np.ndarray) -> np.ndarray:
        """G[t, i] = d d_i / d w_t."""
        m, k = self.layout.m, self.k
        a, x, _, c = self.aggregates(w)
        G = np.zeros((len(w), k))
        for t in range(m):
            for col in (self.pi[t], self.pj[t]):
                G[t, col] = 2 * (w[t] + a[col])
        G[m + np.arange(k), np.arange(k)] = 2 * c
        G[-1, :] = 2 * a
        return G


def _line_max_min(alpha: np.ndarray, beta: np.ndarray, gamma: np.ndarray,
                  smax: float) -> tuple[float, float]:
    """Exact max over s in [0, smax] of min_i alpha_i + beta_i s + gamma_i s^2."""
    if smax <= 0:
        return 0.0, float(alpha.min())
    cands = [0.0, smax]
    k = len(alpha)
    for i in range(k):
        if gamma[i] < 0:
            cands.append(min(max(-beta[i] / (2 * gamma[i]), 0.0), smax))
    for i in range(k):
        for j in range(i + 1, k):
            A, B, C = gamma[i] - gamma[j], beta[i] - beta[j], alpha[i] - alpha[j]
            if abs(A) < 1e-14:
                if abs(B) > 1e-300:
                    cands.append(min(max(-C / B, 0.0), smax))
            else:
                disc = B * B - 4 * A * C
                if disc >= 0:
                    sq = math.sqrt(disc)
                    for r in ((-B - sq) / (2 * A), (-B + sq) / (2 * A)):
                        cands.append(min(max(r, 0.0), smax))
    ss = np.array(sorted(cands))
    vals = (alpha[None, :] + beta[None, :] * ss[:, None]
            + gamma[None, :] * ss[:, None] ** 2).min(axis=1)
    best = int(vals.argmax())
    return float(ss[best]), float(vals[best])


def _feasible_smax(w: np.ndarray, u: np.ndarray) -> float:
    neg = u < -POS_TOL
    if not neg.any():
        return math.inf
    return float((w[neg] / -u[neg]).min())


def _project_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto the probability simplex."""
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    idx = np.arange(1, len(v) + 1)
    cond = u - css / idx > 0
    rho = idx[cond][-1]
    theta = css[rho - 1] / rho
    return np.maximum(v - theta, 0.0)


# ---------------------------------------------------------------------------
# Public exact line search on a single transfer


Coordinate = tuple  # ("b", i, j) | ("a", i) | ("x",), or the strings "b i j"/"a i"/"x"


def _coord_index(layout: Layout, coord) -> int:
    if isinstance(coord, str):
        parts = coord.replace(",", " ").split()
        kind = parts[0][0]
        nums = [int(p) for p in ([parts[0][1:]] if len(parts[0]) > 1 else []) + parts[1:] if p]
        coord = (kind, *nums)
    kind = coord[0]
    if kind == "b":
        i, j = sorted(coord[1:3])
        return layout.pair_index[(i, j)]
    if kind == "a":
        return layout.a_index(coord[1])
    if kind == "x":
        return layout.x_index
    raise ValueError(f"unknown coordinate {coord!r}")


def line_search_transfer(g: ClusteredGraph, src, dst) -> tuple[float, float]:
    """Exact maximizing step for a src -> dst weight transfer.

    Returns (step, new min density); enumerates envelope breakpoints, so
    the result is the true maximum along the segment. src == dst returns
    (0, current value). Zero-weight source is a precondition error.
    """
    require_valid(g)
    prob = _Problem(g.k)
    w = np.array(prob.layout.to_vector(g.as_float()))
    si, di = _coord_index(prob.layout, src), _coord_index(prob.layout, dst)
    if si == di:
        return 0.0, prob.value(w)
    if w[si] <= POS_TOL:
        raise ValueError(f"source coordinate has zero weight: {src!r}")
    u = np.zeros(len(w))
    u[si], u[di] = -1.0, 1.0
    alpha = prob.densities_vec(w)
    beta, gamma = prob.direction_coeffs(w, u)
    return _line_max_min(alpha, beta, gamma, float(w[si]))


# ---------------------------------------------------------------------------
# Restart ascent


def _starts(k: int, cfg: OptimizerConfig, prob: _Problem) -> list:
    bases = [np.array(prob.layout.to_vector(extremal(k, fam).as_float()))
             for fam in families_for(k)]
    return bases


def _run_restart(k: int, cfg: OptimizerConfig, restart: int) -> tuple[float, int, np.ndarray, list[TraceRow]]:
    prob = _Problem(k)
    bases = _starts(k, cfg, prob)
    rng = np.random.default_rng([cfg.seed, restart])
    nb = len(bases)
    if restart < nb:
        w = bases[restart].copy()
    elif restart < 2 * nb:
        w = 0.9 * bases[restart - nb] + 0.1 * rng.dirichlet(np.ones(prob.layout.dim))
    else:
        w = rng.dirichlet(np.ones(prob.layout.dim))

    value = prob.value(w)
    trace = [TraceRow(restart, 0, value, "start")]
    tau = cfg.softmin_temperature
    m = prob.layout.m

    for it in range(1, cfg.max_iterations + 1):
        if it % 100 == 0:
            tau *= cfg.softmin_decay
        moved = False

        if cfg.use_transfer:
            src, dst, step, val = kernels.best_transfer(w, k, prob.pi, prob.pj)
            if src >= 0 and val > value + cfg.value_tol and step > cfg.step_tol:
                w[src] -= step
                w[dst] += step
                np.maximum(w, 0.0, out=w)
                w /= w.sum()
                value = prob.value(w)
                trace.append(TraceRow(restart, it, value, "transfer"))
                moved = True

        if not moved:
            # escape moves, tried only when no single transfer improves
            best_u, best_s, best_val, best_kind = None, 0.0, value, ""
            directions: list[tuple[np.ndarray, str]] = []
            if cfg.use_redistribution:
                a = w[m:m + k]
                pos = a > POS_TOL
                if pos.any():
                    u = len(np.where(pos)[0]) * w.copy()
                    u[m:m + k][pos] -= 1.0
                    directions.append((u, "redistribute"))
                    directions.append((-u, "redistribute"))
            if cfg.use_claim7:
                for t in range(m):
                    if w[t] <= POS_TOL:
                        continue
                    i, j = prob.pi[t], prob.pj[t]
                    u = np.zeros(len(w))
                    u[t] = -(w[m + i] + w[m + j] + 2 * w[t])
                    u[m + i] = w[m + i] + w[t]
                    u[m + j] = w[m + j] + w[t]
                    directions.append((u, "claim7"))
                    directions.append((-u, "claim7"))
            alpha = prob.densities_vec(w)
            for u, kind in directions:
                smax = _feasible_smax(w, u)
                if not (smax > cfg.step_tol):
                    continue
                if math.isinf(smax):
                    continue
                beta, gamma = prob.direction_coeffs(w, u)
                s, val = _line_max_min(alpha, beta, gamma, smax)
                if val > best_val + cfg.value_tol and s > cfg.step_tol:
                    best_u, best_s, best_val, best_kind = u, s, val, kind
            if cfg.use_softmin and best_u is None:
                d = prob.densities_vec(w)
                p = np.exp(-(d - d.min()) / tau)
                p /= p.sum()
                grad = prob.gradient_matrix(w) @ p
                eta = 0.1
                for _ in range(12):
                    cand = _project_simplex(w + eta * grad)
                    val = prob.value(cand)
                    if val > value + cfg.value_tol:
                        best_u, best_s, best_val, best_kind = cand - w, 1.0, val, "softmin"
                        break
                    eta *= 0.5
            if best_u is None:
                break
            w = w + best_s * best_u
            np.maximum(w, 0.0, out=w)
            w /= w.sum()
            value = prob.value(w)
            trace.append(TraceRow(restart, it, value, best_kind))

    return value, restart, w, trace


def maximize_min_density(k: int, cfg: OptimizerConfig | None = None) -> OptimizerResult:
    """Multi-start search for max min_i d_i; best found, bounded above by f(k)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    cfg = cfg or OptimizerConfig()
    t0 = time.perf_counter()

    if cfg.workers == 1:
        outcomes = [_run_restart(k, cfg, r) for r in range(cfg.restarts)]
    else:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            outcomes = list(pool.map(_run_restart, [k] * cfg.restarts,
                                     [cfg] * cfg.restarts, range(cfg.restarts),
                                     chunksize=max(1, cfg.restarts // (4 * cfg.workers))))

    # deterministic merge: max value, ties to the lowest restart index
    best_value, best_restart, best_w = -math.inf, -1, None
    trace: list[TraceRow] = []
    for value, restart, w, rows in outcomes:
        trace.extend(rows)
        if value > best_value:
            best_value, best_restart, best_w = value, restart, w
    prob = _Problem(k)
    g = prob.layout.to_graph([float(v) for v in best_w])
    require_valid(g)
    recomputed = float(min(densities(g).d))
    return OptimizerResult(k, g, recomputed, best_restart, tuple(trace),
                           time.perf_counter() - t0)


def write_trace_csv(result: OptimizerResult, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["restart", "iteration", "min_density", "move_kind"])
        for row in result.trace:
            writer.writerow([row.restart, row.iteration, f"{row.min_density:.17g}", row.move_kind])
