"""Numpy implementations of the hot numeric kernels.

Same contracts as the compiled module (_fastcore); selected automatically
when the extension is not built. Everything works on flat layout vectors:
m pair coordinates (colors pi[t], pj[t], 0-based), then k private
coordinates, then the independent remainder.
"""

from __future__ import annotations

import numpy as np

POS_TOL = 1e-15  # weight below this is treated as an empty transfer source

_STRUCTURE_CACHE: dict[tuple[int, int], dict] = {}


def _structure(k: int, pi: np.ndarray, pj: np.ndarray) -> dict:
    """Layout-dependent tables, cached (the layout is fixed per k)."""
    key = (k, len(pi))
    hit = _STRUCTURE_CACHE.get(key)
    if hit is not None:
        return hit
    m = len(pi)
    dim = m + k + 1
    isb = np.zeros((dim, k))
    if m:
        isb[np.arange(m), pi] = 1.0
        isb[np.arange(m), pj] = 1.0
    isa = np.zeros((dim, k))
    isa[m + np.arange(k), np.arange(k)] = 1.0
    isx = np.zeros(dim)
    isx[dim - 1] = 1.0
    src, dst = np.nonzero(~np.eye(dim, dtype=bool))
    ci, cj = np.triu_indices(k, 1)
    tables = {
        "inc": isb[:m].copy(), "isb": isb, "isa": isa, "isx": isx,
        "qdiag": isb + isa, "cross_part": isb + isx[:, None],
        "src": src, "dst": dst, "ci": ci, "cj": cj,
    }
    _STRUCTURE_CACHE[key] = tables
    return tables


def densities_batch(W: np.ndarray, k: int, pi: np.ndarray, pj: np.ndarray) -> np.ndarray:
    """Per-color densities for a batch of weight vectors; (N, dim) -> (N, k)."""
    W = np.asarray(W, dtype=np.float64)
    m = len(pi)
    inc = _structure(k, pi, pj)["inc"]
    B = W[:, :m]
    A = W[:, m:m + k]
    X = W[:, -1:]
    b_row = B @ inc
    bsq_row = (B * B) @ inc
    return A * A + bsq_row + 2.0 * A * b_row + 2.0 * A * X


def min_density_batch(W: np.ndarray, k: int, pi: np.ndarray, pj: np.ndarray) -> np.ndarray:
    return densities_batch(W, k, pi, pj).min(axis=1)


def best_transfer(w: np.ndarray, k: int, pi: np.ndarray, pj: np.ndarray):
    """Best single-pair weight transfer, exact line search on each segment.

    Scans every ordered coordinate pair (src, dst) with w[src] > 0; on each
    segment the objective min_i d_i is a piecewise quadratic whose maximum
    lies at an endpoint, a quadratic crossing, or a concave vertex, so
    evaluating those candidate steps is exact. Returns (src, dst, step,
    value); ties prefer the smallest step, then the lowest (src, dst).
    """
    w = np.asarray(w, dtype=np.float64)
    m = len(pi)
    tab = _structure(k, pi, pj)
    a = w[m:m + k]
    x = w[-1]
    b_row = w[:m] @ tab["inc"] if m else np.zeros(k)
    bsq_row = (w[:m] * w[:m]) @ tab["inc"] if m else np.zeros(k)
    d = a * a + bsq_row + 2 * a * b_row + 2 * a * x
    c = a + b_row + x

    grad = 2.0 * (w[:, None] + a[None, :]) * tab["isb"] + 2.0 * c[None, :] * tab["isa"] \
        + 2.0 * a[None, :] * tab["isx"][:, None]

    live = w[tab["src"]] > POS_TOL
    src = tab["src"][live]
    dst = tab["dst"][live]
    if len(src) == 0:
        return -1, -1, 0.0, float(d.min())

    isa, cross_part, qdiag = tab["isa"], tab["cross_part"], tab["qdiag"]
    beta = grad[dst] - grad[src]                      # (M, k)
    qc = isa[src] * cross_part[dst] + isa[dst] * cross_part[src]
    gamma = qdiag[dst] + qdiag[src] - 2.0 * qc        # (M, k)
    smax = w[src]                                     # (M,)

    M = len(src)
    parts = [np.zeros((M, 1)), smax[:, None]]
    with np.errstate(divide="ignore", invalid="ignore"):
        vert = np.where(gamma < -1e-300, -beta / (2.0 * gamma), 0.0)
    parts.append(np.clip(vert, 0.0, smax[:, None]))
    ci, cj = tab["ci"], tab["cj"]
    if len(ci):
        A = gamma[:, ci] - gamma[:, cj]               # (M, C2)
        B = beta[:, ci] - beta[:, cj]
        C = (d[ci] - d[cj])[None, :]
        lin = np.abs(A) < 1e-14
        with np.errstate(divide="ignore", invalid="ignore"):
            r_lin = np.where(np.abs(B) > 1e-300, -C / B, 0.0)
            disc = B * B - 4.0 * A * C
            sq = np.sqrt(np.maximum(disc, 0.0))
            r1 = (-B - sq) / (2.0 * A)
            r2 = (-B + sq) / (2.0 * A)
        ok = (~lin) & (disc >= 0.0)
        r1 = np.where(lin, r_lin, np.where(ok, r1, 0.0))
        r2 = np.where(lin, r_lin, np.where(ok, r2, 0.0))
        bad = ~np.isfinite(r1)
        r1[bad] = 0.0
        bad = ~np.isfinite(r2)
        r2[bad] = 0.0
        parts.append(np.clip(r1, 0.0, smax[:, None]))
        parts.append(np.clip(r2, 0.0, smax[:, None]))

    S = np.sort(np.concatenate(parts, axis=1), axis=1)  # ascending: ties -> smallest s
    S2 = S * S
    env = np.full(S.shape, np.inf)
    for i in range(k):                                # running min, no (M, NC, k) tensor
        np.minimum(env, d[i] + beta[:, i:i + 1] * S + gamma[:, i:i + 1] * S2, out=env)
    best_c = env.argmax(axis=1)
    rows = np.arange(M)
    best_vals = env[rows, best_c]
    best_steps = S[rows, best_c]
    top = int(best_vals.argmax())                     # first max: lowest (src, dst) wins ties
    return int(src[top]), int(dst[top]), float(best_steps[top]), float(best_vals[top])
