"""Concrete n-vertex realizations of clustered graphs and rainbow detection.

blow_up turns a clustered graph into k edge sets on n vertices (cliques
inside private and pair clusters, bicliques from private clusters to the
independent remainder and to their pair clusters). find_rainbow decides
whether a rainbow path/walk with a given number of edges exists, by
exhaustive backtracking over vertex sequences; each complete sequence is
rainbow-colorable iff the edge slots admit a system of distinct
representatives over the colors carrying them.

Two search strategies share the same contract:

* "direct"  - lexicographic DFS over vertices; returns the first witness
              in lexicographic vertex order (paths canonicalized to
              v0 < vL).
* "cluster" - collapses interchangeable vertices (twin classes, verified
              exactly, not heuristically) and searches class sequences;
              exhaustive, deterministic, returns a valid witness but not
              necessarily the lexicographically first one. This is what
              makes blow-ups at n = 200 cheap: a blow-up has at most
              C(k,2) + k + 1 classes regardless of n.

"auto" picks "cluster" above _AUTO_CLUSTER_N vertices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .model import ClusteredGraph, densities, extremal, require_valid

MAX_DETECT_LENGTH = 6
_AUTO_CLUSTER_N = 48


class SystemFormatError(ValueError):
    """Malformed edge-list input."""


@dataclass(frozen=True)
class ColoredGraphSystem:
    """n vertices (1-based) with one edge set per color; pairs stored u < v."""

    n: int
    k: int
    edges: tuple[frozenset[tuple[int, int]], ...]

    def __post_init__(self):
        if self.n < 1 or self.k < 1:
            raise ValueError("need n >= 1 and k >= 1")
        if len(self.edges) != self.k:
            raise ValueError(f"expected {self.k} edge sets, got {len(self.edges)}")
        object.__setattr__(self, "edges", tuple(frozenset(es) for es in self.edges))
        for c, es in enumerate(self.edges, start=1):
            for (u, v) in es:
                if not (1 <= u < v <= self.n):
                    raise ValueError(f"color {c}: edge ({u}, {v}) needs 1 <= u < v <= {self.n}")

    def with_edge(self, color: int, u: int, v: int) -> "ColoredGraphSystem":
        u, v = (u, v) if u < v else (v, u)
        es = list(self.edges)
        es[color - 1] = es[color - 1] | {(u, v)}
        return ColoredGraphSystem(self.n, self.k, tuple(es))

    def edge_colors(self, u: int, v: int) -> tuple[int, ...]:
        u, v = (u, v) if u < v else (v, u)
        return tuple(c for c in range(1, self.k + 1) if (u, v) in self.edges[c - 1])


@dataclass(frozen=True)
class RainbowWitness:
    vertices: tuple[int, ...]
    colors: tuple[int, ...]
    kind: str                      # "path" | "walk"

    def check(self, system: ColoredGraphSystem) -> bool:
        vs, cs = self.vertices, self.colors
        if len(vs) != len(cs) + 1 or len(set(cs)) != len(cs):
            return False
        if self.kind == "path" and len(set(vs)) != len(vs):
            return False
        if any(vs[t] == vs[t + 1] for t in range(len(cs))):
            return False
        for t, c in enumerate(cs):
            u, v = sorted((vs[t], vs[t + 1]))
            if not (1 <= c <= system.k) or (u, v) not in system.edges[c - 1]:
                return False
        return True

    def format(self) -> str:
        head = "PATH" if self.kind == "path" else "WALK"
        return (f"{head} " + " ".join(map(str, self.vertices))
                + " / " + " ".join(map(str, self.colors)))


def edge_counts(system: ColoredGraphSystem) -> tuple[int, ...]:
    return tuple(len(es) for es in system.edges)


# ---------------------------------------------------------------------------
# Blow-up


def _clusters(g: ClusteredGraph):
    """Positive-weight clusters in the fixed enumeration order."""
    out = []
    for (i, j), w in sorted(g.b.items()):
        out.append(("b", (i, j), w))
    for i in range(1, g.k + 1):
        if g.a_at(i) > 0:
            out.append(("a", i, g.a_at(i)))
    if g.x > 0:
        out.append(("x", None, g.x))
    return out


def apportion(weights: Sequence, n: int) -> list[int]:
    """Largest-remainder rounding of weight*n; ties by enumeration order."""
    quotas = [w * n for w in weights]
    base = [int(math.floor(q)) for q in quotas]
    rem = n - sum(base)
    order = sorted(range(len(weights)), key=lambda t: (-(quotas[t] - base[t]), t))
    for t in order[:rem]:
        base[t] += 1
    return base


def blow_up(g: ClusteredGraph, n: int) -> ColoredGraphSystem:
    """n-vertex realization; color-i edge count tracks d_i * n^2 / 2."""
    require_valid(g)
    clusters = _clusters(g)
    if n < len(clusters):
        raise ValueError(f"n = {n} is smaller than the {len(clusters)} positive-weight clusters")
    sizes = apportion([c[2] for c in clusters], n)

    members: list[list[int]] = []
    nxt = 1
    for size in sizes:
        members.append(list(range(nxt, nxt + size)))
        nxt += size

    by_color_b: dict[int, list[list[int]]] = {i: [] for i in range(1, g.k + 1)}
    a_members: dict[int, list[int]] = {}
    x_members: list[int] = []
    edges: list[set[tuple[int, int]]] = [set() for _ in range(g.k)]

    for (kind, payload, _), verts in zip(clusters, members):
        if kind == "b":
            i, j = payload
            clique = [(u, v) for ti, u in enumerate(verts) for v in verts[ti + 1:]]
            edges[i - 1].update(clique)
            edges[j - 1].update(clique)
            by_color_b[i].append(verts)
            by_color_b[j].append(verts)
        elif kind == "a":
            a_members[payload] = verts
            edges[payload - 1].update(
                (u, v) for ti, u in enumerate(verts) for v in verts[ti + 1:])
        else:
            x_members = verts

    for i, verts in a_members.items():
        for other in by_color_b[i] + ([x_members] if x_members else []):
            edges[i - 1].update((u, v) if u < v else (v, u)
                                for u in verts for v in other)

    return ColoredGraphSystem(n, g.k, tuple(frozenset(es) for es in edges))


# ---------------------------------------------------------------------------
# Rainbow detection


def _adjacency(system: ColoredGraphSystem):
    """Per-color and union adjacency bitmasks (bit v set in adj[u])."""
    per = [[0] * (system.n + 1) for _ in range(system.k)]
    union = [0] * (system.n + 1)
    for c, es in enumerate(system.edges):
        ad = per[c]
        for (u, v) in es:
            ad[u] |= 1 << v
            ad[v] |= 1 << u
            union[u] |= 1 << v
            union[v] |= 1 << u
    return per, union


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _sdr(slots: list[tuple[int, ...]]) -> list[int] | None:
    """System of distinct representatives; smallest admissible set first."""
    order = sorted(range(len(slots)), key=lambda t: len(slots[t]))
    chosen: list[int] = [0] * len(slots)
    used: set[int] = set()

    def go(pos: int) -> bool:
        if pos == len(order):
            return True
        for c in slots[order[pos]]:
            if c not in used:
                used.add(c)
                chosen[order[pos]] = c
                if go(pos + 1):
                    return True
                used.remove(c)
        return False

    return chosen if go(0) else None


def _slot_colors(per, u: int, v: int, k: int) -> tuple[int, ...]:
    return tuple(c + 1 for c in range(k) if per[c][u] & (1 << v))


def _find_direct(system: ColoredGraphSystem, length: int, kind: str,
                 nonbacktracking: bool, starts: Iterable[int] | None = None) -> RainbowWitness | None:
    per, union = _adjacency(system)
    k = system.k
    seq = [0] * (length + 1)
    slots: list[tuple[int, ...]] = [()] * length

    def extend(t: int) -> RainbowWitness | None:
        if t == length + 1:
            colors = _sdr(list(slots))
            if colors is None:
                return None
            if kind == "path" and seq[0] > seq[-1]:
                return None       # mirror of an already-enumerated canonical path
            return RainbowWitness(tuple(seq), tuple(colors), kind)
        prev = seq[t - 1]
        for u in _bits(union[prev]):
            if kind == "path" and u in seq[:t]:
                continue
            if nonbacktracking and t >= 2 and u == seq[t - 2]:
                continue
            seq[t] = u
            slots[t - 1] = _slot_colors(per, prev, u, k)
            if _sdr(list(slots[:t])) is not None:   # partial-SDR prune
                found = extend(t + 1)
                if found is not None:
                    return found
        return None

    for v0 in (starts if starts is not None else range(1, system.n + 1)):
        seq[0] = v0
        found = extend(1)
        if found is not None:
            return found
    return None


# --- twin-class collapse ----------------------------------------------------


def _twin_classes(system: ColoredGraphSystem):
    """Partition into exactly-verified interchangeable-vertex classes.

    u, v are twins iff for every color N(u) \\ {u,v} = N(v) \\ {u,v}; the
    relation is transitive, so checking each vertex against one class
    representative is exact.
    """
    per, _ = _adjacency(system)
    classes: list[list[int]] = []
    reps: list[int] = []
    for v in range(1, system.n + 1):
        placed = False
        for ci, r in enumerate(reps):
            both = ~((1 << v) | (1 << r))
            if all(ad[v] & both == ad[r] & both for ad in per):
                classes[ci].append(v)
                placed = True
                break
        if not placed:
            classes.append([v])
            reps.append(v)
    return classes


def _find_cluster(system: ColoredGraphSystem, length: int, kind: str,
                  nonbacktracking: bool) -> RainbowWitness | None:
    per, _ = _adjacency(system)
    k = system.k
    classes = _twin_classes(system)
    nc = len(classes)
    sizes = [len(cl) for cl in classes]

    # between-class colors via representatives; within-class clique colors
    between = [[() for _ in range(nc)] for _ in range(nc)]
    within = [()] * nc
    for ci in range(nc):
        u = classes[ci][0]
        if sizes[ci] >= 2:
            within[ci] = _slot_colors(per, u, classes[ci][1], k)
        for cj in range(ci + 1, nc):
            cols = _slot_colors(per, u, classes[cj][0], k)
            between[ci][cj] = cols
            between[cj][ci] = cols

    def step_colors(p: int, q: int) -> tuple[int, ...]:
        return within[p] if p == q else between[p][q]

    cseq = [0] * (length + 1)
    use: list[int] = [0] * nc

    def materialize(colors: list[int]) -> RainbowWitness:
        verts: list[int] = []
        taken: dict[int, int] = {}
        for t, ci in enumerate(cseq):
            if kind == "path":
                idx = taken.get(ci, 0)
                taken[ci] = idx + 1
                verts.append(classes[ci][idx])
            else:
                avoid = {verts[-1]} if verts else set()
                if nonbacktracking and len(verts) >= 2:
                    avoid.add(verts[-2])
                verts.append(next(v for v in classes[ci] if v not in avoid))
        return RainbowWitness(tuple(verts), tuple(colors), kind)

    def extend(t: int, slots: list[tuple[int, ...]]) -> RainbowWitness | None:
        if t == length + 1:
            colors = _sdr(slots)
            return materialize(colors) if colors is not None else None
        prev = cseq[t - 1]
        for ci in range(nc):
            cols = step_colors(prev, ci)
            if not cols:
                continue
            if kind == "path":
                if use[ci] + 1 > sizes[ci]:
                    continue
            else:
                need = 1 + (ci == prev) + (1 if nonbacktracking and t >= 2 and ci == cseq[t - 2] else 0)
                if sizes[ci] < need:
                    continue
            cseq[t] = ci
            use[ci] += 1
            if _sdr(slots + [cols]) is not None:
                found = extend(t + 1, slots + [cols])
                if found is not None:
                    return found
            use[ci] -= 1
        return None

    for c0 in range(nc):
        if kind == "path" and sizes[c0] < 1:
            continue
        cseq[0] = c0
        use[c0] = 1
        found = extend(1, [])
        use[c0] = 0
        if found is not None:
            return found
    return None


def find_rainbow(system: ColoredGraphSystem, length: int = 3, kind: str = "path",
                 nonbacktracking: bool = False, strategy: str = "auto",
                 allow_long: bool = False, workers: int = 1) -> RainbowWitness | None:
    """First rainbow path/walk with `length` edges, or None.

    kind "walk" allows repeated vertices (consecutive ones distinct) and
    repeated edges; nonbacktracking additionally forbids v[t+1] == v[t-1].
    """
    if length < 2:
        raise ValueError("length must be >= 2")
    if length > MAX_DETECT_LENGTH and not allow_long:
        raise ValueError(f"length {length} > {MAX_DETECT_LENGTH} refused "
                         "(complexity guard; pass allow_long=True to override)")
    if kind not in ("path", "walk"):
        raise ValueError(f"kind must be 'path' or 'walk', got {kind!r}")
    if length > system.k:
        return None                  # fewer colors than slots: no rainbow assignment
    if strategy == "auto":
        strategy = "cluster" if system.n > _AUTO_CLUSTER_N else "direct"
    if strategy == "cluster":
        witness = _find_cluster(system, length, kind, nonbacktracking)
    elif strategy == "direct":
        if workers > 1:
            witness = _find_direct_parallel(system, length, kind, nonbacktracking, workers)
        else:
            witness = _find_direct(system, length, kind, nonbacktracking)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    assert witness is None or witness.check(system)
    return witness


def _worker_chunk(args):
    system, length, kind, nb, starts = args
    return _find_direct(system, length, kind, nb, starts)


def _find_direct_parallel(system, length, kind, nonbacktracking, workers):
    from concurrent.futures import ProcessPoolExecutor

    chunks = np.array_split(np.arange(1, system.n + 1), workers)
    jobs = [(system, length, kind, nonbacktracking, [int(v) for v in ch])
            for ch in chunks if len(ch)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        found = [w for w in pool.map(_worker_chunk, jobs) if w is not None]
    if not found:
        return None
    return min(found, key=lambda w: w.vertices)


def _find_through_edge(system: ColoredGraphSystem, per, union, u: int, v: int,
                       length: int, kind: str, nonbacktracking: bool) -> RainbowWitness | None:
    """Witness among sequences containing the edge {u, v} at some slot."""
    k = system.k

    def ok_next(seq: list[int], nxt: int) -> bool:
        if kind == "path":
            return nxt not in seq
        if nxt == seq[-1]:
            return False
        return not (nonbacktracking and len(seq) >= 2 and nxt == seq[-2])

    def grow(seq: list[int], slots: list[tuple[int, ...]], want: int) -> RainbowWitness | None:
        if want == 0:
            colors = _sdr(slots)
            if colors is None:
                return None
            return RainbowWitness(tuple(seq), tuple(colors), kind)
        for nxt in _bits(union[seq[-1]]):
            if not ok_next(seq, nxt):
                continue
            cols = _slot_colors(per, seq[-1], nxt, k)
            if _sdr(slots + [cols]) is None:
                continue
            found = grow(seq + [nxt], slots + [cols], want - 1)
            if found is not None:
                return found
        return None

    base = _slot_colors(per, u, v, k)
    if not base:
        return None
    for pos in range(length):            # slot index the edge occupies
        for (s0, s1) in ((u, v), (v, u)):
            # suffix first: sequences s0, s1, then length-pos-1 more steps
            def left(seq: list[int], slots: list[tuple[int, ...]], want: int) -> RainbowWitness | None:
                if want == 0:
                    return grow(seq, slots, length - pos - 1)
                head = seq[0]
                for nxt in _bits(union[head]):
                    if kind == "path" and nxt in seq:
                        continue
                    if kind == "walk":
                        if nxt == head:
                            continue
                        if nonbacktracking and len(seq) >= 2 and nxt == seq[1]:
                            continue
                    cols = _slot_colors(per, nxt, head, k)
                    if _sdr(slots + [cols]) is None:
                        continue
                    found = left([nxt] + seq, slots + [cols], want - 1)
                    if found is not None:
                        return found
                return None

            found = left([s0, s1], [base], pos)
            if found is not None:
                return found
    return None


# ---------------------------------------------------------------------------
# Saturation experiment


@dataclass(frozen=True)
class SaturationReport:
    k: int
    n: int
    seed: int
    kind: str
    family: str
    edges_added: int
    witness: RainbowWitness
    edge_counts: tuple[int, ...]
    densities: tuple[float, ...]        # 2 * count / n^2 at stopping time


def default_family(k: int) -> str:
    return "pairs" if k <= 6 else "star"


def saturation_experiment(k: int, n: int, seed: int, kind: str = "path",
                          nonbacktracking: bool = False) -> SaturationReport:
    """Add random edges to the sparsest color until a rainbow witness appears.

    Starts from the extremal blow-up (which has no witness); each addition
    only needs detection through the new edge, because witness existence
    is monotone under edge addition.
    """
    if k < 3:
        raise ValueError("saturation needs k >= 3: with fewer colors no rainbow "
                         "3-edge witness is possible")
    if n < 20:
        raise ValueError("saturation needs n >= 20")
    family = default_family(k)
    system = blow_up(extremal(k, family), n)
    rng = np.random.default_rng([seed, k, n])
    per, union = _adjacency(system)
    edge_sets = [set(es) for es in system.edges]
    counts = [len(es) for es in edge_sets]
    all_pairs = n * (n - 1) // 2

    added = 0
    while True:
        order = sorted(range(k), key=lambda c: (counts[c], c))
        color = next((c for c in order if counts[c] < all_pairs), None)
        if color is None:
            raise RuntimeError("all colors complete without a witness; unreachable for k >= 3")
        while True:
            u = int(rng.integers(1, n + 1))
            v = int(rng.integers(1, n + 1))
            if u == v:
                continue
            u, v = (u, v) if u < v else (v, u)
            if (u, v) not in edge_sets[color]:
                break
        edge_sets[color].add((u, v))
        counts[color] += 1
        added += 1
        per[color][u] |= 1 << v
        per[color][v] |= 1 << u
        union[u] |= 1 << v
        union[v] |= 1 << u
        current = ColoredGraphSystem(n, k, tuple(frozenset(es) for es in edge_sets))
        witness = _find_through_edge(current, per, union, u, v, 3, kind, nonbacktracking)
        if witness is not None:
            assert witness.check(current)
            return SaturationReport(
                k, n, seed, kind, family, added, witness, tuple(counts),
                tuple(2.0 * c / (n * n) for c in counts))


# ---------------------------------------------------------------------------
# Edge-list text format


def write_system(system: ColoredGraphSystem, path) -> None:
    with open(path, "w") as fh:
        fh.write(f"{system.n} {system.k}\n")
        for c, es in enumerate(system.edges, start=1):
            for (u, v) in sorted(es):
                fh.write(f"{c} {u} {v}\n")


def read_system(path) -> ColoredGraphSystem:
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise SystemFormatError("first line must be 'n k'")
        try:
            n, k = int(header[0]), int(header[1])
        except ValueError:
            raise SystemFormatError("first line must be 'n k' with integers") from None
        if n < 1 or k < 1:
            raise SystemFormatError(f"need n >= 1 and k >= 1, got n = {n}, k = {k}")
        edge_sets: list[set[tuple[int, int]]] = [set() for _ in range(k)]
        for lineno, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 3:
                raise SystemFormatError(f"line {lineno}: expected 'c u v', got {line!r}")
            try:
                c, u, v = map(int, parts)
            except ValueError:
                raise SystemFormatError(f"line {lineno}: expected integers, got {line!r}") from None
            if not (1 <= c <= k):
                raise SystemFormatError(f"line {lineno}: color {c} outside [1, {k}]")
            if not (1 <= u < v <= n):
                raise SystemFormatError(f"line {lineno}: edge ({u}, {v}) needs 1 <= u < v <= {n}")
            if (u, v) in edge_sets[c - 1]:
                raise SystemFormatError(f"line {lineno}: duplicate edge ({c}, {u}, {v})")
            edge_sets[c - 1].add((u, v))
    return ColoredGraphSystem(n, k, tuple(frozenset(es) for es in edge_sets))
