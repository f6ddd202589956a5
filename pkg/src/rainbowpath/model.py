"""Clustered-graph model for the rainbow 3-edge-path threshold problem.

A clustered graph for k colors is a weight vector on the probability
simplex: pair weights b[i,j] (1 <= i < j <= k), private weights a[i], and
an independent remainder x. The per-color edge density is the quadratic

    d_i = a_i^2 + sum_j b_ij^2 + 2 a_i sum_j b_ij + 2 a_i x

and min_i d_i is bounded by the threshold f(k) = ceil(k/2)^-2 (k <= 6),
1/(2k-1) (k >= 7), attained by the constructions built in `extremal`.

Weights are either exact (int / Fraction: "rational mode") or floats.
All arithmetic here is polymorphic; exactness is preserved whenever the
inputs are exact. Graphs are immutable values; every operation returns a
new graph.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

Weight = int | Fraction | float

FLOAT_SUM_TOL = 1e-12  # sum-to-one slack accepted for float-mode graphs

PAIRS_MAX_K = 6
MIXED_KS = (3, 5)


class InvalidGraphError(ValueError):
    """Input graph fails nonnegativity or the sum-to-one constraint."""


class ConstructionError(ValueError):
    """Unsupported (k, family) combination or parameter out of range."""


class ReductionError(ValueError):
    """Degenerate contraction / color drop (removed mass fills the simplex)."""


class DeltaError(ValueError):
    """Perturbation direction violates its preconditions."""


def _is_exact(w: Weight) -> bool:
    return isinstance(w, (int, Fraction)) and not isinstance(w, bool)


def _pair(i: int, j: int) -> tuple[int, int]:
    if i == j:
        raise ValueError(f"pair weight needs two distinct colors, got ({i}, {j})")
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class ClusteredGraph:
    """Immutable weight vector (b, a, x) for k colors; colors are 1-based."""

    k: int
    b: Mapping[tuple[int, int], Weight] = field(default_factory=dict)
    a: tuple[Weight, ...] = ()
    x: Weight = 0

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        clean: dict[tuple[int, int], Weight] = {}
        for (i, j), w in dict(self.b).items():
            i, j = _pair(i, j)
            if not (1 <= i < j <= self.k):
                raise ValueError(f"pair ({i}, {j}) outside [1, {self.k}]")
            if (i, j) in clean:
                raise ValueError(f"duplicate pair weight for ({i}, {j})")
            if w != 0:
                clean[(i, j)] = w
        object.__setattr__(self, "b", MappingProxyType(dict(sorted(clean.items()))))
        a = tuple(self.a) if self.a else (0,) * self.k
        if len(a) != self.k:
            raise ValueError(f"a must have {self.k} entries, got {len(a)}")
        object.__setattr__(self, "a", a)

    def b_at(self, i: int, j: int) -> Weight:
        return self.b.get(_pair(i, j), 0)

    def a_at(self, i: int) -> Weight:
        return self.a[i - 1]

    def weights(self) -> Iterable[Weight]:
        yield from self.b.values()
        yield from self.a
        yield self.x

    @property
    def is_rational(self) -> bool:
        return all(_is_exact(w) for w in self.weights())

    def total(self) -> Weight:
        return sum(self.b.values()) + sum(self.a) + self.x

    def as_float(self) -> "ClusteredGraph":
        return ClusteredGraph(
            self.k,
            {p: float(w) for p, w in self.b.items()},
            tuple(float(w) for w in self.a),
            float(self.x),
        )

    def as_fraction(self) -> "ClusteredGraph":
        """Exact rationalization (floats convert via their binary value)."""
        return ClusteredGraph(
            self.k,
            {p: Fraction(w) for p, w in self.b.items()},
            tuple(Fraction(w) for w in self.a),
            Fraction(self.x),
        )

    def __repr__(self):
        bs = ", ".join(f"b{i}{j}={w}" for (i, j), w in self.b.items())
        pos_a = ", ".join(f"a{i}={w}" for i, w in enumerate(self.a, start=1) if w != 0)
        parts = [p for p in (bs, pos_a, f"x={self.x}" if self.x != 0 else "") if p]
        return f"ClusteredGraph(k={self.k}; {'; '.join(parts) or 'all zero'})"


@dataclass(frozen=True)
class DerivedQuantities:
    """Per-color densities and the aggregates used throughout the proofs."""

    d: tuple[Weight, ...]
    b_row: tuple[Weight, ...]      # b_i = sum_{j != i} b_ij
    c_row: tuple[Weight, ...]      # c_i = a_i + b_i + x
    c_min: Weight
    b_min_pos: Weight | None       # min positive b_ij; None when all b_ij = 0


@dataclass(frozen=True)
class WeightDelta:
    """Signed zero-sum perturbation over the same coordinates as a graph."""

    k: int
    b: Mapping[tuple[int, int], Weight] = field(default_factory=dict)
    a: tuple[Weight, ...] = ()
    x: Weight = 0

    def __post_init__(self):
        clean = {}
        for (i, j), w in dict(self.b).items():
            i, j = _pair(i, j)
            if not (1 <= i < j <= self.k):
                raise ValueError(f"pair ({i}, {j}) outside [1, {self.k}]")
            if w != 0:
                clean[(i, j)] = w
        object.__setattr__(self, "b", MappingProxyType(dict(sorted(clean.items()))))
        a = tuple(self.a) if self.a else (0,) * self.k
        if len(a) != self.k:
            raise ValueError(f"a must have {self.k} entries, got {len(a)}")
        object.__setattr__(self, "a", a)

    def total(self) -> Weight:
        return sum(self.b.values()) + sum(self.a) + self.x

    def b_at(self, i: int, j: int) -> Weight:
        return self.b.get(_pair(i, j), 0)


def f(k: int) -> Fraction:
    """Density threshold: ceil(k/2)^-2 for k <= 6, 1/(2k-1) for k >= 7."""
    if k < 1:
        raise ValueError(f"f(k) needs k >= 1, got {k}")
    if k <= 6:
        half = (k + 1) // 2
        return Fraction(1, half * half)
    return Fraction(1, 2 * k - 1)


def validate(g: ClusteredGraph) -> str | None:
    """None when g is a valid clustered graph, else the first violation."""
    for (i, j), w in g.b.items():
        if w < 0:
            return f"b[{i},{j}] = {w} < 0"
    for i, w in enumerate(g.a, start=1):
        if w < 0:
            return f"a[{i}] = {w} < 0"
    if g.x < 0:
        return f"x = {g.x} < 0"
    total = g.total()
    if g.is_rational:
        if total != 1:
            return f"sum = {total} != 1"
    elif abs(total - 1) > FLOAT_SUM_TOL:
        return f"sum = {total!r} differs from 1 by more than {FLOAT_SUM_TOL}"
    return None


def require_valid(g: ClusteredGraph) -> None:
    violation = validate(g)
    if violation is not None:
        raise InvalidGraphError(violation)


def density_form(k: int, b: Mapping[tuple[int, int], Weight],
                 a: Sequence[Weight], x: Weight) -> list[Weight]:
    """Raw per-color density polynomial, no simplex validation.

    Degree-2 homogeneous in the weights: scaling all weights by t scales
    every value by t^2.
    """
    b_row = [0] * k
    bsq_row = [0] * k
    for (i, j), w in b.items():
        b_row[i - 1] += w
        b_row[j - 1] += w
        bsq_row[i - 1] += w * w
        bsq_row[j - 1] += w * w
    return [a[i] * a[i] + bsq_row[i] + 2 * a[i] * b_row[i] + 2 * a[i] * x
            for i in range(k)]


def densities(g: ClusteredGraph) -> DerivedQuantities:
    """Densities d_i plus the b_i, c_i, c, b aggregates. Exact in rational mode."""
    require_valid(g)
    b_row = [0] * g.k
    bsq_row = [0] * g.k
    b_min_pos: Weight | None = None
    for (i, j), w in g.b.items():
        b_row[i - 1] += w
        b_row[j - 1] += w
        bsq_row[i - 1] += w * w
        bsq_row[j - 1] += w * w
        if w > 0 and (b_min_pos is None or w < b_min_pos):
            b_min_pos = w
    d = tuple(g.a[i] * g.a[i] + bsq_row[i] + 2 * g.a[i] * b_row[i] + 2 * g.a[i] * g.x
              for i in range(g.k))
    c_row = tuple(g.a[i] + b_row[i] + g.x for i in range(g.k))
    return DerivedQuantities(d, tuple(b_row), c_row, min(c_row), b_min_pos)


def min_density(g: ClusteredGraph) -> Weight:
    return min(densities(g).d)


# ---------------------------------------------------------------------------
# Extremal constructions


FAMILIES = ("pairs", "star", "mixed")

_PAIRS_LAYOUT = {
    1: (),
    2: ((1, 2),),
    3: ((1, 2), (1, 3)),
    4: ((1, 2), (3, 4)),
    5: ((1, 2), (3, 4), (1, 5)),
    6: ((1, 2), (3, 4), (5, 6)),
}


def families_for(k: int) -> tuple[str, ...]:
    """Construction families applicable at k."""
    fams = []
    if 1 <= k <= PAIRS_MAX_K:
        fams.append("pairs")
    if k == 1 or k == 5 or k >= 7:
        fams.append("star")
    if k in MIXED_KS:
        fams.append("mixed")
    return tuple(fams)


def mixed_t_max(k: int) -> Fraction:
    return Fraction(1, (k + 1) // 2)


def extremal(k: int, family: str = "pairs", t: Fraction | None = None) -> ClusteredGraph:
    """Extremal construction with min_i d_i = f(k) exactly.

    pairs: matched-pair weights, k in 1..6 (k = 1 degenerates to a_1 = 1).
    star:  a_i = 1/(2k-1) for all i, x = (k-1)/(2k-1); k = 1, 5 or >= 7.
    mixed: k in {3, 5}; the b[1,k] weight of the pairs construction splits
           into a_k = t and b[1,k] = 1/ceil(k/2) - t, t in [0, 1/ceil(k/2)].
    """
    if family not in FAMILIES:
        raise ConstructionError(f"unknown family {family!r}, expected one of {FAMILIES}")
    if family not in families_for(k):
        raise ConstructionError(f"family {family!r} is not defined for k = {k}")

    if family == "star":
        q = 2 * k - 1
        return ClusteredGraph(k, {}, (Fraction(1, q),) * k, Fraction(k - 1, q))

    if k == 1:
        return ClusteredGraph(1, {}, (Fraction(1),), Fraction(0))

    half = Fraction(1, (k + 1) // 2)
    pairs = {p: half for p in _PAIRS_LAYOUT[k]}

    if family == "pairs":
        return ClusteredGraph(k, pairs, (Fraction(0),) * k, Fraction(0))

    cap = mixed_t_max(k)
    if t is None:
        t = cap / 2
    t = Fraction(t)
    if not (0 <= t <= cap):
        raise ConstructionError(f"mixed parameter t = {t} outside [0, {cap}]")
    pairs[(1, k)] = cap - t
    a = [Fraction(0)] * k
    a[k - 1] = t
    return ClusteredGraph(k, pairs, tuple(a), Fraction(0))


# ---------------------------------------------------------------------------
# Perturbation calculus


def check_delta(g: ClusteredGraph, delta: WeightDelta) -> None:
    if delta.k != g.k:
        raise DeltaError(f"delta is for k = {delta.k}, graph has k = {g.k}")
    total = delta.total()
    if (total != 0) if all(_is_exact(w) for w in (*delta.b.values(), *delta.a, delta.x)) \
            else (abs(total) > FLOAT_SUM_TOL):
        raise DeltaError(f"delta coordinates sum to {total}, not 0")
    for (i, j), w in delta.b.items():
        if w < 0 and g.b_at(i, j) == 0:
            raise DeltaError(f"delta removes weight from zero coordinate b[{i},{j}]")
    for i, w in enumerate(delta.a, start=1):
        if w < 0 and g.a_at(i) == 0:
            raise DeltaError(f"delta removes weight from zero coordinate a[{i}]")
    if delta.x < 0 and g.x == 0:
        raise DeltaError("delta removes weight from zero coordinate x")


def increment(g: ClusteredGraph, delta: WeightDelta) -> list[Weight]:
    """Directional derivative of each d_i along delta.

    The linear-in-eps coefficient of d_i(g + eps*delta) - d_i(g):
        2 c_i da_i  +  sum_j 2 (b_ij + a_i) db_ij  +  2 a_i dx.
    Exact when graph and delta are rational.
    """
    require_valid(g)
    check_delta(g, delta)
    der = densities(g)
    out: list[Weight] = []
    for i in range(1, g.k + 1):
        acc = 2 * der.c_row[i - 1] * delta.a[i - 1] + 2 * g.a_at(i) * delta.x
        for j in range(1, g.k + 1):
            if j != i:
                db = delta.b_at(i, j)
                if db != 0:
                    acc += 2 * (g.b_at(i, j) + g.a_at(i)) * db
        out.append(acc)
    return out


def apply_delta(g: ClusteredGraph, delta: WeightDelta, eps: Weight) -> ClusteredGraph:
    """g + eps*delta; raises InvalidGraphError if eps pushes a weight negative."""
    check_delta(g, delta)
    pairs = set(g.b) | set(delta.b)
    b = {p: g.b.get(p, 0) + eps * delta.b.get(p, 0) for p in pairs}
    a = tuple(g.a[i] + eps * delta.a[i] for i in range(g.k))
    out = ClusteredGraph(g.k, b, a, g.x + eps * delta.x)
    require_valid(out)
    return out


def proportional_redistribution(g: ClusteredGraph,
                                colors: Sequence[int] | None = None) -> WeightDelta:
    """Remove a unit from each a_i (i in colors), add back proportionally.

    Every coordinate of weight w receives m*w where m = len(colors); the
    increments come out as 2*(m*d_i - c_i) for i in colors and 2*m*d_i
    otherwise. Colors default to all i with a_i > 0.
    """
    if colors is None:
        colors = [i for i in range(1, g.k + 1) if g.a_at(i) > 0]
    colors = sorted(set(colors))
    if not colors:
        raise DeltaError("proportional redistribution needs at least one color with a_i > 0")
    for i in colors:
        if g.a_at(i) <= 0:
            raise DeltaError(f"a[{i}] = 0: cannot remove weight from it")
    m = len(colors)
    b = {p: m * w for p, w in g.b.items()}
    a = [m * g.a[i] for i in range(g.k)]
    for i in colors:
        a[i - 1] -= 1
    return WeightDelta(g.k, b, tuple(a), m * g.x)


def claim7_shift(g: ClusteredGraph, i: int, j: int) -> WeightDelta:
    """Shift b_ij mass onto a_i and a_j in the paper-calculus proportions.

    Removes a_i + a_j + 2 b_ij from b_ij, adds a_i + b_ij to a_i and
    a_j + b_ij to a_j; requires b_ij > 0.
    """
    i, j = _pair(i, j)
    bij = g.b_at(i, j)
    if bij <= 0:
        raise DeltaError(f"claim7 shift needs b[{i},{j}] > 0")
    ai, aj = g.a_at(i), g.a_at(j)
    a = [0] * g.k
    a[i - 1] = ai + bij
    a[j - 1] = aj + bij
    return WeightDelta(g.k, {(i, j): -(ai + aj + 2 * bij)}, tuple(a), 0)


# ---------------------------------------------------------------------------
# Structural reductions


def contract(g: ClusteredGraph, i: int, j: int) -> ClusteredGraph:
    """Merge out colors i and j, as in the (k) -> (k-2) reduction.

    Removes mass r = a_i + a_j + b_ij, folds b_pi and b_pj into a_p for the
    surviving colors, rescales by 1/(1-r). Surviving colors keep their
    relative order and are relabeled 1..k-2.
    """
    require_valid(g)
    if g.k < 3:
        raise ReductionError(f"contract needs k >= 3, got k = {g.k}")
    i, j = _pair(i, j)
    r = g.a_at(i) + g.a_at(j) + g.b_at(i, j)
    if r >= 1:
        raise ReductionError(f"contracted mass {r} exceeds simplex (r = 1 is degenerate)")
    scale = (Fraction(1) if g.is_rational else 1.0) / (1 - r)
    survivors = [p for p in range(1, g.k + 1) if p not in (i, j)]
    relabel = {old: new for new, old in enumerate(survivors, start=1)}
    b = {}
    for (p, q), w in g.b.items():
        if p in relabel and q in relabel:
            b[(relabel[p], relabel[q])] = w * scale
    a = tuple((g.a_at(p) + g.b_at(p, i) + g.b_at(p, j)) * scale for p in survivors)
    out = ClusteredGraph(g.k - 2, b, a, g.x * scale)
    require_valid(out)
    return out


def drop_color(g: ClusteredGraph, i: int) -> ClusteredGraph:
    """Delete the a_i cluster and strip color i, as in the k -> k-1 reduction.

    Each b_ij becomes a_j in the reduced graph; weights rescale by
    1/(1-a_i). Every surviving color's density is >= its density in g.
    """
    require_valid(g)
    if g.k < 2:
        raise ReductionError(f"drop_color needs k >= 2, got k = {g.k}")
    if not (1 <= i <= g.k):
        raise ValueError(f"color {i} outside [1, {g.k}]")
    ai = g.a_at(i)
    if ai >= 1:
        raise ReductionError(f"a[{i}] = {ai} leaves no mass to rescale")
    scale = (Fraction(1) if g.is_rational else 1.0) / (1 - ai)
    survivors = [p for p in range(1, g.k + 1) if p != i]
    relabel = {old: new for new, old in enumerate(survivors, start=1)}
    b = {}
    a = [g.a_at(p) for p in survivors]
    for (p, q), w in g.b.items():
        if p == i:
            a[relabel[q] - 1] += w
        elif q == i:
            a[relabel[p] - 1] += w
        else:
            b[(relabel[p], relabel[q])] = w * scale
    out = ClusteredGraph(g.k - 1, b, tuple(w * scale for w in a), g.x * scale)
    require_valid(out)
    return out


def permute_colors(g: ClusteredGraph, perm: Sequence[int]) -> ClusteredGraph:
    """Relabel colors by perm (perm[i-1] is the new name of color i)."""
    if sorted(perm) != list(range(1, g.k + 1)):
        raise ValueError(f"perm must be a permutation of 1..{g.k}")
    b = {_pair(perm[i - 1], perm[j - 1]): w for (i, j), w in g.b.items()}
    a = [0] * g.k
    for i in range(1, g.k + 1):
        a[perm[i - 1] - 1] = g.a_at(i)
    return ClusteredGraph(g.k, b, tuple(a), g.x)


def renormalized(g: ClusteredGraph) -> ClusteredGraph:
    """Scale weights to sum exactly to 1 (never applied implicitly)."""
    total = g.total()
    if total <= 0:
        raise InvalidGraphError(f"cannot renormalize: sum = {total}")
    scale = (Fraction(1) if g.is_rational else 1.0) / total
    return ClusteredGraph(
        g.k,
        {p: w * scale for p, w in g.b.items()},
        tuple(w * scale for w in g.a),
        g.x * scale,
    )


# ---------------------------------------------------------------------------
# JSON wire format


def _weight_to_json(w: Weight):
    if isinstance(w, Fraction):
        return f"{w.numerator}/{w.denominator}"
    if isinstance(w, int):
        return w
    return float(w)


def parse_weight(v) -> Weight:
    """Accepts a decimal number or an exact 'p/q' string."""
    if isinstance(v, str):
        return Fraction(v)
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ValueError(f"weight must be a number or 'p/q' string, got {v!r}")
    if isinstance(v, int):
        return Fraction(v)
    return v


def to_json_dict(g: ClusteredGraph) -> dict:
    return {
        "k": g.k,
        "x": _weight_to_json(g.x),
        "a": [_weight_to_json(w) for w in g.a],
        "b": [{"i": i, "j": j, "w": _weight_to_json(w)} for (i, j), w in g.b.items()],
    }


def from_json_dict(data: dict) -> ClusteredGraph:
    try:
        k = data["k"]
        if not isinstance(k, int) or k < 1:
            raise ValueError(f"k must be a positive integer, got {k!r}")
        a = data.get("a", [])
        if len(a) != k:
            raise ValueError(f"a must have exactly k = {k} entries, got {len(a)}")
        b = {}
        for entry in data.get("b", []):
            i, j = entry["i"], entry["j"]
            if not (isinstance(i, int) and isinstance(j, int) and 1 <= i < j <= k):
                raise ValueError(f"b entry needs 1 <= i < j <= {k}, got i={i!r}, j={j!r}")
            if (i, j) in b:
                raise ValueError(f"duplicate b entry for ({i}, {j})")
            b[(i, j)] = parse_weight(entry["w"])
        return ClusteredGraph(k, b, tuple(parse_weight(v) for v in a),
                              parse_weight(data.get("x", 0)))
    except KeyError as exc:
        raise ValueError(f"missing field {exc.args[0]!r} in graph JSON") from None


def save_graph(g: ClusteredGraph, path) -> None:
    with open(path, "w") as fh:
        json.dump(to_json_dict(g), fh, indent=1)
        fh.write("\n")


def load_graph(path) -> ClusteredGraph:
    with open(path) as fh:
        return from_json_dict(json.load(fh))


# ---------------------------------------------------------------------------
# Flat coordinate layout (shared by the optimizer and the numeric kernels)


class Layout:
    """Fixed flat ordering: b pairs lexicographic, then a_1..a_k, then x."""

    def __init__(self, k: int):
        self.k = k
        self.pairs = [(i, j) for i in range(1, k + 1) for j in range(i + 1, k + 1)]
        self.m = len(self.pairs)
        self.dim = self.m + k + 1
        self.pair_index = {p: t for t, p in enumerate(self.pairs)}

    def a_index(self, i: int) -> int:
        return self.m + i - 1

    @property
    def x_index(self) -> int:
        return self.dim - 1

    def to_vector(self, g: ClusteredGraph) -> list[float]:
        v = [0.0] * self.dim
        for p, w in g.b.items():
            v[self.pair_index[p]] = float(w)
        for i in range(self.k):
            v[self.m + i] = float(g.a[i])
        v[-1] = float(g.x)
        return v

    def to_graph(self, v: Sequence[float]) -> ClusteredGraph:
        b = {p: v[t] for t, p in enumerate(self.pairs) if v[t] != 0}
        return ClusteredGraph(self.k, b, tuple(v[self.m:self.m + self.k]), v[-1])

    def coordinate_name(self, t: int) -> str:
        if t < self.m:
            i, j = self.pairs[t]
            return f"b{i}{j}"
        if t < self.m + self.k:
            return f"a{t - self.m + 1}"
        return "x"
