"""Muckenhoupt weights and their cube-family constants.

A weight is a strictly positive grid function together with a family
descriptor.  The A_p constant

    [w]_p = sup_Q (avg_Q w) (avg_Q w^(-1/(p-1)))^(p-1)

is estimated over dyadic cube families (plus half-shifted translates, the
standard three-lattice surrogate for the supremum over all cubes).  Cube
averages are grid quadrature restricted to the cube; any weight sample
coinciding with a singular point is evaluated at distance h/2 instead.

Power weights |x - x0|^alpha belong to A_p exactly for -n < alpha < n(p-1);
distance weights d(x, M)^alpha for a k-dimensional set M require
-(n-k) < alpha < (n-k)(p-1).  The constructors record that membership flag
so downstream checks can compare it with the estimator's divergence
behaviour.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .grid import Grid

__all__ = [
    "Weight",
    "CubeFamily",
    "CubeEstimate",
    "power_weight",
    "distance_weight",
    "tabulated_weight",
    "dual_weight",
    "ap_constant",
    "apq_constant",
    "sawyer_wheeden_constant",
    "weighted_measure",
]


@dataclass(frozen=True, eq=False)
class Weight:
    """Strictly positive grid function with family metadata."""

    grid: Grid
    values: np.ndarray
    family: dict
    p: float
    in_class: bool | None = None

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=np.float64)
        if v.shape != self.grid.spec.shape:
            raise ValueError("weight shape does not match grid")
        if not np.all(np.isfinite(v)) or np.any(v <= 0.0):
            raise ValueError("weight values must be finite and strictly positive")
        if not (self.p > 1):
            raise ValueError(f"weight exponent p must exceed 1, got {self.p}")
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    def describe(self) -> dict:
        return {"family": self.family, "p": self.p, "in_class": self.in_class}


def _nudged(dist: np.ndarray, h: float) -> np.ndarray:
    out = dist.copy()
    out[out == 0.0] = h / 2.0
    return out


def power_weight(grid: Grid, x0, alpha: float, p: float) -> Weight:
    """w(x) = |x - x0|^alpha; in A_p exactly when -n < alpha < n(p-1)."""
    x0 = tuple(float(c) for c in np.atleast_1d(x0))
    if len(x0) != grid.spec.n:
        raise ValueError(f"x0 must have {grid.spec.n} entries")
    coords = grid.coords()
    dist = np.sqrt(sum((x - c) ** 2 for x, c in zip(coords, x0)))
    vals = _nudged(dist, grid.h) ** alpha
    n = grid.spec.n
    member = -n < alpha < n * (p - 1.0)
    return Weight(
        grid,
        vals,
        family={"kind": "power", "x0": list(x0), "alpha": alpha},
        p=p,
        in_class=member,
    )


def distance_weight(
    grid: Grid, points, alpha: float, p: float, manifold_dim: int = 0
) -> Weight:
    """w(x) = d(x, M)^alpha for a point-sampled set M of declared dimension k."""
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
    if pts.size == 0:
        raise ValueError("point set M must be nonempty")
    if pts.shape[1] != grid.spec.n:
        raise ValueError(f"points must have {grid.spec.n} coordinates")
    k = int(manifold_dim)
    if not (0 <= k < grid.spec.n):
        raise ValueError(f"manifold dimension must be in [0, {grid.spec.n})")
    coords = grid.coords()
    stacked = np.stack([c.ravel() for c in coords], axis=1)  # (P, n)
    # chunked min-distance scan keeps memory at chunk * len(M)
    dist = np.empty(stacked.shape[0])
    step = max(1, 2**22 // max(1, pts.shape[0]))
    for start in range(0, stacked.shape[0], step):
        stop = min(start + step, stacked.shape[0])
        d = stacked[start:stop, None, :] - pts[None, :, :]
        dist[start:stop] = np.sqrt(np.min(np.sum(d * d, axis=2), axis=1))
    vals = _nudged(dist.reshape(grid.spec.shape), grid.h) ** alpha
    codim = grid.spec.n - k
    member = -codim < alpha < codim * (p - 1.0)
    return Weight(
        grid,
        vals,
        family={"kind": "distance", "alpha": alpha, "manifold_dim": k},
        p=p,
        in_class=member,
    )


def tabulated_weight(grid: Grid, values, p: float) -> Weight:
    return Weight(grid, values, family={"kind": "tabulated"}, p=p, in_class=None)


def dual_weight(w: Weight, p: float | None = None) -> Weight:
    """w* = w^(-1/(p-1)), analyzed against the dual exponent p' = p/(p-1)."""
    p = w.p if p is None else float(p)
    if not (p > 1):
        raise ValueError(f"p must exceed 1, got {p}")
    vals = w.values ** (-1.0 / (p - 1.0))
    return Weight(
        w.grid,
        vals,
        family={"kind": "tabulated", "dual_of": w.family},
        p=p / (p - 1.0),
        in_class=w.in_class,
    )


@dataclass(frozen=True)
class CubeFamily:
    """Dyadic subcubes of a bounding box over a level range, plus the
    half-shifted translates (shifted cubes that exit the grid are dropped)."""

    lo: tuple[float, ...]
    size: float
    level_min: int = 0
    level_max: int = 4
    shifted: bool = True

    def __post_init__(self) -> None:
        if self.size <= 0:
            raise ValueError("bounding box edge must be positive")
        if not (0 <= self.level_min <= self.level_max):
            raise ValueError("need 0 <= level_min <= level_max")
        object.__setattr__(self, "lo", tuple(float(c) for c in self.lo))

    def with_levels(self, level_max: int) -> "CubeFamily":
        return CubeFamily(self.lo, self.size, self.level_min, level_max, self.shifted)

    def cubes(self, grid: Grid):
        """All (corner, edge) cubes of the family lying inside the grid box."""
        n = len(self.lo)
        if n != grid.spec.n:
            raise ValueError("cube family dimension does not match grid")
        gl = grid.spec.origin
        gh = tuple(o + grid.spec.L for o in gl)
        tol = 1e-9 * grid.spec.L
        for d in range(n):
            if self.lo[d] < gl[d] - tol or self.lo[d] + self.size > gh[d] + tol:
                raise ValueError("bounding box must lie inside the grid box")
        out = []
        for lev in range(self.level_min, self.level_max + 1):
            m = 2**lev
            edge = self.size / m
            for idx in np.ndindex(*(m,) * n):
                corner = tuple(self.lo[d] + idx[d] * edge for d in range(n))
                out.append((corner, edge))
            if self.shifted:
                for idx in np.ndindex(*(m,) * n):
                    corner = tuple(
                        self.lo[d] + (idx[d] + 0.5) * edge for d in range(n)
                    )
                    if all(
                        corner[d] >= gl[d] - tol
                        and corner[d] + edge <= gh[d] + tol
                        for d in range(n)
                    ):
                        out.append((corner, edge))
        return out

    def describe(self) -> dict:
        return {
            "lo": list(self.lo),
            "size": self.size,
            "levels": [self.level_min, self.level_max],
            "shifted": self.shifted,
        }


@dataclass(frozen=True)
class CubeEstimate:
    """Supremum estimate over a cube family, with provenance."""

    value: float
    argmax_cube: tuple | None
    family: dict
    params: dict = field(default_factory=dict)

    def to_record(self) -> dict:
        cube = None
        if self.argmax_cube is not None:
            cube = {"corner": list(self.argmax_cube[0]), "edge": self.argmax_cube[1]}
        return {
            "constant": self.value,
            "argmax_cube": cube,
            "cube_family": self.family,
            **self.params,
        }


def _prefix_sum(values: np.ndarray) -> np.ndarray:
    p = values
    for axis in range(values.ndim):
        p = np.cumsum(p, axis=axis)
    return np.pad(p, [(1, 0)] * values.ndim)


def _block_sum(prefix: np.ndarray, i0, i1) -> float:
    """Sum over the index block [i0, i1) from an inclusive prefix array."""
    n = prefix.ndim
    total = 0.0
    for corner in np.ndindex(*(2,) * n):
        idx = tuple(i1[d] if corner[d] else i0[d] for d in range(n))
        total += (-1.0) ** (n - sum(corner)) * prefix[idx]
    return total


def _cube_indices(grid: Grid, corner, edge):
    """Half-open index ranges of grid points inside [corner, corner+edge)."""
    n = grid.spec.n
    h = grid.h
    tol = 1e-9 * h
    i0, i1 = [], []
    for d in range(n):
        o = grid.spec.origin[d]
        lo = int(np.ceil((corner[d] - o) / h - tol))
        hi = int(np.ceil((corner[d] + edge - o) / h - tol))
        lo = max(lo, 0)
        hi = min(hi, grid.spec.N)
        if hi <= lo:
            return None
        i0.append(lo)
        i1.append(hi)
    return i0, i1


def _family_sup(grid: Grid, arrays, term, cubes: CubeFamily):
    """Maximize term(counts, sums...) over the family; arrays are summed per cube."""
    prefixes = [_prefix_sum(a) for a in arrays]
    best = -np.inf
    best_cube = None
    cube_list = cubes.cubes(grid)
    if not cube_list:
        raise ValueError("cube family is empty")
    found = False
    for corner, edge in cube_list:
        rng = _cube_indices(grid, corner, edge)
        if rng is None:
            continue
        i0, i1 = rng
        count = 1
        for d in range(grid.spec.n):
            count *= i1[d] - i0[d]
        sums = [_block_sum(p, i0, i1) for p in prefixes]
        val = term(count, sums, edge)
        found = True
        if val > best:
            best = val
            best_cube = (corner, edge)
    if not found:
        raise ValueError("no cube in the family contains a grid point")
    return best, best_cube


def ap_constant(w: Weight, p: float, cubes: CubeFamily) -> CubeEstimate:
    """Estimate [w]_p = sup_Q (avg_Q w)(avg_Q w^(-1/(p-1)))^(p-1)."""
    if not (p > 1):
        raise ValueError(f"p must exceed 1, got {p}")
    dual_vals = w.values ** (-1.0 / (p - 1.0))

    def term(count, sums, edge):
        return (sums[0] / count) * (sums[1] / count) ** (p - 1.0)

    val, cube = _family_sup(w.grid, [w.values, dual_vals], term, cubes)
    return CubeEstimate(
        value=float(val),
        argmax_cube=cube,
        family=cubes.describe(),
        params={"family": w.family, "p": p},
    )


def apq_constant(w: Weight, p: float, q: float, cubes: CubeFamily) -> CubeEstimate:
    """Estimate [w]_{p,q} = sup_Q (avg_Q w)(avg_Q w^(-p'/q))^(q/p')."""
    if not (1 < p < q):
        raise ValueError(f"need 1 < p < q, got p={p}, q={q}")
    pprime = p / (p - 1.0)
    expo = -pprime / q
    aux = w.values**expo

    def term(count, sums, edge):
        return (sums[0] / count) * (sums[1] / count) ** (q / pprime)

    val, cube = _family_sup(w.grid, [w.values, aux], term, cubes)
    return CubeEstimate(
        value=float(val),
        argmax_cube=cube,
        family=cubes.describe(),
        params={"family": w.family, "p": p, "q": q},
    )


def sawyer_wheeden_constant(
    v: Weight, w: Weight, s: float, p: float, q: float, cubes: CubeFamily
) -> dict:
    """Two-weight Riesz-potential condition
    sup_Q |Q|^(s/n-1) (int_Q v)^(1/q) (int_Q w*)^(1/p'), w* = w^(-1/(p-1)).

    When v and w share values, also reports the equivalent single-weight
    quantity sup_Q |Q|^(s/n) w(Q)^(1/q-1/p).
    """
    grid = v.grid
    n = grid.spec.n
    if not (0.0 < s < n):
        raise ValueError(f"need 0 < s < n, got s={s}")
    if not (1 < p < q):
        raise ValueError(f"need 1 < p < q, got p={p}, q={q}")
    if w.grid != grid:
        raise ValueError("weights live on different grids")
    pprime = p / (p - 1.0)
    dual_vals = w.values ** (-1.0 / (p - 1.0))
    hn = grid.h**n

    def term(count, sums, edge):
        volume = edge**n
        return (
            volume ** (s / n - 1.0)
            * (hn * sums[0]) ** (1.0 / q)
            * (hn * sums[1]) ** (1.0 / pprime)
        )

    val, cube = _family_sup(grid, [v.values, dual_vals], term, cubes)
    record = {
        "constant": float(val),
        "argmax_cube": {"corner": list(cube[0]), "edge": cube[1]},
        "cube_family": cubes.describe(),
        "s": s,
        "p": p,
        "q": q,
    }
    if v.values.shape == w.values.shape and np.array_equal(v.values, w.values):

        def single(count, sums, edge):
            volume = edge**n
            return volume ** (s / n) * (hn * sums[0]) ** (1.0 / q - 1.0 / p)

        sval, scube = _family_sup(grid, [w.values], single, cubes)
        record["single_weight_constant"] = float(sval)
        record["single_weight_argmax"] = {
            "corner": list(scube[0]),
            "edge": scube[1],
        }
    return record


def weighted_measure(w: Weight, region) -> float:
    """w(U) = grid quadrature of w over U (a (corner, edge) cube or a mask)."""
    grid = w.grid
    hn = grid.h**grid.spec.n
    if isinstance(region, np.ndarray) and region.dtype == bool:
        if region.shape != grid.spec.shape:
            raise ValueError("mask shape does not match grid")
        return float(hn * np.sum(w.values[region]))
    corner, edge = region
    rng = _cube_indices(grid, tuple(float(c) for c in np.atleast_1d(corner)), edge)
    if rng is None:
        return 0.0
    i0, i1 = rng
    sl = tuple(slice(a, b) for a, b in zip(i0, i1))
    return float(hn * np.sum(w.values[sl]))
