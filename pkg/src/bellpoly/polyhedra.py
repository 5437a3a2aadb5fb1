"""Exact polytope kernel: hull problem, affine dimension, LP membership.

``facets_from_vertices`` converts a vertex description into the minimal
facet description using the double description method run on the polar
cone: each input point contributes the homogeneous constraint
(v, 1) . y <= 0, and the extreme rays of that constraint cone are exactly
the facets a . x <= bound of the original hull.  All arithmetic is integer
(numpy int64 with overflow guards, falling back to arbitrary precision),
so the output inequalities are exact.

``membership`` decides hull membership by exact phase-1 simplex with
Bland's rule, growing the active point set on demand.  Either way it
returns a certificate that re-verifies by direct arithmetic: convex
weights reproducing the query point, or a separating inequality valid on
every hull point and violated by the query.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence, Union

import numpy as np

from .core import LinearEquation, LinearInequality

logger = logging.getLogger(__name__)

_BLAND_LIMIT = 10 ** 7  # simplex pivot guard; Bland's rule terminates long before


class _DDOverflow(Exception):
    """int64 fast path would overflow; retry with exact object arithmetic."""


@dataclass(frozen=True)
class VRep:
    """Bounded polytope given as the convex hull of finitely many points."""

    dimension: int
    points: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        points = tuple(tuple(Fraction(c) for c in p) for p in self.points)
        if any(len(p) != self.dimension for p in points):
            raise ValueError("all points must have length equal to dimension")
        object.__setattr__(self, "points", points)

    @classmethod
    def from_points(cls, points) -> "VRep":
        """Build from raw vectors or reduced points (anything with .coords)."""
        rows = tuple(
            tuple(p.coords) if hasattr(p, "coords") else tuple(p) for p in points
        )
        if not rows:
            raise ValueError("need at least one point")
        return cls(len(rows[0]), rows)


@dataclass(frozen=True)
class HRep:
    """Facet description: inequalities plus equations for flat hulls."""

    dimension: int
    inequalities: tuple[LinearInequality, ...]
    equations: tuple[LinearEquation, ...] = ()


@dataclass(frozen=True)
class Inside:
    """Convex weights over hull point indices reproducing the query exactly."""

    weights: tuple[tuple[int, Fraction], ...]

    @property
    def inside(self) -> bool:
        return True


@dataclass(frozen=True)
class Outside:
    """Separating inequality: satisfied by every hull point, violated by the query."""

    separator: LinearInequality

    @property
    def inside(self) -> bool:
        return False


MembershipResult = Union[Inside, Outside]


@dataclass(frozen=True)
class ContainmentReport:
    contained: bool
    witnesses: tuple[MembershipResult, ...]


# --------------------------------------------------------------------------
# integer scaling and exact rank
# --------------------------------------------------------------------------

def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def _scaled_int_row(vector: Sequence[Fraction]) -> tuple[int, ...]:
    """(v, 1) scaled by the lcm of denominators into a primitive integer row."""
    fracs = [Fraction(c) for c in vector]
    den = 1
    for c in fracs:
        den = _lcm(den, c.denominator)
    row = [int(c * den) for c in fracs] + [den]
    g = 0
    for x in row:
        g = gcd(g, abs(x))
    return tuple(x // g for x in row)


def _fraction_rank(rows, limit: Optional[int] = None) -> int:
    """Exact rank by Gaussian elimination over the rationals."""
    work = [[Fraction(x) for x in row] for row in rows]
    if not work:
        return 0
    cols = len(work[0])
    rank = 0
    for c in range(cols):
        piv = next((r for r in range(rank, len(work)) if work[r][c] != 0), None)
        if piv is None:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        pivot = work[rank][c]
        for r in range(rank + 1, len(work)):
            if work[r][c] != 0:
                factor = work[r][c] / pivot
                work[r] = [x - factor * y for x, y in zip(work[r], work[rank])]
        rank += 1
        if rank == len(work) or (limit is not None and rank >= limit):
            break
    return rank


def _bareiss_rank01(mat: np.ndarray, limit: Optional[int] = None) -> int:
    """Rank of a 0/1 int64 matrix (<= 20 columns) by fraction-free elimination.

    Minors of 0/1 matrices at this size stay below 2^27, so all intermediate
    products fit comfortably in int64.
    """
    m = mat.astype(np.int64, copy=True)
    rows, cols = m.shape
    rank = 0
    prev = 1
    for c in range(cols):
        nz = np.flatnonzero(m[rank:, c])
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            m[[rank, piv]] = m[[piv, rank]]
        pivot = m[rank, c]
        if rank + 1 < rows:
            block = m[rank + 1 :]
            col = block[:, c].copy().reshape(-1, 1)
            block *= pivot
            block -= col * m[rank].reshape(1, -1)
            if prev != 1:
                block //= prev
        prev = pivot
        rank += 1
        if rank == rows or (limit is not None and rank >= limit):
            break
    return rank


def _exact_rank(rows, is01: bool, limit: Optional[int] = None) -> int:
    if is01 and len(rows) and len(rows[0]) <= 20:
        return _bareiss_rank01(np.asarray(rows, dtype=np.int64), limit)
    if isinstance(rows, np.ndarray):
        rows = rows.tolist()
    return _fraction_rank(rows, limit)


def affine_dimension(v: VRep) -> int:
    """Rank of the difference lattice of the point set."""
    if not v.points:
        raise ValueError("need at least one point")
    base = v.points[0]
    diffs = [tuple(x - y for x, y in zip(p, base)) for p in v.points[1:]]
    if not diffs:
        return 0
    return _fraction_rank(diffs)


# --------------------------------------------------------------------------
# double description on the polar cone
# --------------------------------------------------------------------------

def _gcd_normalize_int64(mat: np.ndarray) -> np.ndarray:
    g = np.gcd.reduce(np.abs(mat), axis=1)
    g[g == 0] = 1
    return mat // g.reshape(-1, 1)


def _gcd_normalize_object(rows):
    out = []
    for row in rows:
        g = 0
        for x in row:
            g = gcd(g, abs(int(x)))
        g = g or 1
        out.append([int(x) // g for x in row])
    return out


def _initial_basis(rows, is01) -> list[int]:
    basis: list[int] = []
    target = len(rows[0])
    for i in range(len(rows)):
        if _exact_rank([rows[k] for k in basis] + [rows[i]], is01) == len(basis) + 1:
            basis.append(i)
            if len(basis) == target:
                return basis
    raise ValueError("points are not full-dimensional after affine reduction")


def _invert_fraction_matrix(rows):
    n = len(rows)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(rows)]
    for c in range(n):
        piv = next(r for r in range(c, n) if aug[r][c] != 0)
        aug[c], aug[piv] = aug[piv], aug[c]
        pivot = aug[c][c]
        aug[c] = [x / pivot for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c] != 0:
                factor = aug[r][c]
                aug[r] = [x - factor * y for x, y in zip(aug[r], aug[c])]
    return [row[n:] for row in aug]


def _pack_bool(inc: np.ndarray) -> np.ndarray:
    """Pack a bool matrix into uint64 words for fast popcounts."""
    n = inc.shape[1]
    pad = (-n) % 64
    if pad:
        inc = np.concatenate([inc, np.zeros((inc.shape[0], pad), dtype=bool)], axis=1)
    bytes_ = np.packbits(inc, axis=1, bitorder="little")
    return bytes_.reshape(inc.shape[0], -1, 8).view(np.uint64).reshape(inc.shape[0], -1)


def _dd_cone(rows: list[tuple[int, ...]], exact: bool):
    """Extreme rays of {y : row . y <= 0 for all rows}; rows must span R^D.

    Returns gcd-normalized integer rays.  Processes constraints in the given
    order after seeding with the first maximal independent subset.
    """
    D = len(rows[0])
    n = len(rows)
    is01 = all(x in (0, 1) for row in rows for x in row) and D <= 20
    dtype = object if exact else np.int64
    A = np.array(rows, dtype=dtype)

    basis_idx = _initial_basis(rows, is01)
    inverse = _invert_fraction_matrix([rows[i] for i in basis_idx])
    rays = []
    for j in range(D):
        col = [inverse[k][j] for k in range(D)]
        den = 1
        for x in col:
            den = _lcm(den, x.denominator)
        ray = [-(x * den).numerator for x in col]
        g = 0
        for x in ray:
            g = gcd(g, abs(x))
        rays.append([x // g for x in ray])
    R = np.array(rays, dtype=dtype)
    if not exact and (np.abs(A).max() > 2 ** 20 or np.abs(R).max() > 2 ** 20):
        raise _DDOverflow

    Inc = np.zeros((D, n), dtype=bool)
    for k, i in enumerate(basis_idx):
        Inc[:, i] = True
        Inc[k, i] = False

    in_basis = set(basis_idx)
    step = 0
    for i in (i for i in range(n) if i not in in_basis):
        step += 1
        if logger.isEnabledFor(logging.DEBUG):
            logger.debug("dd insert %d/%d rays=%d", step, n - D, len(R))
        a = A[i]
        if not exact:
            ray_max = int(np.abs(R).max()) or 1
            row_max = int(np.abs(a).max()) or 1
            if 2 * D * row_max * ray_max * ray_max >= 2 ** 62:
                raise _DDOverflow
        s = R @ a
        pos = np.flatnonzero(s > 0)
        if pos.size == 0:
            Inc[:, i] = s == 0
            continue
        neg = np.flatnonzero(s < 0)
        zer = np.flatnonzero(s == 0)

        packed = _pack_bool(Inc)
        packed_neg = packed[neg]
        col_counts = Inc.sum(axis=0).astype(np.int64)
        rays_at: dict[int, np.ndarray] = {}
        pair_p, pair_n = [], []
        for start in range(0, pos.size, 64):
            chunk = pos[start : start + 64]
            counts = np.bitwise_count(
                packed[chunk][:, None, :] & packed_neg[None, :, :]
            ).sum(axis=2, dtype=np.int64)
            ci, ni = np.nonzero(counts >= D - 2)
            pair_p.append(chunk[ci])
            pair_n.append(neg[ni])
        new_rays, new_inc = [], []
        if pair_p:
            pair_p = np.concatenate(pair_p)
            pair_n = np.concatenate(pair_n)
        if len(pair_p) and D == 2:
            # a pointed plane cone has exactly two rays: always adjacent
            adjacency = np.full(len(pair_p), R.shape[0] == 2)
        elif len(pair_p) and len(R) >= 6000 and D >= 5:
            # combinatorial adjacency, transposed: a pair is adjacent iff no
            # third ray is tight on its whole common zero set.  Intersect the
            # rays-tight-at bitsets over that zero set, rarest constraints
            # first: the live set usually collapses to {p, n} in a few rows,
            # so the first three rows are done vectorized for all pairs.
            n_pairs = len(pair_p)
            rays_tight_at = _pack_bool(np.ascontiguousarray(Inc.T))
            adjacency = np.zeros(n_pairs, dtype=bool)
            rarest_first = np.argsort(col_counts, kind="stable")
            depth = min(8, D - 2)
            for c0 in range(0, n_pairs, 8192):
                block = slice(c0, min(c0 + 8192, n_pairs))
                Zi = Inc[pair_p[block]] & Inc[pair_n[block]]
                # per-pair rarest-first order = global rarest-first order
                # restricted to the pair's zero set
                Zs = Zi[:, rarest_first]
                running = Zs.copy()
                rows = np.arange(Zs.shape[0])
                acc = None
                picked = []
                for _ in range(depth):
                    nxt = running.argmax(axis=1)
                    running[rows, nxt] = False
                    t_idx = rarest_first[nxt]
                    picked.append(t_idx)
                    layer = rays_tight_at[t_idx]
                    acc = layer.copy() if acc is None else acc & layer
                live = np.bitwise_count(acc).sum(axis=1, dtype=np.int64)
                adjacency[block] = live == 2  # just p and n themselves
                for k in np.flatnonzero(live > 2):
                    zi_idx = np.flatnonzero(Zi[k])
                    zi_idx = zi_idx[np.argsort(col_counts[zi_idx], kind="stable")]
                    row = acc[k]
                    count = int(live[k])
                    for t in zi_idx[depth:]:
                        if count <= 2:
                            break
                        row = row & rays_tight_at[t]
                        count = int(np.bitwise_count(row).sum())
                    adjacency[c0 + k] = count == 2
        elif len(pair_p):
            # same test, direct form: dominators can only be rays tight at the
            # pair's least-covered constraint, scanned in batches per constraint
            n_pairs = len(pair_p)
            big = np.iinfo(np.int64).max
            t_star = np.empty(n_pairs, dtype=np.int64)
            for c0 in range(0, n_pairs, 16384):
                block = slice(c0, min(c0 + 16384, n_pairs))
                Zi = Inc[pair_p[block]] & Inc[pair_n[block]]
                t_star[block] = np.where(Zi, col_counts[None, :], big).argmin(axis=1)
            ZiP = packed[pair_p] & packed[pair_n]
            adjacency = np.zeros(n_pairs, dtype=bool)
            order_by_t = np.argsort(t_star, kind="stable")
            start = 0
            while start < len(order_by_t):
                t = int(t_star[order_by_t[start]])
                stop = start
                while stop < len(order_by_t) and t_star[order_by_t[stop]] == t:
                    stop += 1
                group = order_by_t[start:stop]
                cand = rays_at.get(t)
                if cand is None:
                    cand = np.flatnonzero(Inc[:, t])
                    rays_at[t] = cand
                packed_cand = packed[cand]
                zp = ZiP[group]
                limit = max(1, 4_000_000 // (len(cand) * zp.shape[1] + 1))
                for g0 in range(0, len(group), limit):
                    blk = slice(g0, g0 + limit)
                    hits = (
                        (packed_cand[None, :, :] & zp[blk][:, None, :])
                        == zp[blk][:, None, :]
                    ).all(axis=2)
                    adjacency[group[blk]] = hits.sum(axis=1) == 2
                start = stop
        if len(pair_p):
            for k in np.flatnonzero(adjacency):
                p, nidx = pair_p[k], pair_n[k]
                comb = s[p] * R[nidx] - s[nidx] * R[p]
                inc = Inc[p] & Inc[nidx]
                inc[i] = True
                new_rays.append(comb)
                new_inc.append(inc)

        keep = np.concatenate([neg, zer]).astype(np.intp)
        R_keep = R[keep]
        Inc_keep = Inc[keep]
        Inc_keep[:, i] = s[keep] == 0
        if new_rays:
            fresh = np.array(new_rays, dtype=dtype)
            if exact:
                fresh = np.array(_gcd_normalize_object(fresh.tolist()), dtype=object)
            else:
                fresh = _gcd_normalize_int64(fresh)
            R = np.concatenate([R_keep, fresh])
            Inc = np.concatenate([Inc_keep, np.array(new_inc)])
        else:
            R, Inc = R_keep, Inc_keep
    return [tuple(int(x) for x in ray) for ray in R]


def _full_dim_facets(points, insertion_order=None) -> list[LinearInequality]:
    """Facets of a full-dimensional hull (points given as Fraction tuples)."""
    if insertion_order is None:
        rows = sorted(set(_scaled_int_row(p) for p in points))
    else:
        seen = set()
        rows = []
        for idx in insertion_order:
            row = _scaled_int_row(points[idx])
            if row not in seen:
                seen.add(row)
                rows.append(row)
    try:
        rays = _dd_cone(rows, exact=False)
    except _DDOverflow:
        rays = _dd_cone(rows, exact=True)
    out = []
    for ray in rays:
        coeffs, c = ray[:-1], ray[-1]
        if not any(coeffs):
            raise RuntimeError("unexpected non-facet ray in hull output")
        out.append(LinearInequality(coeffs, -c))
    return sorted(out, key=lambda q: q.key())


def _verify_hrep(v: VRep, hrep: HRep, hull_dim: int):
    """Belt and suspenders: exact satisfaction and facet-rank checks."""
    points = v.points
    for eq in hrep.equations:
        for p in points:
            if sum(c * x for c, x in zip(eq.coeffs, p)) != eq.value:
                raise RuntimeError("hull equation violated by an input point")
    if not hrep.inequalities:
        return
    rows = [_scaled_int_row(p) for p in points]
    is01 = all(x in (0, 1) for row in rows for x in row) and len(rows[0]) <= 20
    d = v.dimension
    A = np.array(rows, dtype=object)
    C = np.array([q.coeffs for q in hrep.inequalities], dtype=object)
    bounds = np.array([q.bound for q in hrep.inequalities], dtype=object)
    row_max = max(max(abs(x) for x in row) for row in rows)
    coeff_max = max(max(abs(c) for c in q.coeffs + (q.bound,)) for q in hrep.inequalities)
    if row_max * coeff_max * (d + 1) < 2 ** 62:
        A = A.astype(np.int64)
        C = C.astype(np.int64)
        bounds = bounds.astype(np.int64)
    # row scaled by den > 0: coeffs . v <= bound  <=>  coeffs . row[:d] <= bound * row[d]
    lhs = A[:, :d] @ C.T
    rhs = A[:, d : d + 1] * bounds[None, :]
    if (lhs > rhs).any():
        raise RuntimeError("hull inequality violated by an input point")
    tight_mask = lhs == rhs
    for f in range(len(hrep.inequalities)):
        tight = [rows[k] for k in np.flatnonzero(tight_mask[:, f])]
        # a facet's tight set must span an affine space of dimension hull_dim - 1
        if hull_dim > 0 and _exact_rank(tight, is01, limit=hull_dim) != hull_dim:
            raise RuntimeError("non-facet inequality in hull output")


def facets_from_vertices(v: VRep, insertion_order: Optional[Sequence[int]] = None) -> HRep:
    """Minimal exact facet description of conv(points), equations included.

    ``insertion_order`` optionally fixes the order in which points are fed to
    the incremental construction (a permutation of point indices).  The order
    changes only intermediate work, never the result: output inequalities are
    canonically sorted either way.  Feeding symmetry orbits of a vertex set
    together keeps intermediate hulls balanced and is dramatically faster on
    the communication polytopes than plain coordinate order.
    """
    if not v.points:
        raise ValueError("need at least one point")
    if insertion_order is not None and sorted(insertion_order) != list(
        range(len(v.points))
    ):
        raise ValueError("insertion_order must be a permutation of point indices")
    d = v.dimension
    base = v.points[0]
    diffs = [[x - y for x, y in zip(p, base)] for p in v.points[1:]]

    # reduced row echelon form of the difference set
    work = [row[:] for row in diffs]
    pivots: list[int] = []
    rank = 0
    for c in range(d):
        piv = next((r for r in range(rank, len(work)) if work[r][c] != 0), None)
        if piv is None:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        work[rank] = [x / work[rank][c] for x in work[rank]]
        for r in range(len(work)):
            if r != rank and work[r][c] != 0:
                factor = work[r][c]
                work[r] = [x - factor * y for x, y in zip(work[r], work[rank])]
        pivots.append(c)
        rank += 1
    rref = work[:rank]

    equations = []
    free_cols = [c for c in range(d) if c not in pivots]
    for f in free_cols:
        coeffs = [Fraction(0)] * d
        coeffs[f] = Fraction(1)
        for r, pc in enumerate(pivots):
            coeffs[pc] = -rref[r][f]
        den = 1
        for x in coeffs:
            den = _lcm(den, x.denominator)
        int_coeffs = [int(x * den) for x in coeffs]
        value = sum(c * x for c, x in zip(int_coeffs, base))
        if value.denominator != 1:
            int_coeffs = [c * value.denominator for c in int_coeffs]
            value = value * value.denominator
        equations.append(LinearEquation(tuple(int_coeffs), int(value)))
    equations.sort(key=lambda e: e.coeffs + (e.value,))

    if rank == 0:
        return HRep(d, (), tuple(equations))

    if rank == d:
        inequalities = _full_dim_facets(v.points, insertion_order)
    else:
        sub_points = [tuple(p[c] - base[c] for c in pivots) for p in v.points]
        sub_facets = _full_dim_facets(sub_points, insertion_order)
        inequalities = []
        for q in sub_facets:
            coeffs = [0] * d
            for r, pc in enumerate(pivots):
                coeffs[pc] = q.coeffs[r]
            shift = sum(c * x for c, x in zip(coeffs, base))
            bound = q.bound + shift
            if bound.denominator != 1:
                coeffs = [c * bound.denominator for c in coeffs]
                bound = bound * bound.denominator
            inequalities.append(LinearInequality(tuple(coeffs), int(bound)))
        inequalities = sorted(inequalities, key=lambda q: q.key())

    hrep = HRep(d, tuple(inequalities), tuple(equations))
    _verify_hrep(v, hrep, rank)
    return hrep


# --------------------------------------------------------------------------
# exact LP: phase-1 simplex with Bland's rule
# --------------------------------------------------------------------------

def _phase1(columns, b):
    """Feasibility of {w >= 0 : sum_j w_j columns[j] = b}.

    Returns ("feasible", w) or ("infeasible", y) where y . columns[j] <= 0
    for every j while y . b > 0 (the classic infeasibility certificate).
    """
    m = len(b)
    n = len(columns)
    flip = [-1 if b[i] < 0 else 1 for i in range(m)]
    tab = [
        [flip[i] * columns[j][i] for j in range(n)]
        + [Fraction(int(i == k)) for k in range(m)]
        + [flip[i] * b[i]]
        for i in range(m)
    ]
    # phase-1 reduced costs with the artificial basis: r_j = -sum_i tab[i][j]
    cost = [Fraction(0)] * (n + m + 1)
    for j in range(n + m + 1):
        cost[j] = -sum(tab[i][j] for i in range(m))
    for k in range(m):
        cost[n + k] += 1
    basis = list(range(n, n + m))

    for _ in range(_BLAND_LIMIT):
        enter = next((j for j in range(n) if cost[j] < 0), None)
        if enter is None:
            break
        leave, best = None, None
        for i in range(m):
            if tab[i][enter] > 0:
                ratio = tab[i][-1] / tab[i][enter]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            raise RuntimeError("phase-1 objective unbounded; inconsistent tableau")
        pivot = tab[leave][enter]
        tab[leave] = [x / pivot for x in tab[leave]]
        for i in range(m):
            if i != leave and tab[i][enter] != 0:
                factor = tab[i][enter]
                tab[i] = [x - factor * y for x, y in zip(tab[i], tab[leave])]
        if cost[enter] != 0:
            factor = cost[enter]
            cost = [x - factor * y for x, y in zip(cost, tab[leave])]
        basis[leave] = enter
    else:
        raise RuntimeError("simplex pivot limit exceeded")

    objective = sum(tab[i][-1] for i in range(m) if basis[i] >= n)
    if objective == 0:
        w = [Fraction(0)] * n
        for i, var in enumerate(basis):
            if var < n:
                w[var] = tab[i][-1]
        return "feasible", w
    y = [flip[i] * (1 - cost[n + i]) for i in range(m)]
    return "infeasible", y


def membership(x, v: VRep, batch: int = 25) -> MembershipResult:
    """Exact convex-hull membership with a verified certificate.

    Solves the weight LP over a growing working subset of the hull points;
    a separating direction found on the subset either survives against all
    points (query is outside) or pulls the worst offenders into the subset.
    """
    coords = tuple(x.coords) if hasattr(x, "coords") else tuple(Fraction(c) for c in x)
    if len(coords) != v.dimension:
        raise ValueError(f"dimension mismatch: {len(coords)} vs {v.dimension}")
    points = v.points
    for idx, p in enumerate(points):
        if p == coords:
            return Inside(weights=((idx, Fraction(1)),))

    m = v.dimension + 1
    target = tuple(coords) + (Fraction(1),)
    homog = [tuple(p) + (Fraction(1),) for p in points]
    working = list(range(min(len(points), 2 * m)))
    in_working = set(working)

    while True:
        status, payload = _phase1([homog[k] for k in working], target)
        if status == "feasible":
            weights = tuple(
                (working[j], w) for j, w in enumerate(payload) if w != 0
            )
            assert sum(w for _, w in weights) == 1
            for c in range(v.dimension):
                assert sum(w * points[k][c] for k, w in weights) == coords[c]
            return Inside(weights=weights)
        y = payload
        violations = []
        for idx, h in enumerate(homog):
            if idx in in_working:
                continue
            value = sum(yc * hc for yc, hc in zip(y, h))
            if value > 0:
                violations.append((value, idx))
        if not violations:
            den = 1
            for c in y:
                den = _lcm(den, c.denominator)
            ints = [int(c * den) for c in y]
            separator = LinearInequality(tuple(ints[:-1]), -ints[-1])
            for p in points:
                value = sum(c * pc for c, pc in zip(separator.coeffs, p))
                assert value <= separator.bound
            query_value = sum(c * pc for c, pc in zip(separator.coeffs, coords))
            assert query_value > separator.bound
            return Outside(separator=separator)
        violations.sort(key=lambda t: (-t[0], t[1]))
        for _, idx in violations[:batch]:
            working.append(idx)
            in_working.add(idx)


def contains_polytope(inner: VRep, outer: VRep) -> ContainmentReport:
    """Whether every inner point lies in the outer hull, with per-point witnesses."""
    if inner.dimension != outer.dimension:
        raise ValueError("dimension mismatch")
    witnesses = tuple(membership(p, outer) for p in inner.points)
    return ContainmentReport(
        contained=all(w.inside for w in witnesses), witnesses=witnesses
    )
