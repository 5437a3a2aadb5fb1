"""Local relabeling symmetries and inequality classification.

Two tables are locally equivalent when they differ by a permutation of each
party's settings together with per-setting permutations of each party's
outputs.  The full group has ma! * mb! * (ka!)^ma * (kb!)^mb elements; it
acts on tables by permuting entries, and it induces an affine action on
each reduced coordinate space (eliminated entries re-enter, so bounds shift
as well as coefficients).

An inequality's canonical form is the lexicographically smallest member of
its orbit, which keys the partition of a facet list into equivalence
classes.  A class is "trivial" when its representative is the image of a
plain output-probability nonnegativity constraint.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

import numpy as np

from .core import (
    BIDIR,
    FIXED,
    CorrelationTable,
    LinearInequality,
    Scenario,
    bidir_index_p00,
    bidir_index_p01,
    bidir_index_p10,
    fixed_index_p00,
    fixed_index_p10,
    fixed_index_qa,
)


@dataclass(frozen=True)
class LocalSymmetry:
    """Setting permutations plus per-setting output permutations.

    The action on a table is
    p'(ab|ij) = p(pa_out[pi_a[i]](a) pb_out[pi_b[j]](b) | pi_a[i] pi_b[j]),
    with the output permutations indexed by the original setting labels.
    """

    pi_a: tuple[int, ...]
    pi_b: tuple[int, ...]
    pa_out: tuple[tuple[int, ...], ...]
    pb_out: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        for perm in (self.pi_a, self.pi_b, *self.pa_out, *self.pb_out):
            if sorted(perm) != list(range(len(perm))):
                raise ValueError(f"{perm!r} is not a permutation")

    @property
    def scenario(self) -> Scenario:
        return Scenario(
            len(self.pi_a), len(self.pi_b), len(self.pa_out[0]), len(self.pb_out[0])
        )


def identity_symmetry(sc: Scenario) -> LocalSymmetry:
    ident = lambda k: tuple(range(k))
    return LocalSymmetry(
        ident(sc.ma),
        ident(sc.mb),
        tuple(ident(sc.ka) for _ in range(sc.ma)),
        tuple(ident(sc.kb) for _ in range(sc.mb)),
    )


def symmetry_group(sc: Scenario) -> list[LocalSymmetry]:
    """All ma! * mb! * (ka!)^ma * (kb!)^mb local symmetries, identity first."""
    out = []
    for pi_a in itertools.permutations(range(sc.ma)):
        for pi_b in itertools.permutations(range(sc.mb)):
            for pa_out in itertools.product(
                itertools.permutations(range(sc.ka)), repeat=sc.ma
            ):
                for pb_out in itertools.product(
                    itertools.permutations(range(sc.kb)), repeat=sc.mb
                ):
                    out.append(LocalSymmetry(pi_a, pi_b, pa_out, pb_out))
    return out


def table_entry_permutation(g: LocalSymmetry, sc: Scenario) -> tuple[int, ...]:
    """perm with (g.t).entries[k] = t.entries[perm[k]]."""
    if g.scenario != sc:
        raise ValueError("symmetry does not match scenario")
    perm = [0] * sc.n_entries
    for a, b, i, j in sc.entry_tuples():
        old_i, old_j = g.pi_a[i], g.pi_b[j]
        perm[sc.entry_index(a, b, i, j)] = sc.entry_index(
            g.pa_out[old_i][a], g.pb_out[old_j][b], old_i, old_j
        )
    return tuple(perm)


def inverse_entry_permutation(perm: tuple[int, ...]) -> tuple[int, ...]:
    inv = [0] * len(perm)
    for new, old in enumerate(perm):
        inv[old] = new
    return tuple(inv)


def act_on_table(g: LocalSymmetry, t: CorrelationTable) -> CorrelationTable:
    perm = table_entry_permutation(g, t.scenario)
    return CorrelationTable(t.scenario, tuple(t.entries[k] for k in perm))


def _invert(perm: tuple[int, ...]) -> tuple[int, ...]:
    out = [0] * len(perm)
    for pos, value in enumerate(perm):
        out[value] = pos
    return tuple(out)


def compose(g: LocalSymmetry, h: LocalSymmetry) -> LocalSymmetry:
    """The element acting as g after h: act(compose(g, h), t) = act(g, act(h, t))."""
    if g.scenario != h.scenario:
        raise ValueError("cannot compose symmetries of different scenarios")
    sc = g.scenario
    pi_a = tuple(h.pi_a[g.pi_a[i]] for i in range(sc.ma))
    pi_b = tuple(h.pi_b[g.pi_b[j]] for j in range(sc.mb))
    pa_out = [None] * sc.ma
    for i in range(sc.ma):
        m = g.pi_a[i]
        o = h.pi_a[m]
        pa_out[o] = tuple(h.pa_out[o][g.pa_out[m][a]] for a in range(sc.ka))
    pb_out = [None] * sc.mb
    for j in range(sc.mb):
        m = g.pi_b[j]
        o = h.pi_b[m]
        pb_out[o] = tuple(h.pb_out[o][g.pb_out[m][b]] for b in range(sc.kb))
    return LocalSymmetry(pi_a, pi_b, tuple(pa_out), tuple(pb_out))


def inverse(g: LocalSymmetry) -> LocalSymmetry:
    """The element undoing g: act(inverse(g), act(g, t)) = t."""
    sc = g.scenario
    pi_a_inv = _invert(g.pi_a)
    pi_b_inv = _invert(g.pi_b)
    pa_out = [None] * sc.ma
    for i in range(sc.ma):
        pa_out[pi_a_inv[i]] = _invert(g.pa_out[i])
    pb_out = [None] * sc.mb
    for j in range(sc.mb):
        pb_out[pi_b_inv[j]] = _invert(g.pb_out[j])
    return LocalSymmetry(pi_a_inv, pi_b_inv, tuple(pa_out), tuple(pb_out))


# --------------------------------------------------------------------------
# induced affine action on reduced coordinates
# --------------------------------------------------------------------------

def _lift_arrays(sc: Scenario, space: str):
    """Integer (L, L0) with full-table vector = L @ coords + L0 on admissible points."""
    n = sc.n_entries
    dim = sc.fixed_dim if space == FIXED else sc.bidir_dim
    L = np.zeros((n, dim), dtype=np.int64)
    L0 = np.zeros(n, dtype=np.int64)
    for i in range(sc.ma):
        for j in range(sc.mb):
            if space == FIXED:
                qa, c00, c10 = (
                    fixed_index_qa(sc, i),
                    fixed_index_p00(sc, i, j),
                    fixed_index_p10(sc, i, j),
                )
                L[sc.entry_index(0, 0, i, j), c00] = 1
                L[sc.entry_index(1, 0, i, j), c10] = 1
                L[sc.entry_index(0, 1, i, j), qa] = 1
                L[sc.entry_index(0, 1, i, j), c00] = -1
                L[sc.entry_index(1, 1, i, j), qa] = -1
                L[sc.entry_index(1, 1, i, j), c10] = -1
                L0[sc.entry_index(1, 1, i, j)] = 1
            else:
                c00, c10, c01 = (
                    bidir_index_p00(sc, i, j),
                    bidir_index_p10(sc, i, j),
                    bidir_index_p01(sc, i, j),
                )
                L[sc.entry_index(0, 0, i, j), c00] = 1
                L[sc.entry_index(1, 0, i, j), c10] = 1
                L[sc.entry_index(0, 1, i, j), c01] = 1
                L[sc.entry_index(1, 1, i, j), c00] = -1
                L[sc.entry_index(1, 1, i, j), c10] = -1
                L[sc.entry_index(1, 1, i, j), c01] = -1
                L0[sc.entry_index(1, 1, i, j)] = 1
    return L, L0


def _project_array(sc: Scenario, space: str):
    """Integer P with coords = P @ full-table vector for admissible tables."""
    n = sc.n_entries
    dim = sc.fixed_dim if space == FIXED else sc.bidir_dim
    P = np.zeros((dim, n), dtype=np.int64)
    for i in range(sc.ma):
        for j in range(sc.mb):
            if space == FIXED:
                P[fixed_index_p00(sc, i, j), sc.entry_index(0, 0, i, j)] = 1
                P[fixed_index_p10(sc, i, j), sc.entry_index(1, 0, i, j)] = 1
            else:
                P[bidir_index_p00(sc, i, j), sc.entry_index(0, 0, i, j)] = 1
                P[bidir_index_p10(sc, i, j), sc.entry_index(1, 0, i, j)] = 1
                P[bidir_index_p01(sc, i, j), sc.entry_index(0, 1, i, j)] = 1
    if space == FIXED:
        for i in range(sc.ma):
            P[fixed_index_qa(sc, i), sc.entry_index(0, 0, i, 0)] = 1
            P[fixed_index_qa(sc, i), sc.entry_index(0, 1, i, 0)] = 1
    return P


def _coordinate_action(g: LocalSymmetry, sc: Scenario, space: str):
    """Affine (M, m): project(g^-1 . lift(u)) = M @ u + m.

    Computed in the full table space, where the group acts by an entry
    permutation: conjugating by lift/project keeps the affine bookkeeping
    of the eliminated entries exact.
    """
    L, L0 = _lift_arrays(sc, space)
    P = _project_array(sc, space)
    inv_perm = inverse_entry_permutation(table_entry_permutation(g, sc))
    gather = np.fromiter(inv_perm, dtype=np.intp, count=sc.n_entries)
    M = P @ L[gather]
    m = P @ L0[gather]
    return M, m


def act_on_inequality(
    g: LocalSymmetry, q: LinearInequality, space: str
) -> LinearInequality:
    """Contragradient action: values are preserved, q'(g.x) = q(x)."""
    sc = g.scenario
    M, m = _coordinate_action(g, sc, space)
    c = np.asarray(q.coeffs, dtype=np.int64)
    new_coeffs = M.T @ c
    new_bound = q.bound - int(c @ m)
    return LinearInequality(tuple(int(x) for x in new_coeffs), new_bound)


@lru_cache(maxsize=None)
def _stacked_actions(sc: Scenario, space: str):
    """All group actions as (n_group, dim, dim) matrices plus offsets."""
    group = symmetry_group(sc)
    mats, offs = [], []
    for g in group:
        M, m = _coordinate_action(g, sc, space)
        mats.append(M)
        offs.append(m)
    return tuple(group), np.stack(mats), np.stack(offs)


def equation_reducer(equations):
    """Unique representative of an inequality modulo a hull's equation span.

    Facets of a flat hull are only determined up to rational multiples of the
    hull equations; eliminating the equations' pivot coordinates fixes one
    representative, making orbit minima comparable.
    """
    rows = [
        [Fraction(c) for c in eq.coeffs] + [Fraction(eq.value)] for eq in equations
    ]
    rref, pivots = [], []
    rank = 0
    cols = len(rows[0]) - 1 if rows else 0
    work = [row[:] for row in rows]
    for c in range(cols):
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

    def reduce(q: LinearInequality) -> LinearInequality:
        c = [Fraction(x) for x in q.coeffs] + [Fraction(q.bound)]
        for row, p in zip(rref, pivots):
            factor = c[p]
            if factor:
                c = [x - factor * y for x, y in zip(c, row)]
        den = 1
        for x in c:
            den = den * x.denominator // gcd(den, x.denominator)
        ints = [int(x * den) for x in c]
        return LinearInequality(tuple(ints[:-1]), ints[-1])

    return reduce


def canonical_inequality_with_witness(
    q: LinearInequality, sc: Scenario, space: str, equations=()
) -> tuple[LinearInequality, LocalSymmetry]:
    """Lexicographic orbit minimum plus a group element realizing it."""
    group, mats, offs = _stacked_actions(sc, space)
    reduce = equation_reducer(equations) if equations else None
    c = np.asarray(q.coeffs, dtype=np.int64)
    best_key, best_g = None, None
    for g, M, m in zip(group, mats, offs):
        image = LinearInequality(
            tuple(int(x) for x in M.T @ c), q.bound - int(c @ m)
        )
        if reduce is not None:
            image = reduce(image)
        key = image.key()
        if best_key is None or key < best_key:
            best_key, best_g = key, g
    return LinearInequality(best_key[:-1], best_key[-1]), best_g


def canonical_inequality(
    q: LinearInequality, sc: Scenario, space: str, equations=()
) -> LinearInequality:
    return canonical_inequality_with_witness(q, sc, space, equations)[0]


def positivity_family(sc: Scenario, space: str) -> list[LinearInequality]:
    """Reduced-space images of the constraints p(ab|ij) >= 0."""
    dim = sc.fixed_dim if space == FIXED else sc.bidir_dim
    out = []
    for i in range(sc.ma):
        for j in range(sc.mb):
            rows = []
            if space == FIXED:
                qa, c00, c10 = (
                    fixed_index_qa(sc, i),
                    fixed_index_p00(sc, i, j),
                    fixed_index_p10(sc, i, j),
                )
                rows.append(({c00: -1}, 0))            # p(00|ij) >= 0
                rows.append(({c10: -1}, 0))            # p(10|ij) >= 0
                rows.append(({c00: 1, qa: -1}, 0))     # p(01|ij) >= 0
                rows.append(({qa: 1, c10: 1}, 1))      # p(11|ij) >= 0
            else:
                c00, c10, c01 = (
                    bidir_index_p00(sc, i, j),
                    bidir_index_p10(sc, i, j),
                    bidir_index_p01(sc, i, j),
                )
                rows.append(({c00: -1}, 0))
                rows.append(({c10: -1}, 0))
                rows.append(({c01: -1}, 0))
                rows.append(({c00: 1, c10: 1, c01: 1}, 1))  # p(11|ij) >= 0
            for support, bound in rows:
                coeffs = [0] * dim
                for k, value in support.items():
                    coeffs[k] = value
                out.append(LinearInequality(tuple(coeffs), bound))
    return out


def _trivial_canonical_keys(sc: Scenario, space: str, equations=()) -> frozenset:
    return frozenset(
        canonical_inequality(q, sc, space, equations).key()
        for q in positivity_family(sc, space)
    )


@dataclass(frozen=True)
class InequalityClass:
    representative: LinearInequality  # canonical (orbit-lex-min) form
    members: tuple[int, ...]  # indices into the classified list
    trivial: bool

    @property
    def size(self) -> int:
        return len(self.members)


def _lexmin_fold(current: np.ndarray, candidate: np.ndarray) -> np.ndarray:
    """Row-wise lexicographic minimum of two equal-shape integer arrays."""
    differs = current != candidate
    any_diff = differs.any(axis=1)
    first = np.where(any_diff, differs.argmax(axis=1), 0)
    rows = np.arange(current.shape[0])
    take = any_diff & (candidate[rows, first] < current[rows, first])
    out = current.copy()
    out[take] = candidate[take]
    return out


def _normalize_rows(arr: np.ndarray) -> np.ndarray:
    g = np.gcd.reduce(np.abs(arr), axis=1)
    g[g == 0] = 1
    return arr // g.reshape(-1, 1)


def canonical_forms(
    ineqs: list[LinearInequality], sc: Scenario, space: str, equations=()
) -> list[tuple]:
    """Canonical key of every inequality, vectorized over the whole group."""
    if not ineqs:
        return []
    if equations:
        # flat hulls are small; take the exact per-inequality path
        return [
            canonical_inequality(q, sc, space, equations).key() for q in ineqs
        ]
    _, mats, offs = _stacked_actions(sc, space)
    C = np.array([q.coeffs for q in ineqs], dtype=np.int64)
    bounds = np.array([q.bound for q in ineqs], dtype=np.int64)
    best = None
    for M, m in zip(mats, offs):
        coeffs = C @ M
        new_bounds = bounds - C @ m
        stacked = _normalize_rows(np.concatenate([coeffs, new_bounds[:, None]], axis=1))
        best = stacked if best is None else _lexmin_fold(best, stacked)
    return [tuple(int(x) for x in row) for row in best]


def partition_into_classes(
    ineqs: list[LinearInequality], sc: Scenario, space: str, equations=()
) -> list[InequalityClass]:
    """Group inequalities by canonical form; classes sorted by representative.

    ``equations`` must be supplied when the inequalities describe a flat hull,
    so that equivalent facets written with different eliminated coordinates
    land in the same class.
    """
    keys = canonical_forms(ineqs, sc, space, equations)
    trivial_keys = _trivial_canonical_keys(sc, space, equations)
    grouped: dict[tuple, list[int]] = {}
    for idx, key in enumerate(keys):
        grouped.setdefault(key, []).append(idx)
    classes = []
    for key in sorted(grouped):
        rep = LinearInequality(key[:-1], key[-1])
        classes.append(
            InequalityClass(
                representative=rep,
                members=tuple(grouped[key]),
                trivial=key in trivial_keys,
            )
        )
    return classes


def group_order(sc: Scenario) -> int:
    import math

    return (
        math.factorial(sc.ma)
        * math.factorial(sc.mb)
        * math.factorial(sc.ka) ** sc.ma
        * math.factorial(sc.kb) ** sc.mb
    )


def vertex_orbit_order(points, sc: Scenario, space: str) -> list[int]:
    """Point indices grouped into symmetry orbits, smallest orbits first.

    The point set must be closed under the local symmetry group (any model's
    vertex set is).  Feeding a hull computation whole orbits at a time keeps
    every intermediate hull symmetric, which avoids the ray blowup that
    coordinate-sorted insertion suffers on the communication polytopes.
    """
    coords = [tuple(p.coords) if hasattr(p, "coords") else tuple(p) for p in points]
    den = 1
    for p in coords:
        for x in p:
            den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
    Z = np.array(
        [[int(Fraction(x) * den) for x in p] for p in coords], dtype=np.int64
    )
    index = {row.tobytes(): k for k, row in enumerate(Z)}
    if len(index) != len(coords):
        raise ValueError("orbit ordering requires distinct points")

    parent = list(range(len(coords)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    _, mats, offs = _stacked_actions(sc, space)
    for M, m in zip(mats, offs):
        images = Z @ M.T + den * m
        for k, row in enumerate(images):
            j = index.get(row.tobytes())
            if j is None:
                raise ValueError("point set is not closed under the symmetry group")
            rk, rj = find(k), find(j)
            if rk != rj:
                parent[rk] = rj

    orbits: dict[int, list[int]] = {}
    for k in range(len(coords)):
        orbits.setdefault(find(k), []).append(k)
    ordered = sorted(
        orbits.values(), key=lambda o: (len(o), min(coords[k] for k in o))
    )
    return [k for orbit in ordered for k in sorted(orbit, key=lambda k: coords[k])]


def format_chart(q: LinearInequality, sc: Scenario) -> str:
    """Fixed-space inequality as the standard coefficient chart.

    Row 1 holds the qA(0|i) coefficients; the next mb rows hold p(00|ij)
    for j = 0, 1, ...; the final mb rows hold p(10|ij); each row lists
    i = 0..ma-1 left to right.
    """
    if len(q.coeffs) != sc.fixed_dim:
        raise ValueError("chart layout applies to fixed-space inequalities")
    rows = [q.coeffs[:sc.ma]]
    for j in range(sc.mb):
        rows.append(tuple(q.coeffs[fixed_index_p00(sc, i, j)] for i in range(sc.ma)))
    for j in range(sc.mb):
        rows.append(tuple(q.coeffs[fixed_index_p10(sc, i, j)] for i in range(sc.ma)))
    width = max(len(str(x)) for row in rows for x in row)
    lines = ["  ".join(f"{x:>{width}}" for x in row) for row in rows]
    lines.append(f"<= {q.bound}")
    return "\n".join(lines)
