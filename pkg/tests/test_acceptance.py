"""End-to-end acceptance suite: every published number is recomputed exactly.

The heavyweight shared objects (vertex sets, hulls, class partitions) are
session fixtures so each polytope is built once.  All assertions are exact
integer/rational comparisons; there are no tolerances anywhere.
"""

import itertools
import random
from fractions import Fraction

import pytest

from bellpoly.bounds import (
    bacon_toner_ensemble,
    hat_distribution,
    lower_bound_report,
    simulation_bit_cost,
)
from bellpoly.core import (
    BIDIR,
    FIXED,
    CorrelationTable,
    LinearInequality,
    Scenario,
    check_no_signaling,
    lift_bidir,
    lift_fixed,
    project_bidir,
    project_fixed,
)
from bellpoly.polyhedra import (
    VRep,
    affine_dimension,
    contains_polytope,
    facets_from_vertices,
    membership,
)
from bellpoly.strategies import (
    AB,
    BA,
    LsrStrategy,
    ensemble_to_table,
    enumerate_bidir_cc_vertices,
    enumerate_fixed_cc_vertices,
    iter_fixed_cc_strategies,
    stirling_second_kind,
    strategy_to_table,
)
from bellpoly.symmetry import (
    act_on_inequality,
    act_on_table,
    canonical_inequality,
    partition_into_classes,
    positivity_family,
    symmetry_group,
    vertex_orbit_order,
)

SC32 = Scenario(3, 2)
SC22 = Scenario(2, 2)
SC33 = Scenario(3, 3)

# the eight published one-way facet classes, chart order, bound 1
PUBLISHED_FIXED_CLASSES = {
    "I": (-1, 0, 0, 0, -1, 1, 0, 1, 0, -1, 0, 1, -1, 0, 0),
    "II": (0, 0, 0, -1, -1, 1, -1, 1, 0, -1, 0, 1, -1, 0, 0),
    "III": (-1, -1, 0, 0, 1, -1, 0, 1, 1, -1, 0, 1, -1, 0, -1),
    "IV": (0, 0, 0, -1, -1, 1, -1, 1, 0, -1, -1, 1, -1, 1, 0),
    "V": (-1, 0, 0, 1, -1, -1, 1, -1, 1, 0, -1, 1, 0, -1, -1),
    "VI": (-3, 0, 0, 2, -2, 0, 2, 1, -1, -1, -1, 1, -1, 0, -2),
    "VII": (-3, 0, 0, 2, -2, 0, 2, 1, -1, -1, -2, 1, -1, 1, -2),
    "VIII": (-3, 0, 0, 2, -2, 1, 2, 1, -2, -1, -2, 1, -1, 1, -2),
}


@pytest.fixture(scope="session")
def fixed32_vertices():
    return enumerate_fixed_cc_vertices(SC32, AB, 1)


@pytest.fixture(scope="session")
def fixed32_hull(fixed32_vertices):
    v = VRep.from_points(fixed32_vertices)
    order = vertex_orbit_order(fixed32_vertices, SC32, FIXED)
    return facets_from_vertices(v, insertion_order=order)


@pytest.fixture(scope="session")
def fixed32_classes(fixed32_hull):
    return partition_into_classes(list(fixed32_hull.inequalities), SC32, FIXED)


@pytest.fixture(scope="session")
def bidir32_vertices():
    return enumerate_bidir_cc_vertices(SC32, 1)


@pytest.fixture(scope="session")
def bidir32_hull(bidir32_vertices):
    v = VRep.from_points(bidir32_vertices)
    order = vertex_orbit_order(bidir32_vertices, SC32, BIDIR)
    return facets_from_vertices(v, insertion_order=order)


@pytest.fixture(scope="session")
def bidir32_classes(bidir32_hull):
    return partition_into_classes(list(bidir32_hull.inequalities), SC32, BIDIR)


_product_cache = {}


def product_strategy_table(sc, alpha, beta):
    key = (sc, alpha, beta)
    if key not in _product_cache:
        _product_cache[key] = strategy_to_table(LsrStrategy(sc, alpha, beta))
    return _product_cache[key]


def random_no_signaling_table(sc: Scenario, rng: random.Random) -> CorrelationTable:
    """Mixture of product strategies and relabeled anti-correlated witnesses."""
    components = [
        product_strategy_table(sc, alpha, beta)
        for alpha in itertools.product(range(2), repeat=sc.ma)
        for beta in itertools.product(range(2), repeat=sc.mb)
    ]
    group = symmetry_group(sc)
    hat = hat_distribution(sc.ma, sc.mb)
    for _ in range(3):
        g = group[rng.randrange(len(group))]
        components.append(act_on_table(g, hat))
    weights = [Fraction(rng.randint(0, 6)) for _ in components]
    if sum(weights) == 0:
        weights[0] = Fraction(1)
    total = sum(weights)
    entries = tuple(
        sum(w * t.entries[k] for w, t in zip(weights, components)) / total
        for k in range(sc.n_entries)
    )
    return CorrelationTable(sc, entries)


def brute_partition_count(n: int, k: int) -> int:
    """Set partitions of n elements into k blocks, counted by raw enumeration."""
    count = 0
    for assign in itertools.product(range(k), repeat=n):
        if len(set(assign)) != k:
            continue
        relabel, seen = [], {}
        for x in assign:
            seen.setdefault(x, len(seen))
            relabel.append(seen[x])
        if tuple(relabel) == assign:
            count += 1
    return count if n > 0 else int(k == 0)


def test_criterion_01_fixed_direction_reproduction(fixed32_classes):
    """(3,2) one-way pipeline: 8 nontrivial classes matching I-VIII bijectively."""
    nontrivial = [c for c in fixed32_classes if not c.trivial]
    assert len(nontrivial) == 8
    class_keys = {c.representative.key() for c in nontrivial}
    published = {
        name: canonical_inequality(LinearInequality(coeffs, 1), SC32, FIXED).key()
        for name, coeffs in PUBLISHED_FIXED_CLASSES.items()
    }
    # bijection: eight distinct canonical forms exactly covering the classes
    assert len(set(published.values())) == 8
    assert set(published.values()) == class_keys


def test_criterion_02_trivial_class_audit(fixed32_classes):
    """Every remaining one-way class is an output-probability positivity image."""
    family_keys = {
        canonical_inequality(q, SC32, FIXED).key()
        for q in positivity_family(SC32, FIXED)
    }
    for cls in fixed32_classes:
        if cls.trivial:
            assert cls.representative.key() in family_keys
        else:
            assert cls.representative.key() not in family_keys


def test_criterion_03_bidirectional_reproduction(bidir32_classes):
    """(3,2) two-way pipeline: 143 inequivalence classes in total."""
    nontrivial = sum(1 for c in bidir32_classes if not c.trivial)
    trivial = len(bidir32_classes) - nontrivial
    assert len(bidir32_classes) == 143, (
        f"expected 143 classes total, got {len(bidir32_classes)} "
        f"(nontrivial-only count: {nontrivial}, trivial: {trivial})"
    )


def test_criterion_04_dimension_checks(fixed32_vertices, bidir32_vertices):
    """Affine dimensions: 15 for the one-way set, 18 for the two-way set."""
    assert affine_dimension(VRep.from_points(fixed32_vertices)) == 15
    assert affine_dimension(VRep.from_points(bidir32_vertices)) == 18


def test_criterion_05_chsh_sanity():
    """(2,2) plain-shared-randomness hull has exactly 1 nontrivial class."""
    points = enumerate_bidir_cc_vertices(SC22, 0)
    hull = facets_from_vertices(VRep.from_points(points))
    classes = partition_into_classes(
        list(hull.inequalities), SC22, BIDIR, hull.equations
    )
    nontrivial = [c for c in classes if not c.trivial]
    assert len(nontrivial) == 1


def test_criterion_06_fixed_polytopes_inside_bidirectional(bidir32_vertices):
    """Both one-way polytopes sit inside the two-way polytope, with witnesses."""
    outer = VRep.from_points(bidir32_vertices)
    for direction in (AB, BA):
        seen = {}
        for s in iter_fixed_cc_strategies(SC32, direction, 1):
            p = project_bidir(strategy_to_table(s))
            seen[p.coords] = p
        inner = VRep.from_points([seen[c] for c in sorted(seen)])
        report = contains_polytope(inner, outer)
        assert report.contained
        assert len(report.witnesses) == len(inner.points)
        for witness in report.witnesses:
            assert witness.inside


def test_criterion_07_theorem_agreement():
    """One bit refuted two ways on (3,3); one bit suffices on (2,2)."""
    report = lower_bound_report(3, 3, 1)
    assert report.exhaustive_refuted is True
    assert report.lp_outside is True
    q = report.separator
    assert q is not None
    hat_point = project_bidir(hat_distribution(3, 3))
    for p in enumerate_bidir_cc_vertices(SC33, 1):
        value = sum(c * x for c, x in zip(q.coeffs, p.coords))
        assert value <= q.bound
    hat_value = sum(c * x for c, x in zip(q.coeffs, hat_point.coords))
    assert hat_value > q.bound

    small = lower_bound_report(2, 2, 1)
    assert small.exhaustive_refuted is False
    assert small.lp_outside is False


def test_criterion_08_simulation_exactness():
    """100 random no-signaling tables are reproduced exactly at the stated cost."""
    rng = random.Random(2026)
    for sc, count in ((SC22, 50), (SC33, 50)):
        bits = simulation_bit_cost(sc)
        assert bits == (1 if sc == SC22 else 2)
        for _ in range(count):
            table = random_no_signaling_table(sc, rng)
            assert check_no_signaling(table).both
            ensemble = bacon_toner_ensemble(table)
            assert ensemble_to_table(ensemble) == table
            assert all(s.bit_cost == bits for _, s in ensemble.entries)


def test_criterion_09_ajbi_family_outside(bidir32_vertices):
    """All 12 double-signaling product tables lie outside the two-way polytope."""
    outer = VRep.from_points(bidir32_vertices)
    count = 0
    for a_map in itertools.product(range(2), repeat=2):
        if len(set(a_map)) == 1:
            continue  # a must be non-constant
        for b_map in itertools.product(range(2), repeat=3):
            if len(set(b_map)) == 1:
                continue  # b must be non-constant
            table = CorrelationTable.from_function(
                SC32,
                lambda a, b, i, j: int(a == a_map[j] and b == b_map[i]),
            )
            result = membership(project_bidir(table), outer)
            assert not result.inside
            count += 1
    assert count == 12


class TestCriterion10Properties:
    def test_criterion_10a_stirling(self):
        """Recurrence and brute-force agreement for n <= 7."""
        for n in range(1, 8):
            for k in range(n + 1):
                value = stirling_second_kind(n, k)
                if k >= 1:
                    assert value == k * stirling_second_kind(
                        n - 1, k
                    ) + stirling_second_kind(n - 1, k - 1)
                assert value == brute_partition_count(n, k)

    def test_criterion_10b_projection_round_trips(self):
        """1000 random admissible tables survive both round trips exactly."""
        rng = random.Random(77)
        for trial in range(1000):
            sc = SC22 if trial % 2 == 0 else SC32
            t = random_no_signaling_table(sc, rng)
            assert lift_fixed(project_fixed(t)) == t
            assert lift_bidir(project_bidir(t)) == t

    def test_criterion_10c_symmetry_laws(self):
        """Canonical forms are orbit constants on 50 random pairs."""
        rng = random.Random(88)
        group = symmetry_group(SC32)
        for _ in range(50):
            coeffs = tuple(rng.randint(-3, 3) for _ in range(15))
            if not any(coeffs):
                coeffs = (1,) + coeffs[1:]
            q = LinearInequality(coeffs, rng.randint(-2, 3))
            g = group[rng.randrange(len(group))]
            assert canonical_inequality(
                act_on_inequality(g, q, FIXED), SC32, FIXED
            ) == canonical_inequality(q, SC32, FIXED)

    def test_criterion_10d_hull_membership_cross_validation(self):
        """200 random points per polytope: LP and facet verdicts coincide."""
        rng = random.Random(99)
        for model_points in (
            enumerate_fixed_cc_vertices(SC22, AB, 1),
            enumerate_bidir_cc_vertices(SC22, 1),
        ):
            v = VRep.from_points(model_points)
            hull = facets_from_vertices(v)
            raw = [p.coords for p in model_points]
            dim = len(raw[0])
            for _ in range(200):
                if rng.random() < 0.5:
                    weights = [Fraction(rng.randint(0, 2)) for _ in raw]
                    if sum(weights) == 0:
                        weights[0] = Fraction(1)
                    total = sum(weights)
                    x = tuple(
                        sum(w * p[c] for w, p in zip(weights, raw)) / total
                        for c in range(dim)
                    )
                else:
                    x = tuple(
                        Fraction(rng.randint(-1, 3), rng.choice((1, 2, 3)))
                        for _ in range(dim)
                    )
                lp_inside = membership(x, v).inside
                facet_inside = all(
                    sum(c * xc for c, xc in zip(q.coeffs, x)) <= q.bound
                    for q in hull.inequalities
                ) and all(
                    sum(c * xc for c, xc in zip(e.coeffs, x)) == e.value
                    for e in hull.equations
                )
                assert lp_inside == facet_inside
