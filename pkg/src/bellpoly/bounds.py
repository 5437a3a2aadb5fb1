"""Communication cost of simulating no-signaling correlations.

``hat_distribution`` builds the extremal no-signaling witness table: outputs
perfectly correlated everywhere except anti-correlated on the diagonal
settings 1..mb-1 (and Alice deterministic for her surplus settings).  Any
two-way strategy with fewer than ceil(log2 mb) bits has three settings
t0, t1, t2 on which its messages collide (``certificate_triple``); the
product form of a deterministic strategy then forces probability mass onto
a zero of the witness, which refutes simulability strategy by strategy.
``lower_bound_report`` runs that exhaustive refutation alongside an exact
LP separation of the witness from the two-way polytope and insists the two
verdicts agree.

``bacon_toner_ensemble`` realizes the matching upper bound: the party with
fewer settings announces its setting (ceil(log2 min(ma, mb)) bits), shared
randomness samples that party's marginal, and the other party samples the
exact conditional - reproducing any no-signaling table with an explicit
finite ensemble of one-way strategies.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, log2
from typing import Optional

from .core import (
    BOB,
    CorrelationTable,
    LinearInequality,
    Scenario,
    SignalingError,
    check_no_signaling,
    marginals,
    project_bidir,
)
from .polyhedra import Outside, VRep, membership
from .strategies import (
    BA,
    AB,
    BidirCcStrategy,
    FixedCcStrategy,
    StrategyEnsemble,
    count_bidir_cc_strategies,
    enumerate_bidir_cc_vertices,
    iter_bidir_cc_strategies,
    strategy_to_table,
)


def hat_distribution(ma: int, mb: int) -> CorrelationTable:
    """Binary-outcome no-signaling witness with anti-correlated diagonal.

    Setting i = 0 is perfectly correlated with every j; settings
    1 <= i <= mb-1 are correlated except anti-correlated at j = i;
    settings i >= mb output 0 for Alice with Bob uniform.
    """
    if mb < 1 or ma < mb:
        raise ValueError("requires ma >= mb >= 1")
    sc = Scenario(ma, mb)
    half = Fraction(1, 2)

    def entry(a, b, i, j):
        if i >= mb:
            return half if a == 0 else Fraction(0)
        if 1 <= i == j:
            return half if a != b else Fraction(0)
        return half if a == b else Fraction(0)

    return CorrelationTable.from_function(sc, entry)


@dataclass(frozen=True)
class CertificateTriple:
    """Distinct settings with kappa(t0) = kappa(t2) and sigma(t1) = sigma(t2)."""

    t0: int
    t1: int
    t2: int


def certificate_triple(
    kappa, sigma, mb: int, r_bits: int, s_bits: int
) -> CertificateTriple:
    """Message collision forced by the pigeonhole bound 2^r < mb.

    Scans the largest kappa fiber among the first mb settings.  t2 is always
    chosen nonzero so that (t2, t2) is an anti-correlated slice of the
    witness distribution.
    """
    if not 0 <= s_bits <= r_bits:
        raise ValueError("need 0 <= s_bits <= r_bits")
    if 2 ** r_bits >= mb:
        raise ValueError("no collision triple is guaranteed unless 2^r < mb")
    if mb < 3:
        raise ValueError("three distinct settings require mb >= 3")
    if len(kappa) < mb or len(sigma) < mb:
        raise ValueError("kappa and sigma must cover settings 0..mb-1")

    fibers: dict[int, list[int]] = {}
    for t in range(mb):
        fibers.setdefault(kappa[t], []).append(t)
    n_max = max(len(f) for f in fibers.values())
    fiber = next(f for f in fibers.values() if len(f) == n_max)

    if r_bits == s_bits:
        # sigma is constant; any two fiber members work, t2 nonzero
        t2 = next(t for t in fiber if t != 0)
        t0 = next(t for t in fiber if t != t2)
        t1 = next(t for t in range(mb) if t not in (t0, t2))
    else:
        pair = next(
            (u, v)
            for u, v in itertools.combinations(fiber, 2)
            if sigma[u] == sigma[v]
        )
        t1, t2 = pair  # u < v, so t2 >= 1
        t0 = next(t for t in fiber if t not in (t1, t2))

    triple = CertificateTriple(t0, t1, t2)
    assert len({t0, t1, t2}) == 3 and max(t0, t1, t2) < mb and t2 != 0
    assert kappa[t0] == kappa[t2] and sigma[t1] == sigma[t2]
    return triple


def zero_constraints(triple: CertificateTriple) -> tuple[tuple[int, int, int, int], ...]:
    """The eight witness zeros (a, b, i, j) pinned down by a collision triple."""
    t0, t1, t2 = triple.t0, triple.t1, triple.t2
    return (
        (0, 1, t0, t1), (1, 0, t0, t1),
        (0, 1, t0, t2), (1, 0, t0, t2),
        (0, 1, t2, t1), (1, 0, t2, t1),
        (0, 0, t2, t2), (1, 1, t2, t2),
    )


def strategy_consistent_with_hat(s: BidirCcStrategy, hat: CorrelationTable) -> bool:
    """Whether the strategy's support is contained in the witness support."""
    if s.scenario != hat.scenario:
        raise ValueError("strategy and table scenarios differ")
    sc = s.scenario
    for i in range(sc.ma):
        for j in range(sc.mb):
            a = s.alice_output[i][s.sigma[j]]
            b = s.bob_output[j][s.kappa[i]]
            if hat.p(a, b, i, j) == 0:
                return False
    return True


def violated_zero_constraint(
    s: BidirCcStrategy, triple: CertificateTriple
) -> Optional[tuple[int, int, int, int]]:
    """First of the eight pinned zeros that the strategy puts mass on."""
    for a, b, i, j in zero_constraints(triple):
        if s.alice_output[i][s.sigma[j]] == a and s.bob_output[j][s.kappa[i]] == b:
            return (a, b, i, j)
    return None


# --------------------------------------------------------------------------
# simulation protocol: announce the smaller party's setting
# --------------------------------------------------------------------------

def simulation_bit_cost(sc: Scenario) -> int:
    return ceil(log2(min(sc.ma, sc.mb))) if min(sc.ma, sc.mb) > 1 else 0


def bacon_toner_ensemble(t: CorrelationTable) -> StrategyEnsemble:
    """Exact one-way ensemble reproducing a no-signaling table.

    With ma >= mb, Bob announces his setting j (message alphabet mb, cost
    ceil(log2 mb) bits); shared randomness fixes Bob's outputs b_j over the
    support of his marginal and Alice's replies a_ij over the support of the
    conditional p(.b_j|ij).  Branch weights multiply to exactly the table.
    For ma < mb the roles swap and Alice announces.
    """
    if not check_no_signaling(t).both:
        raise SignalingError("simulation protocol requires a no-signaling table")
    sc = t.scenario
    if sc.ma >= sc.mb:
        return _announce_bob(t)
    swapped = _announce_bob(t.swap_parties())
    entries = tuple(
        (
            w,
            FixedCcStrategy(
                sc, AB, s.message_count, s.kappa, s.sender_output, s.receiver_output
            ),
        )
        for w, s in swapped.entries
    )
    return StrategyEnsemble(entries)


def _announce_bob(t: CorrelationTable) -> StrategyEnsemble:
    sc = t.scenario
    qb = marginals(t, BOB, 0).values  # [b][j]; same for every i by no-signaling
    identity = tuple(range(sc.mb))
    bob_supports = [
        [b for b in range(sc.kb) if qb[b][j] > 0] for j in range(sc.mb)
    ]
    entries = []
    for b_assign in itertools.product(*bob_supports):
        base = Fraction(1)
        for j in range(sc.mb):
            base *= qb[b_assign[j]][j]
        alice_supports = [
            [a for a in range(sc.ka) if t.p(a, b_assign[j], i, j) > 0]
            for i in range(sc.ma)
            for j in range(sc.mb)
        ]
        for a_flat in itertools.product(*alice_supports):
            weight = base
            receiver = []
            for i in range(sc.ma):
                row = []
                for j in range(sc.mb):
                    a = a_flat[i * sc.mb + j]
                    weight *= t.p(a, b_assign[j], i, j) / qb[b_assign[j]][j]
                    row.append(a)
                receiver.append(tuple(row))
            entries.append(
                (
                    weight,
                    FixedCcStrategy(
                        sc, BA, sc.mb, identity, b_assign, tuple(receiver)
                    ),
                )
            )
    return StrategyEnsemble(tuple(entries))


# --------------------------------------------------------------------------
# lower bound report
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class LowerBoundReport:
    scenario: Scenario  # scenario after any role swap
    swapped: bool
    r_bits: int
    strategy_count: int
    exhaustive_refuted: Optional[bool]  # None when the strategy grid was too large
    lp_outside: bool
    separator: Optional[LinearInequality]
    examples: tuple  # (BidirCcStrategy, CertificateTriple, violated zero) triples


def _scan_chunk(args):
    ma, mb, r_bits, start, stop, want_examples = args
    sc = Scenario(ma, mb)
    hat = hat_distribution(ma, mb)
    consistent = 0
    examples = []
    chunk = itertools.islice(iter_bidir_cc_strategies(sc, r_bits), start, stop)
    for s in chunk:
        if strategy_consistent_with_hat(s, hat):
            consistent += 1
        elif want_examples and len(examples) < 10 and 2 ** r_bits < mb and mb >= 3:
            triple = certificate_triple(s.kappa, s.sigma, mb, r_bits, s.s_bits)
            zero = violated_zero_constraint(s, triple)
            if zero is not None:
                examples.append((s, triple, zero))
    return consistent, examples


def lower_bound_report(
    ma: int,
    mb: int,
    r_bits: int,
    max_strategies: int = 2_000_000,
    workers: int = 1,
) -> LowerBoundReport:
    """Refute (or confirm) r-bit simulability of the witness, two ways.

    The exhaustive route checks every deterministic two-way strategy against
    the witness support; the LP route separates the witness point from the
    two-way vertex polytope.  The verdicts are logically linked and must
    agree; disagreement raises.
    """
    swapped = ma < mb
    if swapped:
        ma, mb = mb, ma
    sc = Scenario(ma, mb)
    hat = hat_distribution(ma, mb)

    total = count_bidir_cc_strategies(sc, r_bits)
    exhaustive_refuted: Optional[bool] = None
    examples: list = []
    if total <= max_strategies:
        consistent = 0
        if workers > 1:
            chunk_size = max(1, total // (workers * 4))
            jobs = [
                (ma, mb, r_bits, start, min(start + chunk_size, total), start == 0)
                for start in range(0, total, chunk_size)
            ]
            try:
                with ProcessPoolExecutor(max_workers=workers) as pool:
                    for part, ex in pool.map(_scan_chunk, jobs):
                        consistent += part
                        if not examples:
                            examples.extend(ex)
            except OSError:
                consistent, examples = _scan_chunk((ma, mb, r_bits, 0, total, True))
        else:
            consistent, examples = _scan_chunk((ma, mb, r_bits, 0, total, True))
        exhaustive_refuted = consistent == 0

    vertices = enumerate_bidir_cc_vertices(sc, r_bits)
    result = membership(project_bidir(hat), VRep.from_points(vertices))
    lp_outside = not result.inside
    separator = result.separator if isinstance(result, Outside) else None

    if exhaustive_refuted is not None and exhaustive_refuted != lp_outside:
        raise RuntimeError(
            "exhaustive refutation and LP separation disagree; "
            f"refuted={exhaustive_refuted} lp_outside={lp_outside}"
        )
    return LowerBoundReport(
        scenario=sc,
        swapped=swapped,
        r_bits=r_bits,
        strategy_count=total,
        exhaustive_refuted=exhaustive_refuted,
        lp_outside=lp_outside,
        separator=separator,
        examples=tuple(examples[:10]),
    )


def format_lower_bound_report(report: LowerBoundReport) -> str:
    sc = report.scenario
    lines = [
        f"lowerbound ma={sc.ma} mb={sc.mb} rbits={report.r_bits}"
        + (" (roles swapped)" if report.swapped else ""),
        f"strategies={report.strategy_count}",
    ]
    if report.exhaustive_refuted is None:
        lines.append("exhaustive=skipped (strategy grid too large; LP-only)")
    else:
        lines.append(f"exhaustive_refuted={'yes' if report.exhaustive_refuted else 'no'}")
    lines.append(f"lp_outside={'yes' if report.lp_outside else 'no'}")
    if report.separator is not None:
        q = report.separator
        lines.append(
            "separator: " + " ".join(str(c) for c in q.coeffs) + f" <= {q.bound}"
        )
    for s, triple, zero in report.examples:
        a, b, i, j = zero
        lines.append(
            f"example: s={s.s_bits} kappa={list(s.kappa)} sigma={list(s.sigma)}"
            f" alice={[list(r) for r in s.alice_output]}"
            f" bob={[list(r) for r in s.bob_output]}"
            f" triple=({triple.t0},{triple.t1},{triple.t2})"
            f" puts mass on p({a}{b}|{i}{j})=0"
        )
    return "\n".join(lines) + "\n"
