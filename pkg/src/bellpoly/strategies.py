"""Deterministic strategies and vertex enumeration for the three box models.

A model's achievable tables form a polytope whose vertices come from
deterministic strategies:

* plain shared randomness (``LsrStrategy``): outputs depend only on the own
  setting, a = alpha(i), b = beta(j);
* one-way communication (``FixedCcStrategy``): the sender transmits a message
  kappa(setting) from an alphabet of size L, the receiver's output may depend
  on it; cost is ceil(log2 L) bits;
* two-way communication (``BidirCcStrategy``): Alice sends s bits, Bob sends
  r - s bits, and each output may depend on the received message.

Only the groupings kappa^-1(message) matter for the achievable tables, never
the message labels, so one-way enumeration runs over set partitions of the
sender's settings with at most min(2^r, #settings) blocks; the number of
partitions into exactly B blocks is the Stirling partition number S(n, B).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence, Union

from .core import (
    ALICE,
    BOB,
    BidirReducedPoint,
    CorrelationTable,
    FixedReducedPoint,
    Scenario,
    project_bidir,
    project_fixed,
)

AB = "AB"
BA = "BA"


def stirling_second_kind(n: int, k: int) -> int:
    """Partitions of an n-set into exactly k nonempty blocks."""
    if n < 0 or k < 0:
        raise ValueError("n and k must be nonnegative")
    if k > n:
        return 0
    if n == 0:
        return 1  # k == 0 here
    if k == 0:
        return 0
    row = [1] + [0] * k  # row for n' = 0: S(0, 0) = 1
    for _ in range(n):
        new = [0] * (k + 1)
        for b in range(1, k + 1):
            new[b] = b * row[b] + row[b - 1]
        row = new
    return row[k]


@dataclass(frozen=True)
class Grouping:
    """Partition of {0..m-1} into nonempty blocks, listed by ascending leader."""

    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        blocks = tuple(tuple(sorted(block)) for block in self.blocks)
        if any(not block for block in blocks):
            raise ValueError("empty block")
        elements = [e for block in blocks for e in block]
        if sorted(elements) != list(range(len(elements))):
            raise ValueError("blocks must partition a range {0..m-1} disjointly")
        blocks = tuple(sorted(blocks, key=lambda block: block[0]))
        object.__setattr__(self, "blocks", blocks)

    @property
    def m(self) -> int:
        return sum(len(block) for block in self.blocks)

    def block_of(self) -> tuple[int, ...]:
        """Map element -> block id (blocks numbered by ascending leader)."""
        out = [0] * self.m
        for idx, block in enumerate(self.blocks):
            for e in block:
                out[e] = idx
        return tuple(out)


def enumerate_groupings(m: int, max_blocks: int) -> list[Grouping]:
    """All partitions of {0..m-1} into at most max_blocks blocks.

    Order is the lexicographic order of block-id strings (element 0 always
    opens block 0, and a new block may only be opened by the smallest unused
    element), so the output is deterministic and leader-sorted.
    """
    if m < 1 or max_blocks < 1:
        raise ValueError("m and max_blocks must be >= 1")
    cap = min(max_blocks, m)
    out: list[Grouping] = []

    def extend(assign: list[int], nblocks: int):
        if len(assign) == m:
            blocks = [[] for _ in range(nblocks)]
            for element, b in enumerate(assign):
                blocks[b].append(element)
            out.append(Grouping(tuple(tuple(block) for block in blocks)))
            return
        for b in range(nblocks):
            assign.append(b)
            extend(assign, nblocks)
            assign.pop()
        if nblocks < cap:
            assign.append(nblocks)
            extend(assign, nblocks + 1)
            assign.pop()

    extend([0], 1)
    return out


@dataclass(frozen=True)
class LsrStrategy:
    scenario: Scenario
    alpha: tuple[int, ...]  # Alice setting -> output
    beta: tuple[int, ...]  # Bob setting -> output

    def __post_init__(self):
        sc = self.scenario
        alpha = tuple(self.alpha)
        beta = tuple(self.beta)
        if len(alpha) != sc.ma or any(not 0 <= a < sc.ka for a in alpha):
            raise ValueError("alpha must map every Alice setting to an output")
        if len(beta) != sc.mb or any(not 0 <= b < sc.kb for b in beta):
            raise ValueError("beta must map every Bob setting to an output")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)


@dataclass(frozen=True)
class FixedCcStrategy:
    """One-way communication: sender announces kappa(setting) in {0..L-1}."""

    scenario: Scenario
    direction: str  # AB: Alice sends, BA: Bob sends
    message_count: int
    kappa: tuple[int, ...]  # sender setting -> message
    sender_output: tuple[int, ...]
    receiver_output: tuple[tuple[int, ...], ...]  # [receiver setting][message]

    def __post_init__(self):
        sc = self.scenario
        if self.direction not in (AB, BA):
            raise ValueError(f"direction must be {AB!r} or {BA!r}")
        m_send, k_send = (sc.ma, sc.ka) if self.direction == AB else (sc.mb, sc.kb)
        m_recv, k_recv = (sc.mb, sc.kb) if self.direction == AB else (sc.ma, sc.ka)
        kappa = tuple(self.kappa)
        sender_output = tuple(self.sender_output)
        receiver_output = tuple(tuple(row) for row in self.receiver_output)
        if len(kappa) != m_send or any(not 0 <= x < self.message_count for x in kappa):
            raise ValueError("kappa must map every sender setting into the alphabet")
        if len(sender_output) != m_send or any(not 0 <= x < k_send for x in sender_output):
            raise ValueError("sender_output out of range")
        if len(receiver_output) != m_recv or any(
            len(row) != self.message_count or any(not 0 <= x < k_recv for x in row)
            for row in receiver_output
        ):
            raise ValueError("receiver_output must cover every (setting, message)")
        object.__setattr__(self, "kappa", kappa)
        object.__setattr__(self, "sender_output", sender_output)
        object.__setattr__(self, "receiver_output", receiver_output)

    @property
    def bit_cost(self) -> int:
        return (self.message_count - 1).bit_length()


@dataclass(frozen=True)
class BidirCcStrategy:
    """Two-way communication: Alice sends s bits, Bob sends r - s bits."""

    scenario: Scenario
    s_bits: int
    r_bits: int
    kappa: tuple[int, ...]  # Alice setting -> message in {0..2^s-1}
    sigma: tuple[int, ...]  # Bob setting -> message in {0..2^(r-s)-1}
    alice_output: tuple[tuple[int, ...], ...]  # [Alice setting][received sigma msg]
    bob_output: tuple[tuple[int, ...], ...]  # [Bob setting][received kappa msg]

    def __post_init__(self):
        sc = self.scenario
        if not 0 <= self.s_bits <= self.r_bits:
            raise ValueError("need 0 <= s_bits <= r_bits")
        n_a, n_b = 2 ** self.s_bits, 2 ** (self.r_bits - self.s_bits)
        kappa = tuple(self.kappa)
        sigma = tuple(self.sigma)
        alice_output = tuple(tuple(row) for row in self.alice_output)
        bob_output = tuple(tuple(row) for row in self.bob_output)
        if len(kappa) != sc.ma or any(not 0 <= x < n_a for x in kappa):
            raise ValueError("kappa out of range")
        if len(sigma) != sc.mb or any(not 0 <= x < n_b for x in sigma):
            raise ValueError("sigma out of range")
        if len(alice_output) != sc.ma or any(
            len(row) != n_b or any(not 0 <= x < sc.ka for x in row)
            for row in alice_output
        ):
            raise ValueError("alice_output must cover every (setting, message)")
        if len(bob_output) != sc.mb or any(
            len(row) != n_a or any(not 0 <= x < sc.kb for x in row)
            for row in bob_output
        ):
            raise ValueError("bob_output must cover every (setting, message)")
        object.__setattr__(self, "kappa", kappa)
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "alice_output", alice_output)
        object.__setattr__(self, "bob_output", bob_output)


Strategy = Union[LsrStrategy, FixedCcStrategy, BidirCcStrategy]


def strategy_to_table(s: Strategy) -> CorrelationTable:
    """The deterministic 0/1 table a strategy produces."""
    sc = s.scenario
    if isinstance(s, LsrStrategy):
        fn = lambda a, b, i, j: int(a == s.alpha[i] and b == s.beta[j])
    elif isinstance(s, FixedCcStrategy):
        if s.direction == AB:
            fn = lambda a, b, i, j: int(
                a == s.sender_output[i] and b == s.receiver_output[j][s.kappa[i]]
            )
        else:
            fn = lambda a, b, i, j: int(
                b == s.sender_output[j] and a == s.receiver_output[i][s.kappa[j]]
            )
    elif isinstance(s, BidirCcStrategy):
        fn = lambda a, b, i, j: int(
            a == s.alice_output[i][s.sigma[j]] and b == s.bob_output[j][s.kappa[i]]
        )
    else:
        raise TypeError(f"unknown strategy type {type(s).__name__}")
    return CorrelationTable.from_function(sc, fn)


def enumerate_lsr_vertices(sc: Scenario) -> list[CorrelationTable]:
    """All ka^ma * kb^mb deterministic product tables, in (alpha, beta) order."""
    tables = []
    for alpha in itertools.product(range(sc.ka), repeat=sc.ma):
        for beta in itertools.product(range(sc.kb), repeat=sc.mb):
            tables.append(strategy_to_table(LsrStrategy(sc, alpha, beta)))
    return tables


def iter_fixed_cc_strategies(
    sc: Scenario, direction: str, r_bits: int
) -> Iterator[FixedCcStrategy]:
    """All one-way strategies, one representative per sender grouping.

    The message alphabet is capped at min(2^r, #sender settings): coarser
    groupings reproduce points that finer ones also generate, but keeping
    them is harmless after deduplication and covers r >= log2(m) uniformly.
    """
    if r_bits < 0:
        raise ValueError("r_bits must be >= 0")
    if direction not in (AB, BA):
        raise ValueError(f"direction must be {AB!r} or {BA!r}")
    m_send, k_send = (sc.ma, sc.ka) if direction == AB else (sc.mb, sc.kb)
    m_recv, k_recv = (sc.mb, sc.kb) if direction == AB else (sc.ma, sc.ka)
    cap = min(2 ** r_bits, m_send)
    for grouping in enumerate_groupings(m_send, cap):
        n_blocks = len(grouping.blocks)
        kappa = grouping.block_of()
        for sender_output in itertools.product(range(k_send), repeat=m_send):
            for recv_flat in itertools.product(range(k_recv), repeat=m_recv * n_blocks):
                receiver_output = tuple(
                    recv_flat[y * n_blocks : (y + 1) * n_blocks] for y in range(m_recv)
                )
                yield FixedCcStrategy(
                    sc, direction, n_blocks, kappa, sender_output, receiver_output
                )


def enumerate_fixed_cc_vertices(
    sc: Scenario, direction: str, r_bits: int
) -> list[FixedReducedPoint]:
    """Deduplicated one-way polytope vertices, sorted by coordinate vector.

    For direction AB the points live in the fixed space of ``sc`` itself.
    For direction BA the sender is Bob and Alice's output may depend on
    Bob's setting, so such tables have no fixed-space image over ``sc``;
    the points are returned in the mirrored fixed space (parties swapped,
    scenario (mb, ma)), where the projection is always defined.
    """
    sc.require_binary()
    seen = {}
    for s in iter_fixed_cc_strategies(sc, direction, r_bits):
        table = strategy_to_table(s)
        if direction == BA:
            table = table.swap_parties()
        point = project_fixed(table)
        seen[point.coords] = point
    return [seen[c] for c in sorted(seen)]


def iter_bidir_cc_strategies(sc: Scenario, r_bits: int) -> Iterator[BidirCcStrategy]:
    """All two-way strategies over every split s + (r - s) of the bit budget."""
    if r_bits < 0:
        raise ValueError("r_bits must be >= 0")
    for s_bits in range(r_bits + 1):
        n_a, n_b = 2 ** s_bits, 2 ** (r_bits - s_bits)
        for kappa in itertools.product(range(n_a), repeat=sc.ma):
            for sigma in itertools.product(range(n_b), repeat=sc.mb):
                for a_flat in itertools.product(range(sc.ka), repeat=sc.ma * n_b):
                    alice_output = tuple(
                        a_flat[i * n_b : (i + 1) * n_b] for i in range(sc.ma)
                    )
                    for b_flat in itertools.product(range(sc.kb), repeat=sc.mb * n_a):
                        bob_output = tuple(
                            b_flat[j * n_a : (j + 1) * n_a] for j in range(sc.mb)
                        )
                        yield BidirCcStrategy(
                            sc, s_bits, r_bits, kappa, sigma, alice_output, bob_output
                        )


def count_bidir_cc_strategies(sc: Scenario, r_bits: int) -> int:
    total = 0
    for s_bits in range(r_bits + 1):
        n_a, n_b = 2 ** s_bits, 2 ** (r_bits - s_bits)
        total += (
            n_a ** sc.ma
            * n_b ** sc.mb
            * sc.ka ** (sc.ma * n_b)
            * sc.kb ** (sc.mb * n_a)
        )
    return total


def enumerate_bidir_cc_vertices(sc: Scenario, r_bits: int) -> list[BidirReducedPoint]:
    """Deduplicated two-way polytope vertices, sorted by coordinate vector."""
    sc.require_binary()
    seen = {}
    for s in iter_bidir_cc_strategies(sc, r_bits):
        point = project_bidir(strategy_to_table(s))
        seen[point.coords] = point
    return [seen[c] for c in sorted(seen)]


def to_bidir(s: FixedCcStrategy) -> BidirCcStrategy:
    """View a one-way strategy as a two-way strategy with an idle channel."""
    sc = s.scenario
    bits = s.bit_cost
    if s.direction == AB:
        return BidirCcStrategy(
            sc,
            s_bits=bits,
            r_bits=bits,
            kappa=s.kappa,
            sigma=(0,) * sc.mb,
            alice_output=tuple((a,) for a in s.sender_output),
            bob_output=tuple(
                tuple(row[m] if m < s.message_count else row[0] for m in range(2 ** bits))
                for row in s.receiver_output
            ),
        )
    return BidirCcStrategy(
        sc,
        s_bits=0,
        r_bits=bits,
        kappa=(0,) * sc.ma,
        sigma=s.kappa,
        alice_output=tuple(
            tuple(row[m] if m < s.message_count else row[0] for m in range(2 ** bits))
            for row in s.receiver_output
        ),
        bob_output=tuple((b,) for b in s.sender_output),
    )


@dataclass(frozen=True)
class StrategyEnsemble:
    """Convex mixture of deterministic strategies of one scenario and model."""

    entries: tuple[tuple[Fraction, "Strategy"], ...]

    def __post_init__(self):
        entries = tuple((Fraction(w), s) for w, s in self.entries)
        if not entries:
            raise ValueError("ensemble must have at least one entry")
        if any(w <= 0 for w, _ in entries):
            raise ValueError("ensemble weights must be positive")
        if sum(w for w, _ in entries) != 1:
            raise ValueError("ensemble weights must sum to exactly 1")
        scenario = entries[0][1].scenario
        model = type(entries[0][1])
        if any(s.scenario != scenario or type(s) is not model for _, s in entries):
            raise ValueError("all strategies must share one scenario and model")
        object.__setattr__(self, "entries", entries)

    @property
    def scenario(self) -> Scenario:
        return self.entries[0][1].scenario


def ensemble_to_table(e: StrategyEnsemble) -> CorrelationTable:
    """Entrywise convex combination of the member tables."""
    sc = e.scenario
    acc = [Fraction(0)] * sc.n_entries
    for weight, strategy in e.entries:
        table = strategy_to_table(strategy)
        for idx, value in enumerate(table.entries):
            if value:
                acc[idx] += weight * value
    return CorrelationTable(sc, tuple(acc))
