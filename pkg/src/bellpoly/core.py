"""Exact correlation tables, reduced coordinates, and linear inequalities.

All probabilities are `fractions.Fraction`; no floating point is used
anywhere, so tightness and facet membership are decided exactly.

A correlation table stores the conditional distribution p(ab|ij) of a
bipartite box with ``ma`` x ``mb`` settings and ``ka`` x ``kb`` outcomes.
For binary outcomes two reduced coordinate systems are used:

* ``fixed`` space, dimension ma*(2*mb+1).  Coordinates, in frozen order:
  qA(0|i) for i ascending, then p(00|ij) at position ma + j*ma + i, then
  p(10|ij) at position ma + ma*mb + j*ma + i.  Defined for tables whose
  Alice marginal does not depend on Bob's setting (p(01|ij) is recovered
  as qA(0|i) - p(00|ij)).
* ``bidir`` space, dimension 3*ma*mb.  Coordinates: p(00|ij) at j*ma + i,
  p(10|ij) at ma*mb + j*ma + i, p(01|ij) at 2*ma*mb + j*ma + i.  Defined
  for any normalized binary-outcome table.

The plain-text formats for tables, points, vertex lists and inequality
lists all live here so that every tool reads and writes the same bytes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Callable, Iterable, Sequence, Union

Rational = Fraction

ALICE = "A"
BOB = "B"

FIXED = "fixed"
BIDIR = "bidir"


class FormatError(ValueError):
    """Malformed content in one of the plain-text file formats."""


class SignalingError(ValueError):
    """An operation required a marginal that is not well defined."""


def parse_rational(token: str) -> Fraction:
    try:
        if "/" in token:
            num, den = token.split("/")
            return Fraction(int(num), int(den))
        return Fraction(int(token))
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"bad rational {token!r}") from exc


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True, order=True)
class Scenario:
    """Numbers of settings (ma, mb) and outcomes (ka, kb) of the two boxes."""

    ma: int
    mb: int
    ka: int = 2
    kb: int = 2

    def __post_init__(self):
        for name in ("ma", "mb", "ka", "kb"):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 1:
                raise ValueError(f"{name} must be a positive integer, got {value!r}")

    @property
    def binary(self) -> bool:
        return self.ka == 2 and self.kb == 2

    @property
    def n_entries(self) -> int:
        return self.ka * self.kb * self.ma * self.mb

    @property
    def fixed_dim(self) -> int:
        return self.ma * (2 * self.mb + 1)

    @property
    def bidir_dim(self) -> int:
        return 3 * self.ma * self.mb

    def entry_index(self, a: int, b: int, i: int, j: int) -> int:
        return ((a * self.kb + b) * self.ma + i) * self.mb + j

    def entry_tuples(self):
        """All (a, b, i, j) in flat-index order."""
        return itertools.product(
            range(self.ka), range(self.kb), range(self.ma), range(self.mb)
        )

    def swapped(self) -> "Scenario":
        return Scenario(self.mb, self.ma, self.kb, self.ka)

    def require_binary(self):
        if not self.binary:
            raise ValueError(f"operation requires ka = kb = 2, got {self}")


@dataclass(frozen=True)
class CorrelationTable:
    """Dense exact table of conditional probabilities p(ab|ij)."""

    scenario: Scenario
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        entries = tuple(Fraction(x) for x in self.entries)
        if len(entries) != self.scenario.n_entries:
            raise ValueError(
                f"expected {self.scenario.n_entries} entries, got {len(entries)}"
            )
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_function(cls, scenario: Scenario, fn: Callable[[int, int, int, int], object]):
        entries = tuple(
            Fraction(fn(a, b, i, j)) for a, b, i, j in scenario.entry_tuples()
        )
        return cls(scenario, entries)

    def p(self, a: int, b: int, i: int, j: int) -> Fraction:
        return self.entries[self.scenario.entry_index(a, b, i, j)]

    def swap_parties(self) -> "CorrelationTable":
        """The same box with the two parties' roles exchanged: p'(ab|ij) = p(ba|ji)."""
        sc = self.scenario.swapped()
        return CorrelationTable.from_function(sc, lambda a, b, i, j: self.p(b, a, j, i))


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[str, ...] = ()


def validate_table(t: CorrelationTable) -> ValidationReport:
    """Check nonnegativity and that every (i, j) slice sums to exactly 1."""
    sc = t.scenario
    violations = []
    for a, b, i, j in sc.entry_tuples():
        if t.p(a, b, i, j) < 0:
            violations.append(f"negative entry ({a},{b},{i},{j})")
    for i in range(sc.ma):
        for j in range(sc.mb):
            total = sum(t.p(a, b, i, j) for a in range(sc.ka) for b in range(sc.kb))
            if total != 1:
                violations.append(f"slice ({i},{j}) sums to {format_rational(total)}")
    return ValidationReport(ok=not violations, violations=tuple(violations))


@dataclass(frozen=True)
class Marginal:
    """One party's output distribution per own setting, values[output][setting]."""

    side: str
    values: tuple[tuple[Fraction, ...], ...]


def marginals(t: CorrelationTable, side: str, other_input: int) -> Marginal:
    """Marginal of one party computed at a specific setting of the other party."""
    sc = t.scenario
    if side == ALICE:
        if not 0 <= other_input < sc.mb:
            raise IndexError(f"Bob input {other_input} out of range")
        values = tuple(
            tuple(
                sum(t.p(a, b, i, other_input) for b in range(sc.kb))
                for i in range(sc.ma)
            )
            for a in range(sc.ka)
        )
    elif side == BOB:
        if not 0 <= other_input < sc.ma:
            raise IndexError(f"Alice input {other_input} out of range")
        values = tuple(
            tuple(
                sum(t.p(a, b, other_input, j) for a in range(sc.ka))
                for j in range(sc.mb)
            )
            for b in range(sc.kb)
        )
    else:
        raise ValueError(f"side must be {ALICE!r} or {BOB!r}, got {side!r}")
    return Marginal(side=side, values=values)


@dataclass(frozen=True)
class NoSignalingReport:
    alice_marginal_well_defined: bool
    bob_marginal_well_defined: bool

    @property
    def both(self) -> bool:
        return self.alice_marginal_well_defined and self.bob_marginal_well_defined


def check_no_signaling(t: CorrelationTable) -> NoSignalingReport:
    """True per side iff that party's marginal is the same for every far setting."""
    sc = t.scenario
    alice_ok = all(
        marginals(t, ALICE, j) == marginals(t, ALICE, 0) for j in range(1, sc.mb)
    )
    bob_ok = all(
        marginals(t, BOB, i) == marginals(t, BOB, 0) for i in range(1, sc.ma)
    )
    return NoSignalingReport(alice_ok, bob_ok)


# --------------------------------------------------------------------------
# Reduced coordinates (binary outcomes only)
# --------------------------------------------------------------------------

def fixed_index_qa(sc: Scenario, i: int) -> int:
    return i


def fixed_index_p00(sc: Scenario, i: int, j: int) -> int:
    return sc.ma + j * sc.ma + i


def fixed_index_p10(sc: Scenario, i: int, j: int) -> int:
    return sc.ma + sc.ma * sc.mb + j * sc.ma + i


def bidir_index_p00(sc: Scenario, i: int, j: int) -> int:
    return j * sc.ma + i


def bidir_index_p10(sc: Scenario, i: int, j: int) -> int:
    return sc.ma * sc.mb + j * sc.ma + i


def bidir_index_p01(sc: Scenario, i: int, j: int) -> int:
    return 2 * sc.ma * sc.mb + j * sc.ma + i


@dataclass(frozen=True)
class FixedReducedPoint:
    """Point in the one-way-communication coordinate system (dim ma*(2mb+1))."""

    scenario: Scenario
    coords: tuple[Fraction, ...]

    def __post_init__(self):
        self.scenario.require_binary()
        coords = tuple(Fraction(x) for x in self.coords)
        if len(coords) != self.scenario.fixed_dim:
            raise ValueError(
                f"expected {self.scenario.fixed_dim} coordinates, got {len(coords)}"
            )
        object.__setattr__(self, "coords", coords)

    @property
    def dimension(self) -> int:
        return len(self.coords)

    def qa0(self, i: int) -> Fraction:
        return self.coords[fixed_index_qa(self.scenario, i)]

    def p00(self, i: int, j: int) -> Fraction:
        return self.coords[fixed_index_p00(self.scenario, i, j)]

    def p10(self, i: int, j: int) -> Fraction:
        return self.coords[fixed_index_p10(self.scenario, i, j)]


@dataclass(frozen=True)
class BidirReducedPoint:
    """Point in the normalization-only coordinate system (dim 3*ma*mb)."""

    scenario: Scenario
    coords: tuple[Fraction, ...]

    def __post_init__(self):
        self.scenario.require_binary()
        coords = tuple(Fraction(x) for x in self.coords)
        if len(coords) != self.scenario.bidir_dim:
            raise ValueError(
                f"expected {self.scenario.bidir_dim} coordinates, got {len(coords)}"
            )
        object.__setattr__(self, "coords", coords)

    @property
    def dimension(self) -> int:
        return len(self.coords)

    def p00(self, i: int, j: int) -> Fraction:
        return self.coords[bidir_index_p00(self.scenario, i, j)]

    def p10(self, i: int, j: int) -> Fraction:
        return self.coords[bidir_index_p10(self.scenario, i, j)]

    def p01(self, i: int, j: int) -> Fraction:
        return self.coords[bidir_index_p01(self.scenario, i, j)]


ReducedPoint = Union[FixedReducedPoint, BidirReducedPoint]


def project_fixed(t: CorrelationTable) -> FixedReducedPoint:
    """Drop p(01) and p(11) in favor of qA(0|i); needs Alice's marginal well defined."""
    sc = t.scenario
    sc.require_binary()
    ns = check_no_signaling(t)
    if not ns.alice_marginal_well_defined:
        raise SignalingError(
            "Alice's marginal depends on Bob's setting; no fixed-space image exists"
        )
    coords = [t.p(0, 0, i, 0) + t.p(0, 1, i, 0) for i in range(sc.ma)]
    coords += [t.p(0, 0, i, j) for j in range(sc.mb) for i in range(sc.ma)]
    coords += [t.p(1, 0, i, j) for j in range(sc.mb) for i in range(sc.ma)]
    return FixedReducedPoint(sc, tuple(coords))


def lift_fixed(p: FixedReducedPoint) -> CorrelationTable:
    """Inverse of project_fixed; rejects coordinates that leave [0, 1] entries."""
    sc = p.scenario

    def entry(a, b, i, j):
        if (a, b) == (0, 0):
            value = p.p00(i, j)
        elif (a, b) == (1, 0):
            value = p.p10(i, j)
        elif (a, b) == (0, 1):
            value = p.qa0(i) - p.p00(i, j)
        else:
            value = 1 - p.qa0(i) - p.p10(i, j)
        if not 0 <= value <= 1:
            raise ValueError(
                f"lift produces p({a}{b}|{i}{j}) = {format_rational(value)} outside [0,1]"
            )
        return value

    return CorrelationTable.from_function(sc, entry)


def project_bidir(t: CorrelationTable) -> BidirReducedPoint:
    """Keep p(00), p(10), p(01); p(11) is recovered from normalization."""
    sc = t.scenario
    sc.require_binary()
    coords = [t.p(0, 0, i, j) for j in range(sc.mb) for i in range(sc.ma)]
    coords += [t.p(1, 0, i, j) for j in range(sc.mb) for i in range(sc.ma)]
    coords += [t.p(0, 1, i, j) for j in range(sc.mb) for i in range(sc.ma)]
    return BidirReducedPoint(sc, tuple(coords))


def lift_bidir(p: BidirReducedPoint) -> CorrelationTable:
    sc = p.scenario

    def entry(a, b, i, j):
        if (a, b) == (0, 0):
            value = p.p00(i, j)
        elif (a, b) == (1, 0):
            value = p.p10(i, j)
        elif (a, b) == (0, 1):
            value = p.p01(i, j)
        else:
            value = 1 - p.p00(i, j) - p.p10(i, j) - p.p01(i, j)
        if not 0 <= value <= 1:
            raise ValueError(
                f"lift produces p({a}{b}|{i}{j}) = {format_rational(value)} outside [0,1]"
            )
        return value

    return CorrelationTable.from_function(sc, entry)


# --------------------------------------------------------------------------
# Linear inequalities
# --------------------------------------------------------------------------

def _gcd_all(values: Iterable[int]) -> int:
    g = 0
    for v in values:
        g = gcd(g, abs(v))
    return g


@dataclass(frozen=True)
class LinearInequality:
    """coeffs . x <= bound with integer entries, divided by their positive gcd."""

    coeffs: tuple[int, ...]
    bound: int

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coeffs)
        bound = int(self.bound)
        if not any(coeffs):
            raise ValueError("inequality must have at least one nonzero coefficient")
        g = _gcd_all(coeffs + (bound,))
        if g > 1:
            coeffs = tuple(c // g for c in coeffs)
            bound //= g
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "bound", bound)

    @property
    def dimension(self) -> int:
        return len(self.coeffs)

    def key(self) -> tuple:
        return self.coeffs + (self.bound,)


@dataclass(frozen=True)
class LinearEquation:
    """coeffs . x = value; normalized so the first nonzero coefficient is positive."""

    coeffs: tuple[int, ...]
    value: int

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coeffs)
        value = int(self.value)
        if not any(coeffs):
            raise ValueError("equation must have at least one nonzero coefficient")
        g = _gcd_all(coeffs + (value,))
        if g > 1:
            coeffs = tuple(c // g for c in coeffs)
            value //= g
        first = next(c for c in coeffs if c != 0)
        if first < 0:
            coeffs = tuple(-c for c in coeffs)
            value = -value
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "value", value)


@dataclass(frozen=True)
class InequalityEvaluation:
    value: Fraction
    satisfied: bool
    tight: bool


def evaluate_inequality(q: LinearInequality, x) -> InequalityEvaluation:
    """Exact value of coeffs . x against the bound; x is a reduced point or vector."""
    coords = x.coords if hasattr(x, "coords") else tuple(Fraction(c) for c in x)
    if len(coords) != len(q.coeffs):
        raise ValueError(f"dimension mismatch: {len(q.coeffs)} vs {len(coords)}")
    value = sum(c * v for c, v in zip(q.coeffs, coords))
    return InequalityEvaluation(
        value=value, satisfied=value <= q.bound, tight=value == q.bound
    )


# --------------------------------------------------------------------------
# Plain-text formats
# --------------------------------------------------------------------------

def format_table(t: CorrelationTable) -> str:
    sc = t.scenario
    lines = [f"scenario {sc.ma} {sc.mb} {sc.ka} {sc.kb}"]
    for a, b, i, j in sc.entry_tuples():
        value = t.p(a, b, i, j)
        if value != 0:
            lines.append(f"p {a} {b} {i} {j} = {format_rational(value)}")
    return "\n".join(lines) + "\n"


def parse_table(text: str) -> CorrelationTable:
    lines = [line.strip() for line in text.splitlines() if line.strip()]
    if not lines:
        raise FormatError("empty table file")
    head = lines[0].split()
    if len(head) != 5 or head[0] != "scenario":
        raise FormatError(f"bad table header {lines[0]!r}")
    try:
        ma, mb, ka, kb = (int(x) for x in head[1:])
        sc = Scenario(ma, mb, ka, kb)
    except ValueError as exc:
        raise FormatError(f"bad table header {lines[0]!r}") from exc
    entries = [Fraction(0)] * sc.n_entries
    for line in lines[1:]:
        parts = line.split()
        if len(parts) != 7 or parts[0] != "p" or parts[5] != "=":
            raise FormatError(f"bad table entry line {line!r}")
        try:
            a, b, i, j = (int(x) for x in parts[1:5])
        except ValueError as exc:
            raise FormatError(f"bad table entry line {line!r}") from exc
        if not (0 <= a < ka and 0 <= b < kb and 0 <= i < ma and 0 <= j < mb):
            raise FormatError(f"indices out of range in {line!r}")
        entries[sc.entry_index(a, b, i, j)] = parse_rational(parts[6])
    return CorrelationTable(sc, tuple(entries))


def _space_of_point(p: ReducedPoint) -> str:
    return FIXED if isinstance(p, FixedReducedPoint) else BIDIR


def format_point(p: ReducedPoint) -> str:
    sc = p.scenario
    coords = " ".join(format_rational(c) for c in p.coords)
    return f"point {_space_of_point(p)} {sc.ma} {sc.mb}\n{coords}\n"


def parse_point(text: str) -> ReducedPoint:
    lines = [line.strip() for line in text.splitlines() if line.strip()]
    if not lines:
        raise FormatError("empty point file")
    head = lines[0].split()
    if len(head) != 4 or head[0] != "point" or head[1] not in (FIXED, BIDIR):
        raise FormatError(f"bad point header {lines[0]!r}")
    try:
        sc = Scenario(int(head[2]), int(head[3]))
    except ValueError as exc:
        raise FormatError(f"bad point header {lines[0]!r}") from exc
    coords = tuple(parse_rational(tok) for line in lines[1:] for tok in line.split())
    cls = FixedReducedPoint if head[1] == FIXED else BidirReducedPoint
    try:
        return cls(sc, coords)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def format_vertex_file(points: Sequence[ReducedPoint], rbits: int) -> str:
    if not points:
        raise ValueError("vertex list must be nonempty")
    space = _space_of_point(points[0])
    sc = points[0].scenario
    for p in points:
        if _space_of_point(p) != space or p.scenario != sc:
            raise ValueError("vertex list mixes spaces or scenarios")
    lines = [f"vertices {space} {sc.ma} {sc.mb} {rbits} {len(points)}"]
    for p in points:
        lines.append(" ".join(format_rational(c) for c in p.coords))
    return "\n".join(lines) + "\n"


def parse_vertex_file(text: str):
    """Returns (space, scenario, rbits, list of reduced points)."""
    lines = [line.strip() for line in text.splitlines() if line.strip()]
    if not lines:
        raise FormatError("empty vertex file")
    head = lines[0].split()
    if len(head) != 6 or head[0] != "vertices" or head[1] not in (FIXED, BIDIR):
        raise FormatError(f"bad vertex header {lines[0]!r}")
    try:
        sc = Scenario(int(head[2]), int(head[3]))
        rbits, count = int(head[4]), int(head[5])
    except ValueError as exc:
        raise FormatError(f"bad vertex header {lines[0]!r}") from exc
    if len(lines) - 1 != count:
        raise FormatError(f"vertex header promises {count} rows, found {len(lines) - 1}")
    cls = FixedReducedPoint if head[1] == FIXED else BidirReducedPoint
    points = []
    for line in lines[1:]:
        coords = tuple(parse_rational(tok) for tok in line.split())
        try:
            points.append(cls(sc, coords))
        except ValueError as exc:
            raise FormatError(str(exc)) from exc
    return head[1], sc, rbits, points


def format_inequality_file(
    space: str,
    sc: Scenario,
    inequalities: Sequence[LinearInequality],
    equations: Sequence[LinearEquation] = (),
) -> str:
    count = len(inequalities) + len(equations)
    lines = [f"ineq {space} {sc.ma} {sc.mb} {count}"]
    for q in inequalities:
        lines.append(" ".join(str(c) for c in q.coeffs) + f" <= {q.bound}")
    for e in equations:
        lines.append(" ".join(str(c) for c in e.coeffs) + f" = {e.value}")
    return "\n".join(lines) + "\n"


def parse_inequality_file(text: str):
    """Returns (space, scenario, list of inequalities, list of equations)."""
    lines = [line.strip() for line in text.splitlines() if line.strip()]
    if not lines:
        raise FormatError("empty inequality file")
    head = lines[0].split()
    if len(head) != 5 or head[0] != "ineq" or head[1] not in (FIXED, BIDIR):
        raise FormatError(f"bad inequality header {lines[0]!r}")
    try:
        sc = Scenario(int(head[2]), int(head[3]))
        count = int(head[4])
    except ValueError as exc:
        raise FormatError(f"bad inequality header {lines[0]!r}") from exc
    if len(lines) - 1 != count:
        raise FormatError(f"header promises {count} rows, found {len(lines) - 1}")
    dim = sc.fixed_dim if head[1] == FIXED else sc.bidir_dim
    inequalities, equations = [], []
    for line in lines[1:]:
        parts = line.split()
        if "<=" in parts:
            sep = parts.index("<=")
            kind = "ineq"
        elif "=" in parts:
            sep = parts.index("=")
            kind = "eq"
        else:
            raise FormatError(f"row {line!r} has no <= or = separator")
        if sep != len(parts) - 2:
            raise FormatError(f"row {line!r} must end with the bound")
        try:
            coeffs = tuple(int(x) for x in parts[:sep])
            rhs = int(parts[-1])
        except ValueError as exc:
            raise FormatError(f"bad integers in row {line!r}") from exc
        if len(coeffs) != dim:
            raise FormatError(f"row has {len(coeffs)} coefficients, expected {dim}")
        if kind == "ineq":
            inequalities.append(LinearInequality(coeffs, rhs))
        else:
            equations.append(LinearEquation(coeffs, rhs))
    return head[1], sc, inequalities, equations
