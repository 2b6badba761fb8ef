"""Grading groups, homogeneous degrees, and commutation factors.

The grading group is a finitely generated abelian group

    ``Z^r  x  Z_{m_1} x ... x Z_{m_s}``

whose elements index the homogeneous components of every vector space and
map in the package.  A commutation factor is a map ``eps : G x G -> Q*``
that is multiplicative in each slot and satisfies ``eps(a,b) eps(b,a) = 1``;
it controls every sign in skew symmetry, Jacobi identities and the cochain
calculus.  Because eps is biadditive it is determined by its values on
pairs of generators, which is how it is stored; torsion compatibility
(``eps(g_i, .)^{m_i} = 1`` for a torsion generator of order ``m_i``) makes
the generator table well defined on the whole group.

Over the rationals a torsion-constrained table entry can only be +1 or -1;
factors valued in roots of unity beyond that would need a field extension
and are out of scope.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .errors import StructureError
from .report import Report

ONE = Fraction(1)


def parse_scalar(text) -> Fraction:
    """Parse ``"p/q"`` or ``"n"`` (or an int) into an exact rational."""
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, Fraction):
        return text
    if not isinstance(text, str):
        raise StructureError(f"scalar must be a string or integer, got {type(text).__name__}")
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise StructureError(f"malformed scalar {text!r}: {exc}") from None


def format_scalar(x: Fraction) -> str:
    """Canonical text form: ``"n"`` for integers, else ``"p/q"`` in lowest terms."""
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class GradingGroup:
    """``Z^free_rank x Z_{m_1} x ... x Z_{m_s}`` with componentwise arithmetic."""

    free_rank: int
    torsion_orders: tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise StructureError("free rank must be nonnegative")
        object.__setattr__(self, "torsion_orders", tuple(int(m) for m in self.torsion_orders))
        if any(m < 2 for m in self.torsion_orders):
            raise StructureError("torsion orders must be >= 2")

    @property
    def num_generators(self) -> int:
        return self.free_rank + len(self.torsion_orders)

    def reduce(self, coords) -> tuple[int, ...]:
        coords = tuple(int(c) for c in coords)
        if len(coords) != self.num_generators:
            raise StructureError(
                f"degree has {len(coords)} coordinates, group has {self.num_generators} generators"
            )
        r = self.free_rank
        return coords[:r] + tuple(c % m for c, m in zip(coords[r:], self.torsion_orders))

    def degree(self, *coords) -> "Degree":
        if len(coords) == 1 and isinstance(coords[0], (list, tuple)):
            coords = tuple(coords[0])
        return Degree(self, self.reduce(coords))

    @property
    def zero(self) -> "Degree":
        return Degree(self, (0,) * self.num_generators)

    def elements(self, free_box: int = 0):
        """Iterate the group: all of it when purely torsion, else the box
        ``[-free_box, free_box]`` in each free slot (biadditivity makes box
        testing conclusive for the polynomial identities we check)."""
        ranges = [range(-free_box, free_box + 1)] * self.free_rank
        ranges += [range(m) for m in self.torsion_orders]
        for coords in product(*ranges):
            yield Degree(self, self.reduce(coords))

    def is_trivial(self) -> bool:
        return self.num_generators == 0

    def to_dict(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion_orders)}


@dataclass(frozen=True)
class Degree:
    """A homogeneous degree: an element of the grading group.

    Torsion coordinates are kept reduced to ``[0, m_i)`` by construction.
    """

    group: GradingGroup
    coords: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", self.group.reduce(self.coords))

    def _check_same_group(self, other: "Degree") -> None:
        if self.group != other.group:
            raise StructureError("degrees belong to different grading groups")

    def __add__(self, other: "Degree") -> "Degree":
        self._check_same_group(other)
        return Degree(self.group, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "Degree":
        return Degree(self.group, tuple(-a for a in self.coords))

    def __sub__(self, other: "Degree") -> "Degree":
        return self + (-other)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __repr__(self):
        return f"Degree{self.coords}"


def degree_add(a: Degree, b: Degree) -> Degree:
    return a + b


def degree_sum(group: GradingGroup, degrees) -> Degree:
    total = group.zero
    for d in degrees:
        total = total + d
    return total


class CommutationFactor:
    """A commutation factor given by its generator table.

    ``gen_table[i][j]`` is the value on the pair of group generators
    ``(g_i, g_j)``; general values follow by biadditivity:

        ``eps(a, b) = prod_{i,j} gen_table[i][j] ** (a_i * b_j)``.

    Construction only checks shape and nonzeroness; run
    :func:`epsilon_validate` (or pass ``check=True``) for the axioms.
    """

    def __init__(self, group: GradingGroup, gen_table, check: bool = False):
        self.group = group
        n = group.num_generators
        table = [[Fraction(x) for x in row] for row in gen_table]
        if len(table) != n or any(len(row) != n for row in table):
            raise StructureError(f"generator table must be {n}x{n}")
        if any(x == 0 for row in table for x in row):
            raise StructureError("commutation factor values must be nonzero")
        self.gen_table = tuple(tuple(row) for row in table)
        if check:
            rep = epsilon_validate(self)
            if not rep.passed:
                failed = [c.name for c in rep.checks if not c.passed]
                raise StructureError(f"invalid commutation factor: {', '.join(failed)}")

    @classmethod
    def trivial(cls, group: GradingGroup) -> "CommutationFactor":
        n = group.num_generators
        return cls(group, [[ONE] * n for _ in range(n)])

    @classmethod
    def super_sign(cls) -> "CommutationFactor":
        """The Lie-superalgebra factor on Z_2: ``eps(a,b) = (-1)^{ab}``."""
        return cls(GradingGroup(0, (2,)), [[Fraction(-1)]])

    def __call__(self, a: Degree, b: Degree) -> Fraction:
        return epsilon_eval(self, a, b)

    def __eq__(self, other):
        return (
            isinstance(other, CommutationFactor)
            and self.group == other.group
            and self.gen_table == other.gen_table
        )

    def to_dict(self) -> dict:
        return [[format_scalar(x) for x in row] for row in self.gen_table]


def epsilon_eval(eps: CommutationFactor, a: Degree, b: Degree) -> Fraction:
    """``eps(a, b)`` by biadditivity from the generator table."""
    if a.group != eps.group or b.group != eps.group:
        raise StructureError("degrees do not belong to the commutation factor's group")
    value = ONE
    for i, ai in enumerate(a.coords):
        if not ai:
            continue
        for j, bj in enumerate(b.coords):
            if not bj:
                continue
            value *= eps.gen_table[i][j] ** (ai * bj)
    return value


def epsilon_validate(eps: CommutationFactor) -> Report:
    """Check the commutation-factor axioms on the generator table.

    Multiplicativity in each slot holds by construction of
    :func:`epsilon_eval`, so the report marks it structurally guaranteed;
    the substantive finite checks are reciprocity on generators, torsion
    compatibility, and the forced +-1 diagonal.
    """
    rep = Report()
    table = eps.gen_table
    n = eps.group.num_generators
    r = eps.group.free_rank
    orders = eps.group.torsion_orders

    bad = [
        (i, j)
        for i in range(n)
        for j in range(n)
        if table[i][j] * table[j][i] != 1
    ]
    rep.add("epsilon_reciprocity", not bad, [{"pair": p} for p in bad],
            detail="eps(g_i,g_j) * eps(g_j,g_i) = 1 on generators")

    bad = []
    for t, m in enumerate(orders):
        i = r + t
        for j in range(n):
            if table[i][j] ** m != 1:
                bad.append({"pair": (i, j), "order": m})
            if table[j][i] ** m != 1:
                bad.append({"pair": (j, i), "order": m})
    rep.add("epsilon_torsion_compatibility", not bad, bad,
            detail="values at a torsion generator are m-th roots of unity")

    bad = [{"index": i, "value": format_scalar(table[i][i])}
           for i in range(n) if table[i][i] not in (1, -1)]
    rep.add("epsilon_diagonal_sign", not bad, bad,
            detail="eps(g_i,g_i) must be +1 or -1")

    rep.add("epsilon_biadditivity", True,
            detail="holds by construction: values derived from the generator table",
            informational=True)
    return rep
