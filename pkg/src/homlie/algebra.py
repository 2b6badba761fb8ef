"""The central object: a graded algebra with an eps-skew bracket and a twist.

An algebra here is a quadruple (vector space, bracket, commutation factor,
twist map): a finite graded basis, structure constants for the bracket, a
commutation factor on the grading group, and a degree-zero linear twist
``alpha``.  Setting the grading trivial and ``alpha = id`` recovers
ordinary Lie algebras; a Z_2 grading with the super sign recovers Lie
superalgebras; ``alpha = id`` with a general factor recovers color Lie
algebras.

Construction is deliberately permissive about the *mathematical* axioms:
the loader enforces structural consistency (shapes, unique names, no
contradictory double definitions, degree-zero twist) and completes missing
mirror pairs by skew symmetry, while the grading axiom, skew symmetry,
the twisted Jacobi identity and multiplicativity of the twist are verified
by separate checkers that report located witnesses instead of raising.
This is what lets tests and the CLI validate *invalid* inputs usefully.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .errors import StructureError
from .grading import CommutationFactor, Degree, GradingGroup, epsilon_validate, format_scalar
from .report import Report

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class BasisElement:
    name: str
    degree: Degree


class GradedVector:
    """Sparse vector over an algebra basis; zero coefficients are never stored."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        self.coeffs = {}
        if coeffs:
            for i, c in dict(coeffs).items():
                c = Fraction(c)
                if c:
                    self.coeffs[int(i)] = c

    @classmethod
    def basis(cls, i: int) -> "GradedVector":
        return cls({i: ONE})

    @classmethod
    def zero(cls) -> "GradedVector":
        return cls()

    def is_zero(self) -> bool:
        return not self.coeffs

    def items(self):
        return sorted(self.coeffs.items())

    def __getitem__(self, i: int) -> Fraction:
        return self.coeffs.get(i, ZERO)

    def __add__(self, other: "GradedVector") -> "GradedVector":
        out = dict(self.coeffs)
        for i, c in other.coeffs.items():
            out[i] = out.get(i, ZERO) + c
        return GradedVector(out)

    def __sub__(self, other: "GradedVector") -> "GradedVector":
        return self + other.scale(Fraction(-1))

    def scale(self, c) -> "GradedVector":
        c = Fraction(c)
        if not c:
            return GradedVector()
        return GradedVector({i: c * v for i, v in self.coeffs.items()})

    def __eq__(self, other):
        return isinstance(other, GradedVector) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(self.items()))

    def __repr__(self):
        if not self.coeffs:
            return "GradedVector(0)"
        parts = [f"{format_scalar(c)}*e{i}" for i, c in self.items()]
        return "GradedVector(" + " + ".join(parts) + ")"

    def to_dense(self, dim: int) -> list:
        out = [ZERO] * dim
        for i, c in self.coeffs.items():
            out[i] = c
        return out

    @classmethod
    def from_dense(cls, column) -> "GradedVector":
        return cls({i: c for i, c in enumerate(column) if c})


def apply_matrix(matrix, vec: GradedVector) -> GradedVector:
    """Apply a dense matrix (column-action: e_j -> sum_i m[i][j] e_i)."""
    out: dict[int, Fraction] = {}
    for j, c in vec.coeffs.items():
        for i in range(len(matrix)):
            m = matrix[i][j]
            if m:
                out[i] = out.get(i, ZERO) + c * m
    return GradedVector(out)


class ColorHomLieAlgebra:
    """Graded basis + structure constants + commutation factor + twist.

    ``structure`` maps ordered index pairs to bracket values; pairs not
    stored are derived from the mirror pair by skew symmetry, and diagonal
    pairs default to zero.  ``alpha`` is a dense square matrix acting by
    columns (``alpha(e_j) = sum_i alpha[i][j] e_i``) and must preserve each
    homogeneous component.
    """

    def __init__(self, group, eps, basis, structure, alpha, *, _raw=False):
        self.group: GradingGroup = group
        self.eps: CommutationFactor = eps
        self.basis: tuple[BasisElement, ...] = tuple(basis)
        self.structure: dict = {
            (int(i), int(j)): GradedVector(v.coeffs if isinstance(v, GradedVector) else v)
            for (i, j), v in structure.items()
        }
        self.alpha = [[Fraction(x) for x in row] for row in alpha]
        if not _raw:
            self._validate_structural()

    # -- construction ------------------------------------------------------

    @classmethod
    def from_data(cls, group, eps, basis, brackets, alpha=None, *, raw=False):
        """Build an algebra from a list of ``(i, j, value)`` structure constants.

        Values may be given for any ordered pairs; missing mirrors are
        derived by skew symmetry on demand.  Giving both ``(i, j)`` and
        ``(j, i)`` is allowed only when consistent (otherwise a
        :class:`StructureError`), unless ``raw=True``, which stores the data
        verbatim so the checkers can report the inconsistency instead.
        """
        basis = tuple(
            b if isinstance(b, BasisElement) else BasisElement(str(b[0]), b[1]) for b in basis
        )
        n = len(basis)
        if alpha is None:
            alpha = linalg.identity(n)
        eps_obj = eps
        structure: dict = {}
        for i, j, value in brackets:
            i, j = int(i), int(j)
            if not (0 <= i < n and 0 <= j < n):
                raise StructureError(f"bracket pair ({i},{j}) out of range for dimension {n}")
            vec = value if isinstance(value, GradedVector) else GradedVector(value)
            key = (i, j)
            if key in structure:
                if raw or structure[key] == vec:
                    structure[key] = vec
                    continue
                raise StructureError(f"bracket pair ({i},{j}) defined twice with different values")
            mirror = (j, i)
            if mirror in structure and not raw and i != j:
                expected = structure[mirror].scale(
                    -eps_obj(basis[j].degree, basis[i].degree)
                )
                if expected != vec:
                    raise StructureError(
                        f"bracket pairs ({j},{i}) and ({i},{j}) are not skew-consistent"
                    )
                continue
            structure[key] = vec
        alg = cls(group, eps_obj, basis, structure, alpha, _raw=raw)
        if not raw:
            alg._canonicalize_structure()
        return alg

    def _validate_structural(self):
        n = len(self.basis)
        names = [b.name for b in self.basis]
        if len(set(names)) != n:
            raise StructureError("basis names must be unique")
        for b in self.basis:
            if b.degree.group != self.group:
                raise StructureError(f"basis element {b.name} graded by a different group")
        if self.eps.group != self.group:
            raise StructureError("commutation factor defined on a different group")
        eps_report = epsilon_validate(self.eps)
        if not eps_report.passed:
            failed = [c.name for c in eps_report.checks if not c.passed]
            raise StructureError(f"commutation factor fails: {', '.join(failed)}")
        if len(self.alpha) != n or any(len(row) != n for row in self.alpha):
            raise StructureError("alpha must be a square matrix over the basis")
        for i in range(n):
            for j in range(n):
                if self.alpha[i][j] and self.basis[i].degree != self.basis[j].degree:
                    raise StructureError(
                        f"alpha mixes degrees: entry ({i},{j}) links "
                        f"{self.basis[j].degree} to {self.basis[i].degree}"
                    )
        for (i, j) in self.structure:
            if not (0 <= i < n and 0 <= j < n):
                raise StructureError(f"bracket pair ({i},{j}) out of range")

    def _canonicalize_structure(self):
        """Rewrite storage onto i <= j keys (single source of truth)."""
        canon: dict = {}
        for (i, j), vec in sorted(self.structure.items()):
            if vec.is_zero():
                continue
            if i <= j:
                canon[(i, j)] = vec
            else:
                key = (j, i)
                flipped = vec.scale(-self.eps(self.basis[i].degree, self.basis[j].degree))
                if key not in canon:
                    canon[key] = flipped
        self.structure = canon

    # -- basic queries -----------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.basis)

    def degree_of(self, i: int) -> Degree:
        return self.basis[i].degree

    def degrees(self) -> list[Degree]:
        return [b.degree for b in self.basis]

    def index_of(self, name: str) -> int:
        for i, b in enumerate(self.basis):
            if b.name == name:
                return i
        raise KeyError(name)

    def vector(self, expr: dict) -> GradedVector:
        """Build a vector from ``{name_or_index: coefficient}``."""
        coeffs = {}
        for key, c in expr.items():
            i = key if isinstance(key, int) else self.index_of(key)
            coeffs[i] = Fraction(c)
        return GradedVector(coeffs)

    def vector_degree(self, vec: GradedVector) -> Degree | None:
        """Common degree of a homogeneous vector, ``None`` if mixed or zero."""
        degs = {self.basis[i].degree for i in vec.coeffs}
        return degs.pop() if len(degs) == 1 else None

    # -- bracket -----------------------------------------------------------

    def bracket_basis(self, i: int, j: int) -> GradedVector:
        """``[e_i, e_j]`` with skew completion of unstored mirror pairs."""
        n = self.dim
        if not (0 <= i < n and 0 <= j < n):
            raise StructureError(f"basis index out of range: ({i},{j})")
        if (i, j) in self.structure:
            return self.structure[(i, j)]
        if i != j and (j, i) in self.structure:
            factor = -self.eps(self.basis[i].degree, self.basis[j].degree)
            return self.structure[(j, i)].scale(factor)
        return GradedVector()

    def bracket(self, x: GradedVector, y: GradedVector) -> GradedVector:
        out = GradedVector()
        for i, ci in x.coeffs.items():
            for j, cj in y.coeffs.items():
                term = self.bracket_basis(i, j)
                if not term.is_zero():
                    out = out + term.scale(ci * cj)
        return out

    def apply_alpha(self, x: GradedVector) -> GradedVector:
        return apply_matrix(self.alpha, x)

    def alpha_power(self, k: int):
        if k < 0:
            inv = linalg.invert(self.alpha)
            if inv is None:
                raise StructureError("negative twist power requires a regular algebra")
            return linalg.mat_pow(inv, -k)
        return linalg.mat_pow(self.alpha, k)

    # -- checkers ----------------------------------------------------------

    def check_grading(self) -> Report:
        """Every component of ``[e_i, e_j]`` must sit in degree ``deg_i + deg_j``."""
        rep = Report()
        bad = []
        for (i, j), vec in sorted(self.structure.items()):
            want = self.basis[i].degree + self.basis[j].degree
            for t, c in vec.items():
                if self.basis[t].degree != want:
                    bad.append({"pair": (i, j), "component": t, "coefficient": format_scalar(c)})
        rep.add("grading_axiom", not bad, bad)
        return rep

    def check_skew(self) -> Report:
        """Stored pairs must be mutually skew-consistent; a diagonal bracket
        is only allowed when ``eps(d, d) = -1``."""
        rep = Report()
        bad = []
        for (i, j), vec in sorted(self.structure.items()):
            if i == j:
                if self.eps(self.basis[i].degree, self.basis[i].degree) != -1 and not vec.is_zero():
                    bad.append({"pair": (i, i), "reason": "nonzero square bracket in even degree"})
                continue
            mirror = self.structure.get((j, i))
            if mirror is not None:
                expected = vec.scale(-self.eps(self.basis[j].degree, self.basis[i].degree))
                if mirror != expected:
                    bad.append({"pair": (i, j), "reason": "stored mirror pair not skew-consistent"})
        rep.add("skew_symmetry", not bad, bad)
        return rep

    def jacobiator(self, i: int, j: int, k: int) -> GradedVector:
        """Cyclic sum ``eps(z,x) [alpha(x), [y, z]]`` over ``(e_i, e_j, e_k)``."""
        total = GradedVector()
        for (a, b, c) in ((i, j, k), (j, k, i), (k, i, j)):
            factor = self.eps(self.basis[c].degree, self.basis[a].degree)
            inner = self.bracket_basis(b, c)
            term = self.bracket(self.apply_alpha(GradedVector.basis(a)), inner)
            total = total + term.scale(factor)
        return total

    def check_hom_jacobi(self, full_scan: bool = False) -> Report:
        """Twisted Jacobi identity on basis triples.

        The default scans unordered triples with multiplicity (i <= j <= k),
        which suffices because skew symmetry makes the cyclic identity
        permutation-covariant; ``full_scan=True`` checks every ordered triple
        so the agreement of the two scans can itself be tested.
        """
        rep = Report()
        n = self.dim
        bad = []
        if full_scan:
            triples = ((i, j, k) for i in range(n) for j in range(n) for k in range(n))
        else:
            triples = (
                (i, j, k) for i in range(n) for j in range(i, n) for k in range(j, n)
            )
        for (i, j, k) in triples:
            res = self.jacobiator(i, j, k)
            if not res.is_zero():
                bad.append({"triple": (i, j, k),
                            "residual": {t: format_scalar(c) for t, c in res.items()}})
        rep.add("hom_jacobi", not bad, bad)
        return rep

    def check_multiplicative(self) -> Report:
        """``alpha([e_i, e_j]) = [alpha(e_i), alpha(e_j)]`` on basis pairs."""
        rep = Report()
        bad = []
        n = self.dim
        for i in range(n):
            for j in range(i, n):
                lhs = self.apply_alpha(self.bracket_basis(i, j))
                rhs = self.bracket(
                    self.apply_alpha(GradedVector.basis(i)),
                    self.apply_alpha(GradedVector.basis(j)),
                )
                if lhs != rhs:
                    bad.append({"pair": (i, j)})
        rep.add("multiplicative", not bad, bad)
        return rep

    def validate(self, full_scan: bool = False) -> Report:
        rep = Report()
        rep.extend(epsilon_validate(self.eps))
        rep.extend(self.check_grading())
        rep.extend(self.check_skew())
        rep.extend(self.check_hom_jacobi(full_scan=full_scan))
        mult = self.check_multiplicative()
        for c in mult.checks:
            c.informational = True
        rep.extend(mult)
        rep.add("regular", self.is_regular(), informational=True)
        return rep

    # -- derived subspaces ---------------------------------------------------

    def center(self) -> list[GradedVector]:
        """Canonical basis of ``{x : [x, e_j] = 0 for all j}``."""
        n = self.dim
        rows = []
        for j in range(n):
            cols = [self.bracket_basis(i, j) for i in range(n)]
            for t in range(n):
                row = [cols[i][t] for i in range(n)]
                if any(row):
                    rows.append(row)
        basis = linalg.nullspace(rows, cols=n)
        return [GradedVector.from_dense(v) for v in basis]

    def fixed_center(self) -> list[GradedVector]:
        """Center intersected with the fixed space of the twist."""
        n = self.dim
        rows = []
        for j in range(n):
            cols = [self.bracket_basis(i, j) for i in range(n)]
            for t in range(n):
                row = [cols[i][t] for i in range(n)]
                if any(row):
                    rows.append(row)
        for t in range(n):
            row = [self.alpha[t][i] - (ONE if t == i else ZERO) for i in range(n)]
            if any(row):
                rows.append(row)
        basis = linalg.nullspace(rows, cols=n)
        return [GradedVector.from_dense(v) for v in basis]

    def is_abelian(self) -> bool:
        return all(v.is_zero() for v in self.structure.values())

    def is_regular(self) -> bool:
        if linalg.invert(self.alpha) is None:
            return False
        return self.check_multiplicative().passed

    def has_identity_alpha(self) -> bool:
        return self.alpha == linalg.identity(self.dim)

    # -- equality (used by round-trip tests) --------------------------------

    def __eq__(self, other):
        if not isinstance(other, ColorHomLieAlgebra):
            return NotImplemented
        if (self.group, self.eps.gen_table) != (other.group, other.eps.gen_table):
            return False
        if [(b.name, b.degree) for b in self.basis] != [(b.name, b.degree) for b in other.basis]:
            return False
        if self.alpha != other.alpha:
            return False
        n = self.dim
        for i in range(n):
            for j in range(i, n):
                if self.bracket_basis(i, j) != other.bracket_basis(i, j):
                    return False
        return True

    def __repr__(self):
        return (
            f"ColorHomLieAlgebra(dim={self.dim}, "
            f"group={self.group.to_dict()}, basis={[b.name for b in self.basis]})"
        )


def is_color_morphism(src: ColorHomLieAlgebra, dst: ColorHomLieAlgebra, matrix) -> tuple[bool, list]:
    """Degree-zero bracket-preserving linear map check; returns (ok, witnesses).

    The twist maps are not consulted; use this for plain color-algebra
    morphisms (for twist-intertwining morphisms see ``extensions``).
    """
    violations = []
    if len(matrix) != dst.dim or any(len(row) != src.dim for row in matrix):
        return False, [{"reason": "shape mismatch"}]
    for j in range(src.dim):
        for i in range(dst.dim):
            if matrix[i][j] and dst.basis[i].degree != src.basis[j].degree:
                violations.append({"entry": (i, j), "reason": "degree not preserved"})
    if violations:
        return False, violations
    for i in range(src.dim):
        for j in range(i, src.dim):
            lhs = apply_matrix(matrix, src.bracket_basis(i, j))
            rhs = dst.bracket(
                apply_matrix(matrix, GradedVector.basis(i)),
                apply_matrix(matrix, GradedVector.basis(j)),
            )
            if lhs != rhs:
                violations.append({"pair": (i, j), "reason": "bracket not preserved"})
    return not violations, violations


def yau_twist(algebra: ColorHomLieAlgebra, beta) -> ColorHomLieAlgebra:
    """Twist an untwisted algebra by a morphism: new bracket ``beta([.,.])``.

    Requires the input to be a genuine color Lie algebra (identity twist,
    Jacobi identity holds) and ``beta`` to be a degree-zero morphism of it;
    the result carries bracket ``beta([.,.])`` and twist ``beta``, and is
    multiplicative by construction.
    """
    if not algebra.has_identity_alpha():
        raise StructureError("input must carry the identity twist")
    jac = algebra.check_hom_jacobi()
    if not jac.passed:
        raise StructureError("input does not satisfy the Jacobi identity")
    beta = [[Fraction(x) for x in row] for row in beta]
    ok, violations = is_color_morphism(algebra, algebra, beta)
    if not ok:
        raise StructureError(f"beta is not a morphism: {violations[0]}")
    structure = {
        key: apply_matrix(beta, vec) for key, vec in algebra.structure.items()
    }
    return ColorHomLieAlgebra(algebra.group, algebra.eps, algebra.basis, structure, beta)
