"""Twisted derivation spaces, inner derivations, and the outer quotient.

A homogeneous twisted derivation of level ``k`` and degree ``d`` is a
linear map ``D`` that shifts degrees by ``d``, commutes with the twist
``alpha``, and satisfies the twisted Leibniz rule

    ``D([x, y]) = [D(x), alpha^k(y)] + eps(d, deg x) [alpha^k(x), D(y)]``.

All three conditions are linear in the matrix entries of ``D``, so each
space is the exact kernel of a rational linear system and gets a canonical
basis from RREF with a fixed variable order (matrix cells scanned row by
row).  Inner derivations at level ``k`` are spanned by ``y -> [alpha^{k-1}(y), x]``
over twist-fixed ``x``; the quotient of the full space by the inner ones is
represented by deterministic coset representatives.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .algebra import ColorHomLieAlgebra, GradedVector, apply_matrix
from .errors import StructureError, UnsupportedOperationError
from .grading import Degree
from .report import Report

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass
class TwistedDerivation:
    """A matrix together with its claimed level ``k`` and degree."""

    algebra: ColorHomLieAlgebra
    k: int
    degree: Degree
    matrix: list

    def apply(self, x: GradedVector) -> GradedVector:
        return apply_matrix(self.matrix, x)

    def conditions_report(self) -> Report:
        return derivation_conditions(self.algebra, self.matrix, self.k, self.degree)

    def is_zero(self) -> bool:
        return linalg.is_zero_matrix(self.matrix)

    def vectorize(self) -> list:
        return [x for row in self.matrix for x in row]


def derivation_conditions(algebra: ColorHomLieAlgebra, matrix, k: int,
                          degree: Degree) -> Report:
    """Verify the three defining conditions of a level-``k`` derivation."""
    rep = Report()
    n = algebra.dim
    bad = []
    for t in range(n):
        for s in range(n):
            if matrix[t][s] and algebra.basis[t].degree != algebra.basis[s].degree + degree:
                bad.append({"entry": (t, s)})
    rep.add("derivation_degree", not bad, bad,
            detail=f"matrix shifts degrees by {tuple(degree.coords)}")

    comm = linalg.mat_sub(linalg.matmul(matrix, algebra.alpha),
                          linalg.matmul(algebra.alpha, matrix))
    rep.add("derivation_commutes_with_twist", linalg.is_zero_matrix(comm),
            [] if linalg.is_zero_matrix(comm) else [{"residual_nonzero": True}])

    alpha_k = algebra.alpha_power(k)
    bad = []
    for i in range(n):
        for j in range(n):
            ei, ej = GradedVector.basis(i), GradedVector.basis(j)
            lhs = apply_matrix(matrix, algebra.bracket_basis(i, j))
            rhs = algebra.bracket(apply_matrix(matrix, ei), apply_matrix(alpha_k, ej))
            factor = algebra.eps(degree, algebra.basis[i].degree)
            rhs = rhs + algebra.bracket(apply_matrix(alpha_k, ei),
                                        apply_matrix(matrix, ej)).scale(factor)
            if lhs != rhs:
                bad.append({"pair": (i, j)})
    rep.add("derivation_leibniz", not bad, bad, detail=f"twist level k={k}")
    return rep


@dataclass
class DerivationSpace:
    algebra: ColorHomLieAlgebra
    k: int
    degree: Degree
    basis: list = field(default_factory=list)

    @property
    def dim(self) -> int:
        return len(self.basis)


def _degree_cells(algebra: ColorHomLieAlgebra, degree: Degree) -> list:
    """Matrix cells (t, s) allowed for a homogeneous map of this degree."""
    cells = []
    for t in range(algebra.dim):
        for s in range(algebra.dim):
            if algebra.basis[t].degree == algebra.basis[s].degree + degree:
                cells.append((t, s))
    return cells


def _cells_to_matrix(algebra: ColorHomLieAlgebra, cells, vec) -> list:
    m = linalg.zeros(algebra.dim, algebra.dim)
    for (t, s), c in zip(cells, vec):
        m[t][s] = c
    return m


def derivation_space(algebra: ColorHomLieAlgebra, k: int, degree: Degree) -> DerivationSpace:
    """Exact solution space of the three derivation conditions."""
    if k < 0:
        raise StructureError("twist level must be nonnegative")
    n = algebra.dim
    cells = _degree_cells(algebra, degree)
    ncell = len(cells)
    if ncell == 0:
        return DerivationSpace(algebra, k, degree, [])
    cell_index = {c: idx for idx, c in enumerate(cells)}
    rows = []

    # commutation with alpha: (M A - A M)[t][s] = 0
    for t in range(n):
        for s in range(n):
            row = [ZERO] * ncell
            nonzero = False
            for (u, v), idx in cell_index.items():
                coeff = ZERO
                if u == t:
                    coeff += algebra.alpha[v][s]
                if v == s:
                    coeff -= algebra.alpha[t][u]
                if coeff:
                    row[idx] = coeff
                    nonzero = True
            if nonzero:
                rows.append(row)

    # twisted Leibniz on every ordered basis pair
    alpha_k = algebra.alpha_power(k)
    for i in range(n):
        ak_ei = apply_matrix(alpha_k, GradedVector.basis(i))
        factor_cache = algebra.eps(degree, algebra.basis[i].degree)
        for j in range(n):
            ak_ej = apply_matrix(alpha_k, GradedVector.basis(j))
            bracket_ij = algebra.bracket_basis(i, j)
            coeffs = [dict() for _ in range(n)]  # per target coordinate

            def put(target, idx, c):
                if c:
                    coeffs[target][idx] = coeffs[target].get(idx, ZERO) + c

            # D([e_i, e_j])
            for u, cu in bracket_ij.coeffs.items():
                for t in range(n):
                    if (t, u) in cell_index:
                        put(t, cell_index[(t, u)], cu)
            # -[D e_i, alpha^k e_j]
            for t in range(n):
                if (t, i) in cell_index:
                    term = algebra.bracket(GradedVector.basis(t), ak_ej)
                    for w, cw in term.coeffs.items():
                        put(w, cell_index[(t, i)], -cw)
            # -eps(d, deg_i) [alpha^k e_i, D e_j]
            for t in range(n):
                if (t, j) in cell_index:
                    term = algebra.bracket(ak_ei, GradedVector.basis(t))
                    for w, cw in term.coeffs.items():
                        put(w, cell_index[(t, j)], -factor_cache * cw)
            for target in range(n):
                if coeffs[target]:
                    row = [ZERO] * ncell
                    for idx, c in coeffs[target].items():
                        row[idx] = c
                    rows.append(row)

    kernel = linalg.nullspace(rows, cols=ncell)
    basis = [
        TwistedDerivation(algebra, k, degree, _cells_to_matrix(algebra, cells, vec))
        for vec in kernel
    ]
    return DerivationSpace(algebra, k, degree, basis)


def candidate_degrees(algebra: ColorHomLieAlgebra) -> list[Degree]:
    """Degrees that can carry a nonzero homogeneous operator, sorted."""
    seen = {}
    for t in range(algebra.dim):
        for s in range(algebra.dim):
            d = algebra.basis[t].degree - algebra.basis[s].degree
            seen[d.coords] = d
    return [seen[c] for c in sorted(seen)]


def derivation_family(algebra: ColorHomLieAlgebra, k: int) -> dict:
    """All nonzero homogeneous derivation spaces at level ``k``, by degree."""
    out = {}
    for d in candidate_degrees(algebra):
        space = derivation_space(algebra, k, d)
        if space.dim:
            out[d] = space
    return out


def ad_k(algebra: ColorHomLieAlgebra, k: int, x: GradedVector,
         override: bool = False) -> TwistedDerivation:
    """The inner map ``y -> [alpha^k(y), x]`` for a twist-fixed homogeneous ``x``.

    Twist-fixedness is a hypothesis of the construction; without it the
    result need not be a derivation.  ``override=True`` computes the formula
    anyway (the extensions layer uses this to follow the classification
    displays literally and report which conditions fail).
    """
    degree = algebra.vector_degree(x)
    if degree is None:
        raise StructureError("ad requires a homogeneous argument")
    residual = algebra.apply_alpha(x) - x
    if not residual.is_zero() and not override:
        raise StructureError(
            f"argument is not twist-fixed; residual alpha(x)-x = {residual!r}"
        )
    alpha_k = algebra.alpha_power(k)
    n = algebra.dim
    cols = [
        algebra.bracket(apply_matrix(alpha_k, GradedVector.basis(j)), x).to_dense(n)
        for j in range(n)
    ]
    matrix = [[cols[j][t] for j in range(n)] for t in range(n)]
    return TwistedDerivation(algebra, k + 1, degree, matrix)


def fixed_vectors(algebra: ColorHomLieAlgebra) -> list[GradedVector]:
    """Canonical homogeneous basis of ``ker(alpha - id)``.

    The twist is degree-zero, so the kernel splits along degrees and the
    RREF basis vectors are automatically homogeneous.
    """
    n = algebra.dim
    rows = []
    for t in range(n):
        row = [algebra.alpha[t][i] - (ONE if t == i else ZERO) for i in range(n)]
        if any(row):
            rows.append(row)
    return [GradedVector.from_dense(v) for v in linalg.nullspace(rows, cols=n)]


def inner_space(algebra: ColorHomLieAlgebra, k: int,
                degree: Degree | None = None) -> DerivationSpace | dict:
    """Span of the level-``k`` inner derivations, RREF-reduced.

    ``k = 0`` needs the inverse twist and is only supported on regular
    algebras.  With ``degree`` given, returns the homogeneous component;
    otherwise a dict of nonzero components by degree.
    """
    if k < 0:
        raise StructureError("twist level must be nonnegative")
    if k == 0 and linalg.invert(algebra.alpha) is None:
        raise UnsupportedOperationError(
            "inner derivations at level 0 need an invertible twist"
        )
    generators: dict[Degree, list[TwistedDerivation]] = {}
    for x in fixed_vectors(algebra):
        d = algebra.vector_degree(x)
        der = _ad_power(algebra, k - 1, x)
        generators.setdefault(d, []).append(der)

    def reduce(degree_key, ders) -> DerivationSpace:
        rows = [d.vectorize() for d in ders]
        reduced = linalg.row_space(rows)
        n = algebra.dim
        basis = [
            TwistedDerivation(algebra, k, degree_key,
                              [vec[t * n:(t + 1) * n] for t in range(n)])
            for vec in reduced
        ]
        return DerivationSpace(algebra, k, degree_key, basis)

    if degree is not None:
        ders = generators.get(degree, [])
        return reduce(degree, ders)
    return {
        d: space
        for d, ders in sorted(generators.items(), key=lambda kv: kv[0].coords)
        if (space := reduce(d, ders)).dim
    }


def _ad_power(algebra, power: int, x: GradedVector) -> TwistedDerivation:
    """``y -> [alpha^power(y), x]`` allowing ``power = -1`` on regular algebras."""
    degree = algebra.vector_degree(x)
    alpha_p = algebra.alpha_power(power)
    n = algebra.dim
    cols = [
        algebra.bracket(apply_matrix(alpha_p, GradedVector.basis(j)), x).to_dense(n)
        for j in range(n)
    ]
    matrix = [[cols[j][t] for j in range(n)] for t in range(n)]
    return TwistedDerivation(algebra, power + 1, degree, matrix)


@dataclass
class QuotientComponent:
    degree: Degree
    total: DerivationSpace
    inner_rows: list
    inner_pivots: list
    complement: list  # vectorized coset representatives

    @property
    def dim(self) -> int:
        return len(self.complement)


class QuotientSpace:
    """Outer quotient (derivations modulo inner ones), degree by degree."""

    def __init__(self, algebra: ColorHomLieAlgebra, k: int):
        self.algebra = algebra
        self.k = k
        self.components: dict[Degree, QuotientComponent] = {}

    @property
    def dim(self) -> int:
        return sum(c.dim for c in self.components.values())

    @property
    def total_dim(self) -> int:
        return sum(c.total.dim for c in self.components.values())

    @property
    def inner_dim(self) -> int:
        return sum(len(c.inner_pivots) for c in self.components.values())

    def project(self, der: TwistedDerivation) -> list:
        """Coordinates of the class of ``der`` in the complement basis.

        Raises if the matrix does not lie in the derivation space of its
        degree (nothing to project).
        """
        d = der.degree
        comp = self.components.get(d)
        if comp is None:
            if der.is_zero():
                return []
            raise StructureError(f"no derivations of degree {d} at level {self.k}")
        total_rows = [t.vectorize() for t in comp.total.basis]
        inner_rows = comp.inner_rows
        target = der.vectorize()
        span = inner_rows + comp.complement
        if not span:
            if any(target):
                raise StructureError("matrix is not a derivation of this level")
            return []
        sol = linalg.solve(linalg.transpose(span), target)
        if sol is None:
            raise StructureError("matrix is not a derivation of this level")
        _ = total_rows
        return sol[len(inner_rows):]

    def is_inner(self, der: TwistedDerivation) -> bool:
        return all(not c for c in self.project(der))


def outer_quotient(algebra: ColorHomLieAlgebra, k: int) -> QuotientSpace:
    """Derivations modulo inner derivations with deterministic representatives."""
    q = QuotientSpace(algebra, k)
    inner = inner_space(algebra, k)
    degrees = set(candidate_degrees(algebra)) | set(inner.keys())
    for d in sorted(degrees, key=lambda x: x.coords):
        total = derivation_space(algebra, k, d)
        if not total.dim and d not in inner:
            continue
        inner_rows_raw = [t.vectorize() for t in inner.get(d, DerivationSpace(algebra, k, d)).basis]
        if inner_rows_raw:
            inner_red, inner_piv = linalg.rref(inner_rows_raw)
            inner_rows = inner_red[: len(inner_piv)]
        else:
            inner_rows, inner_piv = [], []
        total_rows = [t.vectorize() for t in total.basis]
        complement = linalg.complement_basis(inner_rows, total_rows)
        q.components[d] = QuotientComponent(d, total, inner_rows, inner_piv, complement)
    return q


def der_bracket(d1: TwistedDerivation, d2: TwistedDerivation) -> TwistedDerivation:
    """Color commutator ``D1 D2 - eps(d1, d2) D2 D1``; levels add.

    The level bookkeeping (``k1 + k2``) is a convention verified by the
    property tests, not a theorem claimed here.
    """
    if d1.algebra is not d2.algebra and d1.algebra != d2.algebra:
        raise StructureError("derivations live on different algebras")
    eps = d1.algebra.eps(d1.degree, d2.degree)
    m = linalg.mat_sub(
        linalg.matmul(d1.matrix, d2.matrix),
        linalg.mat_scale(linalg.matmul(d2.matrix, d1.matrix), eps),
    )
    return TwistedDerivation(d1.algebra, d1.k + d2.k, d1.degree + d2.degree, m)


def tilde_alpha(der: TwistedDerivation) -> TwistedDerivation:
    """Compose with the twist on the right: ``D -> D o alpha``."""
    return TwistedDerivation(
        der.algebra, der.k, der.degree, linalg.matmul(der.matrix, der.algebra.alpha)
    )
