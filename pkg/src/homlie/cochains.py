"""Graded skew multilinear cochains and the covariant differential.

A ``p``-cochain of weight ``w`` on an algebra ``g`` with values in a graded
module ``V`` assigns to homogeneous arguments ``x_1, ..., x_p`` a value of
degree ``w + deg(x_1) + ... + deg(x_p)``, subject to graded skew symmetry

    ``psi(..., u, v, ...) = -eps(u, v) psi(..., v, u, ...)``.

Values are stored on weakly increasing basis-index tuples; an index may
repeat only when ``eps(d, d) = -1`` for its degree ``d`` (graded skew
symmetry does not kill such repeats, so they carry independent data, e.g.
``psi(f, f)`` for odd ``f`` in the super case).  Evaluation on arbitrary
tuples applies the skew rule swap by swap, which agrees with the closed
formula ``psi(args) = sign(s) eps_perm(s)^{-1} psi(sorted)`` for the
sorting permutation ``s``.

The permutation factor ``eps_perm`` used throughout is the product of
``eps`` over inversions, in the unique normalization satisfying the
cocycle law ``eps_perm(s∘t, a) = eps_perm(s, a) eps_perm(t, s(a))`` with
``s(a) = (a_{s(1)}, ..., a_{s(k)})``.

The covariant differential ``delta_phi`` follows the graded display with
the canonical reading: the connection term applies ``phi_{x_i}`` with sign
``(-1)^i eps(deg x_0 + ... + deg x_{i-1}, deg x_i)``; the bracket term puts
``[x_i, x_j]`` in slot ``i``, omits ``x_j``, applies the twist ``alpha`` to
every other argument, with sign ``(-1)^j eps(deg x_{i+1} + ... +
deg x_{j-1}, deg x_j)``.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations
from math import factorial

from . import linalg
from .algebra import ColorHomLieAlgebra, GradedVector, apply_matrix
from .errors import FlatnessError, StructureError
from .grading import Degree, degree_sum
from .report import Report

ZERO = Fraction(0)
ONE = Fraction(1)


# ---------------------------------------------------------------------------
# permutation sign machinery
# ---------------------------------------------------------------------------

def perm_sign(sigma) -> int:
    sign = 1
    n = len(sigma)
    for i in range(n):
        for j in range(i + 1, n):
            if sigma[i] > sigma[j]:
                sign = -sign
    return sign


def eps_perm(eps, sigma, degrees) -> Fraction:
    """Commutation-factor weight of a permutation acting on graded slots.

    ``sigma`` is a 0-based image tuple (``sigma[i]`` is where slot ``i``
    reads from, i.e. the permuted tuple is ``(a_{sigma[0]}, ...)``).
    Equals the product of ``eps(a_{sigma[j]}, a_{sigma[i]})`` over the
    inversions ``i < j, sigma[i] > sigma[j]``.
    """
    n = len(sigma)
    if sorted(sigma) != list(range(n)) or len(degrees) != n:
        raise StructureError("eps_perm needs a permutation of 0..k-1 and matching degrees")
    value = ONE
    for i in range(n):
        for j in range(i + 1, n):
            if sigma[i] > sigma[j]:
                value *= eps(degrees[sigma[j]], degrees[sigma[i]])
    return value


# ---------------------------------------------------------------------------
# modules (cochain targets)
# ---------------------------------------------------------------------------

class Module:
    """A graded coefficient space: degrees plus an optional bracket.

    Targets that are algebras (needed by the wedge bracket) wrap the
    algebra; plain modules (trivial scalars, a center subspace) carry zero
    bracket.  A subspace module remembers its embedding into the ambient
    algebra so values can be converted both ways.
    """

    def __init__(self, group, eps, degrees, algebra=None, embedding=None, label="module"):
        self.group = group
        self.eps = eps
        self.degrees = tuple(degrees)
        self.algebra = algebra
        self.embedding = embedding  # ambient-dim x dim matrix, or None
        self.label = label

    @classmethod
    def from_algebra(cls, algebra: ColorHomLieAlgebra, label="self") -> "Module":
        return cls(algebra.group, algebra.eps, algebra.degrees(), algebra=algebra, label=label)

    @classmethod
    def trivial(cls, group, eps) -> "Module":
        return cls(group, eps, (group.zero,), label="trivial")

    @classmethod
    def subspace(cls, algebra: ColorHomLieAlgebra, vectors, label="subspace") -> "Module":
        degrees = []
        for v in vectors:
            d = algebra.vector_degree(v)
            if d is None:
                raise StructureError("subspace module needs homogeneous basis vectors")
            degrees.append(d)
        embedding = [[v[i] for v in vectors] for i in range(algebra.dim)]
        return cls(algebra.group, algebra.eps, degrees, embedding=embedding, label=label)

    @property
    def dim(self) -> int:
        return len(self.degrees)

    @property
    def has_bracket(self) -> bool:
        return self.algebra is not None

    def bracket(self, u: GradedVector, v: GradedVector) -> GradedVector:
        if self.algebra is None:
            return GradedVector()
        return self.algebra.bracket(u, v)

    def __eq__(self, other):
        return (
            isinstance(other, Module)
            and self.degrees == other.degrees
            and self.has_bracket == other.has_bracket
        )

    def __repr__(self):
        return f"Module({self.label}, dim={self.dim})"


class Connection:
    """An action of the source algebra on a module: one matrix per basis
    element of the source, homogeneous of that element's degree.

    ``action_kind`` records whether the matrices are expected to be twisted
    derivations of a target algebra ("derivation") or just a module action
    ("module"); the expectation is verified by the extensions layer, not
    here.  ``k`` is the twist level the derivation claim refers to.
    """

    def __init__(self, source: ColorHomLieAlgebra, module: Module, matrices,
                 k: int = 1, action_kind: str = "module"):
        self.source = source
        self.module = module
        self.matrices = [[[Fraction(x) for x in row] for row in m] for m in matrices]
        self.k = int(k)
        self.action_kind = action_kind
        if len(self.matrices) != source.dim:
            raise StructureError("one action matrix per source basis element required")
        m = module.dim
        for idx, mat in enumerate(self.matrices):
            if len(mat) != m or any(len(row) != m for row in mat):
                raise StructureError(f"action matrix {idx} is not {m}x{m}")
            d = source.basis[idx].degree
            for t in range(m):
                for s in range(m):
                    if mat[t][s] and module.degrees[t] != module.degrees[s] + d:
                        raise StructureError(
                            f"action matrix {idx} is not homogeneous of degree {d}"
                        )

    @classmethod
    def zero(cls, source: ColorHomLieAlgebra, module: Module, k: int = 1) -> "Connection":
        m = module.dim
        return cls(source, module, [linalg.zeros(m, m) for _ in range(source.dim)], k=k)

    @classmethod
    def adjoint(cls, algebra: ColorHomLieAlgebra, k: int = 1) -> "Connection":
        """Left bracket action of an algebra on itself."""
        module = Module.from_algebra(algebra)
        mats = []
        for i in range(algebra.dim):
            cols = [algebra.bracket_basis(i, j).to_dense(algebra.dim) for j in range(algebra.dim)]
            mats.append([[cols[j][t] for j in range(algebra.dim)] for t in range(algebra.dim)])
        return cls(algebra, module, mats, k=k, action_kind="module")

    def apply_basis(self, i: int, value: GradedVector) -> GradedVector:
        return apply_matrix(self.matrices[i], value)

    def apply(self, x: GradedVector, value: GradedVector) -> GradedVector:
        out = GradedVector()
        for i, c in x.coeffs.items():
            out = out + self.apply_basis(i, value).scale(c)
        return out

    def is_zero(self) -> bool:
        return all(linalg.is_zero_matrix(m) for m in self.matrices)


# ---------------------------------------------------------------------------
# cochains
# ---------------------------------------------------------------------------

def diagonal_allowed(algebra: ColorHomLieAlgebra, index: int) -> bool:
    d = algebra.basis[index].degree
    return algebra.eps(d, d) == -1


def canonical_tuples(algebra: ColorHomLieAlgebra, p: int):
    """Weakly increasing index tuples; repeats only where eps(d,d) = -1."""
    n = algebra.dim

    def rec(start, length, current):
        if length == 0:
            yield tuple(current)
            return
        for i in range(start, n):
            if current and current[-1] == i and not diagonal_allowed(algebra, i):
                continue
            yield from rec(i, length - 1, current + [i])

    yield from rec(0, p, [])


class GradedCochain:
    """A graded skew ``p``-linear map stored on canonical index tuples."""

    def __init__(self, source: ColorHomLieAlgebra, module: Module, p: int,
                 weight: Degree, values=None):
        self.source = source
        self.module = module
        self.p = int(p)
        self.weight = weight
        if weight.group != source.group:
            raise StructureError("weight must live in the source grading group")
        self.values: dict[tuple, GradedVector] = {}
        for key, vec in (values or {}).items():
            self.set_value(tuple(key), vec)

    # -- storage -----------------------------------------------------------

    def _check_canonical(self, key: tuple) -> None:
        if len(key) != self.p:
            raise StructureError(f"tuple {key} has arity {len(key)}, cochain has {self.p}")
        for a, b in zip(key, key[1:]):
            if a > b:
                raise StructureError(f"tuple {key} is not weakly increasing")
            if a == b and not diagonal_allowed(self.source, a):
                raise StructureError(
                    f"tuple {key} repeats index {a} whose degree is not square-odd"
                )

    def value_degree(self, key: tuple) -> Degree:
        return self.weight + degree_sum(
            self.source.group, (self.source.basis[i].degree for i in key)
        )

    def set_value(self, key: tuple, vec) -> None:
        key = tuple(int(i) for i in key)
        self._check_canonical(key)
        vec = vec if isinstance(vec, GradedVector) else GradedVector(vec)
        want = self.value_degree(key)
        for t in vec.coeffs:
            if self.module.degrees[t] != want:
                raise StructureError(
                    f"value on {key} has a component of degree "
                    f"{self.module.degrees[t]}, expected {want}"
                )
        if vec.is_zero():
            self.values.pop(key, None)
        else:
            self.values[key] = vec

    # -- evaluation ----------------------------------------------------------

    def eval(self, args) -> GradedVector:
        """Value on an arbitrary index tuple via the graded skew rule."""
        args = list(args)
        if len(args) != self.p:
            raise StructureError("arity mismatch")
        factor = ONE
        degs = [self.source.basis[i].degree for i in args]
        # bubble sort, accumulating -eps(u, v) per adjacent swap (u before v)
        changed = True
        while changed:
            changed = False
            for i in range(len(args) - 1):
                if args[i] > args[i + 1]:
                    factor *= -self.eps_pair(degs[i], degs[i + 1])
                    args[i], args[i + 1] = args[i + 1], args[i]
                    degs[i], degs[i + 1] = degs[i + 1], degs[i]
                    changed = True
        for a, b in zip(args, args[1:]):
            if a == b and not diagonal_allowed(self.source, a):
                return GradedVector()
        stored = self.values.get(tuple(args))
        if stored is None:
            return GradedVector()
        return stored.scale(factor)

    def eps_pair(self, da: Degree, db: Degree) -> Fraction:
        return self.source.eps(da, db)

    def eval_multi(self, args) -> GradedVector:
        """Multilinear extension: each argument is an index or a GradedVector."""
        for slot, a in enumerate(args):
            if isinstance(a, GradedVector):
                out = GradedVector()
                for i, c in a.coeffs.items():
                    expanded = list(args)
                    expanded[slot] = i
                    out = out + self.eval_multi(expanded).scale(c)
                return out
        return self.eval([int(a) for a in args])

    # -- arithmetic ----------------------------------------------------------

    def _compatible(self, other: "GradedCochain") -> None:
        if (self.p, self.weight) != (other.p, other.weight) or self.module != other.module:
            raise StructureError("cochains are not compatible")

    def __add__(self, other: "GradedCochain") -> "GradedCochain":
        self._compatible(other)
        out = GradedCochain(self.source, self.module, self.p, self.weight, self.values)
        for key, vec in other.values.items():
            out.set_value(key, out.values.get(key, GradedVector()) + vec)
        return out

    def __sub__(self, other: "GradedCochain") -> "GradedCochain":
        return self + other.scale(Fraction(-1))

    def scale(self, c) -> "GradedCochain":
        return GradedCochain(
            self.source, self.module, self.p, self.weight,
            {key: vec.scale(c) for key, vec in self.values.items()},
        )

    def is_zero(self) -> bool:
        return not self.values

    def __eq__(self, other):
        return (
            isinstance(other, GradedCochain)
            and (self.p, self.weight) == (other.p, other.weight)
            and self.module == other.module
            and self.values == other.values
        )

    def __repr__(self):
        return f"GradedCochain(p={self.p}, w={self.weight.coords}, nnz={len(self.values)})"


def zero_cochain(source, module, p, weight=None) -> GradedCochain:
    return GradedCochain(source, module, p, weight if weight is not None else source.group.zero)


# ---------------------------------------------------------------------------
# the covariant differential
# ---------------------------------------------------------------------------

def covariant_delta(phi: Connection, psi: GradedCochain) -> GradedCochain:
    """Covariant exterior derivative: arity ``p + 1``, same weight.

    Connection term: ``sum_i (-1)^i theta_i phi_{x_i} psi(..omit i..)``;
    bracket term: ``sum_{i<j} (-1)^j theta_ij psi(alpha x_0, ...,
    [x_i, x_j] at slot i, ..., omit j, ..., alpha x_p)``.
    """
    src = psi.source
    if phi.source is not src and phi.source != src:
        raise StructureError("connection and cochain have different source algebras")
    if phi.module != psi.module:
        raise StructureError("connection and cochain have different targets")
    eps = src.eps
    out = GradedCochain(src, psi.module, psi.p + 1, psi.weight)
    for key in canonical_tuples(src, psi.p + 1):
        degs = [src.basis[i].degree for i in key]
        total = GradedVector()
        for i in range(len(key)):
            rest = key[:i] + key[i + 1:]
            inner = psi.eval(rest)
            if inner.is_zero():
                continue
            theta = eps(degree_sum(src.group, degs[:i]), degs[i])
            sign = -ONE if i % 2 else ONE
            total = total + phi.apply_basis(key[i], inner).scale(sign * theta)
        for i in range(len(key)):
            for j in range(i + 1, len(key)):
                bracket = src.bracket_basis(key[i], key[j])
                if bracket.is_zero():
                    continue
                theta = eps(degree_sum(src.group, degs[i + 1:j]), degs[j])
                sign = -ONE if j % 2 else ONE
                args: list = []
                for m in range(len(key)):
                    if m == j:
                        continue
                    if m == i:
                        args.append(bracket)
                    else:
                        args.append(src.apply_alpha(GradedVector.basis(key[m])))
                term = psi.eval_multi(args)
                if not term.is_zero():
                    total = total + term.scale(sign * theta)
        if not total.is_zero():
            out.set_value(key, total)
    return out


def chevalley_delta(algebra: ColorHomLieAlgebra, zeta: GradedCochain) -> GradedCochain:
    """The coboundary operator with no connection term (trivial action)."""
    return covariant_delta(Connection.zero(algebra, zeta.module), zeta)


# ---------------------------------------------------------------------------
# wedge products
# ---------------------------------------------------------------------------

def _scalar_of(vec: GradedVector) -> Fraction:
    return vec[0]


def wedge_scalar(zeta: GradedCochain, psi: GradedCochain) -> GradedCochain:
    """Wedge of a scalar-valued cochain with a module-valued one.

    Shuffle sum over all permutations with 1/(q! p!) normalization; the
    weight of ``psi`` crosses the arguments fed to ``zeta``, contributing
    ``eps(weight(psi), deg x_{s(1)} + ... + deg x_{s(q)})``.
    """
    if zeta.module.dim != 1 or not zeta.module.degrees[0].is_zero():
        raise StructureError("left factor must be scalar-valued")
    src = psi.source
    q, p = zeta.p, psi.p
    eps = src.eps
    norm = Fraction(1, factorial(p) * factorial(q))
    out = GradedCochain(src, psi.module, p + q, zeta.weight + psi.weight)
    for key in canonical_tuples(src, p + q):
        degs = [src.basis[i].degree for i in key]
        total = GradedVector()
        for sigma in permutations(range(p + q)):
            left = [key[sigma[i]] for i in range(q)]
            c = zeta.eval(left)
            if c.is_zero():
                continue
            right = [key[sigma[i]] for i in range(q, q + p)]
            v = psi.eval(right)
            if v.is_zero():
                continue
            eta = degree_sum(src.group, (degs[sigma[i]] for i in range(q)))
            factor = (
                Fraction(perm_sign(sigma))
                * eps(psi.weight, eta)
                * eps_perm(eps, sigma, degs)
                * _scalar_of(c)
            )
            total = total + v.scale(factor)
        if not total.is_zero():
            out.set_value(key, total.scale(norm))
    return out


def bracket_wedge(psi: GradedCochain, zeta: GradedCochain) -> GradedCochain:
    """Graded wedge commutator of two cochains valued in the same algebra.

    The weight of the second factor crosses the arguments fed to the
    first, contributing ``eps(weight(zeta), deg x_{s(1)} + ... +
    deg x_{s(p)})``.
    """
    if psi.module != zeta.module or not psi.module.has_bracket:
        raise StructureError("wedge bracket needs two cochains valued in one algebra")
    src = psi.source
    p, q = psi.p, zeta.p
    eps = src.eps
    norm = Fraction(1, factorial(p) * factorial(q))
    out = GradedCochain(src, psi.module, p + q, psi.weight + zeta.weight)
    for key in canonical_tuples(src, p + q):
        degs = [src.basis[i].degree for i in key]
        total = GradedVector()
        for sigma in permutations(range(p + q)):
            left = [key[sigma[i]] for i in range(p)]
            u = psi.eval(left)
            if u.is_zero():
                continue
            right = [key[sigma[i]] for i in range(p, p + q)]
            v = zeta.eval(right)
            if v.is_zero():
                continue
            w = psi.module.bracket(u, v)
            if w.is_zero():
                continue
            eta = degree_sum(src.group, (degs[sigma[i]] for i in range(p)))
            factor = (
                Fraction(perm_sign(sigma))
                * eps(zeta.weight, eta)
                * eps_perm(eps, sigma, degs)
            )
            total = total + w.scale(factor)
        if not total.is_zero():
            out.set_value(key, total.scale(norm))
    return out


def delta_squared_residual(phi: Connection, rho: GradedCochain,
                           psi: GradedCochain) -> GradedCochain:
    """``delta_phi delta_phi psi - [rho, psi]_wedge``; zero for valid data."""
    return covariant_delta(phi, covariant_delta(phi, psi)) - bracket_wedge(rho, psi)


# ---------------------------------------------------------------------------
# cohomology
# ---------------------------------------------------------------------------

def cochain_coords(source, module, p, weight) -> list[tuple[tuple, int]]:
    """Canonical coordinate list for the weight-``weight`` ``p``-cochain space."""
    coords = []
    for key in canonical_tuples(source, p):
        want = weight + degree_sum(source.group, (source.basis[i].degree for i in key))
        for t in range(module.dim):
            if module.degrees[t] == want:
                coords.append((key, t))
    return coords


def cochain_from_coords(source, module, p, weight, coords, vec) -> GradedCochain:
    out = GradedCochain(source, module, p, weight)
    per_key: dict[tuple, dict] = {}
    for (key, t), c in zip(coords, vec):
        if c:
            per_key.setdefault(key, {})[t] = c
    for key, comp in per_key.items():
        out.set_value(key, GradedVector(comp))
    return out


def cochain_to_coords(psi: GradedCochain, coords) -> list[Fraction]:
    return [psi.values.get(key, GradedVector())[t] for (key, t) in coords]


def delta_matrix(phi: Connection, p: int, weight) -> tuple:
    """Matrix of the differential on weight-``weight`` ``p``-cochains.

    Returns ``(matrix, domain_coords, codomain_coords)`` with the matrix in
    column action on the canonical coordinates.
    """
    src = phi.source
    dom = cochain_coords(src, phi.module, p, weight)
    cod = cochain_coords(src, phi.module, p + 1, weight)
    mat = linalg.zeros(len(cod), len(dom))
    index = {c: r for r, c in enumerate(cod)}
    for col, (key, t) in enumerate(dom):
        basis_cochain = GradedCochain(src, phi.module, p, weight, {key: GradedVector({t: ONE})})
        image = covariant_delta(phi, basis_cochain)
        for ikey, vec in image.values.items():
            for it, c in vec.coeffs.items():
                mat[index[(ikey, it)]][col] = c
    return mat, dom, cod


class CohomologySpace:
    """Cocycles, coboundaries and chosen representatives in one arity."""

    def __init__(self, p, weight, cocycles, coboundaries, representatives,
                 coords, source, module):
        self.p = p
        self.weight = weight
        self.cocycles = cocycles
        self.coboundaries = coboundaries
        self.representatives = representatives
        self.coords = coords
        self.source = source
        self.module = module

    @property
    def dim(self) -> int:
        return len(self.representatives)

    @property
    def dim_cocycles(self) -> int:
        return len(self.cocycles)

    @property
    def dim_coboundaries(self) -> int:
        return len(self.coboundaries)

    def representative_cochains(self) -> list[GradedCochain]:
        return [
            cochain_from_coords(self.source, self.module, self.p, self.weight,
                                self.coords, v)
            for v in self.representatives
        ]

    def cocycle_cochains(self) -> list[GradedCochain]:
        return [
            cochain_from_coords(self.source, self.module, self.p, self.weight,
                                self.coords, v)
            for v in self.cocycles
        ]


def cohomology_space(phi: Connection, p: int, weight=None) -> CohomologySpace:
    """Kernel-mod-image cohomology of the covariant differential.

    Checks flatness (``delta o delta = 0`` from arity ``p - 1`` through
    ``p + 1``) first and raises :class:`FlatnessError` with a witness
    cochain when the action is not flat on this module.
    """
    src = phi.source
    if weight is None:
        weight = src.group.zero
    d_p, dom_p, _ = delta_matrix(phi, p, weight)
    if p >= 1:
        d_prev, dom_prev, _ = delta_matrix(phi, p - 1, weight)
        if dom_prev and dom_p:
            comp = linalg.matmul(d_p, d_prev)
            if not linalg.is_zero_matrix(comp):
                col = next(
                    j for j in range(len(dom_prev))
                    if any(comp[i][j] for i in range(len(comp)))
                )
                witness = cochain_from_coords(
                    src, phi.module, p - 1, weight, dom_prev,
                    [ONE if j == col else ZERO for j in range(len(dom_prev))],
                )
                raise FlatnessError(
                    "action is not flat: delta(delta(psi)) != 0", witness=witness
                )
    else:
        d_prev, dom_prev = [], []

    cocycles = linalg.nullspace(d_p, cols=len(dom_p)) if dom_p else []
    if p >= 1 and dom_prev and dom_p:
        coboundaries = linalg.row_space(linalg.transpose(d_prev))
    else:
        coboundaries = []
    reps = linalg.complement_basis(coboundaries, cocycles)
    return CohomologySpace(p, weight, cocycles, coboundaries, reps, dom_p, src, phi.module)
