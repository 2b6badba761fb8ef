"""Seeded instance generators and deliberately naive oracles.

Everything here exists to power property tests and the ``generate`` CLI
subcommand.  Production code never imports this module.  The oracles
re-implement production paths in the most literal way available
(exponential enumerations are fine at the dimensions we generate) so that
agreement between the two is evidence, not tautology.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .algebra import ColorHomLieAlgebra, GradedVector, apply_matrix, yau_twist
from .cochains import (
    Connection,
    GradedCochain,
    Module,
    canonical_tuples,
    cochain_coords,
    cochain_from_coords,
    delta_matrix,
)
from .extensions import ExtensionData, left_mult_matrix, transform_data_by_b
from .grading import CommutationFactor, Degree, GradingGroup, degree_sum
from .report import Report

F = Fraction
ZERO = F(0)
ONE = F(1)


# ---------------------------------------------------------------------------
# named fixtures
# ---------------------------------------------------------------------------

def trivial_group():
    g = GradingGroup(0)
    return g, CommutationFactor.trivial(g)


def super_group():
    return CommutationFactor.super_sign().group, CommutationFactor.super_sign()


def z2z2_group():
    g = GradingGroup(0, (2, 2))
    return g, CommutationFactor(g, [[1, -1], [-1, 1]])


def z_z2_group():
    g = GradingGroup(1, (2,))
    return g, CommutationFactor(g, [[1, 1], [1, -1]])


def abelian(dim: int, degrees=None, group=None, eps=None, alpha=None,
            names=None) -> ColorHomLieAlgebra:
    if group is None:
        group, eps = trivial_group()
    degrees = degrees or [group.zero] * dim
    names = names or [f"a{i+1}" for i in range(dim)]
    basis = list(zip(names, degrees))
    return ColorHomLieAlgebra.from_data(group, eps, basis, [], alpha=alpha)


def heisenberg() -> ColorHomLieAlgebra:
    group, eps = trivial_group()
    z = group.zero
    return ColorHomLieAlgebra.from_data(
        group, eps, [("e1", z), ("e2", z), ("e3", z)], [(0, 1, {2: 1})]
    )


def sl2() -> ColorHomLieAlgebra:
    group, eps = trivial_group()
    z = group.zero
    return ColorHomLieAlgebra.from_data(
        group, eps, [("h", z), ("e", z), ("f", z)],
        [(0, 1, {1: 2}), (0, 2, {2: -2}), (1, 2, {0: 1})],
    )


def super21() -> ColorHomLieAlgebra:
    """Two even generators, one odd with a nonzero square bracket."""
    group, eps = super_group()
    ev, od = group.degree(0), group.degree(1)
    return ColorHomLieAlgebra.from_data(
        group, eps, [("a", ev), ("b", ev), ("f", od)], [(2, 2, {0: 1})]
    )


def solvable_super() -> ColorHomLieAlgebra:
    """Centerless: even a, odd f, [a, f] = f."""
    group, eps = super_group()
    ev, od = group.degree(0), group.degree(1)
    return ColorHomLieAlgebra.from_data(
        group, eps, [("a", ev), ("f", od)], [(0, 1, {1: 1})]
    )


def gl11() -> ColorHomLieAlgebra:
    group, eps = super_group()
    ev, od = group.degree(0), group.degree(1)
    return ColorHomLieAlgebra.from_data(
        group, eps,
        [("a", ev), ("b", ev), ("f1", od), ("f2", od)],
        [(0, 2, {2: 1}), (0, 3, {3: -1}), (2, 3, {1: 1})],
    )


def color_z2z2() -> ColorHomLieAlgebra:
    group, eps = z2z2_group()
    dx, dy, dz = group.degree(1, 0), group.degree(0, 1), group.degree(1, 1)
    return ColorHomLieAlgebra.from_data(
        group, eps, [("X", dx), ("Y", dy), ("Z", dz)],
        [(0, 1, {2: 1}), (1, 2, {0: 1}), (2, 0, {1: 1})],
    )


def heisenberg_z_z2() -> ColorHomLieAlgebra:
    """Central cocycle extension graded over Z (+) Z_2: [f, f] = z."""
    group, eps = z_z2_group()
    df = group.degree(1, 1)
    dz = df + df
    return ColorHomLieAlgebra.from_data(
        group, eps, [("f", df), ("u", group.degree(0, 1)), ("z", dz)],
        [(0, 0, {2: 1})],
    )


CLASSICAL_FIXTURES = {
    "heisenberg": heisenberg,
    "sl2": sl2,
    "super21": super21,
    "solvable_super": solvable_super,
    "gl11": gl11,
    "color_z2z2": color_z2z2,
    "heisenberg_z_z2": heisenberg_z_z2,
}


def diagonal_morphisms(algebra: ColorHomLieAlgebra, rng: random.Random) -> list:
    """A random diagonal bracket morphism.

    Diagonal maps ``e_i -> t_i e_i`` preserve the bracket iff
    ``t_i t_j = t_u`` along every structure constant.  Sample the ``t_i``,
    propagate the constraints to a fixpoint, and keep the result iff the
    morphism check passes; falls back to the identity.
    """
    from .algebra import is_color_morphism

    n = algebra.dim
    constraints = [
        (i, j, u)
        for (i, j), vec in algebra.structure.items()
        for u in vec.coeffs
    ]
    for _ in range(40):
        t = [F(rng.choice([1, 2, 3, -1, -2])) / F(rng.choice([1, 2]))
             for _ in range(n)]
        for _ in range(n + 1):
            for (i, j, u) in constraints:
                t[u] = t[i] * t[j]
        m = linalg.zeros(n, n)
        for i in range(n):
            m[i][i] = t[i]
        if is_color_morphism(algebra, algebra, m)[0]:
            return m
    return linalg.identity(n)


def unipotent_h3_morphism() -> list:
    m = linalg.identity(3)
    m[1][0] = ONE  # e1 -> e1 + e2
    return m


# ---------------------------------------------------------------------------
# algebra generator
# ---------------------------------------------------------------------------

@dataclass
class GeneratorConfig:
    seed: int = 0
    max_dim: int = 4
    grading: str = "trivial"  # trivial | z2 | z2z2 | z_z2
    alpha_family: str = "identity"  # identity | diagonal | morphism
    family: str = "abelian"  # abelian | cocycle | classical | yau
    metadata: dict = field(default_factory=dict)


_GRADINGS = {
    "trivial": trivial_group,
    "z2": super_group,
    "z2z2": z2z2_group,
    "z_z2": z_z2_group,
}


def _random_degrees(group: GradingGroup, eps, dim: int, rng: random.Random):
    pool = [d for d in group.elements(free_box=1)]
    return [pool[rng.randrange(len(pool))] for _ in range(dim)]


def gen_algebra(cfg: GeneratorConfig) -> ColorHomLieAlgebra:
    """A valid algebra from the requested family; always passes validation."""
    rng = random.Random(cfg.seed)
    group, eps = _GRADINGS[cfg.grading]()

    if cfg.family == "classical":
        names = sorted(CLASSICAL_FIXTURES)
        algebra = CLASSICAL_FIXTURES[names[rng.randrange(len(names))]]()
    elif cfg.family == "abelian":
        dim = rng.randint(1, max(1, cfg.max_dim))
        algebra = abelian(dim, _random_degrees(group, eps, dim, rng), group, eps)
    elif cfg.family == "cocycle":
        algebra = _gen_cocycle_algebra(group, eps, cfg, rng)
    elif cfg.family == "yau":
        base_cfg = GeneratorConfig(cfg.seed + 1, cfg.max_dim, cfg.grading,
                                   "identity", rng.choice(["classical", "cocycle"]))
        base = gen_algebra(base_cfg)
        beta = diagonal_morphisms(base, rng)
        algebra = yau_twist(base, beta)
    else:
        raise ValueError(f"unknown family {cfg.family!r}")

    if cfg.alpha_family != "identity" and cfg.family in ("abelian", "cocycle"):
        algebra = _with_alpha(algebra, cfg.alpha_family, rng)
    rep = algebra.validate()
    assert rep.passed, [c.to_dict() for c in rep.checks if not c.passed]
    return algebra


def _gen_cocycle_algebra(group, eps, cfg, rng) -> ColorHomLieAlgebra:
    """Central extension of a graded abelian base by one 2-cocycle value."""
    base_dim = rng.randint(2, max(2, cfg.max_dim - 1))
    degrees = _random_degrees(group, eps, base_dim, rng)
    pairs = [(i, j) for i in range(base_dim) for j in range(i, base_dim)
             if i != j or eps(degrees[i], degrees[i]) == -1]
    if not pairs:
        return abelian(base_dim, degrees, group, eps)
    i, j = pairs[rng.randrange(len(pairs))]
    dz = degrees[i] + degrees[j]
    basis = [(f"a{t+1}", d) for t, d in enumerate(degrees)] + [("z", dz)]
    return ColorHomLieAlgebra.from_data(
        group, eps, basis, [(i, j, {base_dim: 1})]
    )


def _with_alpha(algebra: ColorHomLieAlgebra, family: str, rng) -> ColorHomLieAlgebra:
    """Replace the twist on a 2-step-nilpotent/abelian algebra.

    Such algebras satisfy the twisted Jacobi identity for every degree-zero
    twist (all double brackets vanish), so any morphism choice is safe.
    """
    n = algebra.dim
    if family == "diagonal":
        alpha = linalg.zeros(n, n)
        for i in range(n):
            alpha[i][i] = F(rng.choice([1, 2, 3, -1])) / F(rng.choice([1, 2]))
    else:
        alpha = diagonal_morphisms(algebra, rng)
        degs = algebra.degrees()
        same = [(t, s) for t in range(n) for s in range(n)
                if t != s and degs[t] == degs[s]]
        if same:
            t, s = same[rng.randrange(len(same))]
            cand = [row[:] for row in alpha]
            cand[t][s] = ONE
            from .algebra import is_color_morphism
            if is_color_morphism(algebra, algebra, cand)[0]:
                alpha = cand
    candidate = ColorHomLieAlgebra(algebra.group, algebra.eps, algebra.basis,
                                   algebra.structure, alpha)
    if candidate.check_hom_jacobi().passed and candidate.check_multiplicative().passed:
        return candidate
    return algebra


# ---------------------------------------------------------------------------
# cochain and datum generators
# ---------------------------------------------------------------------------

def gen_cochain(source: ColorHomLieAlgebra, module: Module, p: int, weight,
                rng: random.Random, span=(-3, 3)) -> GradedCochain:
    psi = GradedCochain(source, module, p, weight)
    for key, t in cochain_coords(source, module, p, weight):
        c = F(rng.randint(*span))
        if c:
            cur = psi.values.get(key, GradedVector())
            psi.set_value(key, cur + GradedVector({t: c}))
    return psi


def gen_cocycle(source: ColorHomLieAlgebra, phi: Connection, p: int,
                rng: random.Random) -> GradedCochain:
    """A random exact-rational element of the cocycle space of ``phi``."""
    mat, dom, _ = delta_matrix(phi, p, source.group.zero)
    kernel = linalg.nullspace(mat, cols=len(dom)) if dom else []
    vec = [ZERO] * len(dom)
    for basis_vec in kernel:
        c = F(rng.randint(-2, 2))
        if c:
            vec = [a + c * b for a, b in zip(vec, basis_vec)]
    return cochain_from_coords(source, phi.module, p, source.group.zero, dom, vec)


def gen_datum(seed: int, variant: str = "mixed") -> ExtensionData:
    """A valid extension datum.

    Variants:
      ``central``     zero connection, abelian coefficients, cocycle curvature
                      (twists on either side allowed);
      ``semidirect``  commuting inner actions of an untwisted coefficient
                      algebra, zero curvature;
      ``shifted``     a section shift of one of the above;
      ``mixed``       seed-dependent choice among all of them.
    """
    rng = random.Random(seed)
    if variant == "mixed":
        variant = rng.choice(["central", "central", "semidirect", "shifted"])

    if variant == "central":
        g = _datum_base_algebra(rng)
        h = _datum_abelian_coeffs(g, rng)
        module = Module.from_algebra(h)
        phi = Connection.zero(g, module)
        rho = gen_cocycle(g, phi, 2, rng)
        return ExtensionData(g, h, 1, phi, rho)

    if variant == "semidirect":
        h = heisenberg()
        gg, eps = trivial_group()
        g = abelian(2, group=gg, eps=eps, names=["x1", "x2"])
        module = Module.from_algebra(h)
        c1 = F(rng.randint(-2, 2))
        c2 = F(rng.randint(-2, 2))
        m1 = left_mult_matrix(h, GradedVector({0: ONE, 1: c1} if c1 else {0: ONE}))
        m2 = left_mult_matrix(h, GradedVector({1: ONE, 2: c2} if c2 else {1: ONE}))
        phi = Connection(g, module, [m1, m2], k=1, action_kind="derivation")
        rho = GradedCochain(g, module, 2, gg.zero)
        return ExtensionData(g, h, 1, phi, rho)

    if variant == "shifted":
        base = gen_datum(seed + 104729, rng.choice(["central", "semidirect"]))
        b = gen_b(base, random.Random(seed + 1299709))
        return transform_data_by_b(base, b)

    raise ValueError(f"unknown datum variant {variant!r}")


def _datum_base_algebra(rng) -> ColorHomLieAlgebra:
    roll = rng.randrange(6)
    if roll == 0:
        return sl2()
    if roll == 1:
        return heisenberg()
    if roll == 2:
        return color_z2z2()
    if roll == 3:
        group, eps = super_group()
        dims = rng.randint(2, 3)
        return abelian(dims, _random_degrees(group, eps, dims, rng), group, eps)
    if roll == 4:
        base = sl2()
        beta = diagonal_morphisms(base, rng)
        return yau_twist(base, beta)
    group, eps = trivial_group()
    return abelian(2, group=group, eps=eps)


def _datum_abelian_coeffs(g: ColorHomLieAlgebra, rng) -> ColorHomLieAlgebra:
    dim = rng.randint(1, 2)
    degrees = _random_degrees(g.group, g.eps, dim, rng)
    alpha = None
    if rng.random() < 0.4:
        alpha = linalg.zeros(dim, dim)
        for i in range(dim):
            alpha[i][i] = F(rng.choice([1, 2, -1]))
    return abelian(dim, degrees, g.group, g.eps, alpha=alpha,
                   names=[f"w{i+1}" for i in range(dim)])


def gen_b(data: ExtensionData, rng: random.Random) -> list:
    """A degree-zero twist-intertwining map ``g -> h`` (seeded).

    Solves ``alpha_h b = b alpha_g`` exactly and samples a rational
    combination of the solution basis, so shifted sections stay honest
    sections of the built extension.
    """
    g, h = data.g, data.h
    cells = [(t, s) for t in range(h.dim) for s in range(g.dim)
             if h.basis[t].degree == g.basis[s].degree]
    if not cells:
        return linalg.zeros(h.dim, g.dim)
    index = {c: i for i, c in enumerate(cells)}
    rows = []
    for t in range(h.dim):
        for s in range(g.dim):
            row = [ZERO] * len(cells)
            nonzero = False
            for (u, v), idx in index.items():
                coeff = ZERO
                if v == s:
                    coeff += h.alpha[t][u]
                if u == t:
                    coeff -= g.alpha[v][s]
                if coeff:
                    row[idx] = coeff
                    nonzero = True
            if nonzero:
                rows.append(row)
    basis = linalg.nullspace(rows, cols=len(cells))
    vec = [ZERO] * len(cells)
    for bvec in basis:
        c = F(rng.randint(-2, 2))
        if c:
            vec = [a + c * bb for a, bb in zip(vec, bvec)]
    b = linalg.zeros(h.dim, g.dim)
    for cell, val in zip(cells, vec):
        b[cell[0]][cell[1]] = val
    return b


# ---------------------------------------------------------------------------
# oracles
# ---------------------------------------------------------------------------

def oracle_jacobi_classical(algebra: ColorHomLieAlgebra) -> Report:
    """Textbook Jacobi identity: no commutation factor, no twist.

    Only meaningful on trivially graded algebras with identity twist, where
    it must agree with the production checker.
    """
    rep = Report()
    n = algebra.dim
    bad = []
    for i in range(n):
        for j in range(n):
            for k in range(n):
                total = GradedVector()
                for (a, b, c) in ((i, j, k), (j, k, i), (k, i, j)):
                    total = total + algebra.bracket(
                        GradedVector.basis(a), algebra.bracket_basis(b, c)
                    )
                if not total.is_zero():
                    bad.append({"triple": (i, j, k)})
    rep.add("classical_jacobi", not bad, bad)
    return rep


def oracle_inversions(eps: CommutationFactor, sigma, degrees) -> Fraction:
    """The permutation factor via the defining display.

    The display defines the value at ``sigma^{-1}`` as the product of
    ``eps(a_i, a_j)`` over inversions of ``sigma``; so to evaluate at
    ``sigma`` we enumerate the inversions of the inverse permutation.
    """
    k = len(sigma)
    inverse = [0] * k
    for i, s in enumerate(sigma):
        inverse[s] = i
    value = ONE
    for i in range(k):
        for j in range(i + 1, k):
            if inverse[i] > inverse[j]:
                value *= eps(degrees[i], degrees[j])
    return value


def oracle_delta_eval(phi: Connection, psi: GradedCochain, args) -> GradedVector:
    """The covariant-differential display evaluated on one ordered tuple.

    Independent of the production path, which stores values on canonical
    tuples and extends by graded skew symmetry; agreement on shuffled
    tuples certifies that the display itself is graded skew.
    """
    src = psi.source
    eps = src.eps
    degs = [src.basis[i].degree for i in args]
    total = GradedVector()
    for i in range(len(args)):
        rest = [args[m] for m in range(len(args)) if m != i]
        inner = psi.eval(rest)
        if inner.is_zero():
            continue
        theta = eps(degree_sum(src.group, degs[:i]), degs[i])
        total = total + phi.apply_basis(args[i], inner).scale(F(-1) ** i * theta)
    for i in range(len(args)):
        for j in range(i + 1, len(args)):
            bracket = src.bracket_basis(args[i], args[j])
            if bracket.is_zero():
                continue
            theta = eps(degree_sum(src.group, degs[i + 1:j]), degs[j])
            call = []
            for m in range(len(args)):
                if m == j:
                    continue
                call.append(bracket if m == i
                            else src.apply_alpha(GradedVector.basis(args[m])))
            value = psi.eval_multi(call)
            total = total + value.scale(F(-1) ** j * theta)
    return total


def oracle_rank(matrix) -> int:
    """Forward elimination only, no canonical form; counts surviving rows."""
    if not matrix or not matrix[0]:
        return 0
    work = [row[:] for row in matrix]
    rank = 0
    ncols = len(work[0])
    used = [False] * len(work)
    for col in range(ncols):
        pivot = None
        for r in range(len(work)):
            if not used[r] and work[r][col]:
                pivot = r
                break
        if pivot is None:
            continue
        used[pivot] = True
        rank += 1
        prow = work[pivot]
        inv = ONE / prow[col]
        for r in range(len(work)):
            if r != pivot and not used[r] and work[r][col]:
                f = work[r][col] * inv
                work[r] = [x - f * y for x, y in zip(work[r], prow)]
    return rank


def oracle_cohomology_dim(phi: Connection, p: int, weight=None) -> int:
    """dim H^p by full enumeration and naive rank computations."""
    src = phi.source
    if weight is None:
        weight = src.group.zero
    mod = phi.module

    def basis_of(arity):
        return cochain_coords(src, mod, arity, weight)

    def delta_mat(arity):
        dom = basis_of(arity)
        cod = basis_of(arity + 1)
        if not dom or not cod:
            return [], dom, cod
        rows = []
        for key in canonical_tuples(src, arity + 1):
            for t in range(mod.dim):
                if (key, t) not in set(cod):
                    continue
                row = []
                for (dkey, dt) in dom:
                    one = GradedCochain(src, mod, arity, weight,
                                        {dkey: GradedVector({dt: ONE})})
                    row.append(oracle_delta_eval(phi, one, list(key))[t])
                rows.append(row)
        return rows, dom, cod

    d_p, dom_p, _ = delta_mat(p)
    rank_p = oracle_rank(d_p)
    if p == 0:
        return len(dom_p) - rank_p
    d_prev, dom_prev, _ = delta_mat(p - 1)
    rank_prev = oracle_rank(d_prev)
    return len(dom_p) - rank_p - rank_prev
