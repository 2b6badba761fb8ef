"""Extensions: construction, data extraction, equivalence, obstructions.

An extension of ``g`` by ``h`` is a short exact sequence
``0 -> h -> e -> g -> 0`` of graded algebras and twist-intertwining
degree-zero morphisms.  Choosing an even section ``s`` of the projection
produces the classification datum: the connection

    ``phi_x(w) = [alpha^{k-1}(s(x)), w]``

and its curvature

    ``rho(x, y) = [s(x), s(y)] - s([x, y])``.

The pair must satisfy two identities for the direct-sum model with the
structure bracket

    ``[w1 + x1, w2 + x2] = [w1, w2] + phi_{x1} w2
      - eps(deg w1, deg x2) phi_{x2} w1 + rho(x1, x2) + [x1, x2]``

to satisfy the twisted Jacobi identity.  In the graded twisted setting the
two identities read (both reduce to the familiar untwisted displays when
the twists are trivial):

  flatness / curvature identity (one equation of operators on h per pair):

    ``phi_{a(x)} phi_y - eps(x, y) phi_{a(y)} phi_x - phi_{[x,y]} o alpha_h
      = [rho(x, y), alpha_h(.)]``                          (eq14)

  cocycle identity (one equation in h per triple):

    ``sum_cyclic eps(z, x) (phi_{a(x)} rho(y, z) + rho(a(x), [y, z])) = 0``
                                                            (eq15)

where ``a = alpha_g``.  ``check_data`` verifies both, plus the covariant
differential form ``delta_phi(rho) = 0`` of the cocycle identity, and
asserts their agreement; the two provably coincide whenever the connection
is twist-compatible (``phi o alpha_g = phi``, e.g. untwisted ``g`` or a
zero connection), and the compatibility is reported so the boundary of the
display-level theory stays visible.

The twist on a built extension is the block sum ``alpha_h (+) alpha_g``:
the unique choice making the canonical injection and projection
twist-intertwining.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .algebra import BasisElement, ColorHomLieAlgebra, GradedVector, apply_matrix
from .cochains import (
    Connection,
    GradedCochain,
    Module,
    bracket_wedge,
    canonical_tuples,
    cochain_coords,
    cohomology_space,
    covariant_delta,
    delta_matrix,
)
from .derivations import TwistedDerivation, derivation_conditions, outer_quotient
from .errors import (
    InternalConsistencyError,
    StructureError,
    UnsupportedOperationError,
)
from .grading import format_scalar
from .report import Report

ZERO = Fraction(0)
ONE = Fraction(1)


# ---------------------------------------------------------------------------
# data types
# ---------------------------------------------------------------------------

@dataclass
class ExtensionData:
    """Classification datum ``(phi, rho)`` at twist level ``k``."""

    g: ColorHomLieAlgebra
    h: ColorHomLieAlgebra
    k: int
    phi: Connection
    rho: GradedCochain

    def __post_init__(self):
        if self.g.group != self.h.group or self.g.eps != self.h.eps:
            raise StructureError("datum needs one grading group and factor for g and h")
        if self.phi.source is not self.g and self.phi.source != self.g:
            raise StructureError("connection source must be g")
        if self.phi.module.dim != self.h.dim or not self.phi.module.has_bracket:
            raise StructureError("connection must act on h")
        if self.rho.p != 2 or not self.rho.weight.is_zero():
            raise StructureError("curvature must be an even 2-cochain of weight zero")

    def phi_matrix(self, x: GradedVector):
        out = linalg.zeros(self.h.dim, self.h.dim)
        for i, c in x.coeffs.items():
            m = self.phi.matrices[i]
            out = [[o + c * v for o, v in zip(orow, mrow)] for orow, mrow in zip(out, m)]
        return out

    def copy(self) -> "ExtensionData":
        rho = GradedCochain(self.g, self.phi.module, 2, self.g.group.zero, self.rho.values)
        phi = Connection(self.g, self.phi.module,
                         [linalg.copy(m) for m in self.phi.matrices],
                         k=self.k, action_kind=self.phi.action_kind)
        return ExtensionData(self.g, self.h, self.k, phi, rho)

    def __eq__(self, other):
        return (
            isinstance(other, ExtensionData)
            and self.k == other.k
            and self.g == other.g
            and self.h == other.h
            and self.phi.matrices == other.phi.matrices
            and self.rho.values == other.rho.values
        )


@dataclass
class ExtensionSequence:
    """``0 -> h -(i)-> e -(p)-> g -> 0`` with an optional section ``s``."""

    h: ColorHomLieAlgebra
    e: ColorHomLieAlgebra
    g: ColorHomLieAlgebra
    i: list  # dim e x dim h
    p: list  # dim g x dim e
    s: list | None = None  # dim e x dim g


@dataclass
class EquivalenceWitness:
    """A degree-zero map ``b : g -> h`` relating two data."""

    b: list  # dim h x dim g

    def verify(self, data1: ExtensionData, data2: ExtensionData) -> bool:
        ok, _ = check_equivalence_by_b(data1, data2, self.b)
        return ok


@dataclass
class ObstructionResult:
    lam: GradedCochain  # center-valued 3-cochain, stored in h coordinates
    trivial: bool
    witness_nu: GradedCochain | None  # center-valued 2-cochain with delta(nu) = lam
    report: Report


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def left_mult_matrix(h: ColorHomLieAlgebra, v: GradedVector) -> list:
    """Matrix of ``w -> [v, w]`` on h."""
    n = h.dim
    cols = [h.bracket(v, GradedVector.basis(j)).to_dense(n) for j in range(n)]
    return [[cols[j][t] for j in range(n)] for t in range(n)]


def _is_degree_zero_map(src: ColorHomLieAlgebra, dst: ColorHomLieAlgebra, m) -> list:
    bad = []
    if len(m) != dst.dim or any(len(row) != src.dim for row in m):
        return [{"reason": "shape mismatch"}]
    for t in range(dst.dim):
        for s in range(src.dim):
            if m[t][s] and dst.basis[t].degree != src.basis[s].degree:
                bad.append({"entry": (t, s)})
    return bad


def _morphism_report(rep: Report, name: str, src, dst, m) -> None:
    bad = _is_degree_zero_map(src, dst, m)
    rep.add(f"{name}_degree_zero", not bad, bad)
    if bad:
        rep.add(f"{name}_bracket_preserving", False, [{"reason": "shape/degree failed"}])
        rep.add(f"{name}_twist_intertwining", False, [{"reason": "shape/degree failed"}])
        return
    bad = []
    for a in range(src.dim):
        for b in range(a, src.dim):
            lhs = apply_matrix(m, src.bracket_basis(a, b))
            rhs = dst.bracket(apply_matrix(m, GradedVector.basis(a)),
                              apply_matrix(m, GradedVector.basis(b)))
            if lhs != rhs:
                bad.append({"pair": (a, b)})
    rep.add(f"{name}_bracket_preserving", not bad, bad)
    inter = linalg.mat_sub(linalg.matmul(m, src.alpha), linalg.matmul(dst.alpha, m))
    ok = linalg.is_zero_matrix(inter)
    rep.add(f"{name}_twist_intertwining", ok, [] if ok else [{"residual_nonzero": True}])


def left_inverse(m) -> list:
    """Left inverse of an injective tall matrix (columns independent)."""
    rows, cols = len(m), len(m[0]) if m else 0
    aug = [m[r][:] + [ONE if r == t else ZERO for t in range(rows)] for r in range(rows)]
    red, pivots = linalg.rref(aug)
    if pivots[:cols] != list(range(cols)):
        raise StructureError("matrix has dependent columns; no left inverse")
    return [red[r][cols:] for r in range(cols)]


def preimage_under(m, vec: GradedVector, what: str) -> GradedVector:
    """Solve ``m x = vec`` exactly; error if the value is outside the image."""
    dense = vec.to_dense(len(m))
    sol = linalg.solve(m, dense)
    if sol is None:
        raise StructureError(f"{what}: value {vec!r} lies outside the expected subspace")
    return GradedVector.from_dense(sol)


# ---------------------------------------------------------------------------
# sequences
# ---------------------------------------------------------------------------

def check_sequence(seq: ExtensionSequence) -> Report:
    """Morphism, exactness and section checks with located witnesses."""
    rep = Report()
    h, e, g = seq.h, seq.e, seq.g
    _morphism_report(rep, "injection", h, e, seq.i)
    _morphism_report(rep, "projection", e, g, seq.p)

    rank_i = linalg.rank(seq.i)
    rep.add("injection_injective", rank_i == h.dim,
            [] if rank_i == h.dim else [{"rank": rank_i, "dim": h.dim}])
    rank_p = linalg.rank(seq.p)
    rep.add("projection_surjective", rank_p == g.dim,
            [] if rank_p == g.dim else [{"rank": rank_p, "dim": g.dim}])
    comp = linalg.matmul(seq.p, seq.i)
    rep.add("composite_zero", linalg.is_zero_matrix(comp),
            [] if linalg.is_zero_matrix(comp) else [{"residual_nonzero": True}])
    dims_ok = h.dim + g.dim == e.dim
    rep.add("dimension_arithmetic", dims_ok,
            [] if dims_ok else [{"dims": (h.dim, e.dim, g.dim)}])
    rep.add(
        "exactness", rank_i == h.dim and rank_p == g.dim
        and linalg.is_zero_matrix(comp) and dims_ok,
        detail="im(i) = ker(p) via rank arithmetic",
    )
    if seq.s is not None:
        bad = _is_degree_zero_map(g, e, seq.s)
        rep.add("section_degree_zero", not bad, bad)
        ps = linalg.matmul(seq.p, seq.s)
        ok = ps == linalg.identity(g.dim)
        rep.add("section_right_inverse", ok, [] if ok else [{"p_o_s": "not identity"}])
    return rep


def canonical_section(seq: ExtensionSequence) -> list:
    """Deterministic section: solve ``p s = id`` with free coordinates zero."""
    cols = []
    for j in range(seq.g.dim):
        target = [ONE if t == j else ZERO for t in range(seq.g.dim)]
        sol = linalg.solve(seq.p, target)
        if sol is None:
            raise StructureError("projection is not surjective; no section exists")
        cols.append(sol)
    return [[cols[j][t] for j in range(seq.g.dim)] for t in range(len(seq.p[0]))]


def extract_data(seq: ExtensionSequence, s=None, k: int = 1) -> ExtensionData:
    """Connection and curvature of a section.

    ``phi_x = i^+ o [alpha_e^{k-1}(s(x)), i(.)]`` and
    ``rho(x, y) = i^+([s(x), s(y)] - s([x, y]))``, where ``i^+`` is the left
    inverse of the injection.  Membership of each ``phi_x`` in the level-k
    derivation space is reported by ``check_data``, not assumed here.
    """
    if s is None:
        s = seq.s if seq.s is not None else canonical_section(seq)
    h, e, g = seq.h, seq.e, seq.g
    seq_rep = check_sequence(ExtensionSequence(h, e, g, seq.i, seq.p, s))
    if not seq_rep.passed:
        failed = [c.name for c in seq_rep.checks if not c.passed]
        raise StructureError(f"not a valid extension sequence: {', '.join(failed)}")

    alpha_pow = e.alpha_power(k - 1)
    module = Module.from_algebra(h)
    mats = []
    for x in range(g.dim):
        sx = apply_matrix(s, GradedVector.basis(x))
        twisted = apply_matrix(alpha_pow, sx)
        cols = []
        for w in range(h.dim):
            iw = apply_matrix(seq.i, GradedVector.basis(w))
            value = e.bracket(twisted, iw)
            cols.append(preimage_under(seq.i, value, "phi value").to_dense(h.dim))
        mats.append([[cols[w][t] for w in range(h.dim)] for t in range(h.dim)])
    phi = Connection(g, module, mats, k=k, action_kind="derivation")

    rho = GradedCochain(g, module, 2, g.group.zero)
    for key in canonical_tuples(g, 2):
        x, y = key
        sx = apply_matrix(s, GradedVector.basis(x))
        sy = apply_matrix(s, GradedVector.basis(y))
        value = e.bracket(sx, sy) - apply_matrix(s, g.bracket_basis(x, y))
        val_h = preimage_under(seq.i, value, "curvature value")
        if not val_h.is_zero():
            rho.set_value(key, val_h)
    return ExtensionData(g, h, k, phi, rho)


# ---------------------------------------------------------------------------
# datum validation
# ---------------------------------------------------------------------------

def _eq14_residual(data: ExtensionData, x: int, y: int) -> list:
    g, h = data.g, data.h
    ax = apply_matrix(g.alpha, GradedVector.basis(x))
    ay = apply_matrix(g.alpha, GradedVector.basis(y))
    phi_ax = data.phi_matrix(ax)
    phi_ay = data.phi_matrix(ay)
    e = g.eps(g.basis[x].degree, g.basis[y].degree)
    lhs = linalg.mat_sub(
        linalg.matmul(phi_ax, data.phi.matrices[y]),
        linalg.mat_scale(linalg.matmul(phi_ay, data.phi.matrices[x]), e),
    )
    lhs = linalg.mat_sub(
        lhs, linalg.matmul(data.phi_matrix(g.bracket_basis(x, y)), h.alpha)
    )
    rhs = linalg.matmul(left_mult_matrix(h, data.rho.eval((x, y))), h.alpha)
    return linalg.mat_sub(lhs, rhs)


def _eq15_residual(data: ExtensionData, x: int, y: int, z: int) -> GradedVector:
    g = data.g
    total = GradedVector()
    for (a, b, c) in ((x, y, z), (y, z, x), (z, x, y)):
        factor = g.eps(g.basis[c].degree, g.basis[a].degree)
        aa = apply_matrix(g.alpha, GradedVector.basis(a))
        t1 = data.phi.apply(aa, data.rho.eval((b, c)))
        t2 = data.rho.eval_multi([aa, g.bracket_basis(b, c)])
        total = total + (t1 + t2).scale(factor)
    return total


def check_data(data: ExtensionData) -> Report:
    """Verify the two classification identities exactly.

    The cocycle identity is verified both as the cyclic sum and as
    ``delta_phi(rho) = 0`` through the cochain layer, and the agreement of
    the two verdicts is itself asserted.  Twist compatibility of the
    connection and membership of each ``phi_x`` in the level-k derivation
    space are reported as informational diagnostics.
    """
    rep = Report()
    g, h = data.g, data.h

    bad = []
    for x in range(g.dim):
        for y in range(x, g.dim):
            res = _eq14_residual(data, x, y)
            if not linalg.is_zero_matrix(res):
                bad.append({"pair": (x, y)})
    rep.add("eq14_curvature_identity", not bad, bad,
            detail="[phi_x, phi_y] - phi_[x,y] equals bracketing by rho(x,y)")

    bad = []
    for x in range(g.dim):
        for y in range(g.dim):
            for z in range(g.dim):
                res = _eq15_residual(data, x, y, z)
                if not res.is_zero():
                    bad.append({"triple": (x, y, z),
                                "residual": {t: format_scalar(c) for t, c in res.items()}})
    cyclic_ok = not bad
    rep.add("eq15_cocycle_cyclic", cyclic_ok, bad[:8])

    bianchi = covariant_delta(data.phi, data.rho)
    bianchi_ok = bianchi.is_zero()
    rep.add("eq15_bianchi", bianchi_ok,
            [] if bianchi_ok else [{"tuple": key, "residual": {t: format_scalar(c) for t, c in v.items()}}
                                   for key, v in sorted(bianchi.values.items())[:8]],
            detail="delta_phi(rho) = 0 via the cochain layer")
    rep.add("eq15_agreement", cyclic_ok == bianchi_ok,
            [] if cyclic_ok == bianchi_ok else
            [{"cyclic": cyclic_ok, "bianchi": bianchi_ok,
              "hint": "connection is not twist-compatible (phi o alpha_g != phi)"}])

    compat = []
    for x in range(g.dim):
        ax = apply_matrix(g.alpha, GradedVector.basis(x))
        if data.phi_matrix(ax) != data.phi.matrices[x]:
            compat.append({"index": x, "condition": "phi(alpha_g x) = phi(x)"})
        lhs = linalg.matmul(h.alpha, data.phi.matrices[x])
        rhs = linalg.matmul(data.phi_matrix(ax), h.alpha)
        if lhs != rhs:
            compat.append({"index": x, "condition": "alpha_h o phi_x = phi_{alpha_g x} o alpha_h"})
    for key in canonical_tuples(g, 2):
        x, y = key
        lhs = h.apply_alpha(data.rho.eval(key))
        rhs = data.rho.eval_multi([
            apply_matrix(g.alpha, GradedVector.basis(x)),
            apply_matrix(g.alpha, GradedVector.basis(y)),
        ])
        if lhs != rhs:
            compat.append({"pair": (x, y), "condition": "alpha_h(rho(x,y)) = rho(alpha_g x, alpha_g y)"})
    rep.add("twist_compatibility", not compat, compat, informational=True,
            detail="needed for a multiplicative built extension and for the "
                   "covariant-differential identities beyond the untwisted regime")

    bad = []
    for x in range(g.dim):
        cond = derivation_conditions(h, data.phi.matrices[x], data.k,
                                     g.basis[x].degree)
        if not cond.passed:
            bad.append({"index": x,
                        "failed": [c.name for c in cond.checks if not c.passed]})
    rep.add("phi_derivation_membership", not bad, bad, informational=True,
            detail=f"phi_x in the level-{data.k} derivation space of h; "
                   "reported, not assumed")
    return rep


# ---------------------------------------------------------------------------
# building extensions
# ---------------------------------------------------------------------------

def build_extension(data: ExtensionData, require_multiplicative: bool = False) -> ExtensionSequence:
    """The direct-sum model with the structure bracket; twist is the block sum.

    The built algebra is re-validated; a twisted-Jacobi failure after a
    passing ``check_data`` would be a bug in this module and raises
    :class:`InternalConsistencyError`.
    """
    rep = check_data(data)
    if not rep.passed:
        failed = [c.name for c in rep.checks if not c.passed and not c.informational]
        raise StructureError(f"datum fails validation: {', '.join(failed)}")
    if require_multiplicative and not rep["twist_compatibility"].passed:
        raise StructureError(
            "multiplicative extension requested but the datum is not twist-compatible"
        )
    g, h = data.g, data.h
    nh, ng = h.dim, g.dim
    names_h = [b.name for b in h.basis]
    names_g = [b.name for b in g.basis]
    if set(names_h) & set(names_g):
        names_h = [f"h:{n}" for n in names_h]
        names_g = [f"g:{n}" for n in names_g]
    basis = [BasisElement(n, b.degree) for n, b in zip(names_h, h.basis)]
    basis += [BasisElement(n, b.degree) for n, b in zip(names_g, g.basis)]

    structure = {}
    for (a, b), vec in h.structure.items():
        structure[(a, b)] = GradedVector(dict(vec.coeffs))
    for x in range(ng):
        for w in range(nh):
            val = data.phi.apply_basis(x, GradedVector.basis(w))
            if not val.is_zero():
                # stored as [w, s(x)] = -eps(deg w, deg x) phi_x(w)
                factor = -g.eps(h.basis[w].degree, g.basis[x].degree)
                structure[(w, nh + x)] = val.scale(factor)
    for key in canonical_tuples(g, 2):
        x, y = key
        val = GradedVector(dict(data.rho.eval(key).coeffs))
        gpart = g.bracket_basis(x, y)
        total = val + GradedVector({nh + t: c for t, c in gpart.coeffs.items()})
        if not total.is_zero():
            structure[(nh + x, nh + y)] = total

    alpha = linalg.zeros(nh + ng, nh + ng)
    for t in range(nh):
        for u in range(nh):
            alpha[t][u] = h.alpha[t][u]
    for t in range(ng):
        for u in range(ng):
            alpha[nh + t][nh + u] = g.alpha[t][u]

    e = ColorHomLieAlgebra(g.group, g.eps, basis, structure, alpha)
    for check in (e.check_grading(), e.check_skew(), e.check_hom_jacobi()):
        if not check.passed:
            raise InternalConsistencyError(
                f"built extension fails {check.checks[0].name}: "
                f"{check.checks[0].witnesses[:3]}"
            )

    i = linalg.zeros(nh + ng, nh)
    for t in range(nh):
        i[t][t] = ONE
    p = linalg.zeros(ng, nh + ng)
    for t in range(ng):
        p[t][nh + t] = ONE
    s = linalg.zeros(nh + ng, ng)
    for t in range(ng):
        s[nh + t][t] = ONE
    return ExtensionSequence(h, e, g, i, p, s)


# ---------------------------------------------------------------------------
# equivalence and splitting
# ---------------------------------------------------------------------------

def _b_as_cochain(data: ExtensionData, b) -> GradedCochain:
    bad = _is_degree_zero_map(data.g, data.h, b)
    if bad:
        raise StructureError(f"b is not a degree-zero map: {bad[0]}")
    cochain = GradedCochain(data.g, data.phi.module, 1, data.g.group.zero)
    for x in range(data.g.dim):
        col = GradedVector.from_dense([b[t][x] for t in range(data.h.dim)])
        if not col.is_zero():
            cochain.set_value((x,), col)
    return cochain


def transform_data_by_b(data: ExtensionData, b) -> ExtensionData:
    """The section shift ``s -> s + b``:

    ``phi'_x = phi_x + [alpha_h^{k-1}(b(x)), .]`` and
    ``rho' = rho + delta_phi(b) + (1/2)[b, b]_wedge``.
    """
    g, h = data.g, data.h
    b_cochain = _b_as_cochain(data, b)
    alpha_pow = h.alpha_power(data.k - 1)
    mats = []
    for x in range(g.dim):
        bx = apply_matrix(alpha_pow, GradedVector.from_dense(
            [b[t][x] for t in range(h.dim)]
        ))
        mats.append([
            [m + l for m, l in zip(mrow, lrow)]
            for mrow, lrow in zip(data.phi.matrices[x], left_mult_matrix(h, bx))
        ])
    phi = Connection(g, data.phi.module, mats, k=data.k, action_kind=data.phi.action_kind)
    rho = data.rho + covariant_delta(data.phi, b_cochain) \
        + bracket_wedge(b_cochain, b_cochain).scale(Fraction(1, 2))
    return ExtensionData(g, h, data.k, phi, rho)


def check_equivalence_by_b(data1: ExtensionData, data2: ExtensionData, b) -> tuple[bool, list]:
    """Exact equality of ``transform_data_by_b(data1, b)`` and ``data2``."""
    if (data1.g, data1.h, data1.k) != (data2.g, data2.h, data2.k):
        return False, [{"reason": "data live on different algebras or levels"}]
    moved = transform_data_by_b(data1, b)
    residuals = []
    for x in range(data1.g.dim):
        if moved.phi.matrices[x] != data2.phi.matrices[x]:
            residuals.append({"phi_index": x})
    for key in canonical_tuples(data1.g, 2):
        if moved.rho.eval(key) != data2.rho.eval(key):
            residuals.append({"rho_pair": key})
    return not residuals, residuals


def equivalence_map_matrix(data: ExtensionData, b) -> list:
    """The block map ``w + x -> w - b(x) + x`` between the two built models."""
    nh, ng = data.h.dim, data.g.dim
    m = linalg.identity(nh + ng)
    for t in range(nh):
        for x in range(ng):
            m[t][nh + x] = -b[t][x]
    return m


def verify_extension_equivalence(seq1: ExtensionSequence, seq2: ExtensionSequence,
                                 f) -> Report:
    """Is ``f : e1 -> e2`` an equivalence of extensions?

    Checks that ``f`` is an invertible twist-intertwining bracket-preserving
    degree-zero map with ``f o i1 = i2`` and ``p2 o f = p1``.
    """
    rep = Report()
    _morphism_report(rep, "map", seq1.e, seq2.e, f)
    rep.add("map_invertible", linalg.invert(f) is not None)
    ok = linalg.matmul(f, seq1.i) == seq2.i
    rep.add("commutes_with_injections", ok)
    ok = linalg.matmul(seq2.p, f) == seq1.p
    rep.add("commutes_with_projections", ok)
    return rep


def split_verify(data: ExtensionData, b) -> bool:
    """Does ``b`` witness splitting: ``rho = -delta_phi(b) - (1/2)[b,b]``?"""
    b_cochain = _b_as_cochain(data, b)
    want = (covariant_delta(data.phi, b_cochain)
            + bracket_wedge(b_cochain, b_cochain).scale(Fraction(1, 2))).scale(Fraction(-1))
    return data.rho == want


def split_solve(data: ExtensionData) -> list | None:
    """Solve the splitting equation for ``b`` when the kernel is abelian.

    With abelian ``h`` the quadratic wedge term vanishes and splitting is
    the exact linear system ``delta_phi(b) = -rho``.  Returns a matrix or
    ``None``; non-abelian coefficients raise (the general problem is
    quadratic and out of scope).
    """
    g, h = data.g, data.h
    if not h.is_abelian():
        raise UnsupportedOperationError("split solving requires abelian coefficients")
    cells = [(t, s) for t in range(h.dim) for s in range(g.dim)
             if h.basis[t].degree == g.basis[s].degree]
    if not cells:
        return None if not data.rho.is_zero() else linalg.zeros(h.dim, g.dim)
    rows, rhs = [], []
    for key in canonical_tuples(g, 2):
        x, y = key
        target = data.rho.eval(key).scale(Fraction(-1))
        coeffs = [dict() for _ in range(h.dim)]

        def put(target_idx, cell, c):
            if c:
                coeffs[target_idx][cell] = coeffs[target_idx].get(cell, ZERO) + c

        # delta_phi(b)(x, y) = phi_x b(y) - eps(x, y) phi_y b(x) - b([x, y])
        for t in range(h.dim):
            col = data.phi.apply_basis(x, GradedVector.basis(t))
            for w, c in col.coeffs.items():
                put(w, (t, y), c)
            col = data.phi.apply_basis(y, GradedVector.basis(t))
            factor = g.eps(g.basis[x].degree, g.basis[y].degree)
            for w, c in col.coeffs.items():
                put(w, (t, x), -factor * c)
        for u, cu in g.bracket_basis(x, y).coeffs.items():
            for t in range(h.dim):
                put(t, (t, u), -cu)
        for w in range(h.dim):
            if coeffs[w] or target[w]:
                row = [coeffs[w].get(cell, ZERO) for cell in cells]
                rows.append(row)
                rhs.append(target[w])
    if not rows:
        return linalg.zeros(h.dim, g.dim)
    aug = [row + [val] for row, val in zip(rows, rhs)]
    red, pivots = linalg.rref(aug)
    if len(cells) in pivots:
        return None
    sol = [ZERO] * len(cells)
    for r, pc in enumerate(pivots):
        sol[pc] = red[r][len(cells)]
    b = linalg.zeros(h.dim, g.dim)
    for cell, val in zip(cells, sol):
        b[cell[0]][cell[1]] = val
    return b


# ---------------------------------------------------------------------------
# outer action, obstruction, classification
# ---------------------------------------------------------------------------

@dataclass
class InducedOuterMap:
    """The connection pushed to the outer quotient, with its homomorphism check."""

    data: ExtensionData
    quotient: object
    classes: list  # complement coordinates per basis element of g
    report: Report


def induced_phibar(data: ExtensionData) -> InducedOuterMap:
    """Project the connection to derivations-mod-inner and check it is a
    homomorphism (the curvature identity makes the commutator defect inner)."""
    rep = check_data(data)
    if not rep.passed:
        raise StructureError("datum fails validation; no induced outer map")
    g, h = data.g, data.h
    quotient = outer_quotient(h, data.k)
    classes = []
    out_rep = Report()
    for x in range(g.dim):
        der = TwistedDerivation(h, data.k, g.basis[x].degree, data.phi.matrices[x])
        classes.append(quotient.project(der))

    bad = []
    for x in range(g.dim):
        for y in range(x, g.dim):
            e = g.eps(g.basis[x].degree, g.basis[y].degree)
            comm = linalg.mat_sub(
                linalg.matmul(data.phi.matrices[x], data.phi.matrices[y]),
                linalg.mat_scale(
                    linalg.matmul(data.phi.matrices[y], data.phi.matrices[x]), e),
            )
            defect = linalg.mat_sub(comm, data.phi_matrix(g.bracket_basis(x, y)))
            dx = g.basis[x].degree + g.basis[y].degree
            der = TwistedDerivation(h, data.k, dx, defect)
            try:
                coords = quotient.project(der)
            except StructureError:
                bad.append({"pair": (x, y), "reason": "commutator defect not a derivation"})
                continue
            if any(coords):
                bad.append({"pair": (x, y), "reason": "commutator defect not inner"})
    out_rep.add("outer_homomorphism", not bad, bad,
                detail="class of [phi_x, phi_y] - phi_[x,y] vanishes in the quotient")
    return InducedOuterMap(data, quotient, classes, out_rep)


def solve_rho_for_lift(g: ColorHomLieAlgebra, h: ColorHomLieAlgebra,
                       phi: Connection, k: int = 1) -> GradedCochain | None:
    """Recover the unique curvature of a lift over centerless coefficients.

    Solves ``[rho(x,y), alpha_h(.)] = phi_{a(x)} phi_y - eps phi_{a(y)} phi_x
    - phi_{[x,y]} o alpha_h`` for each pair; ``None`` when some pair is
    unsolvable (the lift induces no homomorphism), a :class:`StructureError`
    when a solution exists but is not unique (coefficients have center).
    """
    module = Module.from_algebra(h)
    rho = GradedCochain(g, module, 2, g.group.zero)
    stub = ExtensionData(g, h, k, phi, rho)
    for key in canonical_tuples(g, 2):
        x, y = key
        res = _eq14_residual(stub, x, y)
        # unknown v: [v, alpha_h(.)] must equal the residual operator
        cells = [t for t in range(h.dim)
                 if h.basis[t].degree == g.basis[x].degree + g.basis[y].degree]
        rows, rhs = [], []
        for t in range(h.dim):
            for u in range(h.dim):
                row = []
                for v_idx in cells:
                    op = linalg.matmul(
                        left_mult_matrix(h, GradedVector.basis(v_idx)), h.alpha)
                    row.append(op[t][u])
                rows.append(row)
                rhs.append(res[t][u])
        aug = [row + [val] for row, val in zip(rows, rhs)]
        red, pivots = linalg.rref(aug)
        if len(cells) in pivots:
            return None
        if len(pivots) < len(cells):
            raise StructureError(
                "curvature not unique; coefficients have central directions"
            )
        sol = [ZERO] * len(cells)
        for r, pc in enumerate(pivots):
            sol[pc] = red[r][len(cells)]
        value = GradedVector({cells[idx]: c for idx, c in enumerate(sol)})
        if not value.is_zero():
            rho.set_value(key, value)
    return rho


def center_module_connection(data_or_phi, h: ColorHomLieAlgebra,
                             center=None) -> tuple[Connection, Module, list]:
    """Restrict a connection on ``h`` to the center of ``h``.

    Returns the restricted connection, the center module, and the center
    basis vectors.  Raises when some ``phi_x`` does not preserve the center.
    """
    phi = data_or_phi.phi if isinstance(data_or_phi, ExtensionData) else data_or_phi
    g = phi.source
    if center is None:
        center = h.center()
    module = Module.subspace(h, center, label="center")
    embed = module.embedding
    mats = []
    for x in range(g.dim):
        cols = []
        for z in center:
            image = apply_matrix(phi.matrices[x], z)
            coords = linalg.solve(embed, image.to_dense(h.dim)) if center else []
            if coords is None:
                raise StructureError(
                    f"phi_{x} does not preserve the center of the coefficients"
                )
            cols.append(coords)
        mats.append([[cols[j][t] for j in range(len(center))]
                     for t in range(len(center))])
    restricted = Connection(g, module, mats, k=phi.k, action_kind="module")
    return restricted, module, center


def obstruction_class(data: ExtensionData) -> ObstructionResult:
    """The center-valued 3-cochain ``lambda = delta_phi(rho)`` of a lift.

    Requires the curvature identity (eq14) to hold; verifies every value of
    ``lambda`` is central, then decides triviality by the exact linear
    system ``delta(nu) = lambda`` over center-valued 2-cochains.
    """
    rep = Report()
    g, h = data.g, data.h
    bad = []
    for x in range(g.dim):
        for y in range(x, g.dim):
            if not linalg.is_zero_matrix(_eq14_residual(data, x, y)):
                bad.append({"pair": (x, y)})
    rep.add("eq14_curvature_identity", not bad, bad)
    if bad:
        raise StructureError(
            "curvature identity fails; (phi, rho) is not a lift datum"
        )

    lam = covariant_delta(data.phi, data.rho)
    center = h.center()
    embed_ok = True
    if center:
        embed = Module.subspace(h, center).embedding
    for key, vec in lam.values.items():
        coords = linalg.solve(embed, vec.to_dense(h.dim)) if center else None
        if coords is None:
            embed_ok = False
            rep.add("lambda_central", False, [{"tuple": key}],
                    detail="a value of lambda lies outside the center")
            raise StructureError(
                f"obstruction value on {key} is not central; datum inconsistent"
            )
    rep.add("lambda_central", embed_ok)

    if lam.is_zero():
        nu = GradedCochain(g, Module.subspace(h, center) if center else lam.module,
                           2, g.group.zero) if center else None
        rep.add("trivial", True, detail="lambda = 0")
        zero_nu = None
        if center:
            zero_nu = nu
        return ObstructionResult(lam, True, zero_nu, rep)

    if not center:
        # nonzero lambda cannot be central-valued over a centerless algebra
        raise StructureError("nonzero obstruction over centerless coefficients")

    phibar, module, _ = center_module_connection(data.phi, h, center)
    mat, dom, cod = delta_matrix(phibar, 2, g.group.zero)
    lam_coords = []
    for (key, t) in cod:
        value = lam.values.get(key, GradedVector())
        coords = linalg.solve(module.embedding, value.to_dense(h.dim))
        lam_coords.append(coords[t])
    solution = linalg.solve(mat, lam_coords) if dom else (None if any(lam_coords) else [])
    trivial = solution is not None
    rep.add("trivial", trivial,
            detail="delta(nu) = lambda solvable over center-valued 2-cochains"
            if trivial else "exact linear solve certifies no primitive exists")
    witness = None
    if trivial:
        from .cochains import cochain_from_coords
        witness = cochain_from_coords(g, module, 2, g.group.zero, dom, solution)
        check = covariant_delta(phibar, witness)
        lam_in_z = cochain_from_coords(g, module, 3, g.group.zero, cod, lam_coords)
        if not (check - lam_in_z).is_zero():
            raise InternalConsistencyError("solved primitive does not reproduce lambda")
    return ObstructionResult(lam, trivial, witness, rep)


def lift_independence_check(data1: ExtensionData, data2: ExtensionData) -> bool:
    """Do two lift pairs give the same obstruction class?

    True when ``lambda(phi1, rho1) - lambda(phi2, rho2)`` is a coboundary of
    center-valued 2-cochains.
    """
    if (data1.g, data1.h, data1.k) != (data2.g, data2.h, data2.k):
        raise StructureError("lift pairs live on different algebras or levels")
    lam1 = covariant_delta(data1.phi, data1.rho)
    lam2 = covariant_delta(data2.phi, data2.rho)
    diff = lam1 - lam2
    h = data1.h
    center = h.center()
    if diff.is_zero():
        return True
    if not center:
        return False
    phibar, module, _ = center_module_connection(data1.phi, h, center)
    mat, dom, cod = delta_matrix(phibar, 2, data1.g.group.zero)
    target = []
    for (key, t) in cod:
        value = diff.values.get(key, GradedVector())
        coords = linalg.solve(module.embedding, value.to_dense(h.dim))
        if coords is None:
            return False
        target.append(coords[t])
    return linalg.solve(mat, target) is not None if dom else not any(target)


def parameterize_extensions(g: ColorHomLieAlgebra, h: ColorHomLieAlgebra,
                            phi: Connection, k: int = 1):
    """Abelian-coefficient classification: cohomology classes of curvatures.

    Requires abelian ``h`` and a homomorphic connection (curvature identity
    with zero right side).  Returns the degree-2 cohomology space of the
    connection action together with one representative datum per basis
    class; the zero class is the split extension.
    """
    if not h.is_abelian():
        raise UnsupportedOperationError("classification requires abelian coefficients")
    module = phi.module
    stub = ExtensionData(g, h, k, phi, GradedCochain(g, module, 2, g.group.zero))
    for x in range(g.dim):
        for y in range(x, g.dim):
            if not linalg.is_zero_matrix(_eq14_residual(stub, x, y)):
                raise StructureError(
                    f"connection is not a homomorphism on pair {(x, y)}"
                )
    space = cohomology_space(phi, 2, g.group.zero)
    data = []
    for rho in space.representative_cochains():
        data.append(ExtensionData(g, h, k, phi, rho))
    return space, data
