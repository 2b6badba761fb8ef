"""The document formats: the only I/O boundary of the package.

Documents are JSON with a canonical serialization: sorted keys, two-space
indent, one trailing newline, scalars as lowest-term ``"p/q"`` strings,
bracket pairs stored on ``i <= j`` with index/value pairs sorted by index.
Parsing an arbitrary well-formed document and serializing it again yields
the canonical form; serializing is idempotent on canonical documents,
which is what makes golden-file corpora diffable.

Kinds:
  ``.alg``   algebra (grading, commutation factor, basis, twist, brackets)
  ``.coch``  cochain over an algebra supplied in context
  ``.ext``   extension datum; references the two ``.alg`` files by path
  ``.seq``   extension sequence; references three ``.alg`` files by path
  matrices   a bare JSON array of rows of scalar strings
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .algebra import BasisElement, ColorHomLieAlgebra, GradedVector
from .cochains import Connection, GradedCochain, Module
from .errors import FormatError, StructureError
from .extensions import ExtensionData, ExtensionSequence
from .grading import CommutationFactor, GradingGroup, format_scalar, parse_scalar

ALG_FORMAT = "homlie.alg/1"
COCH_FORMAT = "homlie.coch/1"
EXT_FORMAT = "homlie.ext/1"
SEQ_FORMAT = "homlie.seq/1"


def _loads(text: str) -> dict:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON at line {exc.lineno}, column {exc.colno}", "") from None


def _expect(obj, key, kind, path, optional=False, default=None):
    if key not in obj:
        if optional:
            return default
        raise FormatError(f"missing field {key!r}", path)
    value = obj[key]
    if kind is not None and not isinstance(value, kind):
        raise FormatError(
            f"field {key!r} must be {getattr(kind, '__name__', kind)}", f"{path}.{key}"
        )
    return value


def _scalar(value, path) -> Fraction:
    try:
        return parse_scalar(value)
    except StructureError as exc:
        raise FormatError(str(exc), path) from None


def parse_matrix(obj, path) -> list:
    if not isinstance(obj, list) or any(not isinstance(row, list) for row in obj):
        raise FormatError("matrix must be an array of rows", path)
    return [
        [_scalar(x, f"{path}[{r}][{c}]") for c, x in enumerate(row)]
        for r, row in enumerate(obj)
    ]


def format_matrix(m) -> list:
    return [[format_scalar(x) for x in row] for row in m]


def _sparse_value(obj, path) -> GradedVector:
    if not isinstance(obj, list):
        raise FormatError("sparse value must be an array of [index, scalar] pairs", path)
    coeffs = {}
    for n, pair in enumerate(obj):
        if not (isinstance(pair, list) and len(pair) == 2 and isinstance(pair[0], int)):
            raise FormatError("entry must be [index, scalar]", f"{path}[{n}]")
        if pair[0] in coeffs:
            raise FormatError(f"duplicate index {pair[0]}", f"{path}[{n}]")
        coeffs[pair[0]] = _scalar(pair[1], f"{path}[{n}][1]")
    return GradedVector(coeffs)


def _format_sparse(vec: GradedVector) -> list:
    return [[i, format_scalar(c)] for i, c in vec.items()]


# ---------------------------------------------------------------------------
# algebras
# ---------------------------------------------------------------------------

@dataclass
class AlgebraDocument:
    algebra: ColorHomLieAlgebra
    metadata: dict = field(default_factory=dict)


def parse_algebra(text: str) -> AlgebraDocument:
    """Parse and structurally validate an algebra document.

    Mathematical axioms beyond the structural ones (grading of bracket
    values, commutation-factor laws, skew consistency of duplicated pairs)
    are enforced here so that a parsed algebra is always safe to compute
    with; the Jacobi and multiplicativity checks stay with ``validate``.
    """
    doc = _loads(text)
    fmt = _expect(doc, "format", str, "")
    if fmt != ALG_FORMAT:
        raise FormatError(f"unsupported format {fmt!r}, expected {ALG_FORMAT!r}", "format")

    grading = _expect(doc, "grading", dict, "")
    free_rank = _expect(grading, "free_rank", int, "grading")
    torsion = _expect(grading, "torsion", list, "grading", optional=True, default=[])
    try:
        group = GradingGroup(free_rank, tuple(torsion))
    except StructureError as exc:
        raise FormatError(str(exc), "grading") from None

    eps_table = parse_matrix(_expect(doc, "epsilon", list, ""), "epsilon")
    try:
        eps = CommutationFactor(group, eps_table, check=True)
    except StructureError as exc:
        raise FormatError(str(exc), "epsilon") from None

    basis_raw = _expect(doc, "basis", list, "")
    basis = []
    for n, entry in enumerate(basis_raw):
        if not isinstance(entry, dict):
            raise FormatError("basis entry must be an object", f"basis[{n}]")
        name = _expect(entry, "name", str, f"basis[{n}]")
        degree_raw = _expect(entry, "degree", list, f"basis[{n}]")
        if len(degree_raw) != group.num_generators:
            raise FormatError(
                f"degree has {len(degree_raw)} coordinates, group has "
                f"{group.num_generators}", f"basis[{n}].degree",
            )
        basis.append(BasisElement(name, group.degree(degree_raw)))

    alpha_raw = _expect(doc, "alpha", list, "", optional=True)
    alpha = parse_matrix(alpha_raw, "alpha") if alpha_raw is not None else None

    brackets = []
    for n, entry in enumerate(_expect(doc, "brackets", list, "", optional=True, default=[])):
        if not isinstance(entry, dict):
            raise FormatError("bracket entry must be an object", f"brackets[{n}]")
        i = _expect(entry, "i", int, f"brackets[{n}]")
        j = _expect(entry, "j", int, f"brackets[{n}]")
        value = _sparse_value(_expect(entry, "value", list, f"brackets[{n}]"),
                              f"brackets[{n}].value")
        brackets.append((i, j, value))

    try:
        algebra = ColorHomLieAlgebra.from_data(group, eps, basis, brackets, alpha=alpha)
    except StructureError as exc:
        raise FormatError(str(exc), "brackets") from None

    grading_report = algebra.check_grading()
    if not grading_report.passed:
        witness = grading_report.checks[0].witnesses[0]
        raise FormatError(
            f"bracket value off-degree on pair {witness['pair']}", "brackets"
        )
    metadata = _expect(doc, "metadata", dict, "", optional=True, default={})
    return AlgebraDocument(algebra, metadata)


def serialize_algebra(algebra: ColorHomLieAlgebra, metadata: dict | None = None) -> str:
    brackets = []
    for (i, j), vec in sorted(algebra.structure.items()):
        if vec.is_zero():
            continue
        brackets.append({"i": i, "j": j, "value": _format_sparse(vec)})
    doc = {
        "format": ALG_FORMAT,
        "grading": algebra.group.to_dict(),
        "epsilon": format_matrix(algebra.eps.gen_table),
        "basis": [
            {"name": b.name, "degree": list(b.degree.coords)} for b in algebra.basis
        ],
        "alpha": format_matrix(algebra.alpha),
        "brackets": brackets,
        "metadata": metadata or {},
    }
    return canonical_json(doc)


def canonical_json(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def load_algebra(path: str) -> AlgebraDocument:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_algebra(fh.read())


# ---------------------------------------------------------------------------
# cochains
# ---------------------------------------------------------------------------

def parse_cochain(text: str, source: ColorHomLieAlgebra, module: Module) -> GradedCochain:
    doc = _loads(text)
    fmt = _expect(doc, "format", str, "")
    if fmt != COCH_FORMAT:
        raise FormatError(f"unsupported format {fmt!r}, expected {COCH_FORMAT!r}", "format")
    p = _expect(doc, "p", int, "")
    weight_raw = _expect(doc, "weight", list, "", optional=True)
    weight = source.group.degree(weight_raw) if weight_raw is not None else source.group.zero
    cochain = GradedCochain(source, module, p, weight)
    for n, entry in enumerate(_expect(doc, "values", list, "", optional=True, default=[])):
        args = tuple(_expect(entry, "args", list, f"values[{n}]"))
        value = _sparse_value(_expect(entry, "value", list, f"values[{n}]"),
                              f"values[{n}].value")
        try:
            cochain.set_value(args, value)
        except StructureError as exc:
            raise FormatError(str(exc), f"values[{n}]") from None
    return cochain


def serialize_cochain(cochain: GradedCochain) -> str:
    values = [
        {"args": list(key), "value": _format_sparse(vec)}
        for key, vec in sorted(cochain.values.items())
    ]
    doc = {
        "format": COCH_FORMAT,
        "p": cochain.p,
        "weight": list(cochain.weight.coords),
        "values": values,
    }
    return canonical_json(doc)


# ---------------------------------------------------------------------------
# extension data and sequences
# ---------------------------------------------------------------------------

def _resolve(base_path: str, ref: str) -> str:
    return os.path.join(os.path.dirname(os.path.abspath(base_path)), ref)


def load_extension_datum(path: str) -> ExtensionData:
    with open(path, "r", encoding="utf-8") as fh:
        doc = _loads(fh.read())
    fmt = _expect(doc, "format", str, "")
    if fmt != EXT_FORMAT:
        raise FormatError(f"unsupported format {fmt!r}, expected {EXT_FORMAT!r}", "format")
    g = load_algebra(_resolve(path, _expect(doc, "g", str, ""))).algebra
    h = load_algebra(_resolve(path, _expect(doc, "h", str, ""))).algebra
    k = _expect(doc, "k", int, "", optional=True, default=1)
    module = Module.from_algebra(h)
    phi_raw = _expect(doc, "phi", list, "")
    if len(phi_raw) != g.dim:
        raise FormatError(f"phi needs {g.dim} matrices", "phi")
    matrices = [parse_matrix(m, f"phi[{n}]") for n, m in enumerate(phi_raw)]
    try:
        phi = Connection(g, module, matrices, k=k, action_kind="derivation")
    except StructureError as exc:
        raise FormatError(str(exc), "phi") from None
    rho = GradedCochain(g, module, 2, g.group.zero)
    for n, entry in enumerate(_expect(doc, "rho", list, "", optional=True, default=[])):
        args = tuple(_expect(entry, "args", list, f"rho[{n}]"))
        value = _sparse_value(_expect(entry, "value", list, f"rho[{n}]"),
                              f"rho[{n}].value")
        try:
            rho.set_value(args, value)
        except StructureError as exc:
            raise FormatError(str(exc), f"rho[{n}]") from None
    try:
        return ExtensionData(g, h, k, phi, rho)
    except StructureError as exc:
        raise FormatError(str(exc), "") from None


def serialize_extension_datum(data: ExtensionData, g_ref: str, h_ref: str) -> str:
    doc = {
        "format": EXT_FORMAT,
        "g": g_ref,
        "h": h_ref,
        "k": data.k,
        "phi": [format_matrix(m) for m in data.phi.matrices],
        "rho": [
            {"args": list(key), "value": _format_sparse(vec)}
            for key, vec in sorted(data.rho.values.items())
        ],
    }
    return canonical_json(doc)


def load_sequence(path: str) -> ExtensionSequence:
    with open(path, "r", encoding="utf-8") as fh:
        doc = _loads(fh.read())
    fmt = _expect(doc, "format", str, "")
    if fmt != SEQ_FORMAT:
        raise FormatError(f"unsupported format {fmt!r}, expected {SEQ_FORMAT!r}", "format")
    h = load_algebra(_resolve(path, _expect(doc, "h", str, ""))).algebra
    e = load_algebra(_resolve(path, _expect(doc, "e", str, ""))).algebra
    g = load_algebra(_resolve(path, _expect(doc, "g", str, ""))).algebra
    i = parse_matrix(_expect(doc, "i", list, ""), "i")
    p = parse_matrix(_expect(doc, "p", list, ""), "p")
    s_raw = _expect(doc, "s", list, "", optional=True)
    s = parse_matrix(s_raw, "s") if s_raw is not None else None
    return ExtensionSequence(h, e, g, i, p, s)


def serialize_sequence(seq: ExtensionSequence, h_ref: str, e_ref: str, g_ref: str) -> str:
    doc = {
        "format": SEQ_FORMAT,
        "h": h_ref,
        "e": e_ref,
        "g": g_ref,
        "i": format_matrix(seq.i),
        "p": format_matrix(seq.p),
        "s": format_matrix(seq.s) if seq.s is not None else None,
    }
    return canonical_json(doc)


def load_matrix(path: str) -> list:
    with open(path, "r", encoding="utf-8") as fh:
        doc = _loads(fh.read())
    return parse_matrix(doc, "")


def serialize_matrix(m) -> str:
    return canonical_json(format_matrix(m))
