"""Command-line interface.

Every subcommand is a thin wrapper over exactly one library operation and
emits one JSON report on stdout.  Exit codes: 0 when all checks pass and
the computation succeeded, 1 when some verified condition failed (the
report says which), 2 for usage and parse errors.  Reports are
byte-reproducible given ``--no-timing``.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time

from . import fileformat, linalg, testkit
from .algebra import GradedVector, yau_twist
from .cochains import Connection, Module, cohomology_space
from .derivations import candidate_degrees, derivation_family, derivation_space
from .errors import (
    FlatnessError,
    FormatError,
    HomlieError,
    StructureError,
    UnsupportedOperationError,
)
from .extensions import (
    build_extension,
    check_data,
    check_equivalence_by_b,
    check_sequence,
    extract_data,
    obstruction_class,
    parameterize_extensions,
    split_solve,
    split_verify,
)
from .grading import format_scalar


def _digest(path: str) -> str:
    with open(path, "rb") as fh:
        return "sha256:" + hashlib.sha256(fh.read()).hexdigest()


def _vector_dict(vec: GradedVector) -> dict:
    return {str(i): format_scalar(c) for i, c in vec.items()}


def _sparse_entries(cochain) -> list:
    return [
        {"args": list(key), "value": _vector_dict(vec)}
        for key, vec in sorted(cochain.values.items())
    ]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="homlie",
        description="exact computer algebra for graded twisted Lie structures",
    )
    parser.add_argument("--no-timing", action="store_true",
                        help="omit the timing field for byte-identical reports")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--no-timing", action="store_true",
                        default=argparse.SUPPRESS,
                        help="omit the timing field for byte-identical reports")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=(
        lambda **kw: argparse.ArgumentParser(parents=[common], **kw)
    ))

    p = sub.add_parser("validate", help="run every axiom check on an algebra file")
    p.add_argument("algebra")
    p.add_argument("--full-scan", action="store_true",
                   help="check the Jacobi identity on all ordered triples")

    p = sub.add_parser("twist", help="twist an untwisted algebra by a morphism")
    p.add_argument("algebra")
    p.add_argument("--morphism", help="matrix file; defaults to the stored twist")
    p.add_argument("-o", "--output", help="write the twisted algebra here")

    p = sub.add_parser("derive", help="compute twisted derivation spaces")
    p.add_argument("algebra")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--degree", help="comma-separated degree; default: all degrees")

    p = sub.add_parser("center", help="center and twist-fixed center")
    p.add_argument("algebra")

    p = sub.add_parser("cohomology", help="cohomology of a module action")
    p.add_argument("algebra")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--module", choices=["trivial", "center", "self"], default="trivial")
    p.add_argument("--degree", help="weight, comma-separated; default zero")
    p.add_argument("--k", type=int, default=1)

    p = sub.add_parser("extract", help="extract the datum of a sequence and section")
    p.add_argument("sequence")
    p.add_argument("--section", help="matrix file overriding the stored section")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("-o", "--output", help="write the datum here (paths to g/h required)")
    p.add_argument("--g-ref", help="path reference to g for the output datum")
    p.add_argument("--h-ref", help="path reference to h for the output datum")

    p = sub.add_parser("check-data", help="verify the classification identities")
    p.add_argument("datum")

    p = sub.add_parser("build-ext", help="build the extension of a datum")
    p.add_argument("datum")
    p.add_argument("-o", "--output", help="write the built algebra here")
    p.add_argument("--require-multiplicative", action="store_true")

    p = sub.add_parser("equiv", help="check equivalence of two data via a map b")
    p.add_argument("datum1")
    p.add_argument("datum2")
    p.add_argument("--b", required=True, help="matrix file for b : g -> h")

    p = sub.add_parser("split-check", help="verify or solve the splitting equation")
    p.add_argument("datum")
    p.add_argument("--b", help="matrix file with a candidate splitting map")
    p.add_argument("--solve", action="store_true",
                   help="solve for b (abelian coefficients only)")

    p = sub.add_parser("obstruction", help="the degree-3 obstruction class of a lift")
    p.add_argument("datum")

    p = sub.add_parser("classify", help="abelian-coefficient extension classes")
    p.add_argument("g")
    p.add_argument("h")
    p.add_argument("--k", type=int, default=1)

    p = sub.add_parser("generate", help="emit a seeded valid algebra fixture")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--family", default="classical",
                   choices=["abelian", "cocycle", "classical", "yau"])
    p.add_argument("--grading", default="trivial",
                   choices=["trivial", "z2", "z2z2", "z_z2"])
    p.add_argument("--alpha-family", default="identity",
                   choices=["identity", "diagonal", "morphism"])
    p.add_argument("--max-dim", type=int, default=4)
    p.add_argument("-o", "--output", help="write the algebra here")
    return parser


def _parse_degree(group, text):
    if text is None:
        return group.zero
    try:
        coords = [int(x) for x in text.split(",")]
    except ValueError:
        raise FormatError("degree must be comma-separated integers", "--degree") from None
    return group.degree(coords)


class _Session:
    def __init__(self):
        self.inputs: dict[str, str] = {}

    def algebra(self, path):
        self.inputs[path] = _digest(path)
        return fileformat.load_algebra(path)

    def datum(self, path):
        self.inputs[path] = _digest(path)
        data = fileformat.load_extension_datum(path)
        return data

    def sequence(self, path):
        self.inputs[path] = _digest(path)
        return fileformat.load_sequence(path)

    def matrix(self, path):
        self.inputs[path] = _digest(path)
        return fileformat.load_matrix(path)


def _run(args, session: _Session) -> tuple[dict, int]:
    cmd = args.command
    checks: list = []
    data: dict = {}
    exit_code = 0

    if cmd == "validate":
        doc = session.algebra(args.algebra)
        rep = doc.algebra.validate(full_scan=args.full_scan)
        checks = [c.to_dict() for c in rep.checks]
        data["dim"] = doc.algebra.dim
        exit_code = 0 if rep.passed else 1

    elif cmd == "twist":
        doc = session.algebra(args.algebra)
        algebra = doc.algebra
        beta = session.matrix(args.morphism) if args.morphism else algebra.alpha
        if not algebra.has_identity_alpha():
            algebra = fileformat.ColorHomLieAlgebra(
                algebra.group, algebra.eps, algebra.basis, algebra.structure,
                linalg.identity(algebra.dim),
            )
        twisted = yau_twist(algebra, beta)
        rep = twisted.validate()
        checks = [c.to_dict() for c in rep.checks]
        text = fileformat.serialize_algebra(twisted, doc.metadata)
        if args.output:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(text)
            data["output"] = args.output
        else:
            data["algebra"] = json.loads(text)
        exit_code = 0 if rep.passed else 1

    elif cmd == "derive":
        doc = session.algebra(args.algebra)
        algebra = doc.algebra
        if args.degree is not None:
            degree = _parse_degree(algebra.group, args.degree)
            spaces = {degree: derivation_space(algebra, args.k, degree)}
        else:
            spaces = derivation_family(algebra, args.k)
            if not spaces:
                spaces = {}
        data["k"] = args.k
        data["spaces"] = [
            {
                "degree": list(d.coords),
                "dim": space.dim,
                "basis": [fileformat.format_matrix(t.matrix) for t in space.basis],
            }
            for d, space in sorted(spaces.items(), key=lambda kv: kv[0].coords)
        ]
        data["total_dim"] = sum(space.dim for space in spaces.values())

    elif cmd == "center":
        doc = session.algebra(args.algebra)
        data["center"] = [_vector_dict(v) for v in doc.algebra.center()]
        data["fixed_center"] = [_vector_dict(v) for v in doc.algebra.fixed_center()]

    elif cmd == "cohomology":
        doc = session.algebra(args.algebra)
        algebra = doc.algebra
        weight = _parse_degree(algebra.group, args.degree)
        if args.module == "trivial":
            phi = Connection.zero(algebra, Module.trivial(algebra.group, algebra.eps),
                                  k=args.k)
        elif args.module == "center":
            center = algebra.center()
            module = Module.subspace(algebra, center, label="center")
            phi = Connection.zero(algebra, module, k=args.k)
        else:
            phi = Connection.adjoint(algebra, k=args.k)
        space = cohomology_space(phi, args.p, weight)
        data.update({
            "p": args.p,
            "weight": list(weight.coords),
            "module": args.module,
            "dim_cohomology": space.dim,
            "dim_cocycles": space.dim_cocycles,
            "dim_coboundaries": space.dim_coboundaries,
            "representatives": [
                _sparse_entries(c) for c in space.representative_cochains()
            ],
        })

    elif cmd == "extract":
        seq = session.sequence(args.sequence)
        section = session.matrix(args.section) if args.section else None
        rep = check_sequence(seq)
        checks = [c.to_dict() for c in rep.checks]
        if not rep.passed:
            exit_code = 1
        else:
            datum = extract_data(seq, s=section, k=args.k)
            drep = check_data(datum)
            checks += [c.to_dict() for c in drep.checks]
            data["k"] = args.k
            data["phi"] = [fileformat.format_matrix(m) for m in datum.phi.matrices]
            data["rho"] = _sparse_entries(datum.rho)
            if args.output:
                if not (args.g_ref and args.h_ref):
                    raise FormatError("writing a datum needs --g-ref and --h-ref", "-o")
                text = fileformat.serialize_extension_datum(datum, args.g_ref, args.h_ref)
                with open(args.output, "w", encoding="utf-8") as fh:
                    fh.write(text)
                data["output"] = args.output
            exit_code = 0 if drep.passed else 1

    elif cmd == "check-data":
        datum = session.datum(args.datum)
        rep = check_data(datum)
        checks = [c.to_dict() for c in rep.checks]
        exit_code = 0 if rep.passed else 1

    elif cmd == "build-ext":
        datum = session.datum(args.datum)
        rep = check_data(datum)
        checks = [c.to_dict() for c in rep.checks]
        if not rep.passed:
            exit_code = 1
        else:
            seq = build_extension(datum, require_multiplicative=args.require_multiplicative)
            vrep = seq.e.validate()
            checks += [c.to_dict() for c in vrep.checks]
            data["dim"] = seq.e.dim
            text = fileformat.serialize_algebra(seq.e)
            if args.output:
                with open(args.output, "w", encoding="utf-8") as fh:
                    fh.write(text)
                data["output"] = args.output
            else:
                data["algebra"] = json.loads(text)
            exit_code = 0 if vrep.passed else 1

    elif cmd == "equiv":
        d1 = session.datum(args.datum1)
        d2 = session.datum(args.datum2)
        b = session.matrix(args.b)
        ok, residuals = check_equivalence_by_b(d1, d2, b)
        checks = [{"name": "equivalence_by_b", "passed": ok, "witnesses": residuals}]
        exit_code = 0 if ok else 1

    elif cmd == "split-check":
        datum = session.datum(args.datum)
        if args.solve:
            b = split_solve(datum)
            found = b is not None
            checks = [{"name": "split_solvable", "passed": found, "witnesses": []}]
            if found:
                data["b"] = fileformat.format_matrix(b)
            exit_code = 0 if found else 1
        else:
            if not args.b:
                raise FormatError("split-check needs --b or --solve", "--b")
            b = session.matrix(args.b)
            ok = split_verify(datum, b)
            checks = [{"name": "split_witness", "passed": ok, "witnesses": []}]
            exit_code = 0 if ok else 1

    elif cmd == "obstruction":
        datum = session.datum(args.datum)
        result = obstruction_class(datum)
        checks = [c.to_dict() for c in result.report.checks]
        data["lambda"] = _sparse_entries(result.lam)
        data["trivial"] = result.trivial
        if result.witness_nu is not None:
            data["nu"] = _sparse_entries(result.witness_nu)
        exit_code = 0

    elif cmd == "classify":
        gdoc = session.algebra(args.g)
        hdoc = session.algebra(args.h)
        g, h = gdoc.algebra, hdoc.algebra
        module = Module.from_algebra(h)
        phi = Connection.zero(g, module, k=args.k)
        space, representatives = parameterize_extensions(g, h, phi, k=args.k)
        data.update({
            "dim_h2": space.dim,
            "dim_cocycles": space.dim_cocycles,
            "dim_coboundaries": space.dim_coboundaries,
            "representatives": [_sparse_entries(d.rho) for d in representatives],
        })

    elif cmd == "generate":
        cfg = testkit.GeneratorConfig(
            seed=args.seed, max_dim=args.max_dim, grading=args.grading,
            alpha_family=args.alpha_family, family=args.family,
        )
        algebra = testkit.gen_algebra(cfg)
        text = fileformat.serialize_algebra(
            algebra, {"seed": args.seed, "family": args.family}
        )
        if args.output:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(text)
            data["output"] = args.output
        else:
            data["algebra"] = json.loads(text)
        data["dim"] = algebra.dim

    else:  # pragma: no cover - argparse guards this
        raise FormatError(f"unknown command {cmd!r}", "")

    report = {
        "command": cmd,
        "inputs": session.inputs,
        "checks": checks,
        "data": data,
        "passed": exit_code == 0,
    }
    return report, exit_code


def run_command(argv) -> tuple[dict, int]:
    """Parse arguments, run one operation, return (report, exit code)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return {"error": "usage", "detail": "argument parsing failed"}, (
            2 if exc.code else 0
        )
    session = _Session()
    start = time.perf_counter()
    try:
        report, code = _run(args, session)
    except FormatError as exc:
        return {
            "command": args.command, "error": "parse", "detail": str(exc),
            "inputs": session.inputs,
        }, 2
    except (UnsupportedOperationError,) as exc:
        return {
            "command": args.command, "error": "unsupported", "detail": str(exc),
            "inputs": session.inputs,
        }, 2
    except FlatnessError as exc:
        return {
            "command": args.command, "error": "flatness", "detail": str(exc),
            "inputs": session.inputs, "passed": False,
        }, 1
    except (StructureError, HomlieError) as exc:
        return {
            "command": args.command, "error": "check", "detail": str(exc),
            "inputs": session.inputs, "passed": False,
        }, 1
    except OSError as exc:
        return {"command": args.command, "error": "io", "detail": str(exc)}, 2
    if not args.no_timing:
        report["timing_ms"] = round((time.perf_counter() - start) * 1000.0, 3)
    return report, code


def main(argv=None) -> int:
    report, code = run_command(sys.argv[1:] if argv is None else argv)
    print(json.dumps(report, sort_keys=True, indent=2))
    return code


if __name__ == "__main__":
    sys.exit(main())
